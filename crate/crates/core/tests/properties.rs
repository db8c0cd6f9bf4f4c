use proptest::collection::vec;
use proptest::prelude::*;

use qsm_core::commutation::{weighted_w, WMethod};
use qsm_core::meanfield::{build_local_modes, per_particle_energy, total_energy, LennardJones};
use qsm_core::special::{hermite_function, HermiteOrder};
use qsm_core::{eta_loop, LoopConfiguration, PhasePoint, Statistics, ThermoState};

fn loop_points(max_len: usize) -> impl Strategy<Value = Vec<PhasePoint<f64>>> {
    (1..=3usize).prop_flat_map(move |d| {
        vec(
            (vec(-6.0..6.0f64, d), vec(-6.0..6.0f64, d)).prop_map(|(p, q)| PhasePoint::new(p, q).unwrap()),
            1..=max_len,
        )
    })
}

/// Value and the same sum with every term made positive, which bounds the
/// cancellation error of the explicit sum.
fn direct_hermite(n: usize, x: f64) -> (f64, f64) {
    // H_n by its explicit sum, then the Gaussian and normalization
    let mut h = 0.0;
    let mut scale = 0.0;
    let mut fact = vec![1.0f64; n + 1];
    for k in 1..=n {
        fact[k] = fact[k - 1] * k as f64;
    }
    for m in 0..=n / 2 {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let t = fact[n] / (fact[m] * fact[n - 2 * m]) * (2.0 * x).powi((n - 2 * m) as i32);
        h += sign * t;
        scale += t.abs();
    }
    let norm = (2f64.powi(n as i32) * fact[n] * std::f64::consts::PI.sqrt()).sqrt();
    let g = (-x * x / 2.0).exp() / norm;
    (h * g, scale * g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn eta_is_a_pure_phase(pts in loop_points(6)) {
        for stats in [Statistics::Boson, Statistics::Fermion] {
            let cfg = LoopConfiguration::new(pts.clone(), stats).unwrap();
            prop_assert!((eta_loop(&cfg).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn fermion_loop_differs_by_sign(pts in loop_points(6)) {
        let b = eta_loop(&LoopConfiguration::new(pts.clone(), Statistics::Boson).unwrap());
        let f = eta_loop(&LoopConfiguration::new(pts.clone(), Statistics::Fermion).unwrap());
        let s = if pts.len() % 2 == 1 { 1.0 } else { -1.0 };
        prop_assert!((f - b * s).norm() < 1e-14);
    }

    #[test]
    fn negated_momenta_conjugate_eta(pts in loop_points(6)) {
        let cfg = LoopConfiguration::new(pts.clone(), Statistics::Fermion).unwrap();
        let flipped = LoopConfiguration::new(pts.iter().map(PhasePoint::reflect_p).collect(), Statistics::Fermion).unwrap();
        prop_assert!((eta_loop(&flipped) - eta_loop(&cfg).conj()).norm() < 1e-13);
    }

    #[test]
    fn eta_is_cyclic(pts in loop_points(6), k in 0..6usize) {
        let cfg = LoopConfiguration::new(pts, Statistics::Boson).unwrap();
        prop_assert!((eta_loop(&cfg.rotated(k)) - eta_loop(&cfg)).norm() < 1e-12);
    }

    #[test]
    fn weighted_w_is_symmetric_in_p_and_q(
        pq in (1..=3usize).prop_flat_map(|d| (vec(-3.0..3.0f64, d), vec(-3.0..3.0f64, d))),
        beta in 0.1..3.0f64,
        which in 0..3usize,
    ) {
        let pt = PhasePoint::new(pq.0, pq.1).unwrap();
        let ts = ThermoState::new(beta, 1.0, pt.dim(), Statistics::Boson).unwrap();
        let m = [WMethod::exact(), WMethod::BigW { order: 5 }, WMethod::SmallW { order: 4 }][which];
        let a = weighted_w(&pt, &ts, &m).unwrap();
        let b = weighted_w(&pt.swap_pq(), &ts, &m).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-3), "{a} vs {b}");
    }

    #[test]
    fn imaginary_part_is_odd_in_momentum(p in -3.0..3.0f64, q in -3.0..3.0f64, beta in 0.1..3.0f64) {
        let ts = ThermoState::boson_1d(beta, 1.0).unwrap();
        for m in [WMethod::exact(), WMethod::BigW { order: 5 }, WMethod::SmallW { order: 4 }] {
            let a = weighted_w(&PhasePoint::one_d(p, q), &ts, &m).unwrap();
            let b = weighted_w(&PhasePoint::one_d(-p, q), &ts, &m).unwrap();
            prop_assert!((a.im + b.im).abs() <= 1e-13 * a.norm().max(1e-3));
            prop_assert!((a.re - b.re).abs() <= 1e-13 * a.norm().max(1e-3));
        }
    }

    #[test]
    fn recurrence_matches_direct_formula(n in 0..=15usize, x in -5.0..5.0f64) {
        let a = hermite_function(HermiteOrder::new(n).unwrap(), x);
        let (b, scale) = direct_hermite(n, x);
        prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(scale).max(1e-3), "n={n} x={x}: {a} vs {b}");
    }

    #[test]
    fn hermite_functions_stay_finite(n in 0..=512usize, x in -40.0..40.0f64) {
        prop_assert!(hermite_function(HermiteOrder::new(n).unwrap(), x).is_finite());
    }

    #[test]
    fn per_particle_energies_add_up(
        cfg in (1..=3usize).prop_flat_map(|d| vec(vec(-4.0..4.0f64, d), 1..=6)),
        k in 0.0..2.0f64,
    ) {
        let lj = LennardJones::new(cfg[0].len(), k);
        let sum: f64 = (0..cfg.len()).map(|j| per_particle_energy(&lj, &cfg, j)).sum();
        let total = total_energy(&lj, &cfg);
        prop_assert!((sum - total).abs() <= 1e-12 * total.abs().max(1.0));
    }

    #[test]
    fn valid_modes_have_positive_frequencies(
        cfg in vec(-3.0..3.0f64, 1..=5),
        k in 0.0..1.0f64,
    ) {
        let cfg: Vec<Vec<f64>> = cfg.into_iter().map(|x| vec![x]).collect();
        let modes = build_local_modes(&LennardJones::new(1, k), &cfg, 1e-10, 20).unwrap();
        for m in modes.iter().filter(|m| m.is_valid()) {
            prop_assert!(m.freqs.iter().all(|&w| w > 0.0));
        }
    }
}
