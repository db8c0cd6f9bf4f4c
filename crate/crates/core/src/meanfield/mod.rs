//! Local harmonic approximation for interacting particles.
//!
//! Each particle is expanded to second order about the nearest minimum of its
//! share of the potential, the others held fixed. The commutation weight then
//! factorizes over the resulting independent oscillator modes.

mod eigen;
mod potential;

pub use eigen::{hessian_eigen, SymmetricEigen};
pub use potential::{
    per_particle_energy, test_particle_energy, test_particle_grad, test_particle_hess, total_energy, LennardJones,
    PotentialModel,
};

use num_complex::Complex;
use rayon::prelude::*;

use crate::commutation::{axis_weight_unphased, SeriesTruncation};
use crate::error::{Error, Result};
use crate::scalar::{cis, Real};
use crate::state::ThermoState;

pub const NEWTON_TOL: f64 = 1e-10;
pub const NEWTON_MAX_ITER: usize = 20;
/// Largest accepted distance between a particle and its local minimum.
pub const MAX_DISPLACEMENT: f64 = 2.0;
/// Iterates further than this from the start count as diverged.
pub const DIVERGENCE_RADIUS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeStatus {
    Valid,
    NotConverged,
    SingularHessian,
    NonPositiveCurvature,
    TooFar,
}

/// Outcome of [`newton_local_min`].
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonResult<T> {
    pub q_bar: Vec<T>,
    pub converged: bool,
    pub singular: bool,
    pub iterations: usize,
    /// Gradient norms, one per iterate including the start.
    pub residuals: Vec<T>,
}

fn norm<T: Real>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

/// Newton iteration on `U_j(r; q)` starting from `r = q_j`.
pub fn newton_local_min<T: Real, M: PotentialModel<T> + ?Sized>(
    model: &M,
    config: &[Vec<T>],
    j: usize,
    tol: T,
    max_iter: usize,
) -> Result<NewtonResult<T>> {
    check_config(model, config)?;
    if j >= config.len() {
        return Err(Error::invalid(format!("particle index {j} out of range")));
    }
    let d = model.dim();
    let start = config[j].clone();
    let mut r = start.clone();
    let mut g = test_particle_grad(model, config, j, &r);
    let mut residuals = vec![norm(&g)];
    let mut out = NewtonResult {
        q_bar: r.clone(),
        converged: false,
        singular: false,
        iterations: 0,
        residuals: Vec::new(),
    };
    for it in 0..=max_iter {
        if *residuals.last().unwrap() < tol {
            out.converged = true;
            out.iterations = it;
            break;
        }
        if it == max_iter {
            out.iterations = it;
            break;
        }
        let h = test_particle_hess(model, config, j, &r);
        let eig = hessian_eigen(&h, d)?;
        let scale = eig.values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let floor = T::lit(1e-12).max(T::epsilon() * T::lit(16.0)) * scale.max(T::one());
        if eig.values.iter().any(|v| v.abs() <= floor) {
            out.singular = true;
            out.iterations = it;
            break;
        }
        let step = eig.apply_fn(&g, |l| T::one() / l);
        for (x, s) in r.iter_mut().zip(step) {
            *x = *x - s;
        }
        let moved: Vec<T> = r.iter().zip(&start).map(|(&a, &b)| a - b).collect();
        if !(norm(&moved) <= T::lit(DIVERGENCE_RADIUS)) {
            out.iterations = it + 1;
            break;
        }
        g = test_particle_grad(model, config, j, &r);
        residuals.push(norm(&g));
    }
    out.q_bar = r;
    out.residuals = residuals;
    Ok(out)
}

/// Harmonic data of one particle about its local minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMode<T> {
    pub q_bar: Vec<T>,
    /// `U_j` at the minimum, or at the actual position for invalid modes.
    pub u_bar: T,
    pub eigvals: Vec<T>,
    /// Columns are the normal-mode directions.
    pub eigvecs: Vec<T>,
    pub freqs: Vec<T>,
    pub status: ModeStatus,
}

impl<T: Real> LocalMode<T> {
    pub fn is_valid(&self) -> bool {
        self.status == ModeStatus::Valid
    }

    pub fn dim(&self) -> usize {
        self.q_bar.len()
    }

    fn eigen(&self) -> SymmetricEigen<T> {
        SymmetricEigen {
            values: self.eigvals.clone(),
            vectors: self.eigvecs.clone(),
        }
    }
}

fn check_config<T, M: PotentialModel<T> + ?Sized>(model: &M, config: &[Vec<T>]) -> Result<()> {
    if config.is_empty() {
        return Err(Error::invalid("configuration has no particles"));
    }
    for q in config {
        if q.len() != model.dim() {
            return Err(Error::DimensionMismatch {
                expected: model.dim(),
                found: q.len(),
            });
        }
    }
    Ok(())
}

fn local_mode<T: Real, M: PotentialModel<T> + ?Sized>(
    model: &M,
    config: &[Vec<T>],
    j: usize,
    tol: T,
    max_iter: usize,
) -> Result<LocalMode<T>> {
    let d = model.dim();
    let nr = newton_local_min(model, config, j, tol, max_iter)?;
    let h = test_particle_hess(model, config, j, &nr.q_bar);
    let eig = hessian_eigen(&h, d)?;
    let shift: Vec<T> = nr.q_bar.iter().zip(&config[j]).map(|(&a, &b)| a - b).collect();
    let status = if nr.singular {
        ModeStatus::SingularHessian
    } else if !nr.converged {
        ModeStatus::NotConverged
    } else if eig.values.iter().any(|&v| v <= T::zero()) {
        ModeStatus::NonPositiveCurvature
    } else if norm(&shift) > T::lit(MAX_DISPLACEMENT) {
        ModeStatus::TooFar
    } else {
        ModeStatus::Valid
    };
    let u_bar = if status == ModeStatus::Valid {
        test_particle_energy(model, config, j, &nr.q_bar)
    } else {
        per_particle_energy(model, config, j)
    };
    let freqs = eig.values.iter().map(|&v| v.max(T::zero()).sqrt()).collect();
    Ok(LocalMode {
        q_bar: nr.q_bar,
        u_bar,
        eigvals: eig.values,
        eigvecs: eig.vectors,
        freqs,
        status,
    })
}

/// One [`LocalMode`] per particle, in parallel.
pub fn build_local_modes<T: Real, M: PotentialModel<T> + ?Sized>(
    model: &M,
    config: &[Vec<T>],
    tol: T,
    max_iter: usize,
) -> Result<Vec<LocalMode<T>>> {
    check_config(model, config)?;
    (0..config.len())
        .into_par_iter()
        .map(|j| local_mode(model, config, j, tol, max_iter))
        .collect()
}

/// `prod_k exp(-beta U_k) W_k` for the harmonic modes at momenta `momenta`.
///
/// Mode `alpha` of particle `j` uses `P = (X^T p)_alpha / sqrt(omega)` and
/// `Q = sqrt(omega) (X^T (q - q_bar))_alpha` at inverse temperature
/// `beta omega`; the phase `exp(-i q.p)` is taken in the original
/// coordinates. Invalid modes contribute `exp(-beta (U_j + p^2/2))`.
pub fn meanfield_weight<T: Real>(
    modes: &[LocalMode<T>],
    config: &[Vec<T>],
    momenta: &[Vec<T>],
    ts: &ThermoState<T>,
    tr: &SeriesTruncation<T>,
) -> Result<Complex<T>> {
    if modes.len() != config.len() || momenta.len() != config.len() {
        return Err(Error::DimensionMismatch {
            expected: config.len(),
            found: if modes.len() != config.len() {
                modes.len()
            } else {
                momenta.len()
            },
        });
    }
    let mut total = Complex::new(T::one(), T::zero());
    for ((mode, q), p) in modes.iter().zip(config).zip(momenta) {
        let d = mode.dim();
        if q.len() != d || p.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: if q.len() != d { q.len() } else { p.len() },
            });
        }
        let beta = ts.beta;
        if !mode.is_valid() {
            let kinetic = T::lit(0.5) * p.iter().map(|&x| x * x).sum::<T>();
            total = total * (-beta * (mode.u_bar + kinetic)).exp();
            continue;
        }
        let eig = mode.eigen();
        let dq: Vec<T> = q.iter().zip(&mode.q_bar).map(|(&a, &b)| a - b).collect();
        let pm = eig.to_modes(p);
        let qm = eig.to_modes(&dq);
        let mut factor = Complex::new((-beta * mode.u_bar).exp(), T::zero());
        for a in 0..d {
            let w = mode.freqs[a];
            let sw = w.sqrt();
            factor = factor * axis_weight_unphased(pm[a] / sw, qm[a] * sw, beta * w, tr);
        }
        let qp = q.iter().zip(p).map(|(&a, &b)| a * b).sum::<T>();
        total = total * factor * cis(-qp);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commutation::weighted_w_energy_series;
    use crate::state::PhasePoint;

    /// `u1 = sum_a k_a q_a^2 / 2` with optional springs `c (a - b)^2 / 2`.
    struct Quadratic {
        k: Vec<f64>,
        centre: Vec<f64>,
        spring: f64,
    }

    impl PotentialModel<f64> for Quadratic {
        fn dim(&self) -> usize {
            self.k.len()
        }
        fn one_body(&self, q: &[f64]) -> f64 {
            q.iter().zip(&self.k).zip(&self.centre).map(|((x, k), c)| 0.5 * k * (x - c).powi(2)).sum()
        }
        fn one_body_grad(&self, q: &[f64]) -> Vec<f64> {
            q.iter().zip(&self.k).zip(&self.centre).map(|((x, k), c)| k * (x - c)).collect()
        }
        fn one_body_hess(&self, _: &[f64]) -> Vec<f64> {
            let d = self.dim();
            (0..d * d).map(|i| if i / d == i % d { self.k[i / d] } else { 0.0 }).collect()
        }
        fn two_body(&self, a: &[f64], b: &[f64]) -> f64 {
            0.5 * self.spring * a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>()
        }
        fn two_body_grad(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| self.spring * (x - y)).collect()
        }
        fn two_body_hess(&self, _: &[f64], _: &[f64]) -> Vec<f64> {
            let d = self.dim();
            (0..d * d).map(|i| if i / d == i % d { self.spring } else { 0.0 }).collect()
        }
    }

    struct DoubleWell;

    impl PotentialModel<f64> for DoubleWell {
        fn dim(&self) -> usize {
            1
        }
        fn one_body(&self, q: &[f64]) -> f64 {
            0.25 * (q[0] * q[0] - 1.0).powi(2)
        }
        fn one_body_grad(&self, q: &[f64]) -> Vec<f64> {
            vec![q[0].powi(3) - q[0]]
        }
        fn one_body_hess(&self, q: &[f64]) -> Vec<f64> {
            vec![3.0 * q[0] * q[0] - 1.0]
        }
        fn two_body(&self, _: &[f64], _: &[f64]) -> f64 {
            0.0
        }
        fn two_body_grad(&self, _: &[f64], _: &[f64]) -> Vec<f64> {
            vec![0.0]
        }
        fn two_body_hess(&self, _: &[f64], _: &[f64]) -> Vec<f64> {
            vec![0.0]
        }
    }

    fn sho(d: usize) -> Quadratic {
        Quadratic {
            k: vec![1.0; d],
            centre: vec![0.0; d],
            spring: 0.0,
        }
    }

    #[test]
    fn newton_is_exact_on_quadratics() {
        let m = Quadratic {
            k: vec![2.0, 0.5],
            centre: vec![0.3, -1.1],
            spring: 0.7,
        };
        let cfg = vec![vec![1.4, 0.2], vec![-0.5, 0.9]];
        let r = newton_local_min(&m, &cfg, 0, 1e-10, 20).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 1);
        assert!(r.residuals[1] < 1e-14);
    }

    #[test]
    fn double_well_minimum_and_quadratic_convergence() {
        let r = newton_local_min(&DoubleWell, &[vec![0.8]], 0, 1e-10, 20).unwrap();
        assert!(r.converged);
        assert!((r.q_bar[0] - 1.0).abs() < 1e-10);
        for w in r.residuals.windows(2) {
            if w[0] < 0.1 && w[1] > 0.0 {
                assert!(w[1] / (w[0] * w[0]) < 5.0);
            }
        }
    }

    #[test]
    fn double_well_maximum_is_invalid() {
        let modes = build_local_modes(&DoubleWell, &[vec![0.0]], 1e-10, 20).unwrap();
        assert_eq!(modes[0].status, ModeStatus::NonPositiveCurvature);
    }

    #[test]
    fn flat_potential_is_singular() {
        let flat = Quadratic {
            k: vec![0.0],
            centre: vec![0.0],
            spring: 0.0,
        };
        let cfg = vec![vec![5.0]];
        let modes = build_local_modes(&flat, &cfg, 1e-10, 20).unwrap();
        assert!(!modes[0].is_valid());
        let ts = ThermoState::boson_1d(0.7, 1.0).unwrap();
        let w = meanfield_weight(&modes, &cfg, &[vec![0.4]], &ts, &SeriesTruncation::adaptive()).unwrap();
        assert!((w.re - (-0.7f64 * 0.08).exp()).abs() < 1e-15);
        assert_eq!(w.im, 0.0);
    }

    #[test]
    fn single_sho_particle() {
        let modes = build_local_modes(&sho(1), &[vec![0.7]], 1e-10, 20).unwrap();
        let m = &modes[0];
        assert!(m.is_valid());
        assert!(m.q_bar[0].abs() < 1e-15);
        assert!(m.u_bar.abs() < 1e-15);
        assert!((m.freqs[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exact_sho_equivalence() {
        let tr = SeriesTruncation::adaptive();
        for d in 1..=3 {
            let ts = ThermoState::new(1.3, 1.0, d, crate::state::Statistics::Boson).unwrap();
            let q: Vec<f64> = (0..d).map(|a| 0.4 - 0.3 * a as f64).collect();
            let p: Vec<f64> = (0..d).map(|a| -0.7 + 0.5 * a as f64).collect();
            let modes = build_local_modes(&sho(d), &[q.clone()], 1e-10, 20).unwrap();
            let w = meanfield_weight(&modes, &[q.clone()], &[p.clone()], &ts, &tr).unwrap();
            let exact = weighted_w_energy_series(&PhasePoint::new(p, q).unwrap(), &ts, &tr).unwrap();
            assert!((w - exact).norm() < 1e-12, "d={d}: {w} vs {exact}");
        }
    }

    #[test]
    fn two_uncoupled_oscillators_factorize() {
        let m = Quadratic {
            k: vec![1.0, 4.0],
            centre: vec![0.0, 0.0],
            spring: 0.0,
        };
        let tr = SeriesTruncation::adaptive();
        let beta = 0.9;
        let ts = ThermoState::new(beta, 1.0, 2, crate::state::Statistics::Boson).unwrap();
        let (q, p) = (vec![0.3, -0.2], vec![0.5, 0.8]);
        let modes = build_local_modes(&m, &[q.clone()], 1e-10, 20).unwrap();
        assert_eq!(modes[0].freqs, vec![1.0, 2.0]);
        let w = meanfield_weight(&modes, &[q.clone()], &[p.clone()], &ts, &tr).unwrap();
        // each mode is an SHO of frequency omega: rescale to unit frequency
        let one = |omega: f64, p: f64, q: f64| {
            let s = omega.sqrt();
            let ts1 = ThermoState::boson_1d(beta * omega, 1.0).unwrap();
            let pt = PhasePoint::one_d(p / s, q * s);
            weighted_w_energy_series(&pt, &ts1, &tr).unwrap()
        };
        let oracle = one(1.0, p[0], q[0]) * one(2.0, p[1], q[1]);
        assert!((w - oracle).norm() < 1e-13, "{w} vs {oracle}");
    }

    #[test]
    fn lennard_jones_dimer_at_equilibrium() {
        let lj = LennardJones::<f64>::new(1, 0.0);
        let r0 = lj.equilibrium_spacing();
        let cfg = vec![vec![0.0], vec![r0]];
        let modes = build_local_modes(&lj, &cfg, 1e-10, 20).unwrap();
        for m in &modes {
            assert!(m.is_valid());
            assert!((m.u_bar + 0.5).abs() < 1e-12);
            // half of u'' at the minimum
            assert!((m.eigvals[0] - 0.5 * 57.146).abs() < 1e-3);
        }
        let g = test_particle_grad(&lj, &cfg, 0, &cfg[0]);
        assert!(g[0].abs() < 1e-10);
    }

    #[test]
    fn ejected_particle_gets_unit_commutation() {
        let lj = LennardJones::<f64>::new(1, 0.0);
        let cfg = vec![vec![0.0], vec![1.12], vec![40.0]];
        let modes = build_local_modes(&lj, &cfg, 1e-10, 20).unwrap();
        assert!(!modes[2].is_valid());
    }

    #[test]
    fn mismatched_inputs_are_rejected() {
        let modes = build_local_modes(&sho(1), &[vec![0.1]], 1e-10, 20).unwrap();
        let ts = ThermoState::boson_1d(1.0, 1.0).unwrap();
        let tr = SeriesTruncation::adaptive();
        assert!(meanfield_weight(&modes, &[vec![0.1], vec![0.2]], &[vec![0.0]], &ts, &tr).is_err());
        assert!(meanfield_weight(&modes, &[vec![0.1, 0.2]], &[vec![0.0, 0.0]], &ts, &tr).is_err());
    }
}
