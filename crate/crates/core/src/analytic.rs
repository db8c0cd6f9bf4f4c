//! Closed forms for the ideal oscillator gas.

use crate::error::{Error, Result};
use crate::scalar::{loop_sign, Real};
use crate::state::ThermoState;

/// Highest loop length summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LoopOrder(usize);

impl LoopOrder {
    pub const MAX: usize = 10_000;

    pub fn new(l_max: usize) -> Result<Self> {
        if (1..=Self::MAX).contains(&l_max) {
            Ok(Self(l_max))
        } else {
            Err(Error::invalid(format!("loop order must be in 1..={}, got {l_max}", Self::MAX)))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl Default for LoopOrder {
    fn default() -> Self {
        Self(50)
    }
}

/// Single-oscillator partition function `e^{-l beta/2} / (1 - e^{-l beta})` at `l beta`.
fn partition_1d<T: Real>(lb: T) -> T {
    (-lb * T::lit(0.5)).exp() / -(-lb).exp_m1()
}

/// `-beta Omega_l`, one loop term, signed.
pub fn loop_term_grand_potential<T: Real>(ts: &ThermoState<T>, l: usize) -> T {
    let lf = T::from_count(l);
    let z = ts.z.powi(l as i32);
    loop_sign::<T>(ts.sign(), l) * z / lf * partition_1d(lf * ts.beta).powi(ts.dim as i32)
}

/// `<H>_l`, one loop term of the average energy, signed.
pub fn loop_term_energy<T: Real>(ts: &ThermoState<T>, l: usize) -> T {
    let lb = T::from_count(l) * ts.beta;
    let d = ts.dim as i32;
    let denom = -(-lb).exp_m1();
    let shape = ((-lb * T::lit(0.5)).exp() + (-lb * T::lit(1.5)).exp()) / (denom * denom);
    loop_sign::<T>(ts.sign(), l)
        * ts.z.powi(l as i32)
        * T::from_count(ts.dim)
        * T::lit(0.5)
        * partition_1d(lb).powi(d - 1)
        * shape
}

/// `-beta Omega = sum_{l <= l_max} (+-1)^(l-1) z^l / l [e^{-l beta/2}/(1 - e^{-l beta})]^d`.
pub fn grand_potential_ideal_sho<T: Real>(ts: &ThermoState<T>, l_max: LoopOrder) -> Result<T> {
    ts.check_convergence()?;
    Ok((1..=l_max.0).map(|l| loop_term_grand_potential(ts, l)).sum())
}

/// Largest quantum number per axis for which the neglected Boltzmann factor
/// is still above `1e-14`.
pub fn default_n_cap<T: Real>(beta: T) -> usize {
    let cap = (T::lit(1e14).ln() / beta).ceil();
    cap.to_usize().unwrap_or(usize::MAX).max(1)
}

/// `-+ sum_n ln(1 -+ z e^{-beta (d/2 + |n|)})` over the lattice `[0, n_cap]^d`.
pub fn grand_potential_textbook<T: Real>(ts: &ThermoState<T>, n_cap: usize) -> Result<T> {
    ts.check_convergence()?;
    let s = T::lit(ts.sign() as f64);
    let d = ts.dim;
    // multiplicity of total level N on the cube [0, n_cap]^d
    let mut counts = vec![1u64; n_cap + 1];
    for _ in 1..d {
        let mut next = vec![0u64; counts.len() + n_cap];
        for (n, &c) in counts.iter().enumerate() {
            for slot in &mut next[n..=n + n_cap] {
                *slot += c;
            }
        }
        counts = next;
    }
    let mut total = T::zero();
    for (n, &mult) in counts.iter().enumerate() {
        let energy = T::from_count(d) * T::lit(0.5) + T::from_count(n);
        let x = ts.z * (-ts.beta * energy).exp();
        total = total - s * T::lit(mult as f64) * (-s * x).ln_1p();
    }
    Ok(total)
}

/// `E = sum_{l <= l_max} <H>_l`.
pub fn average_energy_ideal_sho<T: Real>(ts: &ThermoState<T>, l_max: LoopOrder) -> Result<T> {
    ts.check_convergence()?;
    Ok((1..=l_max.0).map(|l| loop_term_energy(ts, l)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::Statistics;

    fn ts(beta: f64, z: f64, d: usize, stats: Statistics) -> ThermoState<f64> {
        ThermoState::new(beta, z, d, stats).unwrap()
    }

    #[test]
    fn monomer_and_dimer_at_high_temperature() {
        let t = ts(0.2, 1.0, 1, Statistics::Boson);
        let mono = grand_potential_ideal_sho(&t, LoopOrder::new(1).unwrap()).unwrap();
        assert!((mono - 4.991676378648053).abs() < 1e-12);
        assert!((loop_term_grand_potential(&t, 2) - 1.2417053922).abs() < 1e-9);
    }

    #[test]
    fn monomer_energy_by_hand() {
        let t = ts(1.0, 1.0, 1, Statistics::Boson);
        let e = loop_term_energy(&t, 1);
        let hand = 0.5 * ((-0.5f64).exp() + (-1.5f64).exp()) / (1.0 - (-1.0f64).exp()).powi(2);
        assert!((e - hand).abs() < 1e-14);
        // zero-point energy per particle at low temperature
        let cold = ts(40.0, 1.0, 1, Statistics::Boson);
        let per = loop_term_energy(&cold, 1) / loop_term_grand_potential(&cold, 1);
        assert!((per - 0.5).abs() < 1e-12);
    }

    #[test]
    fn textbook_lattice_matches_loops_in_two_dimensions() {
        for stats in [Statistics::Boson, Statistics::Fermion] {
            let t = ts(1.3, 0.7, 2, stats);
            let a = grand_potential_textbook(&t, default_n_cap(1.3)).unwrap();
            let b = grand_potential_ideal_sho(&t, LoopOrder::new(200).unwrap()).unwrap();
            assert!((a - b).abs() < 1e-10, "{stats:?}: {a} vs {b}");
        }
    }

    #[test]
    fn divergence_is_reported() {
        let t = ts(1.0, 2.0, 1, Statistics::Boson);
        assert!(matches!(
            grand_potential_ideal_sho(&t, LoopOrder::default()),
            Err(Error::Divergence { .. })
        ));
        assert!(grand_potential_textbook(&t, 10).is_err());
        assert!(LoopOrder::new(0).is_err());
        assert!(LoopOrder::new(10_001).is_err());
    }
}
