//! Phase-space points and thermodynamic state.
//!
//! All quantities are dimensionless: momenta in units of `sqrt(m hbar omega)`,
//! positions in units of `sqrt(hbar / (m omega))`, energies in `hbar omega`.

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_DIM: usize = 3;

fn check_dim(d: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&d) {
        Ok(())
    } else {
        Err(Error::invalid(format!("dimension must be 1, 2 or 3, got {d}")))
    }
}

/// Dimensionless `(P, Q)` coordinates of one particle.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint<T> {
    p: Vec<T>,
    q: Vec<T>,
}

impl<T: Real> PhasePoint<T> {
    pub fn new(p: Vec<T>, q: Vec<T>) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::DimensionMismatch {
                expected: p.len(),
                found: q.len(),
            });
        }
        check_dim(p.len())?;
        if p.iter().chain(q.iter()).any(|x| !x.is_finite()) {
            return Err(Error::invalid("phase point has non-finite components"));
        }
        Ok(Self { p, q })
    }

    pub fn one_d(p: T, q: T) -> Self {
        Self {
            p: vec![p],
            q: vec![q],
        }
    }

    pub fn origin(d: usize) -> Result<Self> {
        Self::new(vec![T::zero(); d], vec![T::zero(); d])
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[T] {
        &self.p
    }

    pub fn q(&self) -> &[T] {
        &self.q
    }

    pub fn p_sq(&self) -> T {
        self.p.iter().map(|&x| x * x).sum()
    }

    pub fn q_sq(&self) -> T {
        self.q.iter().map(|&x| x * x).sum()
    }

    /// `R = P . Q`
    pub fn pq(&self) -> T {
        self.p.iter().zip(&self.q).map(|(&a, &b)| a * b).sum()
    }

    /// Oscillator energy `(P^2 + Q^2) / 2`.
    pub fn energy(&self) -> T {
        (self.p_sq() + self.q_sq()) * T::lit(0.5)
    }

    /// The same point with every momentum component negated.
    pub fn reflect_p(&self) -> Self {
        Self {
            p: self.p.iter().map(|&x| -x).collect(),
            q: self.q.clone(),
        }
    }

    /// The same point with momentum and position exchanged.
    pub fn swap_pq(&self) -> Self {
        Self {
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Boson,
    Fermion,
}

impl Statistics {
    /// `+1` for bosons, `-1` for fermions.
    pub fn sign(self) -> i32 {
        match self {
            Statistics::Boson => 1,
            Statistics::Fermion => -1,
        }
    }

    pub fn from_sign(sign: i32) -> Result<Self> {
        match sign {
            1 => Ok(Statistics::Boson),
            -1 => Ok(Statistics::Fermion),
            _ => Err(Error::invalid(format!("statistics sign must be +1 or -1, got {sign}"))),
        }
    }
}

/// Inverse temperature, fugacity, dimension and statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoState<T> {
    pub beta: T,
    pub z: T,
    pub dim: usize,
    pub stats: Statistics,
}

impl<T: Real> ThermoState<T> {
    pub fn new(beta: T, z: T, dim: usize, stats: Statistics) -> Result<Self> {
        if !(beta > T::zero()) || !beta.is_finite() {
            return Err(Error::invalid(format!("beta must be positive and finite, got {beta}")));
        }
        if !(z > T::zero()) || !z.is_finite() {
            return Err(Error::invalid(format!("fugacity must be positive and finite, got {z}")));
        }
        check_dim(dim)?;
        Ok(Self {
            beta,
            z,
            dim,
            stats,
        })
    }

    pub fn boson_1d(beta: T, z: T) -> Result<Self> {
        Self::new(beta, z, 1, Statistics::Boson)
    }

    pub fn with_stats(self, stats: Statistics) -> Self {
        Self { stats, ..self }
    }

    pub fn with_beta(self, beta: T) -> Result<Self> {
        Self::new(beta, self.z, self.dim, self.stats)
    }

    pub fn sign(&self) -> i32 {
        self.stats.sign()
    }

    /// Largest fugacity for which the ideal oscillator loop sum converges,
    /// `exp(d * beta / 2)`.
    pub fn fugacity_bound(&self) -> T {
        (T::from_count(self.dim) * self.beta * T::lit(0.5)).exp()
    }

    pub fn check_convergence(&self) -> Result<()> {
        let bound = self.fugacity_bound();
        if self.z < bound {
            Ok(())
        } else {
            Err(Error::Divergence {
                z: self.z.as_f64(),
                bound: bound.as_f64(),
            })
        }
    }

    pub(crate) fn check_point(&self, pt: &PhasePoint<T>) -> Result<()> {
        if pt.dim() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: pt.dim(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_states() {
        assert!(ThermoState::<f64>::new(0.0, 1.0, 1, Statistics::Boson).is_err());
        assert!(ThermoState::<f64>::new(1.0, -1.0, 1, Statistics::Boson).is_err());
        assert!(ThermoState::<f64>::new(1.0, 1.0, 4, Statistics::Boson).is_err());
        assert!(PhasePoint::<f64>::new(vec![1.0], vec![1.0, 2.0]).is_err());
        assert!(PhasePoint::<f64>::new(vec![f64::NAN], vec![1.0]).is_err());
    }

    #[test]
    fn divergence_guard_names_bound() {
        let ts = ThermoState::boson_1d(1.0, 2.0).unwrap();
        match ts.check_convergence() {
            Err(Error::Divergence { bound, .. }) => assert!((bound - 0.5f64.exp()).abs() < 1e-15),
            other => panic!("expected divergence error, got {other:?}"),
        }
        assert!(ThermoState::boson_1d(1.0, 1.0).unwrap().check_convergence().is_ok());
    }

    #[test]
    fn invariants_of_a_point() {
        let pt = PhasePoint::new(vec![1.0, 2.0], vec![3.0, -1.0]).unwrap();
        assert_eq!(pt.p_sq(), 5.0);
        assert_eq!(pt.q_sq(), 10.0);
        assert_eq!(pt.pq(), 1.0);
        assert_eq!(pt.energy(), 7.5);
    }
}
