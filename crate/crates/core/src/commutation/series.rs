//! Energy-eigenstate series for the oscillator commutation function.
//!
//! Per axis the weighted commutation function is
//!
//! ```text
//! exp(-i P Q) sum_n exp(-beta (n + 1/2)) i^n sqrt(2 pi) phi_n(P) phi_n(Q)
//! ```
//!
//! and the d-dimensional value is the product over axes.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{cis, Real};
use crate::special::{hermite_functions, HermiteFunctions, HERMITE_ORDER_CAP};
use crate::state::{PhasePoint, ThermoState};

/// Where to stop the energy series.
///
/// `n_max` is the highest quantum number included. With a tail tolerance the
/// sum also stops once three consecutive terms fall below it, but never before
/// the turning point `n >= max(P^2, Q^2) / 2` where the Hermite functions are
/// still exponentially small.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTruncation<T> {
    n_max: usize,
    tail_tol: Option<T>,
}

impl<T: Real> SeriesTruncation<T> {
    pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

    pub fn new(n_max: usize, tail_tol: T) -> Result<Self> {
        if n_max > HERMITE_ORDER_CAP {
            return Err(Error::HermiteOrderTooLarge(n_max));
        }
        if !(tail_tol > T::zero()) || !tail_tol.is_finite() {
            return Err(Error::invalid(format!("tail tolerance must be positive, got {tail_tol}")));
        }
        Ok(Self {
            n_max,
            tail_tol: Some(tail_tol),
        })
    }

    /// Exactly the terms `0..=n_max`, no early stop.
    pub fn fixed(n_max: usize) -> Result<Self> {
        if n_max > HERMITE_ORDER_CAP {
            return Err(Error::HermiteOrderTooLarge(n_max));
        }
        Ok(Self {
            n_max,
            tail_tol: None,
        })
    }

    /// Adaptive stop at the default tolerance, capped at the Hermite order limit.
    pub fn adaptive() -> Self {
        Self {
            n_max: HERMITE_ORDER_CAP,
            tail_tol: Some(T::lit(Self::DEFAULT_TAIL_TOL)),
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn tail_tol(&self) -> Option<T> {
        self.tail_tol
    }

    /// Highest index the adaptive rule can reach for points with
    /// `max(P^2, Q^2) <= r2`.
    pub(crate) fn reach(&self, beta: T, r2: T, energy: bool) -> usize {
        let Some(tol) = self.tail_tol else {
            return self.n_max;
        };
        let guard = turning_index(r2);
        // |term| <= sqrt(2) exp(-beta (n + 1/2)) [n + 1/2]
        let root2 = T::lit(2.0).sqrt();
        let mut n = 0;
        while n < self.n_max {
            let e = T::from_count(n) + T::lit(0.5);
            let bound = root2 * (-beta * e).exp() * if energy { e } else { T::one() };
            if bound < tol {
                break;
            }
            n += 1;
        }
        self.n_max.min(n.max(guard) + 3)
    }
}

fn turning_index<T: Real>(r2: T) -> usize {
    (r2 * T::lit(0.5)).ceil().to_usize().unwrap_or(usize::MAX)
}

/// Running sum of the per-axis series without the `exp(-i P Q)` prefactor.
fn accumulate<T: Real>(
    pairs: impl Iterator<Item = (T, T)>,
    beta: T,
    tr: &SeriesTruncation<T>,
    guard: usize,
    energy: bool,
) -> Complex<T> {
    let half = T::lit(0.5);
    let decay = (-beta).exp();
    let mut boltz = (T::lit(2.0) * T::PI()).sqrt() * (-beta * half).exp();
    let (mut re, mut im) = (T::zero(), T::zero());
    let mut small = 0usize;
    for (n, (fp, fq)) in pairs.take(tr.n_max + 1).enumerate() {
        let mut mag = boltz * fp * fq;
        if energy {
            mag = mag * (T::from_count(n) + half);
        }
        match n % 4 {
            0 => re = re + mag,
            1 => im = im + mag,
            2 => re = re - mag,
            _ => im = im - mag,
        }
        if let Some(tol) = tr.tail_tol {
            if mag.abs() < tol {
                small += 1;
                if small >= 3 && n >= guard {
                    break;
                }
            } else {
                small = 0;
            }
        }
        boltz = boltz * decay;
    }
    Complex::new(re, im)
}

/// One axis of `exp(-beta H) W`, or of `exp(-beta H) H W_H` when `energy`.
pub(crate) fn axis_weight<T: Real>(
    p: T,
    q: T,
    beta: T,
    tr: &SeriesTruncation<T>,
    energy: bool,
) -> Complex<T> {
    let guard = turning_index((p * p).max(q * q));
    let pairs = HermiteFunctions::new(p).zip(HermiteFunctions::new(q));
    cis(-p * q) * accumulate(pairs, beta, tr, guard, energy)
}

/// [`axis_weight`] without the `exp(-i P Q)` prefactor.
pub(crate) fn axis_weight_unphased<T: Real>(p: T, q: T, beta: T, tr: &SeriesTruncation<T>) -> Complex<T> {
    let guard = turning_index((p * p).max(q * q));
    let pairs = HermiteFunctions::new(p).zip(HermiteFunctions::new(q));
    accumulate(pairs, beta, tr, guard, false)
}

/// [`axis_weight`] on the tensor product `ps x qs`, row-major in `ps`.
///
/// Hermite tables are built once per abscissa; the values are bit-identical
/// to pointwise evaluation.
pub(crate) fn axis_table<T: Real>(
    ps: &[T],
    qs: &[T],
    beta: T,
    tr: &SeriesTruncation<T>,
    energy: bool,
) -> Vec<Complex<T>> {
    let r2 = ps
        .iter()
        .chain(qs)
        .fold(T::zero(), |m, &x| m.max(x * x));
    let top = tr.reach(beta, r2, energy);
    let hp: Vec<Vec<T>> = ps.iter().map(|&x| hermite_functions(top, x)).collect();
    let hq: Vec<Vec<T>> = qs.iter().map(|&x| hermite_functions(top, x)).collect();
    let mut out = Vec::with_capacity(ps.len() * qs.len());
    for (i, &p) in ps.iter().enumerate() {
        for (j, &q) in qs.iter().enumerate() {
            let guard = turning_index((p * p).max(q * q));
            let pairs = hp[i].iter().copied().zip(hq[j].iter().copied());
            out.push(cis(-p * q) * accumulate(pairs, beta, tr, guard, energy));
        }
    }
    out
}

/// `exp(-beta H(P, Q)) W(P, Q)` from the truncated energy series.
pub fn weighted_w_energy_series<T: Real>(
    pt: &PhasePoint<T>,
    ts: &ThermoState<T>,
    tr: &SeriesTruncation<T>,
) -> Result<Complex<T>> {
    ts.check_point(pt)?;
    Ok(pt
        .p()
        .iter()
        .zip(pt.q())
        .fold(Complex::new(T::one(), T::zero()), |acc, (&p, &q)| {
            acc * axis_weight(p, q, ts.beta, tr, false)
        }))
}

/// `exp(-beta H) H W_H`, the energy-weighted series.
///
/// Returned premultiplied by `H` so the value stays finite where `H = 0`.
pub fn weighted_wh_energy_series<T: Real>(
    pt: &PhasePoint<T>,
    ts: &ThermoState<T>,
    tr: &SeriesTruncation<T>,
) -> Result<Complex<T>> {
    ts.check_point(pt)?;
    let plain: Vec<Complex<T>> = pt
        .p()
        .iter()
        .zip(pt.q())
        .map(|(&p, &q)| axis_weight(p, q, ts.beta, tr, false))
        .collect();
    let mut total = Complex::zero();
    for (a, (&p, &q)) in pt.p().iter().zip(pt.q()).enumerate() {
        let mut term = axis_weight(p, q, ts.beta, tr, true);
        for (b, w) in plain.iter().enumerate() {
            if b != a {
                term = term * w;
            }
        }
        total = total + term;
    }
    Ok(total)
}

/// The individual 1-D series terms `0..count`, each including `exp(-i P Q)`.
pub fn series_terms<T: Real>(p: T, q: T, beta: T, count: usize) -> Vec<Complex<T>> {
    let phase = cis(-p * q);
    let norm = (T::lit(2.0) * T::PI()).sqrt();
    HermiteFunctions::new(p)
        .zip(HermiteFunctions::new(q))
        .take(count)
        .enumerate()
        .map(|(n, (fp, fq))| {
            let e = T::from_count(n) + T::lit(0.5);
            phase * crate::scalar::i_pow::<T>(n) * (norm * (-beta * e).exp() * fp * fq)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mehler(p: f64, q: f64, beta: f64) -> Complex<f64> {
        let c = beta.cosh();
        let amp = c.powf(-0.5) * (-beta.tanh() * (p * p + q * q) / 2.0).exp();
        amp * cis(-p * q * (1.0 - 1.0 / c))
    }

    #[test]
    fn origin_matches_closed_form() {
        for &beta in &[0.5f64, 1.0, 2.0, 4.0] {
            let ts = ThermoState::boson_1d(beta, 1.0).unwrap();
            let v = weighted_w_energy_series(
                &PhasePoint::one_d(0.0, 0.0),
                &ts,
                &SeriesTruncation::adaptive(),
            )
            .unwrap();
            assert!((v.re - 1.0 / beta.cosh().sqrt()).abs() < 1e-11, "beta={beta}");
            assert_eq!(v.im, 0.0);
        }
    }

    #[test]
    fn converged_series_is_mehler_kernel() {
        for &(p, q, beta) in &[(1.0, 1.0, 1.0), (-2.0, 0.5, 0.3), (3.0, -1.5, 2.0), (0.0, 4.0, 0.7)] {
            let v = axis_weight(p, q, beta, &SeriesTruncation::adaptive(), false);
            let m = mehler(p, q, beta);
            assert!((v - m).norm() < 1e-10, "({p},{q},{beta}): {v} vs {m}");
        }
    }

    #[test]
    fn fixed_truncation_keeps_every_term() {
        let tr = SeriesTruncation::fixed(3).unwrap();
        let v = axis_weight(0.4, -0.2, 1.0, &tr, false);
        let by_terms: Complex<f64> = series_terms(0.4, -0.2, 1.0, 4).into_iter().sum();
        assert!((v - by_terms).norm() < 1e-15);
    }

    #[test]
    fn table_is_bitwise_pointwise() {
        let ps = [-3.0, -0.5, 0.0, 1.25, 5.0];
        let qs = [-1.0, 0.0, 2.5, 7.0];
        for energy in [false, true] {
            let tr = SeriesTruncation::adaptive();
            let t = axis_table(&ps, &qs, 0.6, &tr, energy);
            for (i, &p) in ps.iter().enumerate() {
                for (j, &q) in qs.iter().enumerate() {
                    assert_eq!(t[i * qs.len() + j], axis_weight(p, q, 0.6, &tr, energy));
                }
            }
        }
    }

    #[test]
    fn turning_point_guard_prevents_premature_stop() {
        // phi_n(9) is below 1e-12 for small n; without the guard the sum would
        // stop after three tiny terms and return ~0.
        let v = axis_weight(9.0, 9.0, 0.2, &SeriesTruncation::adaptive(), false);
        let m = mehler(9.0, 9.0, 0.2);
        assert!((v - m).norm() < 1e-10 * m.norm().max(1e-3));
    }

    #[test]
    fn rejects_orders_past_the_cap() {
        assert!(SeriesTruncation::<f64>::fixed(513).is_err());
        assert!(SeriesTruncation::<f64>::new(10, 0.0).is_err());
    }
}
