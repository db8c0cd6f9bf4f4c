//! Commutation function `W` of the harmonic oscillator in three
//! representations, and the operator-average variant `W_H`.

mod expansion;
mod general;
mod poly;
mod series;

pub use expansion::{
    closed_form_coefficients, w_big_expansion, w_big_recursion_sho, w_small_expansion, BigWEvaluator,
    WRecursion, BIG_W_MAX_ORDER, RECURSION_CAP, SMALL_W_MAX_ORDER,
};
pub use general::{w_general_small, w_general_terms, HarmonicPotential, PotentialDerivatives};
pub use poly::{Coefficient, Exact, InvariantPoly, Monomial};
pub use series::{series_terms, weighted_w_energy_series, weighted_wh_energy_series, SeriesTruncation};

pub(crate) use expansion::{big_w_evaluator, small_w_sum};
pub(crate) use poly::expand_cartesian;
pub(crate) use series::{axis_table, axis_weight, axis_weight_unphased};

use num_complex::Complex;

use crate::error::Result;
use crate::scalar::Real;
use crate::state::{PhasePoint, ThermoState};

/// How `W` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WMethod<T> {
    ExactSeries(SeriesTruncation<T>),
    /// `sum_{n <= order} W_n beta^n`, `order <= 5`.
    BigW { order: usize },
    /// `exp(sum_{n <= order} w_n)`, `1 <= order <= 4`.
    SmallW { order: usize },
}

impl<T: Real> WMethod<T> {
    /// `W = 1`.
    pub fn classical() -> Self {
        WMethod::BigW { order: 0 }
    }

    pub fn exact() -> Self {
        WMethod::ExactSeries(SeriesTruncation::adaptive())
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            WMethod::ExactSeries(_) => Ok(()),
            WMethod::BigW { order } => expansion::check_big_order(order),
            WMethod::SmallW { order } => expansion::check_small_order(order),
        }
    }
}

/// `exp(-beta H) W` at one point.
pub fn weighted_w<T: Real>(pt: &PhasePoint<T>, ts: &ThermoState<T>, method: &WMethod<T>) -> Result<Complex<T>> {
    ts.check_point(pt)?;
    let boltz = (-ts.beta * pt.energy()).exp();
    match method {
        WMethod::ExactSeries(tr) => weighted_w_energy_series(pt, ts, tr),
        WMethod::BigW { order } => Ok(w_big_expansion(pt, ts, *order)? * boltz),
        WMethod::SmallW { order } => Ok(w_small_expansion(pt, ts, *order)? * boltz),
    }
}

/// `exp(-beta H) H W_H = -d/dbeta [exp(-beta H) W]` at one point.
///
/// The series evaluates the energy-weighted sum directly; the expansions use
/// `H W - dW/dbeta` term by term.
pub fn weighted_wh<T: Real>(pt: &PhasePoint<T>, ts: &ThermoState<T>, method: &WMethod<T>) -> Result<Complex<T>> {
    ts.check_point(pt)?;
    let h = pt.energy();
    let boltz = (-ts.beta * h).exp();
    match method {
        WMethod::ExactSeries(tr) => weighted_wh_energy_series(pt, ts, tr),
        WMethod::BigW { order } => {
            let ev = big_w_evaluator::<T>(*order)?;
            let d = pt.dim();
            let (x, y, r) = (pt.p_sq(), pt.q_sq(), pt.pq());
            let dd = T::from_count(d);
            let w = ev.polynomial(ts.beta, d).eval(x, y, r, dd);
            let dw = ev.beta_derivative(ts.beta, d).eval(x, y, r, dd);
            Ok((w * h - dw) * boltz)
        }
        WMethod::SmallW { order } => {
            expansion::check_small_order(*order)?;
            let (w, dw) = small_w_sum(pt.p_sq(), pt.q_sq(), pt.pq(), T::from_count(pt.dim()), ts.beta, *order);
            Ok(w.exp() * (Complex::new(h, T::zero()) - dw) * boltz)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn methods() -> Vec<WMethod<f64>> {
        vec![
            WMethod::exact(),
            WMethod::BigW { order: 5 },
            WMethod::SmallW { order: 4 },
        ]
    }

    #[test]
    fn wh_is_minus_beta_derivative_for_every_method() {
        let pt = PhasePoint::new(vec![0.9, -0.3], vec![0.4, 1.2]).unwrap();
        let h = 1e-5;
        for m in methods() {
            let ts = ThermoState::new(0.8, 1.0, 2, crate::state::Statistics::Boson).unwrap();
            let up = weighted_w(&pt, &ts.with_beta(0.8 + h).unwrap(), &m).unwrap();
            let dn = weighted_w(&pt, &ts.with_beta(0.8 - h).unwrap(), &m).unwrap();
            let fd = -(up - dn) / (2.0 * h);
            let wh = weighted_wh(&pt, &ts, &m).unwrap();
            assert!((wh - fd).norm() < 1e-8 * wh.norm().max(1.0), "{m:?}: {wh} vs {fd}");
        }
    }

    #[test]
    fn representations_agree_at_high_temperature() {
        let ts = ThermoState::boson_1d(0.3, 1.0).unwrap();
        let pt = PhasePoint::one_d(0.5, -0.4);
        let exact = weighted_w(&pt, &ts, &WMethod::exact()).unwrap();
        for m in &methods()[1..] {
            let v = weighted_w(&pt, &ts, m).unwrap();
            assert!((v - exact).norm() < 1e-3 * exact.norm(), "{m:?}");
        }
    }

    #[test]
    fn validation_rejects_out_of_range_orders() {
        assert!(WMethod::<f64>::BigW { order: 6 }.validate().is_err());
        assert!(WMethod::<f64>::SmallW { order: 0 }.validate().is_err());
        assert!(WMethod::<f64>::classical().validate().is_ok());
    }
}
