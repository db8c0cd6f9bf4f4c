//! Temperature expansion of `W` and the exponent expansion `W = exp(sum w_n)`
//! for the harmonic oscillator.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::{PhasePoint, ThermoState};

use super::poly::{Coefficient, Exact, InvariantPoly, Monomial};

pub const BIG_W_MAX_ORDER: usize = 5;
pub const SMALL_W_MAX_ORDER: usize = 4;
pub const RECURSION_CAP: usize = 12;

pub(crate) fn check_big_order(order: usize) -> Result<()> {
    if order <= BIG_W_MAX_ORDER {
        Ok(())
    } else {
        Err(Error::UnsupportedExpansionOrder {
            order,
            min: 0,
            max: BIG_W_MAX_ORDER,
        })
    }
}

pub(crate) fn check_small_order(order: usize) -> Result<()> {
    if (1..=SMALL_W_MAX_ORDER).contains(&order) {
        Ok(())
    } else {
        Err(Error::UnsupportedExpansionOrder {
            order,
            min: 1,
            max: SMALL_W_MAX_ORDER,
        })
    }
}

/// Closed forms of `W_0 ..= W_5`.
pub fn closed_form_coefficients() -> Vec<InvariantPoly<Exact>> {
    let c = Exact::ratio;
    let i = |n, d| Exact::ratio(n, d) * Exact::imag_unit();
    let m = Monomial::new;
    vec![
        InvariantPoly::one(),
        InvariantPoly::zero(),
        // -d/4 - i R/2
        InvariantPoly::zero()
            .with(m(0, 0, 0, 1), c(-1, 4))
            .with(m(0, 0, 1, 0), i(-1, 2)),
        // (P^2 + Q^2)/6
        InvariantPoly::zero()
            .with(m(1, 0, 0, 0), c(1, 6))
            .with(m(0, 1, 0, 0), c(1, 6)),
        // (3d^2 + 4d)/96 + (3d + 5) i R/24 - R^2/8
        InvariantPoly::zero()
            .with(m(0, 0, 0, 2), c(3, 96))
            .with(m(0, 0, 0, 1), c(4, 96))
            .with(m(0, 0, 1, 1), i(3, 24))
            .with(m(0, 0, 1, 0), i(5, 24))
            .with(m(0, 0, 2, 0), c(-1, 8)),
        // -(5d + 8)(P^2 + Q^2)/120 - i R (P^2 + Q^2)/12
        InvariantPoly::zero()
            .with(m(1, 0, 0, 1), c(-5, 120))
            .with(m(0, 1, 0, 1), c(-5, 120))
            .with(m(1, 0, 0, 0), c(-8, 120))
            .with(m(0, 1, 0, 0), c(-8, 120))
            .with(m(1, 0, 1, 0), i(-1, 12))
            .with(m(0, 1, 1, 0), i(-1, 12)),
    ]
}

/// Coefficients `W_0 ..= W_{n_max}` generated symbolically by the oscillator
/// recursion, with exact complex rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct WRecursion {
    coeffs: Vec<InvariantPoly<Exact>>,
}

impl WRecursion {
    pub fn build(n_max: usize) -> Result<Self> {
        if n_max > RECURSION_CAP {
            return Err(Error::UnsupportedExpansionOrder {
                order: n_max,
                min: 0,
                max: RECURSION_CAP,
            });
        }
        let mut w: Vec<InvariantPoly<Exact>> = vec![InvariantPoly::one(), InvariantPoly::zero()];
        let i = Exact::imag_unit();
        let d_mono = Monomial::new(0, 0, 0, 1);
        let y_mono = Monomial::new(0, 1, 0, 0);
        let r_mono = Monomial::new(0, 0, 1, 0);
        for n in 1..n_max {
            let cur = &w[n];
            let prev = &w[n - 1];
            let mut next = prev
                .mul_monomial(d_mono)
                .scale(&Exact::ratio(-1, 2))
                .add(&prev.q_dot_grad().scale(&Exact::ratio(-1, 1)))
                .add(&cur.laplacian().scale(&Exact::ratio(1, 2)))
                .add(&cur.p_dot_grad().scale(&i))
                .add(&prev.mul_monomial(r_mono).scale(&-i.clone()));
            if n >= 2 {
                next = next.add(&w[n - 2].mul_monomial(y_mono).scale(&Exact::ratio(1, 2)));
            }
            w.push(next.scale(&Exact::ratio(1, n as i64 + 1)));
        }
        w.truncate(n_max + 1);
        Ok(Self { coeffs: w })
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient(&self, n: usize) -> &InvariantPoly<Exact> {
        &self.coeffs[n]
    }

    pub fn coefficients(&self) -> &[InvariantPoly<Exact>] {
        &self.coeffs
    }

    /// Floating point evaluator of `W(P, Q; beta) = sum_n W_n beta^n`.
    pub fn evaluator<T: Real>(&self) -> BigWEvaluator<T> {
        BigWEvaluator {
            coeffs: self.coeffs.iter().map(|c| c.to_complex()).collect(),
        }
    }
}

/// Builds the recursion table; see [`WRecursion`].
pub fn w_big_recursion_sho(n_max: usize) -> Result<WRecursion> {
    WRecursion::build(n_max)
}

#[derive(Debug, Clone)]
pub struct BigWEvaluator<T> {
    coeffs: Vec<InvariantPoly<Complex<T>>>,
}

impl<T: Real> BigWEvaluator<T> {
    pub fn from_exact(coeffs: &[InvariantPoly<Exact>]) -> Self {
        Self {
            coeffs: coeffs.iter().map(|c| c.to_complex()).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `sum_n W_n beta^n` with the dimension substituted.
    pub fn polynomial(&self, beta: T, d: usize) -> InvariantPoly<Complex<T>> {
        let dd = Complex::new(T::from_count(d), T::zero());
        let mut out = InvariantPoly::zero();
        let mut bp = T::one();
        for c in &self.coeffs {
            out = out.add(&c.at_dim(dd).scale(&Complex::new(bp, T::zero())));
            bp = bp * beta;
        }
        out
    }

    /// `dW/dbeta = sum_n n W_n beta^(n-1)` with the dimension substituted.
    pub fn beta_derivative(&self, beta: T, d: usize) -> InvariantPoly<Complex<T>> {
        let dd = Complex::new(T::from_count(d), T::zero());
        let mut out = InvariantPoly::zero();
        let mut bp = T::one();
        for (n, c) in self.coeffs.iter().enumerate().skip(1) {
            let s = T::from_count(n) * bp;
            out = out.add(&c.at_dim(dd).scale(&Complex::new(s, T::zero())));
            bp = bp * beta;
        }
        out
    }

    pub fn eval(&self, pt: &PhasePoint<T>, beta: T) -> Complex<T> {
        let d = T::from_count(pt.dim());
        let (x, y, r) = (pt.p_sq(), pt.q_sq(), pt.pq());
        let mut acc = Complex::new(T::zero(), T::zero());
        let mut bp = T::one();
        for c in &self.coeffs {
            acc = acc + c.eval(x, y, r, d) * bp;
            bp = bp * beta;
        }
        acc
    }
}

pub(crate) fn big_w_evaluator<T: Real>(order: usize) -> Result<BigWEvaluator<T>> {
    check_big_order(order)?;
    let all = closed_form_coefficients();
    Ok(BigWEvaluator::from_exact(&all[..=order]))
}

/// `W = sum_{n <= order} W_n beta^n` from the closed-form coefficients.
pub fn w_big_expansion<T: Real>(pt: &PhasePoint<T>, ts: &ThermoState<T>, order: usize) -> Result<Complex<T>> {
    ts.check_point(pt)?;
    Ok(big_w_evaluator(order)?.eval(pt, ts.beta))
}

/// `sum_{n <= order} w_n` and its beta derivative for the oscillator, from
/// the invariants of one point (or one axis with `d = 1`).
pub(crate) fn small_w_sum<T: Real>(x: T, y: T, r: T, d: T, beta: T, order: usize) -> (Complex<T>, Complex<T>) {
    let b = beta;
    let (b2, b3, b4, b5) = (b * b, b * b * b, b.powi(4), b.powi(5));
    let s = x + y;
    let lit = T::lit;
    let mut w = Complex::new(T::zero(), T::zero());
    let mut dw = w;
    if order >= 1 {
        w.im = w.im - b2 * r * lit(0.5);
        dw.im = dw.im - b * r;
    }
    if order >= 2 {
        w.re = w.re + b3 * s / lit(6.0) - d * b2 * lit(0.25);
        dw.re = dw.re + b2 * s * lit(0.5) - d * b * lit(0.5);
    }
    if order >= 3 {
        w.im = w.im + lit(5.0) * b4 * r / lit(24.0);
        dw.im = dw.im + lit(5.0) * b3 * r / lit(6.0);
    }
    if order >= 4 {
        w.re = w.re - b5 * s / lit(15.0) + d * b4 / lit(24.0);
        dw.re = dw.re - b4 * s / lit(3.0) + d * b3 / lit(6.0);
    }
    (w, dw)
}

/// `W = exp(sum_{n <= order} w_n)` for the oscillator.
pub fn w_small_expansion<T: Real>(pt: &PhasePoint<T>, ts: &ThermoState<T>, order: usize) -> Result<Complex<T>> {
    check_small_order(order)?;
    ts.check_point(pt)?;
    let (w, _) = small_w_sum(
        pt.p_sq(),
        pt.q_sq(),
        pt.pq(),
        T::from_count(pt.dim()),
        ts.beta,
        order,
    );
    Ok(w.exp())
}
