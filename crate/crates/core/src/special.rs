//! Hermite polynomials and Hermite functions.
//!
//! The Hermite functions `phi_n(x) = (2^n n! sqrt(pi))^(-1/2) exp(-x^2/2) H_n(x)`
//! are the oscillator eigenfunctions in dimensionless units. They are produced
//! by the normalized three-term recurrence
//!
//! ```text
//! phi_{n+1} = x sqrt(2/(n+1)) phi_n - sqrt(n/(n+1)) phi_{n-1}
//! ```
//!
//! carried out on `exp(x^2/2) phi_n` with a running power-of-two rescale, so
//! neither the factorials nor the Gaussian ever leave the floating point range.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{i_pow, Real};

/// Largest quantum number accepted at the public API.
pub const HERMITE_ORDER_CAP: usize = 512;

/// Oscillator quantum number, `0 <= n <= HERMITE_ORDER_CAP`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HermiteOrder(usize);

impl HermiteOrder {
    pub fn new(n: usize) -> Result<Self> {
        if n <= HERMITE_ORDER_CAP {
            Ok(Self(n))
        } else {
            Err(Error::HermiteOrderTooLarge(n))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// Physicists' Hermite polynomial `H_n(x)` from `H_{n+1} = 2x H_n - 2n H_{n-1}`.
///
/// Overflows to infinity for large `n |x|`; use [`hermite_function`] there.
pub fn hermite_poly<T: Real>(n: HermiteOrder, x: T) -> T {
    let two = T::lit(2.0);
    let mut prev = T::one();
    if n.0 == 0 {
        return prev;
    }
    let mut cur = two * x;
    for k in 1..n.0 {
        let next = two * x * cur - two * T::from_count(k) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Successive Hermite functions `phi_0(x), phi_1(x), ...` at a fixed `x`.
#[derive(Debug, Clone)]
pub struct HermiteFunctions<T> {
    x: T,
    n: usize,
    prev: T,
    cur: T,
    // log of the factor by which `prev`/`cur` have been divided, minus x^2/2
    log_scale: T,
    // exp(log_scale), refreshed only when the scale changes
    factor: T,
}

impl<T: Real> HermiteFunctions<T> {
    pub fn new(x: T) -> Self {
        let log_scale = -x * x * T::lit(0.5);
        Self {
            x,
            n: 0,
            prev: T::zero(),
            cur: (T::FRAC_2_SQRT_PI() / T::lit(2.0)).sqrt(),
            log_scale,
            factor: log_scale.exp(),
        }
    }

    /// Rescale threshold; its square still fits comfortably in `T`.
    fn big() -> T {
        T::max_value().sqrt().sqrt()
    }
}

impl<T: Real> Iterator for HermiteFunctions<T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        let value = self.cur * self.factor;
        let n = self.n;
        let np1 = T::from_count(n + 1);
        let next = self.x * (T::lit(2.0) / np1).sqrt() * self.cur
            - (T::from_count(n) / np1).sqrt() * self.prev;
        self.prev = self.cur;
        self.cur = next;
        self.n += 1;
        let big = Self::big();
        if self.cur.abs() > big {
            self.cur = self.cur / big;
            self.prev = self.prev / big;
            self.log_scale = self.log_scale + big.ln();
            self.factor = self.log_scale.exp();
        }
        Some(value)
    }
}

/// `phi_0(x) ..= phi_{n_max}(x)`.
pub fn hermite_functions<T: Real>(n_max: usize, x: T) -> Vec<T> {
    HermiteFunctions::new(x).take(n_max + 1).collect()
}

/// Normalized Hermite function `phi_n(x)`.
pub fn hermite_function<T: Real>(n: HermiteOrder, x: T) -> T {
    HermiteFunctions::new(x)
        .nth(n.0)
        .expect("Hermite function iterator is infinite")
}

/// Fourier image `i^n sqrt(2 pi) phi_n(p)` of the Hermite function under the
/// `exp(-i p q)` convention used for the momentum eigenfunctions.
pub fn hermite_function_ft<T: Real>(n: HermiteOrder, p: T) -> Complex<T> {
    let amp = (T::lit(2.0) * T::PI()).sqrt() * hermite_function(n, p);
    i_pow::<T>(n.0) * amp
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(n: usize) -> HermiteOrder {
        HermiteOrder::new(n).unwrap()
    }

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    /// Direct definition with explicit factorials, fine for small n.
    fn direct_phi(n: usize, x: f64) -> f64 {
        let norm = (2f64.powi(n as i32) * factorial(n) * std::f64::consts::PI.sqrt()).sqrt();
        (-x * x / 2.0).exp() * hermite_poly(order(n), x) / norm
    }

    #[test]
    fn low_order_polynomials() {
        assert_eq!(hermite_poly(order(0), 3.7), 1.0);
        assert_eq!(hermite_poly(order(1), 0.5), 1.0);
        // H_2 = 4x^2 - 2, H_3 = 8x^3 - 12x, H_4 = 16x^4 - 48x^2 + 12
        assert_eq!(hermite_poly(order(4), 0.0), 12.0);
        let x = 1.3f64;
        assert!((hermite_poly(order(3), x) - (8.0 * x * x * x - 12.0 * x)).abs() < 1e-12);
    }

    #[test]
    fn ground_state_and_parity() {
        let v = hermite_function(order(0), 0.0f64);
        assert!((v - std::f64::consts::PI.powf(-0.25)).abs() < 1e-15);
        assert!((v - 0.7511255444649425).abs() < 1e-15);
        assert_eq!(hermite_function(order(1), 0.0f64), 0.0);
    }

    #[test]
    fn normalized_recurrence_matches_direct_formula() {
        let v = hermite_function(order(6), 1.3f64);
        assert!((v - direct_phi(6, 1.3)).abs() < 1e-14);
        for n in 0..=15 {
            for i in 0..=50 {
                let x = -5.0 + 0.2 * i as f64;
                let a = hermite_function(order(n), x);
                let b = direct_phi(n, x);
                let scale = b.abs().max(1e-300);
                assert!(
                    (a - b).abs() <= 1e-12 * scale.max(1e-3 * direct_phi(0, 0.0)),
                    "n={n} x={x}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn fourier_image_phases() {
        let root = (2.0 * std::f64::consts::PI).sqrt();
        let z0 = hermite_function_ft(order(0), 0.0f64);
        assert!((z0.re - root * std::f64::consts::PI.powf(-0.25)).abs() < 1e-14);
        assert_eq!(z0.im, 0.0);
        let z2 = hermite_function_ft(order(2), 1.0f64);
        assert!((z2.re + root * hermite_function(order(2), 1.0)).abs() < 1e-14);
        assert_eq!(z2.im, 0.0);
        let z1 = hermite_function_ft(order(1), 0.7f64);
        assert_eq!(z1.re, 0.0);
        assert!((z1.im - root * hermite_function(order(1), 0.7)).abs() < 1e-14);
    }

    #[test]
    fn stays_finite_at_the_cap() {
        for &x in &[0.0f64, 1.0, 7.5, 22.0, 31.9, 40.0, -40.0] {
            let all = hermite_functions(HERMITE_ORDER_CAP, x);
            assert!(all.iter().all(|v| v.is_finite()), "x = {x}");
            // phi_n is bounded by pi^(-1/4) for every n and x
            assert!(all.iter().all(|v| v.abs() <= 0.7512), "x = {x}");
        }
        assert!(HermiteOrder::new(HERMITE_ORDER_CAP + 1).is_err());
    }

    #[test]
    fn deep_orders_keep_accuracy_past_the_turning_point() {
        // phi_n at large |x| follows from the rescaled recurrence even though
        // exp(-x^2/2) underflows; compare against an f64 recurrence run on
        // log-magnitudes via the ratio phi_{n}/phi_{n-1} at x = 38.
        let x = 38.0f64;
        let seq = hermite_functions(300, x);
        assert!(seq[300] > 0.0);
        let ratio = seq[300] / seq[299];
        // far outside the turning point the ratio approaches x / sqrt(n/2)
        let approx = x / (150.0f64).sqrt();
        assert!((ratio / approx - 1.0).abs() < 0.2);
    }
}
