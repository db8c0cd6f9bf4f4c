//! Exponent expansion `W = exp(w_1 + w_2 + w_3 + w_4)` for a general
//! potential, in units with `hbar = m = 1`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::expansion::check_small_order;

/// Derivatives of a potential `U(q)` in `d` dimensions, row-major tensors.
pub trait PotentialDerivatives<T> {
    fn dim(&self) -> usize;

    fn gradient(&self, q: &[T]) -> Vec<T>;

    /// `d x d`.
    fn hessian(&self, q: &[T]) -> Vec<T>;

    /// `d x d x d`; needed from order 3.
    fn third(&self, _q: &[T]) -> Option<Vec<T>> {
        None
    }

    /// `d x d x d x d`; needed at order 4.
    fn fourth(&self, _q: &[T]) -> Option<Vec<T>> {
        None
    }
}

/// `w_1 ..= w_order` at `(p, q)`.
pub fn w_general_terms<T: Real, U: PotentialDerivatives<T> + ?Sized>(
    pot: &U,
    p: &[T],
    q: &[T],
    beta: T,
    order: usize,
) -> Result<Vec<Complex<T>>> {
    check_small_order(order)?;
    let d = pot.dim();
    if p.len() != d || q.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: if p.len() != d { p.len() } else { q.len() },
        });
    }
    let g = pot.gradient(q);
    let h = pot.hessian(q);
    let third = if order >= 3 {
        Some(pot.third(q).ok_or(Error::MissingDerivative {
            order,
            what: "third derivative tensor",
        })?)
    } else {
        None
    };
    let fourth = if order >= 4 {
        Some(pot.fourth(q).ok_or(Error::MissingDerivative {
            order,
            what: "fourth derivative tensor",
        })?)
    } else {
        None
    };

    let h_at = |i: usize, j: usize| h[i * d + j];
    let dot = |a: &[T], b: &[T]| a.iter().zip(b).map(|(&x, &y)| x * y).sum::<T>();
    let lit = T::lit;
    let (b2, b3, b4, b5) = (beta * beta, beta.powi(3), beta.powi(4), beta.powi(5));

    // H p and H g
    let hp: Vec<T> = (0..d).map(|i| (0..d).map(|j| h_at(i, j) * p[j]).sum()).collect();
    let hg: Vec<T> = (0..d).map(|i| (0..d).map(|j| h_at(i, j) * g[j]).sum()).collect();
    let p_g = dot(p, &g);
    let trace_h: T = (0..d).map(|i| h_at(i, i)).sum();

    let mut out = Vec::with_capacity(order);
    out.push(Complex::new(T::zero(), -b2 * lit(0.5) * p_g));

    if order >= 2 {
        let re = b3 / lit(6.0) * dot(p, &hp) + b3 / lit(6.0) * dot(&g, &g) - b2 * lit(0.25) * trace_h;
        out.push(Complex::new(re, T::zero()));
    }

    if let Some(t) = &third {
        let t_at = |i: usize, j: usize, k: usize| t[(i * d + j) * d + k];
        let mut ppp = T::zero();
        let mut p_lap_grad = T::zero();
        let mut ppg_t = T::zero();
        let mut g_lap_grad = T::zero();
        for i in 0..d {
            for j in 0..d {
                p_lap_grad = p_lap_grad + p[i] * t_at(i, j, j);
                g_lap_grad = g_lap_grad + g[i] * t_at(i, j, j);
                for k in 0..d {
                    ppp = ppp + t_at(i, j, k) * p[i] * p[j] * p[k];
                    ppg_t = ppg_t + t_at(i, j, k) * p[i] * p[j] * g[k];
                }
            }
        }
        let im = b4 / lit(24.0) * ppp + lit(5.0) * b4 / lit(24.0) * dot(p, &hg) - b3 / lit(6.0) * p_lap_grad;
        out.push(Complex::new(T::zero(), im));

        if let Some(f) = &fourth {
            let f_at = |i: usize, j: usize, k: usize, l: usize| f[((i * d + j) * d + k) * d + l];
            let mut pppp = T::zero();
            let mut pp_lap = T::zero();
            let mut bilap = T::zero();
            for i in 0..d {
                for j in 0..d {
                    bilap = bilap + f_at(i, i, j, j);
                    for k in 0..d {
                        pp_lap = pp_lap + p[i] * p[j] * f_at(i, j, k, k);
                        for l in 0..d {
                            pppp = pppp + f_at(i, j, k, l) * p[i] * p[j] * p[k] * p[l];
                        }
                    }
                }
            }
            let h_h: T = h.iter().map(|&x| x * x).sum();
            let re = -b5 / lit(120.0) * pppp + b4 / lit(16.0) * pp_lap
                - b5 / lit(15.0) * dot(&hp, &hp)
                - lit(3.0) * b5 / lit(40.0) * ppg_t
                - b3 / lit(24.0) * bilap
                + lit(5.0) * b4 / lit(48.0) * g_lap_grad
                + b4 / lit(24.0) * h_h
                - b5 / lit(15.0) * dot(&g, &hg);
            out.push(Complex::new(re, T::zero()));
        }
    }
    Ok(out)
}

/// `W = exp(sum_{n <= order} w_n)` for the potential behind `pot`.
pub fn w_general_small<T: Real, U: PotentialDerivatives<T> + ?Sized>(
    pot: &U,
    p: &[T],
    q: &[T],
    beta: T,
    order: usize,
) -> Result<Complex<T>> {
    let terms = w_general_terms(pot, p, q, beta, order)?;
    Ok(terms
        .into_iter()
        .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
        .exp())
}

/// Isotropic oscillator `U = q^2 / 2`.
#[derive(Debug, Clone, Copy)]
pub struct HarmonicPotential {
    pub dim: usize,
}

impl<T: Real> PotentialDerivatives<T> for HarmonicPotential {
    fn dim(&self) -> usize {
        self.dim
    }

    fn gradient(&self, q: &[T]) -> Vec<T> {
        q.to_vec()
    }

    fn hessian(&self, _q: &[T]) -> Vec<T> {
        let d = self.dim;
        (0..d * d)
            .map(|k| if k / d == k % d { T::one() } else { T::zero() })
            .collect()
    }

    fn third(&self, _q: &[T]) -> Option<Vec<T>> {
        Some(vec![T::zero(); self.dim.pow(3)])
    }

    fn fourth(&self, _q: &[T]) -> Option<Vec<T>> {
        Some(vec![T::zero(); self.dim.pow(4)])
    }
}
