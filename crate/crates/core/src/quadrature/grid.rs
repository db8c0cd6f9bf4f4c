//! Deterministic tensor-grid integration of monomer and dimer terms.

use std::collections::HashMap;

use num_complex::Complex;
use rayon::prelude::*;

use crate::commutation::WMethod;
use crate::error::{Error, Result};
use crate::scalar::{cis, loop_sign, Real};
use crate::state::ThermoState;
use crate::symmetrization::CutoffPolicy;

use super::integrand::{Observable, Separable};
use super::rule::{Axis, QuadratureGrid};
use super::sum::pairwise_sum;

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// `(2 pi)^(-k)`.
pub(crate) fn phase_space_norm<T: Real>(k: usize) -> T {
    (T::lit(2.0) * T::PI()).powi(-(k as i32))
}

struct Axes<T> {
    p: Axis<T>,
    q: Axis<T>,
}

impl<T: Real> Axes<T> {
    fn new(grid: &QuadratureGrid<T>) -> Self {
        Self {
            p: grid.p_axis(),
            q: grid.q_axis(),
        }
    }

    fn tables(&self, sep: &Separable<T>, beta: T) -> Vec<Vec<Complex<T>>> {
        sep.factors
            .par_iter()
            .map(|f| f.table(&self.p.nodes, &self.q.nodes, beta))
            .collect()
    }

    /// `sum_ab w_a w_b t[a, b]` and the same for `|t|`.
    fn integrate(&self, t: &[Complex<T>]) -> (Complex<T>, T) {
        let nq = self.q.len();
        let weighted: Vec<Complex<T>> = t
            .iter()
            .enumerate()
            .map(|(k, v)| v * (self.p.weights[k / nq] * self.q.weights[k % nq]))
            .collect();
        let abs: Vec<T> = weighted.iter().map(|v| v.norm()).collect();
        (pairwise_sum(&weighted, czero()), pairwise_sum(&abs, T::zero()))
    }
}

/// `int dP dQ` of a single-particle integrand, with a bound on `int |.|`.
fn monomer_integral_with_bound<T: Real>(sep: &Separable<T>, grid: &QuadratureGrid<T>, beta: T) -> (Complex<T>, T) {
    let axes = Axes::new(grid);
    let per_factor: Vec<(Complex<T>, T)> = axes.tables(sep, beta).iter().map(|t| axes.integrate(t)).collect();
    let mut total = czero();
    let mut bound = T::zero();
    for (c, ks) in &sep.terms {
        let mut v = *c;
        let mut b = c.norm();
        for &k in ks {
            v = v * per_factor[k].0;
            b = b * per_factor[k].1;
        }
        total = total + v;
        bound = bound + b;
    }
    (total, bound)
}

pub(crate) fn monomer_integral<T: Real>(
    ts: &ThermoState<T>,
    grid: &QuadratureGrid<T>,
    method: &WMethod<T>,
    obs: Observable,
) -> Result<Complex<T>> {
    let sep = Separable::new(method, ts.beta, ts.dim, obs)?;
    Ok(monomer_integral_with_bound(&sep, grid, ts.beta).0)
}

/// Complex matrix in row-major order.
struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Mat<T> {
    fn at(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.cols + j]
    }

    fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// `self * other^T`.
    fn mul_transposed(&self, other: &Mat<T>) -> Mat<T> {
        debug_assert_eq!(self.cols, other.cols);
        let mut data = Vec::with_capacity(self.rows * other.rows);
        for i in 0..self.rows {
            let a = self.row(i);
            for j in 0..other.rows {
                let b = other.row(j);
                data.push(a.iter().zip(b).fold(czero(), |s, (x, y)| s + x * y));
            }
        }
        Mat {
            rows: self.rows,
            cols: other.rows,
            data,
        }
    }

    fn transpose(&self) -> Mat<T> {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.at(i, j));
            }
        }
        Mat {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }
}

/// Per-axis dimer integral
///
/// ```text
/// J(f, g) = int dp1 dq1 dp2 dq2 f(p1, q1) g(p2, q2) exp(i (q1 - q2)(p1 - p2))
/// ```
///
/// optionally restricted to `|p1 - p2| <= r_p`, `|q1 - q2| <= r_q`.
struct DimerKernel<T> {
    axes: Axes<T>,
    /// `E[b, c] = exp(-i q_b p_c)`
    e: Mat<T>,
    vp: Option<Vec<T>>,
    vq: Option<Vec<T>>,
}

impl<T: Real> DimerKernel<T> {
    fn new(grid: &QuadratureGrid<T>, pol: &CutoffPolicy<T>) -> Self {
        let axes = Axes::new(grid);
        let (np, nq) = (axes.p.len(), axes.q.len());
        let mut data = Vec::with_capacity(nq * np);
        for &q in &axes.q.nodes {
            for &p in &axes.p.nodes {
                data.push(cis(-q * p));
            }
        }
        let vp = pol.r_cut_p().map(|r| axes.p.window_matrix(r));
        let vq = pol.r_cut_q().map(|r| axes.q.window_matrix(r));
        Self {
            e: Mat {
                rows: nq,
                cols: np,
                data,
            },
            axes,
            vp,
            vq,
        }
    }

    /// `t[a, b] exp(i q_b p_a)`.
    fn dephase(&self, t: &[Complex<T>]) -> Mat<T> {
        let nq = self.axes.q.len();
        let data = t
            .iter()
            .enumerate()
            .map(|(k, v)| v * cis(self.axes.q.nodes[k % nq] * self.axes.p.nodes[k / nq]))
            .collect();
        Mat {
            rows: self.axes.p.len(),
            cols: nq,
            data,
        }
    }

    fn integrate(&self, f: &[Complex<T>], g: &[Complex<T>]) -> Complex<T> {
        if self.vp.is_none() && self.vq.is_none() {
            self.trace_form(f, g)
        } else {
            self.window_form(f, g)
        }
    }

    /// `tr(F E G E)` with weights folded into `F` and `G`.
    fn trace_form(&self, f: &[Complex<T>], g: &[Complex<T>]) -> Complex<T> {
        let et = self.e.transpose(); // [c, b]
        let weigh = |m: Mat<T>| -> Mat<T> {
            let nq = m.cols;
            let data = m
                .data
                .iter()
                .enumerate()
                .map(|(k, v)| v * (self.axes.p.weights[k / nq] * self.axes.q.weights[k % nq]))
                .collect();
            Mat { data, ..m }
        };
        let ff = weigh(self.dephase(f));
        let gg = weigh(self.dephase(g));
        // M = F E, [a, c]
        let (mf, mg) = rayon::join(|| ff.mul_transposed(&et), || gg.mul_transposed(&et));
        let np = mf.rows;
        let parts: Vec<Complex<T>> = (0..np)
            .map(|a| (0..np).fold(czero(), |s, c| s + mf.at(a, c) * mg.at(c, a)))
            .collect();
        pairwise_sum(&parts, czero())
    }

    fn window_form(&self, f: &[Complex<T>], g: &[Complex<T>]) -> Complex<T> {
        let (np, nq) = (self.axes.p.len(), self.axes.q.len());
        let ff = self.dephase(f);
        let gg = self.dephase(g);
        let wp = &self.axes.p.weights;
        let wq = &self.axes.q.weights;
        let vp = |a: usize, c: usize| match &self.vp {
            Some(v) => v[a * np + c],
            None => wp[c],
        };
        let vq = |b: usize, e: usize| match &self.vq {
            Some(v) => v[b * nq + e],
            None => wq[e],
        };
        let parts: Vec<Complex<T>> = (0..np)
            .into_par_iter()
            .map(|a| {
                // A[b, e] = Vq[b, e] E[e, a]
                let mut data = Vec::with_capacity(nq * nq);
                for b in 0..nq {
                    for e in 0..nq {
                        data.push(self.e.at(e, a) * vq(b, e));
                    }
                }
                let amat = Mat {
                    rows: nq,
                    cols: nq,
                    data,
                };
                let k = amat.mul_transposed(&gg); // [b, c]
                let mut s = czero();
                for b in 0..nq {
                    let fb = ff.at(a, b) * wq[b];
                    for c in 0..np {
                        s = s + fb * self.e.at(b, c) * vp(a, c) * k.at(b, c);
                    }
                }
                s * wp[a]
            })
            .collect();
        pairwise_sum(&parts, czero())
    }
}

/// `int dGamma_1 dGamma_2 s1(Gamma_1) s2(Gamma_2) eta_12` over the grid.
fn dimer_integral_sep<T: Real>(
    s1: &Separable<T>,
    s2: &Separable<T>,
    grid: &QuadratureGrid<T>,
    pol: &CutoffPolicy<T>,
    beta: T,
) -> Complex<T> {
    let kernel = DimerKernel::new(grid, pol);
    let (t1, t2) = rayon::join(|| kernel.axes.tables(s1, beta), || kernel.axes.tables(s2, beta));
    let mut memo: HashMap<(usize, usize), Complex<T>> = HashMap::new();
    let mut total = czero();
    for (c1, k1) in &s1.terms {
        for (c2, k2) in &s2.terms {
            let mut v = c1 * c2;
            for (&a, &b) in k1.iter().zip(k2) {
                let j = *memo
                    .entry((a, b))
                    .or_insert_with(|| kernel.integrate(&t1[a], &t2[b]));
                v = v * j;
            }
            total = total + v;
        }
    }
    total
}

/// Dimer integral with particle one carrying `obs` and particle two the weight.
pub(crate) fn dimer_integral<T: Real>(
    ts: &ThermoState<T>,
    grid: &QuadratureGrid<T>,
    pol: &CutoffPolicy<T>,
    method: &WMethod<T>,
    obs: Observable,
) -> Result<Complex<T>> {
    let s1 = Separable::new(method, ts.beta, ts.dim, obs)?;
    let s2 = if obs == Observable::Weight {
        s1.clone()
    } else {
        Separable::new(method, ts.beta, ts.dim, Observable::Weight)?
    };
    Ok(dimer_integral_sep(&s1, &s2, grid, pol, ts.beta))
}

/// `-beta Omega_1 = z (2 pi)^(-d) int dP dQ Re[exp(-beta H) W]`.
pub fn monomer_grand_potential<T: Real>(
    ts: &ThermoState<T>,
    grid: &QuadratureGrid<T>,
    method: &WMethod<T>,
) -> Result<T> {
    let i = monomer_integral(ts, grid, method, Observable::Weight)?;
    Ok(ts.z * phase_space_norm::<T>(ts.dim) * i.re)
}

/// `-beta Omega_l` on the tensor grid; only `l <= 2` is supported.
pub fn loop_grand_potential<T: Real>(
    l: usize,
    ts: &ThermoState<T>,
    grid: &QuadratureGrid<T>,
    pol: &CutoffPolicy<T>,
    method: &WMethod<T>,
) -> Result<T> {
    match l {
        0 => Err(Error::invalid("loop length must be at least 1")),
        1 => monomer_grand_potential(ts, grid, method),
        2 => {
            let j = dimer_integral(ts, grid, pol, method, Observable::Weight)?;
            let pre = loop_sign::<T>(ts.sign(), 2) * ts.z * ts.z * T::lit(0.5) * phase_space_norm::<T>(2 * ts.dim);
            Ok(pre * j.re)
        }
        _ => Err(Error::UnsupportedLoopOrder(l)),
    }
}

/// Imaginary part of the monomer integral next to the integral of the
/// integrand modulus (a triangle-inequality bound for multi-term integrands).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImaginaryResidual<T> {
    pub imaginary: T,
    pub magnitude: T,
}

impl<T: Real> ImaginaryResidual<T> {
    pub fn relative(&self) -> T {
        if self.magnitude > T::zero() {
            self.imaginary.abs() / self.magnitude
        } else {
            self.imaginary.abs()
        }
    }

    /// True when the residual is within `rel` of the magnitude.
    pub fn is_negligible(&self, rel: T) -> bool {
        self.imaginary.abs() <= rel * self.magnitude
    }
}

pub fn imaginary_residual<T: Real>(
    ts: &ThermoState<T>,
    grid: &QuadratureGrid<T>,
    method: &WMethod<T>,
) -> Result<ImaginaryResidual<T>> {
    let sep = Separable::new(method, ts.beta, ts.dim, Observable::Weight)?;
    let (i, bound) = monomer_integral_with_bound(&sep, grid, ts.beta);
    Ok(ImaginaryResidual {
        imaginary: i.im,
        magnitude: bound,
    })
}
