//! Single-particle integrands written as sums of products of per-axis
//! factors, which is what makes the oscillator phase-space integrals cheap.

use num_complex::Complex;

use crate::commutation::{
    axis_table, axis_weight, big_w_evaluator, expand_cartesian, small_w_sum, InvariantPoly, Monomial,
    SeriesTruncation, WMethod,
};
use crate::error::Result;
use crate::scalar::Real;

/// What one particle contributes to the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Observable {
    /// `exp(-beta H) W`
    Weight,
    /// `H exp(-beta H) W`
    Energy,
    /// `exp(-beta H) H W_H`
    EnergyWh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Decoration {
    None,
    /// times `h = (p^2 + q^2) / 2`
    TimesH,
    /// times `h - dw/dbeta`
    HMinusDw,
}

/// Function of one axis `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum AxisFactor<T> {
    /// Weighted series; `energy` selects the `E_n`-weighted sum.
    Series {
        tr: SeriesTruncation<T>,
        energy: bool,
        times_h: bool,
    },
    /// `exp(-beta h) p^i q^j`
    Monomial { i: u32, j: u32 },
    /// `exp(-beta h) exp(w(p, q))` with the one-axis oscillator exponent.
    SmallW { order: usize, deco: Decoration },
}

impl<T: Real> AxisFactor<T> {
    pub fn eval(&self, p: T, q: T, beta: T) -> Complex<T> {
        let h = (p * p + q * q) * T::lit(0.5);
        match *self {
            AxisFactor::Series { tr, energy, times_h } => {
                let v = axis_weight(p, q, beta, &tr, energy);
                if times_h {
                    v * h
                } else {
                    v
                }
            }
            AxisFactor::Monomial { i, j } => {
                Complex::new((-beta * h).exp() * p.powi(i as i32) * q.powi(j as i32), T::zero())
            }
            AxisFactor::SmallW { order, deco } => {
                let (w, dw) = small_w_sum(p * p, q * q, p * q, T::one(), beta, order);
                let base = w.exp() * (-beta * h).exp();
                match deco {
                    Decoration::None => base,
                    Decoration::TimesH => base * h,
                    Decoration::HMinusDw => base * (Complex::new(h, T::zero()) - dw),
                }
            }
        }
    }

    /// Values on `ps x qs`, row-major in `ps`.
    pub fn table(&self, ps: &[T], qs: &[T], beta: T) -> Vec<Complex<T>> {
        match *self {
            AxisFactor::Series { tr, energy, times_h } => {
                let mut t = axis_table(ps, qs, beta, &tr, energy);
                if times_h {
                    for (k, v) in t.iter_mut().enumerate() {
                        let (p, q) = (ps[k / qs.len()], qs[k % qs.len()]);
                        *v = *v * ((p * p + q * q) * T::lit(0.5));
                    }
                }
                t
            }
            _ => {
                let mut out = Vec::with_capacity(ps.len() * qs.len());
                for &p in ps {
                    for &q in qs {
                        out.push(self.eval(p, q, beta));
                    }
                }
                out
            }
        }
    }
}

/// `sum_t c_t prod_a f_{t,a}(p_a, q_a)`.
#[derive(Debug, Clone)]
pub(crate) struct Separable<T> {
    pub factors: Vec<AxisFactor<T>>,
    pub terms: Vec<(Complex<T>, Vec<usize>)>,
    pub dim: usize,
}

impl<T: Real> Separable<T> {
    fn empty(dim: usize) -> Self {
        Self {
            factors: Vec::new(),
            terms: Vec::new(),
            dim,
        }
    }

    fn factor(&mut self, f: AxisFactor<T>) -> usize {
        if let Some(k) = self.factors.iter().position(|g| *g == f) {
            return k;
        }
        self.factors.push(f);
        self.factors.len() - 1
    }

    /// One term per axis `a`: `special` on axis `a`, `plain` elsewhere.
    fn one_special(dim: usize, plain: AxisFactor<T>, special: AxisFactor<T>) -> Self {
        let mut s = Self::empty(dim);
        let kp = s.factor(plain);
        let ks = s.factor(special);
        for a in 0..dim {
            let axes = (0..dim).map(|b| if b == a { ks } else { kp }).collect();
            s.terms.push((Complex::new(T::one(), T::zero()), axes));
        }
        s
    }

    fn product(dim: usize, f: AxisFactor<T>) -> Self {
        let mut s = Self::empty(dim);
        let k = s.factor(f);
        s.terms.push((Complex::new(T::one(), T::zero()), vec![k; dim]));
        s
    }

    fn from_polynomial(dim: usize, poly: &InvariantPoly<Complex<T>>) -> Self {
        let mut s = Self::empty(dim);
        for (exps, c) in expand_cartesian(poly, dim) {
            let axes = exps
                .iter()
                .map(|&(i, j)| s.factor(AxisFactor::Monomial { i, j }))
                .collect();
            s.terms.push((c, axes));
        }
        s
    }

    pub fn new(method: &WMethod<T>, beta: T, dim: usize, obs: Observable) -> Result<Self> {
        method.validate()?;
        Ok(match *method {
            WMethod::ExactSeries(tr) => {
                let plain = AxisFactor::Series {
                    tr,
                    energy: false,
                    times_h: false,
                };
                match obs {
                    Observable::Weight => Self::product(dim, plain),
                    Observable::Energy => Self::one_special(
                        dim,
                        plain,
                        AxisFactor::Series {
                            tr,
                            energy: false,
                            times_h: true,
                        },
                    ),
                    Observable::EnergyWh => Self::one_special(
                        dim,
                        plain,
                        AxisFactor::Series {
                            tr,
                            energy: true,
                            times_h: false,
                        },
                    ),
                }
            }
            WMethod::SmallW { order } => {
                let plain = AxisFactor::SmallW {
                    order,
                    deco: Decoration::None,
                };
                match obs {
                    Observable::Weight => Self::product(dim, plain),
                    Observable::Energy => Self::one_special(
                        dim,
                        plain,
                        AxisFactor::SmallW {
                            order,
                            deco: Decoration::TimesH,
                        },
                    ),
                    Observable::EnergyWh => Self::one_special(
                        dim,
                        plain,
                        AxisFactor::SmallW {
                            order,
                            deco: Decoration::HMinusDw,
                        },
                    ),
                }
            }
            WMethod::BigW { order } => {
                let ev = big_w_evaluator::<T>(order)?;
                let w = ev.polynomial(beta, dim);
                let half = Complex::new(T::lit(0.5), T::zero());
                let h = InvariantPoly::zero()
                    .with(Monomial::new(1, 0, 0, 0), half)
                    .with(Monomial::new(0, 1, 0, 0), half);
                let poly = match obs {
                    Observable::Weight => w,
                    Observable::Energy => h.mul(&w),
                    Observable::EnergyWh => {
                        let minus = Complex::new(-T::one(), T::zero());
                        h.mul(&w).add(&ev.beta_derivative(beta, dim).scale(&minus))
                    }
                };
                Self::from_polynomial(dim, &poly)
            }
        })
    }

    pub fn eval(&self, p: &[T], q: &[T], beta: T) -> Complex<T> {
        let vals: Vec<Vec<Complex<T>>> = self
            .factors
            .iter()
            .map(|f| (0..self.dim).map(|a| f.eval(p[a], q[a], beta)).collect())
            .collect();
        let mut acc = Complex::new(T::zero(), T::zero());
        for (c, axes) in &self.terms {
            let mut t = *c;
            for (a, &k) in axes.iter().enumerate() {
                t = t * vals[k][a];
            }
            acc = acc + t;
        }
        acc
    }
}
