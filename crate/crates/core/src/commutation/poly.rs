//! Polynomials in the rotation invariants `X = P^2`, `Y = Q^2`, `R = P.Q`
//! and the dimension `d`.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};

use crate::scalar::Real;

/// Exact complex rational coefficient.
pub type Exact = Complex<BigRational>;

/// Coefficient ring for [`InvariantPoly`].
pub trait Coefficient: Clone + Num + Neg<Output = Self> + Debug {
    fn ratio(num: i64, den: i64) -> Self;
    fn imag_unit() -> Self;
}

impl Coefficient for Exact {
    fn ratio(num: i64, den: i64) -> Self {
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::from_integer(BigInt::from(1)))
    }
}

impl<T: Real> Coefficient for Complex<T> {
    fn ratio(num: i64, den: i64) -> Self {
        Complex::new(T::lit(num as f64) / T::lit(den as f64), T::zero())
    }

    fn imag_unit() -> Self {
        Complex::new(T::zero(), T::one())
    }
}

/// `X^x Y^y R^r d^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
    pub r: u32,
    pub d: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0, r: 0, d: 0 };

    pub fn new(x: u32, y: u32, r: u32, d: u32) -> Self {
        Self { x, y, r, d }
    }

    fn times(self, o: Monomial) -> Monomial {
        Monomial::new(self.x + o.x, self.y + o.y, self.r + o.r, self.d + o.d)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantPoly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> Default for InvariantPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> InvariantPoly<C> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        Self::zero().with(Monomial::ONE, c)
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    /// Adds `c m` and returns the result.
    pub fn with(mut self, m: Monomial, c: C) -> Self {
        self.add_term(m, c);
        self
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(C::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: Monomial) -> C {
        self.terms.get(&m).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(*m, v.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (m, a) in &self.terms {
            for (n, b) in &o.terms {
                out.add_term(m.times(*n), a.clone() * b.clone());
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: Monomial) -> Self {
        let mut out = Self::zero();
        for (n, c) in &self.terms {
            out.add_term(m.times(*n), c.clone());
        }
        out
    }

    /// Exchanges the roles of `P` and `Q`.
    pub fn swap_pq(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(Monomial::new(m.y, m.x, m.r, m.d), c.clone());
        }
        out
    }

    /// `Q . grad_Q`.
    pub fn q_dot_grad(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c.clone() * C::ratio(2 * m.y as i64 + m.r as i64, 1));
        }
        out
    }

    /// `P . grad_Q`.
    pub fn p_dot_grad(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.y > 0 {
                let n = Monomial::new(m.x, m.y - 1, m.r + 1, m.d);
                out.add_term(n, c.clone() * C::ratio(2 * m.y as i64, 1));
            }
            if m.r > 0 {
                let n = Monomial::new(m.x + 1, m.y, m.r - 1, m.d);
                out.add_term(n, c.clone() * C::ratio(m.r as i64, 1));
            }
        }
        out
    }

    /// Laplacian in `Q`.
    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (b, r) = (m.y as i64, m.r as i64);
            if m.y > 0 {
                let n = Monomial::new(m.x, m.y - 1, m.r, m.d);
                out.add_term(n, c.clone() * C::ratio(4 * b * (b - 1) + 4 * b * r, 1));
                // the 2 b d piece raises the power of d
                let nd = Monomial::new(m.x, m.y - 1, m.r, m.d + 1);
                out.add_term(nd, c.clone() * C::ratio(2 * b, 1));
            }
            if m.r > 1 {
                let n = Monomial::new(m.x + 1, m.y, m.r - 2, m.d);
                out.add_term(n, c.clone() * C::ratio(r * (r - 1), 1));
            }
        }
        out
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> InvariantPoly<D> {
        let mut out = InvariantPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    /// Substitutes a numeric dimension, leaving a polynomial in `X, Y, R`.
    pub fn at_dim(&self, d: C) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for _ in 0..m.d {
                v = v * d.clone();
            }
            out.add_term(Monomial::new(m.x, m.y, m.r, 0), v);
        }
        out
    }
}

impl InvariantPoly<Exact> {
    pub fn to_complex<T: Real>(&self) -> InvariantPoly<Complex<T>> {
        self.map(|c| Complex::new(rational_to(&c.re), rational_to(&c.im)))
    }
}

fn rational_to<T: Real>(r: &BigRational) -> T {
    T::lit(r.to_f64().unwrap_or(f64::NAN))
}

impl<T: Real> InvariantPoly<Complex<T>> {
    pub fn eval(&self, x: T, y: T, r: T, d: T) -> Complex<T> {
        let mut acc = Complex::zero();
        for (m, c) in &self.terms {
            let v = x.powi(m.x as i32) * y.powi(m.y as i32) * r.powi(m.r as i32) * d.powi(m.d as i32);
            acc = acc + c * v;
        }
        acc
    }
}

/// Multi-axis monomial `prod_a P_a^i_a Q_a^j_a` as a list of exponent pairs.
pub(crate) type AxisExponents = Vec<(u32, u32)>;

/// Expands an invariant polynomial (with `d` already substituted) into
/// Cartesian monomials over `dim` axes.
pub(crate) fn expand_cartesian<T: Real>(
    poly: &InvariantPoly<Complex<T>>,
    dim: usize,
) -> BTreeMap<AxisExponents, Complex<T>> {
    type Map<T> = BTreeMap<AxisExponents, Complex<T>>;
    fn times_sum<T: Real>(src: &Map<T>, dim: usize, dp: u32, dq: u32) -> Map<T> {
        let mut out = Map::new();
        for (k, c) in src {
            for a in 0..dim {
                let mut e = k.clone();
                e[a].0 += dp;
                e[a].1 += dq;
                *out.entry(e).or_insert_with(Complex::zero) += *c;
            }
        }
        out
    }
    let mut total: Map<T> = Map::new();
    for (m, c) in poly.terms() {
        debug_assert_eq!(m.d, 0, "substitute the dimension first");
        let mut acc: Map<T> = Map::new();
        acc.insert(vec![(0, 0); dim], *c);
        for _ in 0..m.x {
            acc = times_sum(&acc, dim, 2, 0);
        }
        for _ in 0..m.y {
            acc = times_sum(&acc, dim, 0, 2);
        }
        for _ in 0..m.r {
            acc = times_sum(&acc, dim, 1, 1);
        }
        for (k, v) in acc {
            *total.entry(k).or_insert_with(Complex::zero) += v;
        }
    }
    total.retain(|_, v| !v.is_zero());
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Exact {
        Exact::ratio(n, d)
    }

    #[test]
    fn derivative_rules_on_simple_monomials() {
        // Q^2 -> Q.grad gives 2 Q^2, laplacian gives 2 d
        let y = InvariantPoly::<Exact>::zero().with(Monomial::new(0, 1, 0, 0), q(1, 1));
        assert_eq!(y.q_dot_grad(), y.scale(&q(2, 1)));
        assert_eq!(
            y.laplacian(),
            InvariantPoly::zero().with(Monomial::new(0, 0, 0, 1), q(2, 1))
        );
        // R^2 = (P.Q)^2 -> laplacian 2 P^2, P.grad 2 P^2 R
        let r2 = InvariantPoly::<Exact>::zero().with(Monomial::new(0, 0, 2, 0), q(1, 1));
        assert_eq!(
            r2.laplacian(),
            InvariantPoly::zero().with(Monomial::new(1, 0, 0, 0), q(2, 1))
        );
        assert_eq!(
            r2.p_dot_grad(),
            InvariantPoly::zero().with(Monomial::new(1, 0, 1, 0), q(2, 1))
        );
    }

    #[test]
    fn laplacian_of_mixed_monomial_matches_cartesian_derivative() {
        // X Y R in d = 2, compare against finite differences in Q
        let m = InvariantPoly::<Complex<f64>>::zero().with(Monomial::new(1, 1, 1, 0), Complex::new(1.0, 0.0));
        let lap = m.laplacian().at_dim(Complex::new(2.0, 0.0));
        let (p, qv) = ([0.7, -1.1], [0.4, 0.9]);
        let f = |q: [f64; 2]| {
            let x = p[0] * p[0] + p[1] * p[1];
            let y = q[0] * q[0] + q[1] * q[1];
            let r = p[0] * q[0] + p[1] * q[1];
            x * y * r
        };
        let h = 1e-4;
        let mut fd = 0.0;
        for a in 0..2 {
            let mut up = qv;
            let mut dn = qv;
            up[a] += h;
            dn[a] -= h;
            fd += (f(up) - 2.0 * f(qv) + f(dn)) / (h * h);
        }
        let x = p[0] * p[0] + p[1] * p[1];
        let y = qv[0] * qv[0] + qv[1] * qv[1];
        let r = p[0] * qv[0] + p[1] * qv[1];
        let v = lap.eval(x, y, r, 2.0);
        assert!((v.re - fd).abs() < 1e-5, "{} vs {fd}", v.re);
    }

    #[test]
    fn cartesian_expansion_of_r_squared() {
        let r2 = InvariantPoly::<Complex<f64>>::zero().with(Monomial::new(0, 0, 2, 0), Complex::new(1.0, 0.0));
        let e = expand_cartesian(&r2, 2);
        // (P1 Q1 + P2 Q2)^2 = P1^2 Q1^2 + 2 P1 Q1 P2 Q2 + P2^2 Q2^2
        assert_eq!(e.len(), 3);
        assert_eq!(e[&vec![(1, 1), (1, 1)]], Complex::new(2.0, 0.0));
        assert_eq!(e[&vec![(2, 2), (0, 0)]], Complex::new(1.0, 0.0));
    }
}
