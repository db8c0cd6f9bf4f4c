//! One-dimensional rules and the tensor grid description.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    GaussLegendre,
    Midpoint,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
///
/// Nodes are mirrored exactly about zero.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut x = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let eps = T::epsilon() * T::lit(4.0);
    let nf = T::from_count(n);
    for i in 0..n / 2 {
        // Tricomi initial guess for the i-th largest root
        let mut t = (T::PI() * (T::from_count(i) + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, t);
            dp = d;
            let step = p / d;
            t = t - step;
            if step.abs() <= eps {
                let (_, d) = legendre_with_derivative(n, t);
                dp = d;
                break;
            }
        }
        let wt = T::lit(2.0) / ((T::one() - t * t) * dp * dp);
        x[n - 1 - i] = t;
        x[i] = -t;
        w[n - 1 - i] = wt;
        w[i] = wt;
    }
    if n % 2 == 1 {
        let (_, d) = legendre_with_derivative(n, T::zero());
        x[n / 2] = T::zero();
        w[n / 2] = T::lit(2.0) / (d * d);
    }
    (x, w)
}

/// `(P_n(t), P_n'(t))`.
fn legendre_with_derivative<T: Real>(n: usize, t: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = t;
    if n == 0 {
        return (p0, T::zero());
    }
    for k in 1..n {
        let kf = T::from_count(k);
        let p2 = ((T::lit(2.0) * kf + T::one()) * t * p1 - kf * p0) / (kf + T::one());
        p0 = p1;
        p1 = p2;
    }
    let d = T::from_count(n) * (t * p1 - p0) / (t * t - T::one());
    (p1, d)
}

/// `P_0(t) ..= P_m(t)`.
fn legendre_all<T: Real>(m: usize, t: T) -> Vec<T> {
    let mut out = Vec::with_capacity(m + 1);
    out.push(T::one());
    if m >= 1 {
        out.push(t);
    }
    for k in 1..m {
        let kf = T::from_count(k);
        let next = ((T::lit(2.0) * kf + T::one()) * t * out[k] - kf * out[k - 1]) / (kf + T::one());
        out.push(next);
    }
    out
}

/// Nodes, weights and rule of one axis on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis<T> {
    pub lo: T,
    pub hi: T,
    pub rule: Rule,
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    // reference-interval nodes and weights, kept for the window matrix
    unit_nodes: Vec<T>,
    unit_weights: Vec<T>,
}

impl<T: Real> Axis<T> {
    pub fn new(lo: T, hi: T, n: usize, rule: Rule) -> Self {
        let (t, w) = match rule {
            Rule::GaussLegendre => gauss_legendre(n),
            Rule::Midpoint => {
                let h = T::lit(2.0) / T::from_count(n);
                let t = (0..n)
                    .map(|i| -T::one() + h * (T::from_count(i) + T::lit(0.5)))
                    .collect();
                (t, vec![h; n])
            }
        };
        let c = (hi + lo) * T::lit(0.5);
        let h = (hi - lo) * T::lit(0.5);
        Self {
            lo,
            hi,
            rule,
            nodes: t.iter().map(|&t| c + h * t).collect(),
            weights: w.iter().map(|&w| h * w).collect(),
            unit_nodes: t,
            unit_weights: w,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Matrix `V` (row-major, `n x n`) with `sum_j V[i][j] f(x_j)` approximating
    /// the integral of `f` over `[x_i - r, x_i + r]` clipped to the axis.
    ///
    /// For Gauss-Legendre the window integral of the Legendre interpolant is
    /// exact, so smooth integrands converge spectrally despite the sharp window.
    pub fn window_matrix(&self, r: T) -> Vec<T> {
        let n = self.len();
        match self.rule {
            Rule::Midpoint => {
                let mut v = vec![T::zero(); n * n];
                for i in 0..n {
                    for j in 0..n {
                        if (self.nodes[i] - self.nodes[j]).abs() <= r {
                            v[i * n + j] = self.weights[j];
                        }
                    }
                }
                v
            }
            Rule::GaussLegendre => {
                let c = (self.hi + self.lo) * T::lit(0.5);
                let h = (self.hi - self.lo) * T::lit(0.5);
                let clip = |x: T| ((x - c) / h).max(-T::one()).min(T::one());
                // antiderivative of (k + 1/2) P_k, k < n, at u
                let anti = |u: T| -> Vec<T> {
                    let p = legendre_all(n + 1, u);
                    let half = T::lit(0.5);
                    (0..n)
                        .map(|k| {
                            if k == 0 {
                                half * u
                            } else {
                                half * (p[k + 1] - p[k - 1])
                            }
                        })
                        .collect()
                };
                let basis: Vec<Vec<T>> = self.unit_nodes.iter().map(|&t| legendre_all(n, t)).collect();
                let mut v = vec![T::zero(); n * n];
                for i in 0..n {
                    let hi = anti(clip(self.nodes[i] + r));
                    let lo = anti(clip(self.nodes[i] - r));
                    let dk: Vec<T> = hi.iter().zip(&lo).map(|(&a, &b)| a - b).collect();
                    for j in 0..n {
                        let s: T = dk.iter().zip(&basis[j]).map(|(&a, &b)| a * b).sum();
                        v[i * n + j] = h * self.unit_weights[j] * s;
                    }
                }
                v
            }
        }
    }
}

/// Tensor-product grid over `|P| <= limit_p`, `|Q| <= limit_q` on every axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureGrid<T> {
    pub limit_p: T,
    pub limit_q: T,
    pub nodes_per_axis: usize,
    pub rule: Rule,
    /// Shift of the momentum interval; nonzero breaks the `P -> -P` symmetry.
    pub offset_p: T,
}

impl<T: Real> QuadratureGrid<T> {
    pub const MIN_NODES: usize = 8;

    pub fn new(limit_p: T, limit_q: T, nodes_per_axis: usize, rule: Rule) -> Result<Self> {
        if !(limit_p > T::zero()) || !(limit_q > T::zero()) || !limit_p.is_finite() || !limit_q.is_finite() {
            return Err(Error::invalid("grid limits must be positive and finite"));
        }
        if nodes_per_axis < Self::MIN_NODES {
            return Err(Error::invalid(format!(
                "need at least {} nodes per axis, got {nodes_per_axis}",
                Self::MIN_NODES
            )));
        }
        Ok(Self {
            limit_p,
            limit_q,
            nodes_per_axis,
            rule,
            offset_p: T::zero(),
        })
    }

    /// `max(8, 8 / sqrt(beta))`.
    pub fn default_limit(beta: T) -> T {
        let eight = T::lit(8.0);
        eight.max(eight / beta.sqrt())
    }

    /// Gauss-Legendre with the default limits and `nodes` per axis.
    pub fn gauss(beta: T, nodes: usize) -> Result<Self> {
        let l = Self::default_limit(beta);
        Self::new(l, l, nodes, Rule::GaussLegendre)
    }

    /// Six nodes per unit length, rounded up to a multiple of 16.
    pub fn default_nodes(beta: T) -> usize {
        let per_axis = (T::lit(12.0) * Self::default_limit(beta)).ceil().to_usize().unwrap_or(usize::MAX);
        per_axis.div_ceil(16) * 16
    }

    /// Default limits and node count for `beta`.
    pub fn for_beta(beta: T) -> Self {
        Self::gauss(beta, Self::default_nodes(beta)).expect("default grid is valid")
    }

    pub fn with_offset_p(self, offset_p: T) -> Self {
        Self { offset_p, ..self }
    }

    pub fn with_nodes(self, nodes_per_axis: usize) -> Result<Self> {
        Self::new(self.limit_p, self.limit_q, nodes_per_axis, self.rule).map(|g| g.with_offset_p(self.offset_p))
    }

    pub fn p_axis(&self) -> Axis<T> {
        Axis::new(
            self.offset_p - self.limit_p,
            self.offset_p + self.limit_p,
            self.nodes_per_axis,
            self.rule,
        )
    }

    pub fn q_axis(&self) -> Axis<T> {
        Axis::new(-self.limit_q, self.limit_q, self.nodes_per_axis, self.rule)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre::<f64>(7);
        for k in 0..14 {
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((s - exact).abs() < 1e-14, "k={k}");
        }
        assert_eq!(x[3], 0.0);
        assert_eq!(x[0], -x[6]);
    }

    #[test]
    fn single_precision_rule() {
        let (x, w) = gauss_legendre::<f32>(16);
        let s: f32 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        assert!((s - 2.0 / 3.0).abs() < 1e-5);
    }

    #[test]
    fn window_matrix_integrates_smooth_functions() {
        let axis = Axis::<f64>::new(-6.0, 6.0, 48, Rule::GaussLegendre);
        let v = axis.window_matrix(1.5);
        let f: Vec<f64> = axis.nodes.iter().map(|x| (-x * x / 2.0).exp()).collect();
        for i in [0, 11, 24, 40] {
            let x = axis.nodes[i];
            let s: f64 = (0..48).map(|j| v[i * 48 + j] * f[j]).sum();
            // fine rule on the clipped window as oracle
            let (lo, hi) = ((x - 1.5f64).max(-6.0), (x + 1.5f64).min(6.0));
            let fine = Axis::<f64>::new(lo, hi, 60, Rule::GaussLegendre);
            let exact: f64 = fine.nodes.iter().zip(&fine.weights).map(|(y, w)| w * (-y * y / 2.0).exp()).sum();
            assert!((s - exact).abs() < 1e-10, "i={i}: {s} vs {exact}");
        }
    }

    #[test]
    fn wide_window_reduces_to_weights() {
        let axis = Axis::<f64>::new(-3.0, 3.0, 20, Rule::GaussLegendre);
        let v = axis.window_matrix(100.0);
        for i in 0..20 {
            for j in 0..20 {
                assert!((v[i * 20 + j] - axis.weights[j]).abs() < 1e-12);
            }
        }
    }
}
