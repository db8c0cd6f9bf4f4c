//! Loop symmetrization phase and the compactness cut-off.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cis, loop_sign, Real};
use crate::state::{PhasePoint, Statistics};

/// Phase-space points `Gamma_1 .. Gamma_l` of one permutation loop.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopConfiguration<T> {
    points: Vec<PhasePoint<T>>,
    stats: Statistics,
}

impl<T: Real> LoopConfiguration<T> {
    pub fn new(points: Vec<PhasePoint<T>>, stats: Statistics) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::invalid("a loop needs at least one point"));
        };
        let d = first.dim();
        if let Some(bad) = points.iter().find(|p| p.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.dim(),
            });
        }
        Ok(Self { points, stats })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn points(&self) -> &[PhasePoint<T>] {
        &self.points
    }

    pub fn stats(&self) -> Statistics {
        self.stats
    }

    /// Rotates the loop so that point `k` comes first.
    pub fn rotated(&self, k: usize) -> Self {
        let mut points = self.points.clone();
        points.rotate_left(k % self.points.len());
        Self {
            points,
            stats: self.stats,
        }
    }

    pub fn with_stats(&self, stats: Statistics) -> Self {
        Self {
            points: self.points.clone(),
            stats,
        }
    }
}

/// Exponent `sum_j (q_j - q_{j+1}) . p_j` of the loop phase, cyclic.
pub(crate) fn loop_phase_angle<T: Real>(ps: &[&[T]], qs: &[&[T]]) -> T {
    let l = ps.len();
    let mut angle = T::zero();
    for j in 0..l {
        let k = (j + 1) % l;
        for ((&qj, &qk), &pj) in qs[j].iter().zip(qs[k]).zip(ps[j]) {
            angle = angle + (qj - qk) * pj;
        }
    }
    angle
}

/// `eta^(l) = (+-1)^(l-1) prod_j exp(i q_{j,j+1} . p_j)` with `q_{l,l+1} = q_l - q_1`.
pub fn eta_loop<T: Real>(cfg: &LoopConfiguration<T>) -> Complex<T> {
    let ps: Vec<&[T]> = cfg.points.iter().map(|p| p.p()).collect();
    let qs: Vec<&[T]> = cfg.points.iter().map(|p| p.q()).collect();
    cis(loop_phase_angle(&ps, &qs)) * loop_sign::<T>(cfg.stats.sign(), cfg.len())
}

/// Bounds on neighbour separations within a loop, per Cartesian component.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CutoffPolicy<T> {
    r_cut_q: Option<T>,
    r_cut_p: Option<T>,
}

impl<T: Real> CutoffPolicy<T> {
    pub fn none() -> Self {
        Self {
            r_cut_q: None,
            r_cut_p: None,
        }
    }

    pub fn new(r_cut_q: Option<T>, r_cut_p: Option<T>) -> Result<Self> {
        for r in [r_cut_q, r_cut_p].into_iter().flatten() {
            if !(r > T::zero()) {
                return Err(Error::invalid(format!("cut-off radius must be positive, got {r}")));
            }
        }
        Ok(Self { r_cut_q, r_cut_p })
    }

    /// The same radius for positions and momenta.
    pub fn symmetric(r: T) -> Result<Self> {
        Self::new(Some(r), Some(r))
    }

    pub fn r_cut_q(&self) -> Option<T> {
        self.r_cut_q
    }

    pub fn r_cut_p(&self) -> Option<T> {
        self.r_cut_p
    }

    pub fn is_active(&self) -> bool {
        self.r_cut_q.is_some() || self.r_cut_p.is_some()
    }

    pub(crate) fn accepts(&self, ps: &[&[T]], qs: &[&[T]]) -> bool {
        let l = ps.len();
        let within = |xs: &[&[T]], r: Option<T>| match r {
            None => true,
            Some(r) => (0..l).all(|j| {
                let k = (j + 1) % l;
                xs[j].iter().zip(xs[k]).all(|(&a, &b)| (a - b).abs() <= r)
            }),
        };
        within(qs, self.r_cut_q) && within(ps, self.r_cut_p)
    }
}

/// True when every cyclic neighbour pair of the loop is within the cut-off.
pub fn cutoff_accept<T: Real>(cfg: &LoopConfiguration<T>, pol: &CutoffPolicy<T>) -> bool {
    let ps: Vec<&[T]> = cfg.points.iter().map(|p| p.p()).collect();
    let qs: Vec<&[T]> = cfg.points.iter().map(|p| p.q()).collect();
    pol.accepts(&ps, &qs)
}
