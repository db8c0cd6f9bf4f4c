//! One- plus two-body potentials and the per-particle energy split.

use crate::scalar::Real;

/// `U(q) = sum_j u1(q_j) + sum_{j<k} u2(q_j, q_k)` in `dim` dimensions.
///
/// Gradients and Hessians of `u2` are with respect to its first argument;
/// Hessians are row-major `dim x dim`.
pub trait PotentialModel<T>: Sync {
    fn dim(&self) -> usize;

    fn one_body(&self, q: &[T]) -> T;
    fn one_body_grad(&self, q: &[T]) -> Vec<T>;
    fn one_body_hess(&self, q: &[T]) -> Vec<T>;

    fn two_body(&self, a: &[T], b: &[T]) -> T;
    fn two_body_grad(&self, a: &[T], b: &[T]) -> Vec<T>;
    fn two_body_hess(&self, a: &[T], b: &[T]) -> Vec<T>;
}

/// `U(q)` for the whole configuration.
pub fn total_energy<T: Real, M: PotentialModel<T> + ?Sized>(model: &M, config: &[Vec<T>]) -> T {
    let mut u = T::zero();
    for (j, qj) in config.iter().enumerate() {
        u = u + model.one_body(qj);
        for qk in &config[j + 1..] {
            u = u + model.two_body(qj, qk);
        }
    }
    u
}

/// `U_j(r; q) = u1(r) + 1/2 sum_{k != j} u2(r, q_k)`.
pub fn test_particle_energy<T: Real, M: PotentialModel<T> + ?Sized>(model: &M, config: &[Vec<T>], j: usize, r: &[T]) -> T {
    let half = T::lit(0.5);
    config
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != j)
        .fold(model.one_body(r), |u, (_, qk)| u + half * model.two_body(r, qk))
}

/// Gradient of [`test_particle_energy`] in `r`.
pub fn test_particle_grad<T: Real, M: PotentialModel<T> + ?Sized>(model: &M, config: &[Vec<T>], j: usize, r: &[T]) -> Vec<T> {
    let half = T::lit(0.5);
    let mut g = model.one_body_grad(r);
    for (k, qk) in config.iter().enumerate() {
        if k != j {
            for (gi, x) in g.iter_mut().zip(model.two_body_grad(r, qk)) {
                *gi = *gi + half * x;
            }
        }
    }
    g
}

/// Hessian of [`test_particle_energy`] in `r`.
pub fn test_particle_hess<T: Real, M: PotentialModel<T> + ?Sized>(model: &M, config: &[Vec<T>], j: usize, r: &[T]) -> Vec<T> {
    let half = T::lit(0.5);
    let mut h = model.one_body_hess(r);
    for (k, qk) in config.iter().enumerate() {
        if k != j {
            for (hi, x) in h.iter_mut().zip(model.two_body_hess(r, qk)) {
                *hi = *hi + half * x;
            }
        }
    }
    h
}

/// `U_j = u1(q_j) + 1/2 sum_{k != j} u2(q_j, q_k)`; these add up to `U(q)`.
pub fn per_particle_energy<T: Real, M: PotentialModel<T> + ?Sized>(model: &M, config: &[Vec<T>], j: usize) -> T {
    test_particle_energy(model, config, j, &config[j])
}

/// Lennard-Jones pairs `4 eps [(sigma/r)^12 - (sigma/r)^6]` with an optional
/// harmonic confinement `k q^2 / 2` on every particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LennardJones<T> {
    pub dim: usize,
    pub epsilon: T,
    pub sigma: T,
    pub confinement: T,
}

impl<T: Real> LennardJones<T> {
    pub fn new(dim: usize, confinement: T) -> Self {
        Self {
            dim,
            epsilon: T::one(),
            sigma: T::one(),
            confinement,
        }
    }

    /// Pair distance at the minimum, `2^(1/6) sigma`.
    pub fn equilibrium_spacing(&self) -> T {
        T::lit(2.0).powf(T::lit(1.0 / 6.0)) * self.sigma
    }

    /// `(u(r), u'(r), u''(r))`.
    pub fn radial(&self, r: T) -> (T, T, T) {
        let s6 = (self.sigma / r).powi(6);
        let s12 = s6 * s6;
        let four = T::lit(4.0) * self.epsilon;
        let u = four * (s12 - s6);
        let du = four * (T::lit(-12.0) * s12 + T::lit(6.0) * s6) / r;
        let d2u = four * (T::lit(156.0) * s12 - T::lit(42.0) * s6) / (r * r);
        (u, du, d2u)
    }

    fn separation(a: &[T], b: &[T]) -> (Vec<T>, T) {
        let dx: Vec<T> = a.iter().zip(b).map(|(&x, &y)| x - y).collect();
        let r = dx.iter().map(|&x| x * x).sum::<T>().sqrt();
        (dx, r)
    }
}

impl<T: Real> PotentialModel<T> for LennardJones<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn one_body(&self, q: &[T]) -> T {
        self.confinement * T::lit(0.5) * q.iter().map(|&x| x * x).sum::<T>()
    }

    fn one_body_grad(&self, q: &[T]) -> Vec<T> {
        q.iter().map(|&x| self.confinement * x).collect()
    }

    fn one_body_hess(&self, _q: &[T]) -> Vec<T> {
        let d = self.dim;
        (0..d * d)
            .map(|k| if k / d == k % d { self.confinement } else { T::zero() })
            .collect()
    }

    fn two_body(&self, a: &[T], b: &[T]) -> T {
        let (_, r) = Self::separation(a, b);
        self.radial(r).0
    }

    fn two_body_grad(&self, a: &[T], b: &[T]) -> Vec<T> {
        let (dx, r) = Self::separation(a, b);
        let (_, du, _) = self.radial(r);
        dx.iter().map(|&x| du * x / r).collect()
    }

    fn two_body_hess(&self, a: &[T], b: &[T]) -> Vec<T> {
        let d = self.dim;
        let (dx, r) = Self::separation(a, b);
        let (_, du, d2u) = self.radial(r);
        let mut h = vec![T::zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                let rr = dx[i] * dx[j] / (r * r);
                let delta = if i == j { T::one() } else { T::zero() };
                h[i * d + j] = d2u * rr + du / r * (delta - rr);
            }
        }
        h
    }
}
