//! Cyclic Jacobi eigensolver for small symmetric matrices.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Eigenvalues ascending, eigenvectors as columns of a row-major `d x d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen<T> {
    pub values: Vec<T>,
    pub vectors: Vec<T>,
}

impl<T: Real> SymmetricEigen<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Component `i` of eigenvector `k`.
    pub fn vector(&self, i: usize, k: usize) -> T {
        self.vectors[i * self.dim() + k]
    }

    /// `X D X^T`.
    pub fn reconstruct(&self) -> Vec<T> {
        let d = self.dim();
        let mut out = vec![T::zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] = (0..d)
                    .map(|k| self.vector(i, k) * self.values[k] * self.vector(j, k))
                    .sum();
            }
        }
        out
    }

    /// `X^T v`.
    pub fn to_modes(&self, v: &[T]) -> Vec<T> {
        let d = self.dim();
        (0..d).map(|k| (0..d).map(|i| self.vector(i, k) * v[i]).sum()).collect()
    }

    /// `X diag(f(lambda)) X^T v`.
    pub fn apply_fn(&self, v: &[T], f: impl Fn(T) -> T) -> Vec<T> {
        let d = self.dim();
        let m = self.to_modes(v);
        (0..d)
            .map(|i| (0..d).map(|k| self.vector(i, k) * f(self.values[k]) * m[k]).sum())
            .collect()
    }
}

/// Diagonalizes a symmetric `d x d` matrix (row-major) by cyclic Jacobi
/// rotations.
pub fn hessian_eigen<T: Real>(a: &[T], d: usize) -> Result<SymmetricEigen<T>> {
    if a.len() != d * d || d == 0 {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: a.len(),
        });
    }
    let scale = a.iter().fold(T::zero(), |m, x| m.max(x.abs())).max(T::min_positive_value());
    let sym_tol = T::lit(1e-12).max(T::epsilon() * T::lit(8.0)) * scale.max(T::one());
    let mut asym = T::zero();
    for i in 0..d {
        for j in 0..i {
            asym = asym.max((a[i * d + j] - a[j * d + i]).abs());
        }
    }
    if asym > sym_tol {
        return Err(Error::AsymmetricMatrix(asym.as_f64()));
    }

    let mut m = a.to_vec();
    let mut v = vec![T::zero(); d * d];
    for i in 0..d {
        v[i * d + i] = T::one();
    }
    let off_tol = T::lit(1e-14).max(T::epsilon()) * scale;
    for _sweep in 0..64 {
        let off: T = (0..d)
            .flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * d + j] * m[i * d + j])
            .sum::<T>()
            .sqrt();
        if off < off_tol {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                let apq = m[p * d + q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (m[q * d + q] - m[p * d + p]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..d {
                    let mkp = m[k * d + p];
                    let mkq = m[k * d + q];
                    m[k * d + p] = c * mkp - s * mkq;
                    m[k * d + q] = s * mkp + c * mkq;
                }
                for k in 0..d {
                    let mpk = m[p * d + k];
                    let mqk = m[q * d + k];
                    m[p * d + k] = c * mpk - s * mqk;
                    m[q * d + k] = s * mpk + c * mqk;
                }
                for k in 0..d {
                    let vkp = v[k * d + p];
                    let vkq = v[k * d + q];
                    v[k * d + p] = c * vkp - s * vkq;
                    v[k * d + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| m[i * d + i].partial_cmp(&m[j * d + j]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&k| m[k * d + k]).collect();
    let mut vectors = vec![T::zero(); d * d];
    for (col, &k) in order.iter().enumerate() {
        for i in 0..d {
            vectors[i * d + col] = v[i * d + k];
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_two_by_two() {
        let e = hessian_eigen(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0], 3).unwrap();
        assert_eq!(e.values, vec![1.0; 3]);
        assert_eq!(e.vectors, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let e = hessian_eigen(&[2.0f64, 1.0, 1.0, 2.0], 2).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_frequencies() {
        let e = hessian_eigen(&[25.0f64, 0.0, 0.0, 0.0, 4.0, 0.0, 0.0, 0.0, 9.0], 3).unwrap();
        let f: Vec<f64> = e.values.iter().map(|v| v.sqrt()).collect();
        assert_eq!(f, vec![2.0, 3.0, 5.0]);
    }

    #[test]
    fn asymmetric_rejected() {
        assert!(matches!(
            hessian_eigen(&[1.0, 2.0, 0.0, 1.0], 2),
            Err(Error::AsymmetricMatrix(_))
        ));
    }

    #[test]
    fn single_precision_reconstruction() {
        let a = [4.0f32, 1.0, 0.5, 1.0, 3.0, -0.2, 0.5, -0.2, 1.0];
        let e = hessian_eigen(&a, 3).unwrap();
        for (x, y) in e.reconstruct().iter().zip(&a) {
            assert!((x - y).abs() < 1e-5);
        }
    }
}
