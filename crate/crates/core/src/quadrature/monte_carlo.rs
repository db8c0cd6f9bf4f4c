//! Importance-sampled loop integrals for any loop length.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::commutation::WMethod;
use crate::error::{Error, Result};
use crate::scalar::{cis, loop_sign, Real};
use crate::state::ThermoState;
use crate::symmetrization::{loop_phase_angle, CutoffPolicy};

use super::integrand::{Observable, Separable};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSampler<T> {
    pub samples: usize,
    pub seed: u64,
    /// Standard deviation of the Gaussian proposal per coordinate;
    /// `None` uses `1 / sqrt(beta)`.
    pub proposal_width: Option<T>,
}

impl<T: Real> McSampler<T> {
    pub const CHUNKS: usize = 64;

    pub fn new(samples: usize, seed: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::invalid("Monte Carlo needs at least one sample"));
        }
        Ok(Self {
            samples,
            seed,
            proposal_width: None,
        })
    }

    pub fn with_proposal_width(self, width: T) -> Result<Self> {
        if !(width > T::zero()) {
            return Err(Error::invalid(format!("proposal width must be positive, got {width}")));
        }
        Ok(Self {
            proposal_width: Some(width),
            ..self
        })
    }

    fn width(&self, beta: T) -> T {
        self.proposal_width.unwrap_or_else(|| T::one() / beta.sqrt())
    }

    /// Sample counts per chunk; fixed by `samples` alone.
    fn chunk_sizes(&self) -> Vec<usize> {
        let k = self.samples.min(Self::CHUNKS);
        (0..k)
            .map(|i| self.samples / k + usize::from(i < self.samples % k))
            .collect()
    }
}

/// Estimate with its jackknife standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate<T> {
    pub estimate: T,
    pub std_error: T,
}

/// Mean of `f(P, Q)` under the Gaussian proposal, times the inverse proposal
/// density, i.e. an estimate of `int f` over `2 * l * d` coordinates.
///
/// `f` receives the momenta and positions of all `l` particles, flattened
/// particle-major.
pub(crate) fn mc_integrate<T: Real, F>(l: usize, d: usize, beta: T, sampler: &McSampler<T>, f: F) -> McEstimate<T>
where
    F: Fn(&[T], &[T]) -> T + Sync,
{
    let sigma = sampler.width(beta);
    let dims = l * d;
    // (2 pi sigma^2)^(l d) for the 2 l d coordinates
    let norm = (T::lit(2.0) * T::PI() * sigma * sigma).powi(dims as i32);
    let half_inv_var = T::lit(0.5) / (sigma * sigma);
    let sizes = sampler.chunk_sizes();
    let sums: Vec<T> = sizes
        .par_iter()
        .enumerate()
        .map(|(chunk, &n)| {
            let mut rng = ChaCha8Rng::seed_from_u64(sampler.seed);
            rng.set_stream(chunk as u64);
            let mut p = vec![T::zero(); dims];
            let mut q = vec![T::zero(); dims];
            let mut acc = T::zero();
            for _ in 0..n {
                let mut r2 = T::zero();
                for x in p.iter_mut().chain(q.iter_mut()) {
                    let g: f64 = StandardNormal.sample(&mut rng);
                    *x = sigma * T::lit(g);
                    r2 = r2 + *x * *x;
                }
                acc = acc + f(&p, &q) * (r2 * half_inv_var).exp();
            }
            acc * norm
        })
        .collect();
    jackknife(&sums, &sizes)
}

/// Leave-one-chunk-out jackknife of the overall mean.
fn jackknife<T: Real>(sums: &[T], sizes: &[usize]) -> McEstimate<T> {
    let total: T = sums.iter().copied().sum();
    let n: usize = sizes.iter().sum();
    let mean = total / T::from_count(n);
    let k = sums.len();
    if k < 2 {
        return McEstimate {
            estimate: mean,
            std_error: T::nan(),
        };
    }
    let loo: Vec<T> = sums
        .iter()
        .zip(sizes)
        .map(|(&s, &m)| (total - s) / T::from_count(n - m))
        .collect();
    let loo_mean = loo.iter().copied().sum::<T>() / T::from_count(k);
    let var: T = loo.iter().map(|&x| (x - loo_mean) * (x - loo_mean)).sum::<T>() * T::from_count(k - 1)
        / T::from_count(k);
    McEstimate {
        estimate: mean,
        std_error: var.sqrt(),
    }
}

/// Split flattened coordinates into per-particle slices.
fn particles<T>(xs: &[T], d: usize) -> Vec<&[T]> {
    xs.chunks(d).collect()
}

/// `int dGamma^l Re[eta prod_j s_j(Gamma_j)]` with `s_1 = first`, the rest `rest`,
/// restricted by the cut-off, by importance sampling.
fn loop_integral<T: Real>(
    l: usize,
    ts: &ThermoState<T>,
    sampler: &McSampler<T>,
    pol: &CutoffPolicy<T>,
    first: &Separable<T>,
    rest: &Separable<T>,
    symmetric_sum: bool,
) -> McEstimate<T> {
    let d = ts.dim;
    let beta = ts.beta;
    mc_integrate(l, d, beta, sampler, |p, q| {
        let ps = particles(p, d);
        let qs = particles(q, d);
        if !pol.accepts(&ps, &qs) {
            return T::zero();
        }
        let plain: Vec<Complex<T>> = (0..l).map(|j| rest.eval(ps[j], qs[j], beta)).collect();
        let eta = cis(loop_phase_angle(&ps, &qs));
        let value = if symmetric_sum {
            // sum_k s_first(k) prod_{j != k} s_rest(j)
            (0..l).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
                let mut t = first.eval(ps[k], qs[k], beta);
                for (j, v) in plain.iter().enumerate() {
                    if j != k {
                        t = t * v;
                    }
                }
                acc + t
            })
        } else {
            plain.iter().fold(Complex::new(T::one(), T::zero()), |a, b| a * b)
        };
        (value * eta).re
    })
}

/// `-beta Omega_l` by importance sampling from the product Gaussian.
pub fn mc_loop_grand_potential<T: Real>(
    l: usize,
    ts: &ThermoState<T>,
    sampler: &McSampler<T>,
    pol: &CutoffPolicy<T>,
    method: &WMethod<T>,
) -> Result<McEstimate<T>> {
    if l == 0 {
        return Err(Error::invalid("loop length must be at least 1"));
    }
    let sep = Separable::new(method, ts.beta, ts.dim, Observable::Weight)?;
    let raw = loop_integral(l, ts, sampler, pol, &sep, &sep, false);
    let pre = loop_prefactor(ts, l) / T::from_count(l);
    Ok(scale(raw, pre))
}

/// `<H>_l` by importance sampling.
pub(crate) fn mc_loop_energy<T: Real>(
    l: usize,
    ts: &ThermoState<T>,
    sampler: &McSampler<T>,
    pol: &CutoffPolicy<T>,
    method: &WMethod<T>,
    use_wh: bool,
) -> Result<McEstimate<T>> {
    let obs = if use_wh {
        Observable::EnergyWh
    } else {
        Observable::Energy
    };
    let first = Separable::new(method, ts.beta, ts.dim, obs)?;
    let rest = Separable::new(method, ts.beta, ts.dim, Observable::Weight)?;
    let raw = loop_integral(l, ts, sampler, pol, &first, &rest, true);
    let pre = loop_prefactor(ts, l) / T::from_count(l);
    Ok(scale(raw, pre))
}

/// `(+-1)^(l-1) z^l (2 pi)^(-l d)`.
fn loop_prefactor<T: Real>(ts: &ThermoState<T>, l: usize) -> T {
    loop_sign::<T>(ts.sign(), l) * ts.z.powi(l as i32) * super::grid::phase_space_norm::<T>(l * ts.dim)
}

fn scale<T: Real>(e: McEstimate<T>, s: T) -> McEstimate<T> {
    McEstimate {
        estimate: e.estimate * s,
        std_error: e.std_error * s.abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::loop_term_grand_potential;

    #[test]
    fn gaussian_normalization_is_exact_for_the_boltzmann_integrand() {
        let beta = 0.7;
        let s = McSampler::new(500, 9).unwrap();
        let e = mc_integrate(3, 1, beta, &s, |p: &[f64], q: &[f64]| {
            let h: f64 = p.iter().chain(q).map(|x| x * x).sum::<f64>() * 0.5;
            (-beta * h).exp()
        });
        let exact = (2.0 * std::f64::consts::PI / beta).powi(3);
        assert!((e.estimate / exact - 1.0).abs() < 1e-12);
        assert!(e.std_error < 1e-10 * exact);
    }

    #[test]
    fn seed_determines_the_result() {
        let ts = ThermoState::boson_1d(1.0, 1.0).unwrap();
        let s = McSampler::new(2000, 42).unwrap();
        let m = WMethod::exact();
        let a = mc_loop_grand_potential(2, &ts, &s, &CutoffPolicy::none(), &m).unwrap();
        let b = mc_loop_grand_potential(2, &ts, &s, &CutoffPolicy::none(), &m).unwrap();
        assert_eq!(a, b);
        let c = mc_loop_grand_potential(2, &ts, &McSampler::new(2000, 43).unwrap(), &CutoffPolicy::none(), &m).unwrap();
        assert_ne!(a.estimate, c.estimate);
    }

    #[test]
    fn trimer_at_low_temperature() {
        let ts = ThermoState::<f64>::boson_1d(2.0, 1.0).unwrap();
        let s = McSampler::new(40_000, 7).unwrap();
        let e = mc_loop_grand_potential(3, &ts, &s, &CutoffPolicy::none(), &WMethod::exact()).unwrap();
        let exact = loop_term_grand_potential(&ts, 3);
        assert!((e.estimate - exact).abs() < 4.0 * e.std_error + 1e-3, "{e:?} vs {exact}");
    }
}
