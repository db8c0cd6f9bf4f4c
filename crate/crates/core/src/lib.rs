//! Quantum statistics of harmonic oscillators as weighted integrals over
//! classical phase space.
//!
//! The Boltzmann weight is corrected by the commutation function `W(p, q)`
//! and the symmetrization loops of identical bosons or fermions. `W` is
//! available as an exact Hermite-function series and as two high-temperature
//! expansions; the loop grand potentials and energies are integrated on
//! Gauss-Legendre grids and checked against closed forms.
//!
//! All routines are generic over [`Real`] (`f32` or `f64`); the aliases at the
//! bottom fix the scalar to `f64`.

pub mod analytic;
pub mod commutation;
pub mod error;
pub mod meanfield;
pub mod quadrature;
pub mod scalar;
pub mod special;
pub mod state;
pub mod symmetrization;

pub use analytic::{
    average_energy_ideal_sho, grand_potential_ideal_sho, grand_potential_textbook, LoopOrder,
};
pub use commutation::{
    w_big_expansion, w_small_expansion, weighted_w, weighted_w_energy_series, weighted_wh, SeriesTruncation,
    WMethod,
};
pub use error::{Error, Result};
pub use meanfield::{build_local_modes, meanfield_weight, LocalMode, PotentialModel};
pub use quadrature::{loop_energy, loop_grand_potential, McSampler, QuadratureGrid};
pub use scalar::Real;
pub use state::{PhasePoint, Statistics, ThermoState};
pub use symmetrization::{eta_loop, CutoffPolicy, LoopConfiguration};

pub use num_complex::Complex;

pub type Complex64 = Complex<f64>;
pub type PhasePoint64 = PhasePoint<f64>;
pub type ThermoState64 = ThermoState<f64>;
pub type SeriesTruncation64 = SeriesTruncation<f64>;
pub type WMethod64 = WMethod<f64>;
pub type QuadratureGrid64 = QuadratureGrid<f64>;
pub type LoopConfiguration64 = LoopConfiguration<f64>;
pub type CutoffPolicy64 = CutoffPolicy<f64>;
pub type LocalMode64 = LocalMode<f64>;
pub type McSampler64 = McSampler<f64>;
