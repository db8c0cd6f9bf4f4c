//! Phase-space integration of loop grand potentials and energies.

mod energy;
mod grid;
mod integrand;
mod monte_carlo;
mod rule;
mod sum;

pub use energy::{average_energy_loops, loop_energy};
pub use grid::{imaginary_residual, loop_grand_potential, monomer_grand_potential, ImaginaryResidual};
pub use monte_carlo::{mc_loop_grand_potential, McEstimate, McSampler};
pub use rule::{gauss_legendre, Axis, QuadratureGrid, Rule};
pub use sum::pairwise_sum;
