//! Loop-resolved average energy.

use crate::analytic::LoopOrder;
use crate::commutation::WMethod;
use crate::error::{Error, Result};
use crate::scalar::{loop_sign, Real};
use crate::state::ThermoState;
use crate::symmetrization::CutoffPolicy;

use super::grid::{dimer_integral, monomer_integral, phase_space_norm};
use super::integrand::Observable;
use super::monte_carlo::{mc_loop_energy, McSampler};
use super::rule::QuadratureGrid;

/// `<H>_l` for `l <= 2` on the grid.
///
/// With `use_wh` the energy enters through `W_H`, otherwise as `H W`.
pub fn loop_energy<T: Real>(
    l: usize,
    ts: &ThermoState<T>,
    grid: &QuadratureGrid<T>,
    pol: &CutoffPolicy<T>,
    method: &WMethod<T>,
    use_wh: bool,
) -> Result<T> {
    let obs = if use_wh {
        Observable::EnergyWh
    } else {
        Observable::Energy
    };
    match l {
        0 => Err(Error::invalid("loop length must be at least 1")),
        1 => {
            let i = monomer_integral(ts, grid, method, obs)?;
            Ok(ts.z * phase_space_norm::<T>(ts.dim) * i.re)
        }
        2 => {
            // both particles carry the energy; the two terms are equal
            let j = dimer_integral(ts, grid, pol, method, obs)?;
            Ok(loop_sign::<T>(ts.sign(), 2) * ts.z * ts.z * phase_space_norm::<T>(2 * ts.dim) * j.re)
        }
        _ => Err(Error::UnsupportedLoopOrder(l)),
    }
}

/// `sum_{l <= l_max} <H>_l`: grids for `l <= 2`, Monte Carlo beyond.
///
/// Each loop term is already the derivative of its own `ln Xi` contribution,
/// so no division by `Xi` appears.
pub fn average_energy_loops<T: Real>(
    l_max: LoopOrder,
    ts: &ThermoState<T>,
    grid: &QuadratureGrid<T>,
    sampler: &McSampler<T>,
    pol: &CutoffPolicy<T>,
    method: &WMethod<T>,
    use_wh: bool,
) -> Result<T> {
    let mut total = T::zero();
    for l in 1..=l_max.get() {
        total = total
            + if l <= 2 {
                loop_energy(l, ts, grid, pol, method, use_wh)?
            } else {
                mc_loop_energy(l, ts, sampler, pol, method, use_wh)?.estimate
            };
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::loop_term_energy;

    #[test]
    fn monomer_energy_matches_closed_form() {
        let ts = ThermoState::<f64>::boson_1d(1.0, 1.0).unwrap();
        let grid = QuadratureGrid::for_beta(1.0);
        for use_wh in [false, true] {
            let e = loop_energy(1, &ts, &grid, &CutoffPolicy::none(), &WMethod::exact(), use_wh).unwrap();
            assert!((e - loop_term_energy(&ts, 1)).abs() < 1e-8, "use_wh={use_wh}: {e}");
        }
    }

    #[test]
    fn classical_monomer_energy_is_d_over_beta_squared() {
        // int H exp(-beta H) / (2 pi)^d = d / beta^(d+1)
        let ts = ThermoState::new(0.9, 1.0, 2, crate::state::Statistics::Boson).unwrap();
        let grid = QuadratureGrid::for_beta(0.9);
        let e = loop_energy(1, &ts, &grid, &CutoffPolicy::none(), &WMethod::classical(), false).unwrap();
        assert!((e - 2.0 / 0.9f64.powi(3)).abs() < 1e-9);
    }
}
