//! Reference distributions used to judge simulated measurements.

use super::grid::Grid1D;
use super::joint::{apply_transform_on, outcome_distribution, OutcomeDistribution};
use super::wavefunction::{sample_gaussian, GaussianSpec, WaveFunction};
use crate::cv::{vnm, CoordTransform};
use crate::error::Result;
use crate::scalar::Real;

/// (1/λ)|ψ(a/λ)|², the ideal scaled Born distribution.
pub fn scaled_born<T: Real>(psi: &WaveFunction<T>, lambda: T, grid: Grid1D<T>) -> OutcomeDistribution<T> {
    OutcomeDistribution::from_fn(grid, |a| {
        psi.interpolate(a / lambda).map_or(T::zero(), |z| z.norm_sqr()) / lambda
    })
}

/// ∫|ψ(x)|²|φ(a − λx)|²dx for Gaussian ψ and φ: a Gaussian of mean
/// λx₀ + y₀ and variance λ²σ² + d².
pub fn vnm_gaussian<T: Real>(
    system: &GaussianSpec<T>,
    probe: &GaussianSpec<T>,
    lambda: T,
    grid: Grid1D<T>,
) -> OutcomeDistribution<T> {
    let mean = lambda * system.center + probe.center;
    let width = (lambda * lambda * system.width * system.width + probe.width * probe.width).sqrt();
    let g = GaussianSpec {
        center: mean,
        width,
        momentum: T::zero(),
    };
    OutcomeDistribution::from_fn(grid, |a| g.density(a))
}

/// Outcome density for Gaussian ψ and φ under any transform with nonzero
/// determinant. With u = ax + by and v = cx + dy independent Gaussians,
/// y = (a·v − c·u)/det is Gaussian too; momenta do not enter |Ψ|².
pub fn gaussian_marginal<T: Real>(
    t: &CoordTransform<T>,
    system: &GaussianSpec<T>,
    probe: &GaussianSpec<T>,
    grid: Grid1D<T>,
) -> OutcomeDistribution<T> {
    let det = t.det();
    let mean = (t.a * probe.center - t.c * system.center) / det;
    let var = ((t.c * system.width).powi(2) + (t.a * probe.width).powi(2)) / (det * det);
    if var == T::zero() {
        // y does not depend on the inputs' spread: a point mass, unrepresentable
        return OutcomeDistribution::from_fn(grid, |_| T::nan());
    }
    let g = GaussianSpec {
        center: mean,
        width: var.sqrt(),
        momentum: T::zero(),
    };
    OutcomeDistribution::from_fn(grid, |a| g.density(a))
}

/// Richardson extrapolation of simulated von Neumann distributions to zero
/// probe width: with P_w − P₀ = O(w²), P₀ ≈ (4P_{w/2} − P_w)/3.
pub fn vnm_width_extrapolated<T: Real>(
    psi: &WaveFunction<T>,
    lambda: T,
    probe_width: T,
    probe_grid: Grid1D<T>,
) -> Result<OutcomeDistribution<T>> {
    let t = vnm(lambda)?;
    let run = |w: T| -> Result<OutcomeDistribution<T>> {
        let phi = sample_gaussian(&GaussianSpec::real(T::zero(), w)?, probe_grid)?;
        let joint = apply_transform_on(&t, psi, &phi, *psi.grid(), probe_grid)?;
        Ok(outcome_distribution(&joint))
    };
    let coarse = run(probe_width)?;
    let fine = run(probe_width * T::lit(0.5))?;
    let density = fine
        .density()
        .iter()
        .zip(coarse.density())
        .map(|(&f, &c)| (T::lit(4.0) * f - c) / T::lit(3.0))
        .collect();
    OutcomeDistribution::new(probe_grid, density)
}
