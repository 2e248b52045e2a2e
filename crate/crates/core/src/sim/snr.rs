use serde::Serialize;

use super::grid::Grid1D;
use super::joint::OutcomeDistribution;
use super::wavefunction::GaussianSpec;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const SNR_GRID_POINTS: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SnrResult<T> {
    /// λ²α²/d².
    pub analytic: T,
    /// (∫aP)² / (∫a²P − (∫aP)²) evaluated on the grid.
    pub simulated: T,
    /// |simulated − analytic| / analytic, or |simulated| when analytic is 0.
    pub relative_error: T,
}

/// Signal-to-noise of a von Neumann measurement of a system localized at α
/// with a zero-mean Gaussian probe, for which P(a) = |φ(a − λα)|².
pub fn snr<T: Real>(probe: &GaussianSpec<T>, lambda: T, alpha: T) -> Result<SnrResult<T>> {
    if !(probe.width > T::zero() && probe.width.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "probe width",
            value: probe.width.as_f64(),
            constraint: "probe width must be finite and > 0",
        });
    }
    if probe.center != T::zero() {
        return Err(Error::InvalidParameter {
            name: "probe center",
            value: probe.center.as_f64(),
            constraint: "the probe must have zero mean",
        });
    }
    if !(lambda.is_finite() && alpha.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda.as_f64(),
            constraint: "lambda and alpha must be finite",
        });
    }
    let shift = lambda * alpha;
    let half = shift.abs() + T::lit(12.0) * probe.width;
    let grid = Grid1D::symmetric(half, SNR_GRID_POINTS)?;
    let p = OutcomeDistribution::from_fn(grid, |a| probe.density(a - shift));
    let m1 = p.mean() / p.integral();
    let m2 = p.second_moment() / p.integral();
    let simulated = m1 * m1 / (m2 - m1 * m1);
    let analytic = shift * shift / (probe.width * probe.width);
    let relative_error = if analytic > T::zero() {
        (simulated - analytic).abs() / analytic
    } else {
        simulated.abs()
    };
    Ok(SnrResult {
        analytic,
        simulated,
        relative_error,
    })
}
