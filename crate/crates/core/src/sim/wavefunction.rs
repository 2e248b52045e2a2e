use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use super::grid::Grid1D;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Edge-to-peak amplitude ratio above which a state does not fit its grid.
pub const EDGE_TOL: f64 = 1e-6;
/// Allowed deviation of ∫|ψ|² from one for inputs flagged normalized.
pub const NORM_TOL: f64 = 1e-6;

/// Gaussian wave packet: mean `center`, standard deviation `width` of |ψ|²,
/// and mean momentum `momentum`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GaussianSpec<T> {
    pub center: T,
    pub width: T,
    pub momentum: T,
}

impl<T: Real> GaussianSpec<T> {
    pub fn new(center: T, width: T, momentum: T) -> Result<Self> {
        if !(width.is_finite() && width > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "width",
                value: width.as_f64(),
                constraint: "Gaussian width must be finite and > 0",
            });
        }
        if !(center.is_finite() && momentum.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "center",
                value: center.as_f64(),
                constraint: "Gaussian center and momentum must be finite",
            });
        }
        Ok(Self { center, width, momentum })
    }

    pub fn real(center: T, width: T) -> Result<Self> {
        Self::new(center, width, T::zero())
    }

    /// (2πd²)^{-1/4} exp[−(x − x₀)²/(4d²) + ikx].
    pub fn amplitude(&self, x: T) -> Complex<T> {
        let d2 = self.width * self.width;
        let norm = (T::TAU() * d2).powf(T::lit(-0.25));
        let u = x - self.center;
        Complex::from_polar(norm * (-(u * u) / (T::lit(4.0) * d2)).exp(), self.momentum * x)
    }

    /// |ψ(x)|².
    pub fn density(&self, x: T) -> T {
        self.amplitude(x).norm_sqr()
    }
}

/// Complex amplitudes on a [`Grid1D`].
#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunction<T> {
    grid: Grid1D<T>,
    samples: Vec<Complex<T>>,
}

impl<T: Real> WaveFunction<T> {
    pub fn new(grid: Grid1D<T>, samples: Vec<Complex<T>>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                op: "WaveFunction::new",
                left: (grid.len(), 1),
                right: (samples.len(), 1),
            });
        }
        Ok(Self { grid, samples })
    }

    pub fn from_fn(grid: Grid1D<T>, f: impl Fn(T) -> Complex<T>) -> Self {
        let samples = grid.points().into_iter().map(f).collect();
        Self { grid, samples }
    }

    pub fn grid(&self) -> &Grid1D<T> {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn densities(&self) -> Vec<T> {
        self.samples.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Trapezoidal ∫|ψ|².
    pub fn norm_sqr(&self) -> T {
        self.grid.integrate(&self.densities())
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - T::one()).abs() <= T::lit(NORM_TOL)
    }

    pub fn check_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::Unnormalized {
                norm: self.norm_sqr().sqrt().as_f64(),
            })
        }
    }

    /// Rescaled to unit trapezoidal norm; errors on a vanishing state.
    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_sqr();
        if !(n > T::zero()) {
            return Err(Error::Unnormalized { norm: 0.0 });
        }
        let s = n.sqrt().recip();
        self.samples.iter_mut().for_each(|z| *z *= s);
        Ok(self)
    }

    /// max(|ψ(x_min)|, |ψ(x_max)|) / max|ψ|.
    pub fn edge_ratio(&self) -> T {
        let peak = self.samples.iter().fold(T::zero(), |m, z| m.max(z.norm()));
        if peak == T::zero() {
            return T::zero();
        }
        let edge = self.samples[0].norm().max(self.samples[self.samples.len() - 1].norm());
        edge / peak
    }

    pub fn check_fits(&self) -> Result<()> {
        let r = self.edge_ratio();
        if r >= T::lit(EDGE_TOL) {
            Err(Error::GridTooNarrow { edge_ratio: r.as_f64() })
        } else {
            Ok(())
        }
    }

    /// ∫x|ψ|², assuming unit norm.
    pub fn mean(&self) -> T {
        let g = self.grid.points();
        let v: Vec<T> = self.samples.iter().zip(&g).map(|(z, &x)| x * z.norm_sqr()).collect();
        self.grid.integrate(&v)
    }

    /// ∫(x − mean)²|ψ|², assuming unit norm.
    pub fn variance(&self) -> T {
        let m = self.mean();
        let g = self.grid.points();
        let v: Vec<T> = self
            .samples
            .iter()
            .zip(&g)
            .map(|(z, &x)| (x - m) * (x - m) * z.norm_sqr())
            .collect();
        self.grid.integrate(&v)
    }

    /// Catmull-Rom interpolation; `None` outside the grid.
    pub fn interpolate(&self, x: T) -> Option<Complex<T>> {
        interpolate(&self.grid, &self.samples, x)
    }

    /// ψ(−x) sampled on the same grid.
    pub fn reflected(&self) -> Self {
        Self::from_fn(self.grid, |x| self.interpolate(-x).unwrap_or_else(Complex::zero))
    }

    /// √∫|ψ − χ|² on a shared grid.
    pub fn l2_distance(&self, other: &Self) -> Result<T> {
        self.check_same_grid(other)?;
        let v: Vec<T> = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm_sqr())
            .collect();
        Ok(self.grid.integrate(&v).sqrt())
    }

    /// L² distance after removing the best global phase ⟨ψ|χ⟩/|⟨ψ|χ⟩|.
    pub fn l2_distance_up_to_phase(&self, other: &Self) -> Result<T> {
        let ov = self.overlap(other)?;
        let phase = if ov.norm() > T::zero() {
            ov / ov.norm()
        } else {
            Complex::new(T::one(), T::zero())
        };
        let rotated = Self {
            grid: other.grid,
            samples: other.samples.iter().map(|z| z * phase.conj()).collect(),
        };
        self.l2_distance(&rotated)
    }

    /// ∫ψ*χ by the trapezoid rule.
    pub fn overlap(&self, other: &Self) -> Result<Complex<T>> {
        self.check_same_grid(other)?;
        let re: Vec<T> = self.samples.iter().zip(&other.samples).map(|(a, b)| (a.conj() * b).re).collect();
        let im: Vec<T> = self.samples.iter().zip(&other.samples).map(|(a, b)| (a.conj() * b).im).collect();
        Ok(Complex::new(self.grid.integrate(&re), self.grid.integrate(&im)))
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::DimensionMismatch {
                op: "wavefunction comparison",
                left: (self.grid.len(), 1),
                right: (other.grid.len(), 1),
            });
        }
        Ok(())
    }
}

/// Samples a normalized Gaussian, failing if it does not decay inside the grid.
pub fn sample_gaussian<T: Real>(spec: &GaussianSpec<T>, grid: Grid1D<T>) -> Result<WaveFunction<T>> {
    let psi = WaveFunction::from_fn(grid, |x| spec.amplitude(x));
    psi.check_fits()?;
    psi.normalized()
}

/// Normalized superposition Σ ψₖ of Gaussian packets.
pub fn gaussian_superposition<T: Real>(specs: &[GaussianSpec<T>], grid: Grid1D<T>) -> Result<WaveFunction<T>> {
    let psi = WaveFunction::from_fn(grid, |x| specs.iter().map(|s| s.amplitude(x)).sum());
    psi.check_fits()?;
    psi.normalized()
}

/// Cubic Catmull-Rom interpolation of node values; edge stencils clamp to the
/// boundary nodes. `None` when `x` is outside the grid.
pub fn interpolate<T: Real>(grid: &Grid1D<T>, samples: &[Complex<T>], x: T) -> Option<Complex<T>> {
    if !grid.contains(x) {
        return None;
    }
    let n = grid.len();
    let t = (x - grid.x_min()) / grid.spacing();
    let i = t.floor().to_usize().unwrap_or(0).min(n - 2);
    let f = t - T::from_usize_lossy(i);
    let at = |k: isize| samples[(i as isize + k).clamp(0, n as isize - 1) as usize];
    let (p0, p1, p2, p3) = (at(-1), at(0), at(1), at(2));
    let half = T::lit(0.5);
    let (f2, f3) = (f * f, f * f * f);
    let w0 = half * (-f3 + T::lit(2.0) * f2 - f);
    let w1 = half * (T::lit(3.0) * f3 - T::lit(5.0) * f2 + T::lit(2.0));
    let w2 = half * (T::lit(-3.0) * f3 + T::lit(4.0) * f2 + f);
    let w3 = half * (f3 - f2);
    Some(p0 * w0 + p1 * w1 + p2 * w2 + p3 * w3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rustfft::FftPlanner;

    fn grid() -> Grid1D<f64> {
        Grid1D::default_grid()
    }

    #[test]
    fn gaussian_moments() {
        let psi = sample_gaussian(&GaussianSpec::real(0.0, 1.0).unwrap(), grid()).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(psi.mean().abs() < 1e-12);
        assert!((psi.variance() - 1.0).abs() < 1e-6);
        let psi = sample_gaussian(&GaussianSpec::new(1.5, 0.4, 2.0).unwrap(), grid()).unwrap();
        assert!((psi.mean() - 1.5).abs() < 1e-6 * 1.5);
        assert!((psi.variance() - 0.16).abs() < 1e-6 * 0.16);
    }

    #[test]
    fn momentum_via_fft() {
        // mean of k over |FFT ψ|² on the discrete frequency grid
        let k0 = 1.25;
        let g = Grid1D::new(-16.0, 16.0, 1024).unwrap();
        let psi = sample_gaussian(&GaussianSpec::new(0.3, 1.0, k0).unwrap(), g).unwrap();
        let mut buf: Vec<Complex<f64>> = psi.samples().to_vec();
        FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
        let n = buf.len();
        let dk = std::f64::consts::TAU / (g.spacing() * n as f64);
        let (mut num, mut den) = (0.0, 0.0);
        for (j, z) in buf.iter().enumerate() {
            let k = if j < n / 2 { j as f64 } else { j as f64 - n as f64 } * dk;
            num += k * z.norm_sqr();
            den += z.norm_sqr();
        }
        assert!((num / den - k0).abs() < 1e-6, "{}", num / den);
    }

    #[test]
    fn deterministic_sampling() {
        let s = GaussianSpec::new(0.2, 0.7, -0.5).unwrap();
        assert_eq!(sample_gaussian(&s, grid()).unwrap(), sample_gaussian(&s, grid()).unwrap());
    }

    #[test]
    fn narrow_grid_rejected() {
        let g = Grid1D::new(-2.0, 2.0, 256).unwrap();
        let err = sample_gaussian(&GaussianSpec::real(0.0, 1.0).unwrap(), g).unwrap_err();
        assert!(matches!(err, Error::GridTooNarrow { .. }));
        assert!(GaussianSpec::real(0.0, 0.0).is_err());
    }

    #[test]
    fn interpolation_is_exact_on_nodes_and_cubic_accurate() {
        let g = Grid1D::new(-8.0, 8.0, 257).unwrap();
        let s = GaussianSpec::real(0.3, 1.0).unwrap();
        let psi = WaveFunction::from_fn(g, |x| s.amplitude(x));
        assert_eq!(psi.interpolate(g.point(17)).unwrap(), psi.samples()[17]);
        let mut worst: f64 = 0.0;
        for k in 0..500 {
            let x = -7.9 + 15.8 * k as f64 / 499.0;
            worst = worst.max((psi.interpolate(x).unwrap() - s.amplitude(x)).norm());
        }
        assert!(worst < 1e-4, "{worst}");
        assert!(psi.interpolate(8.01).is_none());
        assert!(psi.interpolate(8.0).is_some());
    }

    #[test]
    fn phase_insensitive_distance() {
        let psi = sample_gaussian(&GaussianSpec::new(0.5, 1.0, 0.3).unwrap(), grid()).unwrap();
        let rotated = WaveFunction::new(
            *psi.grid(),
            psi.samples().iter().map(|z| z * Complex::from_polar(1.0, 2.1)).collect(),
        )
        .unwrap();
        assert!(psi.l2_distance(&rotated).unwrap() > 1.0);
        assert!(psi.l2_distance_up_to_phase(&rotated).unwrap() < 1e-12);
    }

    #[test]
    fn reflection() {
        let psi = sample_gaussian(&GaussianSpec::real(0.7, 1.0).unwrap(), grid()).unwrap();
        let want = sample_gaussian(&GaussianSpec::real(-0.7, 1.0).unwrap(), grid()).unwrap();
        assert!(psi.reflected().l2_distance(&want).unwrap() < 1e-12);
    }
}
