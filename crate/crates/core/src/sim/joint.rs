use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::grid::Grid1D;
use super::wavefunction::{interpolate, WaveFunction};
use crate::cv::CoordTransform;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest tolerated probability mass lost off the grid.
pub const LEAKAGE_TOL: f64 = 1e-3;
/// Smallest outcome density accepted by [`postmeasurement_state`].
pub const MIN_OUTCOME_DENSITY: f64 = 1e-12;

/// Two-mode amplitudes Ψ(xᵢ, yⱼ) stored row-major in x.
#[derive(Clone, Debug, PartialEq)]
pub struct JointWaveFunction<T> {
    grid_x: Grid1D<T>,
    grid_y: Grid1D<T>,
    samples: Vec<Complex<T>>,
    off_grid: usize,
}

impl<T: Real> JointWaveFunction<T> {
    pub fn new(grid_x: Grid1D<T>, grid_y: Grid1D<T>, samples: Vec<Complex<T>>) -> Result<Self> {
        if samples.len() != grid_x.len() * grid_y.len() {
            return Err(Error::DimensionMismatch {
                op: "JointWaveFunction::new",
                left: (grid_x.len(), grid_y.len()),
                right: (samples.len(), 1),
            });
        }
        Ok(Self {
            grid_x,
            grid_y,
            samples,
            off_grid: 0,
        })
    }

    pub fn grid_x(&self) -> &Grid1D<T> {
        &self.grid_x
    }

    pub fn grid_y(&self) -> &Grid1D<T> {
        &self.grid_y
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    #[inline]
    pub fn at(&self, ix: usize, iy: usize) -> Complex<T> {
        self.samples[ix * self.grid_y.len() + iy]
    }

    pub fn row(&self, ix: usize) -> &[Complex<T>] {
        let ny = self.grid_y.len();
        &self.samples[ix * ny..(ix + 1) * ny]
    }

    /// Number of sample points whose substituted argument left a grid.
    pub fn off_grid_samples(&self) -> usize {
        self.off_grid
    }

    /// Iterated trapezoid ∫∫|Ψ|².
    pub fn norm_sqr(&self) -> T {
        let rows: Vec<T> = (0..self.grid_x.len())
            .map(|i| {
                let d: Vec<T> = self.row(i).iter().map(|z| z.norm_sqr()).collect();
                self.grid_y.integrate(&d)
            })
            .collect();
        self.grid_x.integrate(&rows)
    }

    /// √∫∫|Ψ − Φ|² on shared grids.
    pub fn l2_distance(&self, other: &Self) -> Result<T> {
        self.check_same_grids(other)?;
        let diff = Self {
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a - b).collect(),
            ..self.clone()
        };
        Ok(diff.norm_sqr().sqrt())
    }

    /// L² distance after removing the best global phase.
    pub fn l2_distance_up_to_phase(&self, other: &Self) -> Result<T> {
        self.check_same_grids(other)?;
        let ov: Complex<T> = self.samples.iter().zip(&other.samples).map(|(a, b)| a.conj() * b).sum();
        let phase = if ov.norm() > T::zero() {
            ov.conj() / ov.norm()
        } else {
            Complex::new(T::one(), T::zero())
        };
        let rotated = Self {
            samples: other.samples.iter().map(|z| z * phase).collect(),
            ..other.clone()
        };
        self.l2_distance(&rotated)
    }

    /// Ψ(x, y) = ψ(x)φ(y).
    pub fn product(psi: &WaveFunction<T>, phi: &WaveFunction<T>) -> Self {
        let samples = psi
            .samples()
            .iter()
            .flat_map(|a| phi.samples().iter().map(move |b| a * b))
            .collect();
        Self {
            grid_x: *psi.grid(),
            grid_y: *phi.grid(),
            samples,
            off_grid: 0,
        }
    }

    /// Ratio σ₂/σ₁ of the two largest singular values of the sample matrix;
    /// zero for an exact product state.
    pub fn schmidt_ratio(&self) -> Result<T> {
        use crate::linalg::{ComplexMatrix, HermitianEigen};
        let (nx, ny) = (self.grid_x.len(), self.grid_y.len());
        let m = ComplexMatrix::from_vec(nx, ny, self.samples.clone())?;
        // Gram matrix on the smaller side
        let g = if nx <= ny { m.matmul(&m.adjoint())? } else { m.adjoint().matmul(&m)? };
        let eig = HermitianEigen::new(&g)?;
        let vals = eig.eigenvalues();
        let k = vals.len();
        let (l1, l2) = (vals[k - 1].max(T::zero()), vals[k - 2].max(T::zero()));
        if l1 == T::zero() {
            return Err(Error::ZeroMatrix);
        }
        Ok((l2 / l1).sqrt())
    }

    fn check_same_grids(&self, other: &Self) -> Result<()> {
        if self.grid_x != other.grid_x || self.grid_y != other.grid_y {
            return Err(Error::DimensionMismatch {
                op: "joint comparison",
                left: (self.grid_x.len(), self.grid_y.len()),
                right: (other.grid_x.len(), other.grid_y.len()),
            });
        }
        Ok(())
    }
}

/// Ψ(x, y) = √|det| ψ(ax+by) φ(cx+dy) on ψ's grid in x and φ's grid in y.
/// Arguments outside the source grids read as zero and are counted; more than
/// 0.1% missing probability is an error.
pub fn apply_transform<T: Real>(
    t: &CoordTransform<T>,
    psi: &WaveFunction<T>,
    phi: &WaveFunction<T>,
) -> Result<JointWaveFunction<T>> {
    apply_transform_on(t, psi, phi, *psi.grid(), *phi.grid())
}

/// [`apply_transform`] sampled on explicit output grids.
pub fn apply_transform_on<T: Real>(
    t: &CoordTransform<T>,
    psi: &WaveFunction<T>,
    phi: &WaveFunction<T>,
    grid_x: Grid1D<T>,
    grid_y: Grid1D<T>,
) -> Result<JointWaveFunction<T>> {
    psi.check_normalized()?;
    phi.check_normalized()?;
    let norm = t.normalization();
    let ys = grid_y.points();
    let rows: Vec<(Vec<Complex<T>>, usize)> = grid_x
        .points()
        .into_par_iter()
        .map(|x| {
            let mut off = 0;
            let row = ys
                .iter()
                .map(|&y| {
                    let (u, v) = t.map(x, y);
                    match (
                        interpolate(psi.grid(), psi.samples(), u),
                        interpolate(phi.grid(), phi.samples(), v),
                    ) {
                        (Some(a), Some(b)) => a * b * norm,
                        _ => {
                            off += 1;
                            Complex::zero()
                        }
                    }
                })
                .collect();
            (row, off)
        })
        .collect();
    let off_grid = rows.iter().map(|r| r.1).sum();
    let samples = rows.into_iter().flat_map(|r| r.0).collect();
    let joint = JointWaveFunction {
        grid_x,
        grid_y,
        samples,
        off_grid,
    };
    let leak = T::one() - joint.norm_sqr();
    if leak > T::lit(LEAKAGE_TOL) {
        return Err(Error::Leakage { fraction: leak.as_f64() });
    }
    Ok(joint)
}

/// Probe-coordinate density sampled at the nodes of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution<T> {
    grid: Grid1D<T>,
    density: Vec<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistributionRow {
    pub coordinate: f64,
    pub density: f64,
}

impl<T: Real> OutcomeDistribution<T> {
    pub fn new(grid: Grid1D<T>, density: Vec<T>) -> Result<Self> {
        if density.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                op: "OutcomeDistribution::new",
                left: (grid.len(), 1),
                right: (density.len(), 1),
            });
        }
        Ok(Self { grid, density })
    }

    pub fn from_fn(grid: Grid1D<T>, f: impl Fn(T) -> T) -> Self {
        let density = grid.points().into_iter().map(f).collect();
        Self { grid, density }
    }

    pub fn grid(&self) -> &Grid1D<T> {
        &self.grid
    }

    pub fn density(&self) -> &[T] {
        &self.density
    }

    pub fn integral(&self) -> T {
        self.grid.integrate(&self.density)
    }

    pub fn mean(&self) -> T {
        let v: Vec<T> = self.grid.points().iter().zip(&self.density).map(|(&y, &p)| y * p).collect();
        self.grid.integrate(&v)
    }

    pub fn second_moment(&self) -> T {
        let v: Vec<T> = self
            .grid
            .points()
            .iter()
            .zip(&self.density)
            .map(|(&y, &p)| y * y * p)
            .collect();
        self.grid.integrate(&v)
    }

    pub fn variance(&self) -> T {
        let m = self.mean();
        self.second_moment() - m * m
    }

    /// Trapezoidal ∫|P − f|.
    pub fn l1_distance_to(&self, f: impl Fn(T) -> T) -> T {
        let v: Vec<T> = self
            .grid
            .points()
            .iter()
            .zip(&self.density)
            .map(|(&y, &p)| (p - f(y)).abs())
            .collect();
        self.grid.integrate(&v)
    }

    pub fn l1_distance(&self, other: &Self) -> Result<T> {
        if self.grid != other.grid {
            return Err(Error::DimensionMismatch {
                op: "distribution comparison",
                left: (self.grid.len(), 1),
                right: (other.grid.len(), 1),
            });
        }
        let v: Vec<T> = self.density.iter().zip(&other.density).map(|(a, b)| (*a - *b).abs()).collect();
        Ok(self.grid.integrate(&v))
    }

    /// Linear interpolation between nodes, zero outside.
    pub fn density_at(&self, y: T) -> T {
        if !self.grid.contains(y) {
            return T::zero();
        }
        let t = (y - self.grid.x_min()) / self.grid.spacing();
        let i = t.floor().to_usize().unwrap_or(0).min(self.grid.len() - 2);
        let f = t - T::from_usize_lossy(i);
        self.density[i] * (T::one() - f) + self.density[i + 1] * f
    }

    /// Distribution of λ⁻¹·a when `self` is the distribution of a, sampled on
    /// the grid scaled by 1/λ.
    pub fn rescaled(&self, lambda: T) -> Result<Self> {
        let grid = Grid1D::new(self.grid.x_min() / lambda, self.grid.x_max() / lambda, self.grid.len())?;
        Ok(Self {
            grid,
            density: self.density.iter().map(|&p| p * lambda).collect(),
        })
    }

    /// Position of the `q`-quantile by the trapezoidal CDF, linearly
    /// interpolated.
    pub fn quantile(&self, q: T) -> T {
        let cdf = self.cdf();
        let total = cdf[cdf.len() - 1];
        let target = q * total;
        let j = cdf.partition_point(|&c| c < target).clamp(1, cdf.len() - 1);
        let (c0, c1) = (cdf[j - 1], cdf[j]);
        let f = if c1 > c0 { (target - c0) / (c1 - c0) } else { T::zero() };
        self.grid.point(j - 1) + f * self.grid.spacing()
    }

    /// Cumulative trapezoid sums at each node, starting from zero.
    pub fn cdf(&self) -> Vec<T> {
        let h = self.grid.spacing() * T::lit(0.5);
        let mut acc = T::zero();
        let mut out = Vec::with_capacity(self.density.len());
        out.push(T::zero());
        for w in self.density.windows(2) {
            acc += h * (w[0] + w[1]);
            out.push(acc);
        }
        out
    }

    pub fn rows(&self) -> Vec<DistributionRow> {
        self.grid
            .points()
            .iter()
            .zip(&self.density)
            .map(|(&y, &p)| DistributionRow {
                coordinate: y.as_f64(),
                density: p.as_f64(),
            })
            .collect()
    }
}

/// P(y) = ∫|Ψ(x, y)|² dx.
pub fn outcome_distribution<T: Real>(joint: &JointWaveFunction<T>) -> OutcomeDistribution<T> {
    let (nx, ny) = (joint.grid_x.len(), joint.grid_y.len());
    let density = (0..ny)
        .into_par_iter()
        .map(|j| {
            let col: Vec<T> = (0..nx).map(|i| joint.at(i, j).norm_sqr()).collect();
            joint.grid_x.integrate(&col)
        })
        .collect();
    OutcomeDistribution {
        grid: joint.grid_y,
        density,
    }
}

/// Normalized slice Ψ(x, a) / √∫|Ψ(x, a)|² dx, interpolating in y.
pub fn postmeasurement_state<T: Real>(joint: &JointWaveFunction<T>, outcome: T) -> Result<WaveFunction<T>> {
    let samples: Vec<Complex<T>> = (0..joint.grid_x.len())
        .map(|i| interpolate(&joint.grid_y, joint.row(i), outcome).unwrap_or_else(Complex::zero))
        .collect();
    let slice = WaveFunction::new(joint.grid_x, samples)?;
    let density = slice.norm_sqr();
    if !(density > T::lit(MIN_OUTCOME_DENSITY)) {
        return Err(Error::ZeroProbability {
            outcome: outcome.as_f64(),
            density: density.as_f64(),
        });
    }
    slice.normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cv::{csm, ssm, vnm};
    use crate::sim::wavefunction::{sample_gaussian, GaussianSpec};

    fn g(n: usize) -> Grid1D<f64> {
        Grid1D::symmetric(10.0, n).unwrap()
    }

    fn gauss(c: f64, w: f64, n: usize) -> WaveFunction<f64> {
        sample_gaussian(&GaussianSpec::real(c, w).unwrap(), g(n)).unwrap()
    }

    #[test]
    fn identity_gives_product() {
        let (psi, phi) = (gauss(0.5, 1.0, 128), gauss(-1.0, 0.7, 128));
        let j = apply_transform(&CoordTransform::identity(), &psi, &phi).unwrap();
        assert!(j.l2_distance(&JointWaveFunction::product(&psi, &phi)).unwrap() < 1e-13);
        let p = outcome_distribution(&j);
        let phi_d = phi.densities();
        assert!(p.density().iter().zip(&phi_d).all(|(a, b)| (a - b).abs() < 1e-13));
        let post = postmeasurement_state(&j, phi.grid().point(60)).unwrap();
        assert!(post.l2_distance(&psi).unwrap() < 1e-12);
    }

    #[test]
    fn swap_exchanges_states() {
        let (psi, phi) = (gauss(0.5, 1.0, 128), gauss(-1.0, 0.7, 128));
        let j = apply_transform(&ssm(1.0, 1).unwrap(), &psi, &phi).unwrap();
        assert!(j.l2_distance(&JointWaveFunction::product(&phi, &psi)).unwrap() < 1e-12);
        assert!(j.schmidt_ratio().unwrap() < 1e-6);
    }

    #[test]
    fn vnm_shear_matches_direct_evaluation() {
        let (sp, sq) = (GaussianSpec::real(0.5, 1.0).unwrap(), GaussianSpec::real(0.0, 0.5).unwrap());
        let gr = g(256);
        let (psi, phi) = (sample_gaussian(&sp, gr).unwrap(), sample_gaussian(&sq, gr).unwrap());
        let lam = 1.5;
        let j = apply_transform(&vnm(lam).unwrap(), &psi, &phi).unwrap();
        let mut worst: f64 = 0.0;
        for (i, x) in gr.points().into_iter().enumerate().step_by(7) {
            for (k, y) in gr.points().into_iter().enumerate().step_by(5) {
                let want = sp.amplitude(x) * sq.amplitude(y - lam * x);
                worst = worst.max((j.at(i, k) - want).norm());
            }
        }
        assert!(worst < 1e-4, "{worst}");
    }

    #[test]
    fn leakage_guard() {
        let (psi, phi) = (gauss(0.0, 1.0, 128), gauss(0.0, 1.0, 128));
        let err = apply_transform(&vnm(8.0).unwrap(), &psi, &phi).unwrap_err();
        assert!(matches!(err, Error::Leakage { .. }));
        let j = apply_transform(&vnm(1.0).unwrap(), &psi, &phi).unwrap();
        assert!(j.off_grid_samples() > 0);
    }

    #[test]
    fn csm_post_state() {
        let lam = 2.0;
        let (psi, phi) = (gauss(0.3, 1.0, 512), gauss(0.0, 0.4, 512));
        let j = apply_transform(&csm(lam).unwrap(), &psi, &phi).unwrap();
        let a = 1.1;
        let post = postmeasurement_state(&j, a).unwrap();
        let s = GaussianSpec::real(0.0, 0.4).unwrap();
        let want = WaveFunction::from_fn(*psi.grid(), |x| s.amplitude(a - lam * x) * lam.sqrt());
        let e = post.l2_distance(&want).unwrap();
        assert!(e < 2e-5, "{e}");
        assert!(matches!(
            postmeasurement_state(&j, 10.5),
            Err(Error::ZeroProbability { .. })
        ));
    }

    #[test]
    fn distribution_helpers() {
        let gr = g(401);
        let s = GaussianSpec::real(1.0, 0.5).unwrap();
        let p = OutcomeDistribution::from_fn(gr, |y| s.density(y));
        assert!((p.integral() - 1.0).abs() < 1e-12);
        assert!((p.mean() - 1.0).abs() < 1e-12 && (p.variance() - 0.25).abs() < 1e-10);
        assert!((p.quantile(0.5) - 1.0).abs() < 1e-3);
        let r = p.rescaled(2.0).unwrap();
        assert!((r.integral() - 1.0).abs() < 1e-12 && (r.mean() - 0.5).abs() < 1e-12);
        assert_eq!(p.rows().len(), 401);
    }
}
