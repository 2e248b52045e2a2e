//! Harmonic-oscillator (Fock) basis tools: Hermite-function expansions,
//! the parity operator exp(iπ a†a), and exponentials of quadratic generators.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use super::joint::JointWaveFunction;
use super::wavefunction::WaveFunction;
use crate::cv::QuadraticForm;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, HermitianEigen};
use crate::scalar::Real;

pub const MAX_FOCK: usize = 64;
/// Allowed L² residual of a single-mode projection used for parity.
pub const PARITY_RESIDUAL_TOL: f64 = 1e-6;
/// Allowed summed L² residual of the two single-mode projections.
pub const TWO_MODE_RESIDUAL_TOL: f64 = 1e-5;

fn check_n_fock(n_fock: usize) -> Result<()> {
    if n_fock == 0 || n_fock > MAX_FOCK {
        return Err(Error::InvalidParameter {
            name: "n_fock",
            value: n_fock as f64,
            constraint: "n_fock must lie in 1..=64",
        });
    }
    Ok(())
}

/// φ₀(x), …, φ_{n−1}(x) by the stable three-term recurrence.
pub fn hermite_functions<T: Real>(n: usize, x: T) -> Vec<T> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    out.push(T::PI().powf(T::lit(-0.25)) * (-(x * x) * T::lit(0.5)).exp());
    if n > 1 {
        out.push(T::lit(2.0).sqrt() * x * out[0]);
    }
    for k in 2..n {
        let kf = T::from_usize_lossy(k);
        let v = (T::lit(2.0) / kf).sqrt() * x * out[k - 1] - ((kf - T::one()) / kf).sqrt() * out[k - 2];
        out.push(v);
    }
    out
}

/// Table `[k][i]` of φ_k at every grid node.
fn basis_table<T: Real>(n: usize, points: &[T]) -> Vec<Vec<T>> {
    let cols: Vec<Vec<T>> = points.iter().map(|&x| hermite_functions(n, x)).collect();
    (0..n).map(|k| cols.iter().map(|c| c[k]).collect()).collect()
}

/// Coefficients cₖ = ∫φₖψ and the L² norm of what the expansion misses.
#[derive(Clone, Debug, PartialEq)]
pub struct FockExpansion<T> {
    pub coeffs: Vec<Complex<T>>,
    pub residual: T,
}

pub fn project<T: Real>(psi: &WaveFunction<T>, n_fock: usize) -> Result<FockExpansion<T>> {
    check_n_fock(n_fock)?;
    let grid = psi.grid();
    let table = basis_table(n_fock, &grid.points());
    let coeffs: Vec<Complex<T>> = table
        .iter()
        .map(|phi_k| {
            let re: Vec<T> = phi_k.iter().zip(psi.samples()).map(|(&f, z)| f * z.re).collect();
            let im: Vec<T> = phi_k.iter().zip(psi.samples()).map(|(&f, z)| f * z.im).collect();
            Complex::new(grid.integrate(&re), grid.integrate(&im))
        })
        .collect();
    let back = synthesize(&coeffs, &table, psi);
    let residual = psi.l2_distance(&back)?;
    Ok(FockExpansion { coeffs, residual })
}

fn synthesize<T: Real>(coeffs: &[Complex<T>], table: &[Vec<T>], like: &WaveFunction<T>) -> WaveFunction<T> {
    let n = like.grid().len();
    let samples = (0..n)
        .map(|i| coeffs.iter().zip(table).map(|(c, row)| c * row[i]).sum())
        .collect();
    WaveFunction::new(*like.grid(), samples).expect("grid size")
}

/// Σ cₙ(−1)ⁿφₙ from the Hermite expansion of ψ; equals ψ(−x).
pub fn parity_via_fock<T: Real>(psi: &WaveFunction<T>, n_fock: usize) -> Result<WaveFunction<T>> {
    let exp = project(psi, n_fock)?;
    if exp.residual > T::lit(PARITY_RESIDUAL_TOL) {
        return Err(Error::TruncationResidual {
            residual: exp.residual.as_f64(),
            tolerance: PARITY_RESIDUAL_TOL,
        });
    }
    let flipped: Vec<Complex<T>> = exp
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 1 { -c } else { c })
        .collect();
    let table = basis_table(n_fock, &psi.grid().points());
    Ok(synthesize(&flipped, &table, psi))
}

/// Position and momentum matrices x = (a + a†)/√2, p = i(a† − a)/√2 in the
/// first `n` number states.
pub fn quadratures<T: Real>(n: usize) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let s = T::FRAC_1_SQRT_2();
    let mut x = ComplexMatrix::zeros(n, n);
    let mut p = ComplexMatrix::zeros(n, n);
    for k in 1..n {
        let e = (T::from_usize_lossy(k)).sqrt() * s;
        x[(k - 1, k)] = Complex::new(e, T::zero());
        x[(k, k - 1)] = Complex::new(e, T::zero());
        // ⟨k|a†|k−1⟩ = √k
        p[(k, k - 1)] = Complex::new(T::zero(), e);
        p[(k - 1, k)] = Complex::new(T::zero(), -e);
    }
    (x, p)
}

fn truncate<T: Real>(m: &ComplexMatrix<T>, n: usize) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(n, n, |i, j| m[(i, j)])
}

/// The symmetrically ordered operator of `form` on the two-mode space
/// spanned by |n_x⟩|n_y⟩, nₓ, n_y < `n_fock`, index nₓ·n_fock + n_y.
/// Same-mode products are formed one level higher and then truncated so the
/// top-left block is exact.
pub fn quadratic_operator<T: Real>(form: &QuadraticForm<T>, n_fock: usize) -> Result<ComplexMatrix<T>> {
    check_n_fock(n_fock)?;
    let n = n_fock;
    let (xb, pb) = quadratures::<T>(n + 1);
    let single = [truncate(&xb, n), truncate(&pb, n)];
    let same = |i: usize, j: usize| -> Result<ComplexMatrix<T>> {
        let (a, b) = (if i == 0 { &xb } else { &pb }, if j == 0 { &xb } else { &pb });
        let sym = (&a.matmul(b)? + &b.matmul(a)?).scale_real(T::lit(0.5));
        Ok(truncate(&sym, n))
    };
    let id = ComplexMatrix::<T>::identity(n);
    let q = &form.coeffs;
    let mut h = ComplexMatrix::identity(n * n).scale_real(form.constant);
    for mode in 0..2 {
        let o = 2 * mode;
        let mut local = ComplexMatrix::zeros(n, n);
        for i in 0..2 {
            for j in 0..2 {
                if q[o + i][o + j] != T::zero() {
                    local = &local + &same(i, j)?.scale_real(q[o + i][o + j]);
                }
            }
        }
        let lifted = if mode == 0 { local.tensor(&id) } else { id.tensor(&local) };
        h = &h + &lifted;
    }
    for i in 0..2 {
        for j in 2..4 {
            if q[i][j] != T::zero() {
                let term = single[i].tensor(&single[j - 2]).scale_real(T::lit(2.0) * q[i][j]);
                h = &h + &term;
            }
        }
    }
    Ok(h)
}

/// exp(−i·angle·G) applied to ψ(x)φ(y) in a truncated two-mode Fock basis,
/// returned on the grids of ψ and φ.
pub fn evolve_quadratic_fock<T: Real>(
    generator: &QuadraticForm<T>,
    angle: T,
    psi: &WaveFunction<T>,
    phi: &WaveFunction<T>,
    n_fock: usize,
) -> Result<JointWaveFunction<T>> {
    check_n_fock(n_fock)?;
    let ex = project(psi, n_fock)?;
    let ey = project(phi, n_fock)?;
    let residual = ex.residual + ey.residual;
    if residual > T::lit(TWO_MODE_RESIDUAL_TOL) {
        return Err(Error::TruncationResidual {
            residual: residual.as_f64(),
            tolerance: TWO_MODE_RESIDUAL_TOL,
        });
    }
    let n = n_fock;
    let start = ComplexVector::new(
        ex.coeffs
            .iter()
            .flat_map(|a| ey.coeffs.iter().map(move |b| a * b))
            .collect(),
    );
    let evolved = if angle == T::zero() {
        start
    } else {
        let h = quadratic_operator(generator, n)?;
        let eig = HermitianEigen::new(&h)?;
        eig.apply_function(|l| Complex::from_polar(T::one(), -angle * l), &start)?
    };
    let d = evolved.entries();

    let (gx, gy) = (*psi.grid(), *phi.grid());
    let tx = basis_table(n, &gx.points());
    let ty = basis_table(n, &gy.points());
    // E[k][j] = Σ_m d[k, m] φ_m(y_j)
    let e: Vec<Vec<Complex<T>>> = (0..n)
        .map(|k| {
            (0..gy.len())
                .map(|j| (0..n).map(|m| d[k * n + m] * ty[m][j]).sum())
                .collect()
        })
        .collect();
    let samples: Vec<Complex<T>> = (0..gx.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let e = &e;
            let tx = &tx;
            (0..gy.len()).map(move |j| {
                (0..n).fold(Complex::zero(), |acc: Complex<T>, k| acc + e[k][j] * tx[k][i])
            })
        })
        .collect();
    JointWaveFunction::new(gx, gy, samples)
}
