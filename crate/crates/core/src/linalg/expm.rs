use num_complex::Complex;

use super::{ComplexMatrix, HermitianEigen};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest generator dimension accepted by the exponential.
pub const MAX_EXP_DIM: usize = 10_000;

const MAX_TAYLOR_TERMS: usize = 200;

/// `exp(scale · G)`.
///
/// Hermitian generators go through the spectral decomposition; anything else
/// uses scaling and squaring with a Taylor kernel.
pub fn matrix_exponential<T: Real>(g: &ComplexMatrix<T>, scale: Complex<T>) -> Result<ComplexMatrix<T>> {
    check_shape(g)?;
    let herm_tol = T::epsilon() * T::lit(1e3) * g.max_abs().max(T::one());
    if g.is_hermitian(herm_tol) {
        expm_hermitian(g, scale)
    } else {
        expm_scaling_squaring(g, scale)
    }
}

/// Spectral path: `W diag(e^{scale·λ}) W†`. Fails with `NonConvergence`
/// when the decomposition residual exceeds the scalar's default tolerance.
pub fn expm_hermitian<T: Real>(g: &ComplexMatrix<T>, scale: Complex<T>) -> Result<ComplexMatrix<T>> {
    check_shape(g)?;
    let eig = HermitianEigen::new(g)?;
    if eig.residual() > T::default_tol() {
        return Err(Error::NonConvergence {
            residual: eig.residual().as_f64(),
        });
    }
    Ok(eig.function(|l| (scale * l).exp()))
}

/// Scaling and squaring: `exp(A) = (exp(A / 2^s))^{2^s}` with the inner
/// exponential summed as a Taylor series until the next term is below
/// machine precision.
pub fn expm_scaling_squaring<T: Real>(g: &ComplexMatrix<T>, scale: Complex<T>) -> Result<ComplexMatrix<T>> {
    check_shape(g)?;
    let n = g.rows();
    let a = g.scale(scale);
    let norm = a.norm_one();
    let half = T::lit(0.5);
    let mut squarings = 0u32;
    let mut shrink = T::one();
    while norm * shrink > half {
        shrink *= half;
        squarings += 1;
    }
    let b = a.scale_real(shrink);

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    let mut converged = false;
    let mut last = T::infinity();
    for k in 1..=MAX_TAYLOR_TERMS {
        term = term.matmul(&b)?.scale_real(T::one() / T::from_usize_lossy(k));
        sum = &sum + &term;
        last = term.max_abs();
        if last <= T::epsilon() * sum.max_abs() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence { residual: last.as_f64() });
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum)?;
    }
    Ok(sum)
}

fn check_shape<T: Real>(g: &ComplexMatrix<T>) -> Result<()> {
    if !g.is_square() {
        return Err(Error::NotSquare {
            rows: g.rows(),
            cols: g.cols(),
        });
    }
    if g.rows() > MAX_EXP_DIM {
        return Err(Error::TooLarge {
            dim: g.rows(),
            limit: MAX_EXP_DIM,
        });
    }
    Ok(())
}
