//! Symmetric and Hermitian eigendecomposition.
//!
//! The real symmetric solver is Householder tridiagonalization followed by the
//! implicit QL iteration (the EISPACK `tred2`/`tql2` pair). Hermitian input is
//! handled through the real embedding
//!
//! ```text
//! φ(A + iB) = | A  −B |
//!             | B   A |
//! ```
//!
//! which is a real-algebra homomorphism, so for any real function `g`,
//! `φ(g(H)) = g(φ(H))` and `g(H)` can be read off the left block column. When
//! `H` is already real the embedding is skipped.

use num_complex::Complex;

use super::{ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_QL_SWEEPS: usize = 64;

/// Eigendecomposition of a real symmetric matrix, `A = W Λ Wᵀ`.
#[derive(Clone, Debug)]
pub struct SymmetricEigen<T> {
    n: usize,
    /// Ascending eigenvalues.
    values: Vec<T>,
    /// Eigenvectors, column-major: vector `k` is `vectors[k*n..(k+1)*n]`.
    vectors: Vec<T>,
}

impl<T: Real> SymmetricEigen<T> {
    /// Decomposes the symmetric matrix given row-major in `a`. Only the lower
    /// triangle is read.
    pub fn new(n: usize, a: &[T]) -> Result<Self> {
        if a.len() != n * n {
            return Err(Error::DimensionMismatch {
                op: "symmetric eigen",
                left: (n, n),
                right: (a.len(), 1),
            });
        }
        if n == 0 {
            return Ok(Self {
                n,
                values: Vec::new(),
                vectors: Vec::new(),
            });
        }
        // column-major working copy; since `a` is symmetric, element (r, c)
        // of the transpose is element (r, c) of `a`
        let mut v = vec![T::zero(); n * n];
        for r in 0..n {
            for c in 0..n {
                v[c * n + r] = a[r * n + c];
            }
        }
        let mut d = vec![T::zero(); n];
        let mut e = vec![T::zero(); n];
        tred2(n, &mut v, &mut d, &mut e);
        tql2(n, &mut v, &mut d, &mut e)?;
        Ok(Self {
            n,
            values: d,
            vectors: v,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.values
    }

    pub fn eigenvector(&self, k: usize) -> &[T] {
        &self.vectors[k * self.n..(k + 1) * self.n]
    }

    /// max |A w_k − λ_k w_k| over all pairs, with `a` row-major.
    pub fn residual(&self, a: &[T]) -> T {
        let n = self.n;
        let mut worst = T::zero();
        for k in 0..n {
            let w = self.eigenvector(k);
            for i in 0..n {
                let row = &a[i * n..(i + 1) * n];
                let aw: T = row.iter().zip(w).map(|(&x, &y)| x * y).sum();
                worst = worst.max((aw - self.values[k] * w[i]).abs());
            }
        }
        worst
    }

    /// `W diag(f(λ)) Wᵀ x` for real input.
    fn apply_real(&self, f: &[T], x: &[T]) -> Vec<T> {
        let n = self.n;
        let mut out = vec![T::zero(); n];
        for k in 0..n {
            let w = self.eigenvector(k);
            let coeff = f[k] * w.iter().zip(x).map(|(&a, &b)| a * b).sum::<T>();
            if coeff == T::zero() {
                continue;
            }
            for (o, &wi) in out.iter_mut().zip(w) {
                *o += coeff * wi;
            }
        }
        out
    }

    /// Left `cols` columns of `W diag(f(λ)) Wᵀ`, row-major `n × cols`.
    fn function_columns(&self, f: &[T], cols: usize) -> Vec<T> {
        let n = self.n;
        let mut out = vec![T::zero(); n * cols];
        for k in 0..n {
            if f[k] == T::zero() {
                continue;
            }
            let w = self.eigenvector(k);
            for i in 0..n {
                let s = f[k] * w[i];
                if s == T::zero() {
                    continue;
                }
                let row = &mut out[i * cols..(i + 1) * cols];
                for (o, &wj) in row.iter_mut().zip(&w[..cols]) {
                    *o += s * wj;
                }
            }
        }
        out
    }
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    n: usize,
    /// Decomposition of `H` itself (real input) or of its 2n×2n embedding.
    inner: SymmetricEigen<T>,
    embedded: bool,
    residual: T,
}

impl<T: Real> HermitianEigen<T> {
    /// Decomposes `h`, which must be Hermitian to within `tol` entrywise
    /// (relative to its largest entry).
    pub fn new(h: &ComplexMatrix<T>) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::NotSquare {
                rows: h.rows(),
                cols: h.cols(),
            });
        }
        let n = h.rows();
        let scale = h.max_abs().max(T::one());
        let herm_tol = T::epsilon() * T::lit(1e3) * scale;
        if !h.is_hermitian(herm_tol) {
            return Err(Error::Unsupported("spectral exponential needs a Hermitian generator".into()));
        }
        let embedded = !h.is_real(herm_tol);
        let real = if embedded {
            let m = 2 * n;
            let mut a = vec![T::zero(); m * m];
            for i in 0..n {
                for j in 0..n {
                    let z = h[(i, j)];
                    a[i * m + j] = z.re;
                    a[i * m + (j + n)] = -z.im;
                    a[(i + n) * m + j] = z.im;
                    a[(i + n) * m + (j + n)] = z.re;
                }
            }
            a
        } else {
            h.as_slice().iter().map(|z| z.re).collect()
        };
        let inner = SymmetricEigen::new(if embedded { 2 * n } else { n }, &real)?;
        let residual = inner.residual(&real) / scale;
        Ok(Self {
            n,
            inner,
            embedded,
            residual,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Relative residual max|H w − λ w| / max(1, ‖H‖_max) of the decomposition.
    pub fn residual(&self) -> T {
        self.residual
    }

    /// Ascending eigenvalues of `H` (with multiplicity).
    pub fn eigenvalues(&self) -> Vec<T> {
        if self.embedded {
            // the embedding doubles every eigenvalue
            self.inner.values.iter().step_by(2).copied().collect()
        } else {
            self.inner.values.clone()
        }
    }

    /// `f(H)` for a complex-valued spectral function.
    pub fn function(&self, f: impl Fn(T) -> Complex<T>) -> ComplexMatrix<T> {
        let n = self.n;
        let fv: Vec<Complex<T>> = self.inner.values.iter().map(|&l| f(l)).collect();
        let re: Vec<T> = fv.iter().map(|z| z.re).collect();
        let im: Vec<T> = fv.iter().map(|z| z.im).collect();
        if !self.embedded {
            let g = self.inner.function_columns(&re, n);
            let h = self.inner.function_columns(&im, n);
            return ComplexMatrix::from_vec(
                n,
                n,
                g.iter().zip(&h).map(|(&a, &b)| Complex::new(a, b)).collect(),
            )
            .expect("shape");
        }
        // f = g + i h;  g(H) = G₀₀ + i G₁₀, h(H) = H₀₀ + i H₁₀
        let g = self.inner.function_columns(&re, n);
        let h = self.inner.function_columns(&im, n);
        ComplexMatrix::from_fn(n, n, |i, j| {
            let g00 = g[i * n + j];
            let g10 = g[(i + n) * n + j];
            let h00 = h[i * n + j];
            let h10 = h[(i + n) * n + j];
            Complex::new(g00 - h10, g10 + h00)
        })
    }

    /// `f(H) v` without forming `f(H)`.
    pub fn apply_function(
        &self,
        f: impl Fn(T) -> Complex<T>,
        v: &ComplexVector<T>,
    ) -> Result<ComplexVector<T>> {
        let n = self.n;
        if v.dim() != n {
            return Err(Error::DimensionMismatch {
                op: "apply_function",
                left: (n, n),
                right: (v.dim(), 1),
            });
        }
        let fv: Vec<Complex<T>> = self.inner.values.iter().map(|&l| f(l)).collect();
        let re: Vec<T> = fv.iter().map(|z| z.re).collect();
        let im: Vec<T> = fv.iter().map(|z| z.im).collect();
        let out = if self.embedded {
            // φ(Z)(Re v; Im v) = (Re Zv; Im Zv)
            let stacked: Vec<T> = v
                .entries()
                .iter()
                .map(|z| z.re)
                .chain(v.entries().iter().map(|z| z.im))
                .collect();
            let gv = self.inner.apply_real(&re, &stacked);
            let hv = self.inner.apply_real(&im, &stacked);
            (0..n)
                .map(|i| {
                    let g = Complex::new(gv[i], gv[i + n]);
                    let h = Complex::new(hv[i], hv[i + n]);
                    g + h * Complex::i()
                })
                .collect()
        } else {
            let vr: Vec<T> = v.entries().iter().map(|z| z.re).collect();
            let vi: Vec<T> = v.entries().iter().map(|z| z.im).collect();
            let (gr, gi) = (self.inner.apply_real(&re, &vr), self.inner.apply_real(&re, &vi));
            let (hr, hi) = (self.inner.apply_real(&im, &vr), self.inner.apply_real(&im, &vi));
            (0..n)
                .map(|i| Complex::new(gr[i], gi[i]) + Complex::new(hr[i], hi[i]) * Complex::i())
                .collect()
        };
        Ok(ComplexVector::new(out))
    }
}

// Column-major accessor: element (row, col) of the n×n working matrix.
macro_rules! at {
    ($v:expr, $n:expr, $r:expr, $c:expr) => {
        $v[($c) * $n + ($r)]
    };
}

/// Householder reduction to tridiagonal form; on exit `v` holds the
/// orthogonal transform, `d` the diagonal and `e` the subdiagonal.
fn tred2<T: Real>(n: usize, v: &mut [T], d: &mut [T], e: &mut [T]) {
    for j in 0..n {
        d[j] = at!(v, n, n - 1, j);
    }

    for i in (1..n).rev() {
        let mut scale = T::zero();
        let mut h = T::zero();
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = at!(v, n, i - 1, j);
                at!(v, n, i, j) = T::zero();
                at!(v, n, j, i) = T::zero();
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = T::zero();
            }

            for j in 0..i {
                f = d[j];
                at!(v, n, j, i) = f;
                g = e[j] + at!(v, n, j, j) * f;
                for k in (j + 1)..i {
                    let vkj = at!(v, n, k, j);
                    g += vkj * d[k];
                    e[k] += vkj * f;
                }
                e[j] = g;
            }
            f = T::zero();
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    at!(v, n, k, j) -= f * e[k] + g * d[k];
                }
                d[j] = at!(v, n, i - 1, j);
                at!(v, n, i, j) = T::zero();
            }
        }
        d[i] = h;
    }

    // accumulate transformations
    for i in 0..n - 1 {
        at!(v, n, n - 1, i) = at!(v, n, i, i);
        at!(v, n, i, i) = T::one();
        let h = d[i + 1];
        if h != T::zero() {
            for k in 0..=i {
                d[k] = at!(v, n, k, i + 1) / h;
            }
            for j in 0..=i {
                let mut g = T::zero();
                for k in 0..=i {
                    g += at!(v, n, k, i + 1) * at!(v, n, k, j);
                }
                for k in 0..=i {
                    at!(v, n, k, j) -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            at!(v, n, k, i + 1) = T::zero();
        }
    }
    for j in 0..n {
        d[j] = at!(v, n, n - 1, j);
        at!(v, n, n - 1, j) = T::zero();
    }
    at!(v, n, n - 1, n - 1) = T::one();
    e[0] = T::zero();
}

/// Implicit QL on the symmetric tridiagonal matrix (d, e), accumulating into
/// `v`. Eigenpairs are sorted ascending on exit.
fn tql2<T: Real>(n: usize, v: &mut [T], d: &mut [T], e: &mut [T]) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();

    let two = T::lit(2.0);
    let eps = T::epsilon();
    let mut f = T::zero();
    let mut tst1 = T::zero();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_QL_SWEEPS {
                    return Err(Error::NonConvergence {
                        residual: e[l].abs().as_f64(),
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (lo, hi) = v.split_at_mut((i + 1) * n);
                    let col_i = &mut lo[i * n..];
                    let col_i1 = &mut hi[..n];
                    for (a, b) in col_i.iter_mut().zip(col_i1.iter_mut()) {
                        let t = *b;
                        *b = s * *a + c * t;
                        *a = c * *a - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }

    // selection sort, swapping whole (contiguous) eigenvector columns
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = j;
                p = dj;
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            for r in 0..n {
                v.swap(i * n + r, k * n + r);
            }
        }
    }
    Ok(())
}
