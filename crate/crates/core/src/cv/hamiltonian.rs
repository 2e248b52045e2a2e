//! Quadratic Hamiltonians behind the CV circuits.

use serde::Serialize;

use super::transform::{check_lambda, CoordTransform};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Generator K = [[u, v], [w, −u]] with exp(−K) equal to the target matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HamiltonianParams<T> {
    pub u: T,
    pub v: T,
    pub w: T,
}

impl<T: Real> HamiltonianParams<T> {
    /// D = √(−(u² + vw)); NaN outside the elliptic regime.
    pub fn d(&self) -> T {
        (-(self.u * self.u + self.v * self.w)).sqrt()
    }

    /// cos D·I − (sin D/D)·K, using K² = −D²I.
    pub fn transform(&self) -> CoordTransform<T> {
        let d = self.d();
        let k = sinc(d);
        let cd = d.cos();
        CoordTransform {
            a: cd - k * self.u,
            b: -k * self.v,
            c: -k * self.w,
            d: cd + k * self.u,
        }
    }
}

fn sinc<T: Real>(d: T) -> T {
    if d.abs() < T::lit(1e-4) {
        let d2 = d * d;
        T::one() - d2 / T::lit(6.0) + d2 * d2 / T::lit(120.0)
    } else {
        d.sin() / d
    }
}

/// Inverts cos D·I − (sin D/D)·[[u, v], [w, −u]] = [[a, b], [c, d]] for a
/// det = +1 target with |a + d| < 2.
pub fn hamiltonian_params<T: Real>(target: &CoordTransform<T>) -> Result<HamiltonianParams<T>> {
    let det = target.det();
    if (det - T::one()).abs() > T::default_tol() * T::lit(0.01) {
        return Err(Error::InvalidTransform(format!(
            "Hamiltonian parameters need det = +1 (got det = {det})"
        )));
    }
    let CoordTransform { a, b, c, d } = *target;
    let half = T::lit(0.5);
    let trace = a + d;
    let cos_d = trace * half;
    // sin²D written without the 1 − cos²D cancellation
    let sin_sq = -((a - d) * half).powi(2) - b * c;
    if trace.abs() >= T::lit(2.0) || sin_sq <= T::zero() {
        return Err(Error::HyperbolicRegime { trace: trace.as_f64() });
    }
    let sin_d = sin_sq.sqrt();
    let k = sinc(sin_d.atan2(cos_d));
    Ok(HamiltonianParams {
        u: (cos_d - a) / k,
        v: -b / k,
        w: -c / k,
    })
}

/// Variable order of the phase-space vector ξ = (x, p_x, y, p_y).
pub const PHASE_SPACE_LABELS: [&str; 4] = ["x", "p_x", "y", "p_y"];

/// Symmetrically ordered quadratic operator Σᵢⱼ Qᵢⱼ ξᵢξⱼ + constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadraticForm<T> {
    pub coeffs: [[T; 4]; 4],
    pub constant: T,
}

impl<T: Real> QuadraticForm<T> {
    pub fn zero() -> Self {
        Self {
            coeffs: [[T::zero(); 4]; 4],
            constant: T::zero(),
        }
    }

    /// Adds `coef · ξᵢξⱼ`, split symmetrically when i ≠ j.
    pub fn with_term(mut self, i: usize, j: usize, coef: T) -> Self {
        if i == j {
            self.coeffs[i][i] += coef;
        } else {
            let h = coef * T::lit(0.5);
            self.coeffs[i][j] += h;
            self.coeffs[j][i] += h;
        }
        self
    }

    pub fn with_constant(mut self, constant: T) -> Self {
        self.constant += constant;
        self
    }

    /// Σₖ Lₖ² + constant for linear forms Lₖ = Σᵢ lₖᵢ ξᵢ.
    pub fn sum_of_squares(forms: &[[T; 4]], constant: T) -> Self {
        let mut q = Self::zero().with_constant(constant);
        for l in forms {
            for i in 0..4 {
                for j in 0..4 {
                    q.coeffs[i][j] += l[i] * l[j];
                }
            }
        }
        q
    }

    pub fn is_symmetric(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| self.coeffs[i][j] == self.coeffs[j][i]))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut m = (self.constant - other.constant).abs();
        for i in 0..4 {
            for j in 0..4 {
                m = m.max((self.coeffs[i][j] - other.coeffs[i][j]).abs());
            }
        }
        m
    }

    /// −x p_y coupling of V_xpy: exp(−iα x p_y) = exp(−iα G) with G = x p_y.
    pub fn x_py() -> Self {
        Self::zero().with_term(0, 3, T::one())
    }

    /// Beam-splitter generator x p_y − y p_x.
    pub fn beam_splitter() -> Self {
        Self::zero().with_term(0, 3, T::one()).with_term(2, 1, -T::one())
    }

    /// λ x p_y − λ⁻¹ y p_x; at angle π/2 this is the p = 0 swapping circuit.
    pub fn ssm_p0(lambda: T) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(Self::zero().with_term(0, 3, lambda).with_term(2, 1, -lambda.recip()))
    }
}

/// Generator Ĉ of the p = 1 swapping circuit:
/// (λx² + λ⁻¹p_x²)/2 + (λ⁻¹y² + λp_y²)/2 − (xy + p_x p_y) − 1/2.
pub fn ssm_p1_quadratic_form<T: Real>(lambda: T) -> Result<QuadraticForm<T>> {
    check_lambda(lambda)?;
    let h = T::lit(0.5);
    let li = lambda.recip();
    Ok(QuadraticForm::zero()
        .with_term(0, 0, h * lambda)
        .with_term(1, 1, h * li)
        .with_term(2, 2, h * li)
        .with_term(3, 3, h * lambda)
        .with_term(0, 2, -T::one())
        .with_term(1, 3, -T::one())
        .with_constant(-h))
}

/// Normal-mode variables (X, P_X, Y, P_Y) of Ĉ as linear forms over ξ:
/// X = √(λ/2)x − y/√(2λ), P_X = p_x/√(2λ) − √(λ/2)p_y, and Y, P_Y with the
/// signs of the second terms flipped.
pub fn ssm_normal_modes<T: Real>(lambda: T) -> Result<[[T; 4]; 4]> {
    check_lambda(lambda)?;
    let z = T::zero();
    let s = (lambda * T::lit(0.5)).sqrt();
    let t = (T::lit(2.0) * lambda).sqrt().recip();
    Ok([[s, z, -t, z], [z, t, z, -s], [s, z, t, z], [z, t, z, s]])
}

/// c with [L₁, L₂] = i·c for linear forms over ξ.
pub fn commutator_coefficient<T: Real>(l1: &[T; 4], l2: &[T; 4]) -> T {
    l1[0] * l2[1] - l1[1] * l2[0] + l1[2] * l2[3] - l1[3] * l2[2]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cv::transform::{csm, ssm, CvGate};
    use crate::linalg::{matrix_exponential, ComplexMatrix};
    use num_complex::Complex;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// exp(−K) by the general matrix exponential.
    fn reexp(h: &HamiltonianParams<f64>) -> CoordTransform<f64> {
        let k = ComplexMatrix::from_real(2, 2, &[h.u, h.v, h.w, -h.u]).unwrap();
        let e = matrix_exponential(&k, Complex::new(-1.0, 0.0)).unwrap();
        CoordTransform { a: e[(0, 0)].re, b: e[(0, 1)].re, c: e[(1, 0)].re, d: e[(1, 1)].re }
    }

    #[test]
    fn csm_and_ssm_parameters() {
        let l = 1.7;
        let k = PI / (3.0 * 3f64.sqrt());
        let h = hamiltonian_params(&csm(l).unwrap()).unwrap();
        assert!((h.u - k).abs() < 1e-12 && (h.v + 2.0 * k / l).abs() < 1e-12 && (h.w - 2.0 * k * l).abs() < 1e-12);
        let h = hamiltonian_params(&ssm(l, 0).unwrap()).unwrap();
        assert!(h.u.abs() < 1e-12 && (h.v + PI / (2.0 * l)).abs() < 1e-12 && (h.w - PI * l / 2.0).abs() < 1e-12);
        assert!(reexp(&h).max_abs_diff(&ssm(l, 0).unwrap()) < 1e-10);
    }

    #[test]
    fn small_rotation_limit() {
        let th = 1e-6_f64;
        let h = hamiltonian_params(&CvGate::Rot(th).matrix()).unwrap();
        assert!(h.u.abs() < 1e-15);
        assert!((h.v + th).abs() < 1e-18 && (h.w - th).abs() < 1e-18);
    }

    #[test]
    fn regime_errors() {
        let err = hamiltonian_params(&CvGate::TwoModeSqueeze(0.5).matrix()).unwrap_err();
        assert!(matches!(err, Error::HyperbolicRegime { trace } if (trace - 2.0 * 0.5f64.cosh()).abs() < 1e-12));
        assert!(hamiltonian_params(&CoordTransform::<f64>::identity()).is_err());
        assert!(matches!(
            hamiltonian_params(&ssm(1.0, 1).unwrap()),
            Err(Error::InvalidTransform(_))
        ));
    }

    #[test]
    fn quadratic_form_at_unit_lambda() {
        let q = ssm_p1_quadratic_form(1.0).unwrap();
        let want = QuadraticForm::zero()
            .with_term(0, 0, 0.5)
            .with_term(1, 1, 0.5)
            .with_term(2, 2, 0.5)
            .with_term(3, 3, 0.5)
            .with_term(0, 2, -1.0)
            .with_term(1, 3, -1.0)
            .with_constant(-0.5);
        assert_eq!(q, want);
        assert!(q.is_symmetric());
        assert!(ssm_p1_quadratic_form(0.0_f64).is_err());
    }

    #[test]
    fn normal_modes_at_lambda_four() {
        let m = ssm_normal_modes(4.0).unwrap();
        let want_x = [2f64.sqrt(), 0.0, -1.0 / (2.0 * 2f64.sqrt()), 0.0];
        for i in 0..4 {
            assert!((m[0][i] - want_x[i]).abs() < 1e-15);
        }
        assert!((commutator_coefficient(&m[0], &m[1]) - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn normal_mode_structure(l in 0.05..20.0_f64) {
            let m = ssm_normal_modes(l).unwrap();
            let q = ssm_p1_quadratic_form(l).unwrap();
            let from_modes = QuadraticForm::sum_of_squares(&m[..2], -0.5);
            prop_assert!(q.max_abs_diff(&from_modes) < 1e-12 * l.max(1.0 / l));
            prop_assert!((commutator_coefficient(&m[0], &m[1]) - 1.0).abs() < 1e-12);
            prop_assert!((commutator_coefficient(&m[2], &m[3]) - 1.0).abs() < 1e-12);
            for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
                prop_assert!(commutator_coefficient(&m[i], &m[j]).abs() < 1e-12);
            }
        }

        #[test]
        fn hamiltonian_round_trip(th in 0.05..3.0_f64, r in -1.5..1.5_f64, phi in -3.0..3.0_f64) {
            // rotation conjugated by a squeeze stays elliptic with trace 2cos θ
            let s = CvGate::TwoModeSqueeze(r).matrix();
            let si = CvGate::TwoModeSqueeze(-r).matrix();
            let tg = s.then(&CvGate::Rot(th).matrix()).then(&si).then(&CvGate::Rot(phi).matrix()).then(&CvGate::Rot(-phi).matrix());
            let h = hamiltonian_params(&tg).unwrap();
            prop_assert!(reexp(&h).max_abs_diff(&tg) < 1e-10);
            prop_assert!(h.transform().max_abs_diff(&tg) < 1e-10);
        }
    }
}
