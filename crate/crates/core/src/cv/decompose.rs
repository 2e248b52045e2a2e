//! Inversions from a target substitution matrix to gate parameters.

use serde::Serialize;

use super::transform::{check_lambda, CoordTransform, CvGate, GateSequence};
use crate::error::{Error, Result};
use crate::scalar::{wrap_angle, Real};

/// Tolerance on |C² − S² − 1| in the two-mode inversion (f64).
pub const CONSISTENCY_TOL: f64 = 1e-8;

fn consistency_tol<T: Real>() -> f64 {
    CONSISTENCY_TOL.max(64.0 * T::epsilon().as_f64())
}

fn sign<T: Real>(p: u8) -> T {
    if p == 1 {
        -T::one()
    } else {
        T::one()
    }
}

fn parity_prefix<T: Real>(p: u8) -> Vec<CvGate<T>> {
    if p == 1 {
        vec![CvGate::ParityY]
    } else {
        Vec::new()
    }
}

/// Π_y^p followed by V_xpy(α), V_ypx(β), V_xpy(γ).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VonNeumannParams<T> {
    pub p: u8,
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
}

impl<T: Real> VonNeumannParams<T> {
    pub fn gate_sequence(&self) -> GateSequence<T> {
        let mut gates = parity_prefix(self.p);
        gates.extend([CvGate::Vxpy(self.alpha), CvGate::Vypx(self.beta), CvGate::Vxpy(self.gamma)]);
        GateSequence::new(gates)
    }

    pub fn transform(&self) -> CoordTransform<T> {
        self.gate_sequence().compose()
    }
}

/// Π_y^p, T(θ₁), S(−r), T(θ₂).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OpticalParams<T> {
    pub r: T,
    pub theta1: T,
    pub theta2: T,
    pub p: u8,
}

impl<T: Real> OpticalParams<T> {
    pub fn gate_sequence(&self) -> GateSequence<T> {
        let mut gates = parity_prefix(self.p);
        gates.extend([CvGate::Rot(self.theta1), CvGate::TwoModeSqueeze(-self.r), CvGate::Rot(self.theta2)]);
        GateSequence::new(gates)
    }

    /// Closed-form (a, b, c, d) in terms of Σ = θ₁ + θ₂ and Δ = θ₁ − θ₂.
    pub fn transform(&self) -> CoordTransform<T> {
        let (ch, sh) = (self.r.cosh(), self.r.sinh());
        let (ss, cs) = (self.theta1 + self.theta2).sin_cos();
        let (sd, cd) = (self.theta1 - self.theta2).sin_cos();
        let s = sign::<T>(self.p);
        CoordTransform {
            a: ch * cs - sh * sd,
            b: ch * ss - sh * cd,
            c: s * (-ch * ss - sh * cd),
            d: s * (ch * cs + sh * sd),
        }
    }

    /// Parameters of the equivalent single-mode-squeezer circuit.
    pub fn to_single_mode(&self) -> SingleModeOpticalParams<T> {
        SingleModeOpticalParams {
            r: self.r,
            theta1: wrap_angle(self.theta1 - T::FRAC_PI_4()),
            theta2: wrap_angle(self.theta2 + T::FRAC_PI_4()),
            p: self.p,
        }
    }
}

/// Π_y^p, T(θ₁′), S_x(−r′), S_y(r′), T(θ₂′).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SingleModeOpticalParams<T> {
    pub r: T,
    pub theta1: T,
    pub theta2: T,
    pub p: u8,
}

impl<T: Real> SingleModeOpticalParams<T> {
    pub fn gate_sequence(&self) -> GateSequence<T> {
        let mut gates = parity_prefix(self.p);
        gates.extend([
            CvGate::Rot(self.theta1),
            CvGate::SqueezeX(-self.r),
            CvGate::SqueezeY(self.r),
            CvGate::Rot(self.theta2),
        ]);
        GateSequence::new(gates)
    }

    pub fn transform(&self) -> CoordTransform<T> {
        self.gate_sequence().compose()
    }
}

fn is_negligible<T: Real>(v: T, t: &CoordTransform<T>) -> bool {
    let scale = t.to_array().iter().fold(T::one(), |m, x| m.max(x.abs()));
    v.abs() <= T::lit(4.0) * T::epsilon() * scale
}

/// Three-gate von Neumann decomposition.
pub fn decompose_von_neumann<T: Real>(target: &CoordTransform<T>) -> Result<VonNeumannParams<T>> {
    target.check_unitary()?;
    let p = target.parity_index();
    let s = sign::<T>(p);
    let CoordTransform { a, b, c, d } = *target;
    if is_negligible(b, target) {
        if !is_negligible(a - T::one(), target) {
            return Err(Error::NotDecomposable(format!(
                "b = 0 requires a = 1 for the three-gate von Neumann form (a = {a})"
            )));
        }
        return Ok(VonNeumannParams {
            p,
            alpha: T::zero(),
            beta: T::zero(),
            gamma: -s * c,
        });
    }
    let beta = -b;
    Ok(VonNeumannParams {
        p,
        alpha: (s * d - T::one()) / beta,
        beta,
        gamma: (a - T::one()) / beta,
    })
}

/// Beam splitter / two-mode squeezer decomposition. Branch choice: r ≥ 0,
/// angles in (−π, π], and Δ = 0 when r vanishes.
pub fn decompose_two_mode<T: Real>(target: &CoordTransform<T>) -> Result<OpticalParams<T>> {
    target.check_unitary()?;
    let p = target.parity_index();
    let s = sign::<T>(p);
    let half = T::lit(0.5);
    let CoordTransform { a, b, c, d } = *target;
    let (c, d) = (s * c, s * d);
    let (ch_cos_sum, ch_sin_sum) = ((a + d) * half, (b - c) * half);
    let (sh_sin_diff, sh_cos_diff) = ((d - a) * half, -(b + c) * half);
    let ch = ch_cos_sum.hypot(ch_sin_sum);
    let sh = sh_sin_diff.hypot(sh_cos_diff);
    let residual = (ch * ch - sh * sh - T::one()).abs();
    let tol = consistency_tol::<T>();
    if residual.as_f64() > tol {
        return Err(Error::InconsistentTarget {
            residual: residual.as_f64(),
            tolerance: tol,
        });
    }
    let sum = ch_sin_sum.atan2(ch_cos_sum);
    let diff = if is_negligible(sh, target) {
        T::zero()
    } else {
        sh_sin_diff.atan2(sh_cos_diff)
    };
    Ok(OpticalParams {
        r: sh.asinh(),
        theta1: wrap_angle((sum + diff) * half),
        theta2: wrap_angle((sum - diff) * half),
        p,
    })
}

pub fn decompose_single_mode<T: Real>(target: &CoordTransform<T>) -> Result<SingleModeOpticalParams<T>> {
    Ok(decompose_two_mode(target)?.to_single_mode())
}

/// S_y(ln λ), T(π/2), S_y(−ln λ) after Π_y^p: realizes the SSM transform with a
/// single beam splitter.
pub fn ssm_alternative_sequence<T: Real>(lambda: T, p: u8) -> Result<GateSequence<T>> {
    check_lambda(lambda)?;
    if p > 1 {
        return Err(Error::InvalidParameter {
            name: "p",
            value: f64::from(p),
            constraint: "p must be 0 or 1",
        });
    }
    let ln = lambda.ln();
    let mut gates = parity_prefix(p);
    gates.extend([CvGate::SqueezeY(ln), CvGate::Rot(T::FRAC_PI_2()), CvGate::SqueezeY(-ln)]);
    Ok(GateSequence::new(gates))
}
