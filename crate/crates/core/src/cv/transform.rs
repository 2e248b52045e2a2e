use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Linear substitution U ψ(x)φ(y) = √|det| ψ(ax+by) φ(cx+dy).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoordTransform<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> CoordTransform<T> {
    /// Rejects non-finite entries and singular matrices.
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self> {
        let t = Self { a, b, c, d };
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidTransform("entries must be finite".into()));
        }
        if t.det() == T::zero() {
            return Err(Error::InvalidTransform("det = ad - bc must be nonzero".into()));
        }
        Ok(t)
    }

    /// Like [`new`](Self::new) but additionally requires |det| = 1 within 1e-12.
    pub fn unitary(a: T, b: T, c: T, d: T) -> Result<Self> {
        let t = Self::new(a, b, c, d)?;
        t.check_unitary()?;
        Ok(t)
    }

    pub fn identity() -> Self {
        Self {
            a: T::one(),
            b: T::zero(),
            c: T::zero(),
            d: T::one(),
        }
    }

    pub fn det(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    pub fn normalization(&self) -> T {
        self.det().abs().sqrt()
    }

    pub fn is_circuit_unitary(&self) -> bool {
        (self.det().abs() - T::one()).abs() <= unitary_tol::<T>()
    }

    pub fn check_unitary(&self) -> Result<()> {
        if self.is_circuit_unitary() {
            Ok(())
        } else {
            Err(Error::InvalidTransform(format!(
                "|det| must equal 1 for a measurement circuit (got det = {})",
                self.det()
            )))
        }
    }

    /// 0 for det > 0, 1 for det < 0.
    pub fn parity_index(&self) -> u8 {
        u8::from(self.det() < T::zero())
    }

    /// Matrix product `self · rhs`.
    pub fn then(&self, rhs: &Self) -> Self {
        Self {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        [
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        ]
        .iter()
        .fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn to_array(&self) -> [T; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Arguments (ax+by, cx+dy) fed to ψ and φ.
    #[inline]
    pub fn map(&self, x: T, y: T) -> (T, T) {
        (self.a * x + self.b * y, self.c * x + self.d * y)
    }
}

fn unitary_tol<T: Real>() -> T {
    T::default_tol() * T::lit(0.01)
}

impl<T: Real> Serialize for CoordTransform<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CoordTransform", 5)?;
        st.serialize_field("a", &self.a.as_f64())?;
        st.serialize_field("b", &self.b.as_f64())?;
        st.serialize_field("c", &self.c.as_f64())?;
        st.serialize_field("d", &self.d.as_f64())?;
        st.serialize_field("det", &self.det().as_f64())?;
        st.end()
    }
}

/// Continuous-variable gates with their substitution matrices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CvGate<T> {
    /// exp(−iα x p_y): y ↦ y − αx.
    Vxpy(T),
    /// exp(−iβ y p_x): x ↦ x − βy.
    Vypx(T),
    ParityY,
    ParityX,
    /// Beam splitter exp[−iθ(x p_y − y p_x)].
    Rot(T),
    /// exp[ir(x p_y + y p_x)].
    TwoModeSqueeze(T),
    /// ψ(x) ↦ e^{r/2} ψ(e^r x).
    SqueezeX(T),
    SqueezeY(T),
}

impl<T: Real> CvGate<T> {
    pub fn name(&self) -> &'static str {
        match self {
            CvGate::Vxpy(_) => "Vxpy",
            CvGate::Vypx(_) => "Vypx",
            CvGate::ParityY => "ParityY",
            CvGate::ParityX => "ParityX",
            CvGate::Rot(_) => "Rot",
            CvGate::TwoModeSqueeze(_) => "TwoModeSqueeze",
            CvGate::SqueezeX(_) => "SqueezeX",
            CvGate::SqueezeY(_) => "SqueezeY",
        }
    }

    pub fn param(&self) -> Option<T> {
        match *self {
            CvGate::Vxpy(v)
            | CvGate::Vypx(v)
            | CvGate::Rot(v)
            | CvGate::TwoModeSqueeze(v)
            | CvGate::SqueezeX(v)
            | CvGate::SqueezeY(v) => Some(v),
            CvGate::ParityY | CvGate::ParityX => None,
        }
    }

    pub fn matrix(&self) -> CoordTransform<T> {
        let (o, z) = (T::one(), T::zero());
        let m = |a, b, c, d| CoordTransform { a, b, c, d };
        match *self {
            CvGate::Vxpy(al) => m(o, z, -al, o),
            CvGate::Vypx(be) => m(o, -be, z, o),
            CvGate::ParityY => m(o, z, z, -o),
            CvGate::ParityX => m(-o, z, z, o),
            CvGate::Rot(th) => {
                let (s, c) = th.sin_cos();
                m(c, s, -s, c)
            }
            CvGate::TwoModeSqueeze(r) => m(r.cosh(), r.sinh(), r.sinh(), r.cosh()),
            CvGate::SqueezeX(r) => m(r.exp(), z, z, o),
            CvGate::SqueezeY(r) => m(o, z, z, r.exp()),
        }
    }
}

pub fn gate_matrix<T: Real>(g: &CvGate<T>) -> CoordTransform<T> {
    g.matrix()
}

impl<T: Real> Serialize for CvGate<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CvGate", 2)?;
        st.serialize_field("gate", self.name())?;
        let params: Vec<f64> = self.param().into_iter().map(|v| v.as_f64()).collect();
        st.serialize_field("params", &params)?;
        st.end()
    }
}

/// Gates in application order: the first element acts first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GateSequence<T> {
    pub gates: Vec<CvGate<T>>,
}

impl<T: Real> GateSequence<T> {
    pub fn new(gates: Vec<CvGate<T>>) -> Self {
        Self { gates }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Substitution matrix of the whole circuit. Substituting into an already
    /// transformed product multiplies matrices left to right in application
    /// order, so the result is M₁·M₂⋯Mₙ. Empty sequences give the identity.
    pub fn compose(&self) -> CoordTransform<T> {
        self.gates
            .iter()
            .fold(CoordTransform::identity(), |acc, g| acc.then(&g.matrix()))
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&other.gates);
        Self { gates }
    }
}

pub fn compose<T: Real>(seq: &GateSequence<T>) -> CoordTransform<T> {
    seq.compose()
}

impl<T: Real> Serialize for GateSequence<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.gates.len()))?;
        for g in &self.gates {
            seq.serialize_element(g)?;
        }
        seq.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PresetKind {
    /// von Neumann model.
    Vnm,
    /// Contractive state measurement.
    Csm,
    /// Swapping state measurement.
    Ssm,
}

impl PresetKind {
    pub fn name(self) -> &'static str {
        match self {
            PresetKind::Vnm => "vnm",
            PresetKind::Csm => "csm",
            PresetKind::Ssm => "ssm",
        }
    }
}

/// A named measurement circuit with scaling parameter λ > 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PresetCircuit<T> {
    pub kind: PresetKind,
    pub lambda: T,
    /// Only meaningful for SSM.
    pub p: u8,
}

impl<T: Real> PresetCircuit<T> {
    pub fn new(kind: PresetKind, lambda: T, p: u8) -> Result<Self> {
        check_lambda(lambda)?;
        if p > 1 {
            return Err(Error::InvalidParameter {
                name: "p",
                value: f64::from(p),
                constraint: "p must be 0 or 1",
            });
        }
        Ok(Self { kind, lambda, p })
    }

    pub fn transform(&self) -> CoordTransform<T> {
        let (o, z, l) = (T::one(), T::zero(), self.lambda);
        let m = |a, b, c, d| CoordTransform { a, b, c, d };
        match self.kind {
            PresetKind::Vnm => m(o, z, -l, o),
            PresetKind::Csm => m(z, l.recip(), -l, o),
            PresetKind::Ssm => {
                let sign = if self.p == 1 { o } else { -o };
                m(z, l.recip(), sign * l, z)
            }
        }
    }
}

pub fn check_lambda<T: Real>(lambda: T) -> Result<()> {
    if lambda.is_finite() && lambda > T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda.as_f64(),
            constraint: "lambda must be finite and > 0",
        })
    }
}

pub fn vnm<T: Real>(lambda: T) -> Result<CoordTransform<T>> {
    Ok(PresetCircuit::new(PresetKind::Vnm, lambda, 0)?.transform())
}

pub fn csm<T: Real>(lambda: T) -> Result<CoordTransform<T>> {
    Ok(PresetCircuit::new(PresetKind::Csm, lambda, 0)?.transform())
}

pub fn ssm<T: Real>(lambda: T, p: u8) -> Result<CoordTransform<T>> {
    Ok(PresetCircuit::new(PresetKind::Ssm, lambda, p)?.transform())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(a: f64, b: f64, c: f64, d: f64) -> CoordTransform<f64> {
        CoordTransform { a, b, c, d }
    }

    #[test]
    fn gate_matrices() {
        let r = CvGate::Rot(std::f64::consts::FRAC_PI_2).matrix();
        assert!(r.max_abs_diff(&t(0., 1., -1., 0.)) < 1e-15);
        assert_eq!(CvGate::Vxpy(0.0).matrix(), CoordTransform::identity());
        assert_eq!(CvGate::SqueezeY(0.0_f64).matrix(), CoordTransform::identity());
    }

    #[test]
    fn three_gate_worked_example() {
        let seq = GateSequence::new(vec![CvGate::Vxpy(0.0), CvGate::Vypx(0.0), CvGate::Vxpy(2.0)]);
        assert_eq!(seq.compose(), t(1., 0., -2., 1.));
        // general form: a = 1 + βγ, b = −β, c = −α − γ − αβγ, d = 1 + αβ
        let (al, be, ga) = (0.3, -1.7, 0.9);
        let m = GateSequence::new(vec![CvGate::Vxpy(al), CvGate::Vypx(be), CvGate::Vxpy(ga)]).compose();
        let want = t(1. + be * ga, -be, -al - ga - al * be * ga, 1. + al * be);
        assert!(m.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn parity_involution_and_swap() {
        let pp = GateSequence::new(vec![CvGate::<f64>::ParityY, CvGate::ParityY]).compose();
        assert_eq!(pp, CoordTransform::identity());
        let swap = GateSequence::new(vec![
            CvGate::ParityY,
            CvGate::Vxpy(1.0),
            CvGate::Vypx(-1.0),
            CvGate::Vxpy(1.0),
        ])
        .compose();
        assert!(swap.max_abs_diff(&t(0., 1., 1., 0.)) < 1e-15);
    }

    #[test]
    fn presets_and_validation() {
        assert_eq!(vnm(2.0).unwrap(), t(1., 0., -2., 1.));
        assert_eq!(csm(2.0).unwrap(), t(0., 0.5, -2., 1.));
        assert_eq!(ssm(2.0, 1).unwrap(), t(0., 0.5, 2., 0.));
        assert_eq!(ssm(2.0, 0).unwrap().det(), 1.0);
        assert!(vnm(0.0_f64).is_err());
        assert!(ssm(1.0_f64, 2).is_err());
        assert!(CoordTransform::new(1.0, 2.0, 2.0, 4.0).is_err());
        assert!(CoordTransform::unitary(2.0, 0.0, 0.0, 1.0).is_err());
        assert!(CoordTransform::unitary(2.0, 0.0, 0.0, 0.5).is_ok());
    }

    #[test]
    fn json_shape() {
        let seq = GateSequence::new(vec![CvGate::ParityY, CvGate::Rot(0.5)]);
        let j = serde_json::to_string(&seq).unwrap();
        assert_eq!(j, r#"[{"gate":"ParityY","params":[]},{"gate":"Rot","params":[0.5]}]"#);
    }

    fn gate() -> impl Strategy<Value = CvGate<f64>> {
        let p = -2.0..2.0_f64;
        prop_oneof![
            p.clone().prop_map(CvGate::Vxpy),
            p.clone().prop_map(CvGate::Vypx),
            Just(CvGate::ParityY),
            Just(CvGate::ParityX),
            p.clone().prop_map(CvGate::Rot),
            p.clone().prop_map(CvGate::TwoModeSqueeze),
            p.clone().prop_map(CvGate::SqueezeX),
            p.prop_map(CvGate::SqueezeY),
        ]
    }

    proptest! {
        #[test]
        fn det_is_multiplicative(
            s1 in prop::collection::vec(gate(), 1..6),
            s2 in prop::collection::vec(gate(), 1..6),
        ) {
            let (a, b) = (GateSequence::new(s1), GateSequence::new(s2));
            let whole = a.concat(&b).compose().det();
            let parts = a.compose().det() * b.compose().det();
            prop_assert!((whole - parts).abs() <= 1e-12 * parts.abs().max(1.0));
        }

        #[test]
        fn parity_negates_det(s in prop::collection::vec(gate(), 1..6)) {
            let base = GateSequence::new(s);
            let flipped = base.concat(&GateSequence::new(vec![CvGate::ParityY]));
            prop_assert!((flipped.compose().det() + base.compose().det()).abs() < 1e-9);
        }

        #[test]
        fn non_parity_gates_have_positive_det(g in gate()) {
            let det = g.matrix().det();
            match g {
                CvGate::ParityX | CvGate::ParityY => prop_assert_eq!(det, -1.0),
                CvGate::SqueezeX(r) | CvGate::SqueezeY(r) => prop_assert!((det - r.exp()).abs() < 1e-12),
                _ => prop_assert!((det - 1.0).abs() < 1e-12),
            }
        }
    }
}
