//! Two-level measurement circuits: CNOT, double-CNOT and SWAP.
//!
//! Basis ordering is system-major with |+⟩ (σz = +1) first, so the two-qubit
//! index of |s⟩|p⟩ is `2 * s + p` where `s, p ∈ {0 ↦ +, 1 ↦ −}`. The probe is
//! read out in the σz basis.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{matrix_exponential, ComplexMatrix, ComplexVector};
use crate::scalar::Real;

/// Pure qubit state a|+⟩ + b|−⟩.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitState<T> {
    pub amp_plus: Complex<T>,
    pub amp_minus: Complex<T>,
}

impl<T: Real> QubitState<T> {
    /// Builds a state, rejecting amplitudes whose norm is off by more than the
    /// scalar's default tolerance.
    pub fn new(amp_plus: Complex<T>, amp_minus: Complex<T>) -> Result<Self> {
        let s = Self { amp_plus, amp_minus };
        let norm = s.norm();
        if (norm - T::one()).abs() >= T::default_tol() {
            return Err(Error::Unnormalized { norm: norm.as_f64() });
        }
        Ok(s)
    }

    /// Rescales arbitrary amplitudes to unit norm; `None` for the zero vector.
    pub fn normalized(amp_plus: Complex<T>, amp_minus: Complex<T>) -> Option<Self> {
        let n = (amp_plus.norm_sqr() + amp_minus.norm_sqr()).sqrt();
        if n == T::zero() {
            return None;
        }
        Some(Self {
            amp_plus: amp_plus / n,
            amp_minus: amp_minus / n,
        })
    }

    pub fn plus() -> Self {
        Self {
            amp_plus: Complex::one(),
            amp_minus: Complex::zero(),
        }
    }

    pub fn minus() -> Self {
        Self {
            amp_plus: Complex::zero(),
            amp_minus: Complex::one(),
        }
    }

    pub fn norm(&self) -> T {
        (self.amp_plus.norm_sqr() + self.amp_minus.norm_sqr()).sqrt()
    }

    pub fn to_vector(self) -> ComplexVector<T> {
        ComplexVector::new(vec![self.amp_plus, self.amp_minus])
    }

    /// max-entry distance after removing the relative global phase.
    pub fn distance_up_to_phase(&self, other: &Self) -> T {
        crate::linalg::state_distance_up_to_phase(&self.to_vector(), &other.to_vector())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QubitScheme {
    Cnot,
    Dcnot,
    Swap,
}

impl QubitScheme {
    pub const ALL: [QubitScheme; 3] = [QubitScheme::Cnot, QubitScheme::Dcnot, QubitScheme::Swap];

    pub fn name(self) -> &'static str {
        match self {
            QubitScheme::Cnot => "CNOT",
            QubitScheme::Dcnot => "DCNOT",
            QubitScheme::Swap => "SWAP",
        }
    }
}

/// Measurement operators for the two probe outcomes s_p^z = ±1.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausPair<T> {
    pub m_plus: ComplexMatrix<T>,
    pub m_minus: ComplexMatrix<T>,
}

impl<T: Real> KrausPair<T> {
    /// ‖M₊†M₊ + M₋†M₋ − I‖_max.
    pub fn completeness_residual(&self) -> T {
        let sum = &(&self.m_plus.adjoint() * &self.m_plus) + &(&self.m_minus.adjoint() * &self.m_minus);
        sum.max_abs_diff(&ComplexMatrix::identity(2)).expect("2x2")
    }

    /// ⟨ψ|M†M|ψ⟩ for both outcomes.
    pub fn probabilities(&self, system: &QubitState<T>) -> (T, T) {
        let v = system.to_vector();
        let p = |m: &ComplexMatrix<T>| m.apply(&v).expect("2x2").norm_sqr();
        (p(&self.m_plus), p(&self.m_minus))
    }

    /// M|ψ⟩/√P for both outcomes, `None` where P vanishes.
    pub fn post_states(&self, system: &QubitState<T>) -> (Option<QubitState<T>>, Option<QubitState<T>>) {
        let v = system.to_vector();
        let post = |m: &ComplexMatrix<T>| {
            let w = m.apply(&v).expect("2x2");
            branch_state(w[0], w[1])
        };
        (post(&self.m_plus), post(&self.m_minus))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitMeasurementResult<T> {
    pub prob_plus: T,
    pub prob_minus: T,
    /// Conditional system state; `None` when the outcome has zero probability.
    pub post_plus: Option<QubitState<T>>,
    pub post_minus: Option<QubitState<T>>,
}

fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

pub fn identity2<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::identity(2)
}

pub fn pauli_x<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_vec(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).expect("2x2")
}

pub fn pauli_y<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_vec(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).expect("2x2")
}

pub fn pauli_z<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_vec(2, 2, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]).expect("2x2")
}

/// (σx + σz)/√2.
pub fn hadamard<T: Real>() -> ComplexMatrix<T> {
    (&pauli_x::<T>() + &pauli_z()).scale_real(T::FRAC_1_SQRT_2())
}

fn half<T: Real>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    m.scale_real(T::lit(0.5))
}

/// CNOT with the system as control: flips the probe when the system is |−⟩.
pub fn cnot_system_to_probe<T: Real>() -> ComplexMatrix<T> {
    let (i, x, z) = (identity2::<T>(), pauli_x::<T>(), pauli_z::<T>());
    &half(&(&i + &z)).tensor(&i) + &half(&(&i - &z)).tensor(&x)
}

/// CNOT with the probe as control: flips the system when the probe is |−⟩.
pub fn cnot_probe_to_system<T: Real>() -> ComplexMatrix<T> {
    let (i, x, z) = (identity2::<T>(), pauli_x::<T>(), pauli_z::<T>());
    &i.tensor(&half(&(&i + &z))) + &x.tensor(&half(&(&i - &z)))
}

/// Exchanges the system and probe states.
pub fn swap_gate<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(4, 4, |i, j| {
        // |s p⟩ ↦ |p s⟩
        let (s, p) = (j / 2, j % 2);
        if i == 2 * p + s {
            Complex::one()
        } else {
            Complex::zero()
        }
    })
}

/// The 4×4 circuit unitary of a scheme.
pub fn build_unitary<T: Real>(scheme: QubitScheme) -> ComplexMatrix<T> {
    match scheme {
        QubitScheme::Cnot => cnot_system_to_probe(),
        // CNOT(p→s) acts first
        QubitScheme::Dcnot => &cnot_system_to_probe::<T>() * &cnot_probe_to_system(),
        QubitScheme::Swap => swap_gate(),
    }
}

fn branch_state<T: Real>(a: Complex<T>, b: Complex<T>) -> Option<QubitState<T>> {
    let p = a.norm_sqr() + b.norm_sqr();
    if p <= T::epsilon() {
        None
    } else {
        QubitState::normalized(a, b)
    }
}

fn check_normalized<T: Real>(s: &QubitState<T>) -> Result<()> {
    let norm = s.norm();
    if (norm - T::one()).abs() >= T::default_tol() {
        return Err(Error::Unnormalized { norm: norm.as_f64() });
    }
    Ok(())
}

/// Runs the circuit on |ψ⟩_s|φ⟩_p and projects the probe onto |±⟩.
pub fn measure<T: Real>(
    scheme: QubitScheme,
    system: &QubitState<T>,
    probe: &QubitState<T>,
) -> Result<QubitMeasurementResult<T>> {
    check_normalized(system)?;
    check_normalized(probe)?;
    let out = build_unitary::<T>(scheme).apply(&system.to_vector().tensor(&probe.to_vector()))?;
    // probe index is the fast one: out[2s + p]
    let (p_plus, p_minus) = (
        out[0].norm_sqr() + out[2].norm_sqr(),
        out[1].norm_sqr() + out[3].norm_sqr(),
    );
    Ok(QubitMeasurementResult {
        prob_plus: p_plus,
        prob_minus: p_minus,
        post_plus: branch_state(out[0], out[2]),
        post_minus: branch_state(out[1], out[3]),
    })
}

/// M_m = (I ⊗ ⟨m|_p) U (I ⊗ |φ⟩_p).
pub fn kraus_operators<T: Real>(scheme: QubitScheme, probe: &QubitState<T>) -> Result<KrausPair<T>> {
    check_normalized(probe)?;
    let u = build_unitary::<T>(scheme);
    let phi = [probe.amp_plus, probe.amp_minus];
    let extract = |m: usize| {
        ComplexMatrix::from_fn(2, 2, |s_out, s_in| {
            (0..2).map(|p| u[(2 * s_out + m, 2 * s_in + p)] * phi[p]).sum()
        })
    };
    Ok(KrausPair {
        m_plus: extract(0),
        m_minus: extract(1),
    })
}

/// Hermitian generator G and dimensionless angle θ with exp(iθG) equal to the
/// scheme's unitary (up to a global phase for SWAP).
#[derive(Clone, Debug, PartialEq)]
pub struct QubitGenerator<T> {
    pub generator: ComplexMatrix<T>,
    pub angle: T,
}

impl<T: Real> QubitGenerator<T> {
    pub fn unitary(&self) -> Result<ComplexMatrix<T>> {
        matrix_exponential(&self.generator, Complex::new(T::zero(), self.angle))
    }
}

/// Σ_k σ^k_s σ^k_p.
pub fn exchange_operator<T: Real>() -> ComplexMatrix<T> {
    let x = pauli_x::<T>();
    let y = pauli_y::<T>();
    let z = pauli_z::<T>();
    &(&x.tensor(&x) + &y.tensor(&y)) + &z.tensor(&z)
}

/// (I − σz_s)(I − σx_p)/4; idempotent.
pub fn cnot_projector<T: Real>() -> ComplexMatrix<T> {
    let (i, x, z) = (identity2::<T>(), pauli_x::<T>(), pauli_z::<T>());
    (&i - &z).tensor(&(&i - &x)).scale_real(T::lit(0.25))
}

/// [σy_s(I − σx_p − σz_p) − (I − σx_s − σz_s)σy_p] / (2√3); satisfies B³ = B.
pub fn dcnot_generator<T: Real>() -> ComplexMatrix<T> {
    let (i, x, y, z) = (identity2::<T>(), pauli_x::<T>(), pauli_y::<T>(), pauli_z::<T>());
    let k = &(&i - &x) - &z;
    let b = &y.tensor(&k) - &k.tensor(&y);
    b.scale_real(T::one() / (T::lit(2.0) * T::lit(3.0).sqrt()))
}

pub fn hamiltonian_generator<T: Real>(scheme: QubitScheme) -> QubitGenerator<T> {
    match scheme {
        QubitScheme::Cnot => QubitGenerator {
            generator: cnot_projector(),
            angle: T::PI(),
        },
        QubitScheme::Dcnot => QubitGenerator {
            generator: dcnot_generator(),
            angle: T::lit(2.0) * T::PI() / T::lit(3.0),
        },
        QubitScheme::Swap => QubitGenerator {
            generator: exchange_operator(),
            angle: T::FRAC_PI_4(),
        },
    }
}

/// (U_SWAP)^α ≡ exp[α·iπ/4·S_s·S_p].
pub fn sqrt_swap<T: Real>(alpha: T) -> Result<ComplexMatrix<T>> {
    matrix_exponential(&exchange_operator(), Complex::new(T::zero(), alpha * T::FRAC_PI_4()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Qubit {
    System,
    Probe,
}

/// One step of a qubit pulse program.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QubitPulse<T> {
    /// exp(i·angle·σz) on one qubit.
    ZRotation { qubit: Qubit, angle: T },
    /// (σx + σz)/√2 on one qubit.
    Hadamard { qubit: Qubit },
    /// (U_SWAP)^α.
    SwapPower { alpha: T },
}

impl<T: Real> QubitPulse<T> {
    pub fn name(&self) -> &'static str {
        match self {
            QubitPulse::ZRotation { qubit: Qubit::System, .. } => "Rz_s",
            QubitPulse::ZRotation { qubit: Qubit::Probe, .. } => "Rz_p",
            QubitPulse::Hadamard { qubit: Qubit::System } => "H_s",
            QubitPulse::Hadamard { qubit: Qubit::Probe } => "H_p",
            QubitPulse::SwapPower { .. } => "SWAP^alpha",
        }
    }

    pub fn params(&self) -> Vec<T> {
        match *self {
            QubitPulse::ZRotation { angle, .. } => vec![angle],
            QubitPulse::Hadamard { .. } => Vec::new(),
            QubitPulse::SwapPower { alpha } => vec![alpha],
        }
    }

    pub fn matrix(&self) -> Result<ComplexMatrix<T>> {
        let on = |q: Qubit, m: ComplexMatrix<T>| match q {
            Qubit::System => m.tensor(&identity2()),
            Qubit::Probe => identity2().tensor(&m),
        };
        Ok(match *self {
            QubitPulse::ZRotation { qubit, angle } => {
                let (ph_p, ph_m) = (
                    Complex::from_polar(T::one(), angle),
                    Complex::from_polar(T::one(), -angle),
                );
                on(qubit, ComplexMatrix::diag(&[ph_p, ph_m]))
            }
            QubitPulse::Hadamard { qubit } => on(qubit, hadamard()),
            QubitPulse::SwapPower { alpha } => sqrt_swap(alpha)?,
        })
    }
}

/// Pulses in application order (first element acts first).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PulseSequence<T> {
    pub pulses: Vec<QubitPulse<T>>,
}

impl<T: Real> PulseSequence<T> {
    /// Product G_n ⋯ G_1; the empty sequence gives I₄.
    pub fn compose(&self) -> Result<ComplexMatrix<T>> {
        self.pulses
            .iter()
            .try_fold(ComplexMatrix::identity(4), |acc, p| p.matrix()?.matmul(&acc))
    }
}

/// Single-qubit rotations and two √SWAP-type pulses realizing CNOT or DCNOT
/// up to a global phase.
pub fn pulse_sequence<T: Real>(scheme: QubitScheme) -> Result<PulseSequence<T>> {
    let (first, last, second_swap) = match scheme {
        QubitScheme::Cnot => (Qubit::Probe, Qubit::Probe, T::lit(0.5)),
        QubitScheme::Dcnot => (Qubit::Probe, Qubit::System, T::lit(-0.5)),
        QubitScheme::Swap => {
            return Err(Error::Unsupported("no pulse sequence is defined for the SWAP scheme".into()))
        }
    };
    let quarter = T::FRAC_PI_4();
    Ok(PulseSequence {
        pulses: vec![
            QubitPulse::Hadamard { qubit: first },
            QubitPulse::SwapPower { alpha: second_swap },
            QubitPulse::ZRotation {
                qubit: Qubit::System,
                angle: T::FRAC_PI_2(),
            },
            QubitPulse::SwapPower { alpha: T::lit(0.5) },
            QubitPulse::ZRotation {
                qubit: Qubit::Probe,
                angle: -quarter,
            },
            QubitPulse::ZRotation {
                qubit: Qubit::System,
                angle: quarter,
            },
            QubitPulse::Hadamard { qubit: last },
        ],
    })
}
