//! Continuous-variable circuits as linear coordinate substitutions.

pub mod decompose;
pub mod hamiltonian;
pub mod transform;

pub use decompose::{
    decompose_single_mode, decompose_two_mode, decompose_von_neumann, ssm_alternative_sequence, OpticalParams,
    SingleModeOpticalParams, VonNeumannParams,
};
pub use hamiltonian::{
    commutator_coefficient, hamiltonian_params, ssm_normal_modes, ssm_p1_quadratic_form, HamiltonianParams,
    QuadraticForm,
};
pub use transform::{compose, csm, gate_matrix, ssm, vnm, CoordTransform, CvGate, GateSequence, PresetCircuit, PresetKind};
