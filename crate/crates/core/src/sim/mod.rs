//! Grid-sampled wavefunctions and the numerical checks built on them.

pub mod closed_form;
pub mod fock;
pub mod grid;
pub mod joint;
pub mod scenario;
pub mod snr;
pub mod wavefunction;

pub use fock::{evolve_quadratic_fock, hermite_functions, parity_via_fock, project, quadratic_operator, FockExpansion};
pub use grid::Grid1D;
pub use joint::{
    apply_transform, apply_transform_on, outcome_distribution, postmeasurement_state, JointWaveFunction,
    OutcomeDistribution,
};
pub use wavefunction::{gaussian_superposition, sample_gaussian, GaussianSpec, WaveFunction};
