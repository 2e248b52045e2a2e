//! Noiseless quantum measurement circuits for qubits and continuous
//! variables: gate algebra, decompositions, and grid simulation.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar for the common cases.

pub mod cv;
pub mod error;
pub mod linalg;
pub mod qubit;
pub mod scalar;
pub mod sim;

pub use error::{Error, ErrorClass, Result};
pub use scalar::Real;

pub type ComplexMatrix64 = linalg::ComplexMatrix<f64>;
pub type ComplexMatrix32 = linalg::ComplexMatrix<f32>;
pub type ComplexVector64 = linalg::ComplexVector<f64>;
pub type QubitState64 = qubit::QubitState<f64>;
pub type QubitState32 = qubit::QubitState<f32>;
pub type CoordTransform64 = cv::CoordTransform<f64>;
pub type CoordTransform32 = cv::CoordTransform<f32>;
pub type GateSequence64 = cv::GateSequence<f64>;
pub type Grid64 = sim::Grid1D<f64>;
pub type WaveFunction64 = sim::WaveFunction<f64>;
pub type WaveFunction32 = sim::WaveFunction<f32>;
pub type GaussianSpec64 = sim::GaussianSpec<f64>;
