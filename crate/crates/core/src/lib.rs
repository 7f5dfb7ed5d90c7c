//! Trace-distance dynamics of finite-dimensional open quantum systems whose
//! initial system-environment state may be correlated.
//!
//! The crate evolves pairs of total states unitarily, follows the trace
//! distance of the reduced system states, and evaluates the upper bounds on
//! any growth of that distance: the inaccessible information, the
//! correlation measure of a state against the product of its marginals, and
//! the triangle-inequality bound. An observed growth above the initial value
//! witnesses initial correlations (or differing environment states).
//!
//! Everything here is pure computation on dense complex matrices and builds
//! under `no_std` with `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dynamics;
pub mod eigen;
mod error;
pub mod matrix;
pub mod models;
pub mod random;
pub mod states;
pub mod witness;

pub use dynamics::{Evolution, Propagator, TimeGrid, Trajectory};
pub use eigen::{hermitian_eig, Spectrum};
pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
pub use states::{trace_distance, BipartiteState, DensityMatrix};
pub use witness::{BoundSet, WitnessReport};

/// Largest matrix dimension the dense routines accept.
pub const MAX_DIMENSION: usize = 4096;

/// Absolute tolerance on `max |m - m†|` for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Absolute tolerance on `max |U U† - I|` for a matrix to count as unitary.
pub const UNITARY_TOL: f64 = 1e-9;
