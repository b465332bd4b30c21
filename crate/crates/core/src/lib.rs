//! Workbench for a two-logical-qubit decoherence-free subspace built from the
//! multiple-quantum coherences of a ¹³CH₃ spin group.
//!
//! The numeric core is generic over [`Real`] (f32 or f64); the aliases below
//! fix the common f64 instantiations.

pub mod dfs;
pub mod dynamics;
pub mod error;
pub mod pathway;
pub mod pauli;
pub mod scalar;
pub mod sim;
pub mod spin;

pub use error::{Error, Result};
pub use scalar::Real;

/// f64 operator sum.
pub type Operator = pauli::OperatorSum<f64>;
/// f32 operator sum.
pub type Operator32 = pauli::OperatorSum<f32>;
