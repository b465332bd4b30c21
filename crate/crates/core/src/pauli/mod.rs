//! Symbolic algebra over n-spin Pauli strings.

pub mod dense;
pub mod order;
pub mod string;
pub mod sum;

pub use dense::{from_matrix, to_matrix, CMatrix, DENSE_SPIN_CAP};
pub use order::{coherence_decompose, ladder_partition, CoherenceDecomposition, Ladder, Order, Weights};
pub use string::{pauli_product, Letter, PauliString, Phase};
pub use sum::{conjugate_by_pauli, hs_inner, OperatorSum};
