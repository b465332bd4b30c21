//! Spin systems, their weak-coupling Hamiltonian and the config format.

pub mod config;
pub mod hamiltonian;
pub mod preset;
pub mod system;

pub use config::{parse_spin_config, serialize_spin_config};
pub use hamiltonian::{build_hamiltonian, Hamiltonian};
pub use preset::{preset_alanine, ALANINE_CONFIG, J_IM_HZ, J_SI_HZ, J_SM_HZ};
pub use system::{parse_ratio, CoherenceLabel, Spin, SpinSystem, T2Map, DEFAULT_T2_SECONDS};
