//! Time evolution (closed-form and dense), hard pulses and per-coherence T₂ decay.

pub mod evolve;
pub mod pulse;
pub mod relaxation;
pub mod state;

pub use evolve::{evolve_analytic, evolve_dense, DenseEvolver};
pub use pulse::{apply_error, apply_pulse, apply_pulse_dense, apply_rotation, pulse_matrix};
pub use relaxation::apply_relaxation;
pub use state::{PhaseAxis, PulseEvent, StateOp};
