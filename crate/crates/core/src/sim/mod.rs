//! Pulse-sequence language, 2D MQ-JRES simulation and processing.

pub mod expr;
pub mod io;
pub mod model;
pub mod peaks;
pub mod process;
pub mod runner;
pub mod sequence;

pub use expr::Expr;
pub use model::{echo_signal_model, model_coefficients, model_frequency, remote_couplings};
pub use peaks::{peak_pick, Peak, PeakList, DEFAULT_THRESHOLD};
pub use process::{compare_spectra, process_2d, Comparison, Spectrum2D, ZERO_FILL};
pub use runner::{prepared_state, run_sequence, selected_orders, synthesize_fid, transitions, Backend, GradMode, Raw2D, RunOptions, RunOutput, Transition};
pub use sequence::{parse_sequence, Event, Prepared, PulseSequence, SeqLine};

/// The shipped alanine MQ-JRES sequence.
pub const ALANINE_SEQUENCE: &str = include_str!("../../data/alanine_mqjres.seq");
