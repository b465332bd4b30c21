use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Decoherence-free subspace checks and MQ-JRES simulation for a ¹³CH₃ group.
#[derive(Parser, Debug)]
#[command(name = "mqdfs", version)]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "MQDFS_OUT_DIR", default_value = "mqdfs-out")]
    out_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the logical basis against the collective error families.
    DfsVerify(VerifyArgs),
    /// Run the 2D experiment and write raw data, spectrum and peaks.
    Simulate(SimulateArgs),
    /// Split an operator file into coherence orders.
    Decompose(DecomposeArgs),
    /// Compare two spectra written by `simulate`.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    En,
    Em,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    family: Family,
    /// Replace a logical operator with one read from a file, e.g. `rho3=bad.op`.
    #[arg(long = "fixture", value_name = "rhoN=PATH")]
    fixtures: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GradModeArg {
    /// Track dephasing per pathway; only fully refocused pathways survive.
    Exact,
    /// Average over sample slices.
    Ensemble,
    /// Ignore gradients.
    Off,
    /// Project onto the ±p orders selected by the gradient ratio at the encode gradient.
    Filter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Analytic,
    Dense,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Spin-system config; the shipped alanine preset when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Pulse sequence; the shipped MQ-JRES sequence when omitted.
    #[arg(long)]
    sequence: Option<PathBuf>,
    #[arg(long, default_value_t = 64)]
    t1_points: usize,
    #[arg(long, default_value_t = 30.0)]
    t1_sw: f64,
    /// Overrides the acquire line.
    #[arg(long)]
    t2_points: Option<usize>,
    /// Overrides the acquire line.
    #[arg(long)]
    t2_sw: Option<f64>,
    #[arg(long, value_enum, default_value = "exact")]
    grad_mode: GradModeArg,
    /// Sample slices in ensemble mode.
    #[arg(long, default_value_t = mqdfs::pathway::DEFAULT_NZ)]
    nz: usize,
    /// Random slice offset for ensemble mode.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "analytic")]
    backend: BackendArg,
    /// Switch off T2 decay.
    #[arg(long)]
    no_relaxation: bool,
    /// T2 override, e.g. `DQ2=0.3`.
    #[arg(long = "t2", value_name = "LABEL=SECONDS")]
    t2: Vec<String>,
    /// Pauli string applied right after the encode gradient; also runs the baseline and compares.
    #[arg(long)]
    inject: Option<String>,
    /// Peak threshold as a fraction of the maximum.
    #[arg(long, default_value_t = mqdfs::sim::DEFAULT_THRESHOLD)]
    threshold: f64,
    /// Tolerance for the baseline comparison.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Worker threads for the t1 loop (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Also write TSV exports of the raw data and the spectrum.
    #[arg(long)]
    tsv: bool,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    /// Operator file: `<re> <im> <letters>` per line.
    file: PathBuf,
    /// Comma-separated per-spin weights (integers, p/q or decimals); all 1 when omitted.
    #[arg(long)]
    weights: Option<String>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Spectrum stem (without `.bin`/`.hdr`).
    a: PathBuf,
    b: PathBuf,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = match e.kind() {
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand | ErrorKind::MissingSubcommand => "a subcommand is required (see --help)",
                _ => msg.lines().next().unwrap_or("").trim_start_matches("error: "),
            };
            eprintln!("ERROR usage {first}");
            return ExitCode::from(2);
        }
    };
    match commands::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ERROR {} {}", e.code(), e.message().replace('\n', " "));
            ExitCode::from(e.exit_status())
        }
    }
}
