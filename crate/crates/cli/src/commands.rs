use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use mqdfs::dfs::{dfs_report, flip_flop_notes, logical_basis, FamilyTag};
use mqdfs::pauli::{coherence_decompose, PauliString, Weights};
use mqdfs::sim::io::{read_spectrum, write_raw, write_spectrum, raw_tsv, spectrum_tsv, Provenance};
use mqdfs::sim::{compare_spectra, parse_sequence, peak_pick, process_2d, run_sequence, selected_orders, Backend, GradMode, RunOptions, ALANINE_SEQUENCE};
use mqdfs::spin::{parse_ratio, parse_spin_config, CoherenceLabel, SpinSystem, ALANINE_CONFIG};
use mqdfs::{Error, Operator};

use crate::{BackendArg, Cli, Command, CompareArgs, DecomposeArgs, Family, GradModeArg, SimulateArgs, VerifyArgs};

/// A failure with its `ERROR` code word and exit status.
pub struct Failure {
    code: &'static str,
    status: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: "usage", status: 2, message: message.into() }
    }

    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure { code: "io", status: 3, message: format!("{}: {e}", path.display()) }
    }

    pub fn code(&self) -> &str {
        self.code
    }

    pub fn message(&self) -> &str {
        &self.message
    }

    pub fn exit_status(&self) -> u8 {
        self.status
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, status) = match &e {
            Error::Io(_) => ("io", 3),
            Error::Syntax { .. } => ("syntax", 2),
            Error::Validation(_) => ("validation", 2),
            Error::UnknownTarget(_) => ("target", 2),
            Error::GridMismatch(_) => ("grid", 2),
            Error::LengthMismatch { .. } | Error::DimensionCap { .. } | Error::UnsupportedGenerator(_) | Error::InvalidArgument(_) => ("argument", 2),
        };
        Failure { code, status, message: e.to_string() }
    }
}

type Outcome = Result<ExitCode, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::io(path, e))
}

/// Reports core errors about a file with the file name attached.
fn in_file(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    }
}

fn out_dir(dir: &Path) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
    Ok(dir.to_path_buf())
}

fn status(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::DfsVerify(a) => dfs_verify(&cli.out_dir, a),
        Command::Simulate(a) => simulate(&cli.out_dir, a),
        Command::Decompose(a) => decompose(a),
        Command::Compare(a) => compare(&cli.out_dir, a),
    }
}

fn dfs_verify(out: &Path, args: VerifyArgs) -> Outcome {
    let mut basis = logical_basis::<f64>();
    for entry in &args.fixtures {
        let (name, path) = entry.split_once('=').ok_or_else(|| Failure::usage(format!("fixture `{entry}` is not rhoN=PATH")))?;
        let index = match name {
            "rho1" => 0,
            "rho2" => 1,
            "rho3" => 2,
            "rho4" => 3,
            _ => return Err(Failure::usage(format!("fixture name `{name}` is not rho1..rho4"))),
        };
        let path = Path::new(path);
        let op = Operator::parse_text(&read(path)?).map_err(in_file(path))?;
        if op.n_spins() != 4 {
            return Err(Failure::usage(format!("{}: fixture has {} spins, expected 4", path.display(), op.n_spins())));
        }
        basis = basis.with_state(index, op);
    }
    let families: &[FamilyTag] = match args.family {
        Family::En => &[FamilyTag::En],
        Family::Em => &[FamilyTag::Em],
        Family::All => &[FamilyTag::En, FamilyTag::Em],
    };
    let report = dfs_report(&basis, families)?;
    let text = report.to_text();
    let dir = out_dir(out)?;
    write(&dir.join("dfs_report.txt"), &text)?;
    print!("{text}");
    Ok(status(report.all_pass()))
}

fn load_system(args: &SimulateArgs) -> Result<(SpinSystem<f64>, String), Failure> {
    let text = match &args.config {
        Some(p) => read(p)?,
        None => ALANINE_CONFIG.to_string(),
    };
    let at = args.config.clone().unwrap_or_else(|| PathBuf::from("<alanine>"));
    let mut system: SpinSystem<f64> = parse_spin_config(&text).map_err(in_file(&at))?;
    for entry in &args.t2 {
        let (label, secs) = entry.split_once('=').ok_or_else(|| Failure::usage(format!("--t2 `{entry}` is not LABEL=SECONDS")))?;
        let label: CoherenceLabel = label.parse()?;
        let secs: f64 = secs.parse().map_err(|_| Failure::usage(format!("--t2 `{entry}`: bad seconds")))?;
        system = system.with_t2(label, secs)?;
    }
    Ok((system, text))
}

fn simulate(out: &Path, args: SimulateArgs) -> Outcome {
    let (system, config_text) = load_system(&args)?;
    let seq_text = match &args.sequence {
        Some(p) => read(p)?,
        None => ALANINE_SEQUENCE.to_string(),
    };
    let seq_at = args.sequence.clone().unwrap_or_else(|| PathBuf::from("<alanine_mqjres.seq>"));
    let seq = parse_sequence(&seq_text).map_err(in_file(&seq_at))?;
    if args.nz < 2 {
        return Err(Failure::usage("--nz must be at least 2"));
    }
    if args.threads == Some(0) {
        return Err(Failure::usage("--threads must be positive"));
    }
    let inject = match &args.inject {
        Some(s) => Some(s.parse::<PauliString>()?),
        None => None,
    };
    let base = RunOptions {
        t1_points: args.t1_points,
        t1_sw: args.t1_sw,
        t2_points: args.t2_points,
        t2_sw: args.t2_sw,
        backend: match args.backend {
            BackendArg::Analytic => Backend::Analytic,
            BackendArg::Dense => Backend::Dense,
        },
        grad_mode: match args.grad_mode {
            GradModeArg::Exact => GradMode::Exact,
            GradModeArg::Ensemble => GradMode::Ensemble { nz: args.nz, seed: args.seed },
            GradModeArg::Off => GradMode::Off,
            GradModeArg::Filter => GradMode::Filter(selected_orders(&system, &seq)?),
        },
        relaxation: !args.no_relaxation,
        inject: None,
        capture_checkpoints: false,
        threads: args.threads,
    };
    let prov = Provenance::from_texts(&config_text, &seq_text);
    let dir = out_dir(out)?;
    let io = |e: Error| match e {
        Error::Io(err) => Failure::io(&dir, err),
        other => Failure::from(other),
    };

    let opts = RunOptions { inject, ..base.clone() };
    let run = run_sequence(&system, &seq, &opts)?;
    let s2d = process_2d(&run.raw);
    let peaks = peak_pick(&s2d, args.threshold)?;
    write_raw(&dir.join("raw"), &run.raw, &prov).map_err(io)?;
    write_spectrum(&dir.join("spectrum"), &s2d, &prov).map_err(io)?;
    write(&dir.join("peaks.tsv"), peaks.to_tsv())?;
    let mut ig = String::from("t1_s\tre\tim\n");
    for (i, z) in run.raw.interferogram().iter().enumerate() {
        let _ = writeln!(ig, "{}\t{:e}\t{:e}", run.raw.t1(i), z.re, z.im);
    }
    write(&dir.join("interferogram.tsv"), ig)?;
    if args.tsv {
        write(&dir.join("raw.tsv"), raw_tsv(&run.raw))?;
        write(&dir.join("spectrum.tsv"), spectrum_tsv(&s2d))?;
    }
    let mut summary = format!("peaks {}\n", peaks.len());

    if opts.inject.is_some() {
        let baseline = process_2d(&run_sequence(&system, &seq, &base)?.raw);
        write_spectrum(&dir.join("baseline"), &baseline, &prov).map_err(io)?;
        let cmp = compare_spectra(&baseline, &s2d, args.tol)?;
        write(&dir.join("compare.txt"), cmp.to_text())?;
        summary.push_str(&cmp.to_text());
    }
    if let GradMode::Ensemble { .. } = opts.grad_mode {
        let exact = process_2d(&run_sequence(&system, &seq, &RunOptions { grad_mode: GradMode::Exact, ..opts.clone() })?.raw);
        let leak = compare_spectra(&exact, &s2d, 1e-3)?;
        let text = format!("nz {}\nseed {}\nleakage {:e}\n", args.nz, args.seed.map_or("none".to_string(), |s| s.to_string()), leak.max_rel_diff);
        write(&dir.join("leakage.txt"), &text)?;
        summary.push_str(&text);
    }
    print!("{summary}");
    Ok(ExitCode::SUCCESS)
}

fn parse_weights(s: &str, n: usize) -> Result<Weights, Failure> {
    let w = s
        .split(',')
        .map(|x| parse_ratio(x.trim()).ok_or_else(|| Failure::usage(format!("bad weight `{x}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    if w.len() != n {
        return Err(Failure::usage(format!("{} weights given for {n} spins", w.len())));
    }
    Ok(Weights::new(w)?)
}

fn decompose(args: DecomposeArgs) -> Outcome {
    let op = Operator::parse_text(&read(&args.file)?).map_err(in_file(&args.file))?;
    let n = op.n_spins();
    let weights = match &args.weights {
        Some(s) => parse_weights(s, n)?,
        None => Weights::plain(n),
    };
    let dec = coherence_decompose(&op, &weights)?;
    let mut out = String::new();
    for (order, comp) in dec.components.iter().rev() {
        let _ = writeln!(out, "ORDER {order}");
        out.push_str(&comp.to_text());
    }
    if weights == Weights::plain(n) {
        for note in flip_flop_notes(&op) {
            let _ = writeln!(out, "NOTE {note}");
        }
    }
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn compare(out: &Path, args: CompareArgs) -> Outcome {
    let load = |p: &Path| {
        read_spectrum(p).map_err(|e| match e {
            Error::Io(err) => Failure::io(p, err),
            other => in_file(p)(other),
        })
    };
    let (a, b) = (load(&args.a)?, load(&args.b)?);
    let cmp = compare_spectra(&a, &b, args.tol)?;
    let dir = out_dir(out)?;
    write(&dir.join("compare.txt"), cmp.to_text())?;
    print!("{}", cmp.to_text());
    Ok(status(cmp.pass))
}
