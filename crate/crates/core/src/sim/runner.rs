use std::collections::BTreeMap;

use num_complex::Complex;
use rayon::prelude::*;

use super::sequence::{Event, Prepared, PulseSequence};
use crate::dfs::{embed_in_system, embed_string_in_system, highest_state, logical_basis, mq_coherences, pure_coherences, MQ_FAMILIES};
use crate::dynamics::{apply_relaxation, apply_rotation, evolve_analytic, DenseEvolver, StateOp};
use crate::error::{Error, Result};
use crate::pathway::{gradient_filter, reachable_orders, Branches, GradientEvent, PathwaySelection, ZGrid};
use crate::pauli::{conjugate_by_pauli, dense::matrix_element, from_matrix, to_matrix, Letter, Order, OperatorSum, PauliString};
use crate::spin::{build_hamiltonian, CoherenceLabel, Hamiltonian, SpinSystem};

type Op = OperatorSum<f64>;

/// How free evolution and pulses are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    /// Closed-form product-operator rules.
    Analytic,
    /// Dense `2ⁿ × 2ⁿ` propagators.
    Dense,
}

/// How gradients act.
#[derive(Clone, Debug, PartialEq)]
pub enum GradMode {
    /// Only fully refocused pathways survive.
    Exact,
    /// Average over `nz` sample slices, optionally with a seeded random offset.
    Ensemble { nz: usize, seed: Option<u64> },
    /// Gradients are ignored.
    Off,
    /// Gradients are ignored and the state is projected onto the listed
    /// γ-weighted orders at the encode gradient.
    Filter(Vec<Order>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub t1_points: usize,
    pub t1_sw: f64,
    /// Overrides the acquire line's point count.
    pub t2_points: Option<usize>,
    /// Overrides the acquire line's spectral width.
    pub t2_sw: Option<f64>,
    pub backend: Backend,
    pub grad_mode: GradMode,
    pub relaxation: bool,
    /// Extra error string applied right after the encode gradient.
    pub inject: Option<PauliString>,
    /// Keep checkpoint states for every t1 increment.
    pub capture_checkpoints: bool,
    /// Worker threads for the t1 loop; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            t1_points: 64,
            t1_sw: 30.0,
            t2_points: None,
            t2_sw: None,
            backend: Backend::Analytic,
            grad_mode: GradMode::Exact,
            relaxation: true,
            inject: None,
            capture_checkpoints: false,
            threads: None,
        }
    }
}

/// Time-domain data, `n_t1 × n_t2`, row-major by t1.
#[derive(Clone, Debug, PartialEq)]
pub struct Raw2D {
    pub n_t1: usize,
    pub n_t2: usize,
    pub dwell_t1: f64,
    pub dwell_t2: f64,
    pub data: Vec<Complex<f64>>,
}

impl Raw2D {
    pub fn zeros(n_t1: usize, n_t2: usize, dwell_t1: f64, dwell_t2: f64) -> Self {
        Raw2D { n_t1, n_t2, dwell_t1, dwell_t2, data: vec![Complex::new(0.0, 0.0); n_t1 * n_t2] }
    }

    pub fn at(&self, i: usize, j: usize) -> Complex<f64> {
        self.data[i * self.n_t2 + j]
    }

    pub fn row(&self, i: usize) -> &[Complex<f64>] {
        &self.data[i * self.n_t2..(i + 1) * self.n_t2]
    }

    pub fn t1(&self, i: usize) -> f64 {
        i as f64 * self.dwell_t1
    }

    /// First FID point of every increment, normalized to the first increment.
    pub fn interferogram(&self) -> Vec<Complex<f64>> {
        let s0 = self.at(0, 0);
        (0..self.n_t1).map(|i| if s0.norm() > 0.0 { self.at(i, 0) / s0 } else { self.at(i, 0) }).collect()
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub raw: Raw2D,
    /// Per t1 increment, the collapsed state at each checkpoint
    /// (only increment 0 unless checkpoints were captured for all).
    pub checkpoints: Vec<BTreeMap<String, Op>>,
}

impl RunOutput {
    pub fn checkpoint(&self, t1_index: usize, name: &str) -> Option<&Op> {
        self.checkpoints.get(t1_index)?.get(name)
    }
}

/// Builds a named initial or ideal state on `system`.
pub fn prepared_state(p: &Prepared, system: &SpinSystem<f64>, seq: &PulseSequence) -> Result<Op> {
    let n = system.len();
    let four = |op: &Op| embed_in_system(op, system);
    let family_index = |l: &CoherenceLabel| MQ_FAMILIES.iter().position(|f| f == l).expect("methyl family");
    match p {
        Prepared::Thermal => Ok((0..n).fold(Op::zero(n), |acc, k| {
            let g = crate::spin::system::ratio_to_f64(&system.spin(k).gamma);
            &acc + &Op::spin_op(n, k, Letter::Z).scale_real(g)
        })),
        Prepared::Z(targets) => {
            let ks = seq.resolve_targets(system, targets)?;
            Ok(ks.iter().fold(Op::zero(n), |acc, &k| &acc + &Op::spin_op(n, k, Letter::Z)))
        }
        Prepared::Highest => four(&highest_state()),
        Prepared::Coherence(l) => four(&pure_coherences()[family_index(l)]),
        Prepared::Logical(i) => four(&logical_basis().rho[*i]),
        Prepared::Textbook(l) => four(&mq_coherences()[family_index(l)]),
    }
}

/// Orders `±p` whose encode/decode rephasing lands on the detected single
/// quantum order, for use with [`GradMode::Filter`].
pub fn selected_orders(system: &SpinSystem<f64>, seq: &PulseSequence) -> Result<Vec<Order>> {
    let grads = seq.gradients();
    let (ge, gd) = match grads.as_slice() {
        [ge, gd] => (*ge, *gd),
        _ => return Err(Error::Validation(format!("order selection needs an encode and a decode gradient, found {}", grads.len()))),
    };
    let detect = seq.resolve_target(system, seq.acquisition().2)?;
    let w = system.weights();
    let det = *w.as_slice().get(*detect.first().ok_or_else(|| Error::Validation("acquire addresses no spin".into()))?).expect("resolved index");
    let candidates: Vec<Order> = reachable_orders(&w).into_iter().collect();
    let mut out: Vec<Order> = PathwaySelection::from_gradients(ge, gd, det, &candidates)
        .encode_orders
        .into_iter()
        .chain(PathwaySelection::from_gradients(ge, gd, -det, &candidates).encode_orders)
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn injected_string(p: &PauliString, system: &SpinSystem<f64>) -> Result<PauliString> {
    if p.len() == system.len() {
        Ok(*p)
    } else if p.len() == 4 {
        embed_string_in_system(p, system)
    } else {
        Err(Error::Validation(format!("error string {p} needs 4 letters or one per spin")))
    }
}

/// One transition of the detected signal: amplitude and angular frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition {
    pub amplitude: Complex<f64>,
    pub omega: f64,
}

/// Lines of `s(t) = (2/2ⁿ) Tr(F₊ ρ(t))` for `F₊ = Σ_k I₊,k` over `detect`,
/// under a diagonal Hamiltonian.
pub fn transitions(rho: &Op, h: &Hamiltonian<f64>, detect: &[usize]) -> Result<Vec<Transition>> {
    let n = rho.n_spins();
    let terms = h.secular_terms()?;
    let dim = 1usize << n;
    let mut out = Vec::new();
    for &k in detect {
        let bit = 1usize << (n - 1 - k);
        for a in 0..dim {
            if a & bit == 0 {
                continue;
            }
            // ⟨b|I₊|a⟩ = 1 with b = a with spin k raised; contributes ρ_ab e^{−i(E_a − E_b)t}
            let b = a & !bit;
            let amp = matrix_element(rho, a, b);
            if amp.norm() == 0.0 {
                continue;
            }
            let ea = Hamiltonian::diagonal_energy(&terms, n, a);
            let eb = Hamiltonian::diagonal_energy(&terms, n, b);
            out.push(Transition { amplitude: amp * (2.0 / dim as f64), omega: -(ea - eb) });
        }
    }
    Ok(out)
}

/// Samples `Σ A e^{iωt} e^{−t/T₂}` on `points` dwell steps.
pub fn synthesize_fid(lines: &[Transition], points: usize, dwell: f64, t2: Option<f64>) -> Vec<Complex<f64>> {
    (0..points)
        .map(|j| {
            let t = j as f64 * dwell;
            let decay = t2.map_or(1.0, |t2| (-t / t2).exp());
            lines.iter().fold(Complex::new(0.0, 0.0), |acc, l| acc + l.amplitude * Complex::from_polar(decay, l.omega * t))
        })
        .collect()
}

struct Engine<'a> {
    system: &'a SpinSystem<f64>,
    seq: &'a PulseSequence,
    opts: &'a RunOptions,
    h: Hamiltonian<f64>,
    dense: Option<DenseEvolver<f64>>,
    grid: Option<ZGrid>,
    delays: Vec<Option<f64>>,
    last_grad: Option<usize>,
    encode: Option<usize>,
    detect: Vec<usize>,
    t2_points: usize,
    t2_dwell: f64,
}

impl<'a> Engine<'a> {
    fn new(system: &'a SpinSystem<f64>, seq: &'a PulseSequence, opts: &'a RunOptions) -> Result<Self> {
        seq.check_against(system)?;
        if opts.t1_points == 0 || !(opts.t1_sw > 0.0) || !opts.t1_sw.is_finite() {
            return Err(Error::InvalidArgument("t1 needs at least one point and a positive spectral width".into()));
        }
        let h = build_hamiltonian(system);
        let dense = match opts.backend {
            Backend::Dense => Some(DenseEvolver::new(&h)?),
            Backend::Analytic => None,
        };
        let grid = match &opts.grad_mode {
            GradMode::Ensemble { nz, seed: None } => Some(ZGrid::uniform(*nz)?),
            GradMode::Ensemble { nz, seed: Some(s) } => Some(ZGrid::randomized(*nz, *s)?),
            _ => None,
        };
        let delays = seq
            .events
            .iter()
            .map(|e| match &e.event {
                Event::Delay(x) => x.eval(system).map(Some),
                _ => Ok(None),
            })
            .collect::<Result<Vec<_>>>()?;
        let last_grad = seq.events.iter().rposition(|e| matches!(e.event, Event::Gradient(_)));
        let encode = seq.encode_index();
        if opts.inject.is_some() && encode.is_none() {
            return Err(Error::Validation("error injection needs an encode gradient to mark its position".into()));
        }
        let (points, sw, species) = seq.acquisition();
        let detect = seq.resolve_target(system, species)?;
        let t2_points = opts.t2_points.unwrap_or(points);
        let t2_sw = opts.t2_sw.unwrap_or(sw);
        if t2_points == 0 || !(t2_sw > 0.0) || !t2_sw.is_finite() {
            return Err(Error::InvalidArgument("t2 needs at least one point and a positive spectral width".into()));
        }
        Ok(Engine { system, seq, opts, h, dense, grid, delays, last_grad, encode, detect, t2_points, t2_dwell: 1.0 / t2_sw })
    }

    fn free(&self, b: &Branches<f64>, t: f64) -> Result<Branches<f64>> {
        match &self.dense {
            None => b.try_map(|r| Ok(evolve_analytic(&StateOp::new(r.clone()), &self.h, t)?.operator)),
            Some(ev) => b.try_map(|r| from_matrix(&ev.evolve_matrix(&to_matrix(r)?, t))),
        }
    }

    fn pulse(&self, b: &Branches<f64>, targets: &[usize], angle_deg: f64, phase: f64) -> Result<Branches<f64>> {
        let theta = angle_deg.to_radians();
        match self.opts.backend {
            Backend::Analytic => b.try_map(|r| Ok(apply_rotation(r, targets, theta, phase))),
            Backend::Dense => {
                let m = crate::dynamics::pulse_matrix(self.system.len(), targets, theta, phase)?;
                b.try_map(|r| from_matrix(&crate::pauli::dense::conjugate(&m, &to_matrix(r)?)))
            }
        }
    }

    fn next_gradient(&self, idx: usize) -> Option<GradientEvent> {
        self.seq.events[idx + 1..].iter().find_map(|e| match e.event {
            Event::Gradient(g) => Some(g),
            _ => None,
        })
    }

    fn collapse(&self, b: &Branches<f64>) -> Op {
        match (&self.opts.grad_mode, &self.grid) {
            (GradMode::Ensemble { .. }, Some(g)) => b.collapse_ensemble(g),
            (GradMode::Exact, _) => b.collapse_exact(),
            _ => b.collapse_all(),
        }
    }

    fn run_increment(&self, t1: f64, keep_checkpoints: bool) -> Result<(Vec<Complex<f64>>, BTreeMap<String, Op>)> {
        let weights = self.system.weights();
        let mut b = Branches::new(prepared_state(&Prepared::Thermal, self.system, self.seq)?);
        let mut checkpoints = BTreeMap::new();
        let mut grads_seen = 0usize;
        for (idx, line) in self.seq.events.iter().enumerate() {
            match &line.event {
                Event::Pulse { targets, angle_deg, phase } => {
                    let ks = self.seq.resolve_targets(self.system, targets)?;
                    b = self.pulse(&b, &ks, *angle_deg, phase.radians())?;
                }
                Event::Delay(_) => {
                    let t = self.delays[idx].expect("evaluated");
                    b = self.free(&b, t)?;
                }
                Event::Gradient(g) => {
                    grads_seen += 1;
                    match &self.opts.grad_mode {
                        GradMode::Off => {}
                        GradMode::Filter(keep) => {
                            if grads_seen == 1 {
                                b = b.try_map(|r| Ok(gradient_filter(&StateOp::new(r.clone()), keep, &weights)?.operator))?;
                            }
                        }
                        GradMode::Exact | GradMode::Ensemble { .. } => {
                            b = b.gradient(*g, &weights)?;
                            if Some(idx) == self.last_grad {
                                b = Branches::new(self.collapse(&b));
                            } else if let (GradMode::Exact, Some(next)) = (&self.opts.grad_mode, self.next_gradient(idx)) {
                                b.retain_refocusable(next, &weights)?;
                            }
                        }
                    }
                    if Some(idx) == self.encode {
                        if let Some(p) = &self.opts.inject {
                            let p = injected_string(p, self.system)?;
                            b = b.try_map(|r| conjugate_by_pauli(r, &p))?;
                        }
                    }
                }
                Event::EvolveHalfT1 => {
                    b = self.free(&b, t1 / 2.0)?;
                    if self.opts.relaxation {
                        b = b.try_map(|r| Ok(apply_relaxation(&StateOp::new(r.clone()), self.system, t1 / 2.0)?.operator))?;
                    }
                }
                Event::Inject(p) => {
                    let p = injected_string(p, self.system)?;
                    b = b.try_map(|r| conjugate_by_pauli(r, &p))?;
                }
                Event::Prepare(p) => {
                    b = Branches::new(prepared_state(p, self.system, self.seq)?);
                }
                Event::Checkpoint(name) => {
                    if keep_checkpoints {
                        checkpoints.insert(name.clone(), self.collapse(&b));
                    }
                }
                Event::Acquire { .. } => {}
            }
        }
        let rho = self.collapse(&b);
        let lines = transitions(&rho, &self.h, &self.detect)?;
        let t2 = self.opts.relaxation.then(|| self.system.t2().get(CoherenceLabel::SQ));
        Ok((synthesize_fid(&lines, self.t2_points, self.t2_dwell, t2), checkpoints))
    }
}

/// Runs `seq` on `system` for every t1 increment and samples the FIDs.
pub fn run_sequence(system: &SpinSystem<f64>, seq: &PulseSequence, opts: &RunOptions) -> Result<RunOutput> {
    let engine = Engine::new(system, seq, opts)?;
    let dwell_t1 = 1.0 / opts.t1_sw;
    let job = || -> Result<Vec<(Vec<Complex<f64>>, BTreeMap<String, Op>)>> {
        (0..opts.t1_points)
            .into_par_iter()
            .map(|i| engine.run_increment(i as f64 * dwell_t1, opts.capture_checkpoints || i == 0))
            .collect()
    };
    let rows = match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(job)?,
        None => job()?,
    };
    let mut raw = Raw2D::zeros(opts.t1_points, engine.t2_points, dwell_t1, engine.t2_dwell);
    let mut checkpoints = Vec::with_capacity(rows.len());
    for (i, (fid, cps)) in rows.into_iter().enumerate() {
        raw.data[i * engine.t2_points..(i + 1) * engine.t2_points].copy_from_slice(&fid);
        if opts.capture_checkpoints || i == 0 {
            checkpoints.push(cps);
        }
    }
    Ok(RunOutput { raw, checkpoints })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{parse_sequence, ALANINE_SEQUENCE};
    use crate::spin::preset_alanine;

    #[test]
    fn shipped_ratio_selects_plus_and_minus_five() {
        let seq = parse_sequence(ALANINE_SEQUENCE).unwrap();
        let got = selected_orders(&preset_alanine(), &seq).unwrap();
        assert_eq!(got, vec![Order::from_integer(-5), Order::from_integer(5)]);
    }

    #[test]
    fn selection_needs_two_gradients() {
        let seq = parse_sequence("grad 3\nacquire 8 100 H").unwrap();
        assert!(selected_orders(&preset_alanine(), &seq).is_err());
    }
}
