//! Pulse-sequence DSL.
//!
//! ```text
//! # comment
//! group <name> <label> <label> ...        named target set
//! prepare <state> [target]                 thermal | z <target> | highest | qq | dq1 | dq2 | zq
//!                                          | rho1..rho4 | mq-qq | mq-dq1 | mq-dq2 | mq-zq
//! pulse <t1,t2,...> <angle_deg> <x|y|-x|-y|phase_deg>
//! pulse180 <target> <target> ...           180° about x
//! delay <expr>                             e.g. 1/(2*J(S,I1)), 3.88ms
//! grad <strength>                          first = encode, second = decode
//! evolve t1/2
//! inject <letters>                         4 letters on (I1,I2,I3,S) or one per spin
//! checkpoint <name>
//! acquire <points> <sw_hz> <species>       exactly once, last
//! ```
//!
//! Targets are spin labels, species names, or group names.

use std::collections::BTreeMap;

use super::expr::{check_nonnegative, Expr};
use crate::dynamics::PhaseAxis;
use crate::error::{Error, Result};
use crate::pathway::GradientEvent;
use crate::pauli::PauliString;
use crate::spin::{CoherenceLabel, SpinSystem};

#[derive(Clone, Debug, PartialEq)]
pub enum Prepared {
    /// `Σ γ_k I_z,k`.
    Thermal,
    /// `Σ I_z` over the targets.
    Z(Vec<String>),
    /// `8 Ix Iy Iy Sy`.
    Highest,
    /// The γ-weighted family component of the highest state.
    Coherence(CoherenceLabel),
    /// Unit-norm logical operator `rho1..rho4`.
    Logical(usize),
    /// Multiple-quantum operator with the textbook coefficients.
    Textbook(CoherenceLabel),
}

impl Prepared {
    fn parse(words: &[&str]) -> std::result::Result<Prepared, String> {
        let name = words.first().ok_or("prepare needs a state name")?.to_ascii_lowercase();
        let rest = &words[1..];
        let no_args = |p: Prepared| if rest.is_empty() { Ok(p) } else { Err(format!("`prepare {name}` takes no target")) };
        let family = |s: &str| match s {
            "qq" => Some(CoherenceLabel::QQ),
            "dq1" => Some(CoherenceLabel::DQ1),
            "dq2" => Some(CoherenceLabel::DQ2),
            "zq" => Some(CoherenceLabel::ZQ),
            _ => None,
        };
        match name.as_str() {
            "thermal" => no_args(Prepared::Thermal),
            "highest" => no_args(Prepared::Highest),
            "z" => {
                if rest.is_empty() {
                    Err("`prepare z` needs at least one target".into())
                } else {
                    Ok(Prepared::Z(rest.iter().map(|s| s.to_string()).collect()))
                }
            }
            "rho1" | "rho2" | "rho3" | "rho4" => no_args(Prepared::Logical(name[3..].parse::<usize>().unwrap() - 1)),
            n if family(n).is_some() => no_args(Prepared::Coherence(family(n).unwrap())),
            n if n.starts_with("mq-") && family(&n[3..]).is_some() => no_args(Prepared::Textbook(family(&n[3..]).unwrap())),
            _ => Err(format!("unknown state `{}`", words[0])),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Event {
    Pulse { targets: Vec<String>, angle_deg: f64, phase: PhaseAxis<f64> },
    Delay(Expr),
    Gradient(GradientEvent),
    EvolveHalfT1,
    Inject(PauliString),
    Prepare(Prepared),
    Checkpoint(String),
    Acquire { points: usize, sw_hz: f64, species: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeqLine {
    pub line: usize,
    pub event: Event,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PulseSequence {
    pub events: Vec<SeqLine>,
    pub groups: BTreeMap<String, Vec<String>>,
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, message: message.into() }
}

pub fn parse_sequence(text: &str) -> Result<PulseSequence> {
    let mut events = Vec::new();
    let mut groups: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let words: Vec<&str> = body.split_whitespace().collect();
        let args = &words[1..];
        let event = match words[0] {
            "group" => {
                if args.len() < 2 {
                    return Err(syntax(line, "expected `group <name> <label>...`"));
                }
                if groups.insert(args[0].to_string(), args[1..].iter().map(|s| s.to_string()).collect()).is_some() {
                    return Err(syntax(line, format!("group `{}` defined twice", args[0])));
                }
                continue;
            }
            "pulse" => {
                if args.len() != 3 {
                    return Err(syntax(line, "expected `pulse <targets> <angle_deg> <phase>`"));
                }
                let targets: Vec<String> = args[0].split(',').filter(|s| !s.is_empty()).map(str::to_string).collect();
                if targets.is_empty() {
                    return Err(syntax(line, "pulse needs a target"));
                }
                let angle_deg: f64 = args[1].parse().map_err(|_| syntax(line, format!("bad angle `{}`", args[1])))?;
                if !angle_deg.is_finite() {
                    return Err(syntax(line, "pulse angle must be finite"));
                }
                let phase = PhaseAxis::parse(args[2]).ok_or_else(|| syntax(line, format!("bad phase `{}`", args[2])))?;
                Event::Pulse { targets, angle_deg, phase }
            }
            "pulse180" => {
                if args.is_empty() {
                    return Err(syntax(line, "pulse180 needs targets"));
                }
                Event::Pulse { targets: args.iter().map(|s| s.to_string()).collect(), angle_deg: 180.0, phase: PhaseAxis::X }
            }
            "delay" => {
                if args.is_empty() {
                    return Err(syntax(line, "delay needs a duration"));
                }
                let e = Expr::parse(&args.join(" ")).map_err(|m| syntax(line, m))?;
                if let Some(v) = e.constant() {
                    check_nonnegative(v, &format!("line {line}: delay"))?;
                }
                Event::Delay(e)
            }
            "grad" => {
                if args.len() != 1 {
                    return Err(syntax(line, "expected `grad <strength>`"));
                }
                Event::Gradient(GradientEvent::parse(args[0]).map_err(|e| syntax(line, e.to_string()))?)
            }
            "evolve" => {
                if args != ["t1/2"] {
                    return Err(syntax(line, "only `evolve t1/2` is supported"));
                }
                Event::EvolveHalfT1
            }
            "inject" => {
                if args.len() != 1 {
                    return Err(syntax(line, "expected `inject <letters>`"));
                }
                Event::Inject(args[0].parse().map_err(|e: Error| syntax(line, e.to_string()))?)
            }
            "prepare" => Event::Prepare(Prepared::parse(args).map_err(|m| syntax(line, m))?),
            "checkpoint" => {
                if args.len() != 1 {
                    return Err(syntax(line, "expected `checkpoint <name>`"));
                }
                Event::Checkpoint(args[0].to_string())
            }
            "acquire" => {
                if args.len() != 3 {
                    return Err(syntax(line, "expected `acquire <points> <sw_hz> <species>`"));
                }
                let points: usize = args[0].parse().map_err(|_| syntax(line, format!("bad point count `{}`", args[0])))?;
                let sw_hz: f64 = args[1].parse().map_err(|_| syntax(line, format!("bad spectral width `{}`", args[1])))?;
                if points == 0 || !(sw_hz > 0.0) || !sw_hz.is_finite() {
                    return Err(Error::Validation(format!("line {line}: acquire needs points > 0 and a positive spectral width")));
                }
                Event::Acquire { points, sw_hz, species: args[2].to_string() }
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        };
        events.push(SeqLine { line, event });
    }
    let seq = PulseSequence { events, groups };
    seq.validate()?;
    Ok(seq)
}

impl PulseSequence {
    pub fn validate(&self) -> Result<()> {
        let acquires: Vec<usize> = self.events.iter().filter(|e| matches!(e.event, Event::Acquire { .. })).map(|e| e.line).collect();
        match acquires.len() {
            0 => return Err(Error::Validation("sequence has no acquire line".into())),
            1 => {}
            _ => return Err(Error::Validation(format!("sequence has {} acquire lines (lines {:?}); exactly one is allowed", acquires.len(), acquires))),
        }
        if !matches!(self.events.last().map(|e| &e.event), Some(Event::Acquire { .. })) {
            return Err(Error::Validation(format!("acquire (line {}) must be the last event", acquires[0])));
        }
        let grads = self.events.iter().filter(|e| matches!(e.event, Event::Gradient(_))).count();
        if grads > 2 {
            return Err(Error::Validation(format!("{grads} gradients; at most an encode and a decode gradient are allowed")));
        }
        let mut names: Vec<&str> = Vec::new();
        for e in &self.events {
            if let Event::Checkpoint(n) = &e.event {
                if names.contains(&n.as_str()) {
                    return Err(Error::Validation(format!("line {}: checkpoint `{n}` defined twice", e.line)));
                }
                names.push(n);
            }
        }
        Ok(())
    }

    pub fn acquisition(&self) -> (usize, f64, &str) {
        match &self.events.last().expect("validated").event {
            Event::Acquire { points, sw_hz, species } => (*points, *sw_hz, species.as_str()),
            _ => unreachable!("validated"),
        }
    }

    /// Index of the encode gradient in `events`, if any.
    pub fn encode_index(&self) -> Option<usize> {
        self.events.iter().position(|e| matches!(e.event, Event::Gradient(_)))
    }

    pub fn gradients(&self) -> Vec<GradientEvent> {
        self.events
            .iter()
            .filter_map(|e| match e.event {
                Event::Gradient(g) => Some(g),
                _ => None,
            })
            .collect()
    }

    /// Spin indices named by a target (group, label or species).
    pub fn resolve_target(&self, system: &SpinSystem<f64>, target: &str) -> Result<Vec<usize>> {
        if let Some(members) = self.groups.get(target) {
            let mut v = Vec::new();
            for m in members {
                v.extend(system.resolve(m)?);
            }
            return Ok(v);
        }
        system.resolve(target)
    }

    pub fn resolve_targets(&self, system: &SpinSystem<f64>, targets: &[String]) -> Result<Vec<usize>> {
        let mut v = Vec::new();
        for t in targets {
            v.extend(self.resolve_target(system, t)?);
        }
        v.sort_unstable();
        v.dedup();
        Ok(v)
    }

    /// Checks every target, coupling label and injected string against `system`.
    pub fn check_against(&self, system: &SpinSystem<f64>) -> Result<()> {
        for e in &self.events {
            let wrap = |err: Error| match err {
                Error::UnknownTarget(t) => Error::Validation(format!("line {}: unknown target `{t}`", e.line)),
                other => other,
            };
            match &e.event {
                Event::Pulse { targets, .. } => {
                    self.resolve_targets(system, targets).map_err(wrap)?;
                }
                Event::Delay(x) => {
                    let v = x.eval(system).map_err(wrap)?;
                    check_nonnegative(v, &format!("line {}: delay", e.line))?;
                }
                Event::Inject(p) => {
                    if p.len() != 4 && p.len() != system.len() {
                        return Err(Error::Validation(format!(
                            "line {}: inject needs 4 letters (I1,I2,I3,S) or {} letters",
                            e.line,
                            system.len()
                        )));
                    }
                }
                Event::Prepare(Prepared::Z(t)) => {
                    self.resolve_targets(system, t).map_err(wrap)?;
                }
                Event::Acquire { species, .. } => {
                    self.resolve_target(system, species).map_err(wrap)?;
                }
                _ => {}
            }
        }
        Ok(())
    }
}
