#![allow(dead_code)]

use mqdfs::pauli::OperatorSum;
use mqdfs::sim::{parse_sequence, run_sequence, PulseSequence, RunOptions, RunOutput, ALANINE_SEQUENCE};
use mqdfs::spin::{preset_alanine, CoherenceLabel, SpinSystem};

pub type Op = OperatorSum<f64>;

pub fn alanine() -> SpinSystem<f64> {
    preset_alanine()
}

pub fn shipped() -> PulseSequence {
    parse_sequence(ALANINE_SEQUENCE).expect("shipped sequence parses")
}

/// The shipped sequence with part 1 replaced by `prepare <state>`.
pub fn ideal_sequence(state: &str) -> PulseSequence {
    let mut out = Vec::new();
    let mut skipping = false;
    for line in ALANINE_SEQUENCE.lines() {
        let t = line.trim();
        if t.starts_with("prepare ") {
            skipping = true;
            out.push(format!("prepare {state}"));
            continue;
        }
        if skipping {
            if t == "checkpoint part1" {
                skipping = false;
                out.push(line.to_string());
            }
            continue;
        }
        out.push(line.to_string());
    }
    parse_sequence(&out.join("\n")).expect("edited sequence parses")
}

pub fn family_name(l: CoherenceLabel) -> &'static str {
    match l {
        CoherenceLabel::QQ => "qq",
        CoherenceLabel::DQ1 => "dq1",
        CoherenceLabel::DQ2 => "dq2",
        CoherenceLabel::ZQ => "zq",
        _ => unreachable!("methyl families only"),
    }
}

/// `Re⟨ρ(0), ρ(t1)⟩ / ⟨ρ(0), ρ(0)⟩` for a checkpoint captured at every increment.
pub fn checkpoint_interferogram(out: &RunOutput, name: &str) -> Vec<f64> {
    let r0 = out.checkpoint(0, name).expect("checkpoint present").clone();
    let n0 = r0.hs_inner(&r0).unwrap().re;
    (0..out.checkpoints.len()).map(|i| r0.hs_inner(out.checkpoint(i, name).unwrap()).unwrap().re / n0).collect()
}

pub fn run(system: &SpinSystem<f64>, seq: &PulseSequence, opts: &RunOptions) -> RunOutput {
    run_sequence(system, seq, opts).expect("run succeeds")
}
