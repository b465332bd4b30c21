mod common;

use common::*;
use mqdfs::dfs::{embed_in_system, error_family, highest_state, FamilyTag};
use mqdfs::pauli::{Letter, Order, PauliString};
use mqdfs::sim::{compare_spectra, echo_signal_model, model_frequency, parse_sequence, peak_pick, process_2d, selected_orders, Backend, GradMode, RunOptions, Spectrum2D};
use mqdfs::spin::CoherenceLabel;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn quick(grad_mode: GradMode) -> RunOptions {
    RunOptions { t2_points: Some(128), grad_mode, ..RunOptions::default() }
}

fn spectrum(seq: &mqdfs::sim::PulseSequence, opts: &RunOptions) -> Spectrum2D {
    process_2d(&run(&alanine(), seq, opts).raw)
}

fn pm(p: i64) -> GradMode {
    GradMode::Filter(vec![Order::from_integer(p), Order::from_integer(-p)])
}

#[test]
fn part_one_builds_the_highest_state() {
    let sys = alanine();
    let opts = RunOptions { t1_points: 1, t2_points: Some(4), ..RunOptions::default() };
    let out = run(&sys, &shipped(), &opts);
    let want = embed_in_system(&highest_state(), &sys).unwrap();
    let d = out.checkpoint(0, "part1").unwrap().hs_distance(&want).unwrap();
    assert!(d < 1e-10, "{d}");
}

#[test]
fn rounded_delay_leaves_a_visible_residual() {
    let text = mqdfs::sim::ALANINE_SEQUENCE.replace("delay 1/(4*J(S,I1))", "delay 0.00194");
    let seq = parse_sequence(&text).unwrap();
    let sys = alanine();
    let opts = RunOptions { t1_points: 1, t2_points: Some(4), ..RunOptions::default() };
    let out = run(&sys, &seq, &opts);
    let d = out.checkpoint(0, "part1").unwrap().hs_distance(&embed_in_system(&highest_state(), &sys).unwrap()).unwrap();
    assert!(d > 1e-3 && d < 2e-2, "{d}");
}

#[test]
fn each_coherence_follows_the_echo_model() {
    let sys = alanine();
    for backend in [Backend::Analytic, Backend::Dense] {
        for label in CoherenceLabel::MQ {
            let opts = RunOptions { t2_points: Some(4), backend, grad_mode: GradMode::Off, capture_checkpoints: true, ..RunOptions::default() };
            let out = run(&sys, &ideal_sequence(family_name(label)), &opts);
            let curve = checkpoint_interferogram(&out, "part2");
            assert_eq!(curve.len(), 64);
            for (i, v) in curve.iter().enumerate() {
                let want = echo_signal_model(label, out.raw.t1(i), &sys).unwrap();
                assert!((v - want).abs() < 1e-8, "{backend:?} {label} t1[{i}]: {v} vs {want}");
            }
        }
    }
}

#[test]
fn filtered_coherences_peak_at_their_model_frequencies() {
    let sys = alanine();
    for (label, order) in [(CoherenceLabel::QQ, 13), (CoherenceLabel::DQ1, 11), (CoherenceLabel::DQ2, 5), (CoherenceLabel::ZQ, 3)] {
        let s2d = spectrum(&shipped(), &quick(pm(order)));
        let peaks = peak_pick(&s2d, 0.5).unwrap();
        let f = model_frequency(label, &sys).unwrap();
        for target in [f, -f] {
            assert!(peaks.has_f1(target, 0.5), "{label}: no peak near {target:.2} in {:?}", peaks.f1_positions(0.1));
        }
    }
}

#[test]
fn selection_ratio_keeps_only_the_dq2_peaks() {
    // full t2 length: shorter acquisitions add truncation sidelobes of the DQ2 line
    let full = |grad_mode| RunOptions { grad_mode, ..RunOptions::default() };
    let s2d = spectrum(&shipped(), &full(GradMode::Exact));
    let top = s2d.max();
    assert!(top > 0.0);
    let peaks = peak_pick(&s2d, 0.5).unwrap();
    assert!(peaks.has_f1(5.9, 0.5) && peaks.has_f1(-5.9, 0.5), "{:?}", peaks.f1_positions(0.1));
    let reference = spectrum(&shipped(), &full(GradMode::Filter(vec![Order::from_integer(-5)])));
    let d = compare_spectra(&s2d, &reference, 1e-6).unwrap();
    assert!(d.pass, "{}", d.to_text());
    let fine = peak_pick(&s2d, 1e-6).unwrap();
    for f in [13.2, 8.7, 1.4] {
        assert!(!fine.has_f1(f, 0.5) && !fine.has_f1(-f, 0.5), "{f}");
    }
}

fn dq2_with(grad_mode: GradMode, inject: Option<PauliString>) -> Spectrum2D {
    spectrum(&shipped(), &RunOptions { inject, ..quick(grad_mode) })
}

fn coherence_filter() -> GradMode {
    GradMode::Filter(selected_orders(&alanine(), &shipped()).unwrap())
}

fn has_transverse_letter(p: &PauliString) -> bool {
    p.letters().iter().any(|l| matches!(l, Letter::X | Letter::Y))
}

#[test]
fn collective_errors_leave_the_filtered_spectrum_unchanged() {
    let base = dq2_with(coherence_filter(), None);
    for p in error_family(FamilyTag::En).members {
        let c = compare_spectra(&base, &dq2_with(coherence_filter(), Some(p)), 1e-10).unwrap();
        assert!(c.pass, "{p}: {}", c.to_text());
    }
}

#[test]
fn pathway_tracking_separates_the_two_signs_of_dq2() {
    // With dephasing tracked per pathway, an X/Y error turns the selected −5
    // pathway into +5, which part 3 converts with a different amplitude.
    let base = dq2_with(GradMode::Exact, None);
    for p in error_family(FamilyTag::En).members {
        let c = compare_spectra(&base, &dq2_with(GradMode::Exact, Some(p)), 1e-10).unwrap();
        if has_transverse_letter(&p) {
            assert!(c.max_rel_diff > 1e-2, "{p}: {}", c.to_text());
        } else {
            assert!(c.pass, "{p}: {}", c.to_text());
        }
    }
}

fn assert_em_effect(p: PauliString, base: &Spectrum2D) {
    let c = compare_spectra(base, &dq2_with(coherence_filter(), Some(p)), 1e-6).unwrap();
    if has_transverse_letter(&p) {
        assert!(!c.pass, "{p}: {}", c.to_text());
    } else {
        // Z strings only flip signs of an all-transverse state
        assert!(c.max_rel_diff < 1e-10, "{p}: {}", c.to_text());
    }
}

#[test]
fn sampled_non_collective_errors_change_the_filtered_spectrum() {
    let base = dq2_with(coherence_filter(), None);
    let mut members = error_family(FamilyTag::Em).members;
    members.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(7));
    let sample: Vec<PauliString> = members.into_iter().take(20).collect();
    assert!(sample.iter().filter(|p| has_transverse_letter(p)).count() >= 15);
    for p in sample {
        assert_em_effect(p, &base);
    }
}

#[test]
#[ignore = "full 144-member sweep; run with --ignored"]
fn every_non_collective_error_is_classified() {
    let base = dq2_with(coherence_filter(), None);
    let members = error_family(FamilyTag::Em).members;
    assert_eq!(members.iter().filter(|p| !has_transverse_letter(p)).count(), 12);
    for p in members {
        assert_em_effect(p, &base);
    }
}

/// Relative spectrum difference of the uniform ensemble from the exact run.
/// The small rise from 32 to 64 slices is aliasing of the dephasing keys.
const SIM_CONVERGENCE: [(usize, f64); 6] = [(16, 0.91814), (32, 0.46836), (64, 0.47869), (128, 0.024489), (256, 0.0), (1024, 0.0)];

#[test]
fn ensemble_selection_converges() {
    let full = |grad_mode| RunOptions { grad_mode, ..RunOptions::default() };
    let exact = spectrum(&shipped(), &full(GradMode::Exact));
    let mut prev = f64::INFINITY;
    for (nz, want) in SIM_CONVERGENCE {
        let ens = spectrum(&shipped(), &full(GradMode::Ensemble { nz, seed: None }));
        let got = compare_spectra(&exact, &ens, 0.0).unwrap().max_rel_diff;
        assert!((got - want).abs() <= 1e-12 + 1e-3 * want, "nz={nz}: {got:e} vs fixture {want:e}");
        assert!(got <= prev * 1.05 + 1e-12, "nz={nz}: {got:e} after {prev:e}");
        prev = got;
    }
}

#[test]
fn sequence_errors_name_the_line() {
    let cases = [
        ("acquire 8 100 H\nacquire 8 100 H", "acquire"),
        ("pulse S 90 q\nacquire 8 100 H", "1"),
        ("delay -1\nacquire 8 100 H", "1"),
        ("grad 1\ngrad 2\ngrad 3\nacquire 8 100 H", "grad"),
        ("frobnicate\nacquire 8 100 H", "1"),
        ("pulse S 90 x", "acquire"),
    ];
    for (text, needle) in cases {
        let err = parse_sequence(text).expect_err(text).to_string();
        assert!(err.contains(needle), "{text:?} gave {err}");
    }
}

#[test]
fn unknown_target_is_rejected_before_running() {
    let seq = parse_sequence("pulse Q 90 x\nacquire 8 100 H").unwrap();
    assert!(mqdfs::sim::run_sequence(&alanine(), &seq, &RunOptions::default()).is_err());
}
