use std::fmt::Write as _;

use num_complex::Complex;

use super::basis::{highest_state, methyl_weights, mq_coherences, order_fractions, LogicalBasis, DFS_LABELS, MQ_FAMILIES};
use super::errors::{eigenoperator_check, error_family, permutation_symmetry_check, permute_operator, EigenSign, FamilyTag, Symmetry};
use super::two_qubit::two_qubit_dfs_demo;
use crate::error::Result;
use crate::pauli::{OperatorSum, PauliString, Weights};

/// Positions of the methyl protons in the DFS operator order.
pub const PROTONS: [usize; 3] = [0, 1, 2];

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: String) -> Self {
        Check { name: name.to_string(), pass, detail }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenEntry {
    pub state: usize,
    pub error: PauliString,
    pub sign: EigenSign,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PermutationEntry {
    pub family: FamilyTag,
    pub error: PauliString,
    pub symmetry: Symmetry,
}

#[derive(Clone, Debug)]
pub struct DfsReport {
    pub orthogonality: [[Complex<f64>; 4]; 4],
    pub eigen_signs: Vec<EigenEntry>,
    pub permutation_results: Vec<PermutationEntry>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl DfsReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    pub fn sign(&self, state: usize, error: &PauliString) -> Option<EigenSign> {
        self.eigen_signs.iter().find(|e| e.state == state && e.error == *error).map(|e| e.sign)
    }

    /// `CHECK <name> PASS|FAIL <detail>` lines followed by a `NOTE` section.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "CHECK {} {} {}", c.name, if c.pass { "PASS" } else { "FAIL" }, c.detail);
        }
        if !self.notes.is_empty() {
            out.push_str("NOTE\n");
            for n in &self.notes {
                let _ = writeln!(out, "NOTE {n}");
            }
        }
        let _ = writeln!(out, "SUMMARY {} checks, {} failed", self.checks.len(), self.failures());
        out
    }
}

fn fractions_text(op: &OperatorSum<f64>, w: &Weights) -> Result<String> {
    let parts: Vec<String> = order_fractions(op, w)?.iter().rev().map(|(o, f)| format!("|{o}|:{f:.4}")).collect();
    Ok(parts.join(" "))
}

/// Runs the basis and error-family checks. `families` selects which error
/// sweeps are included; the basis and two-spin checks always run.
pub fn dfs_report(basis: &LogicalBasis<f64>, families: &[FamilyTag]) -> Result<DfsReport> {
    let mut checks = Vec::new();
    let mut notes = Vec::new();

    let gram = basis.gram()?;
    let (mut diag, mut off) = (0.0f64, 0.0f64);
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                diag = diag.max((gram[i][j] - Complex::new(1.0, 0.0)).norm());
            } else {
                off = off.max(gram[i][j].norm());
            }
        }
    }
    checks.push(Check::new("orthonormality", diag < 1e-12 && off < 1e-12, format!("max_diag_err={diag:.1e} max_offdiag={off:.1e}")));
    for (i, r) in basis.rho.iter().enumerate() {
        let tr = r.normalized_trace().norm();
        checks.push(Check::new(
            &format!("hermitian-traceless/rho{}", i + 1),
            r.is_hermitian(1e-12) && tr < 1e-12,
            format!("label={} trace={tr:.1e}", basis.labels[i]),
        ));
    }

    let mq = mq_coherences::<f64>();
    let residual = mq.iter().fold(OperatorSum::zero(4), |a, r| &a + r).try_sub(&highest_state())?;
    checks.push(Check::new("mq-sum-equals-highest-state", residual.is_zero(), format!("residual_terms={}", residual.len())));

    let mut eigen_signs = Vec::new();
    let mut permutation_results = Vec::new();
    for &tag in families {
        let fam = error_family(tag);
        match tag {
            FamilyTag::En => {
                for (i, r) in basis.rho.iter().enumerate() {
                    for p in &fam.members {
                        let sign = eigenoperator_check(r, p)?;
                        checks.push(Check::new(&format!("eigen/rho{}/{p}", i + 1), sign != EigenSign::NotEigen, format!("sign={sign}")));
                        eigen_signs.push(EigenEntry { state: i, error: *p, sign });
                    }
                }
                let closed = eigen_signs.iter().all(|e| e.sign != EigenSign::NotEigen);
                checks.push(Check::new("closure/En", closed, "every member maps the basis to ±itself".to_string()));
            }
            FamilyTag::Em => {}
        }
        let want = match tag {
            FamilyTag::En => Symmetry::Symmetric,
            FamilyTag::Em => Symmetry::Asymmetric,
        };
        for p in &fam.members {
            let symmetry = permutation_symmetry_check(p, &PROTONS)?;
            checks.push(Check::new(&format!("permutation/{tag}/{p}"), symmetry == want, symmetry.to_string()));
            permutation_results.push(PermutationEntry { family: tag, error: *p, symmetry });
        }
    }

    let demo = two_qubit_dfs_demo()?;
    checks.extend(demo.checks);
    notes.extend(demo.notes);

    notes.push(
        "eigen checks test each error string separately: P rho P = ±rho for every member, which implies the same for any \
         mixture of commuting members; the free coefficients of the error operator are not sampled."
            .to_string(),
    );
    let w = methyl_weights();
    let plain = Weights::plain(4);
    for (l, op) in MQ_FAMILIES.iter().zip(&mq) {
        notes.push(format!("mq {l}: gamma-weighted order shares {}; plain {}", fractions_text(op, &w)?, fractions_text(op, &plain)?));
    }
    for (i, op) in basis.rho.iter().enumerate() {
        notes.push(format!("logical rho{}: gamma-weighted order shares {}; plain {}", i + 1, fractions_text(op, &w)?, fractions_text(op, &plain)?));
    }
    let mut non_orth = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let v = mq[i].hs_inner(&mq[j])?.re;
            if v.abs() > 1e-12 {
                non_orth.push(format!("{}.{}={v:.6}", MQ_FAMILIES[i], MQ_FAMILIES[j]));
            }
        }
    }
    notes.push(format!("mq operators are not mutually orthogonal: {}", non_orth.join(" ")));
    for (a, b) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let mut parts = Vec::new();
        for (i, r) in basis.rho.iter().enumerate() {
            let img = permute_operator(r, &[a, b], &[b, a]);
            let ov = r.hs_inner(&img)?.re;
            parts.push(format!("rho{}:{ov:.3}", i + 1));
        }
        notes.push(format!(
            "swap {}<->{} maps the logical operators off themselves; overlap with the original: {}",
            DFS_LABELS[a],
            DFS_LABELS[b],
            parts.join(" ")
        ));
    }

    Ok(DfsReport { orthogonality: gram, eigen_signs, permutation_results, checks, notes })
}
