//! Two-spin warm-up: the Bell-type logical states protected against
//! `{EE, XX, ZZ}`.

use num_complex::Complex;
use num_rational::Ratio;

use super::report::Check;
use crate::error::Result;
use crate::pauli::{coherence_decompose, from_matrix, CMatrix, Letter, OperatorSum, PauliString, Weights};

type Op = OperatorSum<f64>;

/// `|01⟩ ± |10⟩` without the `1/√2` (spin 1 most significant); kept
/// unnormalized so that projectors come out exact.
pub fn logical_states() -> [[Complex<f64>; 4]; 2] {
    let z = Complex::new(0.0, 0.0);
    let one = Complex::new(1.0, 0.0);
    [[z, one, one, z], [z, one, -one, z]]
}

/// `|v⟩⟨v| / ⟨v|v⟩`.
pub fn projector(v: &[Complex<f64>; 4]) -> CMatrix<f64> {
    let norm2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    CMatrix::from_fn(4, 4, |r, c| v[r] * v[c].conj() / norm2)
}

fn op(terms: &[(f64, &str)]) -> Op {
    Op::from_terms(2, terms.iter().map(|&(k, s)| (Complex::new(k, 0.0), s.parse().expect("static string")))).expect("two spins")
}

/// `½(½ − 2Iz Iz + 2Ix Ix + 2Iy Iy)`.
pub fn logical_zero_operator() -> Op {
    op(&[(0.25, "EE"), (-0.25, "ZZ"), (0.25, "XX"), (0.25, "YY")])
}

/// Result of the two-spin checks plus the order split of the logical-zero operator.
#[derive(Clone, Debug)]
pub struct TwoQubitDemo {
    pub checks: Vec<Check>,
    /// Plain-order components of the logical-zero operator.
    pub orders: Vec<(Ratio<i64>, Op)>,
    pub notes: Vec<String>,
}

pub fn two_qubit_dfs_demo() -> Result<TwoQubitDemo> {
    let states = logical_states();
    let mut checks = Vec::new();

    // ⟨a|b⟩ with the 1/√2 factors restored as an overall 1/2
    let dot = |a: &[Complex<f64>; 4], b: &[Complex<f64>; 4]| a.iter().zip(b).fold(Complex::new(0.0, 0.0), |s, (x, y)| s + x.conj() * y) * 0.5;
    let gram_err = [(0, 0, 1.0), (0, 1, 0.0), (1, 0, 0.0), (1, 1, 1.0)]
        .iter()
        .map(|&(i, j, want)| (dot(&states[i], &states[j]) - Complex::new(want, 0.0)).norm())
        .fold(0.0, f64::max);
    checks.push(Check::new("two-qubit-orthonormal", gram_err == 0.0, format!("max_err={gram_err:.1e}")));

    let proj = [from_matrix(&projector(&states[0]))?, from_matrix(&projector(&states[1]))?];
    let expansion_err = proj[0].hs_distance(&logical_zero_operator())?;
    checks.push(Check::new("two-qubit-product-operator-expansion", expansion_err == 0.0, format!("hs_distance={expansion_err:.1e}")));

    for err in ["XX", "ZZ", "EE"] {
        let p: PauliString = err.parse()?;
        let fixed = proj.iter().all(|r| crate::pauli::conjugate_by_pauli(r, &p).map(|img| img == *r).unwrap_or(false));
        checks.push(Check::new(&format!("two-qubit-invariant-{err}"), fixed, "both projectors fixed".to_string()));
    }

    let dec = coherence_decompose(&logical_zero_operator(), &Weights::plain(2))?;
    let orders: Vec<(Ratio<i64>, Op)> = dec.components.into_iter().collect();
    let recombined = orders.iter().fold(Op::zero(2), |a, (_, c)| &a + c);
    let only_zero = orders.iter().all(|(o, _)| *o == Ratio::from_integer(0));
    checks.push(Check::new(
        "two-qubit-order-decomposition",
        recombined == logical_zero_operator(),
        format!("orders={}", orders.iter().map(|(o, _)| o.to_string()).collect::<Vec<_>>().join(",")),
    ));
    let mut notes = Vec::new();
    if only_zero {
        notes.extend(flip_flop_notes(&logical_zero_operator()));
    }
    Ok(TwoQubitDemo { checks, orders, notes })
}

/// One note per spin pair carrying `Ix Ix + Iy Iy` with equal weight: that
/// combination is the zero-quantum flip-flop, not a double-quantum term.
pub fn flip_flop_notes(op: &Op) -> Vec<String> {
    let n = op.n_spins();
    let mut notes = Vec::new();
    for k in 0..n {
        for l in k + 1..n {
            let pair = |letter| PauliString::identity(n).with_letter(k, letter).with_letter(l, letter);
            let (xx, yy) = (op.coefficient(&pair(Letter::X)), op.coefficient(&pair(Letter::Y)));
            if xx.norm() > 0.0 && (xx - yy).norm() <= 1e-12 * xx.norm() {
                notes.push(format!(
                    "Ix{a}Ix{b} + Iy{a}Iy{b} is often labelled double quantum, but the ladder expansion gives the flip-flop \
                     (I+{a}I-{b} + I-{a}I+{b})/2, which is zero quantum (order 0).",
                    a = k + 1,
                    b = l + 1
                ));
            }
        }
    }
    notes
}
