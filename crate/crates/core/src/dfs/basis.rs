//! Methyl multiple-quantum operators on the four spins `(I1, I2, I3, S)`.

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::error::Result;
use crate::pauli::{coherence_decompose, Letter, OperatorSum, PauliString, Weights};
use crate::scalar::Real;
use crate::spin::{CoherenceLabel, SpinSystem};

/// Spin labels of the four DFS positions, in operator order.
pub const DFS_LABELS: [&str; 4] = ["I1", "I2", "I3", "S"];

/// The four product strings shared by every methyl operator, as
/// `Ix Iy Iy Sy`, `Ix Ix Iy Sx`, `Ix Ix Ix Sy`, `Iy Iy Iy Sx`.
pub const MQ_STRINGS: [&str; 4] = ["XYYY", "XXYX", "XXXY", "YYYX"];

/// Per-string coefficients of the multiple-quantum operators (in units of the
/// product operator, i.e. `Ix Iy Iy Sy = XYYY/16`).
const MQ_COEFFS: [[f64; 4]; 4] = [[3.0, -3.0, -1.0, 1.0], [3.0, 3.0, -1.0, -1.0], [1.0, 1.0, 1.0, 1.0], [1.0, -1.0, 1.0, -1.0]];

/// Sign patterns of the logical basis over the same strings.
const LOGICAL_SIGNS: [[f64; 4]; 4] = [[1.0, -1.0, -1.0, 1.0], [1.0, 1.0, -1.0, -1.0], [1.0, 1.0, 1.0, 1.0], [1.0, -1.0, 1.0, -1.0]];

pub const LOGICAL_LABELS: [&str; 4] = ["|00>", "|01>", "|10>", "|11>"];

/// Families in the order QQ, DQ1, DQ2, ZQ.
pub const MQ_FAMILIES: [CoherenceLabel; 4] = CoherenceLabel::MQ;

fn combo<T: Real>(coeffs: &[f64; 4], unit: f64) -> OperatorSum<T> {
    let mut op = OperatorSum::zero(4);
    for (s, &k) in MQ_STRINGS.iter().zip(coeffs) {
        op.add_term(num_complex::Complex::new(T::lit(k * unit), T::zero()), s.parse().expect("static string"));
    }
    op
}

/// `8 Ix Iy Iy Sy`.
pub fn highest_state<T: Real>() -> OperatorSum<T> {
    OperatorSum::product_op(4, &[(0, Letter::X), (1, Letter::Y), (2, Letter::Y), (3, Letter::Y)]).scale_real(T::lit(8.0))
}

/// QQ, DQ1, DQ2, ZQ with the textbook product-operator coefficients.
pub fn mq_coherences<T: Real>() -> [OperatorSum<T>; 4] {
    MQ_COEFFS.map(|k| combo(&k, 1.0 / 16.0))
}

/// The four logical operators with unit Hilbert–Schmidt norm.
#[derive(Clone, Debug, PartialEq)]
pub struct LogicalBasis<T: Real> {
    pub rho: [OperatorSum<T>; 4],
    pub labels: [&'static str; 4],
}

impl<T: Real> LogicalBasis<T> {
    /// Replaces one operator (used to feed external fixtures into the checks).
    pub fn with_state(mut self, i: usize, op: OperatorSum<T>) -> Self {
        self.rho[i] = op;
        self
    }

    /// `hs_inner(ρ_i, ρ_j)` for all pairs.
    pub fn gram(&self) -> Result<[[num_complex::Complex<T>; 4]; 4]> {
        let mut g = [[num_complex::Complex::default(); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                g[i][j] = self.rho[i].hs_inner(&self.rho[j])?;
            }
        }
        Ok(g)
    }
}

pub fn logical_basis<T: Real>() -> LogicalBasis<T> {
    LogicalBasis { rho: LOGICAL_SIGNS.map(|k| combo(&k, 0.5)), labels: LOGICAL_LABELS }
}

/// γ weights `(4, 4, 4, 1)` of the DFS spins.
pub fn methyl_weights() -> Weights {
    Weights::from_ints(&[4, 4, 4, 1]).expect("positive")
}

/// γ-weighted order magnitude of each family in the 4:1 convention.
pub fn family_order(label: CoherenceLabel) -> Option<i64> {
    match label {
        CoherenceLabel::QQ => Some(13),
        CoherenceLabel::DQ1 => Some(11),
        CoherenceLabel::DQ2 => Some(5),
        CoherenceLabel::ZQ => Some(3),
        _ => None,
    }
}

/// Exact coherence components of [`highest_state`]: the `±13, ±11, ±5, ±3`
/// γ-weighted parts, returned as QQ, DQ1, DQ2, ZQ. They sum to the input.
pub fn pure_coherences<T: Real>() -> [OperatorSum<T>; 4] {
    let dec = coherence_decompose(&highest_state::<T>(), &methyl_weights()).expect("matching lengths");
    MQ_FAMILIES.map(|l| {
        let p = family_order(l).expect("methyl family");
        dec.select(&[Ratio::from_integer(p), Ratio::from_integer(-p)]).expect("non-empty")
    })
}

/// Share of `|op|²` carried by each |γ-weighted order| (or plain order).
pub fn order_fractions<T: Real>(op: &OperatorSum<T>, weights: &Weights) -> Result<BTreeMap<Ratio<i64>, f64>> {
    let total = op.hs_norm().to_f64_lossy().powi(2);
    let mut out: BTreeMap<Ratio<i64>, f64> = BTreeMap::new();
    for (o, comp) in coherence_decompose(op, weights)?.components {
        *out.entry(num_traits::Signed::abs(&o)).or_default() += comp.hs_norm().to_f64_lossy().powi(2) / total;
    }
    Ok(out)
}

/// Places a `(I1, I2, I3, S)` operator into `system` by label.
pub fn embed_in_system<T: Real>(op: &OperatorSum<T>, system: &SpinSystem<T>) -> Result<OperatorSum<T>> {
    let positions = DFS_LABELS.iter().map(|l| system.index_of(l)).collect::<Result<Vec<_>>>()?;
    op.embed(system.len(), &positions)
}

/// Places a `(I1, I2, I3, S)` string into `system` by label.
pub fn embed_string_in_system<T: Real>(p: &PauliString, system: &SpinSystem<T>) -> Result<PauliString> {
    let positions = DFS_LABELS.iter().map(|l| system.index_of(l)).collect::<Result<Vec<_>>>()?;
    p.embed(system.len(), &positions)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Op = OperatorSum<f64>;

    #[test]
    fn coherences_sum_to_highest_state() {
        let sum = mq_coherences::<f64>().iter().fold(Op::zero(4), |a, r| &a + r);
        assert_eq!(&sum - &highest_state(), Op::zero(4));
    }

    #[test]
    fn highest_state_is_half_xyyy() {
        assert_eq!(highest_state::<f64>(), Op::real_term(0.5, "XYYY".parse().unwrap()));
    }

    #[test]
    fn basis_is_unit_norm_and_dq2_matches_mq_operator() {
        let b = logical_basis::<f64>();
        for r in &b.rho {
            assert!((r.hs_norm() - 1.0).abs() < 1e-15);
        }
        let dq2 = &mq_coherences::<f64>()[2];
        assert!(b.rho[2].hs_distance(&dq2.normalized()).unwrap() < 1e-15);
    }

    #[test]
    fn pure_components_recombine() {
        let sum = pure_coherences::<f64>().iter().fold(Op::zero(4), |a, r| &a + r);
        assert!(sum.hs_distance(&highest_state()).unwrap() < 1e-15);
    }
}
