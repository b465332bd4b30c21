//! Coherence-order analysis.
//!
//! Each Pauli string is expanded spin-wise into `{E, I_z, I₊, I₋}`: identity
//! and `Z` letters are order 0, while every transverse letter splits into a
//! raising and a lowering part. A ladder pattern's order is `Σ w_k p_k` with
//! `p_k ∈ {+1, 0, −1}` and per-spin weights `w_k` (all 1 for the plain order,
//! gyromagnetic ratios for the γ-weighted one). Components are mapped back to
//! the Pauli basis with `I± = (X ± iY)/2`, so regrouping is exact.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use super::string::PauliString;
use super::sum::OperatorSum;
use crate::error::{check_len, Error, Result};
use crate::scalar::{c, Real};

/// A (possibly γ-weighted) coherence order; exact rational.
pub type Order = Ratio<i64>;

/// Per-spin coherence weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weights(Vec<Ratio<i64>>);

impl Weights {
    /// All weights 1: the ordinary coherence order.
    pub fn plain(n: usize) -> Self {
        Weights(vec![Ratio::one(); n])
    }

    pub fn from_ints(w: &[i64]) -> Result<Self> {
        Self::new(w.iter().map(|&v| Ratio::from_integer(v)).collect())
    }

    pub fn new(w: Vec<Ratio<i64>>) -> Result<Self> {
        if let Some(bad) = w.iter().find(|v| !v.is_positive()) {
            return Err(Error::InvalidArgument(format!("coherence weights must be positive, got {bad}")));
        }
        Ok(Weights(w))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Ratio<i64>] {
        &self.0
    }

    /// Weights restricted to `positions`, in that order.
    pub fn select(&self, positions: &[usize]) -> Weights {
        Weights(positions.iter().map(|&k| self.0[k]).collect())
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Spin-wise ladder pattern: which transverse spins carry `I₊` and which `I₋`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ladder {
    pub raising: u64,
    pub lowering: u64,
}

impl Ladder {
    pub fn order(&self, weights: &Weights) -> Order {
        let mut o = Order::zero();
        for (k, w) in weights.as_slice().iter().enumerate() {
            if self.raising >> k & 1 == 1 {
                o += w;
            } else if self.lowering >> k & 1 == 1 {
                o -= w;
            }
        }
        o
    }

    /// Number of spins in `I₊` or `I₋`.
    pub fn transverse(&self) -> u32 {
        (self.raising | self.lowering).count_ones()
    }

    /// Plain order restricted to the spins in `mask`.
    pub fn partial_order(&self, mask: u64) -> i64 {
        (self.raising & mask).count_ones() as i64 - (self.lowering & mask).count_ones() as i64
    }
}

/// Splits `rho` by an arbitrary key of each ladder pattern.
///
/// The returned components sum back to `rho`.
pub fn ladder_partition<T, K, F>(rho: &OperatorSum<T>, mut key: F) -> BTreeMap<K, OperatorSum<T>>
where
    T: Real,
    K: Ord,
    F: FnMut(&Ladder) -> K,
{
    let n = rho.n_spins();
    let half = T::lit(0.5);
    let mut out: BTreeMap<K, OperatorSum<T>> = BTreeMap::new();
    for (p, &coeff) in rho.iter() {
        let t_mask = p.x_mask();
        let spins: Vec<usize> = (0..n).filter(|&k| t_mask >> k & 1 == 1).collect();
        let fixed_z = p.z_mask() & !t_mask;
        let m = spins.len();
        for sign_bits in 0u64..(1u64 << m) {
            let mut ladder = Ladder { raising: 0, lowering: 0 };
            for (j, &k) in spins.iter().enumerate() {
                if sign_bits >> j & 1 == 1 {
                    ladder.raising |= 1 << k;
                } else {
                    ladder.lowering |= 1 << k;
                }
            }
            let comp = out.entry(key(&ladder)).or_insert_with(|| OperatorSum::zero(n));
            // expand Π_k proj(letter_k, s_k) over X/Y choices on the transverse spins
            for choice in 0u64..(1u64 << m) {
                let mut coef = coeff;
                let mut z = fixed_z;
                for (j, &k) in spins.iter().enumerate() {
                    let s = if sign_bits >> j & 1 == 1 { T::one() } else { -T::one() };
                    let was_y = p.z_mask() >> k & 1 == 1;
                    let pick_y = choice >> j & 1 == 1;
                    let f = match (was_y, pick_y) {
                        (false, false) | (true, true) => c(half, T::zero()),
                        (false, true) => c(T::zero(), s * half),
                        (true, false) => c(T::zero(), -s * half),
                    };
                    coef *= f;
                    if pick_y {
                        z |= 1 << k;
                    }
                }
                comp.add_term(coef, PauliString::from_masks(n, t_mask, z));
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Operator split by coherence order.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherenceDecomposition<T: Real> {
    pub weights: Weights,
    pub components: BTreeMap<Order, OperatorSum<T>>,
}

impl<T: Real> CoherenceDecomposition<T> {
    pub fn orders(&self) -> Vec<Order> {
        self.components.keys().copied().collect()
    }

    pub fn component(&self, order: Order) -> Option<&OperatorSum<T>> {
        self.components.get(&order)
    }

    /// Sum of the components with the given orders (missing orders contribute nothing).
    pub fn select(&self, orders: &[Order]) -> Option<OperatorSum<T>> {
        let n = self.components.values().next()?.n_spins();
        let mut acc = OperatorSum::zero(n);
        for o in orders {
            if let Some(c) = self.components.get(o) {
                acc = &acc + c;
            }
        }
        Some(acc)
    }

    pub fn recombine(&self, n: usize) -> OperatorSum<T> {
        self.components.values().fold(OperatorSum::zero(n), |acc, c| &acc + c)
    }
}

/// Decomposes `rho` into coherence orders under `weights`.
pub fn coherence_decompose<T: Real>(rho: &OperatorSum<T>, weights: &Weights) -> Result<CoherenceDecomposition<T>> {
    check_len(rho.n_spins(), weights.len())?;
    let components = ladder_partition(rho, |l| l.order(weights));
    Ok(CoherenceDecomposition { weights: weights.clone(), components })
}

/// Applies `e^{-i p φ}` to each component of order `p` (a z-rotation by `φ`
/// of every spin whose weight counts, in units of the weighted order).
pub fn phase_by_order<T: Real>(rho: &OperatorSum<T>, weights: &Weights, phi: T) -> Result<OperatorSum<T>> {
    let dec = coherence_decompose(rho, weights)?;
    let mut out = OperatorSum::zero(rho.n_spins());
    for (o, comp) in &dec.components {
        let p = T::lit(*o.numer() as f64 / *o.denom() as f64);
        let ang = -p * phi;
        out = &out + &comp.scale(Complex::new(ang.cos(), ang.sin()));
    }
    Ok(out)
}

/// `|order|` as f64, handy for display and tolerances.
pub fn order_f64(o: &Order) -> f64 {
    *o.numer() as f64 / *o.denom() as f64
}

/// True iff `o` is integral and equals `v`.
pub fn order_is(o: &Order, v: i64) -> bool {
    *o == Ratio::from_integer(v)
}

/// Absolute value of an order.
pub fn order_abs(o: &Order) -> Order {
    o.abs()
}
