//! Coherence selection by pulsed field gradients.
//!
//! A gradient of area `G` gives a component of γ-weighted order `p` the
//! position-dependent phase `exp(i·2π·p·G·z)` over a sample spanning
//! `z ∈ [−½, ½]`. [`Branches`] keeps the state split by accumulated
//! dephasing `k = Σ p·G`; the ideal experiment keeps `k = 0` and the ensemble
//! model weights each branch by its sample average.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dynamics::StateOp;
use crate::error::{check_len, Error, Result};
use crate::pauli::{ladder_partition, Order, OperatorSum, Weights};
use crate::scalar::Real;
use crate::spin::parse_ratio;

/// Default number of sample slices for the ensemble model.
pub const DEFAULT_NZ: usize = 1024;

/// A gradient pulse; duration and amplitude folded into one signed area.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GradientEvent {
    pub strength: Ratio<i64>,
}

impl GradientEvent {
    pub fn new(strength: i64) -> Self {
        GradientEvent { strength: Ratio::from_integer(strength) }
    }

    pub fn parse(s: &str) -> Result<Self> {
        parse_ratio(s)
            .map(|strength| GradientEvent { strength })
            .ok_or_else(|| Error::InvalidArgument(format!("bad gradient strength `{s}`")))
    }
}

/// Admissible orders after encoding and the order read out at detection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathwaySelection {
    pub encode_orders: Vec<Order>,
    pub detect_order: Order,
}

impl PathwaySelection {
    /// Orders among `candidates` refocused by the pair `(ge, gd)` onto `detect_order`.
    pub fn from_gradients(ge: GradientEvent, gd: GradientEvent, detect_order: Order, candidates: &[Order]) -> Self {
        let encode_orders = candidates
            .iter()
            .copied()
            .filter(|&p| ge.strength * p + gd.strength * detect_order == Order::zero())
            .collect();
        PathwaySelection { encode_orders, detect_order }
    }

    pub fn admits(&self, p: Order) -> bool {
        self.encode_orders.contains(&p)
    }
}

/// Ideal rephasing condition `G_e·p_mq + G_d·p_det = 0`.
pub fn surviving_ratio(ge: GradientEvent, gd: GradientEvent, mq_order: i64, det_order: i64) -> bool {
    ge.strength * mq_order + gd.strength * det_order == Ratio::zero()
}

/// Keeps only components whose γ-weighted order is in `keep`.
pub fn gradient_filter<T: Real>(state: &StateOp<T>, keep: &[Order], weights: &Weights) -> Result<StateOp<T>> {
    check_len(state.n_spins(), weights.len())?;
    let parts = ladder_partition(&state.operator, |l| l.order(weights));
    let mut out = OperatorSum::zero(state.n_spins());
    for (o, comp) in parts {
        if keep.contains(&o) {
            out = &out + &comp;
        }
    }
    Ok(StateOp { operator: out, time: state.time })
}

/// Sample positions for the ensemble average.
///
/// Slices are cell-centered, `z_j = −½ + (j + ½ + δ)/nz`; `δ` is a global
/// offset in units of the slice width (0 for the plain grid).
#[derive(Clone, Debug, PartialEq)]
pub struct ZGrid {
    positions: Vec<f64>,
}

impl ZGrid {
    pub fn uniform(nz: usize) -> Result<Self> {
        Self::with_offset(nz, 0.0)
    }

    /// Grid shifted by a seeded random offset `δ ∈ [−½, ½)`.
    pub fn randomized(nz: usize, seed: u64) -> Result<Self> {
        let delta = ChaCha8Rng::seed_from_u64(seed).gen_range(-0.5..0.5);
        Self::with_offset(nz, delta)
    }

    pub fn with_offset(nz: usize, delta: f64) -> Result<Self> {
        if nz < 2 {
            return Err(Error::InvalidArgument(format!("nz must be at least 2, got {nz}")));
        }
        let w = 1.0 / nz as f64;
        Ok(ZGrid { positions: (0..nz).map(|j| -0.5 + (j as f64 + 0.5 + delta) * w).collect() })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// `(1/nz) Σ_j exp(i·2π·k·z_j)`.
    pub fn average_phase(&self, k: Order) -> Complex<f64> {
        let kf = *k.numer() as f64 / *k.denom() as f64;
        let tau = std::f64::consts::TAU;
        let sum = self.positions.iter().fold(Complex::new(0.0, 0.0), |acc, z| {
            let a = tau * kf * z;
            acc + Complex::new(a.cos(), a.sin())
        });
        sum / self.positions.len() as f64
    }
}

/// State split by accumulated gradient dephasing.
#[derive(Clone, Debug, PartialEq)]
pub struct Branches<T: Real> {
    n: usize,
    branches: BTreeMap<Order, OperatorSum<T>>,
}

impl<T: Real> Branches<T> {
    pub fn new(rho: OperatorSum<T>) -> Self {
        let n = rho.n_spins();
        let mut branches = BTreeMap::new();
        branches.insert(Order::zero(), rho);
        Branches { n, branches }
    }

    pub fn n_spins(&self) -> usize {
        self.n
    }

    pub fn keys(&self) -> Vec<Order> {
        self.branches.keys().copied().collect()
    }

    pub fn branch(&self, k: Order) -> Option<&OperatorSum<T>> {
        self.branches.get(&k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Order, &OperatorSum<T>)> {
        self.branches.iter()
    }

    /// Applies the same linear map to every branch.
    pub fn try_map<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&OperatorSum<T>) -> Result<OperatorSum<T>> + Sync,
    {
        let mapped: Result<Vec<(Order, OperatorSum<T>)>> =
            self.branches.par_iter().map(|(k, rho)| Ok((*k, f(rho)?))).collect();
        let mut branches = BTreeMap::new();
        for (k, rho) in mapped? {
            if !rho.is_zero() {
                branches.insert(k, rho);
            }
        }
        Ok(Branches { n: self.n, branches })
    }

    /// Splits each branch by order `p` and moves it to key `k + p·G`.
    pub fn gradient(&self, g: GradientEvent, weights: &Weights) -> Result<Self> {
        check_len(self.n, weights.len())?;
        let mut branches: BTreeMap<Order, OperatorSum<T>> = BTreeMap::new();
        for (k, rho) in &self.branches {
            for (p, comp) in ladder_partition(rho, |l| l.order(weights)) {
                let key = *k + p * g.strength;
                let slot = branches.entry(key).or_insert_with(|| OperatorSum::zero(self.n));
                *slot = &*slot + &comp;
            }
        }
        branches.retain(|_, v| !v.is_zero());
        Ok(Branches { n: self.n, branches })
    }

    /// Drops branches that no order can bring back to key 0 under `next`.
    /// Leaves `collapse_exact` after `next` unchanged.
    pub fn retain_refocusable(&mut self, next: GradientEvent, weights: &Weights) -> Result<()> {
        check_len(self.n, weights.len())?;
        if next.strength.is_zero() {
            self.branches.retain(|k, _| k.is_zero());
            return Ok(());
        }
        let reachable = reachable_orders(weights);
        self.branches.retain(|k, _| reachable.contains(&(-*k / next.strength)));
        Ok(())
    }

    /// Ideal gradients: only the fully refocused branch survives.
    pub fn collapse_exact(&self) -> OperatorSum<T> {
        self.branches.get(&Order::zero()).cloned().unwrap_or_else(|| OperatorSum::zero(self.n))
    }

    /// Sample average over `grid`.
    pub fn collapse_ensemble(&self, grid: &ZGrid) -> OperatorSum<T> {
        let mut out = OperatorSum::zero(self.n);
        for (k, rho) in &self.branches {
            let w = grid.average_phase(*k);
            out = &out + &rho.scale(Complex::new(T::lit(w.re), T::lit(w.im)));
        }
        out
    }

    /// Everything, as if no gradient had been applied.
    pub fn collapse_all(&self) -> OperatorSum<T> {
        self.branches.values().fold(OperatorSum::zero(self.n), |acc, r| &acc + r)
    }
}

/// Every γ-weighted order `Σ c_k w_k` with `c_k ∈ {−1, 0, 1}`.
pub fn reachable_orders(weights: &Weights) -> BTreeSet<Order> {
    let mut set = BTreeSet::from([Order::zero()]);
    for w in weights.as_slice() {
        set = set.iter().flat_map(|o| [*o - *w, *o, *o + *w]).collect();
    }
    set
}

/// One gradient followed by the sample average.
pub fn ensemble_gradient<T: Real>(state: &StateOp<T>, g: GradientEvent, weights: &Weights, nz: usize) -> Result<StateOp<T>> {
    let grid = ZGrid::uniform(nz)?;
    let b = Branches::new(state.operator.clone()).gradient(g, weights)?;
    Ok(StateOp { operator: b.collapse_ensemble(&grid), time: state.time })
}
