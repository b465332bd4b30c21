use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::pauli::{Ladder, Weights};
use crate::scalar::Real;

/// T₂ used for any coherence label that the config leaves unset.
pub const DEFAULT_T2_SECONDS: f64 = 0.5;

/// Coherence families with their own transverse relaxation time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoherenceLabel {
    QQ,
    DQ1,
    DQ2,
    ZQ,
    SQ,
    Default,
}

impl CoherenceLabel {
    pub const ALL: [CoherenceLabel; 6] = [
        CoherenceLabel::QQ,
        CoherenceLabel::DQ1,
        CoherenceLabel::DQ2,
        CoherenceLabel::ZQ,
        CoherenceLabel::SQ,
        CoherenceLabel::Default,
    ];

    /// The four methyl multiple-quantum families.
    pub const MQ: [CoherenceLabel; 4] = [CoherenceLabel::QQ, CoherenceLabel::DQ1, CoherenceLabel::DQ2, CoherenceLabel::ZQ];

    pub fn as_str(self) -> &'static str {
        match self {
            CoherenceLabel::QQ => "QQ",
            CoherenceLabel::DQ1 => "DQ1",
            CoherenceLabel::DQ2 => "DQ2",
            CoherenceLabel::ZQ => "ZQ",
            CoherenceLabel::SQ => "SQ",
            CoherenceLabel::Default => "default",
        }
    }
}

impl fmt::Display for CoherenceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CoherenceLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CoherenceLabel::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown coherence label `{s}`")))
    }
}

/// Per-label T₂ values in seconds; unset labels fall back to `default`.
#[derive(Clone, Debug, PartialEq)]
pub struct T2Map<T: Real> {
    entries: BTreeMap<CoherenceLabel, T>,
}

impl<T: Real> Default for T2Map<T> {
    fn default() -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(CoherenceLabel::Default, T::lit(DEFAULT_T2_SECONDS));
        T2Map { entries }
    }
}

impl<T: Real> T2Map<T> {
    /// Same T₂ for every label.
    pub fn uniform(t2: T) -> Self {
        T2Map { entries: CoherenceLabel::ALL.iter().map(|&l| (l, t2)).collect() }
    }

    pub fn set(&mut self, label: CoherenceLabel, t2: T) {
        self.entries.insert(label, t2);
    }

    pub fn get(&self, label: CoherenceLabel) -> T {
        self.entries
            .get(&label)
            .or_else(|| self.entries.get(&CoherenceLabel::Default))
            .copied()
            .unwrap_or_else(|| T::lit(DEFAULT_T2_SECONDS))
    }

    /// Explicitly set entries.
    pub fn entries(&self) -> impl Iterator<Item = (CoherenceLabel, T)> + '_ {
        self.entries.iter().map(|(l, t)| (*l, *t))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spin<T: Real> {
    pub label: String,
    /// Relative gyromagnetic weight used for γ-weighted coherence orders.
    pub gamma: Ratio<i64>,
    pub shift_hz: T,
    /// Nucleus family used to address pulses (e.g. `H`, `C`).
    pub species: Option<String>,
}

impl<T: Real> Spin<T> {
    pub fn new(label: &str, gamma: i64, shift_hz: T) -> Self {
        Spin { label: label.to_string(), gamma: Ratio::from_integer(gamma), shift_hz, species: None }
    }

    pub fn with_species(mut self, species: &str) -> Self {
        self.species = Some(species.to_string());
        self
    }
}

/// Spins, scalar couplings (Hz) and per-coherence T₂.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinSystem<T: Real> {
    spins: Vec<Spin<T>>,
    couplings: Vec<Vec<T>>,
    t2: T2Map<T>,
}

impl<T: Real> SpinSystem<T> {
    /// Spins without couplings and the default T₂ map.
    pub fn new(spins: Vec<Spin<T>>) -> Result<Self> {
        let n = spins.len();
        let sys = SpinSystem { spins, couplings: vec![vec![T::zero(); n]; n], t2: T2Map::default() };
        sys.validate()?;
        Ok(sys)
    }

    pub fn from_parts(spins: Vec<Spin<T>>, couplings: Vec<Vec<T>>, t2: T2Map<T>) -> Result<Self> {
        let sys = SpinSystem { spins, couplings, t2 };
        sys.validate()?;
        Ok(sys)
    }

    pub fn with_coupling(mut self, a: &str, b: &str, hz: T) -> Result<Self> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        if i == j {
            return Err(Error::Validation(format!("self-coupling of `{a}`")));
        }
        self.couplings[i][j] = hz;
        self.couplings[j][i] = hz;
        Ok(self)
    }

    pub fn with_t2(mut self, label: CoherenceLabel, seconds: T) -> Result<Self> {
        if !(seconds > T::zero()) {
            return Err(Error::Validation(format!("T2 for {label} must be positive")));
        }
        self.t2.set(label, seconds);
        Ok(self)
    }

    pub fn with_t2_map(mut self, t2: T2Map<T>) -> Result<Self> {
        self.t2 = t2;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.spins.len();
        if n == 0 {
            return Err(Error::Validation("a spin system needs at least one spin".into()));
        }
        for (i, s) in self.spins.iter().enumerate() {
            if s.label.is_empty() || s.label.chars().any(char::is_whitespace) {
                return Err(Error::Validation(format!("invalid spin label `{}`", s.label)));
            }
            if self.spins[..i].iter().any(|o| o.label == s.label) {
                return Err(Error::Validation(format!("duplicate spin label `{}`", s.label)));
            }
            if !s.gamma.is_positive() {
                return Err(Error::Validation(format!("gamma of `{}` must be positive", s.label)));
            }
            if !s.shift_hz.is_finite() {
                return Err(Error::Validation(format!("shift of `{}` must be finite", s.label)));
            }
        }
        if self.couplings.len() != n || self.couplings.iter().any(|r| r.len() != n) {
            return Err(Error::Validation(format!("coupling table must be {n}x{n}")));
        }
        for i in 0..n {
            if self.couplings[i][i] != T::zero() {
                return Err(Error::Validation(format!("coupling table diagonal must be zero (spin `{}`)", self.spins[i].label)));
            }
            for j in 0..i {
                if self.couplings[i][j] != self.couplings[j][i] {
                    return Err(Error::Validation(format!(
                        "coupling table not symmetric: J({},{}) = {} but J({},{}) = {}",
                        self.spins[i].label, self.spins[j].label, self.couplings[i][j],
                        self.spins[j].label, self.spins[i].label, self.couplings[j][i]
                    )));
                }
                if !self.couplings[i][j].is_finite() {
                    return Err(Error::Validation("couplings must be finite".into()));
                }
            }
        }
        for (label, t2) in self.t2.entries() {
            if !(t2 > T::zero()) || !t2.is_finite() {
                return Err(Error::Validation(format!("T2 for {label} must be positive")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn spins(&self) -> &[Spin<T>] {
        &self.spins
    }

    pub fn spin(&self, k: usize) -> &Spin<T> {
        &self.spins[k]
    }

    pub fn t2(&self) -> &T2Map<T> {
        &self.t2
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.spins
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| Error::UnknownTarget(label.to_string()))
    }

    pub fn coupling(&self, i: usize, j: usize) -> T {
        self.couplings[i][j]
    }

    pub fn coupling_by_label(&self, a: &str, b: &str) -> Result<T> {
        Ok(self.couplings[self.index_of(a)?][self.index_of(b)?])
    }

    pub fn set_shift(&mut self, k: usize, shift_hz: T) {
        self.spins[k].shift_hz = shift_hz;
    }

    pub fn set_gamma(&mut self, k: usize, gamma: Ratio<i64>) -> Result<()> {
        if !gamma.is_positive() {
            return Err(Error::Validation("gamma must be positive".into()));
        }
        self.spins[k].gamma = gamma;
        Ok(())
    }

    pub fn weights(&self) -> Weights {
        Weights::new(self.spins.iter().map(|s| s.gamma).collect()).expect("validated gammas are positive")
    }

    /// Spins addressed by `name`: an exact label, else every spin of that species.
    pub fn resolve(&self, name: &str) -> Result<Vec<usize>> {
        if let Ok(k) = self.index_of(name) {
            return Ok(vec![k]);
        }
        let v: Vec<usize> = (0..self.len()).filter(|&k| self.spins[k].species.as_deref() == Some(name)).collect();
        if v.is_empty() {
            Err(Error::UnknownTarget(name.to_string()))
        } else {
            Ok(v)
        }
    }

    /// Groups of magnetically equivalent spins: equal γ, equal shift and equal
    /// couplings to every spin outside the pair. Singletons are omitted.
    pub fn equivalent_groups(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let equiv = |i: usize, j: usize| {
            self.spins[i].gamma == self.spins[j].gamma
                && self.spins[i].shift_hz == self.spins[j].shift_hz
                && (0..n).filter(|&k| k != i && k != j).all(|k| self.couplings[i][k] == self.couplings[j][k])
        };
        let mut assigned = vec![false; n];
        let mut groups = Vec::new();
        for i in 0..n {
            if assigned[i] {
                continue;
            }
            let g: Vec<usize> = (i..n).filter(|&j| !assigned[j] && (j == i || equiv(i, j))).collect();
            for &j in &g {
                assigned[j] = true;
            }
            if g.len() > 1 {
                groups.push(g);
            }
        }
        groups
    }

    /// Relaxation family of a ladder pattern; `None` for purely longitudinal terms.
    ///
    /// One transverse spin is `SQ`. With exactly two distinct γ weights
    /// (heavy `h`, light `l`) the methyl families are recognized by weighted
    /// order: `|3h+l|` QQ, `|3h−l|` DQ1, `|h+l|` DQ2, `|h−l|` ZQ. Everything
    /// else is `Default`.
    pub fn coherence_label(&self, ladder: &Ladder) -> Option<CoherenceLabel> {
        match ladder.transverse() {
            0 => return None,
            1 => return Some(CoherenceLabel::SQ),
            _ => {}
        }
        let Some((h, l)) = self.two_weight_split() else {
            return Some(CoherenceLabel::Default);
        };
        let o = ladder.order(&self.weights()).abs();
        let three = Ratio::from_integer(3);
        let label = if o == three * h + l {
            CoherenceLabel::QQ
        } else if o == three * h - l {
            CoherenceLabel::DQ1
        } else if o == h + l {
            CoherenceLabel::DQ2
        } else if o == h - l {
            CoherenceLabel::ZQ
        } else {
            CoherenceLabel::Default
        };
        Some(label)
    }

    fn two_weight_split(&self) -> Option<(Ratio<i64>, Ratio<i64>)> {
        let mut w: Vec<Ratio<i64>> = self.spins.iter().map(|s| s.gamma).collect();
        w.sort();
        w.dedup();
        (w.len() == 2).then(|| (w[1], w[0]))
    }

    /// γ-weighted order of the methyl families for a two-weight system.
    pub fn family_order(&self, label: CoherenceLabel) -> Option<Ratio<i64>> {
        let (h, l) = self.two_weight_split()?;
        let three = Ratio::from_integer(3);
        match label {
            CoherenceLabel::QQ => Some(three * h + l),
            CoherenceLabel::DQ1 => Some(three * h - l),
            CoherenceLabel::DQ2 => Some(h + l),
            CoherenceLabel::ZQ => Some(h - l),
            _ => None,
        }
    }
}

/// Parses `4`, `3/2` or `3.976` into an exact positive-or-negative ratio.
pub fn parse_ratio(s: &str) -> Option<Ratio<i64>> {
    if let Some((p, q)) = s.split_once('/') {
        let (p, q): (i64, i64) = (p.trim().parse().ok()?, q.trim().parse().ok()?);
        return (q != 0).then(|| Ratio::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) || frac.len() > 12 {
            return None;
        }
        let neg = int.starts_with('-');
        let ip: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().ok()? };
        let den = 10i64.checked_pow(frac.len() as u32)?;
        let fp: i64 = frac.parse().ok()?;
        let num = ip.abs().checked_mul(den)?.checked_add(fp)?;
        return Some(Ratio::new(if neg { -num } else { num }, den));
    }
    s.parse::<i64>().ok().map(Ratio::from_integer)
}

pub fn ratio_to_f64(r: &Ratio<i64>) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
