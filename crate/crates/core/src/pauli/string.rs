use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{check_len, Error, Result};

/// Maximum number of spins a [`PauliString`] can address.
pub const MAX_SPINS: usize = 64;

/// Single-spin Pauli letter. `E` is the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    E,
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::E, Letter::X, Letter::Y, Letter::Z];
    pub const NON_IDENTITY: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::E => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::E,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::E => 'E',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(ch: char) -> Option<Letter> {
        match ch {
            'E' | 'I' => Some(Letter::E),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }

    /// Product `self · other` as `(i^k, letter)`.
    pub fn mul(self, other: Letter) -> (Phase, Letter) {
        use Letter::*;
        let (k, l) = match (self, other) {
            (E, b) => (0, b),
            (a, E) => (0, a),
            (a, b) if a == b => (0, E),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        };
        (Phase(k), l)
    }
}

/// A power of `i`: one of {+1, +i, -1, -i}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: u8) -> Phase {
        Phase(k % 4)
    }

    /// Exponent `k` in `i^k`.
    pub fn power(self) -> u8 {
        self.0
    }

    pub fn mul(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+1", "+i", "-1", "-i"][self.0 as usize])
    }
}

/// Tensor product of single-spin Pauli letters over a fixed number of spins.
///
/// Stored as symplectic bit masks: spin `k` maps to bit `k` of `x` and `z`
/// (X = x, Z = z, Y = x and z).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: u8,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_SPINS, "at most {MAX_SPINS} spins");
        PauliString { n: n as u8, x: 0, z: 0 }
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut p = PauliString::identity(letters.len());
        for (k, &l) in letters.iter().enumerate() {
            p.set(k, l);
        }
        p
    }

    /// Identity everywhere except `letter` on spin `k`.
    pub fn single(n: usize, k: usize, letter: Letter) -> Self {
        let mut p = PauliString::identity(n);
        p.set(k, letter);
        p
    }

    /// Build from raw masks; bits above `n` must be clear.
    pub fn from_masks(n: usize, x: u64, z: u64) -> Self {
        assert!(n <= MAX_SPINS);
        let mask = full_mask(n);
        assert!(x & !mask == 0 && z & !mask == 0, "mask bits beyond n");
        PauliString { n: n as u8, x, z }
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn letter(&self, k: usize) -> Letter {
        assert!(k < self.len());
        Letter::from_bits(self.x >> k & 1 == 1, self.z >> k & 1 == 1)
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.len()).map(|k| self.letter(k)).collect()
    }

    pub fn with_letter(mut self, k: usize, letter: Letter) -> Self {
        self.set(k, letter);
        self
    }

    fn set(&mut self, k: usize, letter: Letter) {
        assert!(k < self.len());
        let (xb, zb) = letter.bits();
        self.x = (self.x & !(1 << k)) | ((xb as u64) << k);
        self.z = (self.z & !(1 << k)) | ((zb as u64) << k);
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    /// Number of Y letters.
    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        // symplectic form: anticommuting positions have x1 z2 + z1 x2 odd
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Restrict to the spins listed in `positions`, in that order.
    pub fn select(&self, positions: &[usize]) -> PauliString {
        PauliString::from_letters(&positions.iter().map(|&k| self.letter(k)).collect::<Vec<_>>())
    }

    /// Place `self` into an `n`-spin string, spin `k` of `self` landing on `positions[k]`.
    pub fn embed(&self, n: usize, positions: &[usize]) -> Result<PauliString> {
        check_len(self.len(), positions.len())?;
        let mut out = PauliString::identity(n);
        for (k, &pos) in positions.iter().enumerate() {
            if pos >= n {
                return Err(Error::InvalidArgument(format!("position {pos} outside {n} spins")));
            }
            out.set(pos, self.letter(k));
        }
        Ok(out)
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Pauli group product: returns `(phase, s)` with `a · b = phase · s`.
pub fn pauli_product(a: &PauliString, b: &PauliString) -> Result<(Phase, PauliString)> {
    check_len(a.len(), b.len())?;
    let mut k = 0u8;
    for s in 0..a.len() {
        let (p, _) = a.letter(s).mul(b.letter(s));
        k += p.power();
    }
    let s = PauliString { n: a.n, x: a.x ^ b.x, z: a.z ^ b.z };
    Ok((Phase::from_power(k), s))
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for k in 0..self.len() {
                match self.letter(k).cmp(&other.letter(k)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.len() {
            write!(f, "{}", self.letter(k).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|ch| {
                Letter::from_char(ch)
                    .ok_or_else(|| Error::InvalidArgument(format!("bad Pauli letter `{ch}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() || letters.len() > MAX_SPINS {
            return Err(Error::InvalidArgument(format!("Pauli string `{s}` must have 1..={MAX_SPINS} letters")));
        }
        Ok(PauliString::from_letters(&letters))
    }
}
