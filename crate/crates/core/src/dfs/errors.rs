//! Collective error families and the checks run against them.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pauli::{conjugate_by_pauli, Letter, OperatorSum, PauliString};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyTag {
    /// Errors acting identically on the three methyl protons.
    En,
    /// Errors acting on a proper subset of the protons.
    Em,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyTag::En => "En",
            FamilyTag::Em => "Em",
        })
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "en" => Ok(FamilyTag::En),
            "em" => Ok(FamilyTag::Em),
            _ => Err(Error::InvalidArgument(format!("unknown error family `{s}` (expected en or em)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorFamily {
    pub tag: FamilyTag,
    pub members: Vec<PauliString>,
}

pub const EN_MEMBERS: [&str; 8] = ["EEEE", "EEEZ", "ZZZE", "ZZZZ", "XXXX", "XXXY", "YYYX", "YYYY"];

/// Support patterns of the `Em` templates over `(I1, I2, I3, S)`; each slot
/// marked `true` carries an independent letter from `{X, Y, Z}`.
const EM_TEMPLATES: [[bool; 4]; 12] = [
    [true, false, false, false],
    [false, true, false, false],
    [false, false, true, false],
    [true, true, false, false],
    [true, false, true, false],
    [false, true, true, false],
    [true, false, false, true],
    [false, false, true, true],
    [false, true, false, true],
    [true, true, false, true],
    [true, false, true, true],
    [false, true, true, true],
];

pub fn error_family(tag: FamilyTag) -> ErrorFamily {
    let members = match tag {
        FamilyTag::En => EN_MEMBERS.iter().map(|s| s.parse().expect("static string")).collect(),
        FamilyTag::Em => {
            let mut v = Vec::new();
            for t in EM_TEMPLATES {
                let slots: Vec<usize> = (0..4).filter(|&k| t[k]).collect();
                let count = 3usize.pow(slots.len() as u32);
                for mut code in 0..count {
                    let mut p = PauliString::identity(4);
                    for &k in &slots {
                        p = p.with_letter(k, Letter::NON_IDENTITY[code % 3]);
                        code /= 3;
                    }
                    v.push(p);
                }
            }
            v
        }
    };
    ErrorFamily { tag, members }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EigenSign {
    Plus,
    Minus,
    NotEigen,
}

impl fmt::Display for EigenSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EigenSign::Plus => "+1",
            EigenSign::Minus => "-1",
            EigenSign::NotEigen => "not-eigen",
        })
    }
}

/// `λ` with `P ρ P = λ ρ` (exact coefficient comparison), if any.
pub fn eigenoperator_check<T: Real>(rho: &OperatorSum<T>, p: &PauliString) -> Result<EigenSign> {
    let img = conjugate_by_pauli(rho, p)?;
    if img == *rho {
        Ok(EigenSign::Plus)
    } else if img == -rho {
        Ok(EigenSign::Minus)
    } else {
        Ok(EigenSign::NotEigen)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Symmetric,
    Asymmetric,
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::Symmetric => "symmetric",
            Symmetry::Asymmetric => "asymmetric",
        })
    }
}

/// All permutations of `items` (Heap's algorithm).
pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            if k % 2 == 0 {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
    }
    let mut a = items.to_vec();
    let mut out = Vec::new();
    heap(a.len(), &mut a, &mut out);
    out
}

/// Moves the letter at `from[i]` to `to[i]`; other spins untouched.
pub fn permute_string(p: &PauliString, from: &[usize], to: &[usize]) -> PauliString {
    let mut q = *p;
    for (&f, &t) in from.iter().zip(to) {
        q = q.with_letter(t, p.letter(f));
    }
    q
}

/// Symmetric iff `p` is fixed by every permutation of the `protons` positions.
pub fn permutation_symmetry_check(p: &PauliString, protons: &[usize]) -> Result<Symmetry> {
    if let Some(&k) = protons.iter().find(|&&k| k >= p.len()) {
        return Err(Error::InvalidArgument(format!("proton index {k} outside {} spins", p.len())));
    }
    let fixed = permutations(protons).iter().all(|perm| permute_string(p, protons, perm) == *p);
    Ok(if fixed { Symmetry::Symmetric } else { Symmetry::Asymmetric })
}

/// Image of an operator under a relabelling of spins.
pub fn permute_operator<T: Real>(op: &OperatorSum<T>, from: &[usize], to: &[usize]) -> OperatorSum<T> {
    op.map_strings(op.n_spins(), |p| (num_complex::Complex::new(T::one(), T::zero()), permute_string(p, from, to)))
}
