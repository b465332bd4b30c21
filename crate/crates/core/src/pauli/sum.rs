use std::collections::btree_map::{self, BTreeMap};
use std::fmt::{self, Write as _};
use std::ops::{Add, Neg, Sub};

use num_complex::Complex;

use super::string::{pauli_product, Letter, PauliString};
use crate::error::{check_len, Error, Result};
use crate::scalar::{abs, c, i_pow, Real};

/// Linear combination of Pauli strings with complex coefficients.
///
/// Terms are kept in canonical (lexicographic) order and coefficients at or
/// below [`Real::prune_epsilon`] are dropped after every operation.
#[derive(Clone, PartialEq)]
pub struct OperatorSum<T: Real> {
    n: usize,
    terms: BTreeMap<PauliString, Complex<T>>,
}

impl<T: Real> OperatorSum<T> {
    pub fn zero(n: usize) -> Self {
        OperatorSum { n, terms: BTreeMap::new() }
    }

    /// The identity operator `E…E` with unit coefficient.
    pub fn identity(n: usize) -> Self {
        Self::term(Complex::new(T::one(), T::zero()), PauliString::identity(n))
    }

    pub fn term(coeff: Complex<T>, p: PauliString) -> Self {
        let mut s = Self::zero(p.len());
        s.add_term(coeff, p);
        s
    }

    pub fn real_term(coeff: T, p: PauliString) -> Self {
        Self::term(Complex::new(coeff, T::zero()), p)
    }

    /// Spin operator `I_a = σ_a / 2` on spin `k`.
    pub fn spin_op(n: usize, k: usize, letter: Letter) -> Self {
        let half = T::lit(0.5);
        Self::real_term(if letter == Letter::E { T::one() } else { half }, PauliString::single(n, k, letter))
    }

    /// Product operator `Π I_{a_k}` over the listed spins, e.g. `Ix Iy Iy Sy`.
    pub fn product_op(n: usize, factors: &[(usize, Letter)]) -> Self {
        let mut p = PauliString::identity(n);
        let mut scale = T::one();
        for &(k, l) in factors {
            assert!(p.letter(k) == Letter::E, "spin {k} repeated in product operator");
            p = p.with_letter(k, l);
            if l != Letter::E {
                scale *= T::lit(0.5);
            }
        }
        Self::real_term(scale, p)
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Complex<T>, PauliString)>,
    {
        let mut s = Self::zero(n);
        for (coeff, p) in terms {
            check_len(n, p.len())?;
            s.add_term(coeff, p);
        }
        Ok(s)
    }

    pub fn n_spins(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, PauliString, Complex<T>> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &PauliString) -> Complex<T> {
        self.terms.get(p).copied().unwrap_or_else(Complex::default)
    }

    /// Adds `coeff · p` in place, pruning the term if it cancels.
    pub fn add_term(&mut self, coeff: Complex<T>, p: PauliString) {
        assert_eq!(p.len(), self.n, "term length must match the operator");
        let eps = T::prune_epsilon();
        match self.terms.entry(p) {
            btree_map::Entry::Occupied(mut e) => {
                let v = *e.get() + coeff;
                if abs(v) <= eps {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            btree_map::Entry::Vacant(e) => {
                if abs(coeff) > eps {
                    e.insert(coeff);
                }
            }
        }
    }

    pub fn scale(&self, k: Complex<T>) -> Self {
        let mut out = Self::zero(self.n);
        for (p, &v) in &self.terms {
            out.add_term(v * k, *p);
        }
        out
    }

    pub fn scale_real(&self, k: T) -> Self {
        self.scale(Complex::new(k, T::zero()))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_len(self.n, other.n)?;
        let mut out = self.clone();
        for (p, &v) in &other.terms {
            out.add_term(v, *p);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale_real(-T::one()))
    }

    /// Operator product `self · other`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        check_len(self.n, other.n)?;
        let mut out = Self::zero(self.n);
        for (pa, &va) in &self.terms {
            for (pb, &vb) in &other.terms {
                let (ph, s) = pauli_product(pa, pb)?;
                out.add_term(va * vb * i_pow::<T>(ph.power()), s);
            }
        }
        Ok(out)
    }

    /// Hermitian adjoint; Pauli strings are Hermitian so only coefficients conjugate.
    pub fn dagger(&self) -> Self {
        OperatorSum { n: self.n, terms: self.terms.iter().map(|(p, v)| (*p, v.conj())).collect() }
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.terms.values().all(|v| v.im.abs() <= tol)
    }

    /// Hilbert–Schmidt inner product `Tr(a† b) / 2ⁿ`.
    pub fn hs_inner(&self, other: &Self) -> Result<Complex<T>> {
        check_len(self.n, other.n)?;
        let mut acc = Complex::default();
        for (p, &va) in &self.terms {
            if let Some(&vb) = other.terms.get(p) {
                acc += va.conj() * vb;
            }
        }
        Ok(acc)
    }

    pub fn hs_norm(&self) -> T {
        self.terms.values().fold(T::zero(), |acc, v| acc + v.norm_sqr()).sqrt()
    }

    /// HS distance `‖a − b‖`.
    pub fn hs_distance(&self, other: &Self) -> Result<T> {
        Ok(self.try_sub(other)?.hs_norm())
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> T {
        self.terms.values().fold(T::zero(), |m, v| m.max(abs(*v)))
    }

    /// Normalized trace `Tr(a) / 2ⁿ`, i.e. the identity coefficient.
    pub fn normalized_trace(&self) -> Complex<T> {
        self.coefficient(&PauliString::identity(self.n))
    }

    /// Scaled to unit HS norm; the zero operator is returned unchanged.
    pub fn normalized(&self) -> Self {
        let nrm = self.hs_norm();
        if nrm == T::zero() {
            self.clone()
        } else {
            self.scale_real(T::one() / nrm)
        }
    }

    /// Applies `f` to every Pauli string, keeping coefficients.
    pub fn map_strings<F>(&self, n: usize, mut f: F) -> Self
    where
        F: FnMut(&PauliString) -> (Complex<T>, PauliString),
    {
        let mut out = Self::zero(n);
        for (p, &v) in &self.terms {
            let (k, q) = f(p);
            out.add_term(v * k, q);
        }
        out
    }

    /// Embeds into an `n`-spin operator, spin `k` of `self` landing on `positions[k]`.
    pub fn embed(&self, n: usize, positions: &[usize]) -> Result<Self> {
        let mut out = Self::zero(n);
        for (p, &v) in &self.terms {
            out.add_term(v, p.embed(n, positions)?);
        }
        Ok(out)
    }

    /// Writes the canonical text form: `<re> <im> <letters>` per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (p, v) in &self.terms {
            // adding zero turns -0 into 0 so the text stays byte-stable
            let _ = writeln!(s, "{} {} {}", v.re + T::zero(), v.im + T::zero(), p);
        }
        s
    }

    /// Parses the text form; `#` starts a comment, repeated strings add up.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut terms = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| Error::Syntax { line: idx + 1, message };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(syntax(format!("expected `<re> <im> <letters>`, got `{line}`")));
            }
            let re: f64 = fields[0].parse().map_err(|_| syntax(format!("bad real part `{}`", fields[0])))?;
            let im: f64 = fields[1].parse().map_err(|_| syntax(format!("bad imaginary part `{}`", fields[1])))?;
            let p: PauliString = fields[2].parse().map_err(|e: Error| syntax(e.to_string()))?;
            match n {
                None => n = Some(p.len()),
                Some(m) if m != p.len() => {
                    return Err(syntax(format!("string `{}` has {} spins, expected {m}", fields[2], p.len())))
                }
                _ => {}
            }
            terms.push((c(T::lit(re), T::lit(im)), p));
        }
        let n = n.ok_or_else(|| Error::Syntax { line: 0, message: "no terms".into() })?;
        Self::from_terms(n, terms)
    }
}

impl<T: Real> fmt::Debug for OperatorSum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OperatorSum[{}]{{", self.n)?;
        for (i, (p, v)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({}{:+}i){}", v.re, v.im, p)?;
        }
        f.write_str("}")
    }
}

impl<T: Real> Add for &OperatorSum<T> {
    type Output = OperatorSum<T>;

    fn add(self, rhs: Self) -> OperatorSum<T> {
        self.try_add(rhs).expect("operator lengths must match")
    }
}

impl<T: Real> Sub for &OperatorSum<T> {
    type Output = OperatorSum<T>;

    fn sub(self, rhs: Self) -> OperatorSum<T> {
        self.try_sub(rhs).expect("operator lengths must match")
    }
}

impl<T: Real> Neg for &OperatorSum<T> {
    type Output = OperatorSum<T>;

    fn neg(self) -> OperatorSum<T> {
        self.scale_real(-T::one())
    }
}

/// `p · rho · p` for a Pauli string `p`: each term keeps or flips its sign.
pub fn conjugate_by_pauli<T: Real>(rho: &OperatorSum<T>, p: &PauliString) -> Result<OperatorSum<T>> {
    check_len(rho.n_spins(), p.len())?;
    Ok(rho.map_strings(rho.n_spins(), |q| {
        let sign = if q.commutes_with(p) { T::one() } else { -T::one() };
        (Complex::new(sign, T::zero()), *q)
    }))
}

/// Hilbert–Schmidt inner product `Tr(a† b) / 2ⁿ`.
pub fn hs_inner<T: Real>(a: &OperatorSum<T>, b: &OperatorSum<T>) -> Result<Complex<T>> {
    a.hs_inner(b)
}
