//! Dense `2ⁿ × 2ⁿ` realization of operator sums.
//!
//! Basis index bits are big-endian in spin order: spin 0 is the most
//! significant tensor factor, and bit value 0 is `m = +½`.

use nalgebra::DMatrix;
use num_complex::Complex;

use super::string::PauliString;
use super::sum::OperatorSum;
use crate::error::{check_len, Error, Result};
use crate::scalar::{i_pow, Real};

/// Largest spin count accepted by the dense routines.
pub const DENSE_SPIN_CAP: usize = 12;

pub type CMatrix<T> = DMatrix<Complex<T>>;

pub(crate) fn check_cap(n: usize) -> Result<()> {
    if n > DENSE_SPIN_CAP {
        Err(Error::DimensionCap { spins: n, cap: DENSE_SPIN_CAP })
    } else {
        Ok(())
    }
}

/// Symbolic spin-bit mask to basis-index mask.
fn index_mask(n: usize, m: u64) -> usize {
    let mut out = 0usize;
    for k in 0..n {
        if m >> k & 1 == 1 {
            out |= 1 << (n - 1 - k);
        }
    }
    out
}

fn parity(v: usize) -> bool {
    v.count_ones() % 2 == 1
}

/// Element `⟨row| P |col⟩` of a Pauli string; zero unless `row = col ⊕ x`.
pub fn pauli_element<T: Real>(p: &PauliString, row: usize, col: usize) -> Complex<T> {
    let n = p.len();
    let xm = index_mask(n, p.x_mask());
    if row != col ^ xm {
        return Complex::default();
    }
    let zm = index_mask(n, p.z_mask());
    let ph = i_pow::<T>((p.y_count() % 4) as u8);
    if parity(col & zm) {
        -ph
    } else {
        ph
    }
}

/// Kronecker-product realization of `a`.
pub fn to_matrix<T: Real>(a: &OperatorSum<T>) -> Result<CMatrix<T>> {
    let n = a.n_spins();
    check_cap(n)?;
    let dim = 1usize << n;
    let mut m = CMatrix::<T>::zeros(dim, dim);
    for (p, &v) in a.iter() {
        let xm = index_mask(n, p.x_mask());
        let zm = index_mask(n, p.z_mask());
        let ph = i_pow::<T>((p.y_count() % 4) as u8) * v;
        for col in 0..dim {
            let val = if parity(col & zm) { -ph } else { ph };
            m[(col ^ xm, col)] += val;
        }
    }
    Ok(m)
}

/// Pauli-basis projection `c_P = Tr(P M) / 2ⁿ`, computed with one
/// Walsh–Hadamard transform per x-mask.
pub fn from_matrix<T: Real>(m: &CMatrix<T>) -> Result<OperatorSum<T>> {
    let dim = m.nrows();
    if m.ncols() != dim || !dim.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("matrix {}x{} is not 2^n square", dim, m.ncols())));
    }
    let n = dim.trailing_zeros() as usize;
    check_cap(n)?;
    let scale = T::one() / T::lit(dim as f64);
    let mut out = OperatorSum::zero(n);
    let mut buf = vec![Complex::<T>::default(); dim];
    for xm in 0..dim {
        // f(b) = M[b, b ⊕ x];  Tr(P M) = i^{#Y} Σ_b (−1)^{b·z} M[b, b ⊕ x]
        for (b, slot) in buf.iter_mut().enumerate() {
            *slot = m[(b, b ^ xm)];
        }
        walsh_hadamard(&mut buf);
        for (zm, &v) in buf.iter().enumerate() {
            let y = (xm & zm).count_ones();
            let coeff = i_pow::<T>((y % 4) as u8) * v * scale;
            out.add_term(coeff, PauliString::from_masks(n, spin_mask(n, xm), spin_mask(n, zm)));
        }
    }
    Ok(out)
}

fn spin_mask(n: usize, idx: usize) -> u64 {
    let mut out = 0u64;
    for k in 0..n {
        if idx >> (n - 1 - k) & 1 == 1 {
            out |= 1 << k;
        }
    }
    out
}

fn walsh_hadamard<T: Real>(a: &mut [Complex<T>]) {
    let mut h = 1;
    while h < a.len() {
        for i in (0..a.len()).step_by(2 * h) {
            for j in i..i + h {
                let (u, v) = (a[j], a[j + h]);
                a[j] = u + v;
                a[j + h] = u - v;
            }
        }
        h *= 2;
    }
}

/// `Tr(a† b) / 2ⁿ` evaluated on dense matrices.
pub fn dense_hs_inner<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<Complex<T>> {
    check_len(a.nrows(), b.nrows())?;
    let mut acc = Complex::default();
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x.conj() * y;
    }
    Ok(acc / T::lit(a.nrows() as f64))
}

/// Matrix element `⟨row| a |col⟩` without building the dense matrix.
pub fn matrix_element<T: Real>(a: &OperatorSum<T>, row: usize, col: usize) -> Complex<T> {
    a.iter().fold(Complex::default(), |acc, (p, &v)| acc + v * pauli_element::<T>(p, row, col))
}

/// Conjugation `U ρ U†` on dense matrices.
pub fn conjugate<T: Real>(u: &CMatrix<T>, rho: &CMatrix<T>) -> CMatrix<T> {
    u * rho * u.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Letter;
    use crate::scalar::c;

    type Op = OperatorSum<f64>;

    #[test]
    fn iz_is_half_sigma_z() {
        let m = to_matrix(&Op::spin_op(1, 0, Letter::Z)).unwrap();
        assert_eq!(m[(0, 0)], c(0.5, 0.0));
        assert_eq!(m[(1, 1)], c(-0.5, 0.0));
        assert_eq!(m[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn sigma_y_layout() {
        let m = to_matrix(&Op::real_term(1.0, "Y".parse().unwrap())).unwrap();
        assert_eq!(m[(0, 1)], c(0.0, -1.0));
        assert_eq!(m[(1, 0)], c(0.0, 1.0));
    }

    #[test]
    fn identity_string_is_identity_matrix() {
        let m = to_matrix(&Op::identity(3)).unwrap();
        assert_eq!(m, CMatrix::<f64>::identity(8, 8));
    }

    #[test]
    fn spin_zero_is_most_significant() {
        // Z on spin 0 of two spins: diag(1, 1, -1, -1)
        let m = to_matrix(&Op::real_term(1.0, "ZE".parse().unwrap())).unwrap();
        let d: Vec<f64> = (0..4).map(|i| m[(i, i)].re).collect();
        assert_eq!(d, [1.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn projection_round_trips() {
        let a = Op::from_terms(
            3,
            [(c(0.5, 0.0), "XYZ".parse().unwrap()), (c(0.0, -0.25), "EYY".parse().unwrap()), (c(1.0, 0.0), "ZEE".parse().unwrap())],
        )
        .unwrap();
        let back = from_matrix(&to_matrix(&a).unwrap()).unwrap();
        assert!(back.hs_distance(&a).unwrap() < 1e-14);
    }

    #[test]
    fn cap_is_enforced() {
        let big = Op::identity(DENSE_SPIN_CAP + 1);
        assert!(matches!(to_matrix(&big), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn sparse_elements_match_dense() {
        let a = Op::from_terms(2, [(c(0.5, 0.1), "XY".parse().unwrap()), (c(0.3, 0.0), "ZX".parse().unwrap())]).unwrap();
        let m = to_matrix(&a).unwrap();
        for r in 0..4 {
            for col in 0..4 {
                assert!((matrix_element(&a, r, col) - m[(r, col)]).norm() < 1e-15);
            }
        }
    }
}
