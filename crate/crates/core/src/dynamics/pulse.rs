use nalgebra::Matrix2;

use super::state::{PulseEvent, StateOp};
use crate::error::Result;
use crate::pauli::{dense, from_matrix, to_matrix, CMatrix, Letter, OperatorSum, PauliString};
use crate::scalar::{c, Real};
use crate::spin::SpinSystem;

fn letter_axis(l: Letter) -> usize {
    match l {
        Letter::X => 0,
        Letter::Y => 1,
        Letter::Z => 2,
        Letter::E => unreachable!(),
    }
}

const AXES: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

/// Image of the unit vector along `axis` under rotation by `theta` about
/// `(cos φ, sin φ, 0)` (Rodrigues).
fn rotate_axis<T: Real>(axis: usize, theta: T, phi: T) -> [T; 3] {
    let n = [phi.cos(), phi.sin(), T::zero()];
    let mut v = [T::zero(); 3];
    v[axis] = T::one();
    let (cs, sn) = (theta.cos(), theta.sin());
    let cross = [n[1] * v[2] - n[2] * v[1], n[2] * v[0] - n[0] * v[2], n[0] * v[1] - n[1] * v[0]];
    let dot = n[axis];
    let mut out = [T::zero(); 3];
    for i in 0..3 {
        out[i] = v[i] * cs + cross[i] * sn + n[i] * dot * (T::one() - cs);
    }
    out
}

/// Rotates spin `k` of every term symbolically.
pub fn rotate_spin<T: Real>(rho: &OperatorSum<T>, k: usize, theta: T, phi: T) -> OperatorSum<T> {
    let images: Vec<[T; 3]> = (0..3).map(|a| rotate_axis(a, theta, phi)).collect();
    let mut out = OperatorSum::zero(rho.n_spins());
    for (p, &v) in rho.iter() {
        let l = p.letter(k);
        if l == Letter::E {
            out.add_term(v, *p);
            continue;
        }
        let img = &images[letter_axis(l)];
        for (b, &w) in img.iter().enumerate() {
            if w != T::zero() {
                out.add_term(v * w, p.with_letter(k, AXES[b]));
            }
        }
    }
    out
}

/// Symbolic pulse: each target letter is rotated as a vector, so the result
/// is exact for any angle.
pub fn apply_pulse<T: Real>(state: &StateOp<T>, e: &PulseEvent<T>, system: &SpinSystem<T>) -> Result<StateOp<T>> {
    let targets = e.resolve(system)?;
    crate::error::check_len(system.len(), state.n_spins())?;
    Ok(StateOp { operator: apply_rotation(&state.operator, &targets, e.angle, e.phase.radians()), time: state.time })
}

pub fn apply_rotation<T: Real>(rho: &OperatorSum<T>, targets: &[usize], theta: T, phi: T) -> OperatorSum<T> {
    targets.iter().fold(rho.clone(), |acc, &k| rotate_spin(&acc, k, theta, phi))
}

/// Dense propagator `⊗_k R_k` with `R_k = cos(θ/2) − i sin(θ/2)(cos φ σx + sin φ σy)` on targets.
pub fn pulse_matrix<T: Real>(n: usize, targets: &[usize], theta: T, phi: T) -> Result<CMatrix<T>> {
    dense::check_cap(n)?;
    let half = theta / T::lit(2.0);
    let (ch, sh) = (half.cos(), half.sin());
    let (cp, sp) = (phi.cos(), phi.sin());
    let zero = T::zero();
    // −i sh (cp σx + sp σy): off-diagonal (0,1) = −i sh (cp − i sp) = −sh sp − i sh cp
    let r = Matrix2::new(c(ch, zero), c(-sh * sp, -sh * cp), c(sh * sp, -sh * cp), c(ch, zero));
    let eye = Matrix2::new(c(T::one(), zero), c(zero, zero), c(zero, zero), c(T::one(), zero));
    let mut out = CMatrix::<T>::identity(1, 1);
    for k in 0..n {
        let f = if targets.contains(&k) { r } else { eye };
        let f = CMatrix::from_fn(2, 2, |i, j| f[(i, j)]);
        out = out.kronecker(&f);
    }
    Ok(out)
}

/// Dense pulse application, valid for any angle.
pub fn apply_pulse_dense<T: Real>(state: &StateOp<T>, e: &PulseEvent<T>, system: &SpinSystem<T>) -> Result<StateOp<T>> {
    let targets = e.resolve(system)?;
    crate::error::check_len(system.len(), state.n_spins())?;
    let r = pulse_matrix(system.len(), &targets, e.angle, e.phase.radians())?;
    let rho = dense::conjugate(&r, &to_matrix(&state.operator)?);
    Ok(StateOp { operator: from_matrix(&rho)?, time: state.time })
}

/// Conjugation by an error string `P ρ P`, recorded as an instantaneous step.
pub fn apply_error<T: Real>(state: &StateOp<T>, p: &PauliString) -> Result<StateOp<T>> {
    Ok(StateOp { operator: crate::pauli::conjugate_by_pauli(&state.operator, p)?, time: state.time })
}
