use super::state::StateOp;
use crate::error::{check_len, Error, Result};
use crate::pauli::{ladder_partition, OperatorSum};
use crate::scalar::Real;
use crate::spin::SpinSystem;

/// Scales each coherence family by `exp(−dt/T₂(label))`; longitudinal terms are untouched.
pub fn apply_relaxation<T: Real>(state: &StateOp<T>, system: &SpinSystem<T>, dt: T) -> Result<StateOp<T>> {
    if !(dt >= T::zero()) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("relaxation interval must be non-negative, got {dt}")));
    }
    check_len(system.len(), state.n_spins())?;
    if dt == T::zero() {
        return Ok(state.clone());
    }
    let parts = ladder_partition(&state.operator, |l| system.coherence_label(l));
    let mut out = OperatorSum::zero(state.n_spins());
    for (label, comp) in parts {
        let f = match label {
            None => T::one(),
            Some(l) => (-dt / system.t2().get(l)).exp(),
        };
        out = &out + &comp.scale_real(f);
    }
    Ok(StateOp { operator: out, time: state.time })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Letter;
    use crate::spin::{preset_alanine, CoherenceLabel, T2Map};

    type Op = OperatorSum<f64>;

    #[test]
    fn uniform_t2_is_a_global_scale_on_transverse_terms() {
        let sys = preset_alanine::<f64>().with_t2_map(T2Map::uniform(0.2)).unwrap();
        let rho = Op::product_op(5, &[(0, Letter::Y), (1, Letter::X), (2, Letter::Y), (3, Letter::Y)]).scale_real(8.0);
        let got = apply_relaxation(&StateOp::new(rho.clone()), &sys, 0.05).unwrap().operator;
        assert!(got.hs_distance(&rho.scale_real((-0.25f64).exp())).unwrap() < 1e-14);
    }

    #[test]
    fn zero_interval_and_longitudinal_terms_unchanged() {
        let sys = preset_alanine::<f64>().with_t2_map(T2Map::uniform(0.01)).unwrap();
        let z = Op::spin_op(5, 4, Letter::Z);
        assert_eq!(apply_relaxation(&StateOp::new(z.clone()), &sys, 1.0).unwrap().operator, z);
        let x = Op::spin_op(5, 4, Letter::X);
        assert_eq!(apply_relaxation(&StateOp::new(x.clone()), &sys, 0.0).unwrap().operator, x);
    }

    #[test]
    fn single_quantum_uses_sq_entry() {
        let sys = preset_alanine::<f64>().with_t2(CoherenceLabel::SQ, 0.1).unwrap();
        let x = Op::spin_op(5, 4, Letter::X);
        let got = apply_relaxation(&StateOp::new(x.clone()), &sys, 0.1).unwrap().operator;
        assert!(got.hs_distance(&x.scale_real((-1.0f64).exp())).unwrap() < 1e-14);
    }
}
