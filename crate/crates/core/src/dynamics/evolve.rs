use super::state::StateOp;
use crate::error::{check_len, Error, Result};
use crate::pauli::{dense, from_matrix, pauli_product, to_matrix, CMatrix, OperatorSum};
use crate::scalar::{c, i_pow, Real};
use crate::spin::Hamiltonian;

fn check_time<T: Real>(t: T) -> Result<()> {
    if t >= T::zero() && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("evolution time must be finite and non-negative, got {t}")))
    }
}

/// Closed-form evolution under a secular (all-`Z`) Hamiltonian.
///
/// For each term `a·Q`, strings commuting with `Q` are untouched and
/// anticommuting ones rotate as `P → cos(2at) P − i sin(2at) Q·P`.
pub fn evolve_analytic<T: Real>(state: &StateOp<T>, h: &Hamiltonian<T>, t: T) -> Result<StateOp<T>> {
    check_time(t)?;
    check_len(state.n_spins(), h.n_spins())?;
    let terms = h.secular_terms()?;
    let n = state.n_spins();
    let mut rho = state.operator.clone();
    let two = T::lit(2.0);
    for (q, a) in terms {
        let ang = two * a * t;
        let (cs, sn) = (ang.cos(), ang.sin());
        let mut next = OperatorSum::zero(n);
        for (p, &v) in rho.iter() {
            if p.commutes_with(&q) {
                next.add_term(v, *p);
            } else {
                next.add_term(v * cs, *p);
                let (ph, qp) = pauli_product(&q, p)?;
                // −i·sin·phase
                next.add_term(v * i_pow::<T>(ph.power() + 3) * sn, qp);
            }
        }
        rho = next;
    }
    Ok(state.advanced(rho, t))
}

/// Dense propagator source for one Hamiltonian, reused across evolution times.
///
/// `exp(−iHt)` comes from scaling-and-squaring Padé rather than an
/// eigendecomposition: the symmetric eigensolver in nalgebra can return
/// decompositions that are off by O(1) on the heavily degenerate spectra of
/// coupled equivalent spins.
#[derive(Clone, Debug)]
pub struct DenseEvolver<T: Real> {
    generator: CMatrix<T>,
}

impl<T: Real> DenseEvolver<T> {
    pub fn new(h: &Hamiltonian<T>) -> Result<Self> {
        let m = to_matrix(h.operator())?;
        Ok(DenseEvolver { generator: m * c(T::zero(), -T::one()) })
    }

    pub fn dim(&self) -> usize {
        self.generator.nrows()
    }

    /// `U = exp(−iHt)`.
    pub fn propagator(&self, t: T) -> CMatrix<T> {
        (&self.generator * c(t, T::zero())).exp()
    }

    pub fn evolve_matrix(&self, rho: &CMatrix<T>, t: T) -> CMatrix<T> {
        dense::conjugate(&self.propagator(t), rho)
    }
}

/// Brute-force evolution `U ρ U†` by diagonalizing the dense Hamiltonian.
pub fn evolve_dense<T: Real>(state: &StateOp<T>, h: &Hamiltonian<T>, t: T) -> Result<StateOp<T>> {
    check_time(t)?;
    check_len(state.n_spins(), h.n_spins())?;
    let ev = DenseEvolver::new(h)?;
    let rho = ev.evolve_matrix(&to_matrix(&state.operator)?, t);
    Ok(state.advanced(from_matrix(&rho)?, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Letter;
    use crate::spin::{build_hamiltonian, Spin, SpinSystem};
    use std::f64::consts::PI;

    type Op = OperatorSum<f64>;

    fn one_spin(nu: f64) -> Hamiltonian<f64> {
        build_hamiltonian(&SpinSystem::new(vec![Spin::new("A", 1, nu)]).unwrap())
    }

    fn two_spin(j: f64) -> Hamiltonian<f64> {
        let s = SpinSystem::new(vec![Spin::new("A", 1, 0.0), Spin::new("B", 1, 0.0)]).unwrap();
        build_hamiltonian(&s.with_coupling("A", "B", j).unwrap())
    }

    #[test]
    fn zero_time_is_identity() {
        let st = StateOp::new(Op::spin_op(1, 0, Letter::X));
        assert_eq!(evolve_analytic(&st, &one_spin(3.0), 0.0).unwrap().operator, st.operator);
        assert!(evolve_dense(&st, &one_spin(3.0), 0.0).unwrap().operator.hs_distance(&st.operator).unwrap() < 1e-14);
    }

    #[test]
    fn shift_precession() {
        let (nu, t) = (7.0, 0.013);
        let st = StateOp::new(Op::spin_op(1, 0, Letter::X));
        let want = &Op::spin_op(1, 0, Letter::X).scale_real((2.0 * PI * nu * t).cos())
            + &Op::spin_op(1, 0, Letter::Y).scale_real((2.0 * PI * nu * t).sin());
        for got in [evolve_analytic(&st, &one_spin(nu), t).unwrap(), evolve_dense(&st, &one_spin(nu), t).unwrap()] {
            assert!(got.operator.hs_distance(&want).unwrap() < 1e-12);
            assert_eq!(got.time, t);
        }
    }

    #[test]
    fn antiphase_refocuses_at_half_over_j() {
        // 2 Ix Iz under J for 1/(2J) → Iy
        let j = 10.0;
        let st = StateOp::new(Op::product_op(2, &[(0, Letter::X), (1, Letter::Z)]).scale_real(2.0));
        let got = evolve_analytic(&st, &two_spin(j), 1.0 / (2.0 * j)).unwrap().operator;
        let iy = Op::spin_op(2, 0, Letter::Y);
        assert!(got.hs_distance(&iy).unwrap() < 1e-12, "{got:?}");
    }

    #[test]
    fn inphase_becomes_antiphase() {
        let j = 10.0;
        let st = StateOp::new(Op::spin_op(2, 0, Letter::X));
        let got = evolve_dense(&st, &two_spin(j), 1.0 / (2.0 * j)).unwrap().operator;
        let want = Op::product_op(2, &[(0, Letter::Y), (1, Letter::Z)]).scale_real(2.0);
        assert!(got.hs_distance(&want).unwrap() < 1e-12, "{got:?}");
    }

    #[test]
    fn negative_time_rejected() {
        let st = StateOp::new(Op::spin_op(1, 0, Letter::X));
        assert!(evolve_analytic(&st, &one_spin(1.0), -1.0).is_err());
        assert!(evolve_dense(&st, &one_spin(1.0), f64::NAN).is_err());
    }

    #[test]
    fn non_secular_generator_rejected() {
        let h = Hamiltonian::from_operator(Op::real_term(1.0, "X".parse().unwrap())).unwrap();
        let st = StateOp::new(Op::spin_op(1, 0, Letter::Z));
        assert!(matches!(evolve_analytic(&st, &h, 1.0), Err(Error::UnsupportedGenerator(_))));
        // the dense path handles it
        let got = evolve_dense(&st, &h, PI / 4.0).unwrap().operator;
        assert!(got.hs_distance(&Op::spin_op(1, 0, Letter::Y).scale_real(-1.0)).unwrap() < 1e-12);
    }

    #[test]
    fn isotropic_pair_matches_swap_form() {
        // a(XX + YY + ZZ) = a(2 SWAP − 1), so U = e^{iat}(cos 2at − i sin 2at SWAP)
        let (a, t) = (-5.3, 0.0686);
        let mut op = Op::zero(2);
        for l in [Letter::X, Letter::Y, Letter::Z] {
            op = &op + &Op::product_op(2, &[(0, l), (1, l)]).scale_real(4.0 * a);
        }
        let u = DenseEvolver::new(&Hamiltonian::from_operator(op).unwrap()).unwrap().propagator(t);
        let swap = CMatrix::<f64>::from_fn(4, 4, |r, col| {
            let target = [0, 2, 1, 3][col];
            if r == target { c(1.0, 0.0) } else { c(0.0, 0.0) }
        });
        let ph = c(0.0, a * t).exp();
        let want = (CMatrix::<f64>::identity(4, 4) * c((2.0 * a * t).cos(), 0.0) - swap * c(0.0, (2.0 * a * t).sin())) * ph;
        let d = (&u - &want).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(d < 1e-12, "{d}");
    }
}
