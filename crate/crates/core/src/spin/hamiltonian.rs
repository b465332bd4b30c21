use num_complex::Complex;

use super::system::SpinSystem;
use crate::error::{Error, Result};
use crate::pauli::{Letter, OperatorSum, PauliString};
use crate::scalar::Real;

/// Free-precession generator in rad/s.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian<T: Real> {
    operator: OperatorSum<T>,
}

impl<T: Real> Hamiltonian<T> {
    /// Wraps an arbitrary operator; it must be Hermitian.
    pub fn from_operator(operator: OperatorSum<T>) -> Result<Self> {
        if !operator.is_hermitian(T::lit(1e-12)) {
            return Err(Error::Validation("Hamiltonian must be Hermitian".into()));
        }
        Ok(Hamiltonian { operator })
    }

    pub fn operator(&self) -> &OperatorSum<T> {
        &self.operator
    }

    pub fn n_spins(&self) -> usize {
        self.operator.n_spins()
    }

    /// True when every term is a product of `Z`s (all terms commute and are diagonal).
    pub fn is_secular(&self) -> bool {
        self.operator.iter().all(|(p, _)| p.x_mask() == 0)
    }

    /// Real Pauli coefficients `a_j` of `H = Σ a_j Q_j`, identity term dropped.
    ///
    /// Fails with [`Error::UnsupportedGenerator`] on any transverse term.
    pub fn secular_terms(&self) -> Result<Vec<(PauliString, T)>> {
        let mut out = Vec::with_capacity(self.operator.len());
        for (p, v) in self.operator.iter() {
            if p.x_mask() != 0 {
                return Err(Error::UnsupportedGenerator(format!("transverse term {p} in Hamiltonian")));
            }
            if !p.is_identity() {
                out.push((*p, v.re));
            }
        }
        Ok(out)
    }

    /// Diagonal of the matrix realization: energy of computational basis state `b`.
    pub fn diagonal_energy(terms: &[(PauliString, T)], n: usize, b: usize) -> T {
        let mut e = T::zero();
        for (p, a) in terms {
            let mut parity = 0u32;
            for k in 0..n {
                if p.z_mask() >> k & 1 == 1 && b >> (n - 1 - k) & 1 == 1 {
                    parity += 1;
                }
            }
            e += if parity % 2 == 1 { -*a } else { *a };
        }
        e
    }
}

/// Weak-coupling Hamiltonian `Σ 2πν_k I_z,k + Σ_{k<l} 2πJ_kl I_z,k I_z,l`.
pub fn build_hamiltonian<T: Real>(system: &SpinSystem<T>) -> Hamiltonian<T> {
    let n = system.len();
    let two_pi = T::two_pi();
    let mut h = OperatorSum::zero(n);
    for k in 0..n {
        let nu = system.spin(k).shift_hz;
        if nu != T::zero() {
            h = &h + &OperatorSum::spin_op(n, k, Letter::Z).scale_real(two_pi * nu);
        }
    }
    for k in 0..n {
        for l in k + 1..n {
            let j = system.coupling(k, l);
            if j != T::zero() {
                let zz = OperatorSum::product_op(n, &[(k, Letter::Z), (l, Letter::Z)]);
                h = &h + &zz.scale(Complex::new(two_pi * j, T::zero()));
            }
        }
    }
    Hamiltonian { operator: h }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::Spin;

    #[test]
    fn two_spin_coupling_term() {
        let sys = SpinSystem::new(vec![Spin::new("A", 1, 0.0), Spin::new("B", 1, 0.0)])
            .unwrap()
            .with_coupling("A", "B", 10.0)
            .unwrap();
        let h = build_hamiltonian(&sys);
        // 2π·10·IzIz = (π·10/2)·ZZ
        let zz: PauliString = "ZZ".parse().unwrap();
        assert!((h.operator().coefficient(&zz).re - std::f64::consts::PI * 5.0).abs() < 1e-12);
        assert_eq!(h.operator().len(), 1);
        assert!(h.is_secular());
    }

    #[test]
    fn shift_term_is_pi_nu_z() {
        let sys = SpinSystem::new(vec![Spin::new("A", 1, 3.0)]).unwrap();
        let h = build_hamiltonian(&sys);
        let z: PauliString = "Z".parse().unwrap();
        assert!((h.operator().coefficient(&z).re - 3.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn transverse_terms_are_rejected_by_secular_view() {
        let h = Hamiltonian::from_operator(OperatorSum::<f64>::real_term(1.0, "XE".parse().unwrap())).unwrap();
        assert!(!h.is_secular());
        assert!(matches!(h.secular_terms(), Err(Error::UnsupportedGenerator(_))));
    }

    #[test]
    fn non_hermitian_operator_is_rejected() {
        let op = OperatorSum::<f64>::term(Complex::new(0.0, 1.0), "Z".parse().unwrap());
        assert!(Hamiltonian::from_operator(op).is_err());
    }
}
