use mqdfs::pauli::dense::{dense_hs_inner, to_matrix};
use mqdfs::pauli::{coherence_decompose, conjugate_by_pauli, pauli_product, Letter, OperatorSum, PauliString, Weights};
use nalgebra::DMatrix;
use num_complex::Complex;
use proptest::prelude::*;

type C = Complex<f64>;
type Op = OperatorSum<f64>;

/// Independent Kronecker oracle: σ matrices per letter, spin 0 most significant.
fn sigma(l: Letter) -> DMatrix<C> {
    let (o, z, i) = (C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 1.0));
    match l {
        Letter::E => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        Letter::X => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        Letter::Y => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        Letter::Z => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

fn kron_string(p: &PauliString) -> DMatrix<C> {
    p.letters().into_iter().fold(DMatrix::from_element(1, 1, C::new(1.0, 0.0)), |acc, l| acc.kronecker(&sigma(l)))
}

fn max_diff(a: &DMatrix<C>, b: &DMatrix<C>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn phase_value(p: mqdfs::pauli::Phase) -> C {
    [C::new(1.0, 0.0), C::new(0.0, 1.0), C::new(-1.0, 0.0), C::new(0.0, -1.0)][p.power() as usize % 4]
}

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![Just(Letter::E), Just(Letter::X), Just(Letter::Y), Just(Letter::Z)]
}

fn string(n: usize) -> impl Strategy<Value = PauliString> {
    prop::collection::vec(letter(), n).prop_map(|v| PauliString::from_letters(&v))
}

fn operator(n: usize) -> impl Strategy<Value = Op> {
    prop::collection::vec((string(n), -2.0..2.0f64, -2.0..2.0f64), 1..8)
        .prop_map(move |terms| Op::from_terms(n, terms.into_iter().map(|(p, re, im)| (C::new(re, im), p))).unwrap())
}

fn hermitian(n: usize) -> impl Strategy<Value = Op> {
    prop::collection::vec((string(n), -2.0..2.0f64), 1..8)
        .prop_map(move |terms| Op::from_terms(n, terms.into_iter().map(|(p, re)| (C::new(re, 0.0), p))).unwrap())
}

fn sized<S: Strategy, F: Fn(usize) -> S>(f: F) -> impl Strategy<Value = S::Value> {
    (1usize..=5).prop_flat_map(f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn product_is_associative_and_matches_matrices((a, b, c) in sized(|n| (string(n), string(n), string(n)))) {
        let (pab, ab) = pauli_product(&a, &b).unwrap();
        let (pabc, abc) = pauli_product(&ab, &c).unwrap();
        let (pbc, bc) = pauli_product(&b, &c).unwrap();
        let (pa_bc, a_bc) = pauli_product(&a, &bc).unwrap();
        prop_assert_eq!(abc, a_bc);
        prop_assert_eq!(pab.mul(pabc), pbc.mul(pa_bc));
        let dense = kron_string(&a) * kron_string(&b) * kron_string(&c);
        let symbolic = kron_string(&abc) * phase_value(pab.mul(pabc));
        prop_assert!(max_diff(&dense, &symbolic) < 1e-12);
    }
}

proptest! {
    #[test]
    fn every_string_squares_to_plus_identity(p in sized(string)) {
        let (ph, sq) = pauli_product(&p, &p).unwrap();
        prop_assert!(sq.is_identity());
        prop_assert_eq!(ph.power() % 4, 0);
    }

    #[test]
    fn conjugating_twice_is_identity((rho, p) in sized(|n| (operator(n), string(n)))) {
        let once = conjugate_by_pauli(&rho, &p).unwrap();
        prop_assert_eq!(conjugate_by_pauli(&once, &p).unwrap(), rho.clone());
        // against P ρ P on matrices
        let m = kron_string(&p);
        let want = &m * to_matrix(&rho).unwrap() * &m;
        prop_assert!(max_diff(&want, &to_matrix(&once).unwrap()) < 1e-12);
    }

    #[test]
    fn hs_inner_matches_dense_trace((a, b) in sized(|n| (operator(n), operator(n)))) {
        let sym = a.hs_inner(&b).unwrap();
        let dense = dense_hs_inner(&to_matrix(&a).unwrap(), &to_matrix(&b).unwrap()).unwrap();
        prop_assert!((sym - dense).norm() < 1e-12);
        let self_norm: f64 = a.iter().map(|(_, v)| v.norm_sqr()).sum();
        prop_assert!((a.hs_inner(&a).unwrap().re - self_norm).abs() < 1e-12);
    }

    #[test]
    fn decomposition_recombines_exactly((rho, w) in sized(|n| (hermitian(n), prop::collection::vec(1i64..6, n)))) {
        let n = rho.n_spins();
        for weights in [Weights::plain(n), Weights::from_ints(&w).unwrap()] {
            let dec = coherence_decompose(&rho, &weights).unwrap();
            let residual = dec.recombine(n).try_sub(&rho).unwrap();
            prop_assert!(residual.max_abs() < 1e-14, "{:?}", residual);
            if let Some(zero) = dec.component(num_rational::Ratio::from_integer(0)) {
                prop_assert!(zero.is_hermitian(1e-14));
            }
            // ±p components are adjoints of each other
            for (p, comp) in &dec.components {
                let mirror = dec.component(-*p).cloned().unwrap_or_else(|| Op::zero(n));
                prop_assert!(comp.dagger().hs_distance(&mirror).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn z_rotation_phases_each_order((rho, k, phi) in sized(|n| (operator(n), 0..n, -3.0..3.0f64))) {
        let n = rho.n_spins();
        let rz = PauliString::identity(n).with_letter(k, Letter::Z);
        let zm = kron_string(&rz);
        let u = DMatrix::<C>::identity(1 << n, 1 << n) * C::new((phi / 2.0).cos(), 0.0) - zm * C::new(0.0, (phi / 2.0).sin());
        let rotated = &u * to_matrix(&rho).unwrap() * u.adjoint();
        let mut want = Op::zero(n);
        for pk in [-1i64, 0, 1] {
            let part = mqdfs::pauli::ladder_partition(&rho, |l| l.partial_order(1 << k)).remove(&pk);
            if let Some(part) = part {
                want = &want + &part.scale(C::from_polar(1.0, -(pk as f64) * phi));
            }
        }
        prop_assert!(max_diff(&rotated, &to_matrix(&want).unwrap()) < 1e-12);
    }
}

#[test]
fn worked_product_example() {
    let a: PauliString = "XYEZ".parse().unwrap();
    let b: PauliString = "YYZE".parse().unwrap();
    let (ph, p) = pauli_product(&a, &b).unwrap();
    let dense = kron_string(&a) * kron_string(&b);
    assert!(max_diff(&dense, &(kron_string(&p) * phase_value(ph))) < 1e-12);
    assert_eq!(p.to_string(), "ZEZZ");
}
