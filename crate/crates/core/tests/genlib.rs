use isosym_core::bracket::{lambda, omega, symmetry_bracket};
use isosym_core::genlib::*;
use isosym_core::mat::{eigenpairs, psd_check, CMatrix, WeightedOperator};
use proptest::prelude::*;

fn residual(w: &WeightedOperator, m: u32, n: u32, skew: bool) -> f64 {
    if skew {
        lambda(w, m, n).unwrap().residual()
    } else {
        omega(w, m, n).unwrap().residual()
    }
}

#[test]
fn every_fixture_satisfies_its_orders() {
    for f in gallery() {
        let w = f.weighted();
        let (m, n) = f.orders;
        assert!(residual(&w, m, n, f.skew) <= 1e-12, "{}", f.name);
    }
    assert_eq!(gallery().len(), FIXTURE_NAMES.len());
    assert!(matches!(fixture("nope"), Err(GenError::UnknownFixture(_))));
}

#[test]
fn ex1_2x2_is_a_symmetry() {
    assert!(symmetry_bracket(&fixture("ex1_2x2").unwrap().weighted(), 1).unwrap().value.norm_fro() <= 1e-14);
}

#[test]
fn ex4_generic_iff() {
    assert!(residual(&ex4_generic(2.0, 1.0, 1.0, 1.0), 1, 1, false) <= 1e-14);
    assert!(residual(&ex4_generic(0.3, 1.7, 0.0, -2.0), 1, 1, false) <= 1e-14);
    let w = ex4_generic(1.0, 2.0, 0.5, 3.0);
    let with_identity = WeightedOperator::new(CMatrix::identity(2), w.t().clone()).unwrap();
    assert!(residual(&with_identity, 1, 1, false) > 1e-2);
}

#[test]
fn fixtures_export_to_matrix_json() {
    let f = fixture("ex1_3x3").unwrap();
    let json = serde_json::to_string(&f.t).unwrap();
    let back = CMatrix::from_json(&json).unwrap();
    assert_eq!(&back, f.weighted().t());
}

#[test]
fn generators_are_deterministic() {
    assert_eq!(rand_matrix(4, 11), rand_matrix(4, 11));
    assert_ne!(rand_matrix(4, 11), rand_matrix(4, 12));
    assert_eq!(rand_psd(3, 5), rand_psd(3, 5));
}

#[test]
fn jordan_powers() {
    let n = jordan_nilpotent(3, 3).unwrap();
    assert!(n.pow(3).is_zero());
    let n2 = n.pow(2);
    assert_eq!(n2[(0, 2)], num_complex::Complex64::new(1.0, 0.0));
    let split = jordan_nilpotent(4, 2).unwrap();
    assert!(split.pow(2).is_zero());
    assert!(!split.is_zero());
}

#[test]
fn kron_pair_spectrum() {
    let r = CMatrix::from_real_rows(&[&[2.0, 1.0], &[0.0, -1.0]]);
    let (t, q) = doubly_commuting_pair(&r, &jordan_nilpotent(2, 2).unwrap());
    let eig = eigenpairs(&(&t + &q)).unwrap();
    let mut values: Vec<f64> = eig.values.iter().map(|v| v.re).collect();
    values.sort_by(f64::total_cmp);
    for (v, e) in values.iter().zip([-1.0, -1.0, 2.0, 2.0]) {
        assert!((v - e).abs() < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn psd_and_unitary_contracts(seed in any::<u64>(), dim in 1usize..8) {
        prop_assert!(psd_check(&rand_psd(dim, seed), 1e-12));
        let u = rand_unitary(dim, seed);
        let defect = (&(&u.adjoint() * &u) - &CMatrix::identity(dim)).norm_fro();
        prop_assert!(defect <= 1e-12);
    }

    #[test]
    fn pairs_doubly_commute(seed in any::<u64>(), d1 in 1usize..4, r in 1usize..4) {
        let rm = rand_matrix(d1, seed);
        let n = jordan_nilpotent(r, r).unwrap();
        let (t, q) = doubly_commuting_pair(&rm, &n);
        prop_assert!(t.commutator(&q).norm_fro() <= 1e-14);
        prop_assert!(t.commutator(&q.adjoint()).norm_fro() <= 1e-14);
        prop_assert!(q.pow(r as u32).is_zero());
    }

    #[test]
    fn member_instances_are_members(seed in any::<u64>(), dim in 2usize..7, m in 0u32..4, n in 0u32..4, singular: bool) {
        prop_assume!(m + n >= 1);
        let mut rng = isosym_core::genlib::Rng::new(seed);
        let w = member_instance(&mut rng, dim, m, n, singular).unwrap();
        prop_assert!(w.a().norm_fro() > 0.0);
        prop_assert!(residual(&w, m, n, false) <= 1e-10);
        let s = skew_member_instance(&mut rng, dim, m, n, singular).unwrap();
        prop_assert!(residual(&s, m, n, true) <= 1e-10);
    }
}
