mod common;

use common::*;
use isosym_core::bracket::{lambda, omega, BracketKind};
use isosym_core::classify::*;
use isosym_core::genlib::{jordan_nilpotent, skew_member_instance, Rng};
use isosym_core::mat::{kron, matrix_exp, CMatrix, WeightedOperator};
use proptest::prelude::*;

fn q(kind: BracketKind) -> ClassQuery {
    ClassQuery::with_default(kind).unwrap()
}

#[test]
fn gallery_verdicts() {
    let w = ex1_2x2();
    assert!(is_member(&w, &q(BracketKind::Omega(1, 1))).unwrap().member);
    let plain = WeightedOperator::new(CMatrix::identity(2), w.t().clone()).unwrap();
    assert!(!is_member(&plain, &q(BracketKind::Omega(1, 1))).unwrap().member);

    let w = ex1_3x3();
    let p = minimal_orders(&w, 3, 3, DEFAULT_RHO, false).unwrap();
    assert!(p.is_member(1, 1));
    assert!(!p.is_member(1, 0));
    assert!(!p.is_member(0, 1));
    assert_eq!(p.minimal, vec![(1, 1)]);
}

#[test]
fn identity_operator_is_a_member_at_positive_orders() {
    let w = WeightedOperator::new(CMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]), CMatrix::identity(2)).unwrap();
    for m in 0..4 {
        for n in 0..4 {
            let r = is_member(&w, &q(BracketKind::Omega(m, n))).unwrap();
            assert_eq!(r.member, m + n >= 1, "({m},{n})");
        }
    }
}

#[test]
fn jordan_profile_reaches_the_nilpotent_orders() {
    let mut rng = Rng::new(9);
    let a = rng.psd(3);
    let w = WeightedOperator::new(a, jordan_nilpotent(3, 3).unwrap()).unwrap();
    let p = minimal_orders(&w, 6, 7, DEFAULT_RHO, false).unwrap();
    assert!(p.is_member(4, 5));
    assert!(p.minimal.iter().all(|&(m, n)| m <= 4 && n <= 5 || p.is_member(m, n)));
    for (i, &(m1, n1)) in p.minimal.iter().enumerate() {
        for &(m2, n2) in &p.minimal[i + 1..] {
            assert!(!(m1 <= m2 && n1 <= n2) && !(m2 <= m1 && n2 <= n1));
        }
    }
}

#[test]
fn left_inverse_examples() {
    let a = CMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 3.0]]);
    let id = CMatrix::identity(2);
    for m in 1..4 {
        assert!(left_inverse_check(&a, &id, &id, m, DEFAULT_RHO).unwrap().member);
    }
    let mut rng = Rng::new(4);
    for n in 1..4 {
        let w = skew_member_instance(&mut rng, 3, 0, n, false).unwrap();
        let s = matrix_exp(w.t(), 0.7);
        let r = matrix_exp(&w.t().adjoint(), 0.7);
        assert!(left_inverse_check(w.a(), &r, &s, n, DEFAULT_RHO).unwrap().member, "n={n}");
    }
}

#[test]
fn left_inverse_product_law() {
    let mut rng = Rng::new(21);
    for (m, n) in [(1, 1), (1, 2), (2, 3)] {
        let w1 = skew_member_instance(&mut rng, 2, 0, m, false).unwrap();
        let w2 = skew_member_instance(&mut rng, 2, 0, n, false).unwrap();
        let a = kron(w1.a(), w2.a());
        let t1 = kron(w1.t(), &CMatrix::identity(2));
        let t2 = kron(&CMatrix::identity(2), w2.t());
        let (s1, r1) = (matrix_exp(&t1, 0.4), matrix_exp(&t1.adjoint(), 0.4));
        let (s2, r2) = (matrix_exp(&t2, 0.9), matrix_exp(&t2.adjoint(), 0.9));
        assert!(left_inverse_check(&a, &r1, &s1, m, 1e-9).unwrap().member);
        assert!(left_inverse_check(&a, &r2, &s2, n, 1e-9).unwrap().member);
        let verdict = left_inverse_check(&a, &(&r1 * &r2), &(&s1 * &s2), m + n - 1, 1e-9).unwrap();
        assert!(verdict.member, "({m},{n}) residual {}", verdict.residual);
    }
}

#[test]
fn decomposition_examples() {
    let h = CMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, -1.0]]);
    let (r, s) = decompose_iso_skew(&WeightedOperator::new(CMatrix::identity(2), h.clone()).unwrap()).unwrap();
    assert!((&r - &h).norm_fro() < 1e-15 && s.norm_fro() < 1e-15);
    let t = CMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 3.0]]);
    let (r, _) = decompose_iso_skew(&WeightedOperator::new(CMatrix::identity(2), t.clone()).unwrap()).unwrap();
    assert!((&r - &t.hermitian_part()).norm_fro() < 1e-15);
    let singular = WeightedOperator::new(CMatrix::diag_real(&[0.0, 1.0]), t).unwrap();
    assert!(matches!(decompose_iso_skew(&singular), Err(ClassifyError::SingularWeight { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decomposition_parts_are_members(a in psd(3), t in cmatrix(3)) {
        let a = a.add_identity(c(0.5, 0.0));
        let w = WeightedOperator::new(a, t).unwrap();
        let (r, s) = decompose_iso_skew(&w).unwrap();
        prop_assert!((&(&r + &s) - w.t()).norm_fro() <= 1e-12 * w.t().norm_fro());
        let wr = w.with_operator(r).unwrap();
        let ws = w.with_operator(s).unwrap();
        prop_assert!(omega(&wr, 1, 1).unwrap().residual() <= 1e-10);
        prop_assert!(lambda(&ws, 1, 1).unwrap().residual() <= 1e-10);
    }

    #[test]
    fn unitary_transport_preserves_verdicts(w in weighted(4), seed in any::<u64>(), m in 0u32..3, n in 0u32..3) {
        let v = Rng::new(seed).unitary(w.dim());
        let moved = WeightedOperator::new(
            (&(&v * w.a()) * &v.adjoint()).hermitian_part(),
            &(&v * w.t()) * &v.adjoint(),
        ).unwrap();
        let kind = BracketKind::Omega(m, n);
        let a = is_member(&w, &q(kind)).unwrap();
        let b = is_member(&moved, &q(kind)).unwrap();
        prop_assert!((a.residual - b.residual).abs() <= 1e-10 * (1.0 + a.residual));
    }

    #[test]
    fn scaling_the_weight_keeps_the_verdict(w in weighted(4), s in 0.01f64..100.0, m in 0u32..3, n in 0u32..3) {
        let scaled = WeightedOperator::new(w.a().scale_real(s), w.t().clone()).unwrap();
        let kind = BracketKind::Omega(m, n);
        let a = is_member(&w, &q(kind)).unwrap();
        let b = is_member(&scaled, &q(kind)).unwrap();
        prop_assert!((a.residual - b.residual).abs() <= 1e-12 * (1.0 + a.residual));
    }

    #[test]
    fn random_operators_are_generically_not_members(w in weighted(4)) {
        prop_assume!(w.dim() >= 2 && w.a().norm_fro() > 1e-3);
        prop_assert!(!is_member(&w, &q(BracketKind::Omega(1, 1))).unwrap().member);
    }

    #[test]
    fn profiles_of_members_are_upward_closed(seed in any::<u64>(), m in 1u32..4, n in 1u32..4) {
        let mut rng = Rng::new(seed);
        let w = isosym_core::genlib::member_instance(&mut rng, 4, m, n, false).unwrap();
        let p = minimal_orders(&w, 5, 5, 1e-9, false).unwrap();
        prop_assert!(p.is_member(m, n));
        for a in 0..=5usize {
            for b in 0..=5usize {
                if p.member[a][b] {
                    prop_assert!(a == 5 || p.member[a + 1][b]);
                    prop_assert!(b == 5 || p.member[a][b + 1]);
                }
            }
        }
    }
}
