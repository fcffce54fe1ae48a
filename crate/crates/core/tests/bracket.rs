mod common;

use common::*;
use isosym_core::bracket::*;
use isosym_core::mat::{kron, CMatrix, WeightedOperator};
use proptest::prelude::*;

fn w(a: CMatrix, t: CMatrix) -> WeightedOperator {
    WeightedOperator::new(a, t).unwrap()
}

#[test]
fn isometry_examples() {
    let a = CMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]);
    assert!(isometry_bracket(&w(a.clone(), CMatrix::identity(2)), 1).unwrap().value.is_zero());
    let b = isometry_bracket(&w(CMatrix::identity(1), CMatrix::diag_real(&[2.0])), 1).unwrap();
    assert_eq!(b.value, CMatrix::diag_real(&[3.0]));
    let b = isometry_bracket(&ex1_2x2(), 1).unwrap();
    assert_eq!(b.value, CMatrix::from_real_rows(&[&[-1.0, -1.0], &[-1.0, -1.0]]));
    assert_eq!(isometry_bracket(&ex1_2x2(), 0).unwrap().value, *ex1_2x2().a());
}

#[test]
fn symmetry_examples() {
    assert!(symmetry_bracket(&ex1_2x2(), 1).unwrap().value.is_zero());
    let a = CMatrix::from_real_rows(&[&[3.0, 1.0], &[1.0, 1.0]]);
    for n in 1..4 {
        assert!(symmetry_bracket(&w(a.clone(), CMatrix::identity(2)), n).unwrap().value.is_zero());
    }
    let (pa, pb, pc, pd) = (0.3, -1.2, 0.8, 2.0);
    let t = CMatrix::from_real_rows(&[&[pa, pb], &[pc, pd]]);
    let b = symmetry_bracket(&w(CMatrix::diag_real(&[0.0, 1.0]), t.clone()), 1).unwrap();
    assert_eq!(b.value, CMatrix::from_real_rows(&[&[0.0, pc], &[-pc, 0.0]]));
    let oracle = eval_symbol(&CMatrix::diag_real(&[0.0, 1.0]), &t, &symbol(0, 1, false));
    assert!((&b.value - &oracle).norm_fro() < 1e-15);
}

#[test]
fn skew_examples() {
    let a = CMatrix::from_real_rows(&[&[3.0, 1.0], &[1.0, 1.0]]);
    assert!(skew_bracket(&w(a, CMatrix::zeros(2, 2)), 1).unwrap().value.is_zero());
    let b = skew_bracket(&w(CMatrix::identity(1), CMatrix::diag_real(&[1.0])), 2).unwrap();
    assert_eq!(b.value, CMatrix::diag_real(&[4.0]));
}

#[test]
fn omega_examples() {
    let ex = ex1_3x3();
    assert!(omega(&ex, 1, 1).unwrap().residual() < 1e-15);
    assert!(omega(&ex, 1, 0).unwrap().residual() > 1e-2);
    assert!(omega(&ex, 0, 1).unwrap().residual() > 1e-2);
    let zero = w(CMatrix::zeros(2, 2), CMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]));
    assert!(omega(&zero, 2, 3).unwrap().value.is_zero());
}

#[test]
fn lambda_upper_triangular_example() {
    for &(pa, pb, d) in &[(0.5, 1.0, 0.0), (2.0, -1.0, 1.0), (-0.3, 0.2, -1.0), (1.0, 1.0, 2.0), (0.0, 3.0, 0.5)] {
        let t = CMatrix::from_real_rows(&[&[pa, pb], &[0.0, d]]);
        let b = lambda(&w(CMatrix::diag_real(&[0.0, 1.0]), t), 1, 1).unwrap();
        let expected = 2.0 * d * (d * d - 1.0);
        assert!((b.value[(1, 1)].re - expected).abs() < 1e-12);
        for (i, j) in [(0, 0), (0, 1), (1, 0)] {
            assert!(b.value[(i, j)].norm() < 1e-15);
        }
    }
}

#[test]
fn lambda_of_skew_symmetric_operator_vanishes() {
    // T = i·diag(1, -2) is skew (I,1)-symmetric: T* + T = 0.
    let t = CMatrix::diag(&[c(0.0, 1.0), c(0.0, -2.0)]);
    let b = lambda(&w(CMatrix::identity(2), t), 0, 1).unwrap();
    assert!(b.value.is_zero());
}

#[test]
fn recurrence_chain_on_gallery_example() {
    let chain = omega_chain(&ex1_3x3(), 1, 1, false).unwrap();
    assert!(chain.residual() < 1e-15);
    let z = CMatrix::zeros(3, 3);
    for dir in [Direction::M, Direction::N] {
        assert!(omega_recurrence_step(ex1_3x3().t(), &z, dir, false).is_zero());
    }
}

#[test]
fn recurrence_chain_matches_direct_on_fixed_pair() {
    let a = CMatrix::from_rows(&[vec![c(2.0, 0.0), c(0.5, 0.5)], vec![c(0.5, -0.5), c(1.0, 0.0)]]);
    let t = CMatrix::from_rows(&[vec![c(0.3, 0.1), c(-0.7, 0.0)], vec![c(0.2, 0.9), c(1.1, -0.4)]]);
    let pair = w(a, t);
    let chain = omega_chain(&pair, 2, 1, false).unwrap();
    let direct = omega(&pair, 2, 1).unwrap();
    assert!((&chain.value - &direct.value).norm_fro() <= 1e-12);
}

#[test]
fn translation_examples() {
    let a = CMatrix::from_rows(&[vec![c(2.0, 0.0), c(0.5, 0.5)], vec![c(0.5, -0.5), c(1.0, 0.0)]]);
    let t = CMatrix::from_rows(&[vec![c(0.3, 0.1), c(-0.7, 0.0)], vec![c(0.2, 0.9), c(1.1, -0.4)]]);
    let pair = w(a.clone(), t.clone());
    let s0 = omega_translate(&pair, 2, 1, 0.0).unwrap();
    assert!((&s0.value - &omega(&pair, 2, 1).unwrap().value).norm_fro() < 1e-14);

    let rhs = omega_translate(&pair, 2, 1, 0.7).unwrap();
    let shifted = pair.with_operator(t.add_identity(c(-0.7, 0.0))).unwrap();
    let direct = omega(&shifted, 2, 1).unwrap();
    assert!(rhs.gap(&direct) < 1e-10);

    let rhs = lambda_translate(&pair, 2, 2, 0.7).unwrap();
    let direct = lambda(&shifted, 2, 2).unwrap();
    assert!(rhs.gap(&direct) < 1e-10);

    // Hermitian T is (I,1)-symmetric, so every real shift is isosymmetric.
    let h = t.hermitian_part();
    for m in 0..4 {
        let b = omega(&w(CMatrix::identity(2), h.add_identity(c(-1.3, 0.0))), m, 1).unwrap();
        assert!(b.residual() < 1e-14);
    }
}

#[test]
fn weighted_sums_on_gallery_example() {
    let ex = ex1_3x3();
    let b = weighted_sum_identity(&ex, 1, 1, 2, 1, SumForm::Symmetry).unwrap();
    assert!(b.value.norm_fro() <= 1e-10);
    let b = weighted_sum_identity(&ex, 1, 1, 3, 2, SumForm::Isometry).unwrap();
    assert!(b.value.norm_fro() <= 1e-10);
    let generic = w(CMatrix::identity(2), CMatrix::from_real_rows(&[&[0.4, 1.0], &[-0.3, 0.9]]));
    let b = weighted_sum_identity(&generic, 1, 1, 2, 1, SumForm::Symmetry).unwrap();
    assert!(b.residual() > 1e-3);
}

#[test]
fn exponential_examples() {
    let ex = ex1_3x3();
    assert!(exp_bracket_sum(&ex, 1, 1, 0.0, false).unwrap().value.is_zero());
    assert!(exp_bracket_sum(&ex, 1, 1, 0.5, false).unwrap().value.norm_fro() <= 1e-9);
    let lhs = exp_expansion_lhs(&ex, 1, 0.3, 2, false).unwrap();
    let rhs = exp_expansion_rhs(&ex, 1, 1, 0.3, 2, false).unwrap();
    assert!(lhs.gap(&rhs) <= 1e-8);
    let generic = w(CMatrix::identity(2), CMatrix::from_real_rows(&[&[0.4, 1.0], &[-0.3, 0.9]]));
    assert!(exp_bracket_sum(&generic, 1, 1, 0.5, false).unwrap().residual() > 1e-4);
    let lhs = exp_expansion_lhs(&generic, 1, 0.3, 2, false).unwrap();
    let rhs = exp_expansion_rhs(&generic, 1, 1, 0.3, 2, false).unwrap();
    assert!(lhs.gap(&rhs) > 1e-4);
}

#[test]
fn perturbation_examples() {
    let r = CMatrix::from_rows(&[vec![c(0.5, 0.2), c(1.0, 0.0)], vec![c(0.0, 0.3), c(-0.4, 0.0)]]);
    let n2 = jordan(2);
    let t = kron(&r, &CMatrix::identity(2));
    let s = kron(&CMatrix::identity(2), &n2);
    let a = kron(&CMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]), &CMatrix::identity(2));
    let pair = w(a, t.clone());
    let zero = perturb_expansion_rhs(&pair, &CMatrix::zeros(4, 4), 2, 1, false).unwrap();
    assert!((&zero.value - &omega(&pair, 2, 1).unwrap().value).norm_fro() < 1e-13);
    for skew in [false, true] {
        let rhs = perturb_expansion_rhs(&pair, &s, 2, 2, skew).unwrap();
        let sum = pair.with_operator(&t + &s).unwrap();
        let direct = if skew { lambda(&sum, 2, 2) } else { omega(&sum, 2, 2) }.unwrap();
        assert!(rhs.gap(&direct) < 1e-10);
    }
    let bad = CMatrix::from_real_rows(&[&[0.0, 1.0, 0.0, 0.0], &[0.0; 4], &[0.0; 4], &[0.0; 4]]);
    assert!(matches!(
        perturb_expansion_rhs(&pair, &bad, 1, 1, false),
        Err(BracketError::NotDoublyCommuting { .. })
    ));
}

#[test]
fn nilpotent_jordan_blocks_are_isosymmetric() {
    let a = CMatrix::from_rows(&[
        vec![c(2.0, 0.0), c(0.5, 0.5), c(0.1, 0.0)],
        vec![c(0.5, -0.5), c(1.0, 0.0), c(0.0, 0.2)],
        vec![c(0.1, 0.0), c(0.0, -0.2), c(0.7, 0.0)],
    ]);
    let b = omega(&w(a, jordan(3)), 4, 5).unwrap();
    assert!(b.residual() <= 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_forms_agree(pair in weighted(5), m in 0u32..=6, n in 0u32..=6) {
        let o = omega(&pair, m, n).unwrap();
        prop_assert!(o.gap(&omega_dual(&pair, m, n).unwrap()) <= 1e-11);
        let l = lambda(&pair, m, n).unwrap();
        prop_assert!(l.gap(&lambda_dual(&pair, m, n).unwrap()) <= 1e-11);
    }

    #[test]
    fn brackets_match_symbol_oracle(pair in weighted(4), m in 0u32..=4, n in 0u32..=4, skew in any::<bool>()) {
        let b = if skew { lambda(&pair, m, n) } else { omega(&pair, m, n) }.unwrap();
        let oracle = eval_symbol(pair.a(), pair.t(), &symbol(m, n, skew));
        prop_assert!(relative((&b.value - &oracle).norm_fro(), b.scale) <= 1e-11);
        let chain = omega_chain(&pair, m, n, skew).unwrap();
        prop_assert!(chain.gap(&b) <= 1e-11);
    }

    #[test]
    fn parity_symmetry(pair in weighted(5), m in 0u32..=6, n in 0u32..=6) {
        let o = omega(&pair, m, n).unwrap();
        let expected = if n % 2 == 0 { o.value.clone() } else { o.value.scale_real(-1.0) };
        prop_assert!(relative((&o.value.adjoint() - &expected).norm_fro(), o.scale) <= 1e-12);
        let l = lambda(&pair, m, n).unwrap();
        prop_assert!(relative(l.value.hermitian_defect(), l.scale) <= 1e-12);
    }

    #[test]
    fn skew_duality(pair in weighted(4), m in 0u32..=4, n in 0u32..=4) {
        let l = lambda(&pair, m, n).unwrap();
        let it = pair.with_operator(pair.t().scale(c(0.0, 1.0))).unwrap();
        let o = omega(&it, m, n).unwrap();
        let rotated = o.value.scale(c(0.0, 1.0).powu(n));
        prop_assert!(relative((&l.value - &rotated).norm_fro(), l.scale) <= 1e-11);
        prop_assert!((l.value.norm_fro() - o.value.norm_fro()).abs() <= 1e-11 * l.scale.max(1.0));
    }

    #[test]
    fn unitary_equivalence(a in psd(3), t in cmatrix(3), v in unitary(3), m in 0u32..=4, n in 0u32..=4) {
        let vtv = &(&v.adjoint() * &t) * &v;
        let lhs = omega(&w(a.clone(), vtv), m, n).unwrap();
        let vav = &(&v * &a) * &v.adjoint();
        let inner = omega(&w(vav, t), m, n).unwrap();
        let rhs = &(&v.adjoint() * &inner.value) * &v;
        prop_assert!(relative((&lhs.value - &rhs).norm_fro(), lhs.scale) <= 1e-11);
    }

    #[test]
    fn translation_matches_direct(pair in weighted(3), m in 0u32..=3, n in 0u32..=3, s in -1.0f64..1.0) {
        let shifted = pair.with_operator(pair.t().add_identity(c(-s, 0.0))).unwrap();
        let rhs = omega_translate(&pair, m, n, s).unwrap();
        prop_assert!(rhs.gap(&omega(&shifted, m, n).unwrap()) <= 1e-10);
        let rhs = lambda_translate(&pair, m, n, s).unwrap();
        prop_assert!(rhs.gap(&lambda(&shifted, m, n).unwrap()) <= 1e-10);
    }
}
