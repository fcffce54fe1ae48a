//! Algebraic checks: order hierarchy, real translation, positivity transfer,
//! inverses and powers, weighted sums.

use num_complex::Complex64;

use super::instances::*;
use super::{Instance, LabError, Trial};
use crate::bracket::{binomial, relative, weighted_sum_identity, Bracket, BracketKind, SumForm, Words};
use crate::genlib::{ex1_2x2, member_instance, transport, Rng};
use crate::mat::{CMatrix, WeightedOperator};

/// Skips the trial unless the instance is a member at `(m, n)`.
macro_rules! require_member {
    ($case:expr, $w:expr, $m:expr, $n:expr, $skew:expr) => {
        let hyp = omega_residual($w.a(), $w.t(), $m, $n, $skew);
        if !(hyp <= HYPOTHESIS_TOL) {
            return Ok(Trial::skip($case, format!("not a member at ({}, {}): residual {hyp:e}", $m, $n)));
        }
    };
}

/// Members stay members at `(m + 1, n)`, `(m, n + 1)` and `(m + 2, n + 2)`.
pub(crate) fn hierarchy(rng: &mut Rng, trial: usize, _tol: f64) -> Result<Trial, LabError> {
    let (case, w, m, n, skew) = match trial % 4 {
        0 => ("cyclic_example", moved_cyclic(rng)?, 1, 1, false),
        1 => {
            let d = between(rng, 2, 5);
            let (m, n) = orders(rng, 3, 3);
            let a = rng.psd(d);
            ("identity_operator", WeightedOperator::new(a, CMatrix::identity(d))?, m, n, false)
        }
        2 => {
            let d = between(rng, 2, 5);
            let (m, n) = orders(rng, 3, 3);
            let skew = rng.uniform() < 0.5;
            let source = if rng.uniform() < 0.5 { Source::Jordan } else { Source::Singular };
            let w = member(rng, d, m, n, skew, source)?.expect("direct sources always build");
            ("jordan_member", w, m, n, skew)
        }
        _ => match member(rng, 4, 2, 1, false, Source::Solver)? {
            Some(w) => ("solver_member", w, 2, 1, false),
            None => return Ok(Trial::skip("solver_member", "solver found no weight")),
        },
    };
    require_member!(case, w, m, n, skew);
    let residual = [(m + 1, n), (m, n + 1), (m + 2, n + 2)]
        .iter()
        .map(|&(p, q)| omega_residual(w.a(), w.t(), p, q, skew))
        .fold(0.0, f64::max);
    let kind = if skew { "skew " } else { "" };
    Ok(Trial::checked(case, residual, Instance::new(w.a(), w.t()))
        .note(format!("{kind}({m}, {n}) lifted to ({}, {n}), ({m}, {}), ({}, {})", m + 1, n + 1, m + 2, n + 2)))
}

const SHIFTS: [f64; 3] = [-1.0, 0.3, 2.0];
/// Fraction of the unshifted bracket scale a shifted bracket is measured
/// against at least: a shift that cancels the operator on the range of the
/// weight still carries the absolute rounding of the unshifted data.
const SHIFT_CARRY: f64 = 1e-3;

/// An `(A, n)`-symmetric `T` gives members `T − s` at every `(m, n)`; a skew
/// `(A, n)`-symmetric `T` gives skew members `T + is`. Both translation
/// expansions are compared with direct evaluation.
pub(crate) fn translation(rng: &mut Rng, trial: usize, _tol: f64) -> Result<Trial, LabError> {
    let d = between(rng, 2, 5);
    let n = between(rng, 1, 3) as u32;
    let (case, w, n, skew) = match trial % 5 {
        0 => {
            let h = rng.hermitian(d);
            ("hermitian", WeightedOperator::new(CMatrix::identity(d), h)?, 1, false)
        }
        1 => {
            let base = ex1_2x2();
            ("two_dim_example", transport(rng, base.a(), base.t())?, 1, false)
        }
        2 => {
            let singular = rng.uniform() < 0.5;
            ("symmetric_member", member_instance(rng, d, 0, n, singular)?, n, false)
        }
        3 => {
            let t = member_instance(rng, d, 0, n, false)?.t().clone();
            match solver_weight(rng, &t, &[BracketKind::Omega(0, n)]) {
                Some(w) => ("solver_symmetric", w, n, false),
                None => return Ok(Trial::skip("solver_symmetric", "solver found no weight")),
            }
        }
        _ => {
            let singular = rng.uniform() < 0.5;
            let source = if singular { Source::Singular } else { Source::Jordan };
            let w = member(rng, d, 0, n, true, source)?.expect("direct sources always build");
            ("skew_imaginary_shift", w, n, true)
        }
    };
    require_member!(case, w, 0, n, skew);
    let mut residual: f64 = 0.0;
    let mut collapsed = 0;
    for s in SHIFTS {
        let shift = if skew { Complex64::new(0.0, s) } else { Complex64::new(-s, 0.0) };
        let moved = w.t().add_identity(shift);
        for m in 0..=2 {
            let carried = SHIFT_CARRY * Words::new(&w).omega(m, n, skew).scale;
            let bracket = Words::from_parts(w.a(), &moved).omega(m, n, skew);
            if bracket.scale < carried {
                collapsed += 1;
            }
            residual = residual.max(relative(bracket.value.norm_fro(), bracket.scale.max(carried)));
            // the expansion identity holds for every operator and real shift
            let real_shift = w.t().add_identity(Complex64::new(-s, 0.0));
            let direct = Words::from_parts(w.a(), &real_shift).omega(m, n, skew);
            let expanded = if skew {
                crate::bracket::lambda_translate(&w, m, n, s)?
            } else {
                crate::bracket::omega_translate(&w, m, n, s)?
            };
            residual = residual.max(direct.gap(&expanded));
        }
    }
    Ok(Trial::checked(case, residual, Instance::new(w.a(), w.t()))
        .note(format!("n = {n}, shifts {SHIFTS:?}, m = 0..=2, {collapsed} shifts at the carried scale")))
}

/// `‖I^m_B(T)‖` relative to the scale it inherits from `B`.
fn isometry_with_weight(b: &Bracket, t: &CMatrix, m: u32) -> f64 {
    let value = Words::from_parts(&b.value, t).isometry(m);
    let carry: f64 = (0..=m).map(|k| binomial(m, k) as f64 * t.pow(k).norm_fro().powi(2)).sum::<f64>() * b.scale;
    relative(value.value.norm_fro(), value.scale.max(carry))
}

/// `‖S^n_B(T)‖` relative to the scale it inherits from `B`.
fn symmetry_with_weight(b: &Bracket, t: &CMatrix, n: u32) -> f64 {
    let value = Words::from_parts(&b.value, t).symmetry(n, false);
    let carry: f64 =
        (0..=n).map(|k| binomial(n, k) as f64 * t.pow(k).norm_fro() * t.pow(n - k).norm_fro()).sum::<f64>() * b.scale;
    relative(value.value.norm_fro(), value.scale.max(carry))
}

/// From an `(A, m)`-isometry with `Ω^{m−1,n} = 0`: `B = I^{m−1}_A(T)/(m−1)!`
/// is PSD and `T` is `(B, n)`-symmetric.
fn isometric_transfer(a: &CMatrix, t: &CMatrix, m: u32, n: u32) -> Result<Option<(f64, f64)>, LabError> {
    let mut words = Words::from_parts(a, t);
    let hyp = words.isometry(m).residual().max(words.omega(m - 1, n, false).residual());
    if !(hyp <= HYPOTHESIS_TOL) {
        return Ok(None);
    }
    let b = scaled(&words.isometry(m - 1), Complex64::new(1.0 / factorial(m - 1), 0.0));
    Ok(Some((psd_violation(&b)?.max(symmetry_with_weight(&b, t, n)), hyp)))
}

/// From an `(A, n)`-symmetry with `Ω^{m,n−1} = 0`: `B = (−i)^{n−1} S^{n−1}_A(T)/(n−1)!`
/// is PSD and `T` is `(B, m)`-isometric. The companion statements: for odd
/// `n`, `(−i)^{n−1} Ω^{m−1,n−1} ≥ 0`; for even `n`, `Ω^{m−1,n−1} = 0`.
fn symmetric_transfer(a: &CMatrix, t: &CMatrix, m: u32, n: u32) -> Result<Option<(f64, f64)>, LabError> {
    let mut words = Words::from_parts(a, t);
    let hyp = words.symmetry(n, false).residual().max(words.omega(m, n - 1, false).residual());
    if !(hyp <= HYPOTHESIS_TOL) {
        return Ok(None);
    }
    let phase = Complex64::new(0.0, -1.0).powu(n - 1);
    let b = scaled(&words.symmetry(n - 1, false), phase / factorial(n - 1));
    let mut residual = psd_violation(&b)?.max(isometry_with_weight(&b, t, m));
    let lower = words.omega(m - 1, n - 1, false);
    residual = residual.max(if n % 2 == 1 { psd_violation(&scaled(&lower, phase))? } else { lower.residual() });
    Ok(Some((residual, hyp)))
}

/// `±1 + N_r` with `2r − 1 = order`, plus up to two scalar blocks drawn by `extra`.
fn transfer_operator(rng: &mut Rng, order: u32, extra: impl Fn(&mut Rng) -> Complex64) -> CMatrix {
    let r = order.div_ceil(2).max(1) as usize;
    let mut blocks = vec![jordan_block(Complex64::new(sign(rng), 0.0), r)];
    for _ in 0..rng.index(3) {
        let lambda = extra(rng);
        blocks.push(jordan_block(lambda, 1));
    }
    block_diag(&blocks)
}

/// Positivity of the derived weights and the transferred memberships.
pub(crate) fn positivity_transfer(rng: &mut Rng, trial: usize, _tol: f64) -> Result<Trial, LabError> {
    let family = trial % 5;
    let (case, isometric, m, n, t) = match family {
        0 => {
            let d = between(rng, 2, 4);
            let t = CMatrix::diag_real(&(0..d).map(|_| sign(rng)).collect::<Vec<_>>());
            ("involution", rng.uniform() < 0.5, 1, 1, t)
        }
        1 | 2 => {
            // isometric side: m odd keeps B nonzero, n ≥ m keeps the block symmetric
            let m = [1, 3][rng.index(2)];
            let n = m + rng.index(3) as u32;
            let t0 = transfer_operator(rng, m, |r| if m >= 2 { r.unimodular() } else { Complex64::new(sign(r), 0.0) });
            let case = if family == 1 { "isometric_jordan" } else { "isometric_solver" };
            (case, true, m, n, t0)
        }
        _ => {
            let n = between(rng, 1, 3) as u32;
            let m = n + rng.index(3) as u32;
            let t0 = transfer_operator(rng, n, |r| if n >= 2 { real_eigenvalue(r) } else { Complex64::new(sign(r), 0.0) });
            let case = if family == 3 { "symmetric_jordan" } else { "symmetric_solver" };
            (case, false, m, n, t0)
        }
    };
    let d = t.rows();
    let w = transport(rng, &CMatrix::identity(d), &t)?;
    let w = if case.ends_with("solver") {
        let kinds = if isometric {
            [BracketKind::Isometry(m), BracketKind::Omega(m - 1, n)]
        } else {
            [BracketKind::Symmetry(n), BracketKind::Omega(m, n - 1)]
        };
        match solver_weight(rng, w.t(), &kinds) {
            Some(found) => found,
            None => return Ok(Trial::skip(case, "solver found no weight")),
        }
    } else if case == "involution" {
        WeightedOperator::new(CMatrix::identity(d), t)?
    } else {
        w
    };
    let outcome = if isometric {
        isometric_transfer(w.a(), w.t(), m, n)?
    } else {
        symmetric_transfer(w.a(), w.t(), m, n)?
    };
    let side = if isometric { "isometric" } else { "symmetric" };
    match outcome {
        Some((residual, hyp)) => Ok(Trial::checked(case, residual, Instance::new(w.a(), w.t()))
            .note(format!("{side} side at ({m}, {n}), hypothesis {hyp:e}"))),
        None => Ok(Trial::skip(case, format!("{side} hypotheses fail at ({m}, {n})"))),
    }
}

/// Inverses and powers of members, odd powers of skew members.
pub(crate) fn inverse_and_powers(rng: &mut Rng, trial: usize, _tol: f64) -> Result<Trial, LabError> {
    let d = between(rng, 2, 5);
    let (m, n) = orders(rng, 2, 2);
    let (case, w, m, n, skew) = match trial % 4 {
        0 => ("cyclic_example", moved_cyclic(rng)?, 1, 1, false),
        1 => {
            let source = if rng.uniform() < 0.5 { Source::Jordan } else { Source::Singular };
            let case = if source == Source::Jordan { "jordan_member" } else { "singular_member" };
            (case, member(rng, d, m, n, false, source)?.expect("direct source"), m, n, false)
        }
        2 => ("skew_member", member(rng, d, m, n, true, Source::Jordan)?.expect("direct source"), m, n, true),
        _ => match member(rng, d.min(4), m, n, false, Source::Solver)? {
            Some(w) => ("solver_member", w, m, n, false),
            None => return Ok(Trial::skip("solver_member", "solver found no weight")),
        },
    };
    require_member!(case, w, m, n, skew);
    let t = w.t();
    let Ok(inv) = t.inverse() else {
        return Ok(Trial::skip(case, "operator is singular"));
    };
    let condition = t.norm_fro() * inv.norm_fro();
    if condition > 1e8 {
        return Ok(Trial::skip(case, format!("operator is ill conditioned ({condition:e})")));
    }
    // the rows outside the range of a singular weight grow under powers and
    // their rounding leaks into the visible block, so the cube is left out there
    let exponents: &[u32] = match (skew, case) {
        (true, _) => &[3],
        (false, "singular_member") => &[2],
        _ => &[2, 3],
    };
    let powers: Vec<(u32, CMatrix)> = exponents.iter().map(|&k| (k, t.pow(k))).collect();
    let mut residual = omega_residual(w.a(), &inv, m, n, skew);
    for (_, p) in &powers {
        residual = residual.max(omega_residual(w.a(), p, m, n, skew));
    }
    let listed: Vec<u32> = powers.iter().map(|(k, _)| *k).collect();
    Ok(Trial::checked(case, residual, Instance::new(w.a(), t))
        .note(format!("({m}, {n}){} inverse and powers {listed:?}, condition {condition:.1e}", if skew { " skew" } else { "" })))
}

/// `Σ_k (−1)^{p−k} C(p,k) k^i T*^k S^n T^k = 0` for `p ≥ m`, `i ≤ p − m`, and the
/// isometric family for `p ≥ n`, `i ≤ p − n`.
pub(crate) fn weighted_sums(rng: &mut Rng, trial: usize, _tol: f64) -> Result<Trial, LabError> {
    let d = between(rng, 2, 5);
    let (m, n) = orders(rng, 3, 3);
    let (case, w, m, n) = match trial % 3 {
        0 => ("cyclic_example", moved_cyclic(rng)?, 1, 1),
        1 => {
            let source = if rng.uniform() < 0.5 { Source::Jordan } else { Source::Singular };
            ("jordan_member", member(rng, d, m, n, false, source)?.expect("direct source"), m, n)
        }
        _ => match member(rng, d.min(4), m, n, false, Source::Solver)? {
            Some(w) => ("solver_member", w, m, n),
            None => return Ok(Trial::skip("solver_member", "solver found no weight")),
        },
    };
    require_member!(case, w, m, n, false);
    let mut residual: f64 = 0.0;
    for (form, base) in [(SumForm::Symmetry, m), (SumForm::Isometry, n)] {
        for p in base..=base + 2 {
            for i in 0..=p - base {
                residual = residual.max(weighted_sum_identity(&w, m, n, p, i, form)?.residual());
            }
        }
    }
    Ok(Trial::checked(case, residual, Instance::new(w.a(), w.t())).note(format!("({m}, {n}), p up to two above the order")))
}
