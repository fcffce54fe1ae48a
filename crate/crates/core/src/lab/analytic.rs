//! Exponential expansions, left inverses of exponentials, and order reduction.

use num_complex::Complex64;

use super::instances::*;
use super::{Instance, LabError, Trial};
use crate::bracket::{
    binomial, exp_bracket_sum, exp_expansion_lhs, exp_expansion_rhs, left_inverse_bracket, relative, Bracket, BracketKind,
    Words,
};
use crate::genlib::{skew_member_instance, transport, Rng};
use crate::mat::{kron, matrix_exp, CMatrix, WeightedOperator};

const EXP_TIMES: [f64; 2] = [0.1, 0.5];
/// Sample points for hypotheses stated for every real `s`.
pub(crate) const HYPOTHESIS_TIMES: [f64; 3] = [0.1, 0.5, 1.0];

/// Expansion, bracket sum and exponential membership for one member.
fn exponential_member(w: &WeightedOperator, m: u32, n: u32, skew: bool) -> Result<(f64, usize), LabError> {
    let mut residual: f64 = 0.0;
    let mut gated = 0;
    let iso = Words::new(w).isometry(m);
    let weight_is_psd = psd_violation(&iso)? <= HYPOTHESIS_TOL;
    for s in EXP_TIMES {
        for k in 1..=3 {
            let lhs = exp_expansion_lhs(w, m, s, k, skew)?;
            let rhs = exp_expansion_rhs(w, m, n, s, k, skew)?;
            residual = residual.max(lhs.gap(&rhs));
        }
        residual = residual.max(exp_bracket_sum(w, m, n, s, skew)?.residual());
        if weight_is_psd {
            // e^{isT} as an (I^m_A(T), n)-isometry, or left (I^m_A(T), n)-invertible
            gated += 1;
            let e = matrix_exp(w.t(), s);
            let left = if skew { matrix_exp(&w.t().adjoint(), s) } else { e.adjoint() };
            // the weight I^m_A(T) carries the scale of its own cancellation
            let b = left_inverse_bracket(&iso.value, &left, &e, n)?;
            let carried = b.scale * iso.scale / iso.value.norm_fro().max(f64::MIN_POSITIVE);
            residual = residual.max(relative(b.value.norm_fro(), carried));
        }
    }
    Ok((residual, gated))
}

/// `A₁ ⊗ A₂` with `R = R₀ ⊗ I` and `S = I ⊗ S₀`, where `R₀` is skew
/// `(A₁, m)`-symmetric and `S₀` skew `(A₂, n)`-symmetric.
fn skew_pair(rng: &mut Rng, m: u32, n: u32, hermitian: bool) -> Result<(CMatrix, CMatrix, CMatrix), LabError> {
    let (a1, r0, a2, s0) = if hermitian {
        let i = crate::mat::I;
        (CMatrix::identity(2), rng.hermitian(2).scale(i), CMatrix::identity(2), rng.hermitian(2).scale(i))
    } else {
        let w1 = skew_member_instance(rng, 2, 0, m, false)?;
        let w2 = skew_member_instance(rng, 2, 0, n, false)?;
        (w1.a().clone(), w1.t().clone(), w2.a().clone(), w2.t().clone())
    };
    let id = CMatrix::identity(2);
    Ok((kron(&a1, &a2), kron(&r0, &id), kron(&id, &s0)))
}

/// Exponential expansion, the vanishing bracket sum, exponentials as
/// weighted isometries, and the product law for commuting skew symmetries.
pub(crate) fn exponential(rng: &mut Rng, trial: usize, _tol: f64) -> Result<Trial, LabError> {
    match trial % 4 {
        0 | 1 => {
            let (case, w, m, n, skew) = if trial.is_multiple_of(4) {
                ("cyclic_example", moved_cyclic(rng)?, 1, 1, false)
            } else {
                let d = between(rng, 2, 4);
                let (m, n) = orders(rng, 2, 2);
                let skew = rng.uniform() < 0.5;
                let source = if rng.uniform() < 0.5 { Source::Jordan } else { Source::Singular };
                ("jordan_member", member(rng, d, m, n, skew, source)?.expect("direct source"), m, n, skew)
            };
            let hyp = omega_residual(w.a(), w.t(), m, n, skew);
            if !(hyp <= HYPOTHESIS_TOL) {
                return Ok(Trial::skip(case, format!("not a member: residual {hyp:e}")));
            }
            let (residual, gated) = exponential_member(&w, m, n, skew)?;
            let note = format!(
                "({m}, {n}){} k = 1..=3, s = {EXP_TIMES:?}; exponential membership checked at {gated} times",
                if skew { " skew" } else { "" }
            );
            Ok(Trial::checked(case, residual, Instance::new(w.a(), w.t())).note(note))
        }
        family => {
            let hermitian = family == 3;
            let case = if hermitian { "hermitian_pair" } else { "skew_pair" };
            let (m, n) = if hermitian { (1, 1) } else { (between(rng, 1, 2) as u32, between(rng, 1, 2) as u32) };
            let (a, r, s) = skew_pair(rng, m, n, hermitian)?;
            let hyp = omega_residual(&a, &r, 0, m, true)
                .max(omega_residual(&a, &s, 0, n, true))
                .max(relative_commutator(&r, &s));
            if !(hyp <= HYPOTHESIS_TOL) {
                return Ok(Trial::skip(case, format!("pair hypotheses fail: {hyp:e}")));
            }
            let sum = &r + &s;
            let mut residual: f64 = 0.0;
            for t in EXP_TIMES {
                let e = matrix_exp(&sum, t);
                let left = matrix_exp(&sum.adjoint(), t);
                residual = residual.max(left_inverse_bracket(&a, &left, &e, m + n - 1)?.residual());
            }
            Ok(Trial::checked(case, residual, Instance::new(&a, &sum).with("R", &r).with("S", &s))
                .note(format!("R skew order {m}, S skew order {n}, product order {}", m + n - 1)))
        }
    }
}

fn relative_commutator(r: &CMatrix, s: &CMatrix) -> f64 {
    let scale = r.norm_fro() * s.norm_fro();
    relative(crate::bracket::double_commutator(r, s), scale)
}

/// `Σ_k (−1)^{p−k} C(p,k) L^{p−k} B E^{p−k}` with `L = e^{isT*}`, `E = e^{isT}`.
fn reversed_sum(w: &WeightedOperator, m: u32, p: u32, s: f64) -> Bracket {
    let b = Words::new(w).isometry(m);
    let l = matrix_exp(&w.t().adjoint(), s);
    let e = matrix_exp(w.t(), s);
    let d = w.dim();
    let mut value = CMatrix::zeros(d, d);
    let mut scale = 0.0;
    for k in 0..=p {
        let j = p - k;
        let c = binomial(p, k) as f64 * if (p - k).is_multiple_of(2) { 1.0 } else { -1.0 };
        let (lj, ej) = (l.pow(j), e.pow(j));
        let term = &(&lj * &b.value) * &ej;
        value.axpy(Complex64::new(c, 0.0), &term);
        scale += c.abs() * lj.norm_fro() * b.scale * ej.norm_fro();
    }
    Bracket { value, scale }
}

/// Jordan operator moved by a similarity, or with a solver weight.
fn reduction_instance(
    rng: &mut Rng,
    t0: CMatrix,
    kinds: &[BracketKind],
) -> Result<Option<(WeightedOperator, &'static str)>, LabError> {
    let w = transport(rng, &CMatrix::identity(t0.rows()), &t0)?;
    if rng.uniform() < 0.5 {
        return Ok(Some((w, "jordan")));
    }
    Ok(solver_weight(rng, w.t(), kinds).map(|w| (w, "solver_weight")))
}

fn dim_of(blocks: &[CMatrix]) -> usize {
    blocks.iter().map(CMatrix::rows).sum()
}

fn invertible(t: &CMatrix) -> bool {
    t.inverse().map(|inv| inv.norm_fro() * t.norm_fro() <= 1e8).unwrap_or(false)
}

/// Order reduction under positivity and parity, with the exponential
/// hypotheses sampled at finitely many times.
pub(crate) fn order_reduction(rng: &mut Rng, trial: usize, _tol: f64) -> Result<Trial, LabError> {
    let family = trial % 5;
    let case = ["even_isometric_order", "even_symmetric_order", "even_isometry", "even_symmetry", "skew_even_order"]
        [family];
    let skip = |why: String| Ok(Trial::skip(case, why));
    let extra = between(rng, 1, 3);
    match family {
        0 => {
            // m even, T invertible, S^n_A(T) ≥ 0  ⇒  Ω^{m−1,n} = 0
            let m = 2;
            let n = [2, 4][rng.index(2)];
            let mut blocks = vec![jordan_block(real_eigenvalue(rng), 1 + rng.index(n as usize / 2))];
            for _ in 0..extra {
                blocks.push(if n == 4 { jordan_block(rng.unimodular(), 1) } else { jordan_block(real_eigenvalue(rng), 1) });
            }
            let Some((w, source)) = reduction_instance(rng, block_diag(&blocks), &[BracketKind::Omega(m, n)])? else {
                return skip("solver found no weight".into());
            };
            let mut words = Words::new(&w);
            let sym = words.symmetry(n, false);
            let hyp = words.omega(m, n, false).residual().max(psd_violation(&sym)?);
            if !(hyp <= HYPOTHESIS_TOL) || !invertible(w.t()) {
                return skip(format!("{source}: hypotheses fail ({hyp:e})"));
            }
            let residual = words.omega(m - 1, n, false).residual();
            Ok(Trial::checked(case, residual, Instance::new(w.a(), w.t())).note(format!("{source} ({m}, {n})")))
        }
        1 => {
            // n even, I^m_A(T) ≥ 0  ⇒  Ω^{m,n−1} = 0
            let m = between(rng, 1, 2) as u32;
            let n = [2, 4][rng.index(2)];
            let mut blocks = vec![jordan_block(rng.unimodular(), 1 + rng.index(m.div_ceil(2) as usize))];
            for _ in 0..extra {
                let mut lambda = real_eigenvalue(rng);
                if m % 2 == 1 && lambda.norm() < 1.0 {
                    lambda = 1.0 / lambda;
                }
                blocks.push(jordan_block(lambda, 1));
            }
            let Some((w, source)) = reduction_instance(rng, block_diag(&blocks), &[BracketKind::Omega(m, n)])? else {
                return skip("solver found no weight".into());
            };
            let mut words = Words::new(&w);
            let iso = words.isometry(m);
            let hyp = words.omega(m, n, false).residual().max(psd_violation(&iso)?);
            if !(hyp <= HYPOTHESIS_TOL) {
                return skip(format!("{source}: hypotheses fail ({hyp:e})"));
            }
            let residual = words.omega(m, n - 1, false).residual();
            Ok(Trial::checked(case, residual, Instance::new(w.a(), w.t())).note(format!("{source} ({m}, {n})")))
        }
        2 => {
            // m even, invertible (A, m)-isometry  ⇒  (A, m − 1)-isometry
            let m = [2, 4][rng.index(2)];
            let blocks: Vec<CMatrix> =
                (0..extra).map(|_| jordan_block(rng.unimodular(), 1 + rng.index(m as usize / 2))).collect();
            // a solver weight meets I^m = 0 only to the accuracy of its nullspace,
            // which I^{m−1} amplifies when unimodular eigenvalues cluster
            let (w, source) = (transport(rng, &CMatrix::identity(dim_of(&blocks)), &block_diag(&blocks))?, "jordan");
            let mut words = Words::new(&w);
            let hyp = words.isometry(m).residual();
            if !(hyp <= HYPOTHESIS_TOL) || !invertible(w.t()) {
                return skip(format!("{source}: hypotheses fail ({hyp:e})"));
            }
            let residual = words.isometry(m - 1).residual();
            let min = relative_min_eigenvalue(w.a())?;
            Ok(Trial::checked(case, residual, Instance::new(w.a(), w.t()))
                .note(format!("{source} m = {m}, hypothesis {hyp:e}, relative weight minimum {min:e}")))
        }
        3 => {
            // n even, (A, n)-symmetry  ⇒  (A, n − 1)-symmetry
            let n = [2, 4][rng.index(2)];
            let involution = rng.uniform() < 0.25;
            let blocks: Vec<CMatrix> = (0..extra)
                .map(|_| {
                    if involution {
                        jordan_block(Complex64::new(sign(rng), 0.0), 1)
                    } else {
                        jordan_block(real_eigenvalue(rng), 1 + rng.index(n as usize / 2))
                    }
                })
                .collect();
            let t0 = block_diag(&blocks);
            let (w, source) = if involution {
                (WeightedOperator::new(CMatrix::identity(t0.rows()), t0)?, "involution")
            } else {
                match reduction_instance(rng, t0, &[BracketKind::Symmetry(n)])? {
                    Some(found) => found,
                    None => return skip("solver found no weight".into()),
                }
            };
            let mut words = Words::new(&w);
            let hyp = words.symmetry(n, false).residual();
            if !(hyp <= HYPOTHESIS_TOL) {
                return skip(format!("{source}: hypotheses fail ({hyp:e})"));
            }
            let residual = words.symmetry(n - 1, false).residual();
            Ok(Trial::checked(case, residual, Instance::new(w.a(), w.t())).note(format!("{source} n = {n}")))
        }
        _ => {
            // skew member with n even, both exponential sums ≥ 0 at the sampled times
            let m = rng.index(3) as u32;
            let n = [2, 4][rng.index(2)];
            let d = between(rng, 2, 4);
            let source = Source::pick(rng);
            let Some(w) = member(rng, d, m, n, true, source)? else {
                return skip("solver found no weight".into());
            };
            let mut hyp = omega_residual(w.a(), w.t(), m, n, true);
            let mut sums = Vec::new();
            for s in HYPOTHESIS_TIMES {
                let h1 = exp_bracket_sum(&w, m, n - 1, s, true)?;
                let h2 = reversed_sum(&w, m, n - 1, s);
                hyp = hyp.max(psd_violation(&h1)?).max(psd_violation(&h2)?);
                sums.push(h1);
            }
            if !(hyp <= HYPOTHESIS_TOL) {
                return skip(format!("{}: sampled hypotheses fail ({hyp:e})", source.label()));
            }
            // the lower-order sum vanishes, and so does the lower-order bracket
            let mut residual = omega_residual(w.a(), w.t(), m, n - 1, true);
            for h1 in &sums {
                residual = residual.max(h1.residual());
            }
            Ok(Trial::checked(case, residual, Instance::new(w.a(), w.t()))
                .note(format!("{} skew ({m}, {n}); hypotheses sampled at s = {HYPOTHESIS_TIMES:?}", source.label())))
        }
    }
}
