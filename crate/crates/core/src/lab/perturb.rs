//! Perturbation of members by doubly commuting nilpotent operators.

use num_complex::Complex64;

use super::instances::*;
use super::{Instance, LabError, Trial};
use crate::bracket::{double_commutator, perturb_expansion_rhs, relative, BracketError, Words};
use crate::genlib::{doubly_commuting_pair, ex1_3x3, jordan_nilpotent, k_block, transport, Rng};
use crate::mat::{kron, CMatrix, WeightedOperator};

/// Lifted orders for a nilpotent of order `r`.
fn lifted(m: u32, n: u32, r: u32) -> (u32, u32) {
    (m + 2 * r - 2, n + 2 * r - 1)
}

/// Residual of `Ω` (or `Λ`) at the lifted orders for `T + Q`, and for
/// `(T + Q)²` when `square`. Odd powers only keep the skew class, and squares of
/// order-3 perturbations lose too many digits to the rounding of `T`.
fn lifted_residual(a: &CMatrix, sum: &CMatrix, big_m: u32, big_n: u32, skew: bool, square: bool) -> f64 {
    let first = omega_residual(a, sum, big_m, big_n, skew);
    if square {
        first.max(omega_residual(a, &sum.pow(2), big_m, big_n, skew))
    } else {
        first
    }
}

fn commuting(t: &CMatrix, q: &CMatrix) -> f64 {
    relative(double_commutator(t, q), t.norm_fro() * q.norm_fro())
}

/// `U·diag·U*` with a diagonal member, a diagonal commuting partner and a positive diagonal weight.
fn commuting_block(rng: &mut Rng) -> Result<(WeightedOperator, CMatrix), LabError> {
    let d = between(rng, 2, 3);
    let u = rng.unitary(d);
    let conj = |diag: &[Complex64]| &(&u * &CMatrix::diag(diag)) * &u.adjoint();
    let r0: Vec<Complex64> =
        (0..d).map(|_| if rng.uniform() < 0.5 { rng.unimodular() } else { real_eigenvalue(rng) }).collect();
    let s0: Vec<Complex64> = (0..d).map(|_| rng.complex_gaussian()).collect();
    let a0: Vec<Complex64> = (0..d).map(|_| Complex64::new(rng.range(0.2, 2.0), 0.0)).collect();
    let a = conj(&a0).hermitian_part();
    Ok((WeightedOperator::new(a, conj(&r0))?, conj(&s0)))
}

/// Members perturbed by doubly commuting nilpotents stay members at the lifted
/// orders, as do their squares; the block `[[R, S], [0, R]]` with weight `A ⊕ A`.
pub(crate) fn nilpotent_perturbation(rng: &mut Rng, trial: usize, _tol: f64) -> Result<Trial, LabError> {
    match trial % 4 {
        family @ (0 | 1) => {
            let case = if family == 0 { "kronecker" } else { "zero_perturbation" };
            let r = if family == 0 { between(rng, 2, 3) } else { 1 };
            let d = between(rng, 2, 3);
            let (m, n) = orders(rng, 2, 2);
            let skew = rng.uniform() < 0.5;
            let source = if rng.uniform() < 0.5 { Source::Jordan } else { Source::Singular };
            let base = member(rng, d, m, n, skew, source)?.expect("direct source");
            let nil = jordan_nilpotent(r, r)?;
            let (t, q) = doubly_commuting_pair(base.t(), &nil);
            let b = if rng.uniform() < 0.5 { CMatrix::identity(r) } else { rng.psd(r) };
            let a = kron(base.a(), &b);
            let w = WeightedOperator::new(a, t.clone())?;
            let hyp = omega_residual(w.a(), &t, m, n, skew).max(if r > 1 { commuting(&t, &q) } else { 0.0 });
            if !(hyp <= HYPOTHESIS_TOL) || !q.pow(r as u32).is_zero() {
                return Ok(Trial::skip(case, format!("hypotheses fail ({hyp:e})")));
            }
            let sum = &t + &q;
            let (big_m, big_n) = lifted(m, n, r as u32);
            let square = !skew && r <= 2;
            let mut residual = lifted_residual(w.a(), &sum, big_m, big_n, skew, square);
            if r == 1 {
                residual = residual.max(omega_residual(w.a(), &sum, m, n, skew));
            }
            let expanded = match perturb_expansion_rhs(&w, &q, m, n, skew) {
                Ok(b) => b,
                Err(BracketError::NotDoublyCommuting { commutator }) => {
                    return Ok(Trial::skip(case, format!("not doubly commuting: {commutator:e}")));
                }
                Err(e) => return Err(e.into()),
            };
            let direct = Words::from_parts(w.a(), &sum).omega(m, n, skew);
            residual = residual.max(direct.gap(&expanded));
            Ok(Trial::checked(case, residual, Instance::new(w.a(), &t).with("Q", &q)).note(format!(
                "{}({m}, {n}) with r = {r} lifted to ({big_m}, {big_n}){}",
                if skew { "skew " } else { "" },
                if square { ", first and second powers" } else { "" }
            )))
        }
        family => {
            let (case, base, s) = if family == 2 {
                let (w, s) = commuting_block(rng)?;
                ("commuting_block", w, s)
            } else {
                let w = ex1_3x3();
                let s = w.t().clone();
                ("cyclic_block", w, s)
            };
            let (m, n) = (1, 1);
            let hyp = omega_residual(base.a(), base.t(), m, n, false).max(commuting(base.t(), &s));
            if !(hyp <= HYPOTHESIS_TOL) {
                return Ok(Trial::skip(case, format!("hypotheses fail ({hyp:e})")));
            }
            let k = k_block(&base, &s)?;
            // a random similarity of the whole block keeps every statement
            let k = transport(rng, k.a(), k.t())?;
            let (big_m, big_n) = lifted(m, n, 2);
            let residual = lifted_residual(k.a(), k.t(), big_m, big_n, false, true);
            Ok(Trial::checked(case, residual, Instance::new(k.a(), k.t()).with("S", &s))
                .note(format!("block of order 2 lifted to ({big_m}, {big_n}), first and second powers")))
        }
    }
}
