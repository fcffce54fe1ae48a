//! Instance sources and small numeric helpers shared by the checks.

use num_complex::Complex64;

use super::LabError;
use crate::admissible::{joint_residual, solve_admissible_joint};
use crate::bracket::{relative, Bracket, BracketKind, Words};
use crate::genlib::{ex1_3x3, member_instance, transport, Rng};
use crate::mat::{direct_sum, hermitian_eigen, CMatrix, MatError, WeightedOperator, ONE, ZERO};

/// Relative tolerance for numerically verified hypotheses.
pub const HYPOTHESIS_TOL: f64 = 1e-10;

/// Attempts given to the admissible solver when it builds an instance.
const SOLVER_ATTEMPTS: usize = 20;
/// Residual a solver weight must reach to serve as an exact member. The
/// nullspace threshold also admits near-null directions, and conclusions
/// drawn from such near-members amplify their residual.
const SOLVER_EXACT: f64 = 1e-13;

/// Random `(m, n)` with `m ≤ max_m`, `n ≤ max_n` and `m + n ≥ 1`.
pub(crate) fn orders(rng: &mut Rng, max_m: u32, max_n: u32) -> (u32, u32) {
    loop {
        let m = rng.index(max_m as usize + 1) as u32;
        let n = rng.index(max_n as usize + 1) as u32;
        if m + n >= 1 {
            return (m, n);
        }
    }
}

/// Uniform integer in `lo..=hi`.
pub(crate) fn between(rng: &mut Rng, lo: usize, hi: usize) -> usize {
    lo + rng.index(hi - lo + 1)
}

/// Where a member instance comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Source {
    /// Jordan blocks with `A₀ = I`, moved by a similarity.
    Jordan,
    /// The same with a singular weight `I_k ⊕ 0`.
    Singular,
    /// A Jordan operator with a weight found by the admissible solver.
    Solver,
}

impl Source {
    pub(crate) fn pick(rng: &mut Rng) -> Self {
        [Source::Jordan, Source::Singular, Source::Solver][rng.index(3)]
    }

    pub(crate) fn label(self) -> &'static str {
        match self {
            Source::Jordan => "jordan",
            Source::Singular => "singular_weight",
            Source::Solver => "solver_weight",
        }
    }
}

/// A weight found by the solver for every listed bracket of `t`, kept only
/// when it annihilates them to rounding level.
pub(crate) fn solver_weight(rng: &mut Rng, t: &CMatrix, kinds: &[BracketKind]) -> Option<WeightedOperator> {
    let seed = rng.next_u64();
    let sol = solve_admissible_joint(t, kinds, SOLVER_ATTEMPTS, seed).ok()?;
    if !(joint_residual(t, &sol.a, kinds) <= SOLVER_EXACT) {
        return None;
    }
    WeightedOperator::new(sol.a, t.clone()).ok()
}

/// A member at `(m, n)` (a skew member with `skew`), or `None` when the solver found nothing.
pub(crate) fn member(
    rng: &mut Rng,
    dim: usize,
    m: u32,
    n: u32,
    skew: bool,
    source: Source,
) -> Result<Option<WeightedOperator>, LabError> {
    let w = member_instance(rng, dim, m, n, source == Source::Singular)?;
    let w = if skew { w.with_operator(w.t().scale(crate::mat::I))? } else { w };
    if source != Source::Solver {
        return Ok(Some(w));
    }
    let kind = if skew { BracketKind::Lambda(m, n) } else { BracketKind::Omega(m, n) };
    Ok(solver_weight(rng, w.t(), &[kind]))
}

/// The cyclic three-dimensional example moved by a random similarity.
pub(crate) fn moved_cyclic(rng: &mut Rng) -> Result<WeightedOperator, LabError> {
    let base = ex1_3x3();
    Ok(transport(rng, base.a(), base.t())?)
}

/// `λ + N_r`.
pub(crate) fn jordan_block(lambda: Complex64, r: usize) -> CMatrix {
    CMatrix::from_fn(r, r, |i, j| {
        if i == j {
            lambda
        } else if j == i + 1 {
            ONE
        } else {
            ZERO
        }
    })
}

/// Block diagonal matrix from a list of blocks.
pub(crate) fn block_diag(blocks: &[CMatrix]) -> CMatrix {
    let mut out = blocks[0].clone();
    for b in &blocks[1..] {
        out = direct_sum(&out, b);
    }
    out
}

/// `±1`.
pub(crate) fn sign(rng: &mut Rng) -> f64 {
    if rng.uniform() < 0.5 {
        -1.0
    } else {
        1.0
    }
}

/// A real number with `|x| ∈ [0.3, 2]`.
pub(crate) fn real_eigenvalue(rng: &mut Rng) -> Complex64 {
    Complex64::new(sign(rng) * rng.range(0.3, 2.0), 0.0)
}

/// Diagonal operator with unimodular or real entries, moved by a similarity.
pub(crate) fn diagonal_member(rng: &mut Rng, dim: usize) -> Result<WeightedOperator, LabError> {
    let values: Vec<Complex64> =
        (0..dim).map(|_| if rng.uniform() < 0.5 { rng.unimodular() } else { real_eigenvalue(rng) }).collect();
    Ok(transport(rng, &CMatrix::identity(dim), &CMatrix::diag(&values))?)
}

/// Relative size of `Ω^{m,n}_A(T)`, or of `Λ^{m,n}_A(T)` with `skew`.
pub(crate) fn omega_residual(a: &CMatrix, t: &CMatrix, m: u32, n: u32, skew: bool) -> f64 {
    Words::from_parts(a, t).omega(m, n, skew).residual()
}

/// `max(0, −λ_min)` of the Hermitian part relative to the bracket scale,
/// plus the relative Hermitian defect.
pub(crate) fn psd_violation(b: &Bracket) -> Result<f64, MatError> {
    let min = hermitian_eigen(&b.value.hermitian_part())?.min();
    let defect = relative(b.value.hermitian_defect(), b.scale);
    Ok(relative((-min).max(0.0), b.scale) + defect)
}

/// Bracket scaled by a complex factor.
pub(crate) fn scaled(b: &Bracket, c: Complex64) -> Bracket {
    Bracket { value: b.value.scale(c), scale: b.scale * c.norm() }
}

/// Smallest eigenvalue of a Hermitian weight relative to its largest.
pub(crate) fn relative_min_eigenvalue(a: &CMatrix) -> Result<f64, MatError> {
    let eig = hermitian_eigen(a)?;
    let top = eig.max().abs().max(eig.min().abs());
    Ok(if top == 0.0 { 0.0 } else { eig.min() / top })
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `true`, `false`, or `None` when a relative residual sits between the
/// member tolerance and the nonmember margin.
pub(crate) fn classify(residual: f64, tol: f64) -> Option<bool> {
    if residual <= tol {
        Some(true)
    } else if residual > super::NONMEMBER_MARGIN {
        Some(false)
    } else {
        None
    }
}
