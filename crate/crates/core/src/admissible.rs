//! Search for a nonzero positive semidefinite weight `A` with `Ω^{m,n}_A(T) = 0`.
//!
//! The map `A ↦ Ω^{m,n}_A(T)` is real-linear on Hermitian matrices, so the
//! admissible weights are the PSD cone intersected with its Hermitian
//! nullspace. The search is heuristic: a trace-weighted guess first, then
//! seeded alternating projections between the cone and the nullspace, with a
//! facial reduction step when the iterates settle on a common kernel.
//! `NotFound` means the search failed, not that no weight exists.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bracket::{omega_chain, Bracket, BracketError, BracketKind, Words};
use crate::genlib::Rng;
use crate::mat::{hermitian_eigen, hermitian_nullspace, CMatrix, HermitianMap, MatError, WeightedOperator, ONE};

/// Largest operator dimension accepted.
pub const MAX_ADMISSIBLE_DIM: usize = 16;
/// Largest `m + n` accepted.
pub const MAX_ADMISSIBLE_ORDER: u32 = 8;
/// Singular values at most this fraction of the largest span the nullspace.
pub const NULLSPACE_TOL: f64 = 1e-10;
/// Acceptance bound on the certified residual.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Acceptance bound on `−λ_min` of the normalized weight.
pub const PSD_MARGIN_TOL: f64 = 1e-10;
/// Alternating projection iterations per attempt.
pub const PROJECTION_ITERATIONS: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdmissibleError {
    #[error("no admissible weight found in {attempts} attempts (nullspace dimension {nullspace_dim})")]
    NotFound { attempts: usize, nullspace_dim: usize },
    #[error("weight is zero")]
    ZeroWeight,
    #[error("problem too large: dimension {dim}, order {order}")]
    TooLarge { dim: usize, order: u32 },
    #[error(transparent)]
    Bracket(#[from] BracketError),
    #[error(transparent)]
    Mat(#[from] MatError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibleSolution {
    /// Hermitian PSD weight with `‖A‖_F = 1`.
    #[serde(rename = "A")]
    pub a: CMatrix,
    pub residual: f64,
    pub nullspace_dim: usize,
    /// `λ_min(A)`.
    pub psd_margin: f64,
}

/// Residuals of `Ω^{m,n}_A(T)` from three independent evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    pub symmetry_form: f64,
    pub isometry_form: f64,
    pub chain: f64,
    pub max: f64,
}

fn total_order(kind: BracketKind) -> u32 {
    match kind {
        BracketKind::Isometry(m) => m,
        BracketKind::Symmetry(n) | BracketKind::SkewSymmetry(n) => n,
        BracketKind::Omega(m, n) | BracketKind::Lambda(m, n) => m + n,
    }
}

fn check_size(t: &CMatrix, kinds: &[BracketKind]) -> Result<usize, AdmissibleError> {
    let d = t.ensure_square()?;
    let order = kinds.iter().map(|k| total_order(*k)).max().unwrap_or(0);
    if d > MAX_ADMISSIBLE_DIM || order > MAX_ADMISSIBLE_ORDER {
        return Err(AdmissibleError::TooLarge { dim: d, order });
    }
    Ok(d)
}

/// Any bracket for a Hermitian, not necessarily PSD, weight.
fn eval_kind(words: &mut Words, kind: BracketKind) -> Bracket {
    match kind {
        BracketKind::Isometry(m) => words.isometry(m),
        BracketKind::Symmetry(n) => words.symmetry(n, false),
        BracketKind::SkewSymmetry(n) => words.symmetry(n, true),
        BracketKind::Omega(m, n) => words.omega(m, n, false),
        BracketKind::Lambda(m, n) => words.omega(m, n, true),
    }
}

fn joint_map(t: &CMatrix, q: Option<&CMatrix>, kinds: &[BracketKind]) -> Result<HermitianMap, MatError> {
    let dim = q.map_or(t.rows(), |q| q.cols());
    HermitianMap::from_fn(dim, |h| {
        let a = match q {
            Some(q) => &(q * h) * &q.adjoint(),
            None => h.clone(),
        };
        let mut words = Words::from_parts(&a, t);
        kinds.iter().map(|k| eval_kind(&mut words, *k).value).collect()
    })
}

/// `A ↦ Ω^{m,n}_A(T)` tabulated on the Hermitian basis.
pub fn constraint_map(t: &CMatrix, m: u32, n: u32) -> Result<HermitianMap, AdmissibleError> {
    constraint_map_joint(t, &[BracketKind::Omega(m, n)])
}

/// `A ↦ (B_1(A), …, B_k(A))` for several brackets of the same `T`.
pub fn constraint_map_joint(t: &CMatrix, kinds: &[BracketKind]) -> Result<HermitianMap, AdmissibleError> {
    check_size(t, kinds)?;
    Ok(joint_map(t, None, kinds)?)
}

/// Largest relative residual over the given brackets.
pub fn joint_residual(t: &CMatrix, a: &CMatrix, kinds: &[BracketKind]) -> f64 {
    let mut words = Words::from_parts(a, t);
    kinds.iter().map(|k| eval_kind(&mut words, *k).residual()).fold(0.0, f64::max)
}

/// Recomputes `Ω^{m,n}_A(T)` through both dual forms and the recurrence chain.
pub fn certify(t: &CMatrix, a: &CMatrix, m: u32, n: u32) -> Result<Certificate, AdmissibleError> {
    if a.norm_fro() == 0.0 {
        return Err(AdmissibleError::ZeroWeight);
    }
    let mut words = Words::from_parts(a, t);
    let symmetry_form = words.omega(m, n, false).residual();
    let isometry_form = words.omega_dual(m, n, false).residual();
    let scale = words.omega_scale(m, n);
    let w = WeightedOperator::new(a.clone(), t.clone())?;
    let chain_value = omega_chain(&w, m, n, false)?.value;
    let chain = crate::bracket::relative(chain_value.norm_fro(), scale);
    let max = symmetry_form.max(isometry_form).max(chain);
    Ok(Certificate { symmetry_form, isometry_form, chain, max })
}

/// Orthonormal basis of a subspace of Hermitian matrices, with projection.
struct Subspace {
    basis: Vec<CMatrix>,
}

impl Subspace {
    fn coords(&self, x: &CMatrix) -> Vec<f64> {
        self.basis.iter().map(|b| b.real_inner(x)).collect()
    }

    fn combine(&self, coords: &[f64]) -> CMatrix {
        let d = self.basis[0].rows();
        let mut out = CMatrix::zeros(d, d);
        for (c, b) in coords.iter().zip(&self.basis) {
            out.axpy(ONE.scale(*c), b);
        }
        out
    }

    fn project(&self, x: &CMatrix) -> CMatrix {
        self.combine(&self.coords(x))
    }
}

fn normalized(x: &CMatrix) -> Option<CMatrix> {
    let n = x.norm_fro();
    (n > 0.0 && n.is_finite()).then(|| x.scale_real(1.0 / n))
}

fn clip(x: &CMatrix) -> Result<CMatrix, MatError> {
    Ok(hermitian_eigen(x)?.reconstruct_with(|l| l.max(0.0)))
}

/// A normalized candidate when it meets both acceptance bounds.
fn accept(t: &CMatrix, x: &CMatrix, kinds: &[BracketKind]) -> Option<(CMatrix, f64, f64)> {
    let a = normalized(&x.hermitian_part())?;
    let margin = hermitian_eigen(&a).ok()?.min();
    if margin < -PSD_MARGIN_TOL {
        return None;
    }
    let residual = match kinds {
        [BracketKind::Omega(m, n)] => certify(t, &a, *m, *n).ok()?.max,
        _ => joint_residual(t, &a, kinds),
    };
    (residual <= RESIDUAL_TOL).then_some((a, residual, margin))
}

/// Alternating projection between the nullspace and the PSD cone.
fn project_alternating(space: &Subspace, start: CMatrix) -> Result<CMatrix, MatError> {
    let mut x = start;
    for _ in 0..PROJECTION_ITERATIONS {
        let p = clip(&x)?;
        let Some(next) = normalized(&space.project(&p)) else {
            break;
        };
        let moved = (&next - &x).norm_fro();
        x = next;
        if moved <= 1e-15 {
            break;
        }
    }
    Ok(x)
}

/// Orthonormal columns spanning the eigenvectors of `p` above `tol·λ_max`.
fn range_basis(p: &CMatrix, tol: f64) -> Result<Option<CMatrix>, MatError> {
    let eig = hermitian_eigen(p)?;
    let cutoff = tol * eig.max();
    let keep: Vec<usize> = (0..eig.values.len()).filter(|&k| eig.values[k] > cutoff).collect();
    if keep.is_empty() || keep.len() == p.rows() {
        return Ok(None);
    }
    let d = p.rows();
    Ok(Some(CMatrix::from_fn(d, keep.len(), |i, j| eig.vectors[(i, keep[j])])))
}

/// Solves in the reduced variable `A = Q B Q*`.
fn reduced_nullspace(t: &CMatrix, q: &CMatrix, kinds: &[BracketKind]) -> Result<Subspace, MatError> {
    let qa = q.adjoint();
    let map = joint_map(t, Some(q), kinds)?;
    let basis = hermitian_nullspace(&map, NULLSPACE_TOL)?
        .into_iter()
        .map(|b| &(q * &b) * &qa)
        .collect();
    Ok(Subspace { basis })
}

/// One seeded attempt: random start, projections, then up to two facial
/// reductions onto the range of the clipped iterate.
fn attempt(t: &CMatrix, space: &Subspace, kinds: &[BracketKind], seed: u64, index: u64) -> Option<(CMatrix, f64, f64)> {
    let mut rng = Rng::stream(seed, index);
    let mut current = Subspace { basis: space.basis.clone() };
    for _ in 0..3 {
        if current.basis.is_empty() {
            return None;
        }
        let coords: Vec<f64> = (0..current.basis.len()).map(|_| rng.gaussian()).collect();
        let start = normalized(&current.combine(&coords))?;
        let x = project_alternating(&current, start).ok()?;
        if let Some(found) = accept(t, &x, kinds) {
            return Some(found);
        }
        let p = clip(&x).ok()?;
        if let Some(found) = accept(t, &p, kinds) {
            return Some(found);
        }
        let q = range_basis(&p, 1e-6).ok()??;
        current = reduced_nullspace(t, &q, kinds).ok()?;
    }
    None
}

/// Finds a nonzero PSD `A` with `Ω^{m,n}_A(T) = 0`, normalized to `‖A‖_F = 1`.
pub fn solve_admissible(
    t: &CMatrix,
    m: u32,
    n: u32,
    attempts: usize,
    seed: u64,
) -> Result<AdmissibleSolution, AdmissibleError> {
    solve_admissible_joint(t, &[BracketKind::Omega(m, n)], attempts, seed)
}

/// Finds a nonzero PSD `A` annihilating every listed bracket of `T`.
pub fn solve_admissible_joint(
    t: &CMatrix,
    kinds: &[BracketKind],
    attempts: usize,
    seed: u64,
) -> Result<AdmissibleSolution, AdmissibleError> {
    let map = constraint_map_joint(t, kinds)?;
    let space = Subspace { basis: hermitian_nullspace(&map, NULLSPACE_TOL)? };
    let nullspace_dim = space.basis.len();
    let not_found = AdmissibleError::NotFound { attempts, nullspace_dim };
    if nullspace_dim == 0 {
        return Err(not_found);
    }
    let solution = |(a, residual, psd_margin)| AdmissibleSolution { a, residual, nullspace_dim, psd_margin };
    // projection of the identity onto the nullspace
    let guess = space.project(&CMatrix::identity(t.rows()));
    if let Some(found) = accept(t, &guess, kinds) {
        return Ok(solution(found));
    }
    (0..attempts as u64)
        .into_par_iter()
        .find_map_first(|k| attempt(t, &space, kinds, seed, k))
        .map(solution)
        .ok_or(not_found)
}
