//! Tolerance-based membership, order profiles, left inverses and the
//! isosymmetric plus skew decomposition.

use serde::Serialize;
use thiserror::Error;

use crate::bracket::{
    bracket, left_inverse_bracket, omega_recurrence_step, BracketError, BracketKind, Direction, Words, MAX_ORDER,
};
use crate::mat::{hermitian_eigen, CMatrix, MatError, WeightedOperator};

/// Default relative tolerance for "bracket = 0".
pub const DEFAULT_RHO: f64 = 1e-10;

/// Largest grid accepted by [`minimal_orders`].
pub const MAX_PROFILE_ORDER: u32 = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("weight is not invertible (min eigenvalue {min_eigenvalue:e})")]
    SingularWeight { min_eigenvalue: f64 },
    #[error(transparent)]
    Bracket(#[from] BracketError),
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// A class given by the vanishing of one bracket, at relative tolerance `rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassQuery {
    kind: BracketKind,
    rho: f64,
}

impl ClassQuery {
    pub fn new(kind: BracketKind, rho: f64) -> Result<Self, ClassifyError> {
        if !(rho > 0.0) {
            return Err(ClassifyError::InvalidQuery(format!("tolerance must be positive, got {rho}")));
        }
        kind.check()?;
        Ok(Self { kind, rho })
    }

    pub fn with_default(kind: BracketKind) -> Result<Self, ClassifyError> {
        Self::new(kind, DEFAULT_RHO)
    }

    pub fn kind(&self) -> BracketKind {
        self.kind
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

/// A verdict together with the relative residual it was decided on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub residual: f64,
}

impl Membership {
    fn decide(residual: f64, rho: f64) -> Self {
        Self { member: residual <= rho, residual }
    }
}

pub fn is_member(w: &WeightedOperator, q: &ClassQuery) -> Result<Membership, ClassifyError> {
    let b = bracket(w, q.kind)?;
    Ok(Membership::decide(b.residual(), q.rho))
}

/// Membership grid over `0 ≤ m ≤ max_m`, `0 ≤ n ≤ max_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderProfile {
    pub max_m: u32,
    pub max_n: u32,
    pub skew: bool,
    /// `member[m][n]`, upward closed.
    pub member: Vec<Vec<bool>>,
    pub residual: Vec<Vec<f64>>,
    /// Minimal members, pairwise incomparable.
    pub minimal: Vec<(u32, u32)>,
    /// Cells under the tolerance whose upper cone is not, so not counted as members.
    pub warnings: Vec<(u32, u32)>,
}

impl OrderProfile {
    pub fn is_member(&self, m: u32, n: u32) -> bool {
        self.member.get(m as usize).and_then(|r| r.get(n as usize)).copied().unwrap_or(false)
    }
}

/// Membership of every `Ω^{m,n}` (or `Λ^{m,n}`) on the grid, computed by
/// recurrence chains from `A`.
pub fn minimal_orders(
    w: &WeightedOperator,
    max_m: u32,
    max_n: u32,
    rho: f64,
    skew: bool,
) -> Result<OrderProfile, ClassifyError> {
    if max_m > MAX_PROFILE_ORDER || max_n > MAX_PROFILE_ORDER {
        return Err(ClassifyError::InvalidQuery(format!("grid ({max_m}, {max_n}) exceeds {MAX_PROFILE_ORDER}")));
    }
    if !(rho > 0.0) {
        return Err(ClassifyError::InvalidQuery(format!("tolerance must be positive, got {rho}")));
    }
    let (mm, nn) = (max_m as usize, max_n as usize);
    let mut words = Words::new(w);
    let mut raw = vec![vec![false; nn + 1]; mm + 1];
    let mut residual = vec![vec![0.0; nn + 1]; mm + 1];
    let mut row_start = w.a().clone();
    for m in 0..=max_m {
        let mut value = row_start.clone();
        for n in 0..=max_n {
            let scale = words.omega_scale(m, n);
            let r = crate::bracket::relative(value.norm_fro(), scale);
            residual[m as usize][n as usize] = r;
            raw[m as usize][n as usize] = r <= rho;
            if n < max_n {
                value = omega_recurrence_step(w.t(), &value, Direction::N, skew);
            }
        }
        row_start = omega_recurrence_step(w.t(), &row_start, Direction::M, skew);
    }
    let mut member = vec![vec![false; nn + 1]; mm + 1];
    let mut warnings = Vec::new();
    for m in 0..=mm {
        for n in 0..=nn {
            if !raw[m][n] {
                continue;
            }
            let closed = (m..=mm).all(|p| (n..=nn).all(|q| raw[p][q]));
            if closed {
                member[m][n] = true;
            } else {
                warnings.push((m as u32, n as u32));
            }
        }
    }
    let mut minimal = Vec::new();
    for m in 0..=mm {
        for n in 0..=nn {
            let below_m = m > 0 && member[m - 1][n];
            let below_n = n > 0 && member[m][n - 1];
            if member[m][n] && !below_m && !below_n {
                minimal.push((m as u32, n as u32));
            }
        }
    }
    Ok(OrderProfile { max_m, max_n, skew, member, residual, minimal, warnings })
}

/// Whether `R` is a left `(A, m)`-inverse of `S`.
pub fn left_inverse_check(
    a: &CMatrix,
    r: &CMatrix,
    s: &CMatrix,
    m: u32,
    rho: f64,
) -> Result<Membership, ClassifyError> {
    if m > MAX_ORDER {
        return Err(BracketError::OrderTooLarge { order: m }.into());
    }
    let b = left_inverse_bracket(a, r, s, m)?;
    Ok(Membership::decide(b.residual(), rho))
}

/// `R = (T + A⁻¹T*A)/2` and `S = (T − A⁻¹T*A)/2` for invertible `A`.
/// `R` is `A`-selfadjoint and `S` is `A`-skew-adjoint, so `R` is
/// `A`-isosymmetric and `S` skew `A`-isosymmetric.
pub fn decompose_iso_skew(w: &WeightedOperator) -> Result<(CMatrix, CMatrix), ClassifyError> {
    let eig = hermitian_eigen(w.a())?;
    let norm = eig.max().abs().max(eig.min().abs());
    if eig.min() <= 1e-8 * norm {
        return Err(ClassifyError::SingularWeight { min_eigenvalue: eig.min() });
    }
    let ainv = eig.reconstruct_with(|l| 1.0 / l);
    let reflected = &(&ainv * &w.t().adjoint()) * w.a();
    let r = (w.t() + &reflected).scale_real(0.5);
    let s = w.t() - &r;
    Ok((r, s))
}
