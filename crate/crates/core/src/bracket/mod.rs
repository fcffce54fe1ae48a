//! Numerical bracket transforms.
//!
//! For a weight `A` and operator `T` the brackets are the operator
//! realizations of commutative symbols `p(y, x) = Σ c_ij y^i x^j`, read as
//! `Σ c_ij T*^i A T^j`:
//!
//! | bracket            | symbol                  |
//! |--------------------|-------------------------|
//! | `I^m_A(T)`         | `(yx − 1)^m`            |
//! | `S^n_A(T)`         | `(y − x)^n`             |
//! | `ζ^n_A(T)`         | `(y + x)^n`             |
//! | `Ω^{m,n}_A(T)`     | `(yx − 1)^m (y − x)^n`  |
//! | `Λ^{m,n}_A(T)`     | `(yx − 1)^m (y + x)^n`  |
//!
//! Every evaluation returns a [`Bracket`] carrying the value together with
//! the sum of the Frobenius norms of the uncombined summands, which is the
//! scale used for relative "= 0" tests.

mod identities;
mod words;

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mat::{CMatrix, MatError, WeightedOperator};

pub use identities::{
    double_commutator, exp_bracket_sum, exp_expansion_lhs, exp_expansion_rhs, lambda_translate, omega_translate,
    perturb_expansion_rhs, weighted_sum_identity, SumForm,
};
pub use words::Words;

/// Largest supported order; `C(24, 12)` stays far below `2^53`.
pub const MAX_ORDER: u32 = 24;

/// Scales below this are treated as zero and residuals become absolute.
pub const SCALE_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BracketError {
    #[error("order {order} exceeds the supported maximum of {MAX_ORDER}")]
    OrderTooLarge { order: u32 },
    #[error("operators are not doubly commuting (commutator norm {commutator:e})")]
    NotDoublyCommuting { commutator: f64 },
    #[error(transparent)]
    Mat(#[from] MatError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BracketKind {
    Isometry(u32),
    Symmetry(u32),
    SkewSymmetry(u32),
    Omega(u32, u32),
    Lambda(u32, u32),
}

impl BracketKind {
    fn orders(&self) -> (u32, u32) {
        match *self {
            BracketKind::Isometry(m) => (m, 0),
            BracketKind::Symmetry(n) | BracketKind::SkewSymmetry(n) => (0, n),
            BracketKind::Omega(m, n) | BracketKind::Lambda(m, n) => (m, n),
        }
    }

    pub fn check(&self) -> Result<(), BracketError> {
        let (m, n) = self.orders();
        check_order(m.max(n))
    }
}

/// A bracket value with the scale of its defining sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Bracket {
    pub value: CMatrix,
    pub scale: f64,
}

impl Bracket {
    /// `‖value‖_F / scale`, or the absolute norm when the scale vanishes.
    pub fn residual(&self) -> f64 {
        relative(self.value.norm_fro(), self.scale)
    }

    /// Relative gap to another evaluation of the same quantity.
    pub fn gap(&self, other: &Bracket) -> f64 {
        relative((&self.value - &other.value).norm_fro(), self.scale.max(other.scale))
    }
}

pub fn relative(norm: f64, scale: f64) -> f64 {
    if scale < SCALE_FLOOR {
        norm
    } else {
        norm / scale
    }
}

pub(crate) fn check_order(order: u32) -> Result<(), BracketError> {
    if order > MAX_ORDER {
        Err(BracketError::OrderTooLarge { order })
    } else {
        Ok(())
    }
}

/// Exact binomial coefficient from a Pascal table; zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> i64 {
    const ROWS: usize = 2 * MAX_ORDER as usize + 4;
    static TABLE: OnceLock<Vec<Vec<i64>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut rows = vec![vec![1i64]];
        for r in 1..ROWS {
            let prev = &rows[r - 1];
            let row = (0..=r)
                .map(|k| {
                    let left = if k > 0 { prev[k - 1] } else { 0 };
                    let right = if k < r { prev[k] } else { 0 };
                    left + right
                })
                .collect();
            rows.push(row);
        }
        rows
    });
    if k > n {
        return 0;
    }
    let (n, k) = (n as usize, k as usize);
    if n < ROWS {
        table[n][k]
    } else {
        (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
    }
}

fn sign(e: u32) -> f64 {
    if e.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `I^m_A(T) = Σ (−1)^{m−k} C(m,k) T*^k A T^k`.
pub fn isometry_bracket(w: &WeightedOperator, m: u32) -> Result<Bracket, BracketError> {
    check_order(m)?;
    let mut words = Words::new(w);
    Ok(words.isometry(m))
}

/// `S^n_A(T) = Σ (−1)^{n−k} C(n,k) T*^k A T^{n−k}`.
pub fn symmetry_bracket(w: &WeightedOperator, n: u32) -> Result<Bracket, BracketError> {
    check_order(n)?;
    let mut words = Words::new(w);
    Ok(words.symmetry(n, false))
}

/// `ζ^n_A(T) = Σ C(n,k) T*^k A T^{n−k}`.
pub fn skew_bracket(w: &WeightedOperator, n: u32) -> Result<Bracket, BracketError> {
    check_order(n)?;
    let mut words = Words::new(w);
    Ok(words.symmetry(n, true))
}

/// `Ω^{m,n}_A(T) = Σ_j (−1)^{m−j} C(m,j) T*^j S^n_A(T) T^j`.
pub fn omega(w: &WeightedOperator, m: u32, n: u32) -> Result<Bracket, BracketError> {
    check_order(m.max(n))?;
    Ok(Words::new(w).omega(m, n, false))
}

/// `Λ^{m,n}_A(T) = Σ_j (−1)^{m−j} C(m,j) T*^j ζ^n_A(T) T^j`.
pub fn lambda(w: &WeightedOperator, m: u32, n: u32) -> Result<Bracket, BracketError> {
    check_order(m.max(n))?;
    Ok(Words::new(w).omega(m, n, true))
}

/// The dual form of `Ω^{m,n}`: `Σ_k (−1)^{n−k} C(n,k) T*^k I^m_A(T) T^{n−k}`.
pub fn omega_dual(w: &WeightedOperator, m: u32, n: u32) -> Result<Bracket, BracketError> {
    check_order(m.max(n))?;
    Ok(Words::new(w).omega_dual(m, n, false))
}

/// The dual form of `Λ^{m,n}`: `Σ_k C(n,k) T*^k I^m_A(T) T^{n−k}`.
pub fn lambda_dual(w: &WeightedOperator, m: u32, n: u32) -> Result<Bracket, BracketError> {
    check_order(m.max(n))?;
    Ok(Words::new(w).omega_dual(m, n, true))
}

pub fn bracket(w: &WeightedOperator, kind: BracketKind) -> Result<Bracket, BracketError> {
    match kind {
        BracketKind::Isometry(m) => isometry_bracket(w, m),
        BracketKind::Symmetry(n) => symmetry_bracket(w, n),
        BracketKind::SkewSymmetry(n) => skew_bracket(w, n),
        BracketKind::Omega(m, n) => omega(w, m, n),
        BracketKind::Lambda(m, n) => lambda(w, m, n),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// `(m, n) → (m + 1, n)`: multiply the symbol by `yx − 1`.
    M,
    /// `(m, n) → (m, n + 1)`: multiply the symbol by `y − x` (or `y + x`).
    N,
}

/// One recurrence step from a bracket value of the same operator:
/// `Ω^{m+1,n} = T*ΩT − Ω` and `Ω^{m,n+1} = T*Ω − ΩT`.
/// With `skew`, the `N` step is `T*Λ + ΛT`.
pub fn omega_recurrence_step(t: &CMatrix, value: &CMatrix, direction: Direction, skew: bool) -> CMatrix {
    let ts = t.adjoint();
    match direction {
        Direction::M => &(&(&ts * value) * t) - value,
        Direction::N if skew => &(&ts * value) + &(value * t),
        Direction::N => &(&ts * value) - &(value * t),
    }
}

/// `Ω^{m,n}` (or `Λ^{m,n}`) built from `A` by `n` steps in `n` and then
/// `m` steps in `m`.
pub fn omega_chain(w: &WeightedOperator, m: u32, n: u32, skew: bool) -> Result<Bracket, BracketError> {
    check_order(m.max(n))?;
    let mut value = w.a().clone();
    for _ in 0..n {
        value = omega_recurrence_step(w.t(), &value, Direction::N, skew);
    }
    for _ in 0..m {
        value = omega_recurrence_step(w.t(), &value, Direction::M, skew);
    }
    let scale = Words::new(w).omega_scale(m, n);
    Ok(Bracket { value, scale })
}

/// `Σ (−1)^{m−k} C(m,k) R^k A S^k`, the left `(A, m)`-inverse bracket of `S` by `R`.
pub fn left_inverse_bracket(a: &CMatrix, r: &CMatrix, s: &CMatrix, m: u32) -> Result<Bracket, BracketError> {
    check_order(m)?;
    let n = a.ensure_square()?;
    if r.rows() != n || s.rows() != n || !r.is_square() || !s.is_square() {
        return Err(MatError::DimensionMismatch("left inverse operands".into()).into());
    }
    let mut value = CMatrix::zeros(n, n);
    let mut scale = 0.0;
    let mut rk = CMatrix::identity(n);
    let mut sk = CMatrix::identity(n);
    for k in 0..=m {
        let term = &(&rk * a) * &sk;
        let c = sign(m - k) * binomial(m, k) as f64;
        value.axpy(Complex64::new(c, 0.0), &term);
        scale += c.abs() * term.norm_fro();
        rk = &rk * r;
        sk = &sk * s;
    }
    Ok(Bracket { value, scale })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pascal_table() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(24, 12), 2_704_156);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(48, 24), 32_247_603_683_100);
    }

    #[test]
    fn order_limit() {
        let w = WeightedOperator::new(CMatrix::identity(2), CMatrix::identity(2)).unwrap();
        assert_eq!(isometry_bracket(&w, 25).unwrap_err(), BracketError::OrderTooLarge { order: 25 });
        assert!(omega(&w, 24, 24).is_ok());
    }
}
