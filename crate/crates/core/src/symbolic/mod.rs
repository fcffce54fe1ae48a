//! Exact coefficient algebra for bracket symbols.
//!
//! A [`CoeffTable`] holds integer coefficients `c[i][j]` of
//! `Σ c_ij y^i a x^j`, where `y ↦ T*`, `x ↦ T` and `a ↦ A`. Since `y` always
//! sits left of `a` and `x` right of it, such words multiply like commutative
//! polynomials in `y` and `x`, and every identity between brackets reduces to
//! an identity between integer tables. All arithmetic is overflow-checked.

mod pair;
mod span;
mod translate;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use num_complex::Complex64;

use crate::bracket::{binomial, Bracket, BracketKind, Words};
use crate::mat::WeightedOperator;

pub use pair::{nilpotent_vanishing_certificate, vanishing_at_orders, pair_expand, pair_identity_check, pair_rhs, PairCoeffTable};
pub use span::{bilateral_span_membership, power_span_check, power_substitute};
pub use translate::{translate_check, translate_expand, translate_substitute, RationalPoly};

/// Largest order accepted by [`expand`].
pub const MAX_SYMBOLIC_ORDER: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("integer overflow in coefficient arithmetic")]
    Overflow,
    #[error("order {order} exceeds the symbolic limit of {max}")]
    OrderTooLarge { order: u32, max: u32 },
    #[error("malformed coefficient table: {0}")]
    Malformed(String),
}

/// Integer table `c[i][j]`, `0 ≤ i, j ≤ D`, for `Σ c_ij y^i a x^j`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoeffTable {
    #[serde(rename = "D")]
    d: usize,
    coeffs: Vec<Vec<i64>>,
}

impl PartialEq for CoeffTable {
    /// Entrywise equality, treating entries beyond either bound as zero.
    fn eq(&self, other: &Self) -> bool {
        let d = self.d.max(other.d);
        (0..=d).all(|i| (0..=d).all(|j| self.get(i, j) == other.get(i, j)))
    }
}

impl Eq for CoeffTable {}

impl CoeffTable {
    pub fn zeros(d: usize) -> Self {
        Self { d, coeffs: vec![vec![0; d + 1]; d + 1] }
    }

    pub fn from_coeffs(coeffs: Vec<Vec<i64>>) -> Result<Self, SymbolicError> {
        let d = coeffs.len().checked_sub(1).ok_or_else(|| SymbolicError::Malformed("empty table".into()))?;
        if coeffs.iter().any(|r| r.len() != d + 1) {
            return Err(SymbolicError::Malformed("table must be square".into()));
        }
        Ok(Self { d, coeffs })
    }

    /// The weight `a` alone.
    pub fn unit() -> Self {
        Self { d: 0, coeffs: vec![vec![1]] }
    }

    pub fn degree_bound(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        if i <= self.d && j <= self.d {
            self.coeffs[i][j]
        } else {
            0
        }
    }

    pub fn coeffs(&self) -> &[Vec<i64>] {
        &self.coeffs
    }

    /// Nonzero entries `(i, j, c)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().filter(|(_, c)| **c != 0).map(move |(j, c)| (i, j, *c)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms().next().is_none()
    }

    /// Largest `i` or `j` carrying a nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.terms().map(|(i, j, _)| i.max(j)).max().unwrap_or(0)
    }

    fn grown(&self, d: usize) -> Self {
        let mut out = Self::zeros(d.max(self.d));
        for (i, j, c) in self.terms() {
            out.coeffs[i][j] = c;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, SymbolicError> {
        let mut out = self.grown(other.d);
        for (i, j, c) in other.terms() {
            out.coeffs[i][j] = out.coeffs[i][j].checked_add(c).ok_or(SymbolicError::Overflow)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SymbolicError> {
        self.add(&other.scale(-1)?)
    }

    pub fn scale(&self, s: i64) -> Result<Self, SymbolicError> {
        let mut out = self.clone();
        for row in out.coeffs.iter_mut() {
            for c in row.iter_mut() {
                *c = c.checked_mul(s).ok_or(SymbolicError::Overflow)?;
            }
        }
        Ok(out)
    }

    /// `y^p · C · x^q`, i.e. `c[i][j] → c[i+p][j+q]`.
    pub fn shift(&self, p: usize, q: usize) -> Self {
        let mut out = Self::zeros(self.d + p.max(q));
        for (i, j, c) in self.terms() {
            out.coeffs[i + p][j + q] = c;
        }
        out
    }

    /// Product of the two symbols as commutative polynomials in `y`, `x`.
    pub fn mul(&self, other: &Self) -> Result<Self, SymbolicError> {
        let mut out = Self::zeros(self.d + other.d);
        for (i, j, c) in self.terms() {
            for (k, l, e) in other.terms() {
                let p = c.checked_mul(e).ok_or(SymbolicError::Overflow)?;
                let slot = &mut out.coeffs[i + k][j + l];
                *slot = slot.checked_add(p).ok_or(SymbolicError::Overflow)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self, SymbolicError> {
        (0..e).try_fold(Self::unit(), |acc, _| acc.mul(self))
    }

    /// Sum of all coefficients, the value at `y = x = a = 1`.
    pub fn coefficient_sum(&self) -> Result<i64, SymbolicError> {
        self.terms().try_fold(0i64, |acc, (_, _, c)| acc.checked_add(c).ok_or(SymbolicError::Overflow))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("coefficient table serialization")
    }

    pub fn from_json(s: &str) -> Result<Self, SymbolicError> {
        let t: CoeffTable = serde_json::from_str(s).map_err(|e| SymbolicError::Malformed(e.to_string()))?;
        Self::from_coeffs(t.coeffs)
    }
}

fn check(order: u32) -> Result<(), SymbolicError> {
    if order > MAX_SYMBOLIC_ORDER {
        Err(SymbolicError::OrderTooLarge { order, max: MAX_SYMBOLIC_ORDER })
    } else {
        Ok(())
    }
}

fn signed(e: u32, c: i64) -> i64 {
    if e.is_multiple_of(2) {
        c
    } else {
        -c
    }
}

/// `yx − 1`.
pub fn isometry_factor() -> CoeffTable {
    CoeffTable { d: 1, coeffs: vec![vec![-1, 0], vec![0, 1]] }
}

/// `y − x`, or `y + x` with `skew`.
pub fn symmetry_factor(skew: bool) -> CoeffTable {
    CoeffTable { d: 1, coeffs: vec![vec![0, if skew { 1 } else { -1 }], vec![1, 0]] }
}

fn isometry_table(m: u32) -> CoeffTable {
    let mut t = CoeffTable::zeros(m as usize);
    for k in 0..=m {
        t.coeffs[k as usize][k as usize] = signed(m - k, binomial(m, k));
    }
    t
}

fn symmetry_table(n: u32, skew: bool) -> CoeffTable {
    let mut t = CoeffTable::zeros(n as usize);
    for k in 0..=n {
        let c = binomial(n, k);
        t.coeffs[k as usize][(n - k) as usize] = if skew { c } else { signed(n - k, c) };
    }
    t
}

/// `Σ_j (−1)^{m−j} C(m,j) y^j S^n x^j`, the form through the symmetry bracket.
fn omega_via_symmetry(m: u32, n: u32, skew: bool) -> Result<CoeffTable, SymbolicError> {
    let inner = symmetry_table(n, skew);
    (0..=m).try_fold(CoeffTable::zeros((m + n) as usize), |acc, j| {
        acc.add(&inner.shift(j as usize, j as usize).scale(signed(m - j, binomial(m, j)))?)
    })
}

/// `Σ_k (∓1)^{n−k} C(n,k) y^k I^m x^{n−k}`, the form through the isometry bracket.
fn omega_via_isometry(m: u32, n: u32, skew: bool) -> Result<CoeffTable, SymbolicError> {
    let inner = isometry_table(m);
    (0..=n).try_fold(CoeffTable::zeros((m + n) as usize), |acc, k| {
        let c = binomial(n, k);
        let c = if skew { c } else { signed(n - k, c) };
        acc.add(&inner.shift(k as usize, (n - k) as usize).scale(c)?)
    })
}

/// Exact symbol table of a bracket.
pub fn expand(kind: BracketKind) -> Result<CoeffTable, SymbolicError> {
    match kind {
        BracketKind::Isometry(m) => check(m).map(|_| isometry_table(m)),
        BracketKind::Symmetry(n) => check(n).map(|_| symmetry_table(n, false)),
        BracketKind::SkewSymmetry(n) => check(n).map(|_| symmetry_table(n, true)),
        BracketKind::Omega(m, n) => {
            check(m.max(n))?;
            omega_via_symmetry(m, n, false)
        }
        BracketKind::Lambda(m, n) => {
            check(m.max(n))?;
            omega_via_symmetry(m, n, true)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Omega,
    Lambda,
}

/// Whether the two defining double sums produce the same table.
pub fn dual_forms_equal(m: u32, n: u32, which: Family) -> Result<bool, SymbolicError> {
    check(m.max(n))?;
    let skew = which == Family::Lambda;
    Ok(omega_via_symmetry(m, n, skew)? == omega_via_isometry(m, n, skew)?)
}

/// Checks `Ω^{m+1,n} = y·Ω·x − Ω` and `Ω^{m,n+1} = y·Ω − Ω·x`, and the
/// skew analogues `Λ^{m+1,n} = y·Λ·x − Λ`, `Λ^{m,n+1} = y·Λ + Λ·x`.
pub fn recurrence_check(m: u32, n: u32) -> Result<bool, SymbolicError> {
    check(m.max(n) + 1)?;
    for skew in [false, true] {
        let base = omega_via_symmetry(m, n, skew)?;
        let up_m = base.shift(1, 1).sub(&base)?;
        let right = base.shift(0, 1);
        let up_n = if skew { base.shift(1, 0).add(&right)? } else { base.shift(1, 0).sub(&right)? };
        if up_m != omega_via_symmetry(m + 1, n, skew)? || up_n != omega_via_symmetry(m, n + 1, skew)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Σ_k (−1)^{n−k} C(n,k) k^j`.
pub fn binomial_moment(n: u32, j: u32) -> Result<i64, SymbolicError> {
    (0..=n).try_fold(0i64, |acc, k| {
        let p = (k as i64).checked_pow(j).ok_or(SymbolicError::Overflow)?;
        let term = p.checked_mul(signed(n - k, binomial(n, k))).ok_or(SymbolicError::Overflow)?;
        acc.checked_add(term).ok_or(SymbolicError::Overflow)
    })
}

/// The moments vanish for `j < n` and equal `n!` at `j = n`.
pub fn binomial_moment_check(n: u32) -> Result<bool, SymbolicError> {
    let factorial = (1..=n as i64).try_fold(1i64, |acc, k| acc.checked_mul(k)).ok_or(SymbolicError::Overflow)?;
    for j in 0..n {
        if binomial_moment(n, j)? != 0 {
            return Ok(false);
        }
    }
    Ok(binomial_moment(n, n)? == factorial)
}

/// Table-driven evaluation `Σ c_ij T*^i A T^j`.
pub fn eval_table(w: &WeightedOperator, table: &CoeffTable) -> Bracket {
    Words::new(w).eval(table.terms().map(|(i, j, c)| (i as u32, j as u32, Complex64::new(c as f64, 0.0))))
}
