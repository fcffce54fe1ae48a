//! Two-operator tables for `T + S` with `T`, `S` doubly commuting.
//!
//! Monomials are normalized as `y₁^i y₂^j a x₁^k x₂^l`: on each side of `a`
//! the letters commute, so every word has exactly one such form.

use std::collections::BTreeMap;

use super::{check, omega_via_symmetry, SymbolicError};
use crate::bracket::binomial;

/// Sparse table `c[i][j][k][l]` of `y₁^i y₂^j a x₁^k x₂^l`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairCoeffTable {
    terms: BTreeMap<[u32; 4], i64>,
}

impl PairCoeffTable {
    pub fn monomial(exps: [u32; 4], c: i64) -> Self {
        let mut t = Self::default();
        if c != 0 {
            t.terms.insert(exps, c);
        }
        t
    }

    pub fn one() -> Self {
        Self::monomial([0; 4], 1)
    }

    pub fn get(&self, exps: [u32; 4]) -> i64 {
        self.terms.get(&exps).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 4], &i64)> {
        self.terms.iter()
    }

    fn accumulate(&mut self, exps: [u32; 4], c: i64) -> Result<(), SymbolicError> {
        let slot = self.terms.entry(exps).or_insert(0);
        *slot = slot.checked_add(c).ok_or(SymbolicError::Overflow)?;
        if *slot == 0 {
            self.terms.remove(&exps);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SymbolicError> {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(*e, *c)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SymbolicError> {
        let mut out = Self::default();
        for (e, c) in &self.terms {
            for (f, d) in &other.terms {
                let exps = [e[0] + f[0], e[1] + f[1], e[2] + f[2], e[3] + f[3]];
                out.accumulate(exps, c.checked_mul(*d).ok_or(SymbolicError::Overflow)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: i64) -> Result<Self, SymbolicError> {
        let mut out = Self::default();
        for (e, c) in &self.terms {
            out.accumulate(*e, c.checked_mul(s).ok_or(SymbolicError::Overflow)?)?;
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self, SymbolicError> {
        (0..e).try_fold(Self::one(), |acc, _| acc.mul(self))
    }
}

const Y1: [u32; 4] = [1, 0, 0, 0];
const Y2: [u32; 4] = [0, 1, 0, 0];
const X1: [u32; 4] = [0, 0, 1, 0];
const X2: [u32; 4] = [0, 0, 0, 1];

/// Table of `Ω^{h,q}` (or `Λ^{h,q}`) in the letters `y₁`, `x₁`.
fn inner(h: u32, q: u32, skew: bool) -> Result<PairCoeffTable, SymbolicError> {
    let table = omega_via_symmetry(h, q, skew)?;
    let mut out = PairCoeffTable::default();
    for (i, j, c) in table.terms() {
        out.accumulate([i as u32, 0, j as u32, 0], c)?;
    }
    Ok(out)
}

/// Table of `Ω^{m,n}(T + S)` (or `Λ^{m,n}`) by substituting
/// `y → y₁ + y₂`, `x → x₁ + x₂`.
pub fn pair_expand(m: u32, n: u32, skew: bool) -> Result<PairCoeffTable, SymbolicError> {
    check(m.max(n))?;
    let y = PairCoeffTable::monomial(Y1, 1).add(&PairCoeffTable::monomial(Y2, 1))?;
    let x = PairCoeffTable::monomial(X1, 1).add(&PairCoeffTable::monomial(X2, 1))?;
    let table = omega_via_symmetry(m, n, skew)?;
    let mut out = PairCoeffTable::default();
    for (i, j, c) in table.terms() {
        out = out.add(&y.pow(i as u32)?.mul(&x.pow(j as u32)?)?.scale(c)?)?;
    }
    Ok(out)
}

/// Term-by-term expansion of
/// `Σ_{k,j} Σ_{i+l+h=m} (∓1)^k C(n,k) C(n−k,j) m!/(i! l! h!)
///  (y₁ + y₂)^i y₂^{l+j} Ω^{h,n−k−j}(y₁, x₁) x₁^l x₂^{i+k}`.
pub fn pair_rhs(m: u32, n: u32, skew: bool) -> Result<PairCoeffTable, SymbolicError> {
    check(m.max(n))?;
    let y = PairCoeffTable::monomial(Y1, 1).add(&PairCoeffTable::monomial(Y2, 1))?;
    let mut out = PairCoeffTable::default();
    for k in 0..=n {
        for j in 0..=n - k {
            let sign = if skew || k % 2 == 0 { 1 } else { -1 };
            let outer = binomial(n, k).checked_mul(binomial(n - k, j)).ok_or(SymbolicError::Overflow)? * sign;
            for i in 0..=m {
                for l in 0..=m - i {
                    let h = m - i - l;
                    let multinomial = binomial(m, i).checked_mul(binomial(m - i, l)).ok_or(SymbolicError::Overflow)?;
                    let coef = outer.checked_mul(multinomial).ok_or(SymbolicError::Overflow)?;
                    let side = PairCoeffTable::monomial([0, l + j, l, i + k], coef);
                    let term = y.pow(i)?.mul(&side)?.mul(&inner(h, n - k - j, skew)?)?;
                    out = out.add(&term)?;
                }
            }
        }
    }
    Ok(out)
}

/// Exact agreement of the substituted and the expanded perturbation tables.
pub fn pair_identity_check(m: u32, n: u32, skew: bool) -> Result<bool, SymbolicError> {
    Ok(pair_expand(m, n, skew)? == pair_rhs(m, n, skew)?)
}

/// Index-level certificate that every summand of the perturbation expansion at
/// orders `(m + 2r − 2, n + 2r − 1)` vanishes when `S^r = 0` and `T` is
/// `(m, n)`-isosymmetric.
pub fn nilpotent_vanishing_certificate(m: u32, n: u32, r: u32) -> bool {
    r > 0 && vanishing_at_orders(m, n, r, m + 2 * r - 2, n + 2 * r - 1)
}

/// Whether every summand of the expansion at orders `(big_m, big_n)` has
/// `S*`-exponent `l + j ≥ r`, `S`-exponent `i + k ≥ r`, or an inner bracket
/// `Ω^{h, big_n − k − j}` with `h ≥ m` and `big_n − k − j ≥ n`.
pub fn vanishing_at_orders(m: u32, n: u32, r: u32, big_m: u32, big_n: u32) -> bool {
    for k in 0..=big_n {
        for j in 0..=big_n - k {
            for i in 0..=big_m {
                for l in 0..=big_m - i {
                    let h = big_m - i - l;
                    let adjoint_vanishes = l + j >= r;
                    let right_vanishes = i + k >= r;
                    let inner_vanishes = h >= m && big_n - k - j >= n;
                    if !(adjoint_vanishes || right_vanishes || inner_vanishes) {
                        return false;
                    }
                }
            }
        }
    }
    true
}
