//! Translation `T ↦ T − s` as exact polynomials in the real parameter `s`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{check, omega_via_symmetry, CoeffTable, SymbolicError};
use crate::bracket::binomial;

/// `Σ r_{d,i,j} s^d y^i a x^j` with exact rational coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RationalPoly {
    terms: BTreeMap<(u32, u32, u32), BigRational>,
}

impl RationalPoly {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, s_deg: u32, i: u32, j: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((s_deg, i, j)).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(s_deg, i, j));
        }
    }

    pub fn s_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32, u32), &BigRational)> {
        self.terms.iter()
    }

    /// Coefficient table of `s^d`, when all its entries are integers.
    pub fn coefficient(&self, d: u32) -> Option<CoeffTable> {
        let entries: Vec<_> = self.terms.iter().filter(|(k, _)| k.0 == d).collect();
        let size = entries.iter().map(|(k, _)| k.1.max(k.2)).max().unwrap_or(0) as usize;
        let mut coeffs = vec![vec![0i64; size + 1]; size + 1];
        for ((_, i, j), c) in entries {
            if !c.is_integer() {
                return None;
            }
            coeffs[*i as usize][*j as usize] = i64::try_from(c.to_integer()).ok()?;
        }
        CoeffTable::from_coeffs(coeffs).ok()
    }

    /// Largest coefficient magnitude.
    pub fn max_abs_coefficient(&self) -> BigRational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigRational::zero)
    }
}

fn rat(c: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(c))
}

fn sign(e: u32) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Substitutes `y → y − s`, `x → x − s` into the table of `Ω^{m,n}` (or `Λ^{m,n}`).
pub fn translate_substitute(m: u32, n: u32, skew: bool) -> Result<RationalPoly, SymbolicError> {
    check(m.max(n))?;
    let table = omega_via_symmetry(m, n, skew)?;
    let mut out = RationalPoly::new();
    for (i, j, c) in table.terms() {
        let (i, j) = (i as u32, j as u32);
        for a in 0..=i {
            for b in 0..=j {
                let e = i - a + j - b;
                let coef = rat(c) * rat(binomial(i, a)) * rat(binomial(j, b)) * rat(sign(e));
                out.add_term(e, a, b, coef);
            }
        }
    }
    Ok(out)
}

/// The translation expansion
/// `Σ_k Σ_j C(m,k) C(m−k,j) (−s)^{k+j} (y − s)^k Ω^{m−k−j,n} x^j`, and for
/// `skew` the corresponding sum with the extra `Σ_i C(n,i) (−2s)^{n−i}`
/// factor and inner `Λ^{m−k−j,i}`.
pub fn translate_expand(m: u32, n: u32, skew: bool) -> Result<RationalPoly, SymbolicError> {
    check(m.max(n))?;
    let mut out = RationalPoly::new();
    let inner_orders: Vec<(u32, BigRational, u32)> = if skew {
        (0..=n)
            .map(|i| (i, rat(binomial(n, i)) * rat(sign(n - i)) * rat(2).pow((n - i) as i32), n - i))
            .collect()
    } else {
        vec![(n, BigRational::one(), 0)]
    };
    for k in 0..=m {
        for j in 0..=m - k {
            let h = m - k - j;
            let outer = rat(binomial(m, k)) * rat(binomial(m - k, j)) * rat(sign(k + j));
            for (q, qc, q_sdeg) in &inner_orders {
                let inner = omega_via_symmetry(h, *q, skew)?;
                for (p, r, c) in inner.terms() {
                    for a in 0..=k {
                        let coef = &outer * qc * rat(c) * rat(binomial(k, a)) * rat(sign(k - a));
                        out.add_term(k + j + (k - a) + q_sdeg, p as u32 + a, r as u32 + j, coef);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Exact agreement of the substitution and the expansion.
pub fn translate_check(m: u32, n: u32, skew: bool) -> Result<bool, SymbolicError> {
    Ok(translate_substitute(m, n, skew)? == translate_expand(m, n, skew)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::BracketKind;
    use crate::symbolic::expand;

    #[test]
    fn constant_coefficient_is_the_bracket() {
        let p = translate_expand(2, 1, false).unwrap();
        assert_eq!(p.coefficient(0).unwrap(), expand(BracketKind::Omega(2, 1)).unwrap());
    }

    #[test]
    fn small_orders_agree() {
        for skew in [false, true] {
            assert!(translate_check(1, 1, skew).unwrap());
            assert!(translate_check(2, 2, skew).unwrap());
        }
    }
}
