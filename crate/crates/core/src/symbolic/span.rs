//! Bracket of a power `T^k` and membership in the two-sided span of a bracket.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{expand, CoeffTable, Family, SymbolicError, MAX_SYMBOLIC_ORDER};
use crate::bracket::BracketKind;

/// Table of the bracket of `T^k`: `c[i][j] → c[ki][kj]`.
pub fn power_substitute(kind: BracketKind, k: u32) -> Result<CoeffTable, SymbolicError> {
    let (m, n) = match kind {
        BracketKind::Isometry(m) => (m, 0),
        BracketKind::Symmetry(n) | BracketKind::SkewSymmetry(n) => (0, n),
        BracketKind::Omega(m, n) | BracketKind::Lambda(m, n) => (m, n),
    };
    let order = k.saturating_mul(m.max(n));
    if order > MAX_SYMBOLIC_ORDER {
        return Err(SymbolicError::OrderTooLarge { order, max: MAX_SYMBOLIC_ORDER });
    }
    let base = expand(kind)?;
    let k = k as usize;
    let mut out = CoeffTable::zeros(base.degree_bound() * k.max(1));
    for (i, j, c) in base.terms() {
        out.coeffs[i * k][j * k] = c;
    }
    Ok(out)
}

fn y_degree(t: &CoeffTable) -> usize {
    t.terms().map(|(i, _, _)| i).max().unwrap_or(0)
}

fn x_degree(t: &CoeffTable) -> usize {
    t.terms().map(|(_, j, _)| j).max().unwrap_or(0)
}

/// Whether `target = Σ h_pq y^p G x^q` for rational `h_pq`, decided by exact
/// Gaussian elimination on the coefficient equations.
pub fn bilateral_span_membership(target: &CoeffTable, generator: &CoeffTable) -> bool {
    if target.is_zero() {
        return true;
    }
    if generator.is_zero() {
        return false;
    }
    let (ty, tx) = (y_degree(target), x_degree(target));
    let (gy, gx) = (y_degree(generator), x_degree(generator));
    if ty < gy || tx < gx {
        return false;
    }
    let (hy, hx) = (ty - gy, tx - gx);
    let cols = (hy + 1) * (hx + 1);
    let rows = (ty + 1) * (tx + 1);
    let int = |c: i64| BigRational::from_integer(BigInt::from(c));
    // augmented system, one row per monomial y^a x^b of the target range
    let mut sys: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); cols + 1]; rows];
    for (gi, gj, g) in generator.terms() {
        for p in 0..=hy {
            for q in 0..=hx {
                let row = (gi + p) * (tx + 1) + (gj + q);
                sys[row][p * (hx + 1) + q] = int(g);
            }
        }
    }
    for a in 0..=ty {
        for b in 0..=tx {
            sys[a * (tx + 1) + b][cols] = int(target.get(a, b));
        }
    }
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !sys[r][col].is_zero()) else {
            continue;
        };
        sys.swap(pivot_row, p);
        let pivot = sys[pivot_row][col].clone();
        for c in col..=cols {
            sys[pivot_row][c] = &sys[pivot_row][c] / &pivot;
        }
        for r in 0..rows {
            if r != pivot_row && !sys[r][col].is_zero() {
                let f = sys[r][col].clone();
                for c in col..=cols {
                    let delta = &f * &sys[pivot_row][c];
                    sys[r][c] -= delta;
                }
            }
        }
        pivot_row += 1;
    }
    // consistent iff no row reads 0 = nonzero
    sys[pivot_row..].iter().all(|row| row[cols].is_zero())
}

/// The bracket of `T^k` lies in the two-sided span of the bracket of `T`.
pub fn power_span_check(m: u32, n: u32, k: u32, which: Family) -> Result<bool, SymbolicError> {
    let kind = match which {
        Family::Omega => BracketKind::Omega(m, n),
        Family::Lambda => BracketKind::Lambda(m, n),
    };
    let target = power_substitute(kind, k)?;
    Ok(bilateral_span_membership(&target, &expand(kind)?))
}
