use num_complex::Complex64;

use super::{CMatrix, I};

const TAYLOR_DEGREE: u32 = 18;

/// `exp(i·s·M)`.
///
/// Nilpotent arguments (including `s = 0`) return the terminating series,
/// which is exact up to the rounding of its finitely many terms. Everything
/// else uses scaling and squaring around a degree-18 Taylor kernel.
pub fn matrix_exp(m: &CMatrix, s: f64) -> CMatrix {
    let n = m.rows();
    let x = m.scale(I * s);
    if let Some(sum) = terminating_series(&x, n) {
        return sum;
    }
    let norm = x.norm_one();
    let mut squarings = 0;
    let mut scaled = norm;
    while scaled > 0.5 {
        scaled *= 0.5;
        squarings += 1;
    }
    let y = x.scale_real(0.5f64.powi(squarings));
    // Horner: I + Y(I + Y/2(I + Y/3(...)))
    let mut acc = CMatrix::identity(n);
    for k in (1..=TAYLOR_DEGREE).rev() {
        acc = (&y * &acc).scale_real(1.0 / k as f64).add_identity(Complex64::new(1.0, 0.0));
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    acc
}

/// `Σ_{k<p} X^k/k!` when `X^p = 0` exactly for some `p ≤ n`.
fn terminating_series(x: &CMatrix, n: usize) -> Option<CMatrix> {
    let mut sum = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..=n {
        term = (&term * x).scale_real(1.0 / k as f64);
        if term.is_zero() {
            return Some(sum);
        }
        sum = &sum + &term;
    }
    None
}
