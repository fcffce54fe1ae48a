#![allow(dead_code)]

use isosym_core::mat::{matrix_exp, CMatrix, WeightedOperator};
use num_complex::Complex64;
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cmatrix(n: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
        CMatrix::new(n, n, v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap()
    })
}

pub fn psd(n: usize) -> impl Strategy<Value = CMatrix> {
    cmatrix(n).prop_map(|b| &b.adjoint() * &b)
}

pub fn unitary(n: usize) -> impl Strategy<Value = CMatrix> {
    cmatrix(n).prop_map(|b| matrix_exp(&b.hermitian_part(), 3.0))
}

/// A random pair `(A, T)` with `A = B*B` and dimension in `1..=max`.
pub fn weighted(max: usize) -> impl Strategy<Value = WeightedOperator> {
    (1..=max).prop_flat_map(|n| (psd(n), cmatrix(n)))
        .prop_map(|(a, t)| WeightedOperator::new(a, t).unwrap())
}

pub fn jordan(r: usize) -> CMatrix {
    CMatrix::from_fn(r, r, |i, j| if j == i + 1 { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

/// Coefficients of `(yx − 1)^m (y ∓ x)^n`, indexed `[i][j]` for `y^i x^j`.
pub fn symbol(m: u32, n: u32, skew: bool) -> Vec<Vec<f64>> {
    let d = (m + n) as usize + 1;
    let mut p = vec![vec![0.0; d]; d];
    p[0][0] = 1.0;
    for _ in 0..m {
        let mut q = vec![vec![0.0; d]; d];
        for i in 0..d {
            for j in 0..d {
                if p[i][j] != 0.0 {
                    q[i + 1][j + 1] += p[i][j];
                    q[i][j] -= p[i][j];
                }
            }
        }
        p = q;
    }
    let sx = if skew { 1.0 } else { -1.0 };
    for _ in 0..n {
        let mut q = vec![vec![0.0; d]; d];
        for i in 0..d {
            for j in 0..d {
                if p[i][j] != 0.0 {
                    q[i + 1][j] += p[i][j];
                    q[i][j + 1] += sx * p[i][j];
                }
            }
        }
        p = q;
    }
    p
}

/// Direct evaluation of `Σ c_ij T*^i A T^j` with naive powers.
pub fn eval_symbol(a: &CMatrix, t: &CMatrix, coeffs: &[Vec<f64>]) -> CMatrix {
    let n = a.rows();
    let mut out = CMatrix::zeros(n, n);
    for (i, row) in coeffs.iter().enumerate() {
        for (j, cij) in row.iter().enumerate() {
            if *cij != 0.0 {
                let mut left = CMatrix::identity(n);
                for _ in 0..i {
                    left = &left * &t.adjoint();
                }
                let mut right = CMatrix::identity(n);
                for _ in 0..j {
                    right = &right * t;
                }
                out.axpy(c(*cij, 0.0), &(&(&left * a) * &right));
            }
        }
    }
    out
}

pub fn ex1_2x2() -> WeightedOperator {
    WeightedOperator::new(
        CMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]),
        CMatrix::from_real_rows(&[&[0.0, -0.5], &[0.0, 0.5]]),
    )
    .unwrap()
}

pub fn ex1_3x3() -> WeightedOperator {
    WeightedOperator::new(
        CMatrix::from_real_rows(&[&[0.0, 0.0, 0.0], &[0.0, 1.0, 1.0], &[0.0, 1.0, 1.0]]),
        CMatrix::from_real_rows(&[&[0.0, 0.0, -1.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]),
    )
    .unwrap()
}
