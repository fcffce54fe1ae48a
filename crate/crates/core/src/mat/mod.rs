//! Dense complex matrices and the numerical primitives built on them.
//!
//! Everything in this crate is carried by [`CMatrix`]: weights, operators,
//! bracket values and Hermitian search directions. Dimensions are small
//! (at most 64), so all routines are straightforward dense algorithms.

mod eigen;
mod expm;
mod hermitian;
mod json;
mod lu;
mod nullspace;
mod svd;
mod weighted;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

pub use eigen::{eigenpairs, EigenSet};
pub use expm::matrix_exp;
pub use hermitian::{hermitian_eigen, HermitianEigen};
pub use json::MatrixJson;
pub use lu::Lu;
pub use nullspace::{hermitian_basis, hermitian_nullspace, HermitianMap};
pub use svd::{real_svd, RealSvd};
pub use weighted::{a_adjoint, psd_check, psd_check_scaled, semi_inner, WeightedOperator};

/// Hermitian tolerance, relative to the Frobenius norm.
pub const TAU_HERM: f64 = 1e-10;
/// PSD tolerance on the smallest eigenvalue, relative to the Frobenius norm.
pub const TAU_PSD: f64 = 1e-10;
/// Eigenpair residual tolerance, relative to the Frobenius norm.
pub const TAU_EIG: f64 = 1e-8;
/// Largest supported dimension for the dense routines.
pub const MAX_DIM: usize = 64;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("dimension {0} exceeds the supported maximum of 64")]
    TooLarge(usize),
    #[error("no convergence after {iterations} iterations")]
    ConvergenceFailure { iterations: usize },
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("weight is not Hermitian positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("A-adjoint does not exist: residual {residual:e} exceeds tolerance")]
    NotApplicable { residual: f64 },
    #[error("malformed matrix JSON: {0}")]
    Json(String),
}

/// Dense complex matrix, row-major. Serializes as [`MatrixJson`].
#[derive(Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(into = "MatrixJson", try_from = "MatrixJson")]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// Builds a matrix from row-major entries, rejecting empty shapes,
    /// wrong entry counts and non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, MatError> {
        if rows == 0 || cols == 0 {
            return Err(MatError::Empty);
        }
        if data.len() != rows * cols {
            return Err(MatError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(MatError::NonFinite { row: pos / cols, col: pos % cols });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Real matrix from nested rows. Panics on ragged input; meant for
    /// literals and fixtures.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self::from_fn(rows.len(), ncols, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    /// Complex matrix from nested rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self::from_fn(rows.len(), ncols, |i, j| rows[i][j])
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let v: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diag(&v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn ensure_square(&self) -> Result<usize, MatError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(MatError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// `self += s * other`, in place.
    pub fn axpy(&mut self, s: Complex64, other: &CMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "axpy shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn add_identity(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out[(i, i)] += s;
        }
        out
    }

    pub fn try_mul(&self, rhs: &CMatrix) -> Result<CMatrix, MatError> {
        if self.cols != rhs.rows {
            return Err(MatError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, a) in row.iter().enumerate() {
                if *a == ZERO {
                    continue;
                }
                let brow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, k: u32) -> CMatrix {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut result = CMatrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Hermitian part `(M + M*)/2`.
    pub fn hermitian_part(&self) -> CMatrix {
        (self + &self.adjoint()).scale_real(0.5)
    }

    /// `‖M − M*‖_F`.
    pub fn hermitian_defect(&self) -> f64 {
        (self - &self.adjoint()).norm_fro()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| *z == ZERO)
    }

    /// Frobenius inner product `Re tr(self* other)`.
    pub fn real_inner(&self, other: &CMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// Copies the `rows x cols` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &CMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    pub fn commutator(&self, other: &CMatrix) -> CMatrix {
        &(self * other) - &(other * self)
    }

    pub fn inverse(&self) -> Result<CMatrix, MatError> {
        Lu::new(self)?.inverse()
    }

    pub fn determinant(&self) -> Result<Complex64, MatError> {
        match Lu::new(self) {
            Ok(lu) => Ok(lu.determinant()),
            Err(MatError::Singular) => Ok(ZERO),
            Err(e) => Err(e),
        }
    }
}

/// Kronecker product.
pub fn kron(m: &CMatrix, n: &CMatrix) -> CMatrix {
    CMatrix::from_fn(m.rows * n.rows, m.cols * n.cols, |i, j| {
        m[(i / n.rows, j / n.cols)] * n[(i % n.rows, j % n.cols)]
    })
}

/// Block-diagonal `M ⊕ N`.
pub fn direct_sum(m: &CMatrix, n: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(m.rows + n.rows, m.cols + n.cols);
    out.set_block(0, 0, m);
    out.set_block(m.rows, m.cols, n);
    out
}

/// Upper-triangular block operator `[[N, E], [0, X]]`.
pub fn block2x2(n: &CMatrix, e: &CMatrix, x: &CMatrix) -> Result<CMatrix, MatError> {
    if !n.is_square() || !x.is_square() || e.rows != n.rows || e.cols != x.cols {
        return Err(MatError::DimensionMismatch(format!(
            "block [[{}x{}, {}x{}], [0, {}x{}]]",
            n.rows, n.cols, e.rows, e.cols, x.rows, x.cols
        )));
    }
    let mut out = direct_sum(n, x);
    out.set_block(0, n.cols, e);
    Ok(out)
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Euclidean inner product `⟨x|y⟩ = Σ x_i conj(y_i)`, linear in the first slot.
pub fn vec_inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn adjoint_of_imaginary_diagonal() {
        let m = CMatrix::diag(&[I, ONE]);
        assert_eq!(m.adjoint(), CMatrix::diag(&[-I, ONE]));
    }

    #[test]
    fn adjoint_fixes_hermitian() {
        let m = CMatrix::from_rows(&[vec![c(2.0, 0.0), c(1.0, -3.0)], vec![c(1.0, 3.0), c(-1.0, 0.0)]]);
        assert_eq!(m.adjoint(), m);
    }

    #[test]
    fn construction_rejects_non_finite() {
        let err = CMatrix::new(1, 2, vec![ONE, c(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, MatError::NonFinite { row: 0, col: 1 });
        assert!(matches!(CMatrix::new(2, 2, vec![ONE; 3]), Err(MatError::DimensionMismatch(_))));
        assert_eq!(CMatrix::new(0, 2, vec![]), Err(MatError::Empty));
    }

    #[test]
    fn block2x2_with_zero_corner_is_direct_sum() {
        let n = CMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let x = CMatrix::from_real_rows(&[&[5.0]]);
        let e = CMatrix::zeros(2, 1);
        assert_eq!(block2x2(&n, &e, &x).unwrap(), direct_sum(&n, &x));
        assert!(block2x2(&n, &CMatrix::zeros(1, 1), &x).is_err());
    }

    #[test]
    fn kron_of_identity_and_shift_is_nilpotent_of_order_two() {
        let n2 = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let k = kron(&CMatrix::identity(2), &n2);
        assert!(!k.is_zero());
        assert!((&k * &k).is_zero());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let m = CMatrix::from_rows(&[vec![c(0.5, 0.1), c(1.0, 0.0)], vec![c(-0.3, 0.2), c(0.0, 1.0)]]);
        let mut expect = CMatrix::identity(2);
        for _ in 0..5 {
            expect = &expect * &m;
        }
        assert!((&m.pow(5) - &expect).norm_fro() < 1e-14);
        assert_eq!(m.pow(0), CMatrix::identity(2));
    }
}
