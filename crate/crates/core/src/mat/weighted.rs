use num_complex::Complex64;

use super::{hermitian_eigen, vec_inner, CMatrix, MatError, TAU_HERM, TAU_PSD};

/// An operator `T` paired with a positive semidefinite weight `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedOperator {
    a: CMatrix,
    t: CMatrix,
}

impl WeightedOperator {
    pub fn new(a: CMatrix, t: CMatrix) -> Result<Self, MatError> {
        let n = a.ensure_square()?;
        let nt = t.ensure_square()?;
        if n != nt {
            return Err(MatError::DimensionMismatch(format!("weight is {n}x{n}, operator is {nt}x{nt}")));
        }
        let scale = a.norm_fro();
        if a.hermitian_defect() > TAU_HERM * scale {
            return Err(MatError::NotPsd { min_eigenvalue: f64::NAN });
        }
        let min = hermitian_eigen(&a)?.min();
        if min < -TAU_PSD * scale {
            return Err(MatError::NotPsd { min_eigenvalue: min });
        }
        Ok(Self { a, t })
    }

    /// Same weight, different operator. The weight is not re-validated.
    pub fn with_operator(&self, t: CMatrix) -> Result<Self, MatError> {
        let n = t.ensure_square()?;
        if n != self.dim() {
            return Err(MatError::DimensionMismatch(format!("operator is {n}x{n}, weight is {0}x{0}", self.dim())));
        }
        Ok(Self { a: self.a.clone(), t })
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn t(&self) -> &CMatrix {
        &self.t
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }
}

/// `⟨Ax|y⟩`.
pub fn semi_inner(a: &CMatrix, x: &[Complex64], y: &[Complex64]) -> Result<Complex64, MatError> {
    let n = a.ensure_square()?;
    if x.len() != n || y.len() != n {
        return Err(MatError::DimensionMismatch(format!(
            "vectors of length {} and {} against a {n}x{n} weight",
            x.len(),
            y.len()
        )));
    }
    Ok(vec_inner(&a.mul_vec(x), y))
}

/// Hermitian within `tol` and `λ_min ≥ −tol·‖M‖_F`.
pub fn psd_check(m: &CMatrix, tol: f64) -> bool {
    psd_check_scaled(m, tol, m.norm_fro())
}

/// [`psd_check`] against an explicit scale instead of `‖M‖_F`, for
/// quantities that are differences of much larger terms.
pub fn psd_check_scaled(m: &CMatrix, tol: f64, scale: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    if m.hermitian_defect() > tol * scale {
        return false;
    }
    match hermitian_eigen(m) {
        Ok(e) => e.min() >= -tol * scale,
        Err(_) => false,
    }
}

/// Solves `A X = T* A` with `X = A⁺ T* A`, so the columns of `X` lie in the
/// range of `A`. Fails with `NotApplicable` when the residual exceeds
/// `tol·‖A‖·‖T‖`.
pub fn a_adjoint(a: &CMatrix, t: &CMatrix, tol: f64) -> Result<CMatrix, MatError> {
    let n = a.ensure_square()?;
    if t.rows() != n || t.cols() != n {
        return Err(MatError::DimensionMismatch(format!("weight is {n}x{n}, operator is {}x{}", t.rows(), t.cols())));
    }
    let eig = hermitian_eigen(a)?;
    let cutoff = 1e-12 * eig.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let pinv = eig.reconstruct_with(|l| if l.abs() > cutoff && l != 0.0 { 1.0 / l } else { 0.0 });
    let rhs = &t.adjoint() * a;
    let x = &pinv * &rhs;
    let residual = (&(a * &x) - &rhs).norm_fro();
    if residual > tol * a.norm_fro() * t.norm_fro() {
        return Err(MatError::NotApplicable { residual });
    }
    Ok(x)
}
