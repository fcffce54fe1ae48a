use num_complex::Complex64;

use super::{real_svd, CMatrix, MatError};

/// Orthonormal basis (real Frobenius inner product) of the `d x d` Hermitian
/// matrices: `E_kk`, `(E_jk + E_kj)/√2` and `i(E_jk − E_kj)/√2`.
pub fn hermitian_basis(d: usize) -> Vec<CMatrix> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::with_capacity(d * d);
    for k in 0..d {
        let mut e = CMatrix::zeros(d, d);
        e[(k, k)] = Complex64::new(1.0, 0.0);
        basis.push(e);
    }
    for j in 0..d {
        for k in j + 1..d {
            let mut e = CMatrix::zeros(d, d);
            e[(j, k)] = Complex64::new(r, 0.0);
            e[(k, j)] = Complex64::new(r, 0.0);
            basis.push(e);
            let mut e = CMatrix::zeros(d, d);
            e[(j, k)] = Complex64::new(0.0, r);
            e[(k, j)] = Complex64::new(0.0, -r);
            basis.push(e);
        }
    }
    basis
}

/// A real-linear map on `d x d` Hermitian matrices, stored as the real matrix
/// of its action on [`hermitian_basis`].
#[derive(Debug, Clone)]
pub struct HermitianMap {
    dim: usize,
    out_len: usize,
    /// One column per basis element.
    columns: Vec<Vec<f64>>,
}

impl HermitianMap {
    /// Tabulates `f` on the Hermitian basis. Each image is a list of matrices
    /// whose entries are flattened into real and imaginary parts.
    pub fn from_fn(dim: usize, f: impl Fn(&CMatrix) -> Vec<CMatrix>) -> Result<Self, MatError> {
        let basis = hermitian_basis(dim);
        let mut columns = Vec::with_capacity(basis.len());
        let mut out_len = None;
        for b in &basis {
            let col: Vec<f64> = f(b)
                .iter()
                .flat_map(|m| m.data().iter().flat_map(|z| [z.re, z.im]).collect::<Vec<_>>())
                .collect();
            match out_len {
                None => out_len = Some(col.len()),
                Some(l) if l != col.len() => {
                    return Err(MatError::DimensionMismatch(format!(
                        "map image length changed from {l} to {}",
                        col.len()
                    )))
                }
                _ => {}
            }
            columns.push(col);
        }
        Ok(Self { dim, out_len: out_len.unwrap_or(0), columns })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Frobenius norm of the tabulated real matrix.
    pub fn norm(&self) -> f64 {
        self.columns.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Norm of the image of `H`, expanded in the Hermitian basis.
    pub fn image_norm(&self, h: &CMatrix) -> f64 {
        let coeffs: Vec<f64> = hermitian_basis(self.dim).iter().map(|b| b.real_inner(h)).collect();
        (0..self.out_len)
            .map(|r| coeffs.iter().zip(&self.columns).map(|(c, col)| c * col[r]).sum::<f64>())
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
    }
}

/// Orthonormal basis of `{H : ‖L(H)‖ ≤ tol·‖L‖·‖H‖}` via singular values
/// `σ ≤ tol·σ_max`. The zero map keeps the full basis.
pub fn hermitian_nullspace(map: &HermitianMap, tol: f64) -> Result<Vec<CMatrix>, MatError> {
    let basis = hermitian_basis(map.dim);
    let cols = basis.len();
    let rows = map.out_len;
    if rows == 0 {
        return Ok(basis);
    }
    let mut a = vec![0.0; rows * cols];
    for (j, col) in map.columns.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            a[i * cols + j] = *x;
        }
    }
    let svd = real_svd(&a, rows, cols)?;
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    let null = svd
        .sigma
        .iter()
        .zip(&svd.v)
        .filter(|(s, _)| smax == 0.0 || **s <= tol * smax)
        .map(|(_, v)| {
            let mut h = CMatrix::zeros(map.dim, map.dim);
            for (c, b) in v.iter().zip(&basis) {
                if *c != 0.0 {
                    h.axpy(Complex64::new(*c, 0.0), b);
                }
            }
            h
        })
        .collect();
    Ok(null)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_map_has_trivial_kernel() {
        let map = HermitianMap::from_fn(2, |h| vec![h.clone()]).unwrap();
        assert!(hermitian_nullspace(&map, 1e-10).unwrap().is_empty());
    }

    #[test]
    fn zero_map_keeps_everything() {
        let map = HermitianMap::from_fn(2, |_| vec![CMatrix::zeros(2, 2)]).unwrap();
        assert_eq!(hermitian_nullspace(&map, 1e-10).unwrap().len(), 4);
    }

    #[test]
    fn off_diagonal_map_kernel_is_diagonal() {
        let map = HermitianMap::from_fn(3, |h| {
            let mut d = h.clone();
            for i in 0..3 {
                d[(i, i)] = Complex64::new(0.0, 0.0);
            }
            vec![d]
        })
        .unwrap();
        let ker = hermitian_nullspace(&map, 1e-10).unwrap();
        assert_eq!(ker.len(), 3);
        for h in &ker {
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        assert!(h[(i, j)].norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn basis_is_orthonormal() {
        let b = hermitian_basis(3);
        for (i, x) in b.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((x.real_inner(y) - expected).abs() < 1e-15);
            }
        }
    }
}
