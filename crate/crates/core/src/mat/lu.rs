use num_complex::Complex64;

use super::{CMatrix, MatError, ZERO};

/// LU factorization with partial pivoting, `P M = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub fn new(m: &CMatrix) -> Result<Self, MatError> {
        let n = m.ensure_square()?;
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let scale = m.max_abs();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax <= f64::EPSILON * scale * n as f64 || pmax == 0.0 {
                return Err(MatError::Singular);
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm, sign })
    }

    pub fn determinant(&self) -> Complex64 {
        let n = self.lu.rows();
        (0..n).fold(Complex64::new(self.sign, 0.0), |acc, i| acc * self.lu[(i, i)])
    }

    /// Solves `M X = B` for a block of right-hand sides.
    pub fn solve(&self, b: &CMatrix) -> Result<CMatrix, MatError> {
        let n = self.lu.rows();
        if b.rows() != n {
            return Err(MatError::DimensionMismatch(format!("rhs has {} rows, expected {n}", b.rows())));
        }
        let mut x = CMatrix::from_fn(n, b.cols(), |i, j| b[(self.perm[i], j)]);
        for c in 0..b.cols() {
            for i in 0..n {
                let mut s = x[(i, c)];
                for k in 0..i {
                    s -= self.lu[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[(i, c)];
                for k in i + 1..n {
                    s -= self.lu[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s / self.lu[(i, i)];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<CMatrix, MatError> {
        self.solve(&CMatrix::identity(self.lu.rows()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::ONE;

    #[test]
    fn solves_and_inverts() {
        let m = CMatrix::from_rows(&[
            vec![Complex64::new(2.0, 1.0), Complex64::new(1.0, 0.0), ZERO],
            vec![Complex64::new(0.0, -1.0), Complex64::new(3.0, 0.0), ONE],
            vec![ONE, Complex64::new(0.5, 0.5), Complex64::new(4.0, 0.0)],
        ]);
        let inv = m.inverse().unwrap();
        assert!((&(&m * &inv) - &CMatrix::identity(3)).norm_fro() < 1e-14);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let m = CMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert_eq!(Lu::new(&m).unwrap_err(), MatError::Singular);
        assert_eq!(m.determinant().unwrap(), ZERO);
    }

    #[test]
    fn determinant_of_triangular() {
        let m = CMatrix::from_real_rows(&[&[2.0, 7.0, 1.0], &[0.0, -3.0, 5.0], &[0.0, 0.0, 0.5]]);
        let d = m.determinant().unwrap();
        assert!((d - Complex64::new(-3.0, 0.0)).norm() < 1e-14);
    }
}
