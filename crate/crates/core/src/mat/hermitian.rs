use num_complex::Complex64;

use super::{CMatrix, MatError};

/// Eigendecomposition `H = V diag(values) V*` of a Hermitian matrix,
/// eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Rebuilds `V f(Λ) V*` for a spectral function `f`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        CMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * f(self.values[k]))
                .sum::<Complex64>()
        })
    }
}

/// Cyclic complex Jacobi on the Hermitian part of `m`.
pub fn hermitian_eigen(m: &CMatrix) -> Result<HermitianEigen, MatError> {
    let n = m.ensure_square()?;
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = a.norm_fro();
    const MAX_SWEEPS: usize = 60;

    for sweep in 0..=MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * scale * 0.5 || off == 0.0 {
            break;
        }
        if sweep == MAX_SWEEPS {
            return Err(MatError::ConvergenceFailure { iterations: MAX_SWEEPS });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let abs = apq.norm();
                if abs <= f64::MIN_POSITIVE || abs < 1e-300 {
                    continue;
                }
                let phase = apq / abs;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let sp = phase * s;
                let sp_conj = sp.conj();
                // columns p, q of A and V
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * sp_conj;
                    a[(k, q)] = akp * sp + akq * c;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * sp_conj;
                    v[(k, q)] = vkp * sp + vkq * c;
                }
                // rows p, q of A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * sp;
                    a[(q, k)] = apk * sp_conj + aqk * c;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                let dp = a[(p, p)].re;
                let dq = a[(q, q)].re;
                a[(p, p)] = Complex64::new(dp, 0.0);
                a[(q, q)] = Complex64::new(dq, 0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}
