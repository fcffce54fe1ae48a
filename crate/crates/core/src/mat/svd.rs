use super::MatError;

/// Thin SVD of a real matrix: singular values (descending) and the matching
/// right singular vectors as columns of `v` (stored as a list of columns).
#[derive(Debug, Clone)]
pub struct RealSvd {
    pub sigma: Vec<f64>,
    pub v: Vec<Vec<f64>>,
}

/// One-sided Jacobi SVD of a row-major `rows x cols` matrix.
pub fn real_svd(a: &[f64], rows: usize, cols: usize) -> Result<RealSvd, MatError> {
    if a.len() != rows * cols {
        return Err(MatError::DimensionMismatch(format!(
            "{} entries for a {rows}x{cols} matrix",
            a.len()
        )));
    }
    // column-major working copy
    let mut u: Vec<Vec<f64>> = (0..cols).map(|j| (0..rows).map(|i| a[i * cols + j]).collect()).collect();
    let mut v: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..cols).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    // columns below this squared norm are rounding noise of null directions
    let total: f64 = a.iter().map(|x| x * x).sum();
    let negligible = (f64::EPSILON * f64::EPSILON) * total;
    const MAX_SWEEPS: usize = 80;
    let mut converged = cols < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = u[p].iter().map(|x| x * x).sum();
                let beta: f64 = u[q].iter().map(|x| x * x).sum();
                let gamma: f64 = u[p].iter().zip(&u[q]).map(|(x, y)| x * y).sum();
                if alpha <= negligible
                    || beta <= negligible
                    || gamma == 0.0
                    || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt()
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..rows {
                    let x = u[p][k];
                    let y = u[q][k];
                    u[p][k] = c * x - s * y;
                    u[q][k] = s * x + c * y;
                }
                for k in 0..cols {
                    let x = v[p][k];
                    let y = v[q][k];
                    v[p][k] = c * x - s * y;
                    v[q][k] = s * x + c * y;
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(MatError::ConvergenceFailure { iterations: MAX_SWEEPS });
    }
    let norms: Vec<f64> = u.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    Ok(RealSvd {
        sigma: order.iter().map(|&i| norms[i]).collect(),
        v: order.iter().map(|&i| v[i].clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_values() {
        let s = real_svd(&[3.0, 0.0, 0.0, -4.0], 2, 2).unwrap();
        assert!((s.sigma[0] - 4.0).abs() < 1e-14);
        assert!((s.sigma[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn wide_matrix_has_null_directions() {
        // rank one: both rows proportional
        let s = real_svd(&[1.0, 2.0, 3.0, 2.0, 4.0, 6.0], 2, 3).unwrap();
        assert!((s.sigma[0] - 70f64.sqrt()).abs() < 1e-12);
        assert!(s.sigma[1] < 1e-12 && s.sigma[2] < 1e-12);
        let null = &s.v[2];
        let r: f64 = [1.0, 2.0, 3.0].iter().zip(null).map(|(a, b)| a * b).sum();
        assert!(r.abs() < 1e-12);
    }
}
