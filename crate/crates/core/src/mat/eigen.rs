use num_complex::Complex64;

use super::{vec_norm, CMatrix, MatError, MAX_DIM, TAU_EIG, ZERO};

/// Eigenvalues with unit eigenvectors and their residuals `‖Mv − λv‖₂`.
#[derive(Debug, Clone)]
pub struct EigenSet {
    pub values: Vec<Complex64>,
    pub vectors: Vec<Vec<Complex64>>,
    pub residuals: Vec<f64>,
}

impl EigenSet {
    /// Indices of pairs whose residual is within `τ_eig·‖M‖_F`.
    pub fn accepted(&self, m_norm: f64) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&i| self.residuals[i] <= TAU_EIG * m_norm.max(f64::MIN_POSITIVE))
            .collect()
    }
}

/// Householder reduction to upper Hessenberg form, returning `(H, Q)` with `M = Q H Q*`.
fn hessenberg(m: &CMatrix) -> (CMatrix, CMatrix) {
    let n = m.rows();
    let mut h = m.clone();
    let mut q = CMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        if (k + 2..n).all(|i| h[(i, k)] == ZERO) {
            continue;
        }
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = vec_norm(&x);
        let phase = if x[0] == ZERO { Complex64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = vec_norm(&v);
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H <- P H, P = I - 2 v v*
        for j in 0..n {
            let s: Complex64 = (0..v.len()).map(|i| v[i].conj() * h[(k + 1 + i, j)]).sum();
            for i in 0..v.len() {
                h[(k + 1 + i, j)] -= v[i] * s * 2.0;
            }
        }
        // H <- H P, Q <- Q P
        for r in 0..n {
            let s: Complex64 = (0..v.len()).map(|i| h[(r, k + 1 + i)] * v[i]).sum();
            for i in 0..v.len() {
                h[(r, k + 1 + i)] -= s * v[i].conj() * 2.0;
            }
            let s: Complex64 = (0..v.len()).map(|i| q[(r, k + 1 + i)] * v[i]).sum();
            for i in 0..v.len() {
                q[(r, k + 1 + i)] -= s * v[i].conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}

/// Rotation `[[c, s], [−s̄, c]]` zeroing `b` below `a`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if r == 0.0 {
        return (1.0, ZERO);
    }
    if a == ZERO {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let an = a.norm();
    (an / r, (a / an) * b.conj() / r)
}

fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Schur form `M = Z T Z*` by shifted QR on the Hessenberg form.
fn schur(m: &CMatrix) -> Result<(CMatrix, CMatrix), MatError> {
    let n = m.rows();
    let (mut h, mut z) = hessenberg(m);
    let max_iter = 100 * n.max(1);
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n.saturating_sub(1);
    let scale = m.norm_fro();
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let s = if s == 0.0 { scale } else { s };
            if h[(lo, lo - 1)].norm() <= f64::EPSILON * s {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > max_iter {
            return Err(MatError::ConvergenceFailure { iterations: max_iter });
        }
        let mu = if since_deflation % 11 == 10 {
            h[(hi, hi)] + Complex64::new(h[(hi, hi - 1)].norm() * 0.75, 0.0)
        } else {
            wilkinson(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        for k in lo..=hi {
            h[(k, k)] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = ZERO;
            rots.push((k, c, s));
        }
        for &(k, c, s) in &rots {
            let top = (k + 2).min(hi) + 1;
            for r in 0..top {
                let x = h[(r, k)];
                let y = h[(r, k + 1)];
                h[(r, k)] = x * c + y * s.conj();
                h[(r, k + 1)] = -x * s + y * c;
            }
            for r in 0..n {
                let x = z[(r, k)];
                let y = z[(r, k + 1)];
                z[(r, k)] = x * c + y * s.conj();
                z[(r, k + 1)] = -x * s + y * c;
            }
        }
        for k in lo..=hi {
            h[(k, k)] += mu;
        }
    }
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok((h, z))
}

/// All eigenpairs of a square matrix of dimension at most 64.
pub fn eigenpairs(m: &CMatrix) -> Result<EigenSet, MatError> {
    let n = m.ensure_square()?;
    if n > MAX_DIM {
        return Err(MatError::TooLarge(n));
    }
    let (t, z) = schur(m)?;
    let smallnum = f64::EPSILON * t.norm_fro().max(f64::MIN_POSITIVE);
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut y = vec![ZERO; n];
        y[k] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let s: Complex64 = (i + 1..=k).map(|j| t[(i, j)] * y[j]).sum();
            let mut d = t[(i, i)] - lambda;
            if d.norm() < smallnum {
                d = Complex64::new(smallnum, 0.0);
            }
            y[i] = -s / d;
            let big = y.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if big > 1e100 {
                for v in y.iter_mut() {
                    *v /= big;
                }
            }
        }
        let mut v = z.mul_vec(&y);
        let norm = vec_norm(&v);
        for x in v.iter_mut() {
            *x /= norm;
        }
        let mv = m.mul_vec(&v);
        let res = vec_norm(&mv.iter().zip(&v).map(|(a, b)| a - lambda * b).collect::<Vec<_>>());
        values.push(lambda);
        vectors.push(v);
        residuals.push(res);
    }
    Ok(EigenSet { values, vectors, residuals })
}
