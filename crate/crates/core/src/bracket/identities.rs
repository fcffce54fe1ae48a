//! Closed-form expansions: translation, weighted sums, exponential
//! expansions and perturbation by a doubly commuting operator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{binomial, check_order, sign, Bracket, BracketError, Words};
use crate::mat::{matrix_exp, CMatrix, WeightedOperator, I};

/// Powers `M^0..=M^max` of a fixed matrix.
fn powers(m: &CMatrix, max: u32) -> Vec<CMatrix> {
    let mut out = vec![CMatrix::identity(m.rows())];
    for k in 1..=max as usize {
        out.push(&out[k - 1] * m);
    }
    out
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Right-hand side of the translation expansion
/// `Ω^{m,n}(T − s) = Σ_k Σ_j C(m,k) C(m−k,j) (−s)^{k+j} (T* − s)^k Ω^{m−k−j,n}(T) T^j`.
///
/// The scale bounds the rounding of each summand by
/// `|coef|·‖(T* − s)^k‖·scale(Ω^{m−k−j,n})·‖T^j‖`.
pub fn omega_translate(w: &WeightedOperator, m: u32, n: u32, s: f64) -> Result<Bracket, BracketError> {
    check_order(m.max(n))?;
    let mut words = Words::new(w);
    let dim = w.dim();
    let shifted = powers(&w.t().adjoint().add_identity(Complex64::new(-s, 0.0)), m);
    let tp = powers(w.t(), m);
    let inner: Vec<Bracket> = (0..=m).map(|h| words.omega(h, n, false)).collect();
    let mut value = CMatrix::zeros(dim, dim);
    let mut scale = 0.0;
    for k in 0..=m {
        for j in 0..=m - k {
            let coef = (binomial(m, k) * binomial(m - k, j)) as f64 * (-s).powi((k + j) as i32);
            if coef == 0.0 {
                continue;
            }
            let om = &inner[(m - k - j) as usize];
            let term = &(&shifted[k as usize] * &om.value) * &tp[j as usize];
            value.axpy(Complex64::new(coef, 0.0), &term);
            scale += coef.abs() * shifted[k as usize].norm_fro() * om.scale * tp[j as usize].norm_fro();
        }
    }
    Ok(Bracket { value, scale })
}

/// Right-hand side of the skew translation expansion
/// `Λ^{m,n}(T − s) = Σ_{k,j,i} C(m,k) C(m−k,j) C(n,i) (−s)^{k+j} (−2s)^{n−i} (T* − s)^k Λ^{m−k−j,i}(T) T^j`.
pub fn lambda_translate(w: &WeightedOperator, m: u32, n: u32, s: f64) -> Result<Bracket, BracketError> {
    check_order(m.max(n))?;
    let mut words = Words::new(w);
    let dim = w.dim();
    let shifted = powers(&w.t().adjoint().add_identity(Complex64::new(-s, 0.0)), m);
    let tp = powers(w.t(), m);
    let mut value = CMatrix::zeros(dim, dim);
    let mut scale = 0.0;
    for h in 0..=m {
        for i in 0..=n {
            let lam = words.omega(h, i, true);
            let ci = binomial(n, i) as f64 * (-2.0 * s).powi((n - i) as i32);
            if ci == 0.0 {
                continue;
            }
            for k in 0..=m - h {
                let j = m - h - k;
                let coef = ci * (binomial(m, k) * binomial(m - k, j)) as f64 * (-s).powi((k + j) as i32);
                if coef == 0.0 {
                    continue;
                }
                let term = &(&shifted[k as usize] * &lam.value) * &tp[j as usize];
                value.axpy(Complex64::new(coef, 0.0), &term);
                scale += coef.abs() * shifted[k as usize].norm_fro() * lam.scale * tp[j as usize].norm_fro();
            }
        }
    }
    Ok(Bracket { value, scale })
}

/// The two weighted sums vanishing on `(A, (m, n))`-isosymmetric operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SumForm {
    /// `Σ_k (−1)^{p−k} C(p,k) k^i T*^k S^n_A(T) T^k`, zero for `p ≥ m`, `i ≤ p − m`.
    Symmetry,
    /// `Σ_k (−1)^{p−k} C(p,k) k^i T*^k I^m_A(T) T^{p−k}`, zero for `p ≥ n`, `i ≤ p − n`.
    Isometry,
}

pub fn weighted_sum_identity(
    w: &WeightedOperator,
    m: u32,
    n: u32,
    p: u32,
    i: u32,
    form: SumForm,
) -> Result<Bracket, BracketError> {
    check_order(m.max(n).max(p))?;
    let mut words = Words::new(w);
    let dim = w.dim();
    let inner = match form {
        SumForm::Symmetry => words.symmetry(n, false).value,
        SumForm::Isometry => words.isometry(m).value,
    };
    let mut value = CMatrix::zeros(dim, dim);
    let mut scale = 0.0;
    for k in 0..=p {
        let weight = binomial(p, k) as f64 * f64::from(k).powi(i as i32);
        if weight == 0.0 {
            continue;
        }
        let right = match form {
            SumForm::Symmetry => k,
            SumForm::Isometry => p - k,
        };
        let left = words.adj_pow(k) * &inner;
        let term = &left * words.pow(right);
        value.axpy(Complex64::new(sign(p - k) * weight, 0.0), &term);
        let inner_scale: f64 = match form {
            SumForm::Symmetry => (0..=n).map(|l| binomial(n, l) as f64 * words.term_norm(k + l, n - l + k)).sum(),
            SumForm::Isometry => (0..=m).map(|l| binomial(m, l) as f64 * words.term_norm(k + l, right + l)).sum(),
        };
        scale += weight * inner_scale;
    }
    Ok(Bracket { value, scale })
}

/// Left and right factors `(L, E)` of the exponential sums:
/// `L = (e^{isT})*` or, with `skew`, `L = e^{isT*}`; `E = e^{isT}`.
fn exp_factors(t: &CMatrix, s: f64, skew: bool) -> (CMatrix, CMatrix) {
    let e = matrix_exp(t, s);
    let l = if skew { matrix_exp(&t.adjoint(), s) } else { e.adjoint() };
    (l, e)
}

/// `L^k I^m_A(T) E^k`, the left side of the exponential expansion.
pub fn exp_expansion_lhs(w: &WeightedOperator, m: u32, s: f64, k: u32, skew: bool) -> Result<Bracket, BracketError> {
    check_order(m)?;
    let mut words = Words::new(w);
    let iso = words.isometry(m);
    let (l, e) = exp_factors(w.t(), s, skew);
    let (lk, ek) = (l.pow(k), e.pow(k));
    let value = &(&lk * &iso.value) * &ek;
    let scale = lk.norm_fro() * iso.scale * ek.norm_fro();
    Ok(Bracket { value, scale })
}

/// `Σ_{h<n} (−isk)^h/h! Ω^{m,h}_A(T)` or, with `skew`, `Σ_{h<n} (isk)^h/h! Λ^{m,h}_A(T)`.
pub fn exp_expansion_rhs(
    w: &WeightedOperator,
    m: u32,
    n: u32,
    s: f64,
    k: u32,
    skew: bool,
) -> Result<Bracket, BracketError> {
    check_order(m.max(n))?;
    let mut words = Words::new(w);
    let dim = w.dim();
    let base = if skew { I * s * f64::from(k) } else { -I * s * f64::from(k) };
    let mut value = CMatrix::zeros(dim, dim);
    let mut scale = 0.0;
    for h in 0..n {
        let coef = base.powu(h) / factorial(h);
        let b = words.omega(m, h, skew);
        value.axpy(coef, &b.value);
        scale += coef.norm() * b.scale;
    }
    Ok(Bracket { value, scale })
}

/// `Σ_k (−1)^{n−k} C(n,k) L^k I^m_A(T) E^k`.
pub fn exp_bracket_sum(w: &WeightedOperator, m: u32, n: u32, s: f64, skew: bool) -> Result<Bracket, BracketError> {
    check_order(m.max(n))?;
    let mut words = Words::new(w);
    let iso = words.isometry(m);
    let (l, e) = exp_factors(w.t(), s, skew);
    let dim = w.dim();
    let mut value = CMatrix::zeros(dim, dim);
    let mut scale = 0.0;
    let mut lk = CMatrix::identity(dim);
    let mut ek = CMatrix::identity(dim);
    for k in 0..=n {
        let c = sign(n - k) * binomial(n, k) as f64;
        let term = &(&lk * &iso.value) * &ek;
        value.axpy(Complex64::new(c, 0.0), &term);
        scale += c.abs() * lk.norm_fro() * iso.scale * ek.norm_fro();
        lk = &lk * &l;
        ek = &ek * &e;
    }
    Ok(Bracket { value, scale })
}

/// Norm of the larger of `TS − ST` and `TS* − S*T`.
pub fn double_commutator(t: &CMatrix, s: &CMatrix) -> f64 {
    t.commutator(s).norm_fro().max(t.commutator(&s.adjoint()).norm_fro())
}

/// Right-hand side of the perturbation expansion of `Ω^{m,n}_A(T + S)`
/// (or `Λ^{m,n}_A(T + S)` with `skew`) for doubly commuting `T`, `S`:
/// `Σ_{k,j} Σ_{i+l+h=m} (∓1)^k C(n,k) C(n−k,j) m!/(i! l! h!)
///  (T* + S*)^i S*^{l+j} Ω^{h,n−k−j}_A(T) T^l S^{i+k}`.
pub fn perturb_expansion_rhs(
    w: &WeightedOperator,
    s: &CMatrix,
    m: u32,
    n: u32,
    skew: bool,
) -> Result<Bracket, BracketError> {
    check_order(m.max(n))?;
    let t = w.t();
    if s.rows() != t.rows() || !s.is_square() {
        return Err(crate::mat::MatError::DimensionMismatch("perturbation has the wrong shape".into()).into());
    }
    let commutator = double_commutator(t, s);
    if commutator > 1e-10 * t.norm_fro() * s.norm_fro() {
        return Err(BracketError::NotDoublyCommuting { commutator });
    }
    let mut words = Words::new(w);
    let dim = w.dim();
    let sum_adj = powers(&(t + s).adjoint(), m);
    let s_adj = powers(&s.adjoint(), m + n);
    let tp = powers(t, m);
    let sp = powers(s, m + n);
    let inner: Vec<Vec<Bracket>> = (0..=m).map(|h| (0..=n).map(|q| words.omega(h, q, skew)).collect()).collect();
    let mut value = CMatrix::zeros(dim, dim);
    let mut scale = 0.0;
    for k in 0..=n {
        for j in 0..=n - k {
            let outer = (binomial(n, k) * binomial(n - k, j)) as f64 * if skew { 1.0 } else { sign(k) };
            for i in 0..=m {
                for l in 0..=m - i {
                    let h = m - i - l;
                    let coef = outer * (binomial(m, i) * binomial(m - i, l)) as f64;
                    let left = &sum_adj[i as usize] * &s_adj[(l + j) as usize];
                    let right = &tp[l as usize] * &sp[(i + k) as usize];
                    let om = &inner[h as usize][(n - k - j) as usize];
                    let term = &(&left * &om.value) * &right;
                    value.axpy(Complex64::new(coef, 0.0), &term);
                    scale += coef.abs() * left.norm_fro() * om.scale * right.norm_fro();
                }
            }
        }
    }
    Ok(Bracket { value, scale })
}
