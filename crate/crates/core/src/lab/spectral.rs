//! Eigenvalue localization and `A`-orthogonality of eigenvectors for members
//! with an invertible weight.

use num_complex::Complex64;

use super::instances::*;
use super::{Instance, LabError, Trial};
use crate::bracket::BracketKind;
use crate::genlib::{member_instance, Rng};
use crate::mat::{eigenpairs, semi_inner, CMatrix, WeightedOperator};

/// Eigenvalues closer than this form one cluster.
pub const CLUSTER_GAP: f64 = 1e-4;
/// Smallest weight eigenvalue, relative to the largest, for an invertible weight.
pub const INVERTIBLE_WEIGHT: f64 = 1e-6;

/// Distance from `λ` to the unit circle union the real axis.
pub fn localization_distance(lambda: Complex64) -> f64 {
    lambda.im.abs().min((lambda.norm() - 1.0).abs())
}

/// Groups indices of values within `gap` of each other, transitively.
fn clusters(values: &[Complex64], gap: f64) -> Vec<Vec<usize>> {
    let mut label: Vec<usize> = (0..values.len()).collect();
    for i in 0..values.len() {
        for j in 0..i {
            if (values[i] - values[j]).norm() <= gap {
                let (from, to) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == from {
                        *l = to;
                    }
                }
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    for root in 0..values.len() {
        let members: Vec<usize> = (0..values.len()).filter(|&i| label[i] == root).collect();
        if !members.is_empty() {
            out.push(members);
        }
    }
    out
}

/// Whether `λ`, `μ` are separated as required for `⟨Ax | y⟩ = 0`:
/// `λ ≠ μ`, `λ ≠ μ̄` and `λμ̄ ≠ 1`.
pub fn orthogonality_applies(lambda: Complex64, mu: Complex64) -> bool {
    (lambda - mu).norm() > CLUSTER_GAP
        && (lambda - mu.conj()).norm() > CLUSTER_GAP
        && (lambda * mu.conj() - 1.0).norm() > CLUSTER_GAP
}

/// Largest localization distance, `A`-inner product of separated
/// eigenvectors and scalar identity residual, with the count of pairs tested.
pub fn spectral_residual(a: &CMatrix, t: &CMatrix, m: u32, n: u32) -> Result<(f64, usize), LabError> {
    let eig = eigenpairs(t)?;
    let groups = clusters(&eig.values, CLUSTER_GAP);
    let accepted = eig.accepted(t.norm_fro());
    let a_norm = a.norm_fro();
    let mut residual: f64 = 0.0;
    let mut isolated = Vec::new();
    for g in &groups {
        let centroid = g.iter().map(|&i| eig.values[i]).sum::<Complex64>() / g.len() as f64;
        residual = residual.max(localization_distance(centroid));
        if g.len() == 1 && accepted.contains(&g[0]) {
            isolated.push(g[0]);
        }
    }
    for &i in &isolated {
        let lambda = eig.values[i];
        let x = &eig.vectors[i];
        let ax = semi_inner(a, x, x)?;
        let factor = Complex64::new(1.0 - lambda.norm_sqr(), 0.0).powu(m) * Complex64::new(2.0 * lambda.im, 0.0).powu(n);
        let bound = a_norm * (1.0 + lambda.norm_sqr()).powi(m as i32) * (1.0 + 2.0 * lambda.norm()).powi(n as i32);
        residual = residual.max((factor * ax).norm() / bound);
    }
    let mut pairs = 0;
    for (k, &i) in isolated.iter().enumerate() {
        for &j in &isolated[k + 1..] {
            if orthogonality_applies(eig.values[i], eig.values[j]) {
                pairs += 1;
                let inner = semi_inner(a, &eig.vectors[i], &eig.vectors[j])?;
                residual = residual.max(inner.norm() / a_norm);
            }
        }
    }
    Ok((residual, pairs))
}

/// Spectral localization, `A`-orthogonality and the per-eigenvalue identity.
pub(crate) fn spectral(rng: &mut Rng, trial: usize, _tol: f64) -> Result<Trial, LabError> {
    let d = between(rng, 2, 5);
    let (case, w, m, n) = match trial % 5 {
        0 => ("unitary", WeightedOperator::new(CMatrix::identity(d), rng.unitary(d))?, 1, 1),
        1 => ("hermitian", WeightedOperator::new(CMatrix::identity(d), rng.hermitian(d))?, 1, 1),
        2 => ("diagonal_member", diagonal_member(rng, d)?, 1, 1),
        3 => {
            let (m, n) = orders(rng, 2, 2);
            let t = diagonal_member(rng, d.min(4))?.t().clone();
            match solver_weight(rng, &t, &[BracketKind::Omega(m, n)]) {
                Some(w) => ("solver_weight", w, m, n),
                None => return Ok(Trial::skip("solver_weight", "solver found no weight")),
            }
        }
        _ => {
            let (m, n) = orders(rng, 3, 3);
            ("jordan_member", member_instance(rng, d, m, n, false)?, m, n)
        }
    };
    let hyp = omega_residual(w.a(), w.t(), m, n, false);
    let min = relative_min_eigenvalue(w.a())?;
    if !(hyp <= HYPOTHESIS_TOL) || min < INVERTIBLE_WEIGHT {
        return Ok(Trial::skip(case, format!("member residual {hyp:e}, relative weight minimum {min:e}")));
    }
    let (residual, pairs) = spectral_residual(w.a(), w.t(), m, n)?;
    Ok(Trial::checked(case, residual, Instance::new(w.a(), w.t()))
        .note(format!("({m}, {n}), {pairs} separated eigenpairs")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clusters_are_transitive() {
        let v = [Complex64::new(0.0, 0.0), Complex64::new(5e-5, 0.0), Complex64::new(1e-4, 0.0), Complex64::new(1.0, 0.0)];
        let g = clusters(&v, CLUSTER_GAP);
        assert_eq!(g, vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn localization_distance_examples() {
        assert_eq!(localization_distance(Complex64::new(3.0, 0.0)), 0.0);
        assert!(localization_distance(Complex64::from_polar(1.0, 0.7)) < 1e-15);
        assert!((localization_distance(Complex64::new(0.0, 0.5)) - 0.5).abs() < 1e-15);
    }
}
