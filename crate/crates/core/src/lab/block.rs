//! Upper triangular block operators `[[N, E], [0, X]]` with weight `A ⊕ A`.

use num_complex::Complex64;

use super::instances::*;
use super::{Instance, LabError, Trial};
use crate::bracket::{relative, Words};
use crate::genlib::{identity_member, Rng};
use crate::mat::{block2x2, direct_sum, hermitian_eigen, CMatrix};

/// `A`, `N`, `E`, `X` of one block instance.
struct Parts {
    a: CMatrix,
    n: CMatrix,
    e: CMatrix,
    x: CMatrix,
}

impl Parts {
    /// Moves every part by the same similarity `V`: `A ↦ V*AV`, `M ↦ V⁻¹MV`.
    fn moved(rng: &mut Rng, a0: &CMatrix, n0: &CMatrix, e0: &CMatrix, x0: &CMatrix) -> Result<Self, LabError> {
        let v = rng.similarity(a0.rows());
        let vinv = v.inverse()?;
        let mv = |m: &CMatrix| &(&vinv * m) * &v;
        Ok(Self { a: (&(&v.adjoint() * a0) * &v).hermitian_part(), n: mv(n0), e: mv(e0), x: mv(x0) })
    }

    fn block(&self) -> Result<CMatrix, LabError> {
        Ok(block2x2(&self.n, &self.e, &self.x)?)
    }

    fn weight(&self) -> CMatrix {
        direct_sum(&self.a, &self.a)
    }

    fn instance(&self) -> Result<Instance, LabError> {
        Ok(Instance::new(&self.weight(), &self.block()?)
            .with("N", &self.n)
            .with("E", &self.e)
            .with("X", &self.x))
    }

    /// Residuals of the block and of `X` at `(1, 1)`.
    fn memberships(&self) -> Result<(f64, f64), LabError> {
        let block = omega_residual(&self.weight(), &self.block()?, 1, 1, false);
        Ok((block, omega_residual(&self.a, &self.x, 1, 1, false)))
    }
}

/// `‖lhs − rhs‖` relative to `scale`.
fn gap(lhs: &CMatrix, rhs: &CMatrix, scale: f64) -> f64 {
    relative((lhs - rhs).norm_fro(), scale)
}

fn mul3(a: &CMatrix, b: &CMatrix, c: &CMatrix) -> CMatrix {
    &(a * b) * c
}

/// Outcome of comparing two verdicts decided on residuals.
enum Iff {
    Ambiguous,
    Agree(f64),
    Disagree,
}

fn iff(lhs: f64, rhs: f64, tol: f64) -> Iff {
    match (classify(lhs, tol), classify(rhs, tol)) {
        (Some(true), Some(true)) => Iff::Agree(lhs.max(rhs)),
        (Some(false), Some(false)) => Iff::Agree(0.0),
        (Some(_), Some(_)) => Iff::Disagree,
        _ => Iff::Ambiguous,
    }
}

fn iff_trial(case: &'static str, parts: &Parts, lhs: f64, rhs: f64, tol: f64, extra: &str) -> Result<Trial, LabError> {
    let note = format!("block residual {lhs:e}, condition residual {rhs:e}{extra}");
    Ok(match iff(lhs, rhs, tol) {
        Iff::Ambiguous => Trial::skip(case, format!("undecided: {note}")),
        Iff::Agree(r) => Trial::checked(case, r, parts.instance()?).note(note),
        Iff::Disagree => Trial::checked(case, 1.0, parts.instance()?).note(format!("equivalence fails: {note}")),
    })
}

/// `D` diagonal `k × k` with `first` in position 0 and draws from `rest` after.
fn diag_with(rng: &mut Rng, k: usize, first: Complex64, rest: impl Fn(&mut Rng) -> Complex64) -> CMatrix {
    let mut values = vec![first];
    for _ in 1..k {
        values.push(rest(rng));
    }
    CMatrix::diag(&values)
}

/// `S D S⁻¹` and the row `e₁* S⁻¹`, a left eigenvector for `D₀₀`.
fn with_left_eigenvector(s: &CMatrix, d: &CMatrix) -> Result<(CMatrix, CMatrix), LabError> {
    let sinv = s.inverse()?;
    let row = sinv.block(0, 0, 1, s.rows());
    Ok((mul3(s, d, &sinv), row))
}

/// `A = I`, `N` unitary, `E = c·u w*` with `N*u = αu` and `w*X = αw*`, so
/// `N*E = EX` and `E = NEX`.
fn isometric_family(rng: &mut Rng, k: usize, x_member: bool) -> Result<Parts, LabError> {
    let u = rng.unitary(k);
    let first = rng.unimodular();
    let nd = diag_with(rng, k, first, |r| r.unimodular());
    let n0 = mul3(&u, &nd, &u.adjoint());
    let alpha = nd[(0, 0)].conj();
    let (x0, w_row) = if x_member {
        let w = rng.unitary(k);
        with_left_eigenvector(&w, &diag_with(rng, k, alpha, |r| r.unimodular()))?
    } else {
        let s = rng.similarity(k);
        with_left_eigenvector(&s, &diag_with(rng, k, alpha, |r| r.complex_gaussian()))?
    };
    let col = u.block(0, 0, k, 1);
    let e0 = (&col * &w_row).scale(rng.complex_gaussian());
    Parts::moved(rng, &CMatrix::identity(k), &n0, &e0, &x0)
}

/// `A = I`, `N` Hermitian with `Nu = νu`, `E = c·u w*` with `w*X = νw*`, so `NE = EX`.
/// `AE = ANEX` holds exactly when `ν² = 1`.
fn symmetric_family(rng: &mut Rng, k: usize, x_member: bool, unit_nu: bool) -> Result<Parts, LabError> {
    let nu = if unit_nu { Complex64::new(sign(rng), 0.0) } else { Complex64::new(rng.range(-2.0, 2.0), 0.0) };
    let u = rng.unitary(k);
    let nd = diag_with(rng, k, nu, |r| Complex64::new(r.range(-2.0, 2.0), 0.0));
    let n0 = mul3(&u, &nd, &u.adjoint());
    let (x0, w_row) = if x_member {
        let w = rng.unitary(k);
        with_left_eigenvector(&w, &diag_with(rng, k, nu, |r| Complex64::new(r.range(-2.0, 2.0), 0.0)))?
    } else {
        let s = rng.similarity(k);
        with_left_eigenvector(&s, &diag_with(rng, k, nu, |r| r.complex_gaussian()))?
    };
    let col = u.block(0, 0, k, 1);
    let e0 = (&col * &w_row).scale(rng.complex_gaussian());
    Parts::moved(rng, &CMatrix::identity(k), &n0, &e0, &x0)
}

/// `A₀ = I_j ⊕ 0` and an `A₀`-isometry `[[U, 0], [P, Q]]` with `U` unitary.
fn kernel_isometry(rng: &mut Rng, k: usize, j: usize) -> (CMatrix, CMatrix) {
    let mut a0 = CMatrix::zeros(k, k);
    a0.set_block(0, 0, &CMatrix::identity(j));
    let mut n0 = rng.matrix(k);
    let u = rng.unitary(j);
    for r in 0..j {
        for c in 0..k {
            n0[(r, c)] = if c < j { u[(r, c)] } else { Complex64::new(0.0, 0.0) };
        }
    }
    (a0, n0)
}

/// Random `rows × cols` matrix whose first `j` rows vanish.
fn rows_below(rng: &mut Rng, rows: usize, cols: usize, j: usize) -> CMatrix {
    let g = rng.matrix(rows.max(cols));
    CMatrix::from_fn(rows, cols, |r, c| if r < j { Complex64::new(0.0, 0.0) } else { g[(r, c)] })
}

/// `[[X₁₁, 0], [X₂₁, X₂₂]]` with `X₁₁` a member of `(I; (1, 1))`, or a random matrix.
fn kernel_x(rng: &mut Rng, k: usize, j: usize, member: bool) -> Result<CMatrix, LabError> {
    let mut x = rng.matrix(k);
    if member {
        x.set_block(0, 0, &identity_member(rng, j, 1, 1)?);
        for r in 0..j {
            for c in j..k {
                x[(r, c)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    Ok(x)
}

/// Block operators under the two intertwining hypotheses, the kernel
/// condition, and the structure over the kernel of `I¹_A`.
pub(crate) fn block_triangular(rng: &mut Rng, trial: usize, tol: f64) -> Result<Trial, LabError> {
    let k = between(rng, 2, 3);
    let x_member = rng.uniform() < 0.5;
    match trial % 5 {
        0 => {
            // E = 0: the block is a direct sum
            let a0 = CMatrix::identity(k);
            let n0 = rng.unitary(k);
            let x0 = if x_member { identity_member(rng, k, 1, 1)? } else { rng.matrix(k) };
            let parts = Parts::moved(rng, &a0, &n0, &CMatrix::zeros(k, k), &x0)?;
            let (block, x) = parts.memberships()?;
            iff_trial("direct_sum", &parts, block, x, tol, "")
        }
        1 => {
            let parts = isometric_family(rng, k, x_member)?;
            let Parts { a, n, e, x } = &parts;
            let scale = a.norm_fro() * e.norm_fro() * (1.0 + n.norm_fro() * x.norm_fro());
            let hyp = gap(e, &mul3(n, e, x), e.norm_fro() * (1.0 + n.norm_fro() * x.norm_fro()))
                .max(gap(&mul3(&n.adjoint(), a, e), &mul3(a, e, x), scale))
                .max(Words::from_parts(a, n).isometry(1).residual());
            if !(hyp <= HYPOTHESIS_TOL) {
                return Ok(Trial::skip("isometric_intertwining", format!("hypotheses fail ({hyp:e})")));
            }
            let (block, xr) = parts.memberships()?;
            iff_trial("isometric_intertwining", &parts, block, xr, tol, "")
        }
        2 => {
            let unit_nu = rng.uniform() < 0.5;
            let parts = symmetric_family(rng, k, x_member, unit_nu)?;
            let Parts { a, n, e, x } = &parts;
            let hyp = gap(&(&n.adjoint() * a), &(a * n), 2.0 * a.norm_fro() * n.norm_fro())
                .max(gap(&(n * e), &(e * x), n.norm_fro() * e.norm_fro() + e.norm_fro() * x.norm_fro()));
            if !(hyp <= HYPOTHESIS_TOL) {
                return Ok(Trial::skip("symmetric_intertwining", format!("hypotheses fail ({hyp:e})")));
            }
            let (block, xr) = parts.memberships()?;
            let side = gap(&(a * e), &mul3(&(a * n), e, x), a.norm_fro() * e.norm_fro() * (1.0 + n.norm_fro() * x.norm_fro()));
            iff_trial("symmetric_intertwining", &parts, block, xr.max(side), tol, &format!(", side identity {side:e}"))
        }
        3 => {
            // N an A-isometry with N*AE = 0: the block is a member iff X*M = MX, M = E*AE + I¹_A(X)
            let j = between(rng, 1, k - 1);
            let (a0, n0) = kernel_isometry(rng, k, j);
            let e0 = rows_below(rng, k, k, j);
            let x0 = kernel_x(rng, k, j, x_member)?;
            let parts = Parts::moved(rng, &a0, &n0, &e0, &x0)?;
            let Parts { a, n, e, x } = &parts;
            let hyp = Words::from_parts(a, n)
                .isometry(1)
                .residual()
                .max(relative(mul3(&n.adjoint(), a, e).norm_fro(), n.norm_fro() * a.norm_fro() * e.norm_fro()));
            if !(hyp <= HYPOTHESIS_TOL) {
                return Ok(Trial::skip("kernel_condition", format!("hypotheses fail ({hyp:e})")));
            }
            let iso = Words::from_parts(a, x).isometry(1);
            let m = &mul3(&e.adjoint(), a, e) + &iso.value;
            let m_scale = a.norm_fro() * e.norm_fro().powi(2) + iso.scale;
            let commutation = gap(&(&x.adjoint() * &m), &(&m * x), 2.0 * x.norm_fro() * m_scale);
            let (block, _) = parts.memberships()?;
            let stated = if classify(block, tol) == Some(false) { ", unconditional form fails" } else { "" };
            iff_trial("kernel_condition", &parts, block, commutation, tol, stated)
        }
        _ => kernel_structure(rng, tol),
    }
}

/// `T = [[N, E], [0, X]]` on `H₁ ⊕ H₂` with weight `A₁ ⊕ A₂`, `N` an
/// `A₁`-isometry and `E*A₁N = 0`: `H₁ ⊕ 0 ⊆ ker I¹_A(T)`. When the kernel is
/// invariant for `A` and `T`, the compression to it is an isometry with the
/// off-diagonal condition.
fn kernel_structure(rng: &mut Rng, tol: f64) -> Result<Trial, LabError> {
    let case = "isometric_kernel";
    let k1 = between(rng, 2, 3);
    let k2 = between(rng, 1, 2);
    let j = between(rng, 1, k1 - 1);
    let (a1, n0) = kernel_isometry(rng, k1, j);
    let e0 = rows_below(rng, k1, k2, j);
    let x0 = rng.matrix(k2);
    let a2 = rng.psd(k2);
    let v = rng.similarity(k1);
    let w = rng.similarity(k2);
    let big_v = direct_sum(&v, &w);
    let vinv = big_v.inverse()?;
    let mut t0 = CMatrix::zeros(k1 + k2, k1 + k2);
    t0.set_block(0, 0, &n0);
    t0.set_block(0, k1, &e0);
    t0.set_block(k1, k1, &x0);
    let t = mul3(&vinv, &t0, &big_v);
    let a = mul3(&big_v.adjoint(), &direct_sum(&a1, &a2), &big_v).hermitian_part();
    let iso = Words::from_parts(&a, &t).isometry(1);
    let dim = k1 + k2;
    let containment = relative(iso.value.block(0, 0, dim, k1).norm_fro(), iso.scale);
    // the kernel of I¹_A(T), its invariance, and the compressed conclusions
    let eig = hermitian_eigen(&iso.value)?;
    let cutoff = tol * iso.scale.max(1.0);
    let kernel: Vec<usize> = (0..dim).filter(|&i| eig.values[i].abs() <= cutoff).collect();
    let rest: Vec<usize> = (0..dim).filter(|&i| eig.values[i].abs() > cutoff).collect();
    let basis = |cols: &[usize]| CMatrix::from_fn(dim, cols.len(), |r, c| eig.vectors[(r, cols[c])]);
    let q = basis(&kernel);
    let mut residual = containment;
    let mut note = format!("containment {containment:e}, kernel dimension {}", kernel.len());
    if !kernel.is_empty() {
        let p = &q * &q.adjoint();
        let outside = |m: &CMatrix| {
            let image = m * &q;
            relative((&image - &(&p * &image)).norm_fro(), m.norm_fro())
        };
        let invariant = outside(&a).max(outside(&t));
        if invariant <= HYPOTHESIS_TOL {
            let n1 = mul3(&q.adjoint(), &t, &q);
            let a_m = mul3(&q.adjoint(), &a, &q);
            let iso_n = Words::from_parts(&a_m, &n1).isometry(1).residual();
            let mut side = 0.0;
            if !rest.is_empty() {
                let e1 = mul3(&q.adjoint(), &t, &basis(&rest));
                let lhs = mul3(&e1.adjoint(), &a_m, &n1);
                side = relative(lhs.norm_fro(), e1.norm_fro() * a_m.norm_fro() * n1.norm_fro());
            }
            residual = residual.max(iso_n).max(side);
            note.push_str(&format!(", invariant; compressed isometry {iso_n:e}, off-diagonal {side:e}"));
        } else {
            note.push_str(&format!(", kernel not invariant ({invariant:e})"));
        }
    }
    let instance = Instance::new(&a, &t).with("N", &n0).with("E", &e0).with("X", &x0);
    Ok(Trial::checked(case, residual, instance).note(note))
}
