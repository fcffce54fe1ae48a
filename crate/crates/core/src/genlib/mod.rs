//! Deterministic instance generators and the fixture gallery.
//!
//! Randomness comes from ChaCha20 seeded with a `u64`; sub-streams are split
//! with the stream counter, so `(seed, stream)` names a reproducible sequence
//! on every platform. Gaussians use Box–Muller.
//!
//! Member instances are built from blocks whose brackets vanish for the
//! identity weight, then moved by a similarity `T = V⁻¹T₀V`, `A = V*A₀V`,
//! under which every bracket transforms as `Ω_A(T) = V*Ω_{A₀}(T₀)V`.

mod gallery;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::mat::{direct_sum, kron, CMatrix, MatError, WeightedOperator, ONE, ZERO};

pub use gallery::{ex1_2x2, ex1_3x3, ex4_generic, ex4_upper, fixture, gallery, k_block, Fixture, FIXTURE_NAMES};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("nilpotent order {r} is not in 1..={dim}")]
    BadOrder { r: usize, dim: usize },
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("no nonzero weight exists for orders ({m}, {n})")]
    Unsupported { m: u32, n: u32 },
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Seeded generator with uniform, Gaussian and complex Gaussian draws.
#[derive(Debug, Clone)]
pub struct Rng(ChaCha20Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha20Rng::seed_from_u64(seed))
    }

    /// Independent sub-stream `stream` of `seed`.
    pub fn stream(seed: u64, stream: u64) -> Self {
        let mut r = ChaCha20Rng::seed_from_u64(seed);
        r.set_stream(stream);
        Self(r)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }

    pub fn gaussian(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
    }

    /// Complex Gaussian with unit variance.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        Complex64::new(self.gaussian(), self.gaussian()) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn unimodular(&mut self) -> Complex64 {
        Complex64::from_polar(1.0, self.range(-PI, PI))
    }

    pub fn matrix(&mut self, dim: usize) -> CMatrix {
        CMatrix::from_fn(dim, dim, |_, _| self.complex_gaussian())
    }

    pub fn psd(&mut self, dim: usize) -> CMatrix {
        let g = self.matrix(dim);
        &g.adjoint() * &g
    }

    pub fn unitary(&mut self, dim: usize) -> CMatrix {
        orthonormalize(&self.matrix(dim))
    }

    pub fn hermitian(&mut self, dim: usize) -> CMatrix {
        self.matrix(dim).hermitian_part()
    }

    /// `U₁ · diag(σ) · U₂` with `σ ∈ [0.5, 2]`, condition number at most 4.
    pub fn similarity(&mut self, dim: usize) -> CMatrix {
        let sigma: Vec<f64> = (0..dim).map(|_| self.range(0.5, 2.0)).collect();
        let left = self.unitary(dim);
        let right = self.unitary(dim);
        &(&left * &CMatrix::diag_real(&sigma)) * &right
    }
}

/// Gram–Schmidt with reorthogonalization on the columns of `g`.
fn orthonormalize(g: &CMatrix) -> CMatrix {
    let n = g.rows();
    let mut q = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut v = g.column(j);
        for _ in 0..2 {
            for k in 0..j {
                let qk = q.column(k);
                let p: Complex64 = qk.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(&qk) {
                    *vi -= p * qi;
                }
            }
        }
        let norm = crate::mat::vec_norm(&v);
        for (i, vi) in v.iter().enumerate() {
            q[(i, j)] = vi / norm;
        }
    }
    q
}

/// Complex Gaussian matrix.
pub fn rand_matrix(dim: usize, seed: u64) -> CMatrix {
    Rng::new(seed).matrix(dim)
}

/// `G*G` for a complex Gaussian `G`.
pub fn rand_psd(dim: usize, seed: u64) -> CMatrix {
    Rng::new(seed).psd(dim)
}

/// Orthonormalized complex Gaussian matrix.
pub fn rand_unitary(dim: usize, seed: u64) -> CMatrix {
    Rng::new(seed).unitary(dim)
}

/// Direct sum of shift blocks of size `r` (and one shorter remainder block),
/// so `N^r = 0` and `N^{r−1} ≠ 0`.
pub fn jordan_nilpotent(dim: usize, r: usize) -> Result<CMatrix, GenError> {
    if r == 0 || r > dim {
        return Err(GenError::BadOrder { r, dim });
    }
    Ok(CMatrix::from_fn(dim, dim, |i, j| if j == i + 1 && j % r != 0 { ONE } else { ZERO }))
}

/// `T = R ⊗ I`, `Q = I ⊗ N`, doubly commuting by the mixed-product rule.
pub fn doubly_commuting_pair(r: &CMatrix, n: &CMatrix) -> (CMatrix, CMatrix) {
    (kron(r, &CMatrix::identity(n.rows())), kron(&CMatrix::identity(r.rows()), n))
}

/// `λ + N_r` on one block.
fn jordan_block(lambda: Complex64, r: usize) -> CMatrix {
    CMatrix::from_fn(r, r, |i, j| {
        if i == j {
            lambda
        } else if j == i + 1 {
            ONE
        } else {
            ZERO
        }
    })
}

/// Random member of `(I; (m, n))` built from Jordan blocks.
///
/// A block `λ + N_r` with `|λ| = 1` is a `(2r − 1)`-isometry and with `λ`
/// real a `(2r − 1)`-symmetry, so it is a member whenever `2r − 1 ≤ m`,
/// respectively `2r − 1 ≤ n`. Real eigenvalues keep `|λ| ∈ [0.3, 2]`, so the
/// result is invertible.
pub fn identity_member(rng: &mut Rng, dim: usize, m: u32, n: u32) -> Result<CMatrix, GenError> {
    if m == 0 && n == 0 {
        return Err(GenError::Unsupported { m, n });
    }
    let mut t: Option<CMatrix> = None;
    let mut left = dim;
    while left > 0 {
        let isometric = if m == 0 {
            false
        } else if n == 0 {
            true
        } else {
            rng.uniform() < 0.5
        };
        let order = if isometric { m } else { n } as usize;
        let max_r = order.div_ceil(2).min(left).max(1);
        let r = 1 + rng.index(max_r);
        let lambda = if isometric {
            rng.unimodular()
        } else {
            let mag = rng.range(0.3, 2.0);
            Complex64::new(if rng.uniform() < 0.5 { -mag } else { mag }, 0.0)
        };
        let block = jordan_block(lambda, r);
        t = Some(match t {
            None => block,
            Some(prev) => direct_sum(&prev, &block),
        });
        left -= r;
    }
    Ok(t.expect("dim > 0"))
}

/// Random `(A; (m, n))` member with a nonzero PSD weight, moved by a random
/// similarity. With `singular`, the weight has a kernel: `A₀ = I_k ⊕ 0` and
/// `T₀ = [[T₁₁, 0], [T₂₁, T₂₂]]` with `T₁₁` a member and the rest random.
pub fn member_instance(
    rng: &mut Rng,
    dim: usize,
    m: u32,
    n: u32,
    singular: bool,
) -> Result<WeightedOperator, GenError> {
    let (a0, t0) = if singular && dim >= 2 {
        let k = 1 + rng.index(dim - 1);
        let t11 = identity_member(rng, k, m, n)?;
        let mut t0 = CMatrix::zeros(dim, dim);
        t0.set_block(0, 0, &t11);
        let rest = rng.matrix(dim);
        for i in k..dim {
            for j in 0..dim {
                t0[(i, j)] = rest[(i, j)];
            }
        }
        let mut a0 = CMatrix::zeros(dim, dim);
        a0.set_block(0, 0, &CMatrix::identity(k));
        (a0, t0)
    } else {
        (CMatrix::identity(dim), identity_member(rng, dim, m, n)?)
    };
    transport(rng, &a0, &t0)
}

/// `(V*A₀V, V⁻¹T₀V)` for a random well-conditioned `V`.
pub fn transport(rng: &mut Rng, a0: &CMatrix, t0: &CMatrix) -> Result<WeightedOperator, GenError> {
    let v = rng.similarity(a0.rows());
    let vinv = v.inverse()?;
    let a = (&(&v.adjoint() * a0) * &v).hermitian_part();
    let t = &(&vinv * t0) * &v;
    Ok(WeightedOperator::new(a, t)?)
}

/// Skew member: `T = i·T'` for an `Ω`-member `T'`, using `Λ(T) = i^n Ω(iT)`.
pub fn skew_member_instance(
    rng: &mut Rng,
    dim: usize,
    m: u32,
    n: u32,
    singular: bool,
) -> Result<WeightedOperator, GenError> {
    let w = member_instance(rng, dim, m, n, singular)?;
    Ok(w.with_operator(w.t().scale(crate::mat::I))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_is_in_range_and_deterministic() {
        let mut a = Rng::new(3);
        let mut b = Rng::new(3);
        for _ in 0..100 {
            let u = a.uniform();
            assert!((0.0..1.0).contains(&u));
            assert_eq!(u.to_bits(), b.uniform().to_bits());
        }
        assert_ne!(Rng::stream(3, 1).next_u64(), Rng::stream(3, 2).next_u64());
    }

    #[test]
    fn jordan_shapes() {
        let n = jordan_nilpotent(4, 2).unwrap();
        assert_eq!(n[(0, 1)], ONE);
        assert_eq!(n[(1, 2)], ZERO);
        assert_eq!(n[(2, 3)], ONE);
        assert!(matches!(jordan_nilpotent(2, 3), Err(GenError::BadOrder { .. })));
    }
}
