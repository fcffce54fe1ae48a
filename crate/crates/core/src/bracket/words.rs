use std::collections::HashMap;

use num_complex::Complex64;

use super::{binomial, sign, Bracket};
use crate::mat::{CMatrix, WeightedOperator};

/// Cache of the powers `T^k`, `T*^k` and the words `T*^i A T^j` used by one
/// family of evaluations on a fixed pair `(A, T)`.
#[derive(Debug, Clone)]
pub struct Words {
    a: CMatrix,
    powers: Vec<CMatrix>,
    adjoint_powers: Vec<CMatrix>,
    terms: HashMap<(u32, u32), CMatrix>,
}

impl Words {
    pub fn new(w: &WeightedOperator) -> Self {
        Self::from_parts(w.a(), w.t())
    }

    pub fn from_parts(a: &CMatrix, t: &CMatrix) -> Self {
        let n = a.rows();
        Self {
            a: a.clone(),
            powers: vec![CMatrix::identity(n), t.clone()],
            adjoint_powers: vec![CMatrix::identity(n), t.adjoint()],
            terms: HashMap::new(),
        }
    }

    pub fn t(&self) -> &CMatrix {
        &self.powers[1]
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    /// `T^k`.
    pub fn pow(&mut self, k: u32) -> &CMatrix {
        let k = k as usize;
        while self.powers.len() <= k {
            let next = &self.powers[self.powers.len() - 1] * &self.powers[1];
            self.powers.push(next);
        }
        &self.powers[k]
    }

    /// `T*^k`.
    pub fn adj_pow(&mut self, k: u32) -> &CMatrix {
        let k = k as usize;
        while self.adjoint_powers.len() <= k {
            let next = &self.adjoint_powers[self.adjoint_powers.len() - 1] * &self.adjoint_powers[1];
            self.adjoint_powers.push(next);
        }
        &self.adjoint_powers[k]
    }

    /// `T*^i A T^j`.
    pub fn term(&mut self, i: u32, j: u32) -> &CMatrix {
        if !self.terms.contains_key(&(i, j)) {
            let left = &self.adj_pow(i).clone() * &self.a;
            let value = &left * self.pow(j);
            self.terms.insert((i, j), value);
        }
        &self.terms[&(i, j)]
    }

    pub fn term_norm(&mut self, i: u32, j: u32) -> f64 {
        self.term(i, j).norm_fro()
    }

    /// `T*^k M T^k`.
    fn sandwich(&mut self, k: u32, m: &CMatrix) -> CMatrix {
        let left = self.adj_pow(k) * m;
        &left * self.pow(k)
    }

    /// `Σ c · T*^i A T^j` over the given words, with scale `Σ |c|·‖T*^i A T^j‖`.
    pub fn eval<I>(&mut self, words: I) -> Bracket
    where
        I: IntoIterator<Item = (u32, u32, Complex64)>,
    {
        let n = self.a.rows();
        let mut value = CMatrix::zeros(n, n);
        let mut scale = 0.0;
        for (i, j, c) in words {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let term = self.term(i, j);
            scale += c.norm() * term.norm_fro();
            value.axpy(c, term);
        }
        Bracket { value, scale }
    }

    pub fn isometry(&mut self, m: u32) -> Bracket {
        self.eval((0..=m).map(|k| (k, k, real(sign(m - k) * binomial(m, k) as f64))))
    }

    /// `S^n` or, with `skew`, `ζ^n`.
    pub fn symmetry(&mut self, n: u32, skew: bool) -> Bracket {
        self.eval((0..=n).map(|k| {
            let s = if skew { 1.0 } else { sign(n - k) };
            (k, n - k, real(s * binomial(n, k) as f64))
        }))
    }

    /// Sum of the norms of the `(m+1)(n+1)` uncombined words of the double sum.
    pub fn omega_scale(&mut self, m: u32, n: u32) -> f64 {
        let mut scale = 0.0;
        for j in 0..=m {
            for k in 0..=n {
                scale += (binomial(m, j) * binomial(n, k)) as f64 * self.term_norm(j + k, n - k + j);
            }
        }
        scale
    }

    /// `Σ_j (−1)^{m−j} C(m,j) T*^j S^n T^j` (or with `ζ^n`).
    pub fn omega(&mut self, m: u32, n: u32, skew: bool) -> Bracket {
        let inner = self.symmetry(n, skew).value;
        let dim = self.a.rows();
        let mut value = CMatrix::zeros(dim, dim);
        for j in 0..=m {
            let c = sign(m - j) * binomial(m, j) as f64;
            value.axpy(real(c), &self.sandwich(j, &inner));
        }
        let scale = self.omega_scale(m, n);
        Bracket { value, scale }
    }

    /// `Σ_k (∓1)^{n−k} C(n,k) T*^k I^m T^{n−k}`.
    pub fn omega_dual(&mut self, m: u32, n: u32, skew: bool) -> Bracket {
        let inner = self.isometry(m).value;
        let dim = self.a.rows();
        let mut value = CMatrix::zeros(dim, dim);
        for k in 0..=n {
            let s = if skew { 1.0 } else { sign(n - k) };
            let left = self.adj_pow(k) * &inner;
            let term = &left * self.pow(n - k);
            value.axpy(real(s * binomial(n, k) as f64), &term);
        }
        let scale = self.omega_scale(m, n);
        Bracket { value, scale }
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}
