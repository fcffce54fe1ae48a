//! Named fixtures from the worked examples.

use serde::Serialize;

use super::{doubly_commuting_pair, jordan_nilpotent, GenError};
use crate::mat::{block2x2, direct_sum, CMatrix, MatrixJson, WeightedOperator};

pub const FIXTURE_NAMES: [&str; 7] =
    ["ex1_2x2", "ex1_3x3", "ex4_generic", "ex4_upper", "nilpotent_n3", "k_block", "kron_pair"];

/// A weight, an operator and the orders the operator is known to satisfy.
#[derive(Debug, Clone, Serialize)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    /// `(m, n)` with `Ω^{m,n}_A(T) = 0`, or `Λ` when `skew`.
    pub orders: (u32, u32),
    pub skew: bool,
    #[serde(rename = "A")]
    pub a: MatrixJson,
    #[serde(rename = "T")]
    pub t: MatrixJson,
}

impl Fixture {
    fn new(name: &str, description: &str, orders: (u32, u32), skew: bool, w: &WeightedOperator) -> Self {
        Self {
            name: name.into(),
            description: description.into(),
            orders,
            skew,
            a: w.a().into(),
            t: w.t().into(),
        }
    }

    pub fn weighted(&self) -> WeightedOperator {
        let a = CMatrix::try_from(self.a.clone()).expect("fixture weight");
        let t = CMatrix::try_from(self.t.clone()).expect("fixture operator");
        WeightedOperator::new(a, t).expect("fixture weight is PSD")
    }
}

fn w(a: CMatrix, t: CMatrix) -> WeightedOperator {
    WeightedOperator::new(a, t).expect("fixture weight is PSD")
}

fn ones2() -> CMatrix {
    CMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]])
}

/// `A` the all-ones matrix, `T = [[0, −1/2], [0, 1/2]]`: `S¹_A(T) = 0`.
pub fn ex1_2x2() -> WeightedOperator {
    w(ones2(), CMatrix::from_real_rows(&[&[0.0, -0.5], &[0.0, 0.5]]))
}

/// `A = [[0,0,0],[0,1,1],[0,1,1]]`, `T` cyclic with a `−1`: member at `(1,1)`
/// but at neither `(1,0)` nor `(0,1)`.
pub fn ex1_3x3() -> WeightedOperator {
    w(
        CMatrix::from_real_rows(&[&[0.0, 0.0, 0.0], &[0.0, 1.0, 1.0], &[0.0, 1.0, 1.0]]),
        CMatrix::from_real_rows(&[&[0.0, 0.0, -1.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]),
    )
}

/// `A = diag(0, 1)`, `T = [[a, b], [c, d]]`: `Ω^{1,1}_A(T) = 0` iff
/// `c = 0` or `ad − bc = 1`.
pub fn ex4_generic(a: f64, b: f64, c: f64, d: f64) -> WeightedOperator {
    w(CMatrix::diag_real(&[0.0, 1.0]), CMatrix::from_real_rows(&[&[a, b], &[c, d]]))
}

/// `A = diag(0, 1)`, `T = [[a, b], [0, d]]`: `Λ^{1,1}_A(T) = 0` iff
/// `d ∈ {0, ±1}`.
pub fn ex4_upper(a: f64, b: f64, d: f64) -> WeightedOperator {
    w(CMatrix::diag_real(&[0.0, 1.0]), CMatrix::from_real_rows(&[&[a, b], &[0.0, d]]))
}

/// `K = [[R, S], [0, R]]` with weight `A ⊕ A`.
pub fn k_block(base: &WeightedOperator, s: &CMatrix) -> Result<WeightedOperator, GenError> {
    let k = block2x2(base.t(), s, base.t())?;
    Ok(WeightedOperator::new(direct_sum(base.a(), base.a()), k)?)
}

pub fn gallery() -> Vec<Fixture> {
    FIXTURE_NAMES.iter().map(|n| fixture(n).expect("listed fixture")).collect()
}

pub fn fixture(name: &str) -> Result<Fixture, GenError> {
    Ok(match name {
        "ex1_2x2" => Fixture::new(name, "ones weight, A-symmetric 2x2 operator", (0, 1), false, &ex1_2x2()),
        "ex1_3x3" => Fixture::new(name, "singular weight, cyclic operator with a sign", (1, 1), false, &ex1_3x3()),
        "ex4_generic" => Fixture::new(
            name,
            "weight diag(0,1), T=[[a,b],[c,d]] at a=2, b=1, c=1, d=1 (ad-bc=1)",
            (1, 1),
            false,
            &ex4_generic(2.0, 1.0, 1.0, 1.0),
        ),
        "ex4_upper" => Fixture::new(
            name,
            "weight diag(0,1), T=[[a,b],[0,d]] at a=0.5, b=1, d=1",
            (1, 1),
            true,
            &ex4_upper(0.5, 1.0, 1.0),
        ),
        "nilpotent_n3" => {
            let n = jordan_nilpotent(3, 3)?;
            let a = CMatrix::from_real_rows(&[&[2.0, 1.0, 0.0], &[1.0, 2.0, 1.0], &[0.0, 1.0, 2.0]]);
            Fixture::new(name, "Jordan block of order 3, positive weight", (4, 5), false, &w(a, n))
        }
        "k_block" => {
            let base = ex1_3x3();
            let k = k_block(&base, &base.t().clone())?;
            Fixture::new(name, "[[R, R], [0, R]] for R the cyclic 3x3 example, weight A+A", (3, 4), false, &k)
        }
        "kron_pair" => {
            let base = ex1_3x3();
            let (t, q) = doubly_commuting_pair(base.t(), &jordan_nilpotent(2, 2)?);
            let a = crate::mat::kron(base.a(), &CMatrix::identity(2));
            Fixture::new(name, "R x I + I x N2 for the cyclic 3x3 example", (3, 4), false, &w(a, &t + &q))
        }
        other => return Err(GenError::UnknownFixture(other.to_string())),
    })
}
