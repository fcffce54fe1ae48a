use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{CMatrix, MatError};

/// Wire form `{"rows": n, "cols": m, "data": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl From<CMatrix> for MatrixJson {
    fn from(m: CMatrix) -> Self {
        Self::from(&m)
    }
}

impl TryFrom<MatrixJson> for CMatrix {
    type Error = MatError;
    fn try_from(j: MatrixJson) -> Result<Self, MatError> {
        CMatrix::new(j.rows, j.cols, j.data.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
    }
}

impl CMatrix {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&MatrixJson::from(self)).expect("matrix JSON serialization")
    }

    pub fn from_json(s: &str) -> Result<Self, MatError> {
        let j: MatrixJson = serde_json::from_str(s).map_err(|e| MatError::Json(e.to_string()))?;
        CMatrix::try_from(j)
    }
}
