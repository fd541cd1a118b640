//! JSON exchange format `{"dim": n, "re": [[...]], "im": [[...]]}`; `im` is optional.

use serde::{Deserialize, Serialize};

use super::matrix::HermitianMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<HermitianMatrix> {
        if self.re.len() != self.dim {
            return Err(Error::Format(format!(
                "dim is {} but `re` has {} rows",
                self.dim,
                self.re.len()
            )));
        }
        HermitianMatrix::from_parts(&self.re, self.im.as_deref())
    }
}

impl From<&HermitianMatrix> for MatrixFile {
    fn from(m: &HermitianMatrix) -> Self {
        let rows = |part: nalgebra::DMatrix<f64>| -> Vec<Vec<f64>> {
            (0..part.nrows())
                .map(|i| (0..part.ncols()).map(|j| part[(i, j)]).collect())
                .collect()
        };
        MatrixFile {
            dim: m.dim(),
            re: rows(m.real_part()),
            im: if m.is_real() { None } else { Some(rows(m.imag_part())) },
        }
    }
}

impl HermitianMatrix {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        file.to_matrix()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&MatrixFile::from(self)).expect("matrix serialization")
    }
}
