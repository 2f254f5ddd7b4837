//! JSON file formats.
//!
//! A density matrix is stored as
//!
//! ```json
//! {"dimA": 2, "dimB": 2,
//!  "re": [[0.5, 0, 0, 0.5], [0, 0, 0, 0], [0, 0, 0, 0], [0.5, 0, 0, 0.5]],
//!  "im": [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]}
//! ```
//!
//! `re` and `im` are row-major, `dimA*dimB` rows of `dimA*dimB` numbers each,
//! in the product basis `|i,k>` at index `i*dimB + k`. Other top-level keys
//! are ignored. See `docs/density-format.md` for the full grammar.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::linalg::{c64, validate_density, CMatrix, DensityMatrix, Dims, Tolerances};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityFile {
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    #[serde(rename = "dimB")]
    pub dim_b: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

/// A complex matrix as separate real and imaginary row-major arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixParts {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixParts {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let rows = |f: fn(&c64) -> f64| {
            (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| f(&m[(r, c)])).collect())
                .collect()
        };
        MatrixParts {
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    /// Assembles an `n x n` matrix, rejecting ragged or mis-sized arrays.
    pub fn to_matrix(&self, n: usize) -> Result<CMatrix> {
        for (name, part) in [("re", &self.re), ("im", &self.im)] {
            if part.len() != n {
                return Err(Error::Format(format!(
                    "\"{name}\" has {} rows, expected {n}",
                    part.len()
                )));
            }
            if let Some((r, row)) = part.iter().enumerate().find(|(_, row)| row.len() != n) {
                return Err(Error::Format(format!(
                    "\"{name}\" row {r} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        Ok(CMatrix::from_fn(n, n, |r, c| {
            c64::new(self.re[r][c], self.im[r][c])
        }))
    }
}

impl DensityFile {
    pub fn from_density(q: &DensityMatrix) -> Self {
        let parts = MatrixParts::from_matrix(q.matrix());
        DensityFile {
            dim_a: q.dims().a,
            dim_b: q.dims().b,
            re: parts.re,
            im: parts.im,
        }
    }

    pub fn into_density(self, tol: &Tolerances) -> Result<DensityMatrix> {
        let dims = Dims::new(self.dim_a, self.dim_b)?;
        let parts = MatrixParts {
            re: self.re,
            im: self.im,
        };
        let m = parts.to_matrix(dims.total())?;
        validate_density(m, dims, tol)
    }
}

pub fn parse_density(text: &str, tol: &Tolerances) -> Result<DensityMatrix> {
    let file: DensityFile = serde_json::from_str(text)?;
    file.into_density(tol)
}

pub fn read_density(path: impl AsRef<Path>, tol: &Tolerances) -> Result<DensityMatrix> {
    parse_density(&std::fs::read_to_string(path)?, tol)
}

pub fn density_to_json(q: &DensityMatrix) -> String {
    serde_json::to_string_pretty(&DensityFile::from_density(q)).expect("plain data serializes")
}

pub fn write_density(path: impl AsRef<Path>, q: &DensityMatrix) -> Result<()> {
    std::fs::write(path, density_to_json(q) + "\n")?;
    Ok(())
}
