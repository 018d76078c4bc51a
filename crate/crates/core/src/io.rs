//! JSON documents for operators and diagonals.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factory::{DiagonalOp, HermitianKind, TruncationSpec};
use crate::linalg::{AntiHermitianOp, ComplexMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixKind {
    AntiHermitian,
    General,
}

/// A square operator with its truncation metadata; `entries` is row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorDocument {
    pub dim: usize,
    pub gamma: f64,
    pub delta: f64,
    pub kind: MatrixKind,
    pub entries: Vec<[f64; 2]>,
    pub tail_bound: f64,
    pub constraint_ok: bool,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl OperatorDocument {
    pub fn from_anti_hermitian(op: &AntiHermitianOp, spec: &TruncationSpec, tail_bound: f64) -> Self {
        Self {
            dim: op.dim(),
            gamma: spec.gamma,
            delta: spec.delta,
            kind: MatrixKind::AntiHermitian,
            entries: op.as_complex().to_row_major(),
            tail_bound,
            constraint_ok: spec.constraint_ok(),
            warnings: spec.warnings(),
        }
    }

    pub fn matrix(&self) -> Result<ComplexMatrix> {
        let pairs: Vec<(f64, f64)> = self.entries.iter().map(|[re, im]| (*re, *im)).collect();
        ComplexMatrix::from_row_major(self.dim, &pairs)
    }

    pub fn to_anti_hermitian(&self) -> Result<AntiHermitianOp> {
        if self.kind != MatrixKind::AntiHermitian {
            return Err(Error::InvalidInput(
                "document does not hold an anti-Hermitian operator".into(),
            ));
        }
        AntiHermitianOp::new(self.matrix()?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalDocument {
    pub kind: HermitianKind,
    pub entries: Vec<[f64; 2]>,
}

impl From<&DiagonalOp> for DiagonalDocument {
    fn from(d: &DiagonalOp) -> Self {
        Self {
            kind: d.kind(),
            entries: d.entries().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl DiagonalDocument {
    pub fn to_diagonal(&self) -> Result<DiagonalOp> {
        DiagonalOp::new(
            self.entries.iter().map(|[re, im]| C64::new(*re, *im)).collect(),
            self.kind,
        )
    }
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::{build_b, OperatorFamily};

    #[test]
    fn operator_round_trip() {
        let spec = TruncationSpec::standard(6);
        let fam = OperatorFamily::build(&spec).unwrap();
        let doc = OperatorDocument::from_anti_hermitian(&fam.z2, &spec, fam.tail_bound);
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.contains("\"kind\":\"anti-hermitian\""));
        let back: OperatorDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_anti_hermitian().unwrap(), fam.z2);
        assert_eq!(back.entries.len(), 36);
        // row-major: entry (1, 0) is second row, first column
        assert_eq!(back.entries[6], [fam.z2.get(1, 0).re, fam.z2.get(1, 0).im]);
    }

    #[test]
    fn diagonal_round_trip_and_bad_documents() {
        let b = build_b(4).unwrap();
        let doc = DiagonalDocument::from(&b);
        assert_eq!(doc.to_diagonal().unwrap(), b);
        let mut bad =
            OperatorDocument::from_anti_hermitian(&AntiHermitianOp::zeros(2), &TruncationSpec::standard(2), 0.0);
        bad.entries.pop();
        assert!(bad.to_anti_hermitian().is_err());
        bad.entries.push([1.0, 0.0]);
        assert!(bad.to_anti_hermitian().is_err());
    }
}
