//! FrameFile JSON interchange format.
//!
//! Schema (field names are part of the format):
//!
//! ```json
//! { "dim": n, "semantics": "truncated" | "cyclic", "k_min": int, "k_max": int,
//!   "members": [ { "k": int, "subspace_basis": [[ [re, im], ... ]], "theta": [[ [re, im], ... ]] } ] }
//! ```
//!
//! Matrices are arrays of rows; each entry is a two-element `[re, im]` array.
//! The writer is canonical: keys in sorted order and floats rendered with 17
//! significant digits, so saving a loaded canonical file reproduces it byte
//! for byte.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex;
use serde::Deserialize;

use crate::frame::{FrameError, FrameFamily, FrameMember, Subspace, WindowSemantics};
use crate::numerics::ComplexMatrix;
use crate::scalar::Real;

/// Gram deviation above which a parsed subspace basis is rejected.
pub const PARSE_ORTHONORMALITY_TOL: f64 = 1e-8;

#[derive(Debug, thiserror::Error)]
pub enum FrameFileError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("member {index}: subspace basis is not orthonormal (Gram deviation {deviation:e})")]
    NonOrthonormalBasis { index: usize, deviation: f64 },
    #[error(transparent)]
    Family(#[from] FrameError),
}

#[derive(Deserialize)]
struct FileDoc {
    dim: usize,
    semantics: String,
    k_min: i64,
    k_max: i64,
    members: Vec<MemberDoc>,
}

#[derive(Deserialize)]
struct MemberDoc {
    k: i64,
    subspace_basis: Vec<Vec<[f64; 2]>>,
    theta: Vec<Vec<[f64; 2]>>,
}

/// Parse a FrameFile document from a JSON string.
pub fn parse_frame_file<R: Real>(text: &str) -> Result<FrameFamily<R>, FrameFileError> {
    let doc: FileDoc = serde_json::from_str(text).map_err(|e| FrameFileError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let semantics = match doc.semantics.as_str() {
        "truncated" => WindowSemantics::Truncated,
        "cyclic" => WindowSemantics::Cyclic,
        other => {
            return Err(FrameFileError::Schema(format!(
                "semantics must be \"truncated\" or \"cyclic\", got {other:?}"
            )))
        }
    };
    if doc.members.is_empty() {
        return Err(FrameFileError::Schema("members list is empty".into()));
    }
    let expected_len = doc
        .k_max
        .checked_sub(doc.k_min)
        .and_then(|d| d.checked_add(1))
        .filter(|&d| d > 0)
        .ok_or_else(|| FrameFileError::Schema("k_min must not exceed k_max".into()))?;
    if doc.members.len() as i64 != expected_len {
        return Err(FrameFileError::Schema(format!(
            "window [{}, {}] expects {} members, found {}",
            doc.k_min,
            doc.k_max,
            expected_len,
            doc.members.len()
        )));
    }

    let mut members = Vec::with_capacity(doc.members.len());
    for (index, m) in doc.members.into_iter().enumerate() {
        if m.k != doc.k_min + index as i64 {
            return Err(FrameFileError::Schema(format!(
                "member {index} has k={}, expected {}",
                m.k,
                doc.k_min + index as i64
            )));
        }
        let basis = matrix_from_doc::<R>(&m.subspace_basis)
            .map_err(|e| FrameFileError::Schema(format!("member {index} subspace_basis: {e}")))?;
        if basis.rows() != doc.dim {
            return Err(FrameFileError::Schema(format!(
                "member {index} subspace_basis has {} rows, expected {}",
                basis.rows(),
                doc.dim
            )));
        }
        let gram_dev = basis
            .adjoint()
            .mul(&basis)
            .sub(&ComplexMatrix::identity(basis.cols()))
            .fro_norm();
        if gram_dev.as_f64() > PARSE_ORTHONORMALITY_TOL {
            return Err(FrameFileError::NonOrthonormalBasis {
                index,
                deviation: gram_dev.as_f64(),
            });
        }
        let subspace = Subspace::new(basis)
            .map_err(|e| FrameFileError::Schema(format!("member {index} subspace_basis: {e}")))?;
        let theta = matrix_from_doc::<R>(&m.theta)
            .map_err(|e| FrameFileError::Schema(format!("member {index} theta: {e}")))?;
        members.push(FrameMember::new(m.k, subspace, theta));
    }

    Ok(FrameFamily::new(doc.dim, semantics, members)?)
}

/// Load a FrameFile from disk.
pub fn load_frame_file<R: Real>(path: impl AsRef<Path>) -> Result<FrameFamily<R>, FrameFileError> {
    let text = std::fs::read_to_string(path)?;
    parse_frame_file(&text)
}

/// Render a family as a canonical FrameFile document.
pub fn write_frame_file_string<R: Real>(family: &FrameFamily<R>) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"dim\": {},", family.dim());
    let _ = writeln!(out, "  \"k_max\": {},", family.k_max());
    let _ = writeln!(out, "  \"k_min\": {},", family.k_min());
    out.push_str("  \"members\": [\n");
    let count = family.len();
    for (i, m) in family.members().iter().enumerate() {
        out.push_str("    {\"k\": ");
        let _ = write!(out, "{}", m.k);
        out.push_str(", \"subspace_basis\": ");
        write_matrix(&mut out, m.subspace.basis());
        out.push_str(", \"theta\": ");
        write_matrix(&mut out, &m.theta);
        out.push('}');
        if i + 1 < count {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ],\n");
    let _ = writeln!(out, "  \"semantics\": \"{}\"", family.semantics().as_str());
    out.push_str("}\n");
    out
}

/// Save a family to disk, writing atomically via a sibling temp file.
pub fn save_frame_file<R: Real>(
    family: &FrameFamily<R>,
    path: impl AsRef<Path>,
) -> Result<(), FrameFileError> {
    let path = path.as_ref();
    let text = write_frame_file_string(family);
    let tmp = path.with_extension("tmp.framefile");
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn matrix_from_doc<R: Real>(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix<R>, String> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err("matrix must have at least one row and one column".into());
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err("rows have differing lengths".into());
    }
    for row in rows {
        for &[re, im] in row {
            if !re.is_finite() || !im.is_finite() {
                return Err("entries must be finite".into());
            }
        }
    }
    Ok(ComplexMatrix::from_fn(rows.len(), cols, |i, j| {
        let [re, im] = rows[i][j];
        Complex::new(R::from_f64_lossy(re), R::from_f64_lossy(im))
    }))
}

fn write_matrix<R: Real>(out: &mut String, m: &ComplexMatrix<R>) {
    out.push('[');
    for i in 0..m.rows() {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        for j in 0..m.cols() {
            if j > 0 {
                out.push(',');
            }
            let z = m[(i, j)];
            let _ = write!(
                out,
                "[{},{}]",
                format_float(z.re.as_f64()),
                format_float(z.im.as_f64())
            );
        }
        out.push(']');
    }
    out.push(']');
}

/// 17 significant digits; enough to round-trip any f64 exactly.
fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}
