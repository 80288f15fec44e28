//! JSON shapes for channel specifications, verdicts and optimization reports.
//!
//! Complex entries are `[re, im]` pairs; matrices are arrays of rows.

use serde::{Deserialize, Serialize};

use crate::capacity::OptimizationReport;
use crate::degrade::{Tag, Verdict};
use crate::error::{Error, Result};
use crate::matcore::{c64, CMatrix, GramMatrix};

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &CMatrix) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> Result<CMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != m) {
        return Err(Error::DimensionMismatch { expected: m, found: bad.len() });
    }
    Ok(CMatrix::from_fn(n, m, |i, j| c64(rows[i][j][0], rows[i][j][1])))
}

/// `{"B": [[...]], "C": [[...]]}`; unknown fields are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    #[serde(rename = "B")]
    pub b: JsonMatrix,
    #[serde(rename = "C")]
    pub c: JsonMatrix,
}

impl ChannelSpec {
    pub fn from_grams(b: &GramMatrix, c: &GramMatrix) -> Self {
        ChannelSpec { b: matrix_to_json(b.matrix()), c: matrix_to_json(c.matrix()) }
    }

    /// Validated Gram pair; PSD is not checked here.
    pub fn grams(&self) -> Result<(GramMatrix, GramMatrix)> {
        let b = GramMatrix::new(matrix_from_json(&self.b)?)?;
        let c = GramMatrix::new(matrix_from_json(&self.c)?)?;
        if b.dim() != c.dim() {
            return Err(Error::DimensionMismatch { expected: b.dim(), found: c.dim() });
        }
        Ok((b, c))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerdictJson {
    pub tag: Tag,
    pub min_eig_d: Option<f64>,
    pub min_eig_dprime: Option<f64>,
    pub boundary: bool,
}

impl From<&Verdict> for VerdictJson {
    fn from(v: &Verdict) -> Self {
        VerdictJson { tag: v.tag, min_eig_d: v.min_eig_d, min_eig_dprime: v.min_eig_dprime, boundary: v.boundary }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub value_bits: f64,
    pub rho: JsonMatrix,
    pub converged: bool,
    pub starts: usize,
}

impl From<&OptimizationReport> for ReportJson {
    fn from(r: &OptimizationReport) -> Self {
        ReportJson { value_bits: r.value, rho: matrix_to_json(r.argopt.matrix()), converged: r.converged, starts: r.starts }
    }
}

/// Output of the `family` command: the Gram pair plus its verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub family: String,
    #[serde(flatten)]
    pub channel: ChannelSpec,
    pub verdict: VerdictJson,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degrade::classify;

    #[test]
    fn channel_round_trip() {
        let b = GramMatrix::new(CMatrix::from_fn(2, 2, |i, j| if i == j { c64(1.0, 0.0) } else if i < j { c64(0.3, 0.4) } else { c64(0.3, -0.4) })).unwrap();
        let c = GramMatrix::identity(2);
        let text = serde_json::to_string(&ChannelSpec::from_grams(&b, &c)).unwrap();
        assert!(text.contains("\"B\":[[[1.0,0.0],[0.3,0.4]]"));
        let spec: ChannelSpec = serde_json::from_str(&text).unwrap();
        let (b2, c2) = spec.grams().unwrap();
        assert_eq!(b2, b);
        assert_eq!(c2, c);
    }

    #[test]
    fn ragged_rows_rejected() {
        let spec: ChannelSpec = serde_json::from_str(r#"{"B": [[[1,0],[0,0]],[[0,0]]], "C": [[[1,0]]]}"#).unwrap();
        assert!(spec.grams().is_err());
    }

    #[test]
    fn verdict_field_names() {
        let g = GramMatrix::identity(2);
        let v = VerdictJson::from(&classify(&g, &g, 1e-9));
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.starts_with("{\"tag\":\"Both\",\"minEigD\":"));
        assert!(text.contains("\"minEigDprime\":") && text.contains("\"boundary\":"));
    }
}
