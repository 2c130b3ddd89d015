use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::eigensolve::EigDiagnostics;
use crate::error::Error;
use crate::linalg::CMat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MethodTag {
    #[serde(rename = "fgh")]
    Fgh,
    #[serde(rename = "pvn")]
    Pvn,
    #[serde(rename = "bvn")]
    Bvn,
    #[serde(rename = "vn-analytic")]
    VnAnalytic,
}

impl MethodTag {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodTag::Fgh => "fgh",
            MethodTag::Pvn => "pvn",
            MethodTag::Bvn => "bvn",
            MethodTag::VnAnalytic => "vn-analytic",
        }
    }
}

impl fmt::Display for MethodTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MethodTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fgh" => Ok(MethodTag::Fgh),
            "pvn" => Ok(MethodTag::Pvn),
            "bvn" => Ok(MethodTag::Bvn),
            "vn-analytic" | "vn_analytic" => Ok(MethodTag::VnAnalytic),
            other => Err(Error::invalid(
                "method",
                format!("unknown method `{other}` (expected fgh, pvn, bvn or vn-analytic)"),
            )),
        }
    }
}

/// Eigenvalues of one solve together with its numerical diagnostics.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns match `eigenvalues`; grid values for FGH, basis coefficients otherwise.
    pub eigenvectors: CMat,
    pub basis_size: usize,
    pub residual_max: f64,
    pub overlap_condition: f64,
    pub method: MethodTag,
    pub diagnostics: EigDiagnostics,
}

impl SpectrumResult {
    pub fn lowest(&self, count: usize) -> &[f64] {
        &self.eigenvalues[..count.min(self.eigenvalues.len())]
    }
}
