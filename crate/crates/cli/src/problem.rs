//! Problem files: JSON descriptions of a cone, its base spectrum and a
//! boundary condition (𝒜, ℬ).

use std::path::Path;

use conedet_core::extension::validate_lagrangian;
use conedet_core::{BaseSpectrum, CMatrix, Complex64, Lagrangian, RegularPart, ValidationReport};
use serde::{Deserialize, Serialize};

use crate::exit::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CNum {
    pub re: f64,
    pub im: f64,
}

impl From<CNum> for Complex64 {
    fn from(c: CNum) -> Self {
        Complex64::new(c.re, c.im)
    }
}

impl From<Complex64> for CNum {
    fn from(c: Complex64) -> Self {
        CNum { re: c.re, im: c.im }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSpec {
    #[serde(rename = "N")]
    pub n: f64,
    #[serde(rename = "M")]
    pub m: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    #[serde(rename = "K")]
    pub k: usize,
    pub mu_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(rename = "R")]
    pub r: f64,
    pub q0: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nus: Option<Vec<f64>>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<CNum>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<CNum>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub det_tilde: Option<CNum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_residue: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<TruncationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverSpec>,
}

/// A parsed problem with its numeric objects built.
#[derive(Debug, Clone)]
pub struct Problem {
    pub file: ProblemFile,
    pub spectrum: BaseSpectrum,
    pub a: CMatrix,
    pub b: CMatrix,
    /// Raw bytes of the input, hashed into the report digest.
    pub raw: Vec<u8>,
}

fn matrix(name: &str, rows: &[Vec<CNum>], q: usize) -> Result<CMatrix, CliError> {
    if rows.len() != q || rows.iter().any(|r| r.len() != q) {
        return Err(CliError::input(format!("{name} must be a {q}x{q} array of {{re, im}} objects")));
    }
    let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| r.iter().map(|&c| c.into()).collect()).collect();
    Ok(CMatrix::from_rows(&rows).expect("checked rectangular"))
}

impl Problem {
    pub fn parse(raw: Vec<u8>) -> Result<Self, CliError> {
        let file: ProblemFile =
            serde_json::from_slice(&raw).map_err(|e| CliError::input(format!("cannot parse problem file: {e}")))?;
        let spectrum = match (&file.lambdas, &file.nus) {
            (Some(_), Some(_)) => return Err(CliError::input("give either lambdas or nus, not both")),
            (Some(l), None) => BaseSpectrum::from_lambdas(file.r, file.q0, l),
            (None, Some(n)) => BaseSpectrum::new(file.r, file.q0, n.clone()),
            (None, None) => BaseSpectrum::new(file.r, file.q0, Vec::new()),
        }
        .map_err(CliError::from)?;
        let q = spectrum.q();
        let a = matrix("A", &file.a, q)?;
        let b = matrix("B", &file.b, q)?;
        Ok(Self { file, spectrum, a, b, raw })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let raw = std::fs::read(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(raw)
    }

    pub fn validation(&self) -> Result<ValidationReport, CliError> {
        validate_lagrangian(&self.a, &self.b, self.file.q0).map_err(CliError::from)
    }

    /// The boundary condition, rejected with exit status 1 unless it is Lagrangian.
    pub fn lagrangian(&self) -> Result<Lagrangian, CliError> {
        Lagrangian::new_validated(self.a.clone(), self.b.clone(), self.file.q0).map_err(CliError::from)
    }

    pub fn regular_part(&self) -> Option<RegularPart<f64>> {
        self.file.det_tilde.map(|d| RegularPart { det_tilde: d.into(), c_residue: self.file.c_residue.unwrap_or(0.0) })
    }
}
