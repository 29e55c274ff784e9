//! JSON problem files.
//!
//! All numbers are JSON strings so that decimals convert to rationals digit
//! for digit (`"0.94"` is exactly `47/50`).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::abstraction::{validate_regions, ObservedRegion};
use crate::error::{check_dim, Error, InputCode, Result};
use crate::geometry::Cell;
use crate::logic::{parse_ltl, Formula, PI_D_ATOM};
use crate::lyapunov::{LevelSequence, LinearSystem, PolyhedralLF};
use crate::matrix::Matrix;
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RegionSpec {
    pub name: String,
    #[serde(rename = "H")]
    pub h_matrix: Vec<Vec<String>>,
    pub h: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub sample_count: usize,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default = "default_svg")]
    pub svg: bool,
    #[serde(default)]
    pub seed: u64,
}

fn default_svg() -> bool {
    true
}

impl Default for Options {
    fn default() -> Self {
        Options {
            sample_count: 0,
            out_dir: None,
            svg: default_svg(),
            seed: 0,
        }
    }
}

/// The file as written.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    #[serde(rename = "L")]
    pub l: Vec<Vec<String>>,
    pub rho: String,
    #[serde(rename = "gamma_D")]
    pub gamma_d: String,
    #[serde(rename = "gamma_X")]
    pub gamma_x: String,
    #[serde(default)]
    pub regions: Vec<RegionSpec>,
    pub formula: String,
    #[serde(default)]
    pub options: Options,
}

/// A validated problem with exact data.
#[derive(Debug, Clone)]
pub struct Problem {
    pub system: LinearSystem,
    pub lf: PolyhedralLF,
    pub gamma_d: Rational,
    pub gamma_x: Rational,
    pub levels: LevelSequence,
    pub regions: Vec<ObservedRegion>,
    pub formula_text: String,
    pub formula: Formula,
    pub options: Options,
}

impl Problem {
    pub fn dim(&self) -> usize {
        self.system.dim()
    }

    /// Same problem, different formula (atoms are re-checked).
    pub fn with_formula(&self, text: &str) -> Result<Problem> {
        let formula = parse_formula(text, &self.regions)?;
        Ok(Problem {
            formula_text: text.to_string(),
            formula,
            ..self.clone()
        })
    }
}

fn matrix(rows: &[Vec<String>]) -> Result<Matrix> {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|v| parse_rational(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?,
    )
}

fn parse_formula(text: &str, regions: &[ObservedRegion]) -> Result<Formula> {
    let formula = parse_ltl(text)?;
    formula.check_atoms(regions.iter().map(ObservedRegion::label).chain([PI_D_ATOM]))?;
    Ok(formula)
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<Problem> {
        let a = matrix(&self.a)?;
        if a.rows() == 0 || !a.is_square() {
            return Err(Error::input(
                InputCode::Dimension,
                "A must be a non-empty square matrix",
            ));
        }
        let n = a.rows();
        let system = LinearSystem::new(a)?;
        let l = matrix(&self.l)?;
        if l.rows() == 0 {
            return Err(Error::input(InputCode::Dimension, "L has no rows"));
        }
        check_dim(n, l.cols())?;
        let rho = parse_rational(&self.rho)?;
        let lf = PolyhedralLF::new(l, rho.clone())?;
        let gamma_d = parse_rational(&self.gamma_d)?;
        let gamma_x = parse_rational(&self.gamma_x)?;
        let levels = LevelSequence::new(&gamma_d, &gamma_x, &rho)?;

        let mut regions = Vec::with_capacity(self.regions.len());
        for r in &self.regions {
            let h = matrix(&r.h_matrix)?;
            if h.rows() == 0 || h.rows() != r.h.len() {
                return Err(Error::input(
                    InputCode::Dimension,
                    format!("region {}: H and h have different row counts", r.name),
                ));
            }
            check_dim(n, h.cols())?;
            let rhs = r.h.iter().map(|v| parse_rational(v)).collect::<Result<Vec<_>>>()?;
            let cell = Cell::from_halfspaces(&h, &rhs).map_err(|e| match e {
                Error::Precondition(msg) => Error::input(InputCode::Malformed, format!("region {}: {msg}", r.name)),
                other => other,
            })?;
            regions.push(ObservedRegion::new(r.name.clone(), cell)?);
        }
        validate_regions(&regions, &lf.sublevel_cell(&gamma_x), &lf.sublevel_cell(&gamma_d))?;
        let formula = parse_formula(&self.formula, &regions)?;
        Ok(Problem {
            system,
            lf,
            gamma_d,
            gamma_x,
            levels,
            regions,
            formula_text: self.formula.clone(),
            formula,
            options: self.options.clone(),
        })
    }
}

pub fn parse_problem(text: &str) -> Result<Problem> {
    let spec: ProblemSpec =
        serde_json::from_str(text).map_err(|e| Error::input(InputCode::Malformed, format!("problem file: {e}")))?;
    spec.validate()
}

pub fn load_problem(path: impl AsRef<Path>) -> Result<Problem> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(InputCode::Malformed, format!("cannot read {}: {e}", path.display())))?;
    parse_problem(&text)
}
