//! Structured-file schemas shared by the CLI and tests.
//!
//! Complex scalar = `[re, im]`; matrix = row-major nested array of complex
//! scalars; algebra = `{"blocks":[{"dim":n,"mult":m},…]}`; element =
//! `{"algebra":…,"blocks":[matrix,…]}`; state adds densities and a trace
//! flavor tag; Orlicz/boolean/measure files carry their parameters.

use crate::algebra::{AlgebraElement, MatrixAlgebra};
use crate::boolean::{FiniteBooleanAlgebra, MeasureVector};
use crate::error::Error;
use crate::la::{c, CMat};
use crate::orlicz::{OrliczFunction, Tail};
use crate::states::{StateDensity, TraceFlavor};
use crate::tol::Tol;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub type MatrixFile = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockFile {
    pub dim: usize,
    #[serde(default = "one")]
    pub mult: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub blocks: Vec<BlockFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementFile {
    pub algebra: AlgebraFile,
    pub blocks: Vec<MatrixFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub algebra: AlgebraFile,
    pub densities: Vec<MatrixFile>,
    /// `"can"` or `"rep"`.
    pub trace: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "lowercase")]
pub enum OrliczFile {
    Power { p: f64, #[serde(default = "one_f")] scale: f64 },
    Coshm1 { #[serde(default = "one_f")] scale: f64 },
    Expm1 { #[serde(default = "one_f")] scale: f64 },
    Tabulated { points: Vec<[f64; 2]>, tail: TailFile },
}

fn one_f() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailFile {
    Slope(f64),
    Infinite,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BooleanFile {
    pub atoms: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureFile {
    pub weights: Vec<f64>,
}

/// Partition of the identity for pinching: a shared algebra and one block
/// list per projection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionFile {
    pub algebra: AlgebraFile,
    pub projections: Vec<Vec<MatrixFile>>,
}

/// Dense represented operators (commutant generators).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatricesFile {
    pub matrices: Vec<MatrixFile>,
}

pub fn matrix_to_file(m: &CMat) -> MatrixFile {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_file(f: &MatrixFile) -> Result<CMat> {
    let rows = f.len();
    if rows == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let cols = f[0].len();
    if f.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidInput("ragged matrix rows".into()));
    }
    Ok(CMat::from_fn(rows, cols, |i, j| c(f[i][j][0], f[i][j][1])))
}

impl AlgebraFile {
    pub fn to_core(&self) -> Result<MatrixAlgebra> {
        MatrixAlgebra::new(self.blocks.iter().map(|b| (b.dim, b.mult)).collect())
    }

    pub fn from_core(alg: &MatrixAlgebra) -> Self {
        AlgebraFile {
            blocks: alg
                .blocks()
                .iter()
                .map(|b| BlockFile { dim: b.dim, mult: b.mult })
                .collect(),
        }
    }
}

impl ElementFile {
    pub fn to_core(&self) -> Result<AlgebraElement> {
        let alg = self.algebra.to_core()?;
        let blocks = self
            .blocks
            .iter()
            .map(matrix_from_file)
            .collect::<Result<Vec<_>>>()?;
        AlgebraElement::new(alg, blocks)
    }

    pub fn from_core(el: &AlgebraElement) -> Self {
        ElementFile {
            algebra: AlgebraFile::from_core(el.algebra()),
            blocks: el.blocks().iter().map(matrix_to_file).collect(),
        }
    }
}

impl StateFile {
    pub fn to_core(&self, tol: &Tol) -> Result<StateDensity> {
        let alg = self.algebra.to_core()?;
        let blocks = self
            .densities
            .iter()
            .map(matrix_from_file)
            .collect::<Result<Vec<_>>>()?;
        let el = AlgebraElement::new(alg, blocks)?;
        let flavor = trace_flavor_from_str(&self.trace)?;
        StateDensity::from_element(&el, flavor, tol)
    }

    pub fn from_core(state: &StateDensity) -> Self {
        StateFile {
            algebra: AlgebraFile::from_core(state.algebra()),
            densities: state.density().blocks().iter().map(matrix_to_file).collect(),
            trace: match state.flavor() {
                TraceFlavor::Can => "can".into(),
                TraceFlavor::Rep => "rep".into(),
            },
        }
    }
}

pub fn trace_flavor_from_str(s: &str) -> Result<TraceFlavor> {
    match s {
        "can" => Ok(TraceFlavor::Can),
        "rep" => Ok(TraceFlavor::Rep),
        other => Err(Error::InvalidInput(format!("unknown trace flavor `{other}`"))),
    }
}

impl OrliczFile {
    pub fn to_core(&self) -> Result<OrliczFunction> {
        let f = match self {
            OrliczFile::Power { p, scale } => OrliczFunction::Power { p: *p, scale: *scale },
            OrliczFile::Coshm1 { scale } => OrliczFunction::CoshMinusOne { scale: *scale },
            OrliczFile::Expm1 { scale } => OrliczFunction::ExpMinusOne { scale: *scale },
            OrliczFile::Tabulated { points, tail } => OrliczFunction::Tabulated {
                points: points.iter().map(|p| (p[0], p[1])).collect(),
                tail: match tail {
                    TailFile::Slope(s) => Tail::Slope(*s),
                    TailFile::Infinite => Tail::Infinite,
                },
            },
        };
        f.validate()?;
        Ok(f)
    }
}

impl BooleanFile {
    pub fn to_core(&self) -> Result<FiniteBooleanAlgebra> {
        FiniteBooleanAlgebra::new(self.atoms)
    }
}

impl MeasureFile {
    pub fn to_core(&self) -> Result<MeasureVector> {
        MeasureVector::new(self.weights.clone())
    }
}

pub fn load_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text)?;
    Ok(())
}
