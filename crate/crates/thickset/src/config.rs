//! Configuration documents for the command-line front end.
//!
//! Configs are JSON with a strict schema: unknown keys are rejected
//! everywhere so a typo fails loudly instead of silently using a default.
//! Coordinates accept plain numbers or `"p/q"` strings; the latter keep full
//! precision on the exact-arithmetic path and are rounded once for the
//! floating-point pipeline.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::carpets::{CarpetError, CarpetSpec};
use crate::gaplemma::{
    exact_system_from_float, parse_rat, rat_from_f64, ExactBox, ExactRegion, ExactSystem,
    GapLemmaError, Rat,
};
use crate::geometry::{AxisBox, BoxRegion, DiagonalContraction, GapSystem, GeometryError};
use num::ToPrimitive;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("config is not valid JSON for the schema: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("config error: {0}")]
    Invalid(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Carpet(#[from] CarpetError),
    #[error(transparent)]
    Exact(#[from] GapLemmaError),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

/// A coordinate: either a double or an exact `"p/q"` string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Number(f64),
    Ratio(String),
}

impl Coord {
    pub fn to_rat(&self) -> Result<Rat, ConfigError> {
        match self {
            Coord::Number(v) => Ok(rat_from_f64(*v)?),
            Coord::Ratio(s) => Ok(parse_rat(s)?),
        }
    }

    pub fn to_f64(&self) -> Result<f64, ConfigError> {
        match self {
            Coord::Number(v) => Ok(*v),
            Coord::Ratio(s) => parse_rat(s)?
                .to_f64()
                .ok_or_else(|| invalid(format!("{s:?} overflows double precision"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarpetBlock {
    pub r: Vec<u32>,
    pub t: f64,
    #[serde(default = "default_depth")]
    pub depth: u32,
}

fn default_depth() -> u32 {
    1
}

impl CarpetBlock {
    pub fn spec(&self) -> Result<CarpetSpec, ConfigError> {
        Ok(CarpetSpec::new(self.r.clone(), self.t, self.depth)?)
    }
}

/// The contraction matrix: explicit diagonal entries or a carpet whose
/// natural contraction `r_j^(-t)` is used.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixConfig {
    Betas(Vec<f64>),
    Carpet(CarpetBlock),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    pub lo: Vec<Coord>,
    pub hi: Vec<Coord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSystemConfig {
    pub hull: Vec<BoxSpec>,
    /// Each entry is one gap: a connected union of open boxes.
    #[serde(default)]
    pub gaps: Vec<Vec<BoxSpec>>,
}

/// A named compact set: explicit hull-and-gap boxes or a carpet.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetConfig {
    Boxes(BoxSystemConfig),
    Carpet(CarpetBlock),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyConfig {
    Random,
    GapSeeker,
    Constant,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameConfig {
    /// Deletion weight; defaults to the thickness-matched weight of the set.
    pub alpha: Option<f64>,
    #[serde(default)]
    pub c: f64,
    #[serde(default = "default_rho")]
    pub rho1: f64,
    #[serde(default = "default_rho")]
    pub rho2: f64,
    pub horizon: u32,
    /// One playout per seed; required, so runs never depend on wall clocks.
    pub seeds: Vec<u64>,
    pub policy: PolicyConfig,
    /// Opening center for the constant policy, target for the gap seeker.
    pub point: Option<Vec<f64>>,
    /// Which named set to play on; may be omitted when only one is defined.
    pub set: Option<String>,
}

fn default_rho() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyConfig {
    /// Explicit certificate to check instead of searching.
    pub t: Option<f64>,
    pub c: Option<f64>,
    pub delta: Option<f64>,
    pub m: Option<u64>,
    /// Search controls.
    pub points: Option<usize>,
    pub rounds: Option<usize>,
    /// Component weights for intersection certificates.
    pub alphas: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapLemmaConfig {
    pub first: String,
    pub second: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleConfig {
    pub betas: Vec<f64>,
    pub r: Option<f64>,
    pub s: Option<f64>,
    pub t: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Text,
    Json,
    Both,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Option<ReportFormat>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    /// Only the square metric is supported; naming any other is an error.
    pub metric: Option<String>,
    pub matrix: Option<MatrixConfig>,
    #[serde(default)]
    pub sets: BTreeMap<String, SetConfig>,
    pub game: Option<GameConfig>,
    pub certify: Option<CertifyConfig>,
    pub gaplemma: Option<GapLemmaConfig>,
    pub counterexample: Option<CounterexampleConfig>,
    pub output: Option<OutputConfig>,
}

impl ConfigDocument {
    pub fn from_str(text: &str) -> Result<Self, ConfigError> {
        let doc: ConfigDocument = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::from_str(&std::fs::read_to_string(path)?)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        match self.metric.as_deref() {
            None | Some("square") => Ok(()),
            Some("euclidean") => Err(invalid(
                "metric \"euclidean\" is not supported: all computations use the square \
                 (sup-norm) metric, whose balls are axis-aligned boxes",
            )),
            Some(other) => Err(invalid(format!(
                "unknown metric {other:?}; the only supported value is \"square\""
            ))),
        }
    }

    /// The contraction matrix, from explicit entries or the carpet's
    /// `r_j^(-t)`.
    pub fn contraction(&self) -> Result<DiagonalContraction, ConfigError> {
        match &self.matrix {
            None => Err(invalid("this command needs a \"matrix\" block")),
            Some(MatrixConfig::Betas(betas)) => Ok(DiagonalContraction::new(betas.clone())?),
            Some(MatrixConfig::Carpet(block)) => Ok(block.spec()?.contraction()?),
        }
    }

    pub fn carpet(&self) -> Result<&CarpetBlock, ConfigError> {
        match &self.matrix {
            Some(MatrixConfig::Carpet(block)) => Ok(block),
            _ => Err(invalid("this command needs \"matrix\": {\"carpet\": ...}")),
        }
    }

    /// Picks a named set, or the only set when `name` is `None`.
    pub fn set(&self, name: Option<&str>) -> Result<(&str, &SetConfig), ConfigError> {
        match name {
            Some(n) => self
                .sets
                .get_key_value(n)
                .map(|(k, v)| (k.as_str(), v))
                .ok_or_else(|| invalid(format!("no set named {n:?} in the config"))),
            None => {
                if self.sets.len() == 1 {
                    let (k, v) = self.sets.iter().next().expect("len checked");
                    Ok((k.as_str(), v))
                } else {
                    Err(invalid(format!(
                        "config defines {} sets; name one explicitly",
                        self.sets.len()
                    )))
                }
            }
        }
    }
}

fn float_box(spec: &BoxSpec) -> Result<AxisBox, ConfigError> {
    let lo = spec.lo.iter().map(Coord::to_f64).collect::<Result<Vec<_>, _>>()?;
    let hi = spec.hi.iter().map(Coord::to_f64).collect::<Result<Vec<_>, _>>()?;
    Ok(AxisBox::new(lo, hi)?)
}

fn exact_box(spec: &BoxSpec, open: bool) -> Result<ExactBox, ConfigError> {
    let lo = spec.lo.iter().map(Coord::to_rat).collect::<Result<Vec<_>, _>>()?;
    let hi = spec.hi.iter().map(Coord::to_rat).collect::<Result<Vec<_>, _>>()?;
    Ok(if open { ExactBox::open(lo, hi)? } else { ExactBox::closed(lo, hi)? })
}

/// Builds the floating-point gap system a set description denotes.
pub fn resolve_set(set: &SetConfig, max_cells: u128) -> Result<GapSystem, ConfigError> {
    match set {
        SetConfig::Carpet(block) => Ok(block.spec()?.generate_with_limit(max_cells)?),
        SetConfig::Boxes(boxes) => {
            let hull = BoxRegion::closed(
                boxes.hull.iter().map(float_box).collect::<Result<Vec<_>, _>>()?,
            );
            let gaps = boxes
                .gaps
                .iter()
                .map(|g| {
                    Ok(BoxRegion::open(
                        g.iter().map(float_box).collect::<Result<Vec<_>, _>>()?,
                    ))
                })
                .collect::<Result<Vec<_>, ConfigError>>()?;
            Ok(GapSystem::new(hull, gaps)?)
        }
    }
}

/// Builds the exact-rational system for the gap-lemma pathway. `"p/q"`
/// coordinates stay exact; plain numbers embed their double value.
pub fn resolve_set_exact(set: &SetConfig, max_cells: u128) -> Result<ExactSystem, ConfigError> {
    match set {
        SetConfig::Carpet(block) => {
            Ok(exact_system_from_float(&block.spec()?.generate_with_limit(max_cells)?)?)
        }
        SetConfig::Boxes(boxes) => {
            let hull = ExactRegion::new(
                boxes
                    .hull
                    .iter()
                    .map(|b| exact_box(b, false))
                    .collect::<Result<Vec<_>, _>>()?,
            );
            let gaps = boxes
                .gaps
                .iter()
                .map(|g| {
                    Ok(ExactRegion::new(
                        g.iter().map(|b| exact_box(b, true)).collect::<Result<Vec<_>, _>>()?,
                    ))
                })
                .collect::<Result<Vec<_>, ConfigError>>()?;
            Ok(ExactSystem::new(hull, gaps)?)
        }
    }
}
