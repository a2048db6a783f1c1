//! Scenario configuration, from flags and/or a JSON file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use cvqss_core::entanglement::EprSource;
use cvqss_core::metrics::closed_form::GainObjective;
use cvqss_core::protocol::AccessPair;
use cvqss_core::Quadrature;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
pub enum SchemeKind {
    #[serde(rename = "mz12")]
    #[value(name = "mz12")]
    Mz12,
    #[serde(rename = "psa2")]
    #[value(name = "psa2")]
    Psa2,
    #[serde(rename = "feedforward")]
    #[value(name = "feedforward")]
    Feedforward,
    #[serde(rename = "single_player_1")]
    #[value(name = "single_player_1")]
    SinglePlayer1,
    #[serde(rename = "single_player_2")]
    #[value(name = "single_player_2")]
    SinglePlayer2,
    #[serde(rename = "single_player_3")]
    #[value(name = "single_player_3")]
    SinglePlayer3,
    #[serde(rename = "single_quadrature")]
    #[value(name = "single_quadrature")]
    SingleQuadrature,
}

impl SchemeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::Mz12 => "mz12",
            SchemeKind::Psa2 => "psa2",
            SchemeKind::Feedforward => "feedforward",
            SchemeKind::SinglePlayer1 => "single_player_1",
            SchemeKind::SinglePlayer2 => "single_player_2",
            SchemeKind::SinglePlayer3 => "single_player_3",
            SchemeKind::SingleQuadrature => "single_quadrature",
        }
    }

    /// Whether the scheme has a gain parameter at all.
    pub fn uses_gain(self) -> bool {
        matches!(
            self,
            SchemeKind::Psa2 | SchemeKind::Feedforward | SchemeKind::SingleQuadrature
        )
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
pub enum PairKind {
    #[serde(rename = "13")]
    #[value(name = "13")]
    OneThree,
    #[default]
    #[serde(rename = "23")]
    #[value(name = "23")]
    TwoThree,
}

impl From<PairKind> for AccessPair {
    fn from(p: PairKind) -> Self {
        match p {
            PairKind::OneThree => AccessPair::OneThree,
            PairKind::TwoThree => AccessPair::TwoThree,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    #[default]
    #[value(name = "type1")]
    Type1,
    #[value(name = "type2")]
    Type2,
}

impl From<SourceKind> for EprSource {
    fn from(s: SourceKind) -> Self {
        match s {
            SourceKind::Type1 => EprSource::TypeI,
            SourceKind::Type2 => EprSource::TypeII,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum QuadKind {
    #[default]
    Plus,
    Minus,
}

impl From<QuadKind> for Quadrature {
    fn from(q: QuadKind) -> Self {
        match q {
            QuadKind::Plus => Quadrature::Plus,
            QuadKind::Minus => Quadrature::Minus,
        }
    }
}

/// Criterion used to resolve `gain = "optimal"` for the feedforward scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    #[value(name = "max_tq")]
    MaxTq,
    #[default]
    #[value(name = "min_vq")]
    MinVq,
}

impl From<ObjectiveKind> for GainObjective {
    fn from(o: ObjectiveKind) -> Self {
        match o {
            ObjectiveKind::MaxTq => GainObjective::MaxTransfer,
            ObjectiveKind::MinVq => GainObjective::MinConditionalVariance,
        }
    }
}

/// A nonempty, strictly monotone list of values.
///
/// Parsed from `x`, `x1,x2,...` or `start:stop:step`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "SweepRepr")]
pub struct Sweep(Vec<f64>);

#[derive(Deserialize)]
#[serde(untagged)]
enum SweepRepr {
    Number(f64),
    List(Vec<f64>),
    Text(String),
}

impl TryFrom<SweepRepr> for Sweep {
    type Error = CliError;

    fn try_from(repr: SweepRepr) -> Result<Self> {
        match repr {
            SweepRepr::Number(x) => Sweep::new(vec![x]),
            SweepRepr::List(v) => Sweep::new(v),
            SweepRepr::Text(s) => s.parse(),
        }
    }
}

impl Sweep {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(CliError::usage("sweep is empty"));
        }
        if let Some(x) = values.iter().find(|x| !x.is_finite()) {
            return Err(CliError::usage(format!("sweep value {x} is not finite")));
        }
        let increasing = values.windows(2).all(|w| w[0] < w[1]);
        let decreasing = values.windows(2).all(|w| w[0] > w[1]);
        if !(increasing || decreasing) {
            return Err(CliError::usage("sweep values must be strictly monotone"));
        }
        Ok(Sweep(values))
    }

    pub fn single(x: f64) -> Self {
        Sweep(vec![x])
    }

    /// `start, start + step, ...` up to and including `stop`.
    pub fn range(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite() && start.is_finite() && stop.is_finite())
            || stop < start
        {
            return Err(CliError::usage(format!(
                "bad range {start}:{stop}:{step}; need start <= stop and step > 0"
            )));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if n > 1_000_000 {
            return Err(CliError::usage("range has more than 10^6 points"));
        }
        Sweep::new((0..n).map(|i| start + i as f64 * step).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

fn parse_number(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CliError::usage(format!("'{s}' is not a number")))
}

impl FromStr for Sweep {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [one] => Sweep::new(one.split(',').map(parse_number).collect::<Result<_>>()?),
            [a, b, c] => Sweep::range(parse_number(a)?, parse_number(b)?, parse_number(c)?),
            _ => Err(CliError::usage(format!(
                "'{s}' is neither a list nor start:stop:step"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "GainRepr")]
pub enum GainSpec {
    Optimal,
    Values(Sweep),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GainRepr {
    Number(f64),
    List(Vec<f64>),
    Text(String),
}

impl TryFrom<GainRepr> for GainSpec {
    type Error = CliError;

    fn try_from(repr: GainRepr) -> Result<Self> {
        match repr {
            GainRepr::Number(x) => Ok(GainSpec::Values(Sweep::new(vec![x])?)),
            GainRepr::List(v) => Ok(GainSpec::Values(Sweep::new(v)?)),
            GainRepr::Text(s) => s.parse(),
        }
    }
}

impl FromStr for GainSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "optimal" {
            Ok(GainSpec::Optimal)
        } else {
            Ok(GainSpec::Values(s.parse()?))
        }
    }
}

/// One run of the `run` subcommand. Unset fields take the defaults below.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scheme: SchemeKind,
    pub r: Sweep,
    /// Modulation noise in dB above shot noise; `None` means no modulation.
    pub v_m_db: Option<f64>,
    pub eta: f64,
    pub gain: GainSpec,
    pub secret_means: (f64, f64),
    pub pair: PairKind,
    pub source: SourceKind,
    pub quadrature: QuadKind,
    pub objective: ObjectiveKind,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            scheme: SchemeKind::Feedforward,
            r: Sweep::single(0.0),
            v_m_db: None,
            eta: 1.0,
            gain: GainSpec::Optimal,
            secret_means: (4.0, 2.0),
            pair: PairKind::TwoThree,
            source: SourceKind::Type1,
            quadrature: QuadKind::Plus,
            objective: ObjectiveKind::MinVq,
            output: None,
            format: Format::Csv,
        }
    }
}

/// `V_m = 10^{dB/10}`, or `0` without modulation.
pub fn v_m_from_db(db: Option<f64>) -> f64 {
    db.map_or(0.0, |d| 10f64.powf(d / 10.0))
}

impl ScenarioConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| CliError::usage(format!("config: {e}")))?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(r) = self.r.values().iter().find(|r| **r < 0.0) {
            return Err(CliError::usage(format!("r = {r} is negative")));
        }
        if let Some(db) = self.v_m_db {
            if !(db.is_finite() && db >= 0.0) {
                return Err(CliError::usage(format!("v_m_db = {db} must be >= 0")));
            }
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(CliError::usage(format!(
                "eta = {} must lie in (0, 1]",
                self.eta
            )));
        }
        if let GainSpec::Values(g) = &self.gain {
            let floor_ok = |x: f64| match self.scheme {
                SchemeKind::Psa2 => x > 0.0,
                SchemeKind::Feedforward => x >= 0.0,
                _ => true,
            };
            if let Some(x) = g.values().iter().find(|x| !floor_ok(**x)) {
                return Err(CliError::usage(format!(
                    "gain {x} out of range for {}",
                    self.scheme
                )));
            }
        }
        let (mp, mm) = self.secret_means;
        if !(mp.is_finite() && mm.is_finite()) || mp == 0.0 || mm == 0.0 {
            return Err(CliError::usage(
                "secret means must be finite and nonzero so both transfer coefficients exist",
            ));
        }
        Ok(())
    }
}
