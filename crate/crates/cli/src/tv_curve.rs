//! `(T_q, V_q)` along a feedforward gain sweep, with the single-player point.

use cvqss_core::metrics::closed_form::squeezing_parameter;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{v_m_from_db, PairKind, SchemeKind, Sweep};
use crate::error::{CliError, Result};
use crate::scenario::{evaluate, GainChoice, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct TvCurveConfig {
    /// Squeezing fractions `p = 1 − e^{-2r}`, each in `[0, 1)`.
    pub squeezing: Vec<f64>,
    pub gains: Sweep,
    /// Noise levels in dB; `None` for no modulation.
    pub noise_db: Vec<Option<f64>>,
    pub eta: f64,
    pub secret_means: (f64, f64),
    pub pair: PairKind,
}

impl Default for TvCurveConfig {
    fn default() -> Self {
        Self {
            squeezing: vec![0.0, 0.4, 0.99],
            gains: Sweep::range(0.0, 8.0, 0.5).expect("valid default range"),
            noise_db: vec![None, Some(20.0)],
            eta: 1.0,
            secret_means: (4.0, 2.0),
            pair: PairKind::TwoThree,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TvRow {
    /// `cp` for the collaborating players, `sp` for a single player.
    pub series: &'static str,
    pub r: f64,
    pub squeezing_pct: f64,
    pub vm_db: Option<f64>,
    pub eta: f64,
    pub gain: Option<f64>,
    pub t_q: f64,
    pub v_q: f64,
}

/// Parses `none,20,...` into noise levels.
pub fn parse_noise_list(s: &str) -> Result<Vec<Option<f64>>> {
    s.split(',')
        .map(|t| match t.trim() {
            "none" => Ok(None),
            x => x
                .parse::<f64>()
                .ok()
                .filter(|d| d.is_finite() && *d >= 0.0)
                .map(Some)
                .ok_or_else(|| CliError::usage(format!("bad noise level '{x}'"))),
        })
        .collect()
}

fn validate(cfg: &TvCurveConfig) -> Result<()> {
    if cfg.squeezing.is_empty() || cfg.noise_db.is_empty() {
        return Err(CliError::usage(
            "tv-curve needs at least one squeezing and one noise level",
        ));
    }
    if let Some(p) = cfg.squeezing.iter().find(|p| !(**p >= 0.0 && **p < 1.0)) {
        return Err(CliError::usage(format!(
            "squeezing fraction {p} outside [0, 1)"
        )));
    }
    if let Some(g) = cfg.gains.values().iter().find(|g| **g < 0.0) {
        return Err(CliError::usage(format!("gain {g} is negative")));
    }
    if !(cfg.eta > 0.0 && cfg.eta <= 1.0) {
        return Err(CliError::usage(format!(
            "eta = {} must lie in (0, 1]",
            cfg.eta
        )));
    }
    Ok(())
}

/// For each squeezing and noise level: the single-player row, then one
/// collaborating-player row per gain.
pub fn tv_curve(cfg: &TvCurveConfig) -> Result<Vec<TvRow>> {
    validate(cfg)?;
    let mut jobs = Vec::new();
    for &p in &cfg.squeezing {
        let r = squeezing_parameter(p);
        for &db in &cfg.noise_db {
            let base = Point {
                v_m_db: db,
                secret_means: cfg.secret_means,
                pair: cfg.pair,
                ..Point::new(
                    SchemeKind::SinglePlayer1,
                    r,
                    v_m_from_db(db),
                    cfg.eta,
                    GainChoice::Optimal,
                )
            };
            jobs.push(("sp", base));
            for &g in cfg.gains.values() {
                let cp = Point {
                    scheme: SchemeKind::Feedforward,
                    gain: GainChoice::Fixed(g),
                    ..base
                };
                jobs.push(("cp", cp));
            }
        }
    }
    jobs.par_iter()
        .map(|(series, p)| {
            let rec = evaluate(p)?;
            Ok(TvRow {
                series,
                r: rec.r,
                squeezing_pct: rec.squeezing_pct,
                vm_db: rec.vm_db,
                eta: rec.eta,
                gain: rec.gain,
                t_q: rec.t_q,
                v_q: rec.v_q,
            })
        })
        .collect()
}
