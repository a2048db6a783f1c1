//! Simulation versus closed forms over a parameter grid, and versus a golden
//! fixture of independently computed tuples.

use std::fmt;

use cvqss_core::metrics::closed_form::{closed_form, Scheme};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SchemeKind;
use crate::error::{CliError, Result};
use crate::scenario::{evaluate, GainChoice, Point};

/// The golden tuples shipped with the crate.
pub const DEFAULT_FIXTURE: &str = include_str!("../fixtures/golden.json");

/// Comparisons pass when `|actual − expected| ≤ tol · max(1, |expected|)`.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenTuple {
    pub scheme: SchemeKind,
    pub r: f64,
    /// Linear modulation power.
    pub v_m: f64,
    pub eta: f64,
    pub gain: f64,
    pub t_q: f64,
    pub v_q: f64,
    pub fidelity: f64,
}

pub fn parse_fixture(text: &str) -> Result<Vec<GoldenTuple>> {
    let tuples: Vec<GoldenTuple> =
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("fixture: {e}")))?;
    if tuples.is_empty() {
        return Err(CliError::usage("fixture holds no tuples"));
    }
    Ok(tuples)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tuple {
    pub scheme: SchemeKind,
    pub r: f64,
    pub v_m: f64,
    pub eta: f64,
    pub gain: Option<f64>,
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "scheme={} r={} v_m={} eta={}",
            self.scheme, self.r, self.v_m, self.eta
        )?;
        if let Some(g) = self.gain {
            write!(f, " gain={g}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub family: &'static str,
    pub tuple: Tuple,
    pub quantity: &'static str,
    pub expected: f64,
    pub actual: f64,
    pub deviation: f64,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: {} expected {} got {} (deviation {:e})",
            self.family, self.tuple, self.quantity, self.expected, self.actual, self.deviation
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilySummary {
    pub family: &'static str,
    pub points: usize,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub pass: bool,
    pub tolerance: f64,
    pub families: Vec<FamilySummary>,
    pub failures: Vec<Failure>,
}

/// The oracle-equivalence grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub r: Vec<f64>,
    pub v_m: Vec<f64>,
    pub eta: Vec<f64>,
    pub gain: Vec<f64>,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            r: (0..=8).map(|i| 0.5 * i as f64).collect(),
            v_m: vec![0.0, 1.0, 100.0],
            eta: vec![1.0, 0.9],
            gain: (0..=16).map(|i| 0.5 * i as f64).collect(),
        }
    }
}

struct Check {
    family: &'static str,
    point: Point,
    expected: Vec<(&'static str, f64)>,
}

fn deviation(actual: f64, expected: f64) -> f64 {
    if actual == expected {
        0.0
    } else {
        (actual - expected).abs() / expected.abs().max(1.0)
    }
}

fn tuple_of(p: &Point) -> Tuple {
    Tuple {
        scheme: p.scheme,
        r: p.r,
        v_m: p.v_m,
        eta: p.eta,
        gain: match p.gain {
            GainChoice::Fixed(g) if p.scheme.uses_gain() => Some(g),
            _ => None,
        },
    }
}

fn grid_checks(grid: &Grid) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for &r in &grid.r {
        for &v_m in &grid.v_m {
            for &eta in &grid.eta {
                for &g in &grid.gain {
                    let tv = closed_form(Scheme::Feedforward, r, v_m, eta, g)?;
                    checks.push(Check {
                        family: "feedforward",
                        point: Point::new(
                            SchemeKind::Feedforward,
                            r,
                            v_m,
                            eta,
                            GainChoice::Fixed(g),
                        ),
                        expected: vec![("t_q", tv.t_q), ("v_q", tv.v_q)],
                    });
                }
            }
            let sp = closed_form(Scheme::SinglePlayer, r, v_m, 1.0, 0.0)?;
            for scheme in [SchemeKind::SinglePlayer1, SchemeKind::SinglePlayer2] {
                checks.push(Check {
                    family: "single_player",
                    point: Point::new(scheme, r, v_m, 1.0, GainChoice::Optimal),
                    expected: vec![("t_q", sp.t_q), ("v_q", sp.v_q)],
                });
            }
        }
        let psa = closed_form(Scheme::TwoPsa, r, 0.0, 1.0, 0.0)?;
        checks.push(Check {
            family: "psa2",
            point: Point::new(SchemeKind::Psa2, r, 0.0, 1.0, GainChoice::Optimal),
            expected: vec![("t_q", psa.t_q), ("v_q", psa.v_q)],
        });
    }
    Ok(checks)
}

fn fixture_checks(fixture: &[GoldenTuple]) -> Vec<Check> {
    fixture
        .iter()
        .map(|t| Check {
            family: "fixture",
            point: Point::new(t.scheme, t.r, t.v_m, t.eta, GainChoice::Fixed(t.gain)),
            expected: vec![("t_q", t.t_q), ("v_q", t.v_q), ("fidelity", t.fidelity)],
        })
        .collect()
}

pub fn verify(grid: &Grid, fixture: &[GoldenTuple], tolerance: f64) -> Result<VerifySummary> {
    let mut checks = grid_checks(grid)?;
    checks.extend(fixture_checks(fixture));

    let results: Vec<Vec<(&'static str, f64, f64)>> = checks
        .par_iter()
        .map(|c| {
            let rec = evaluate(&c.point)?;
            Ok(c.expected
                .iter()
                .map(|(name, want)| {
                    let got = match *name {
                        "t_q" => rec.t_q,
                        "v_q" => rec.v_q,
                        _ => rec.fidelity,
                    };
                    (*name, *want, got)
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let mut families: Vec<FamilySummary> = Vec::new();
    let mut failures = Vec::new();
    for (check, quantities) in checks.iter().zip(results) {
        let idx = match families.iter().position(|f| f.family == check.family) {
            Some(i) => i,
            None => {
                families.push(FamilySummary {
                    family: check.family,
                    points: 0,
                    max_deviation: 0.0,
                });
                families.len() - 1
            }
        };
        let fam = &mut families[idx];
        fam.points += 1;
        for (quantity, expected, actual) in quantities {
            let d = deviation(actual, expected);
            let d = if d.is_nan() { f64::INFINITY } else { d };
            fam.max_deviation = fam.max_deviation.max(d);
            if d > tolerance {
                failures.push(Failure {
                    family: check.family,
                    tuple: tuple_of(&check.point),
                    quantity,
                    expected,
                    actual,
                    deviation: d,
                });
            }
        }
    }
    Ok(VerifySummary {
        pass: failures.is_empty(),
        tolerance,
        families,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> Grid {
        Grid {
            r: vec![0.0, 1.0],
            v_m: vec![0.0, 100.0],
            eta: vec![1.0, 0.9],
            gain: vec![0.0, 2.0],
        }
    }

    #[test]
    fn pristine_fixture_passes() {
        let fixture = parse_fixture(DEFAULT_FIXTURE).unwrap();
        let s = verify(&small_grid(), &fixture, DEFAULT_TOLERANCE).unwrap();
        assert!(s.pass, "{:?}", s.failures);
        assert_eq!(s.families.len(), 4);
    }

    #[test]
    fn perturbed_tuple_is_named() {
        let mut fixture = parse_fixture(DEFAULT_FIXTURE).unwrap();
        fixture[3].v_q = -fixture[3].v_q - 1.0;
        let s = verify(&small_grid(), &fixture, DEFAULT_TOLERANCE).unwrap();
        assert!(!s.pass);
        assert_eq!(s.failures.len(), 1);
        assert_eq!(s.failures[0].quantity, "v_q");
        assert_eq!(s.failures[0].tuple.r, fixture[3].r);
    }

    #[test]
    fn empty_fixture_rejected() {
        assert!(parse_fixture("[]").is_err());
    }
}
