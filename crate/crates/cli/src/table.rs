//! The 24-entry summary of best achievable `(T_q, V_q)` for every adversary
//! and access structure, with and without entanglement and added noise.

use core::f64::consts::SQRT_2;

use serde::Serialize;

use crate::config::{ObjectiveKind, PairKind, SchemeKind};
use crate::error::Result;
use crate::scenario::{evaluate, GainChoice, Point, Record};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableConfig {
    /// Stand-in for "perfect" entanglement.
    pub large_r: f64,
    /// Stand-in for "large" modulation noise, in dB above shot noise.
    pub large_vm_db: f64,
    /// `V_q` above this is reported as infinite.
    pub cap: f64,
    pub secret_means: (f64, f64),
}

impl Default for TableConfig {
    fn default() -> Self {
        Self {
            large_r: 8.0,
            large_vm_db: 80.0,
            cap: 1e6,
            secret_means: (4.0, 2.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    ClassicalQuiet,
    ClassicalNoisy,
    QuantumQuiet,
    QuantumNoisy,
}

impl Regime {
    pub const ALL: [Regime; 4] = [
        Regime::ClassicalQuiet,
        Regime::ClassicalNoisy,
        Regime::QuantumQuiet,
        Regime::QuantumNoisy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::ClassicalQuiet => "clas_nbar",
            Regime::ClassicalNoisy => "clas_n",
            Regime::QuantumQuiet => "quan_nbar",
            Regime::QuantumNoisy => "quan_n",
        }
    }

    fn quantum(self) -> bool {
        matches!(self, Regime::QuantumQuiet | Regime::QuantumNoisy)
    }

    fn noisy(self) -> bool {
        matches!(self, Regime::ClassicalNoisy | Regime::QuantumNoisy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    Adversary(SchemeKind),
    OneTwo,
    Access(PairKind),
}

impl Group {
    pub const ALL: [Group; 6] = [
        Group::Adversary(SchemeKind::SinglePlayer1),
        Group::Adversary(SchemeKind::SinglePlayer2),
        Group::Adversary(SchemeKind::SinglePlayer3),
        Group::OneTwo,
        Group::Access(PairKind::OneThree),
        Group::Access(PairKind::TwoThree),
    ];

    fn labels(self) -> (&'static str, &'static str) {
        match self {
            Group::Adversary(SchemeKind::SinglePlayer1) => ("adversary", "1"),
            Group::Adversary(SchemeKind::SinglePlayer2) => ("adversary", "2"),
            Group::Adversary(_) => ("adversary", "3"),
            Group::OneTwo => ("access", "1,2"),
            Group::Access(PairKind::OneThree) => ("access", "1,3"),
            Group::Access(PairKind::TwoThree) => ("access", "2,3"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableEntry {
    pub structure: &'static str,
    pub players: &'static str,
    pub regime: &'static str,
    /// Scheme that achieved the entry.
    pub method: &'static str,
    pub gain: Option<f64>,
    pub t_q: f64,
    /// Infinite when above the cap.
    pub v_q: f64,
}

fn candidates(group: Group, base: Point) -> Vec<Point> {
    let with = |scheme, gain| Point {
        scheme,
        gain,
        ..base
    };
    match group {
        Group::Adversary(s) => vec![with(s, GainChoice::Optimal)],
        Group::OneTwo => vec![with(SchemeKind::Mz12, GainChoice::Optimal)],
        Group::Access(pair) => {
            let direct = match pair {
                PairKind::OneThree => SchemeKind::SinglePlayer1,
                PairKind::TwoThree => SchemeKind::SinglePlayer2,
            };
            let ff = |gain| Point {
                pair,
                objective: ObjectiveKind::MaxTq,
                ..with(SchemeKind::Feedforward, gain)
            };
            vec![
                ff(GainChoice::Fixed(2.0 * SQRT_2)),
                ff(GainChoice::Optimal),
                with(direct, GainChoice::Optimal),
            ]
        }
    }
}

/// Highest `T_q`, with candidates within `1e-6` of it counting as a tie
/// that goes to the earlier one.
fn best(records: Vec<Record>) -> Record {
    let top = records
        .iter()
        .map(|r| r.t_q)
        .fold(f64::NEG_INFINITY, f64::max);
    records
        .into_iter()
        .find(|r| r.t_q >= top - 1e-6)
        .expect("every group has a candidate")
}

pub fn entry(config: &TableConfig, group: Group, regime: Regime) -> Result<TableEntry> {
    let r = if regime.quantum() {
        config.large_r
    } else {
        0.0
    };
    let v_m_db = regime.noisy().then_some(config.large_vm_db);
    let base = Point {
        v_m_db,
        secret_means: config.secret_means,
        ..Point::new(
            SchemeKind::Mz12,
            r,
            crate::config::v_m_from_db(v_m_db),
            1.0,
            GainChoice::Optimal,
        )
    };
    let records = candidates(group, base)
        .iter()
        .map(evaluate)
        .collect::<Result<Vec<_>>>()?;
    let rec = best(records);
    let (structure, players) = group.labels();
    Ok(TableEntry {
        structure,
        players,
        regime: regime.as_str(),
        method: rec.scheme,
        gain: rec.gain,
        t_q: rec.t_q,
        v_q: if rec.v_q > config.cap {
            f64::INFINITY
        } else {
            rec.v_q
        },
    })
}

/// All entries, group-major in the order of [`Group::ALL`] and [`Regime::ALL`].
pub fn table(config: &TableConfig) -> Result<Vec<TableEntry>> {
    use rayon::prelude::*;
    let cells: Vec<(Group, Regime)> = Group::ALL
        .iter()
        .flat_map(|g| Regime::ALL.iter().map(move |r| (*g, *r)))
        .collect();
    cells
        .par_iter()
        .map(|(g, r)| entry(config, *g, *r))
        .collect()
}
