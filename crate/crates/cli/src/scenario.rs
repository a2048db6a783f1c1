//! Evaluation of single scenario points and of sweeps over them.

use cvqss_core::metrics::closed_form::{optimal_gain, squeezing_percent};
use cvqss_core::metrics::{self, Metrics};
use cvqss_core::protocol::{
    deal, optimal_estimator_gain, reconstruct_12, reconstruct_2psa, reconstruct_ff,
    single_quadrature_estimate, two_psa_optimal_gain, AccessPair, DealerConfig, FeedforwardConfig,
    Player,
};
use cvqss_core::{FieldState, NoiseBasis, Quadrature};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{
    v_m_from_db, GainSpec, ObjectiveKind, PairKind, QuadKind, ScenarioConfig, SchemeKind,
    SourceKind,
};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainChoice {
    Fixed(f64),
    Optimal,
}

/// Everything needed to evaluate one scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub scheme: SchemeKind,
    pub r: f64,
    /// Linear modulation power.
    pub v_m: f64,
    /// Echoed in the report only; `v_m` is what is simulated.
    pub v_m_db: Option<f64>,
    pub eta: f64,
    pub gain: GainChoice,
    pub secret_means: (f64, f64),
    pub pair: PairKind,
    pub source: SourceKind,
    pub quadrature: QuadKind,
    pub objective: ObjectiveKind,
}

impl Point {
    pub fn new(scheme: SchemeKind, r: f64, v_m: f64, eta: f64, gain: GainChoice) -> Self {
        Self {
            scheme,
            r,
            v_m,
            v_m_db: None,
            eta,
            gain,
            secret_means: (4.0, 2.0),
            pair: PairKind::TwoThree,
            source: SourceKind::Type1,
            quadrature: QuadKind::Plus,
            objective: ObjectiveKind::MinVq,
        }
    }
}

/// One output row. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub scheme: &'static str,
    pub r: f64,
    pub squeezing_pct: f64,
    pub vm_db: Option<f64>,
    pub eta: f64,
    pub gain: Option<f64>,
    pub t_plus: f64,
    pub t_minus: f64,
    pub t_q: f64,
    pub vcv_plus: f64,
    pub vcv_minus: f64,
    pub v_q: f64,
    pub fidelity: f64,
}

struct Outcome {
    gain: Option<f64>,
    t: (f64, f64),
    vcv: (f64, f64),
    fidelity: f64,
}

impl From<(Option<f64>, Metrics)> for Outcome {
    fn from((gain, m): (Option<f64>, Metrics)) -> Self {
        Outcome {
            gain,
            t: (m.t_plus, m.t_minus),
            vcv: (m.vcv_plus, m.vcv_minus),
            fidelity: m.fidelity,
        }
    }
}

fn resolve(choice: GainChoice, optimal: impl FnOnce() -> Result<f64>) -> Result<f64> {
    match choice {
        GainChoice::Fixed(g) => Ok(g),
        GainChoice::Optimal => optimal(),
    }
}

fn measured(secret: &FieldState, out: &FieldState, gain: Option<f64>) -> Result<Outcome> {
    Ok((gain, metrics::evaluate(secret, out)?).into())
}

pub fn evaluate(p: &Point) -> Result<Record> {
    let mut basis = NoiseBasis::new();
    let secret = basis.coherent(p.secret_means.0, p.secret_means.1);
    let dealer = DealerConfig::new(p.r, p.v_m).with_source(p.source.into());
    let shares = deal(&mut basis, &secret, &dealer)?;
    let pair: AccessPair = p.pair.into();

    let outcome = match p.scheme {
        SchemeKind::Mz12 => measured(&secret, &reconstruct_12(&shares)?, None)?,
        SchemeKind::SinglePlayer1 => measured(&secret, shares.share(Player::One), None)?,
        SchemeKind::SinglePlayer2 => measured(&secret, shares.share(Player::Two), None)?,
        SchemeKind::SinglePlayer3 => measured(&secret, shares.share(Player::Three), None)?,
        SchemeKind::Psa2 => {
            let g = resolve(p.gain, || Ok(two_psa_optimal_gain()))?;
            measured(
                &secret,
                &reconstruct_2psa(&shares, pair, g)?.output,
                Some(g),
            )?
        }
        SchemeKind::Feedforward => {
            let g = resolve(p.gain, || {
                Ok(optimal_gain(p.r, p.v_m, p.eta, p.objective.into())?)
            })?;
            let ff = reconstruct_ff(&mut basis, &shares, pair, &FeedforwardConfig::new(g, p.eta))?;
            measured(&secret, &ff.output, Some(g))?
        }
        SchemeKind::SingleQuadrature => {
            let quad: Quadrature = p.quadrature.into();
            let g = resolve(p.gain, || Ok(optimal_estimator_gain(&shares, pair, quad)?))?;
            let est = single_quadrature_estimate(&shares, pair, quad, g)?;
            let sq = secret.quadrature(quad);
            let snr_in = sq.mean() * sq.mean() / sq.variance();
            let t = est.mean() * est.mean() / est.variance() / snr_in;
            let c = sq.covariance(&est.estimator)?;
            let vcv = (est.variance() - c * c / sq.variance()).max(0.0);
            // The conjugate quadrature is not measured: no transfer, unbounded noise.
            let (t, vcv) = match quad {
                Quadrature::Plus => ((t, 0.0), (vcv, f64::INFINITY)),
                Quadrature::Minus => ((0.0, t), (f64::INFINITY, vcv)),
            };
            Outcome {
                gain: Some(g),
                t,
                vcv,
                fidelity: f64::NAN,
            }
        }
    };

    Ok(Record {
        scheme: p.scheme.as_str(),
        r: p.r,
        squeezing_pct: 100.0 * squeezing_percent(p.r),
        vm_db: p.v_m_db,
        eta: p.eta,
        gain: outcome.gain,
        t_plus: outcome.t.0,
        t_minus: outcome.t.1,
        t_q: outcome.t.0 + outcome.t.1,
        vcv_plus: outcome.vcv.0,
        vcv_minus: outcome.vcv.1,
        v_q: outcome.vcv.0 * outcome.vcv.1,
        fidelity: outcome.fidelity,
    })
}

/// Expands `config` into its grid of points, `r` outermost.
pub fn points(config: &ScenarioConfig) -> Vec<Point> {
    let gains: Vec<GainChoice> = match (&config.gain, config.scheme.uses_gain()) {
        (_, false) | (GainSpec::Optimal, true) => vec![GainChoice::Optimal],
        (GainSpec::Values(s), true) => s.values().iter().map(|g| GainChoice::Fixed(*g)).collect(),
    };
    let v_m = v_m_from_db(config.v_m_db);
    let mut out = Vec::with_capacity(config.r.values().len() * gains.len());
    for &r in config.r.values() {
        for &gain in &gains {
            out.push(Point {
                scheme: config.scheme,
                r,
                v_m,
                v_m_db: config.v_m_db,
                eta: config.eta,
                gain,
                secret_means: config.secret_means,
                pair: config.pair,
                source: config.source,
                quadrature: config.quadrature,
                objective: config.objective,
            });
        }
    }
    out
}

/// Evaluates every point in parallel; rows come back in input order.
pub fn evaluate_all(points: &[Point]) -> Result<Vec<Record>> {
    points.par_iter().map(evaluate).collect()
}

pub fn run(config: &ScenarioConfig) -> Result<Vec<Record>> {
    config.validate()?;
    evaluate_all(&points(config))
}
