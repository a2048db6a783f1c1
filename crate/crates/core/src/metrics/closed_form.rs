//! Analytic T-V and fidelity expressions, the feedforward gain search and the
//! single-player/collaborating-player crossover.

use core::f64::consts::SQRT_2;

use libm::{cosh, exp, sqrt};

use super::TvPoint;
use crate::error::{Error, Result};
use crate::search::{bisect, golden_section_max, golden_section_min};

/// Upper end of the feedforward gain search interval.
pub const GAIN_SEARCH_MAX: f64 = 8.0;
/// Bracket width at which the gain search stops.
pub const GAIN_SEARCH_TOL: f64 = 1e-10;
/// Bracket width at which the crossover bisection stops.
pub const CROSSOVER_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Players {2,3} with two PSAs at the cancelling gain.
    TwoPsa,
    /// Players {2,3} with the feedforward loop.
    Feedforward,
    /// Player 1 or 2 measuring its own share.
    SinglePlayer,
}

/// Squeezing percentage `p = 1 − e^{-2r}` (fraction of shot noise removed).
pub fn squeezing_percent(r: f64) -> f64 {
    1.0 - exp(-2.0 * r)
}

pub fn squeezing_parameter(p: f64) -> f64 {
    0.5 * libm::log(1.0 / (1.0 - p))
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "eta",
            value: eta,
        })
    }
}

/// `T_q^CP` of the feedforward scheme; `v_m` plays the role of `e^{2s}`.
pub fn feedforward_transfer(r: f64, v_m: f64, eta: f64, gain: f64) -> Result<f64> {
    check_eta(eta)?;
    let g = gain;
    let signal = (1.0 + g / SQRT_2) * (1.0 + g / SQRT_2);
    let noise = (g / 2.0 - SQRT_2) * (g / 2.0 - SQRT_2) * exp(2.0 * r)
        + (1.5 * g) * (1.5 * g) * exp(-2.0 * r)
        + (2.0 - g / SQRT_2) * (2.0 - g / SQRT_2) * v_m
        + 3.0 * g * g * (1.0 - eta) / eta;
    Ok(1.0 / (1.0 + 2.0 * exp(-2.0 * r)) + signal / (signal + noise))
}

/// `V_q^CP` of the feedforward scheme.
pub fn feedforward_conditional_product(r: f64, v_m: f64, eta: f64, gain: f64) -> Result<f64> {
    check_eta(eta)?;
    let g = gain;
    let d = (g - 2.0 * SQRT_2) * (g - 2.0 * SQRT_2);
    let bracket = 9.0 * g * g * exp(-2.0 * r)
        + exp(2.0 * r) * d
        + 2.0 * v_m * d
        + 12.0 * g * g * (1.0 - eta) / eta;
    Ok(exp(-2.0 * r) / 18.0 * bracket)
}

/// Per-quadrature conditional variance of the 2PSA output, `2e^{-2r}`.
pub fn two_psa_conditional_variance(r: f64) -> f64 {
    2.0 * exp(-2.0 * r)
}

/// Evaluates the analytic `(T_q, V_q)` of `scheme`.
///
/// `eta` and `gain` only enter the feedforward expressions. The 2PSA `V_q` is
/// the product of its two conditional variances, `(2e^{-2r})²`.
pub fn closed_form(scheme: Scheme, r: f64, v_m: f64, eta: f64, gain: f64) -> Result<TvPoint> {
    match scheme {
        Scheme::TwoPsa => {
            let v = two_psa_conditional_variance(r);
            Ok(TvPoint {
                t_q: 2.0 / (1.0 + 2.0 * exp(-2.0 * r)),
                v_q: v * v,
            })
        }
        Scheme::Feedforward => Ok(TvPoint {
            t_q: feedforward_transfer(r, v_m, eta, gain)?,
            v_q: feedforward_conditional_product(r, v_m, eta, gain)?,
        }),
        Scheme::SinglePlayer => {
            let noise = cosh(2.0 * r) + v_m;
            Ok(TvPoint {
                t_q: 2.0 / (1.0 + noise),
                v_q: noise * noise / 4.0,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FidelityScheme {
    TwoPsa,
    Feedforward,
}

/// `Γ = ((2 − √3)/12)[⟨X+⟩²/(2 + 3e^{-2r}) + 9⟨X-⟩²/(2 + e^{-2r})]`.
pub fn feedforward_gamma(r: f64, means: (f64, f64)) -> f64 {
    let e = exp(-2.0 * r);
    (2.0 - sqrt(3.0)) / 12.0
        * (means.0 * means.0 / (2.0 + 3.0 * e) + 9.0 * means.1 * means.1 / (2.0 + e))
}

/// Ideal-detector fidelity of players {2,3}; the feedforward value is for the
/// uncorrected output at `G = 2√2`.
pub fn fidelity_closed_form(scheme: FidelityScheme, r: f64, means: (f64, f64)) -> f64 {
    let e = exp(-2.0 * r);
    match scheme {
        FidelityScheme::TwoPsa => 1.0 / (1.0 + e),
        FidelityScheme::Feedforward => {
            exp(-feedforward_gamma(r, means)) * sqrt(3.0 / ((2.0 + e) * (2.0 + 3.0 * e)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GainObjective {
    /// Maximize `T_q^CP`.
    MaxTransfer,
    /// Minimize `V_q^CP`.
    MinConditionalVariance,
}

/// Feedforward gain on `[0, 8]` optimizing `objective`, by golden section.
pub fn optimal_gain(r: f64, v_m: f64, eta: f64, objective: GainObjective) -> Result<f64> {
    check_eta(eta)?;
    let g = match objective {
        GainObjective::MaxTransfer => golden_section_max(
            |g| feedforward_transfer(r, v_m, eta, g).unwrap_or(f64::NAN),
            0.0,
            GAIN_SEARCH_MAX,
            GAIN_SEARCH_TOL,
        ),
        GainObjective::MinConditionalVariance => golden_section_min(
            |g| feedforward_conditional_product(r, v_m, eta, g).unwrap_or(f64::NAN),
            0.0,
            GAIN_SEARCH_MAX,
            GAIN_SEARCH_TOL,
        ),
    };
    Ok(g.0)
}

/// Squeezing percentage below which a single player's `T_q` (no added
/// noise) exceeds that of the feedforward players at the gain chosen by
/// [`GainObjective::MinConditionalVariance`].
pub fn crossover_squeezing() -> Result<f64> {
    crossover_squeezing_for(GainObjective::MinConditionalVariance)
}

pub fn crossover_squeezing_for(objective: GainObjective) -> Result<f64> {
    let advantage = |p: f64| -> f64 {
        let r = squeezing_parameter(p);
        let sp = closed_form(Scheme::SinglePlayer, r, 0.0, 1.0, 0.0).map(|t| t.t_q);
        let cp =
            optimal_gain(r, 0.0, 1.0, objective).and_then(|g| feedforward_transfer(r, 0.0, 1.0, g));
        match (sp, cp) {
            (Ok(sp), Ok(cp)) => sp - cp,
            _ => f64::NAN,
        }
    };
    bisect(advantage, 0.0, 0.99, CROSSOVER_TOL)
}
