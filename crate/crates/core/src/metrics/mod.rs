//! Figures of merit for a (secret, output) pair, computed from the field
//! algebra. [`closed_form`] holds the analytic counterparts.

pub mod closed_form;

use crate::error::{Error, Result};
use crate::noise::{FieldState, Quadrature};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvPoint {
    /// `T+ + T-`.
    pub t_q: f64,
    /// `V+cv · V-cv`.
    pub v_q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fidelity {
    pub value: f64,
    /// Some quadrature had a zero output mean under a nonzero secret mean;
    /// its `k` was taken as `⟨X_ψ⟩²/(4V_ψ + 4V_out)`.
    pub mean_limit: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub fidelity: f64,
    pub fidelity_mean_limit: bool,
    pub t_plus: f64,
    pub t_minus: f64,
    pub vcv_plus: f64,
    pub vcv_minus: f64,
    pub t_q: f64,
    pub v_q: f64,
    pub k_plus: f64,
    pub k_minus: f64,
    /// `k+ + k-`.
    pub gamma: f64,
}

/// Mean-mismatch exponent `⟨X_ψ⟩²(1 − ⟨X_ψ⟩/⟨X_out⟩)²/(4V_ψ + 4V_out)`.
///
/// Zero when the secret mean is zero; returns the limit flag when the output
/// mean vanishes under a nonzero secret mean.
pub fn k_factor(secret_mean: f64, out_mean: f64, v_secret: f64, v_out: f64) -> (f64, bool) {
    let denom = 4.0 * v_secret + 4.0 * v_out;
    if secret_mean == 0.0 {
        (0.0, false)
    } else if out_mean == 0.0 {
        (secret_mean * secret_mean / denom, true)
    } else {
        let ratio = 1.0 - secret_mean / out_mean;
        (secret_mean * secret_mean * ratio * ratio / denom, false)
    }
}

fn require_coherent(secret: &FieldState) -> Result<()> {
    if secret.is_coherent() {
        Ok(())
    } else {
        Err(Error::NonCoherentSecret)
    }
}

/// Gaussian fidelity of `out` against a coherent `secret`.
pub fn fidelity(secret: &FieldState, out: &FieldState) -> Result<Fidelity> {
    require_coherent(secret)?;
    let mut k_total = 0.0;
    let mut mean_limit = false;
    let mut ratio = 1.0;
    for q in Quadrature::BOTH {
        let (vs, vo) = (secret.variance(q), out.variance(q));
        let (k, limit) = k_factor(secret.mean(q), out.mean(q), vs, vo);
        k_total += k;
        mean_limit |= limit;
        ratio *= vs / (vs + vo);
    }
    Ok(Fidelity {
        value: 2.0 * libm::exp(-k_total) * libm::sqrt(ratio),
        mean_limit,
    })
}

/// `T = SNR_out / SNR_ψ` with `SNR = ⟨X⟩²/V`.
pub fn transfer_coefficient(
    secret: &FieldState,
    out: &FieldState,
    quad: Quadrature,
) -> Result<f64> {
    let sm = secret.mean(quad);
    if sm == 0.0 {
        return Err(Error::UndefinedTransfer(quad));
    }
    let snr_in = sm * sm / secret.variance(quad);
    let om = out.mean(quad);
    if om == 0.0 {
        return Ok(0.0);
    }
    let snr_out = om * om / out.variance(quad);
    Ok(snr_out / snr_in)
}

/// `V_out − |⟨δX_ψ δX_out⟩|²/V_ψ`.
pub fn conditional_variance(
    secret: &FieldState,
    out: &FieldState,
    quad: Quadrature,
) -> Result<f64> {
    let c = secret.covariance(out, quad)?;
    Ok((out.variance(quad) - c * c / secret.variance(quad)).max(0.0))
}

pub fn tv_point(secret: &FieldState, out: &FieldState) -> Result<TvPoint> {
    let t = transfer_coefficient(secret, out, Quadrature::Plus)?
        + transfer_coefficient(secret, out, Quadrature::Minus)?;
    let v = conditional_variance(secret, out, Quadrature::Plus)?
        * conditional_variance(secret, out, Quadrature::Minus)?;
    Ok(TvPoint { t_q: t, v_q: v })
}

pub fn evaluate(secret: &FieldState, out: &FieldState) -> Result<Metrics> {
    let f = fidelity(secret, out)?;
    let t_plus = transfer_coefficient(secret, out, Quadrature::Plus)?;
    let t_minus = transfer_coefficient(secret, out, Quadrature::Minus)?;
    let vcv_plus = conditional_variance(secret, out, Quadrature::Plus)?;
    let vcv_minus = conditional_variance(secret, out, Quadrature::Minus)?;
    let k = |q: Quadrature| {
        k_factor(
            secret.mean(q),
            out.mean(q),
            secret.variance(q),
            out.variance(q),
        )
        .0
    };
    let (k_plus, k_minus) = (k(Quadrature::Plus), k(Quadrature::Minus));
    Ok(Metrics {
        fidelity: f.value,
        fidelity_mean_limit: f.mean_limit,
        t_plus,
        t_minus,
        vcv_plus,
        vcv_minus,
        t_q: t_plus + t_minus,
        v_q: vcv_plus * vcv_minus,
        k_plus,
        k_minus,
        gamma: k_plus + k_minus,
    })
}
