//! Dealer share generation and the reconstruction procedures.

use core::f64::consts::PI;

use crate::entanglement::{epr_pair, EprPair, EprSource};
use crate::error::{Error, Result};
use crate::noise::{FieldState, ModeId, NoiseBasis, Observable, Quadrature};
use crate::optics::{
    beam_splitter, detect, feedforward_mix, feedforward_mix_finite, phase_shift, psa_ideal,
    Photocurrent,
};

/// Reflectivity of the splitter that combines the two shares before feedforward.
pub const FEEDFORWARD_REFLECTIVITY: f64 = 2.0 / 3.0;

/// `(√2 + 1)/(√2 − 1)`: cancels the entanglement modes in the 2PSA scheme.
pub fn two_psa_optimal_gain() -> f64 {
    let s = core::f64::consts::SQRT_2;
    (s + 1.0) / (s - 1.0)
}

/// `2√2`: cancels anti-squeezing and modulation noise in the feedforward scheme.
pub const FEEDFORWARD_CANCELLING_GAIN: f64 = 2.0 * core::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DealerConfig {
    /// Squeezing (Type I) or interaction (Type II) parameter.
    pub r: f64,
    /// Classical modulation power `e^{2s}`; `0` for none.
    pub v_m: f64,
    pub source: EprSource,
}

impl DealerConfig {
    pub fn new(r: f64, v_m: f64) -> Self {
        Self {
            r,
            v_m,
            source: EprSource::TypeI,
        }
    }

    pub fn with_source(mut self, source: EprSource) -> Self {
        self.source = source;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Shares {
    pub share1: FieldState,
    pub share2: FieldState,
    pub share3: FieldState,
    pub config: DealerConfig,
    pub epr: EprPair,
}

impl Shares {
    pub fn share(&self, player: Player) -> &FieldState {
        match player {
            Player::One => &self.share1,
            Player::Two => &self.share2,
            Player::Three => &self.share3,
        }
    }

    pub fn modulation_mode(&self) -> ModeId {
        self.epr
            .modulation
            .expect("dealer always registers a modulation mode")
            .0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    One,
    Two,
    Three,
}

/// The two-player groups that need share 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AccessPair {
    OneThree,
    TwoThree,
}

/// `a1 = (ψ + EPR1 + δa_m1)/√2`, `a2 = (ψ − EPR1 − δa_m1)/√2`, `a3 = EPR2 + δa_m2`.
pub fn deal(basis: &mut NoiseBasis, secret: &FieldState, config: &DealerConfig) -> Result<Shares> {
    if secret.basis() != basis.id() {
        return Err(Error::BasisMismatch);
    }
    if !secret.is_coherent() {
        return Err(Error::NonCoherentSecret);
    }
    let epr = epr_pair(basis, config.source, config.r, config.v_m)?;
    let (share1, share2) = beam_splitter(secret, &epr.beam1, 0.5, 0.0)?;
    Ok(Shares {
        share1,
        share2,
        share3: epr.beam2.clone(),
        config: *config,
        epr,
    })
}

/// Both Mach-Zehnder outputs of players 1 and 2: `(ψ, EPR1 + δa_m1)`.
pub fn mach_zehnder(shares: &Shares) -> Result<(FieldState, FieldState)> {
    beam_splitter(&shares.share1, &shares.share2, 0.5, 0.0)
}

pub fn reconstruct_12(shares: &Shares) -> Result<FieldState> {
    Ok(mach_zehnder(shares)?.0)
}

/// The secret-bearing share of `pair`, and share 3 as that player sees it.
///
/// Share 1 carries `+EPR1` where share 2 carries `−EPR1`; a π phase on share 3
/// maps the {1,3} problem onto the {2,3} one.
fn pair_inputs(shares: &Shares, pair: AccessPair) -> (&FieldState, FieldState) {
    match pair {
        AccessPair::TwoThree => (&shares.share2, shares.share3.clone()),
        AccessPair::OneThree => (&shares.share1, phase_shift(&shares.share3, PI)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoPsaOutput {
    pub output: FieldState,
    pub spare: FieldState,
}

/// 1:1 splitter (π on share 3), PSA amplifying `X+` on one arm and `X-` on
/// the other with the same gain, then a second 1:1 splitter.
pub fn reconstruct_2psa(shares: &Shares, pair: AccessPair, gain: f64) -> Result<TwoPsaOutput> {
    if !(gain > 0.0 && gain.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "gain",
            value: gain,
        });
    }
    let (carrier, third) = pair_inputs(shares, pair);
    let (a, b) = beam_splitter(carrier, &third, 0.5, PI)?;
    let a = psa_ideal(&a, gain)?;
    let b = psa_ideal(&b, 1.0 / gain)?;
    let (output, spare) = beam_splitter(&a, &b, 0.5, 0.0)?;
    Ok(TwoPsaOutput { output, spare })
}

/// How the feedforward signal is mixed back onto the kept beam.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum HrMixing {
    /// Highly reflective splitter in the `ε → 0` limit.
    #[default]
    Ideal,
    /// Finite local-oscillator transmissivity `ε`, admitting LO vacuum noise.
    Finite { epsilon: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedforwardConfig {
    /// Total loop gain `G = η K ⟨X+_c⟩`.
    pub gain: f64,
    pub eta: f64,
    pub mixing: HrMixing,
}

impl FeedforwardConfig {
    pub fn new(gain: f64, eta: f64) -> Self {
        Self {
            gain,
            eta,
            mixing: HrMixing::Ideal,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeedforwardOutput {
    pub output: FieldState,
    /// Beam `b`, which receives the feedforward.
    pub kept: FieldState,
    /// Beam `c`, which is detected.
    pub detected: FieldState,
    pub photocurrent: Photocurrent,
}

pub fn reconstruct_ff(
    basis: &mut NoiseBasis,
    shares: &Shares,
    pair: AccessPair,
    config: &FeedforwardConfig,
) -> Result<FeedforwardOutput> {
    if !(config.eta > 0.0 && config.eta <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "eta",
            value: config.eta,
        });
    }
    if !(config.gain >= 0.0 && config.gain.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "gain",
            value: config.gain,
        });
    }
    let (carrier, third) = pair_inputs(shares, pair);
    let (kept, detected) = beam_splitter(carrier, &third, FEEDFORWARD_REFLECTIVITY, 0.0)?;
    let d = basis.detector_vacuum();
    let photocurrent = detect(basis, &detected, config.eta, d)?;
    let output = match config.mixing {
        HrMixing::Ideal => feedforward_mix(&kept, &photocurrent, config.gain)?,
        HrMixing::Finite { epsilon } => {
            let lo = basis.coherent(0.0, 0.0);
            feedforward_mix_finite(&kept, &photocurrent, config.gain, &lo, epsilon)?
        }
    };
    Ok(FeedforwardOutput {
        output,
        kept,
        detected,
        photocurrent,
    })
}

/// Divides `X+` by `g` and multiplies `X-` by `g` with a single ideal PSA.
pub fn symplectic_correct(field: &FieldState, g: f64) -> Result<FieldState> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "g",
            value: g,
        });
    }
    psa_ideal(field, 1.0 / (g * g))
}

/// Homodyne estimate of one quadrature of the secret.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureEstimate {
    pub quadrature: Quadrature,
    pub gain: f64,
    /// `√2 (X_q(carrier) + gain·X_q(share 3))`, normalized to unit signal gain.
    pub estimator: Observable,
}

impl QuadratureEstimate {
    pub fn mean(&self) -> f64 {
        self.estimator.mean()
    }

    pub fn variance(&self) -> f64 {
        self.estimator.variance()
    }
}

/// Combines homodyne photocurrents of the secret-bearing share and share 3 in
/// the single quadrature `quad`.
pub fn single_quadrature_estimate(
    shares: &Shares,
    pair: AccessPair,
    quad: Quadrature,
    gain: f64,
) -> Result<QuadratureEstimate> {
    let (carrier, third) = pair_inputs(shares, pair);
    let s = core::f64::consts::SQRT_2;
    let estimator = Observable::combine(&[
        (s, carrier.quadrature(quad)),
        (s * gain, third.quadrature(quad)),
    ])?;
    Ok(QuadratureEstimate {
        quadrature: quad,
        gain,
        estimator,
    })
}

/// Gain minimizing the estimator variance: `−cov(X_carrier, X_3)/V(X_3)`.
pub fn optimal_estimator_gain(shares: &Shares, pair: AccessPair, quad: Quadrature) -> Result<f64> {
    let (carrier, third) = pair_inputs(shares, pair);
    let v3 = third.variance(quad);
    if v3 == 0.0 {
        return Ok(0.0);
    }
    Ok(-carrier.covariance(&third, quad)? / v3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn dealt(r: f64, v_m: f64) -> (NoiseBasis, FieldState, Shares) {
        let mut b = NoiseBasis::new();
        let secret = b.coherent(4.0, 2.0);
        let shares = deal(&mut b, &secret, &DealerConfig::new(r, v_m)).unwrap();
        (b, secret, shares)
    }

    #[test]
    fn unentangled_share_means() {
        let (_, _, s) = dealt(0.0, 0.0);
        assert_abs_diff_eq!(s.share1.mean_plus(), 2.828427, epsilon = 1e-6);
        assert_abs_diff_eq!(
            s.share1.mean_minus(),
            core::f64::consts::SQRT_2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn share3_never_sees_secret() {
        for (r, v) in [(0.0, 0.0), (0.7, 0.0), (1.2, 100.0)] {
            let (_, secret, s) = dealt(r, v);
            for q in Quadrature::BOTH {
                assert_eq!(s.share3.covariance(&secret, q).unwrap(), 0.0);
                assert_eq!(s.share3.mean(q), 0.0);
            }
        }
    }

    #[test]
    fn modulated_shares_have_equal_noise() {
        let (_, _, s) = dealt(0.4, 100.0);
        for q in Quadrature::BOTH {
            assert_abs_diff_eq!(s.share1.variance(q), s.share2.variance(q), epsilon = 1e-9);
        }
    }

    #[test]
    fn rejects_non_coherent_secret() {
        let mut b = NoiseBasis::new();
        let m = b.squeezed(0.5).unwrap();
        let secret = b.field_from_mode(m, 1.0, 1.0).unwrap();
        assert_eq!(
            deal(&mut b, &secret, &DealerConfig::new(0.5, 0.0)),
            Err(Error::NonCoherentSecret)
        );
    }

    #[test]
    fn mach_zehnder_recovers_secret() {
        let (_, secret, s) = dealt(0.5, 100.0);
        let (out, spare) = mach_zehnder(&s).unwrap();
        assert!(out.approx_eq(&secret));
        for q in Quadrature::BOTH {
            assert_abs_diff_eq!(out.variance(q), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(spare.covariance(&secret, q).unwrap(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn two_psa_rejects_nonpositive_gain() {
        let (_, _, s) = dealt(0.5, 0.0);
        assert!(reconstruct_2psa(&s, AccessPair::TwoThree, 0.0).is_err());
    }

    #[test]
    fn two_psa_residual_noise() {
        let (_, _, s) = dealt(0.5, 0.0);
        let out = reconstruct_2psa(&s, AccessPair::TwoThree, two_psa_optimal_gain())
            .unwrap()
            .output;
        for q in Quadrature::BOTH {
            assert_abs_diff_eq!(out.variance(q) - 1.0, 0.735759, epsilon = 1e-6);
        }
    }

    #[test]
    fn feedforward_rejects_bad_eta() {
        let (mut b, _, s) = dealt(0.5, 0.0);
        let pair = AccessPair::TwoThree;
        assert!(reconstruct_ff(&mut b, &s, pair, &FeedforwardConfig::new(1.0, 0.0)).is_err());
        assert!(reconstruct_ff(&mut b, &s, pair, &FeedforwardConfig::new(1.0, 1.2)).is_err());
        assert!(reconstruct_ff(&mut b, &s, pair, &FeedforwardConfig::new(-1.0, 1.0)).is_err());
    }

    #[test]
    fn zero_gain_feedforward_keeps_b() {
        let (mut b, _, s) = dealt(0.5, 1.0);
        let ff = reconstruct_ff(
            &mut b,
            &s,
            AccessPair::TwoThree,
            &FeedforwardConfig::new(0.0, 1.0),
        )
        .unwrap();
        assert_eq!(ff.output, ff.kept);
    }

    #[test]
    fn symplectic_correction_identity_and_error() {
        let (_, secret, _) = dealt(0.0, 0.0);
        assert!(symplectic_correct(&secret, 1.0).unwrap().approx_eq(&secret));
        assert!(symplectic_correct(&secret, 0.0).is_err());
    }

    #[test]
    fn zero_gain_estimate_is_carrier_homodyne() {
        let (_, _, s) = dealt(0.3, 0.0);
        let e =
            single_quadrature_estimate(&s, AccessPair::TwoThree, Quadrature::Plus, 0.0).unwrap();
        let expected = s
            .share2
            .quadrature(Quadrature::Plus)
            .scaled(core::f64::consts::SQRT_2);
        assert_eq!(e.estimator.max_coeff_diff(&expected), 0.0);
        assert_abs_diff_eq!(e.mean(), 4.0, epsilon = 1e-12);
    }
}
