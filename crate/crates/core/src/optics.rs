//! Linear optical and parametric components as exact maps on field states.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::noise::{FieldState, ModeId, ModeKind, NoiseBasis, NoiseVar, Observable, Quadrature};

fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value })
    }
}

/// Lossless beam splitter with power reflectivity `reflectivity`.
///
/// Input `b` first picks up the phase `e^{i·phase}`; the outputs are then
/// `(√R a + √(1−R) b, √(1−R) a − √R b)`.
pub fn beam_splitter(
    a: &FieldState,
    b: &FieldState,
    reflectivity: f64,
    phase: f64,
) -> Result<(FieldState, FieldState)> {
    check_unit_interval("reflectivity", reflectivity)?;
    let rho = libm::sqrt(reflectivity);
    let tau = libm::sqrt(1.0 - reflectivity);
    let b = if phase == 0.0 {
        b.clone()
    } else {
        b.rotated(phase)
    };
    let first = FieldState::combine(&[(rho, a), (tau, &b)])?;
    let second = FieldState::combine(&[(tau, a), (-rho, &b)])?;
    Ok((first, second))
}

pub fn phase_shift(field: &FieldState, theta: f64) -> FieldState {
    field.rotated(theta)
}

/// Noiseless phase-sensitive amplifier: `X+ → √G X+`, `X- → X-/√G`.
pub fn psa_ideal(field: &FieldState, gain: f64) -> Result<FieldState> {
    check_positive("gain", gain)?;
    let s = libm::sqrt(gain);
    Ok(field.scale_quadratures(s, 1.0 / s))
}

/// Travelling-wave Type II amplifier acting on a signal/idler pair:
/// `a_s → a_s cosh r + a_i† sinh r` (and `s ↔ i`), which in quadratures is
/// `X+_s → cosh r X+_s + sinh r X+_i`, `X-_s → cosh r X-_s − sinh r X-_i`.
pub fn psa_type2_pair(
    signal: &FieldState,
    idler: &FieldState,
    r: f64,
) -> Result<(FieldState, FieldState)> {
    if signal.basis() != idler.basis() {
        return Err(Error::BasisMismatch);
    }
    let (c, s) = (libm::cosh(r), libm::sinh(r));
    let mix = |x: &FieldState, y: &FieldState| -> Result<FieldState> {
        FieldState::from_quadratures(
            Observable::combine(&[(c, &x.plus), (s, &y.plus)])?,
            Observable::combine(&[(c, &x.minus), (-s, &y.minus)])?,
        )
    };
    Ok((mix(signal, idler)?, mix(idler, signal)?))
}

/// Photon-number gain of a Type II amplifier at pump phase mismatch `phi`.
pub fn psa_gain_phase(r: f64, phi: f64) -> f64 {
    libm::cosh(2.0 * r) + libm::sinh(2.0 * r) * libm::cos(phi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsaParams {
    /// Interaction parameter `r`.
    pub r: f64,
    /// Pump phase mismatch `φ` in radians.
    pub phi: f64,
}

impl PsaParams {
    pub fn gain(&self) -> f64 {
        psa_gain_phase(self.r, self.phi)
    }

    /// `e^{2r}`, reached at `φ = 0`.
    pub fn peak_gain(&self) -> f64 {
        libm::exp(2.0 * self.r)
    }
}

/// Below-threshold OPO used as a Type I phase-sensitive amplifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpoParams {
    pub kappa_f: f64,
    pub kappa_b: f64,
    pub kappa_l: f64,
    pub gamma: f64,
    pub omega: f64,
}

impl OpoParams {
    pub fn lossless(kappa_f: f64, gamma: f64, omega: f64) -> Self {
        Self {
            kappa_f,
            kappa_b: 0.0,
            kappa_l: 0.0,
            gamma,
            omega,
        }
    }

    pub fn total_damping(&self) -> f64 {
        self.kappa_f + self.kappa_b + self.kappa_l
    }

    /// Low-frequency quadrature gain `G` with `√G = (κ_f + γ)/(κ_f − γ)`.
    pub fn quadrature_gain(&self) -> Result<f64> {
        self.validate()?;
        let sqrt_g = (self.kappa_f + self.gamma) / (self.kappa_f - self.gamma);
        Ok(sqrt_g * sqrt_g)
    }

    fn validate(&self) -> Result<()> {
        check_positive("kappa_f", self.kappa_f)?;
        for (name, v) in [("kappa_b", self.kappa_b), ("kappa_l", self.kappa_l)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter { name, value: v });
            }
        }
        let kappa = self.total_damping();
        if !(self.gamma.is_finite() && self.gamma.abs() < kappa) {
            return Err(Error::AboveThreshold {
                gamma: self.gamma.abs(),
                kappa,
            });
        }
        Ok(())
    }
}

/// Front-mirror quadrature transfer functions `(t+, t-)` at the sideband `ω`.
pub fn opo_transfer(p: &OpoParams) -> Result<(Complex64, Complex64)> {
    p.validate()?;
    let iw = Complex64::new(0.0, p.omega);
    let kappa = p.total_damping();
    let kf = Complex64::from(p.kappa_f);
    let t_plus = (kf - iw + p.gamma) / (iw + kappa - p.gamma);
    let t_minus = (kf - iw - p.gamma) / (iw + kappa + p.gamma);
    Ok((t_plus, t_minus))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }
}

/// Adds the classical noise of modulator `mode`: `±δX+_m` on `X+`, `+δX-_m` on `X-`.
///
/// Both beams of a modulated pair reference the same mode, with opposite
/// `sign`, giving anticorrelated amplitude and correlated phase noise.
pub fn phase_modulate(
    basis: &NoiseBasis,
    field: &FieldState,
    mode: ModeId,
    sign: Sign,
) -> Result<FieldState> {
    if basis.id() != field.basis() {
        return Err(Error::BasisMismatch);
    }
    let m = basis.mode(mode)?;
    if m.kind != ModeKind::ClassicalModulation {
        return Err(Error::WrongModeKind {
            mode,
            expected: ModeKind::ClassicalModulation,
            found: m.kind,
        });
    }
    let mut out = field.clone();
    out.quadrature_mut(Quadrature::Plus).push_term(
        NoiseVar::plus(mode),
        sign.value(),
        m.variance_plus,
    );
    out.quadrature_mut(Quadrature::Minus)
        .push_term(NoiseVar::minus(mode), 1.0, m.variance_minus);
    Ok(out)
}

/// Amplitude-quadrature photocurrent, normalized by the carrier `⟨X+_c⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Photocurrent {
    pub eta: f64,
    pub detector_mode: ModeId,
    /// `√η X+ + √(1−η) δX+_d`.
    pub current: Observable,
}

impl Photocurrent {
    pub fn mean(&self) -> f64 {
        self.current.mean()
    }
}

pub fn detect(
    basis: &NoiseBasis,
    field: &FieldState,
    eta: f64,
    detector_mode: ModeId,
) -> Result<Photocurrent> {
    check_unit_interval("eta", eta)?;
    if basis.id() != field.basis() {
        return Err(Error::BasisMismatch);
    }
    let m = basis.mode(detector_mode)?;
    if m.kind != ModeKind::DetectorVacuum {
        return Err(Error::WrongModeKind {
            mode: detector_mode,
            expected: ModeKind::DetectorVacuum,
            found: m.kind,
        });
    }
    if field.references_mode(detector_mode) {
        return Err(Error::DetectorModeInUse(detector_mode));
    }
    let mut current = field.quadrature(Quadrature::Plus).scaled(libm::sqrt(eta));
    let loss = libm::sqrt(1.0 - eta);
    if loss > 0.0 {
        current.push_term(NoiseVar::plus(detector_mode), loss, m.variance_plus);
    }
    Ok(Photocurrent {
        eta,
        detector_mode,
        current,
    })
}

fn feedforward_scale(current: &Photocurrent, gain: f64) -> Result<f64> {
    if current.eta == 0.0 {
        return Err(Error::GainCalibration { gain });
    }
    Ok(gain / libm::sqrt(current.eta))
}

/// Feeds the photocurrent forward onto the amplitude of `b` in the
/// high-reflectivity limit: `X+ → X+_b + (G/√η)·i`, `X- → X-_b`.
///
/// `total_gain` is the loop gain `G = η K ⟨X+_c⟩`.
pub fn feedforward_mix(
    b: &FieldState,
    current: &Photocurrent,
    total_gain: f64,
) -> Result<FieldState> {
    if total_gain == 0.0 {
        return Ok(b.clone());
    }
    let k = feedforward_scale(current, total_gain)?;
    FieldState::from_quadratures(b.plus.add_scaled(k, &current.current)?, b.minus.clone())
}

/// Feedforward through a beam splitter of finite transmissivity `epsilon`
/// for the local-oscillator port, which admits the vacuum field `lo`.
pub fn feedforward_mix_finite(
    b: &FieldState,
    current: &Photocurrent,
    total_gain: f64,
    lo: &FieldState,
    epsilon: f64,
) -> Result<FieldState> {
    check_unit_interval("epsilon", epsilon)?;
    let mixed = FieldState::combine(&[(libm::sqrt(1.0 - epsilon), b), (libm::sqrt(epsilon), lo)])?;
    feedforward_mix(&mixed, current, total_gain)
}
