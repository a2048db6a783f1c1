//! EPR beam sources and the Duan inseparability witness.
//!
//! Both sources are oriented so that `X+1 + X+2` and `X-1 − X-2` are the
//! quiet (correlated) combinations.

use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::noise::{FieldState, ModeId, NoiseBasis, Quadrature};
use crate::optics::{beam_splitter, phase_modulate, phase_shift, psa_type2_pair, Sign};

/// Separable bound on [`duan_sum`] for unit vacuum variance.
pub const DUAN_SEPARABLE_BOUND: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EprSource {
    /// Two amplitude-squeezed beams interfered on a 1:1 splitter.
    TypeI,
    /// Signal and idler of a single travelling-wave Type II amplifier.
    TypeII,
}

/// The base modes feeding a source: squeezers `sqz1`, `sqz2` for Type I,
/// signal and idler vacua for Type II.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceModes {
    pub first: ModeId,
    pub second: ModeId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EprPair {
    pub beam1: FieldState,
    pub beam2: FieldState,
    pub source: EprSource,
    pub r: f64,
    pub inputs: SourceModes,
    /// Shared classical modulation mode and its power, once applied.
    pub modulation: Option<(ModeId, f64)>,
}

fn check_r(r: f64) -> Result<()> {
    if r.is_finite() && r >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "r",
            value: r,
        })
    }
}

/// Type I pair: `beam1 = e^{-iπ/4}(sqz1 + i·sqz2)/√2`,
/// `beam2 = e^{iπ/4}(sqz1 − i·sqz2)/√2`, optionally modulated with power `v_m`.
pub fn epr_type1(basis: &mut NoiseBasis, r: f64, v_m: f64) -> Result<EprPair> {
    check_r(r)?;
    if !(v_m.is_finite() && v_m >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "v_m",
            value: v_m,
        });
    }
    let s1 = basis.squeezed(r)?;
    let s2 = basis.squeezed(r)?;
    let sqz1 = basis.field_from_mode(s1, 0.0, 0.0)?;
    let sqz2 = basis.field_from_mode(s2, 0.0, 0.0)?;
    let (o1, o2) = beam_splitter(&sqz1, &sqz2, 0.5, FRAC_PI_2)?;
    let pair = EprPair {
        beam1: phase_shift(&o1, -FRAC_PI_4),
        beam2: phase_shift(&o2, FRAC_PI_4),
        source: EprSource::TypeI,
        r,
        inputs: SourceModes {
            first: s1,
            second: s2,
        },
        modulation: None,
    };
    pair.modulated(basis, v_m)
}

/// Type II pair from vacuum inputs; the idler output is phase shifted by π
/// so the quiet combinations match the Type I orientation.
pub fn epr_type2(basis: &mut NoiseBasis, r: f64) -> Result<EprPair> {
    check_r(r)?;
    let s = basis.vacuum();
    let i = basis.vacuum();
    let signal = basis.field_from_mode(s, 0.0, 0.0)?;
    let idler = basis.field_from_mode(i, 0.0, 0.0)?;
    let (so, io) = psa_type2_pair(&signal, &idler, r)?;
    Ok(EprPair {
        beam1: so,
        beam2: phase_shift(&io, PI),
        source: EprSource::TypeII,
        r,
        inputs: SourceModes {
            first: s,
            second: i,
        },
        modulation: None,
    })
}

pub fn epr_pair(basis: &mut NoiseBasis, source: EprSource, r: f64, v_m: f64) -> Result<EprPair> {
    match source {
        EprSource::TypeI => epr_type1(basis, r, v_m),
        EprSource::TypeII => epr_type2(basis, r)?.modulated(basis, v_m),
    }
}

impl EprPair {
    /// Registers one classical modulation mode of power `v_m` and adds
    /// `δa_m1 = (δX+_m + iδX-_m)/2` to beam 1 and `δa_m2 = (−δX+_m + iδX-_m)/2`
    /// to beam 2.
    pub fn modulated(mut self, basis: &mut NoiseBasis, v_m: f64) -> Result<Self> {
        if self.modulation.is_some() {
            return Err(Error::InvalidParameter {
                name: "v_m",
                value: v_m,
            });
        }
        let m = basis.modulation(v_m)?;
        self.beam1 = phase_modulate(basis, &self.beam1, m, Sign::Positive)?;
        self.beam2 = phase_modulate(basis, &self.beam2, m, Sign::Negative)?;
        self.modulation = Some((m, v_m));
        Ok(self)
    }

    pub fn swapped(&self) -> Self {
        let mut out = self.clone();
        core::mem::swap(&mut out.beam1, &mut out.beam2);
        out
    }
}

/// `⟨(δX+1 + δX+2)²⟩ + ⟨(δX-1 − δX-2)²⟩`.
pub fn duan_sum(pair: &EprPair) -> f64 {
    let sum = FieldState::combine(&[(1.0, &pair.beam1), (1.0, &pair.beam2)])
        .expect("EPR beams share a basis");
    let diff = FieldState::combine(&[(1.0, &pair.beam1), (-1.0, &pair.beam2)])
        .expect("EPR beams share a basis");
    sum.variance(Quadrature::Plus) + diff.variance(Quadrature::Minus)
}

/// [`duan_sum`] relative to the separable bound; entangled below 1.
pub fn normalized_duan(pair: &EprPair) -> f64 {
    duan_sum(pair) / DUAN_SEPARABLE_BOUND
}

pub fn is_entangled(pair: &EprPair) -> bool {
    duan_sum(pair) < DUAN_SEPARABLE_BOUND - 1e-9
}
