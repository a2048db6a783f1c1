//! Exact linear Gaussian field algebra.
//!
//! Every base mode contributes two independent, zero-mean real noise
//! variables: its amplitude (`X+`) and phase (`X-`) fluctuations. A field
//! quadrature is a finite linear combination of those variables plus a mean,
//! so all second-order statistics reduce to sums over shared variables.
//!
//! Quadratures follow `X+ = a† + a`, `X- = i(a† - a)`; vacuum has unit
//! variance in both, so every number here is in shot-noise units.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU32, Ordering};

use crate::error::{Error, Result};

/// Absolute tolerance for the minimum-uncertainty check and coefficient equality.
pub const COEFF_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quadrature {
    Plus,
    Minus,
}

impl Quadrature {
    pub const BOTH: [Quadrature; 2] = [Quadrature::Plus, Quadrature::Minus];

    pub fn conjugate(self) -> Self {
        match self {
            Quadrature::Plus => Quadrature::Minus,
            Quadrature::Minus => Quadrature::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeId(u32);

impl ModeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeKind {
    Vacuum,
    Squeezed,
    ClassicalModulation,
    DetectorVacuum,
}

/// An independent Gaussian fluctuation source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseMode {
    pub kind: ModeKind,
    pub variance_plus: f64,
    pub variance_minus: f64,
}

impl NoiseMode {
    pub fn variance(&self, quad: Quadrature) -> f64 {
        match quad {
            Quadrature::Plus => self.variance_plus,
            Quadrature::Minus => self.variance_minus,
        }
    }

    fn validate(&self) -> Result<()> {
        let (p, m) = (self.variance_plus, self.variance_minus);
        if !(p.is_finite() && m.is_finite() && p >= 0.0 && m >= 0.0) {
            return Err(Error::NegativeVariance { plus: p, minus: m });
        }
        let kind_error = |ep: f64, em: f64| Error::KindVariance {
            kind: self.kind,
            expected_plus: ep,
            expected_minus: em,
            plus: p,
            minus: m,
        };
        match self.kind {
            ModeKind::Vacuum | ModeKind::DetectorVacuum => {
                if (p - 1.0).abs() > COEFF_TOL || (m - 1.0).abs() > COEFF_TOL {
                    return Err(kind_error(1.0, 1.0));
                }
            }
            ModeKind::Squeezed => {
                if (p * m - 1.0).abs() > COEFF_TOL {
                    return Err(Error::NotMinimumUncertainty { product: p * m });
                }
            }
            ModeKind::ClassicalModulation => {
                if (p - m).abs() > COEFF_TOL * p.max(1.0) {
                    return Err(kind_error(p, p));
                }
            }
        }
        Ok(())
    }
}

/// One real noise variable: a single quadrature of a base mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NoiseVar {
    pub mode: ModeId,
    pub quad: Quadrature,
}

impl NoiseVar {
    pub fn new(mode: ModeId, quad: Quadrature) -> Self {
        Self { mode, quad }
    }

    pub fn plus(mode: ModeId) -> Self {
        Self::new(mode, Quadrature::Plus)
    }

    pub fn minus(mode: ModeId) -> Self {
        Self::new(mode, Quadrature::Minus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisId(u32);

static NEXT_BASIS: AtomicU32 = AtomicU32::new(0);

/// Append-only registry of the noise modes of one scenario.
#[derive(Debug, Clone)]
pub struct NoiseBasis {
    id: BasisId,
    modes: Vec<NoiseMode>,
}

impl Default for NoiseBasis {
    fn default() -> Self {
        Self::new()
    }
}

impl NoiseBasis {
    pub fn new() -> Self {
        Self {
            id: BasisId(NEXT_BASIS.fetch_add(1, Ordering::Relaxed)),
            modes: Vec::new(),
        }
    }

    pub fn id(&self) -> BasisId {
        self.id
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn register_mode(&mut self, kind: ModeKind, v_plus: f64, v_minus: f64) -> Result<ModeId> {
        let mode = NoiseMode {
            kind,
            variance_plus: v_plus,
            variance_minus: v_minus,
        };
        mode.validate()?;
        let id = ModeId(self.modes.len() as u32);
        self.modes.push(mode);
        Ok(id)
    }

    pub fn vacuum(&mut self) -> ModeId {
        self.register_mode(ModeKind::Vacuum, 1.0, 1.0)
            .expect("vacuum variances are valid")
    }

    pub fn detector_vacuum(&mut self) -> ModeId {
        self.register_mode(ModeKind::DetectorVacuum, 1.0, 1.0)
            .expect("vacuum variances are valid")
    }

    /// Amplitude-squeezed mode: `V+ = e^{-2r}`, `V- = e^{2r}`.
    pub fn squeezed(&mut self, r: f64) -> Result<ModeId> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "r",
                value: r,
            });
        }
        let v = libm::exp(-2.0 * r);
        self.register_mode(ModeKind::Squeezed, v, 1.0 / v)
    }

    /// Classical modulation of power `v_m` in both quadratures; `0` means absent.
    pub fn modulation(&mut self, v_m: f64) -> Result<ModeId> {
        self.register_mode(ModeKind::ClassicalModulation, v_m, v_m)
    }

    pub fn mode(&self, id: ModeId) -> Result<&NoiseMode> {
        self.modes.get(id.index()).ok_or(Error::UnknownMode(id))
    }

    pub fn modes(&self) -> impl Iterator<Item = (ModeId, &NoiseMode)> {
        self.modes
            .iter()
            .enumerate()
            .map(|(i, m)| (ModeId(i as u32), m))
    }

    /// The variable `id`'s quadrature as a unit-coefficient observable.
    pub fn observable(&self, var: NoiseVar, mean: f64) -> Result<Observable> {
        let mode = self.mode(var.mode)?;
        let mut terms = BTreeMap::new();
        terms.insert(
            var,
            Term {
                coeff: 1.0,
                variance: mode.variance(var.quad),
            },
        );
        Ok(Observable {
            basis: self.id,
            mean,
            terms,
        })
    }

    pub fn field_from_mode(
        &self,
        mode: ModeId,
        mean_plus: f64,
        mean_minus: f64,
    ) -> Result<FieldState> {
        Ok(FieldState {
            plus: self.observable(NoiseVar::plus(mode), mean_plus)?,
            minus: self.observable(NoiseVar::minus(mode), mean_minus)?,
        })
    }

    /// A coherent state on a freshly registered vacuum mode.
    pub fn coherent(&mut self, mean_plus: f64, mean_minus: f64) -> FieldState {
        let mode = self.vacuum();
        self.field_from_mode(mode, mean_plus, mean_minus)
            .expect("mode was just registered")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Term {
    coeff: f64,
    variance: f64,
}

/// A real linear observable: `mean + Σ coeff·δvar`.
///
/// Carries the variance of each variable it references, so its statistics are
/// self-contained.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    basis: BasisId,
    mean: f64,
    terms: BTreeMap<NoiseVar, Term>,
}

impl Observable {
    pub fn zero(basis: BasisId) -> Self {
        Self {
            basis,
            mean: 0.0,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(&self) -> BasisId {
        self.basis
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn coeff(&self, var: NoiseVar) -> f64 {
        self.terms.get(&var).map_or(0.0, |t| t.coeff)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (NoiseVar, f64)> + '_ {
        self.terms.iter().map(|(v, t)| (*v, t.coeff))
    }

    pub fn references_mode(&self, mode: ModeId) -> bool {
        self.terms
            .iter()
            .any(|(v, t)| v.mode == mode && t.coeff != 0.0)
    }

    pub fn variance(&self) -> f64 {
        self.terms
            .values()
            .map(|t| t.coeff * t.coeff * t.variance)
            .sum()
    }

    pub fn covariance(&self, other: &Observable) -> Result<f64> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        Ok(self
            .terms
            .iter()
            .filter_map(|(v, t)| other.terms.get(v).map(|o| t.coeff * o.coeff * t.variance))
            .sum())
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.scale_in_place(s);
        out
    }

    fn scale_in_place(&mut self, s: f64) {
        self.mean *= s;
        for t in self.terms.values_mut() {
            t.coeff *= s;
        }
    }

    /// `self + s·other`, coefficient- and mean-wise.
    pub fn add_scaled(&self, s: f64, other: &Observable) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled_in_place(s, other)?;
        Ok(out)
    }

    fn add_scaled_in_place(&mut self, s: f64, other: &Observable) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        self.mean += s * other.mean;
        for (v, t) in &other.terms {
            self.terms
                .entry(*v)
                .and_modify(|e| e.coeff += s * t.coeff)
                .or_insert(Term {
                    coeff: s * t.coeff,
                    variance: t.variance,
                });
        }
        Ok(())
    }

    /// `Σ w_k·o_k`; all observables must share a basis.
    pub fn combine(parts: &[(f64, &Observable)]) -> Result<Self> {
        let (first, rest) = match parts.split_first() {
            Some(p) => p,
            None => {
                return Err(Error::InvalidParameter {
                    name: "parts",
                    value: 0.0,
                })
            }
        };
        let mut out = first.1.scaled(first.0);
        for (w, o) in rest {
            out.add_scaled_in_place(*w, o)?;
        }
        Ok(out)
    }

    /// Largest absolute coefficient difference over the union of variables.
    pub fn max_coeff_diff(&self, other: &Observable) -> f64 {
        let a = self
            .terms
            .iter()
            .map(|(v, t)| (t.coeff - other.coeff(*v)).abs());
        let b = other
            .terms
            .iter()
            .filter(|(v, _)| !self.terms.contains_key(v))
            .map(|(_, t)| t.coeff.abs());
        a.chain(b).fold(0.0, f64::max)
    }

    pub(crate) fn push_term(&mut self, var: NoiseVar, coeff: f64, variance: f64) {
        self.terms
            .entry(var)
            .and_modify(|e| e.coeff += coeff)
            .or_insert(Term { coeff, variance });
    }
}

/// One optical beam, linearized about its carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub(crate) plus: Observable,
    pub(crate) minus: Observable,
}

impl FieldState {
    pub fn from_quadratures(plus: Observable, minus: Observable) -> Result<Self> {
        if plus.basis != minus.basis {
            return Err(Error::BasisMismatch);
        }
        Ok(Self { plus, minus })
    }

    pub fn basis(&self) -> BasisId {
        self.plus.basis
    }

    pub fn quadrature(&self, quad: Quadrature) -> &Observable {
        match quad {
            Quadrature::Plus => &self.plus,
            Quadrature::Minus => &self.minus,
        }
    }

    pub fn mean(&self, quad: Quadrature) -> f64 {
        self.quadrature(quad).mean
    }

    pub fn mean_plus(&self) -> f64 {
        self.plus.mean
    }

    pub fn mean_minus(&self) -> f64 {
        self.minus.mean
    }

    /// Coefficient of base variable `var` in quadrature `quad` of this field.
    pub fn coeff(&self, quad: Quadrature, var: NoiseVar) -> f64 {
        self.quadrature(quad).coeff(var)
    }

    pub fn variance(&self, quad: Quadrature) -> f64 {
        self.quadrature(quad).variance()
    }

    pub fn covariance(&self, other: &FieldState, quad: Quadrature) -> Result<f64> {
        self.quadrature(quad).covariance(other.quadrature(quad))
    }

    pub fn references_mode(&self, mode: ModeId) -> bool {
        self.plus.references_mode(mode) || self.minus.references_mode(mode)
    }

    /// Scales the `X+` part (means and coefficients) by `sp` and `X-` by `sm`.
    pub fn scale_quadratures(&self, sp: f64, sm: f64) -> Self {
        Self {
            plus: self.plus.scaled(sp),
            minus: self.minus.scaled(sm),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.scale_quadratures(s, s)
    }

    /// Phase rotation `a → e^{iθ} a`:
    /// `X+ → cos θ X+ − sin θ X-`, `X- → sin θ X+ + cos θ X-`.
    pub fn rotated(&self, theta: f64) -> Self {
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        let plus = Observable::combine(&[(c, &self.plus), (-s, &self.minus)]);
        let minus = Observable::combine(&[(s, &self.plus), (c, &self.minus)]);
        Self {
            plus: plus.expect("quadratures share a basis"),
            minus: minus.expect("quadratures share a basis"),
        }
    }

    /// `Σ w_k·f_k`, applied identically to both quadratures.
    pub fn combine(parts: &[(f64, &FieldState)]) -> Result<Self> {
        let plus: Vec<_> = parts.iter().map(|(w, f)| (*w, &f.plus)).collect();
        let minus: Vec<_> = parts.iter().map(|(w, f)| (*w, &f.minus)).collect();
        Ok(Self {
            plus: Observable::combine(&plus)?,
            minus: Observable::combine(&minus)?,
        })
    }

    pub fn max_coeff_diff(&self, other: &FieldState) -> f64 {
        self.plus
            .max_coeff_diff(&other.plus)
            .max(self.minus.max_coeff_diff(&other.minus))
    }

    /// Means and all coefficients agree within [`COEFF_TOL`].
    pub fn approx_eq(&self, other: &FieldState) -> bool {
        self.basis() == other.basis()
            && (self.plus.mean - other.plus.mean).abs() <= COEFF_TOL
            && (self.minus.mean - other.minus.mean).abs() <= COEFF_TOL
            && self.max_coeff_diff(other) <= COEFF_TOL
    }

    /// Unit, uncorrelated quadrature variances: a coherent state.
    pub fn is_coherent(&self) -> bool {
        let cross = self.plus.covariance(&self.minus).unwrap_or(f64::NAN);
        (self.plus.variance() - 1.0).abs() <= COEFF_TOL
            && (self.minus.variance() - 1.0).abs() <= COEFF_TOL
            && cross.abs() <= COEFF_TOL
    }

    pub(crate) fn quadrature_mut(&mut self, quad: Quadrature) -> &mut Observable {
        match quad {
            Quadrature::Plus => &mut self.plus,
            Quadrature::Minus => &mut self.minus,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn register_rejects_bad_variances() {
        let mut b = NoiseBasis::new();
        assert!(matches!(
            b.register_mode(ModeKind::Vacuum, -1.0, 1.0),
            Err(Error::NegativeVariance { .. })
        ));
        assert!(matches!(
            b.register_mode(ModeKind::Squeezed, 0.5, 1.0),
            Err(Error::NotMinimumUncertainty { .. })
        ));
        assert!(matches!(
            b.register_mode(ModeKind::Vacuum, 2.0, 2.0),
            Err(Error::KindVariance { .. })
        ));
        assert!(matches!(
            b.register_mode(ModeKind::ClassicalModulation, 2.0, 3.0),
            Err(Error::KindVariance { .. })
        ));
        assert!(b.is_empty());
    }

    #[test]
    fn register_accepts_examples() {
        let mut b = NoiseBasis::new();
        let v = b.register_mode(ModeKind::Vacuum, 1.0, 1.0).unwrap();
        assert_eq!(v.index(), 0);
        let e = libm::exp(1.0);
        b.register_mode(ModeKind::Squeezed, 1.0 / e, e).unwrap();
        b.register_mode(ModeKind::ClassicalModulation, 100.0, 100.0)
            .unwrap();
        assert_eq!(b.len(), 3);
        let f = b.field_from_mode(v, 0.0, 0.0).unwrap();
        assert_eq!(f.variance(Quadrature::Plus), 1.0);
    }

    #[test]
    fn squeezed_field_variances() {
        let mut b = NoiseBasis::new();
        let s = b.squeezed(0.5).unwrap();
        let f = b.field_from_mode(s, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(f.variance(Quadrature::Plus), 0.367879, epsilon = 1e-6);
        assert_abs_diff_eq!(
            f.variance(Quadrature::Minus),
            core::f64::consts::E,
            epsilon = 1e-12
        );
    }

    #[test]
    fn coherent_secret_means() {
        let mut b = NoiseBasis::new();
        let f = b.coherent(4.0, 2.0);
        assert_eq!((f.mean_plus(), f.mean_minus()), (4.0, 2.0));
        assert!(f.is_coherent());
    }

    #[test]
    fn unknown_mode_rejected() {
        let mut other = NoiseBasis::new();
        let m = other.vacuum();
        let b = NoiseBasis::new();
        assert_eq!(b.field_from_mode(m, 0.0, 0.0), Err(Error::UnknownMode(m)));
    }

    #[test]
    fn balanced_mix_of_vacua_is_vacuum() {
        let mut b = NoiseBasis::new();
        let x = b.coherent(0.0, 0.0);
        let y = b.coherent(0.0, 0.0);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let f = FieldState::combine(&[(h, &x), (h, &y)]).unwrap();
        assert_abs_diff_eq!(f.variance(Quadrature::Plus), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.variance(Quadrature::Minus), 1.0, epsilon = 1e-15);
        assert_eq!(x.covariance(&y, Quadrature::Plus).unwrap(), 0.0);
    }

    #[test]
    fn covariance_across_bases_fails() {
        let mut b1 = NoiseBasis::new();
        let mut b2 = NoiseBasis::new();
        let x = b1.coherent(0.0, 0.0);
        let y = b2.coherent(0.0, 0.0);
        assert_eq!(
            x.covariance(&y, Quadrature::Plus),
            Err(Error::BasisMismatch)
        );
    }

    #[test]
    fn rotation_by_half_pi_swaps_quadratures() {
        let mut b = NoiseBasis::new();
        let s = b.squeezed(0.5).unwrap();
        let f = b.field_from_mode(s, 3.0, 1.0).unwrap();
        let g = f.rotated(core::f64::consts::FRAC_PI_2);
        assert_abs_diff_eq!(g.mean_plus(), -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.mean_minus(), 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            g.variance(Quadrature::Plus),
            libm::exp(1.0),
            epsilon = 1e-12
        );
    }
}
