use crate::noise::{ModeId, ModeKind, Quadrature};

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("noise variances must be finite and non-negative (got {plus}, {minus})")]
    NegativeVariance { plus: f64, minus: f64 },

    #[error("squeezed mode must be minimum uncertainty, variance product is {product}")]
    NotMinimumUncertainty { product: f64 },

    #[error("{kind:?} mode requires variances ({expected_plus}, {expected_minus}), got ({plus}, {minus})")]
    KindVariance {
        kind: ModeKind,
        expected_plus: f64,
        expected_minus: f64,
        plus: f64,
        minus: f64,
    },

    #[error("mode {0:?} is not registered in this basis")]
    UnknownMode(ModeId),

    #[error("mode {mode:?} is a {found:?} mode, expected {expected:?}")]
    WrongModeKind {
        mode: ModeId,
        expected: ModeKind,
        found: ModeKind,
    },

    #[error("detector mode {0:?} is already referenced by the detected field")]
    DetectorModeInUse(ModeId),

    #[error("fields belong to different noise bases")]
    BasisMismatch,

    #[error("parameter `{name}` out of range: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("OPO at or above threshold: |gamma| = {gamma} >= kappa = {kappa}")]
    AboveThreshold { gamma: f64, kappa: f64 },

    #[error("secret must be a coherent state (unit, uncorrelated quadrature variances)")]
    NonCoherentSecret,

    #[error("signal transfer undefined in {0:?}: the secret carries no mean in that quadrature")]
    UndefinedTransfer(Quadrature),

    #[error("feedforward gain {gain} cannot be calibrated from a zero-efficiency detector")]
    GainCalibration { gain: f64 },

    #[error("no sign change of the objective on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
}
