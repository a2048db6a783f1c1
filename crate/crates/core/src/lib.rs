//! Linear Gaussian simulation of continuous-variable (2,3) threshold quantum
//! secret sharing.
//!
//! Fields are tracked exactly as linear combinations of independent noise
//! variables ([`noise`]), transformed by optical components ([`optics`]),
//! entangled by EPR sources ([`entanglement`]), split and reconstructed by the
//! dealer and player procedures ([`protocol`]), and scored by fidelity and
//! T-V measures ([`metrics`]).
//!
//! ```
//! use cvqss_core::noise::NoiseBasis;
//! use cvqss_core::protocol::{deal, reconstruct_12, DealerConfig};
//! use cvqss_core::metrics::tv_point;
//!
//! let mut basis = NoiseBasis::new();
//! let secret = basis.coherent(4.0, 2.0);
//! let shares = deal(&mut basis, &secret, &DealerConfig::new(0.5, 100.0)).unwrap();
//! let out = reconstruct_12(&shares).unwrap();
//! let tv = tv_point(&secret, &out).unwrap();
//! assert!((tv.t_q - 2.0).abs() < 1e-12 && tv.v_q < 1e-12);
//! ```
#![no_std]

extern crate alloc;

pub mod entanglement;
pub mod error;
pub mod metrics;
pub mod noise;
pub mod optics;
pub mod protocol;
pub mod search;

pub use error::{Error, Result};
pub use metrics::{Metrics, TvPoint};
pub use noise::{FieldState, ModeId, NoiseBasis, NoiseVar, Observable, Quadrature};
