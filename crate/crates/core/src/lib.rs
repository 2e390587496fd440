//! Noise mechanisms for approximate differential privacy.
//!
//! The centerpiece is the truncated Laplacian ([`TruncatedLaplace`]),
//! together with lower bounds on the minimum achievable noise cost
//! ([`bounds`]), comparison mechanisms ([`baselines`]), a brute-force
//! privacy checker ([`verifier`]) and grid sweeps ([`analysis`]).
//!
//! ```
//! use dpnl_core::{NoiseMechanism, PrivacyParams, Sensitivity, TruncatedLaplace};
//!
//! let params = PrivacyParams::new(1.0, 1e-5)?;
//! let tl = TruncatedLaplace::calibrate(params, Sensitivity::new(1.0)?);
//! assert!((tl.radius() - 11.3611).abs() < 1e-4);
//! assert!(tl.expected_amplitude() < 1.0);
//! # Ok::<(), dpnl_core::DpError>(())
//! ```

pub mod analysis;
pub mod baselines;
pub mod bounds;
pub mod error;
pub mod mechanism;
pub mod numeric;
pub mod params;
pub mod quad;
pub mod sampling;
pub mod stats;
pub mod trunclap;
pub mod verifier;

pub use analysis::{run_sweep, SweepConfig, SweepRow};
pub use baselines::{Gaussian, Laplace, UniformLimit};
pub use bounds::{bound_pair, BoundPair, LowerBoundParams};
pub use error::{DpError, Result};
pub use mechanism::{NoiseMechanism, Support};
pub use params::{validate, CostKind, PrivacyParams, Sensitivity};
pub use sampling::{noise_stream, NoiseRng};
pub use trunclap::TruncatedLaplace;
pub use verifier::{DiscretizedDist, ViolationReport};
