//! Comparison mechanisms: the pure-ε Laplacian, the Gaussian under two
//! calibrations, and the uniform distribution reached as `ε → 0`.

mod gaussian;
mod laplace;
mod uniform;

pub use gaussian::{
    analytic_gaussian_sigma, classic_gaussian_sigma, gaussian_delta, gaussian_moments, Calibration,
    Gaussian, GaussianParams, RangeWarning,
};
pub use laplace::{laplace_mechanism, Laplace, LaplaceParams};
pub use uniform::{uniform_limit_mechanism, UniformLimit, UniformLimitParams};
