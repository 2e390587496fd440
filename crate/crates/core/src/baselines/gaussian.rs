use std::f64::consts::{FRAC_2_PI, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{finite, DpError, Result};
use crate::mechanism::{check_probability, NoiseMechanism, Support};
use crate::numeric::{normal_cdf, normal_quantile};
use crate::params::{PrivacyParams, Sensitivity};

/// Doublings of the upper bracket before the analytic calibration gives up.
const MAX_DOUBLINGS: usize = 200;
/// Relative width at which bisection on σ stops.
const SIGMA_RTOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Calibration {
    /// `σ = Δ·√(2 ln(1.25/δ))/ε`.
    Classic,
    /// Smallest σ meeting the exact Gaussian privacy curve.
    Analytic,
}

/// Centered Gaussian noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gaussian {
    pub sigma: f64,
    pub calibration: Calibration,
}

pub type GaussianParams = Gaussian;

/// The classic bound was proved only for `ε < 1`; its σ is still returned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeWarning {
    pub epsilon: f64,
}

impl fmt::Display for RangeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "classic Gaussian calibration is only guaranteed for epsilon < 1 (got {})",
            self.epsilon
        )
    }
}

impl Gaussian {
    pub fn new(sigma: f64, calibration: Calibration) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(DpError::domain(
                "sigma",
                sigma,
                "must be positive and finite",
            ));
        }
        Ok(Self { sigma, calibration })
    }

    /// The same distribution with σ multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.sigma * factor, self.calibration)
    }
}

pub fn classic_gaussian_sigma(
    params: PrivacyParams,
    sens: Sensitivity,
) -> (Gaussian, Option<RangeWarning>) {
    let eps = params.epsilon();
    let sigma = sens.get() * (2.0 * (1.25 / params.delta()).ln()).sqrt() / eps;
    let warning = (eps >= 1.0).then_some(RangeWarning { epsilon: eps });
    (
        Gaussian {
            sigma,
            calibration: Calibration::Classic,
        },
        warning,
    )
}

/// Worst-case δ of Gaussian noise with deviation σ at privacy loss ε:
/// `Φ(Δ/2σ − εσ/Δ) − e^ε·Φ(−Δ/2σ − εσ/Δ)`.
pub fn gaussian_delta(sigma: f64, epsilon: f64, sens: Sensitivity) -> f64 {
    let d = sens.get();
    let u = d / (2.0 * sigma);
    let v = epsilon * sigma / d;
    let second = normal_cdf(-u - v);
    let scaled = if second > 0.0 {
        (epsilon + second.ln()).exp()
    } else {
        0.0
    };
    normal_cdf(u - v) - scaled
}

/// Smallest σ with `gaussian_delta(σ) <= δ`, by bisection.
pub fn analytic_gaussian_sigma(params: PrivacyParams, sens: Sensitivity) -> Result<Gaussian> {
    let (eps, delta) = (params.epsilon(), params.delta());
    let private = |s: f64| gaussian_delta(s, eps, sens) <= delta;
    let mut lo = sens.get() * 1e-6 / eps;
    let mut hi = sens.get() / eps;
    let mut doublings = 0;
    while !private(hi) {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > MAX_DOUBLINGS || !hi.is_finite() {
            return Err(DpError::Convergence {
                routine: "analytic_gaussian_sigma",
                detail: format!("no private sigma found below {hi:e} at {params}"),
            });
        }
    }
    if private(lo) {
        return Gaussian::new(lo, Calibration::Analytic);
    }
    while hi - lo > SIGMA_RTOL * hi {
        let mid = 0.5 * (lo + hi);
        if private(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Gaussian::new(hi, Calibration::Analytic)
}

/// `(E|X|, E[X²]) = (σ√(2/π), σ²)`.
pub fn gaussian_moments(g: &Gaussian) -> (f64, f64) {
    (g.sigma * FRAC_2_PI.sqrt(), g.sigma * g.sigma)
}

impl NoiseMechanism for Gaussian {
    fn name(&self) -> &'static str {
        match self.calibration {
            Calibration::Classic => "gaussian-classic",
            Calibration::Analytic => "gaussian-analytic",
        }
    }

    fn pdf(&self, x: f64) -> Result<f64> {
        let z = finite("x", x)? / self.sigma;
        Ok((-0.5 * z * z).exp() / (self.sigma * (2.0 * PI).sqrt()))
    }

    fn cdf(&self, x: f64) -> Result<f64> {
        Ok(normal_cdf(finite("x", x)? / self.sigma))
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        Ok(self.sigma * normal_quantile(check_probability(u)?))
    }

    fn expected_amplitude(&self) -> f64 {
        gaussian_moments(self).0
    }

    fn expected_power(&self) -> f64 {
        gaussian_moments(self).1
    }

    fn support(&self) -> Support {
        Support::REAL_LINE
    }

    fn coverage_radius(&self, tail: f64) -> f64 {
        -self.sigma * normal_quantile(0.5 * tail)
    }
}
