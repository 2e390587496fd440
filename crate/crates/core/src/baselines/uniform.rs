use serde::Serialize;

use crate::error::{finite, Result};
use crate::mechanism::{check_probability, NoiseMechanism, Support};
use crate::params::{check_delta, Sensitivity};

/// Uniform noise on `[−Δ/(2δ), Δ/(2δ)]`, the truncated Laplacian at `ε → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformLimit {
    pub half_width: f64,
}

pub type UniformLimitParams = UniformLimit;

pub fn uniform_limit_mechanism(delta: f64, sens: Sensitivity) -> Result<UniformLimit> {
    let delta = check_delta(delta)?;
    Ok(UniformLimit {
        half_width: sens.get() / (2.0 * delta),
    })
}

impl NoiseMechanism for UniformLimit {
    fn name(&self) -> &'static str {
        "uniform"
    }

    fn pdf(&self, x: f64) -> Result<f64> {
        let x = finite("x", x)?;
        Ok(if x.abs() <= self.half_width {
            0.5 / self.half_width
        } else {
            0.0
        })
    }

    fn cdf(&self, x: f64) -> Result<f64> {
        let x = finite("x", x)?;
        let w = self.half_width;
        Ok(((x + w) / (2.0 * w)).clamp(0.0, 1.0))
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        let u = check_probability(u)?;
        Ok((2.0 * u - 1.0) * self.half_width)
    }

    fn expected_amplitude(&self) -> f64 {
        self.half_width / 2.0
    }

    fn expected_power(&self) -> f64 {
        self.half_width * self.half_width / 3.0
    }

    fn support(&self) -> Support {
        Support::symmetric(self.half_width)
    }

    fn coverage_radius(&self, _tail: f64) -> f64 {
        self.half_width
    }
}
