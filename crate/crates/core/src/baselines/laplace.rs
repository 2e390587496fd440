use serde::Serialize;

use crate::error::{finite, Result};
use crate::mechanism::{check_probability, NoiseMechanism, Support};
use crate::params::{check_epsilon, Sensitivity};

/// Laplacian noise with scale `λ = Δ/ε`, density `e^{−|x|/λ}/(2λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Laplace {
    pub lambda: f64,
}

pub type LaplaceParams = Laplace;

/// The ε-private Laplacian for sensitivity `Δ`. Spends no δ.
pub fn laplace_mechanism(epsilon: f64, sens: Sensitivity) -> Result<Laplace> {
    let epsilon = check_epsilon(epsilon)?;
    Ok(Laplace {
        lambda: sens.get() / epsilon,
    })
}

impl NoiseMechanism for Laplace {
    fn name(&self) -> &'static str {
        "laplace"
    }

    fn pdf(&self, x: f64) -> Result<f64> {
        let x = finite("x", x)?;
        Ok((-x.abs() / self.lambda).exp() / (2.0 * self.lambda))
    }

    fn cdf(&self, x: f64) -> Result<f64> {
        let x = finite("x", x)?;
        Ok(if x <= 0.0 {
            0.5 * (x / self.lambda).exp()
        } else {
            1.0 - 0.5 * (-x / self.lambda).exp()
        })
    }

    fn cell_mass(&self, left: f64, width: f64) -> Result<f64> {
        let left = finite("left", left)?;
        let right = left + width;
        let side = |a: f64| 0.5 * (-a / self.lambda).exp() * -(-width / self.lambda).exp_m1();
        Ok(if left >= 0.0 {
            side(left)
        } else if right <= 0.0 {
            side(-right)
        } else {
            1.0 - 0.5 * (left / self.lambda).exp() - 0.5 * (-right / self.lambda).exp()
        })
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        let u = check_probability(u)?;
        Ok(if u <= 0.5 {
            self.lambda * (2.0 * u).ln()
        } else {
            -self.lambda * (2.0 * (1.0 - u)).ln()
        })
    }

    fn expected_amplitude(&self) -> f64 {
        self.lambda
    }

    fn expected_power(&self) -> f64 {
        2.0 * self.lambda * self.lambda
    }

    fn support(&self) -> Support {
        Support::REAL_LINE
    }

    fn coverage_radius(&self, tail: f64) -> f64 {
        -self.lambda * tail.ln()
    }
}
