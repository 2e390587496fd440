//! Building a noise mechanism from command-line choices.

use anyhow::{bail, Result};
use clap::ValueEnum;
use dpnl_core::baselines::{
    analytic_gaussian_sigma, classic_gaussian_sigma, laplace_mechanism, uniform_limit_mechanism,
};
use dpnl_core::{NoiseMechanism, PrivacyParams, Sensitivity, TruncatedLaplace};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mech {
    Trunclap,
    Laplace,
    GaussianClassic,
    #[value(alias = "gaussian")]
    GaussianAnalytic,
    Uniform,
}

/// A calibrated mechanism together with its parameters as JSON.
pub struct Built {
    pub mechanism: Box<dyn NoiseMechanism>,
    pub parameters: Value,
    pub warning: Option<String>,
}

fn need(name: &str, v: Option<f64>, mech: Mech) -> Result<f64> {
    match v {
        Some(x) => Ok(x),
        None => bail!(
            "--{name} is required for --mech {}",
            mech.to_possible_value().unwrap().get_name()
        ),
    }
}

/// Calibrates `mech`. Laplace ignores δ and the uniform limit ignores ε.
pub fn build(mech: Mech, eps: Option<f64>, delta: Option<f64>, sens: Sensitivity) -> Result<Built> {
    let pair = || -> Result<PrivacyParams> {
        Ok(PrivacyParams::new(
            need("eps", eps, mech)?,
            need("delta", delta, mech)?,
        )?)
    };
    let built = match mech {
        Mech::Trunclap => {
            let tl = TruncatedLaplace::calibrate(pair()?, sens);
            Built {
                parameters: serde_json::to_value(tl)?,
                mechanism: Box::new(tl),
                warning: None,
            }
        }
        Mech::Laplace => {
            let lap = laplace_mechanism(need("eps", eps, mech)?, sens)?;
            Built {
                parameters: serde_json::to_value(lap)?,
                mechanism: Box::new(lap),
                warning: None,
            }
        }
        Mech::GaussianClassic => {
            let (g, w) = classic_gaussian_sigma(pair()?, sens);
            Built {
                parameters: json!({ "sigma": g.sigma }),
                mechanism: Box::new(g),
                warning: w.map(|w| w.to_string()),
            }
        }
        Mech::GaussianAnalytic => {
            let g = analytic_gaussian_sigma(pair()?, sens)?;
            Built {
                parameters: json!({ "sigma": g.sigma }),
                mechanism: Box::new(g),
                warning: None,
            }
        }
        Mech::Uniform => {
            let u = uniform_limit_mechanism(need("delta", delta, mech)?, sens)?;
            Built {
                parameters: serde_json::to_value(u)?,
                mechanism: Box::new(u),
                warning: None,
            }
        }
    };
    Ok(built)
}

/// δ actually spent by `mech` when calibrated at `delta`.
pub fn delta_spent(mech: Mech, delta: f64) -> f64 {
    match mech {
        Mech::Laplace => 0.0,
        _ => delta,
    }
}
