//! Privacy parameters, query sensitivity and the cost selector.
//!
//! Both [`PrivacyParams`] and [`Sensitivity`] can only be built through
//! validating constructors, so every downstream calibration routine receives
//! parameters that already satisfy `ε > 0`, `0 < δ < 1/2` and `Δ > 0`.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{DpError, Result};

/// An `(ε, δ)` pair with `ε > 0` and `0 < δ < 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrivacyParams {
    epsilon: f64,
    delta: f64,
}

impl PrivacyParams {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        check_delta(delta)?;
        Ok(Self { epsilon, delta })
    }

    #[inline]
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    #[inline]
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Splits the budget evenly in two, as needed for a two-part release.
    pub fn halved(&self) -> Self {
        Self {
            epsilon: self.epsilon / 2.0,
            delta: self.delta / 2.0,
        }
    }
}

impl<'de> Deserialize<'de> for PrivacyParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            epsilon: f64,
            delta: f64,
        }
        let raw = Raw::deserialize(d)?;
        PrivacyParams::new(raw.epsilon, raw.delta).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for PrivacyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(ε={}, δ={})", self.epsilon, self.delta)
    }
}

/// Global L1 sensitivity `Δ > 0` of a real-valued query.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Sensitivity(f64);

impl Sensitivity {
    pub fn new(delta_f: f64) -> Result<Self> {
        if delta_f.is_finite() && delta_f > 0.0 {
            Ok(Self(delta_f))
        } else {
            Err(DpError::domain(
                "sensitivity",
                delta_f,
                "must be positive and finite",
            ))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl<'de> Deserialize<'de> for Sensitivity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Sensitivity::new(f64::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Which expected loss is being measured: `E|X|` or `E[X²]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostKind {
    Amplitude,
    Power,
}

impl CostKind {
    /// The loss function `|x|` or `x²`.
    pub fn loss(self, x: f64) -> f64 {
        match self {
            CostKind::Amplitude => x.abs(),
            CostKind::Power => x * x,
        }
    }
}

impl fmt::Display for CostKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CostKind::Amplitude => "amplitude",
            CostKind::Power => "power",
        })
    }
}

/// Validates a raw `(ε, δ, Δ)` triple, reporting the first violated
/// constraint in that order.
pub fn validate(epsilon: f64, delta: f64, delta_f: f64) -> Result<(PrivacyParams, Sensitivity)> {
    let params = PrivacyParams::new(epsilon, delta)?;
    let sens = Sensitivity::new(delta_f)?;
    Ok((params, sens))
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<f64> {
    if epsilon.is_finite() && epsilon > 0.0 {
        Ok(epsilon)
    } else {
        Err(DpError::domain(
            "epsilon",
            epsilon,
            "must be positive and finite",
        ))
    }
}

pub(crate) fn check_delta(delta: f64) -> Result<f64> {
    if delta > 0.0 && delta < 0.5 {
        Ok(delta)
    } else {
        Err(DpError::domain(
            "delta",
            delta,
            "must lie strictly between 0 and 1/2",
        ))
    }
}
