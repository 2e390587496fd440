//! The contract shared by every additive noise distribution in the crate.

use rand::{Rng, RngCore};
use serde::Serialize;
use std::fmt::Debug;

use crate::error::{DpError, Result};
use crate::params::CostKind;

/// Closed interval `[lo, hi]` carrying the density; endpoints may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
}

impl Support {
    pub const REAL_LINE: Support = Support {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn symmetric(radius: f64) -> Self {
        Support {
            lo: -radius,
            hi: radius,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// A zero-mean, symmetric noise distribution added to a query answer.
///
/// Implementations reject NaN and infinite arguments to [`pdf`](Self::pdf)
/// and [`cdf`](Self::cdf), and arguments outside `(0, 1)` to
/// [`quantile`](Self::quantile).
pub trait NoiseMechanism: Debug + Send + Sync {
    fn name(&self) -> &'static str;

    fn pdf(&self, x: f64) -> Result<f64>;

    fn cdf(&self, x: f64) -> Result<f64>;

    fn quantile(&self, u: f64) -> Result<f64>;

    /// `P(X > x)`. Every density here is symmetric, so the default is `cdf(−x)`,
    /// which avoids the cancellation in `1 − cdf(x)`.
    fn upper_tail(&self, x: f64) -> Result<f64> {
        self.cdf(-x)
    }

    /// Probability of `[lo, hi]`; infinite endpoints are allowed.
    ///
    /// Evaluated on the far side of the mode so that cells deep in either tail
    /// keep their relative precision.
    fn mass_between(&self, lo: f64, hi: f64) -> Result<f64> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(DpError::domain(
                "interval",
                lo,
                "bounds must satisfy lo <= hi",
            ));
        }
        let below = |x: f64| -> Result<f64> {
            if x == f64::NEG_INFINITY {
                Ok(0.0)
            } else if x == f64::INFINITY {
                Ok(1.0)
            } else {
                self.cdf(x)
            }
        };
        let above = |x: f64| -> Result<f64> {
            if x == f64::NEG_INFINITY {
                Ok(1.0)
            } else if x == f64::INFINITY {
                Ok(0.0)
            } else {
                self.upper_tail(x)
            }
        };
        let m = if lo >= 0.0 {
            above(lo)? - above(hi)?
        } else if hi <= 0.0 {
            below(hi)? - below(lo)?
        } else {
            1.0 - below(lo)? - above(hi)?
        };
        Ok(m.max(0.0))
    }

    /// Probability of `[left, left + width]`.
    ///
    /// Densities with long stretches of constant decay rate override this to
    /// use `width` directly, so neighbouring cells see identical widths.
    fn cell_mass(&self, left: f64, width: f64) -> Result<f64> {
        self.mass_between(left, left + width)
    }

    /// `E|X|`.
    fn expected_amplitude(&self) -> f64;

    /// `E[X²]`.
    fn expected_power(&self) -> f64;

    fn expected_cost(&self, cost: CostKind) -> f64 {
        match cost {
            CostKind::Amplitude => self.expected_amplitude(),
            CostKind::Power => self.expected_power(),
        }
    }

    fn support(&self) -> Support;

    /// Smallest radius `r` with `P(|X| > r) <= tail`; the half-width for
    /// bounded supports.
    fn coverage_radius(&self, tail: f64) -> f64;

    /// Inverse-transform draw from one uniform of `rng`.
    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        let u: f64 = rng.gen();
        if u == 0.0 {
            let lo = self.support().lo;
            if lo.is_finite() {
                return lo;
            }
            return self
                .quantile(f64::MIN_POSITIVE)
                .expect("MIN_POSITIVE is a valid probability");
        }
        self.quantile(u).expect("uniform draw lies in (0, 1)")
    }
}

pub(crate) fn check_probability(u: f64) -> Result<f64> {
    if u > 0.0 && u < 1.0 {
        Ok(u)
    } else {
        Err(DpError::domain("u", u, "quantile level must lie in (0, 1)"))
    }
}
