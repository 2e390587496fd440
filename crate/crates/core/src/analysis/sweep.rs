use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{analytic_gaussian_sigma, classic_gaussian_sigma};
use crate::bounds::LowerBoundParams;
use crate::error::{DpError, Result};
use crate::mechanism::NoiseMechanism;
use crate::params::{CostKind, PrivacyParams, Sensitivity};
use crate::trunclap::TruncatedLaplace;

/// Evenly spaced values between `lo` and `hi` inclusive, optionally in log
/// space. One point requires `lo = hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub log: bool,
}

impl AxisRange {
    pub fn new(lo: f64, hi: f64, points: usize, log: bool) -> Result<Self> {
        if !(lo > 0.0 && lo.is_finite()) {
            return Err(DpError::domain("range.lo", lo, "must be positive"));
        }
        if points == 0 {
            return Err(DpError::domain(
                "range.points",
                0.0,
                "need at least 1 point",
            ));
        }
        // a single point is the degenerate range lo = hi
        let ordered = if points == 1 {
            hi == lo
        } else {
            hi > lo && hi.is_finite()
        };
        if !ordered {
            let reason = if points == 1 {
                "must equal range.lo for a single point"
            } else {
                "must exceed range.lo"
            };
            return Err(DpError::domain("range.hi", hi, reason));
        }
        Ok(Self {
            lo,
            hi,
            points,
            log,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|k| {
                if k == 0 {
                    return self.lo;
                }
                if k == last {
                    return self.hi;
                }
                let t = k as f64 / last as f64;
                if self.log {
                    let (a, b) = (self.lo.log10(), self.hi.log10());
                    10f64.powf(a + t * (b - a))
                } else {
                    self.lo + t * (self.hi - self.lo)
                }
            })
            .collect()
    }
}

/// Which staircase length feeds `q_lower`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NMode {
    Fractional,
    Floor,
    /// `q_lower` at the real root plus a `q_lower_floor` column.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub eps_range: AxisRange,
    pub delta_range: AxisRange,
    pub delta_f: Sensitivity,
    pub cost: CostKind,
    pub n_mode: NMode,
}

impl Default for SweepConfig {
    /// 20×20 log grid over `ε ∈ [1e-4, 10]`, `δ ∈ [1e-6, 0.1]`, amplitude.
    fn default() -> Self {
        Self {
            eps_range: AxisRange {
                lo: 1e-4,
                hi: 10.0,
                points: 20,
                log: true,
            },
            delta_range: AxisRange {
                lo: 1e-6,
                hi: 0.1,
                points: 20,
                log: true,
            },
            delta_f: Sensitivity::new(1.0).expect("1 is a valid sensitivity"),
            cost: CostKind::Amplitude,
            n_mode: NMode::Fractional,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let e = self.eps_range;
        let d = self.delta_range;
        AxisRange::new(e.lo, e.hi, e.points, e.log)?;
        AxisRange::new(d.lo, d.hi, d.points, d.log)?;
        if d.hi >= 0.5 {
            return Err(DpError::domain("delta_range.hi", d.hi, "must be below 1/2"));
        }
        Ok(())
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub delta: f64,
    pub q_lower: f64,
    pub q_upper: f64,
    pub tl_cost: f64,
    pub gauss_classic: f64,
    pub gauss_analytic: f64,
    pub ratio_bounds: f64,
    pub ratio_tl_gauss: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_lower_floor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

fn gaussian_cost(sigma: f64, cost: CostKind) -> f64 {
    match cost {
        CostKind::Amplitude => sigma * std::f64::consts::FRAC_2_PI.sqrt(),
        CostKind::Power => sigma * sigma,
    }
}

fn evaluate(epsilon: f64, delta: f64, cfg: &SweepConfig) -> Result<SweepRow> {
    let params = PrivacyParams::new(epsilon, delta)?;
    let sens = cfg.delta_f;
    let cost = cfg.cost;
    let tl_cost = TruncatedLaplace::calibrate(params, sens).expected_cost(cost);
    let lbp = LowerBoundParams::new(params, sens);
    let frac = lbp.bound_at(cost, lbp.n_frac);
    let floor = lbp.bound_at(cost, lbp.n_floor as f64);
    let q_lower = match cfg.n_mode {
        NMode::Floor => floor,
        NMode::Fractional | NMode::Both => frac,
    };
    let mut warnings = Vec::new();
    let (classic, range) = classic_gaussian_sigma(params, sens);
    if let Some(w) = range {
        warnings.push(w.to_string());
    }
    let gauss_analytic = match analytic_gaussian_sigma(params, sens) {
        Ok(g) => gaussian_cost(g.sigma, cost),
        Err(e) => {
            warnings.push(e.to_string());
            f64::NAN
        }
    };
    Ok(SweepRow {
        epsilon,
        delta,
        q_lower,
        q_upper: tl_cost,
        tl_cost,
        gauss_classic: gaussian_cost(classic.sigma, cost),
        gauss_analytic,
        ratio_bounds: q_lower / tl_cost,
        ratio_tl_gauss: tl_cost / gauss_analytic,
        q_lower_floor: (cfg.n_mode == NMode::Both).then_some(floor),
        warning: (!warnings.is_empty()).then(|| warnings.join("; ")),
    })
}

/// Evaluates every grid point, `ε` outer and `δ` inner.
///
/// Only an invalid configuration is an error; problems at a single point
/// are recorded in that row's `warning`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let deltas = cfg.delta_range.values();
    let grid: Vec<(f64, f64)> = cfg
        .eps_range
        .values()
        .into_iter()
        .flat_map(|e| deltas.iter().map(move |&d| (e, d)))
        .collect();
    Ok(grid
        .into_par_iter()
        .map(|(e, d)| {
            evaluate(e, d, cfg).unwrap_or_else(|err| SweepRow {
                epsilon: e,
                delta: d,
                q_lower: f64::NAN,
                q_upper: f64::NAN,
                tl_cost: f64::NAN,
                gauss_classic: f64::NAN,
                gauss_analytic: f64::NAN,
                ratio_bounds: f64::NAN,
                ratio_tl_gauss: f64::NAN,
                q_lower_floor: None,
                warning: Some(err.to_string()),
            })
        })
        .collect())
}
