//! The non-query subcommands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use dpnl_core::analysis::{emit, emit_svg, run_sweep, AxisRange, Format, SweepConfig};
use dpnl_core::baselines::Gaussian;
use dpnl_core::bounds::{bound_pair, LowerBoundParams};
use dpnl_core::sampling::{entropy_stream, noise_stream, NoiseRng};
use dpnl_core::verifier::{discretize, dp_check};
use dpnl_core::{CostKind, NoiseMechanism, PrivacyParams, Sensitivity};
use serde_json::json;

use crate::args::{BoundsArgs, CalibrateArgs, SampleArgs, SweepArgs, VerifyArgs};
use crate::mech::{build, Mech};

pub fn print_json(v: &serde_json::Value) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn stream(seed: Option<u64>, id: u64) -> NoiseRng {
    match seed {
        Some(s) => noise_stream(s, id),
        None => entropy_stream(),
    }
}

pub fn calibrate(a: &CalibrateArgs) -> Result<()> {
    let sens = Sensitivity::new(a.mech.sens)?;
    let b = build(a.mech.mech, a.mech.eps, a.mech.delta, sens)?;
    let mut v = json!({
        "mechanism": b.mechanism.name(),
        "parameters": b.parameters,
        "expected_amplitude": b.mechanism.expected_amplitude(),
        "expected_power": b.mechanism.expected_power(),
    });
    if let Some(w) = b.warning {
        eprintln!("warning: {w}");
        v["warning"] = w.into();
    }
    print_json(&v)
}

pub fn sample(a: &SampleArgs) -> Result<()> {
    if a.n == 0 {
        bail!("--n must be at least 1");
    }
    let sens = Sensitivity::new(a.mech.sens)?;
    let b = build(a.mech.mech, a.mech.eps, a.mech.delta, sens)?;
    let mut rng = stream(a.seed, 0);
    let mut out = sink(a.out.as_deref())?;
    for _ in 0..a.n {
        writeln!(out, "{:?}", b.mechanism.sample(&mut rng))?;
    }
    out.flush()?;
    Ok(())
}

pub fn bounds(a: &BoundsArgs) -> Result<()> {
    let params = PrivacyParams::new(a.eps, a.delta)?;
    let sens = Sensitivity::new(a.sens)?;
    let cost: CostKind = a.cost.into();
    let pair = bound_pair(params, sens, cost)?;
    let lbp = LowerBoundParams::new(params, sens);
    let lower = match a.n_mode {
        crate::args::NModeArg::Floor => pair.lower_floor,
        _ => pair.lower,
    };
    print_json(&json!({
        "epsilon": a.eps,
        "delta": a.delta,
        "sensitivity": a.sens,
        "cost": cost,
        "lower": lower,
        "upper": pair.upper,
        "ratio": lower / pair.upper,
        "lower_n_frac": pair.lower,
        "lower_n_floor": pair.lower_floor,
        "n_frac": lbp.n_frac,
        "n_floor": lbp.n_floor,
    }))
}

/// Returns whether the check passed.
pub fn verify(a: &VerifyArgs) -> Result<bool> {
    let sens = Sensitivity::new(a.mech.sens)?;
    let Some(delta) = a.mech.delta else {
        bail!("--delta is required for verify");
    };
    let Some(eps) = a.mech.eps else {
        bail!("--eps is required for verify");
    };
    let built = build(a.mech.mech, Some(eps), Some(delta), sens)?;
    let mechanism: Box<dyn NoiseMechanism> = match (a.sigma_scale, a.mech.mech) {
        (None, _) => built.mechanism,
        (Some(k), Mech::GaussianAnalytic | Mech::GaussianClassic) => {
            let sigma = built.parameters["sigma"]
                .as_f64()
                .expect("gaussian parameters carry sigma");
            let calibration = match a.mech.mech {
                Mech::GaussianClassic => dpnl_core::baselines::Calibration::Classic,
                _ => dpnl_core::baselines::Calibration::Analytic,
            };
            Box::new(Gaussian::new(sigma, calibration)?.scaled(k)?)
        }
        (Some(_), _) => bail!("--sigma-scale applies only to Gaussian mechanisms"),
    };
    let h = a.grid_step.unwrap_or(sens.get() / 1000.0);
    let target = PrivacyParams::new(eps, a.check_delta.unwrap_or(delta))?;
    let dist = discretize(mechanism.as_ref(), sens, h)?;
    let report = dp_check(&dist, target);
    let mut v = serde_json::to_value(&report)?;
    v["mechanism"] = mechanism.name().into();
    print_json(&v)?;
    Ok(report.pass)
}

pub fn sweep(a: &SweepArgs) -> Result<()> {
    let cfg = SweepConfig {
        eps_range: AxisRange::new(a.eps_lo, a.eps_hi, a.eps_points, a.log_spacing)?,
        delta_range: AxisRange::new(a.delta_lo, a.delta_hi, a.delta_points, a.log_spacing)?,
        delta_f: Sensitivity::new(a.sens)?,
        cost: a.cost.into(),
        n_mode: a.n_mode.into(),
    };
    let rows = run_sweep(&cfg)?;
    let mut out = sink(a.out.as_deref())?;
    match Format::from(a.format) {
        Format::Svg => emit_svg(&rows, a.column.into(), &mut out)?,
        f => emit(&rows, f, &mut out)?,
    }
    out.flush()?;
    Ok(())
}
