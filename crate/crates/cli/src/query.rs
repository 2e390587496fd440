//! Noisy count, sum and mean over one CSV column.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use dpnl_core::{PrivacyParams, Sensitivity};
use serde_json::json;

use crate::args::{Aggregate, QueryArgs};
use crate::commands::{print_json, stream};
use crate::ledger::{BudgetLedger, LedgerEntry};
use crate::mech::{build, delta_spent, Mech};

/// Relative slack when comparing spent budget against a cap.
const CAP_RTOL: f64 = 1e-12;

/// Raised when a query would exceed the configured budget cap.
#[derive(Debug)]
pub struct BudgetExceeded(pub String);

impl std::fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BudgetExceeded {}

/// Row count and, when `column` is given, its values clipped to `clip`.
fn read_column(
    path: &Path,
    column: Option<&str>,
    clip: Option<(f64, f64)>,
) -> Result<(usize, Vec<f64>)> {
    let mut rdr =
        csv::Reader::from_path(path).with_context(|| format!("cannot read {}", path.display()))?;
    let idx = match column {
        Some(name) => {
            let headers = rdr
                .headers()
                .with_context(|| format!("{} has no header row", path.display()))?;
            let Some(i) = headers.iter().position(|h| h == name) else {
                bail!("column `{name}` not found in {}", path.display());
            };
            Some(i)
        }
        None => None,
    };
    let mut rows = 0;
    let mut values = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.with_context(|| format!("{}: bad record {}", path.display(), line + 2))?;
        rows += 1;
        if let (Some(i), Some((lo, hi))) = (idx, clip) {
            let cell = rec.get(i).unwrap_or("").trim();
            let Ok(x) = cell.parse::<f64>() else {
                bail!(
                    "{}: row {} has non-numeric value `{cell}`",
                    path.display(),
                    line + 2
                );
            };
            if !x.is_finite() {
                bail!(
                    "{}: row {} has non-finite value `{cell}`",
                    path.display(),
                    line + 2
                );
            }
            values.push(x.clamp(lo, hi));
        }
    }
    Ok((rows, values))
}

fn noisy(
    mech: Mech,
    eps: f64,
    delta: Option<f64>,
    sens: f64,
    value: f64,
    seed: Option<u64>,
    id: u64,
) -> Result<f64> {
    let b = build(mech, Some(eps), delta, Sensitivity::new(sens)?)?;
    Ok(value + b.mechanism.sample(&mut stream(seed, id)))
}

pub fn run(a: &QueryArgs) -> Result<()> {
    if a.mech == Mech::Uniform {
        bail!("--mech uniform is not offered for queries");
    }
    let delta = match (a.mech, a.delta) {
        (Mech::Laplace, _) => None,
        (_, Some(d)) => Some(d),
        (_, None) => bail!("--delta is required unless --mech laplace"),
    };
    // validates ε and δ before anything is read or spent
    PrivacyParams::new(a.eps, delta.unwrap_or(0.25))?;
    let clip = match (a.clip_lo, a.clip_hi) {
        (Some(lo), Some(hi)) if lo < hi => Some((lo, hi)),
        (Some(_), Some(_)) => bail!("--clip-lo must be below --clip-hi"),
        (None, None) => None,
        _ => bail!("--clip-lo and --clip-hi go together"),
    };
    let needs_values = !matches!(a.aggregate, Aggregate::Count);
    if needs_values && (clip.is_none() || a.column.is_none()) {
        bail!("sum and mean need --column, --clip-lo and --clip-hi");
    }

    let eps_spent = a.eps;
    let delta_total = delta_spent(a.mech, delta.unwrap_or(0.0));
    let mut ledger = BudgetLedger::open(&a.ledger)?;
    let before = ledger.totals();
    if let Some(cap) = a.max_eps {
        if before.epsilon + eps_spent > cap * (1.0 + CAP_RTOL) {
            return Err(BudgetExceeded(format!(
                "epsilon budget exceeded: spent {} + {eps_spent} > cap {cap}",
                before.epsilon
            ))
            .into());
        }
    }
    if let Some(cap) = a.max_delta {
        if before.delta + delta_total > cap * (1.0 + CAP_RTOL) {
            return Err(BudgetExceeded(format!(
                "delta budget exceeded: spent {} + {delta_total} > cap {cap}",
                before.delta
            ))
            .into());
        }
    }

    let (rows, values) = read_column(
        &a.input,
        a.column.as_deref(),
        if needs_values { clip } else { None },
    )?;
    let sum_sens = clip.map(|(lo, hi): (f64, f64)| lo.abs().max(hi.abs()));
    let noisy_value = match a.aggregate {
        Aggregate::Count => noisy(a.mech, a.eps, delta, 1.0, rows as f64, a.seed, 0)?,
        Aggregate::Sum => {
            let s: f64 = values.iter().sum();
            noisy(
                a.mech,
                a.eps,
                delta,
                sum_sens.expect("checked above"),
                s,
                a.seed,
                0,
            )?
        }
        Aggregate::Mean => {
            // even split between the two sub-queries
            let (e2, d2) = (a.eps / 2.0, delta.map(|d| d / 2.0));
            let s: f64 = values.iter().sum();
            let num = noisy(
                a.mech,
                e2,
                d2,
                sum_sens.expect("checked above"),
                s,
                a.seed,
                0,
            )?;
            let den = noisy(a.mech, e2, d2, 1.0, rows as f64, a.seed, 1)?;
            num / den.max(1.0)
        }
    };

    let query_id =
        a.id.clone()
            .unwrap_or_else(|| format!("q{}", ledger.entries().len() + 1));
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    ledger.append(LedgerEntry {
        query_id: query_id.clone(),
        epsilon: eps_spent,
        delta: delta_total,
        timestamp,
    })?;
    let totals = ledger.totals();
    print_json(&json!({
        "query_id": query_id,
        "noisy_value": noisy_value,
        "epsilon_spent": eps_spent,
        "delta_spent": delta_total,
        "total_epsilon": totals.epsilon,
        "total_delta": totals.delta,
    }))
}
