use serde::{Deserialize, Serialize};

use crate::bounds::bound_pair;
use crate::error::Result;
use crate::params::{CostKind, PrivacyParams, Sensitivity};

/// Direction in which the bounds are driven together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `ε → 0` at fixed `δ`.
    EpsToZero,
    /// `δ → 0` at fixed `ε`.
    DeltaToZero,
    /// `ε = δ → 0`.
    Diagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TightnessPoint {
    /// Value of the parameter being sent to zero.
    pub parameter: f64,
    pub epsilon: f64,
    pub delta: f64,
    /// `lower / upper` at the real staircase root.
    pub ratio: f64,
    pub limit: f64,
    /// Whether the gap to `limit` did not grow since the previous point.
    pub approaching: bool,
}

/// Limit of `lower / upper` in `regime`; `anchor` is the parameter held fixed.
pub fn limit_prediction(regime: Regime, cost: CostKind, anchor: f64) -> f64 {
    match (regime, cost) {
        (Regime::Diagonal, _) => 1.0,
        (Regime::EpsToZero, CostKind::Amplitude) => 1.0 - 2.0 * anchor,
        (Regime::EpsToZero, CostKind::Power) => (1.0 - anchor) * (1.0 - 2.0 * anchor),
        (Regime::DeltaToZero, CostKind::Amplitude) => anchor / anchor.exp_m1(),
        (Regime::DeltaToZero, CostKind::Power) => {
            anchor * anchor * (1.0 + anchor.exp()) / (2.0 * anchor.exp_m1().powi(2))
        }
    }
}

/// Default sequence of the vanishing parameter for each regime.
fn default_steps(regime: Regime) -> Vec<f64> {
    let decades = match regime {
        Regime::EpsToZero => 1..=7,
        Regime::DeltaToZero => 2..=12,
        Regime::Diagonal => 1..=6,
    };
    decades.map(|k| 10f64.powi(-k)).collect()
}

/// [`tightness_curve_at`] on decades: `ε` from 1e-1 to 1e-7, `δ` from 1e-2
/// to 1e-12, or `ε = δ` from 1e-1 to 1e-6. `anchor` is ignored on the diagonal.
pub fn tightness_curve(regime: Regime, cost: CostKind, anchor: f64) -> Result<Vec<TightnessPoint>> {
    tightness_curve_at(regime, cost, anchor, &default_steps(regime))
}

/// Ratio of the bounds at each value of the vanishing parameter, with unit
/// sensitivity.
pub fn tightness_curve_at(
    regime: Regime,
    cost: CostKind,
    anchor: f64,
    steps: &[f64],
) -> Result<Vec<TightnessPoint>> {
    let sens = Sensitivity::new(1.0)?;
    let limit = limit_prediction(regime, cost, anchor);
    let mut out: Vec<TightnessPoint> = Vec::with_capacity(steps.len());
    for &t in steps {
        let (epsilon, delta) = match regime {
            Regime::EpsToZero => (t, anchor),
            Regime::DeltaToZero => (anchor, t),
            Regime::Diagonal => (t, t),
        };
        let pair = bound_pair(PrivacyParams::new(epsilon, delta)?, sens, cost)?;
        let ratio = pair.ratio();
        let approaching = out
            .last()
            .is_none_or(|prev| (ratio - limit).abs() <= (prev.ratio - limit).abs());
        out.push(TightnessPoint {
            parameter: t,
            epsilon,
            delta,
            ratio,
            limit,
            approaching,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits() {
        assert!(
            (limit_prediction(Regime::DeltaToZero, CostKind::Amplitude, 0.5) - 0.770_747_041_268)
                .abs()
                < 1e-11
        );
        assert!(
            (limit_prediction(Regime::DeltaToZero, CostKind::Power, 0.5) - 0.786_737_761_941).abs()
                < 1e-11
        );
        assert!(
            (limit_prediction(Regime::EpsToZero, CostKind::Power, 1e-3) - 0.997_002).abs() < 1e-12
        );
    }

    #[test]
    fn curves_end_near_their_limits() {
        let c = tightness_curve(Regime::EpsToZero, CostKind::Amplitude, 1e-3).unwrap();
        let last = c.last().unwrap();
        assert_eq!(last.epsilon, 1e-7);
        assert!(last.ratio >= last.limit - 1e-3);
        let c = tightness_curve(Regime::DeltaToZero, CostKind::Power, 0.5).unwrap();
        let last = c.last().unwrap();
        assert!(last.ratio >= last.limit - 1e-6);
        let c = tightness_curve(Regime::Diagonal, CostKind::Amplitude, 0.0).unwrap();
        assert!((c.last().unwrap().ratio - 1.0).abs() < 0.01);
        assert!(c.iter().all(|p| p.approaching));
    }
}
