//! Numerically careful primitives shared by the calibration and bound code.

use libm::erfc;
use std::f64::consts::SQRT_2;

/// Above this value of `(e^ε − 1)/(2δ)` the log-ratio is evaluated in log space.
const LOG_SPACE_SWITCH: f64 = 1e15;

/// `ln(1 + (e^ε − 1)/(2δ))`, the truncation radius in units of the scale `Δ/ε`.
///
/// Stays finite for `δ` down to the subnormal range and for `ε` large enough
/// that `e^ε` overflows.
pub fn log_ratio(epsilon: f64, delta: f64) -> f64 {
    let em1 = epsilon.exp_m1();
    let r = em1 / (2.0 * delta);
    if r.is_finite() && r <= LOG_SPACE_SWITCH {
        return r.ln_1p();
    }
    // 1 + (e^ε − 1)/(2δ) = e^ε · ((1 − e^{−ε})/(2δ) + e^{−ε})
    let g = -(-epsilon).exp_m1();
    let tail = 2.0 * delta * (-epsilon).exp() / g;
    epsilon + g.ln() - (2.0 * delta).ln() + tail.ln_1p()
}

/// Standard normal CDF via the complementary error function (about 1 ulp).
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Inverse of [`normal_cdf`] for `p` in `(0, 1)`.
///
/// Rational approximation (Acklam) polished by one Halley step.
pub fn normal_quantile(p: f64) -> f64 {
    if p > 0.5 {
        return -normal_quantile_lower(1.0 - p);
    }
    normal_quantile_lower(p)
}

#[allow(clippy::excessive_precision)]
fn normal_quantile_lower(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_690e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    let horner = |c: &[f64], x: f64| c.iter().fold(0.0, |acc, &k| acc * x + k);
    let x = if p < 0.024_25 {
        let q = (-2.0 * p.ln()).sqrt();
        horner(&C, q) / (horner(&D, q) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        horner(&A, r) * q / (horner(&B, r) * r + 1.0)
    };
    // Halley step on Φ(x) − p
    let e = normal_cdf(x) - p;
    let u = e * (2.0 * std::f64::consts::PI).sqrt() * (0.5 * x * x).exp();
    x - u / (1.0 + 0.5 * x * u)
}

/// Evaluates `Σ coeffs[k] · x^(k + first_power)` by Horner's rule.
pub(crate) fn power_series(coeffs: &[f64], first_power: i32, x: f64) -> f64 {
    let mut acc = 0.0;
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc * x.powi(first_power)
}

/// Compensated (Kahan–Babuška) summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = KahanSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}
