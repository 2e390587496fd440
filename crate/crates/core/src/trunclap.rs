//! The truncated Laplacian distribution.
//!
//! Density `B·exp(−|x|/λ)` on `[−A, A]` and zero elsewhere, with
//!
//! * `λ = Δ/ε`,
//! * `A = λ·ln(1 + (e^ε − 1)/(2δ))`,
//! * `B = 1 / (2λ(1 − e^{−A/λ}))`.
//!
//! On `[0, A − Δ]` the density decays by exactly `e^ε` per sensitivity step,
//! and the last step `[A − Δ, A]` carries mass exactly `δ`. Both endpoints
//! `±A` are treated as part of the support.
//!
//! Internally everything is expressed through `L = A/λ` and
//! `g = 1 − e^{−L}`, so that `Bλ = 1/(2g)`.

use serde::Serialize;

use crate::error::{finite, Result};
use crate::mechanism::{check_probability, NoiseMechanism, Support};
use crate::numeric::{log_ratio, power_series};
use crate::params::{PrivacyParams, Sensitivity};

/// Below this `L` the moment formulas switch to their Taylor expansions.
const AMPLITUDE_SERIES_MAX: f64 = 0.1;
const POWER_SERIES_MAX: f64 = 0.5;

// 1 − L/(e^L − 1) = L/2 − L²/12 + L⁴/720 − …   (Bernoulli numbers)
const AMPLITUDE_SERIES: [f64; 12] = [
    1.0 / 2.0,
    -1.0 / 12.0,
    0.0,
    1.0 / 720.0,
    0.0,
    -1.0 / 30_240.0,
    0.0,
    1.0 / 1_209_600.0,
    0.0,
    -1.0 / 47_900_160.0,
    0.0,
    691.0 / 1_307_674_368_000.0,
];

// 2 − (L + 2)·L/(e^L − 1) = L²/3 − L³/12 + L⁴/360 + …
const POWER_SERIES: [f64; 12] = [
    1.0 / 3.0,
    -1.0 / 12.0,
    1.0 / 360.0,
    1.0 / 720.0,
    -1.0 / 15_120.0,
    -1.0 / 30_240.0,
    1.0 / 604_800.0,
    1.0 / 1_209_600.0,
    -1.0 / 23_950_080.0,
    -1.0 / 47_900_160.0,
    691.0 / 653_837_184_000.0,
    691.0 / 1_307_674_368_000.0,
];

/// A calibrated truncated Laplacian: scale `λ`, radius `A`, height `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncatedLaplace {
    lambda: f64,
    #[serde(rename = "A")]
    radius: f64,
    #[serde(rename = "B")]
    height: f64,
    #[serde(rename = "delta_f")]
    sensitivity: f64,
    #[serde(skip)]
    log_ratio: f64,
    #[serde(skip)]
    g: f64,
    #[serde(skip)]
    params: PrivacyParams,
}

impl TruncatedLaplace {
    /// Calibrates the distribution to `(ε, δ)` for a query of sensitivity `Δ`.
    pub fn calibrate(params: PrivacyParams, sens: Sensitivity) -> Self {
        let lambda = sens.get() / params.epsilon();
        let log_ratio = log_ratio(params.epsilon(), params.delta());
        let g = -(-log_ratio).exp_m1();
        Self {
            lambda,
            radius: lambda * log_ratio,
            height: 1.0 / (2.0 * lambda * g),
            sensitivity: sens.get(),
            log_ratio,
            g,
            params,
        }
    }

    /// Scale `λ = Δ/ε`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Truncation radius `A`.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Peak density `B`.
    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn sensitivity(&self) -> f64 {
        self.sensitivity
    }

    pub fn params(&self) -> PrivacyParams {
        self.params
    }

    /// `A/λ = ln(1 + (e^ε − 1)/(2δ))`.
    pub fn log_ratio(&self) -> f64 {
        self.log_ratio
    }

    /// Mass of the outermost strip `[A − w, A]`, for `0 <= w <= A`.
    ///
    /// With `w = Δ` this is `δ`.
    pub fn edge_mass(&self, width: f64) -> f64 {
        let w = width.clamp(0.0, self.radius);
        (-self.log_ratio).exp() * (w / self.lambda).exp_m1() / (2.0 * self.g)
    }

    /// Mass of `[a, a + w]` for `0 <= a`, clipped to the support.
    fn cell_right(&self, a: f64, w: f64) -> f64 {
        if a + w > self.radius {
            return self.mass_right(a, a + w);
        }
        (-a / self.lambda).exp() * (-(-w / self.lambda).exp_m1()) / (2.0 * self.g)
    }

    /// Mass of `[a, b]` for `0 <= a <= b`, clipped to the support.
    fn mass_right(&self, a: f64, b: f64) -> f64 {
        let a = a.min(self.radius);
        let b = b.min(self.radius);
        if b <= a {
            return 0.0;
        }
        (-a / self.lambda).exp() * (-(-(b - a) / self.lambda).exp_m1()) / (2.0 * self.g)
    }

    /// `P(X <= x)` for `x <= 0`.
    fn lower_cdf(&self, x: f64) -> f64 {
        if x <= -self.radius {
            return 0.0;
        }
        let from_edge = (x + self.radius) / self.lambda;
        if from_edge < 1.0 {
            (-self.log_ratio).exp() * from_edge.exp_m1() / (2.0 * self.g)
        } else {
            ((x / self.lambda).exp_m1() + self.g) / (2.0 * self.g)
        }
    }
}

impl NoiseMechanism for TruncatedLaplace {
    fn name(&self) -> &'static str {
        "trunclap"
    }

    fn pdf(&self, x: f64) -> Result<f64> {
        let x = finite("x", x)?;
        if x.abs() <= self.radius {
            Ok(self.height * (-x.abs() / self.lambda).exp())
        } else {
            Ok(0.0)
        }
    }

    fn cdf(&self, x: f64) -> Result<f64> {
        let x = finite("x", x)?;
        Ok(if x == 0.0 {
            0.5
        } else if x >= self.radius {
            1.0
        } else if x > 0.0 {
            0.5 + (-(-x / self.lambda).exp_m1()) / (2.0 * self.g)
        } else {
            self.lower_cdf(x)
        })
    }

    fn upper_tail(&self, x: f64) -> Result<f64> {
        let x = finite("x", x)?;
        Ok(if x == 0.0 {
            0.5
        } else if x > 0.0 {
            self.lower_cdf(-x)
        } else {
            1.0 - self.lower_cdf(x)
        })
    }

    fn mass_between(&self, lo: f64, hi: f64) -> Result<f64> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(crate::error::DpError::domain(
                "interval",
                lo,
                "bounds must satisfy lo <= hi",
            ));
        }
        Ok(if lo >= 0.0 {
            self.mass_right(lo, hi)
        } else if hi <= 0.0 {
            self.mass_right(-hi, -lo)
        } else {
            self.mass_right(0.0, -lo) + self.mass_right(0.0, hi)
        })
    }

    fn cell_mass(&self, left: f64, width: f64) -> Result<f64> {
        let left = finite("left", left)?;
        let right = left + width;
        Ok(if left >= 0.0 {
            self.cell_right(left, width)
        } else if right <= 0.0 {
            self.cell_right(-right, width)
        } else {
            self.mass_right(0.0, -left) + self.mass_right(0.0, right)
        })
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        let u = check_probability(u)?;
        if u == 0.5 {
            return Ok(0.0);
        }
        // distance from the nearer end of the unit interval; exact for u >= 1/2
        let v = if u < 0.5 { u } else { 1.0 - u };
        let s = (1.0 - 2.0 * v) * self.g;
        let log_w = if s <= 0.5 {
            (-s).ln_1p()
        } else {
            (2.0 * v * self.g + (-self.log_ratio).exp()).ln()
        };
        let x = (-self.lambda * log_w).min(self.radius);
        Ok(if u < 0.5 { -x } else { x })
    }

    fn expected_amplitude(&self) -> f64 {
        let l = self.log_ratio;
        let unit = if l < AMPLITUDE_SERIES_MAX {
            power_series(&AMPLITUDE_SERIES, 1, l)
        } else {
            1.0 - l / l.exp_m1()
        };
        self.lambda * unit
    }

    fn expected_power(&self) -> f64 {
        let l = self.log_ratio;
        let unit = if l < POWER_SERIES_MAX {
            power_series(&POWER_SERIES, 2, l)
        } else {
            2.0 - (l + 2.0) * (l / l.exp_m1())
        };
        self.lambda * self.lambda * unit
    }

    fn support(&self) -> Support {
        Support::symmetric(self.radius)
    }

    fn coverage_radius(&self, _tail: f64) -> f64 {
        self.radius
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, integrate_pieces};

    fn tl(e: f64, d: f64, s: f64) -> TruncatedLaplace {
        TruncatedLaplace::calibrate(
            PrivacyParams::new(e, d).unwrap(),
            Sensitivity::new(s).unwrap(),
        )
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    fn bisect_quantile(m: &TruncatedLaplace, u: f64) -> f64 {
        let (mut lo, mut hi) = (-m.radius(), m.radius());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if m.cdf(mid).unwrap() < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn calibration_reference_point() {
        let m = tl(1.0, 1e-5, 1.0);
        assert_eq!(m.lambda(), 1.0);
        // oracle values from the defining formulas in 50-digit arithmetic
        assert!(rel(m.radius(), 11.361_114_778_489_6) < 1e-13);
        assert!(rel(m.height(), 0.500_005_819_767_068_7) < 1e-13);
        let total = integrate(|x| m.pdf(x).unwrap(), 0.0, m.radius(), 0.0, 1e-14).value * 2.0;
        assert!((total - 1.0).abs() < 1e-12);
        let a = m.radius();
        let tail = integrate(|x| m.pdf(x).unwrap(), a - 1.0, a, 0.0, 1e-14).value;
        assert!(rel(tail, 1e-5) < 1e-11);
    }

    #[test]
    fn uniform_limit_radius() {
        let m = tl(1e-6, 0.05, 1.0);
        assert!(rel(m.radius(), 1.0 / (2.0 * 0.05)) < 1e-4);
    }

    #[test]
    fn tiny_delta_stays_finite() {
        let m = tl(1.0, 1e-300, 1.0);
        assert!(m.radius().is_finite());
        assert!(rel(m.radius(), 690.623_705_572_266_7) < 1e-13);
        assert!(m.height().is_finite() && m.height() > 0.0);
        assert!(m.expected_amplitude().is_finite());
    }

    #[test]
    fn tiny_epsilon_stays_finite() {
        let m = tl(1e-12, 0.1, 1.0);
        assert!(rel(m.radius(), 5.0) < 1e-9);
        assert!(rel(m.expected_amplitude(), 1.0 / (4.0 * 0.1)) < 1e-9);
    }

    #[test]
    fn normalization_identity() {
        for &(e, d) in &[(1.0, 1e-5), (1e-4, 0.1), (10.0, 1e-6), (0.3, 0.2)] {
            let m = tl(e, d, 2.0);
            let lhs = 2.0 * m.lambda() * m.height() * (-(-m.radius() / m.lambda()).exp_m1());
            assert!((lhs - 1.0).abs() < 1e-12, "{e} {d}");
            assert_eq!(m.log_ratio(), m.radius() / m.lambda() * 1.0);
        }
    }

    #[test]
    fn pdf_values() {
        let m = tl(1.0, 1e-5, 1.0);
        assert_eq!(m.pdf(0.0).unwrap(), m.height());
        assert_eq!(m.pdf(m.radius() + 1e-9).unwrap(), 0.0);
        assert!(m.pdf(m.radius()).unwrap() > 0.0);
        assert!((m.pdf(1.0).unwrap() - 0.183_941_861_558_378_14).abs() < 1e-15);
        assert_eq!(m.pdf(-1.0).unwrap(), m.pdf(1.0).unwrap());
        assert!(m.pdf(f64::NAN).is_err());
        assert!(m.pdf(f64::INFINITY).is_err());
    }

    #[test]
    fn cdf_values() {
        let m = tl(1.0, 1e-5, 1.0);
        assert_eq!(m.cdf(0.0).unwrap(), 0.5);
        assert_eq!(m.cdf(m.radius()).unwrap(), 1.0);
        assert_eq!(m.cdf(-m.radius()).unwrap(), 0.0);
        assert!((m.cdf(m.radius() - 1.0).unwrap() - (1.0 - 1e-5)).abs() < 1e-12);
        assert!(m.cdf(f64::NEG_INFINITY).is_err());
        for &x in &[0.1, 1.0, 5.0, 11.0] {
            let s = m.cdf(x).unwrap() + m.cdf(-x).unwrap();
            assert!((s - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn quantile_values() {
        let m = tl(1.0, 1e-5, 1.0);
        assert_eq!(m.quantile(0.5).unwrap(), 0.0);
        let q = m.quantile(1.0 - 1e-5).unwrap();
        assert!((q - bisect_quantile(&m, 1.0 - 1e-5)).abs() < 1e-9);
        assert!((q - (m.radius() - 1.0)).abs() < 1e-9);
        let q = m.quantile(0.75).unwrap();
        assert!((q - bisect_quantile(&m, 0.75)).abs() < 1e-12);
        assert!((q - 0.693_135_541_229_022_4).abs() < 1e-12);
        assert!(m.quantile(0.0).is_err());
        assert!(m.quantile(1.0).is_err());
        assert!(m.quantile(f64::NAN).is_err());
    }

    #[test]
    fn edge_mass_is_delta() {
        for &(e, d) in &[(1.0, 1e-5), (1e-4, 1e-6), (10.0, 0.1)] {
            let m = tl(e, d, 1.0);
            assert!(rel(m.edge_mass(1.0), d) < 1e-13, "{e} {d}");
            let q = m.mass_between(m.radius() - 1.0, m.radius()).unwrap();
            assert!(rel(q, d) < 1e-9);
        }
    }

    #[test]
    fn mass_between_agrees_with_cdf() {
        let m = tl(0.5, 1e-3, 1.0);
        for &(a, b) in &[(-3.0f64, 2.0f64), (-1.0, -0.5), (0.5, 4.0), (-100.0, 100.0)] {
            let via_cdf = m.cdf(b.min(50.0)).unwrap() - m.cdf(a.max(-50.0)).unwrap();
            assert!((m.mass_between(a, b).unwrap() - via_cdf).abs() < 1e-14);
        }
        assert_eq!(m.mass_between(-100.0, 100.0).unwrap(), 1.0);
    }

    #[test]
    fn cell_mass_agrees_with_interval_mass() {
        let m = tl(0.5, 1e-3, 1.0);
        let a = m.radius();
        for &(l, w) in &[
            (0.3, 0.01),
            (-2.0, 0.5),
            (-0.2, 0.4),
            (a - 0.005, 0.01),
            (a + 1.0, 0.1),
        ] {
            let want = m.mass_between(l, l + w).unwrap();
            assert!((m.cell_mass(l, w).unwrap() - want).abs() <= 1e-15 * want.max(1e-300));
        }
    }

    #[test]
    fn moments_against_quadrature() {
        let m = tl(1.0, 1e-5, 1.0);
        let a = m.radius();
        let amp = 2.0 * integrate_pieces(|x| x * m.pdf(x).unwrap(), &[0.0, a], 1e-14);
        let pow = 2.0 * integrate_pieces(|x| x * x * m.pdf(x).unwrap(), &[0.0, a], 1e-14);
        assert!(rel(m.expected_amplitude(), amp) < 1e-12);
        assert!(rel(m.expected_power(), pow) < 1e-12);
        assert!(rel(m.expected_amplitude(), 0.999_867_761_916_697) < 1e-12);
        assert!(rel(m.expected_power(), 1.998_233_151_790_901) < 1e-12);
    }

    #[test]
    fn moments_limits() {
        // δ → 0 recovers the Laplacian moments
        let m = tl(1.0, 1e-12, 1.0);
        assert!((m.expected_amplitude() - 1.0).abs() < 1e-9);
        assert!((m.expected_power() - 2.0).abs() < 1e-9);
        // ε = δ → 0
        let m = tl(1e-6, 1e-6, 1.0);
        let ln15 = 1.5f64.ln();
        assert!((m.expected_amplitude() * 1e-6 - (1.0 - 2.0 * ln15)).abs() < 1e-5);
        assert!((m.expected_power() * 1e-12 / 2.0 - (1.0 - ln15 * ln15 - 2.0 * ln15)).abs() < 1e-4);
        // ε → 0 reaches the uniform on [−Δ/2δ, Δ/2δ]
        let m = tl(1e-8, 0.05, 1.0);
        assert!(rel(m.expected_amplitude(), 5.0) < 1e-6);
    }

    #[test]
    fn series_and_direct_branches_meet() {
        for &l in &[AMPLITUDE_SERIES_MAX, POWER_SERIES_MAX] {
            let a = power_series(&AMPLITUDE_SERIES, 1, l);
            let b = 1.0 - l / l.exp_m1();
            assert!(rel(a, b) < 1e-13);
            let a = power_series(&POWER_SERIES, 2, l);
            let b = 2.0 - (l + 2.0) * (l / l.exp_m1());
            assert!(rel(a, b) < 1e-12);
        }
    }

    #[test]
    fn decay_rate_is_exp_epsilon() {
        let m = tl(0.7, 1e-4, 1.5);
        let a = m.radius();
        let rate = 0.7f64.exp();
        for i in 0..=100 {
            let x = (a - 1.5) * i as f64 / 100.0;
            let r = m.pdf(x).unwrap() / m.pdf(x + 1.5).unwrap();
            assert!(rel(r, rate) < 1e-12);
        }
    }
}
