//! Lower and upper bounds on the minimum expected noise cost.
//!
//! The lower bounds are built from a geometric staircase with first step `a`
//! and ratio `b = e^{−ε}`, where
//!
//! * `a = (δ + (e^ε − 1)/2)/e^ε`,
//! * `n` solves `Σ_{k<n} a·bᵏ = 1/2`, i.e. `bⁿ = 2δ/(2δ + e^ε − 1)`.
//!
//! Then `Q1^L = 2aΔ·S₁(n)` and `Q2^L = 2aΔ²·S₂(n)` with
//! `S_p(n) = Σ_{k<n} kᵖ·bᵏ` in closed form. The closed forms are continuous
//! in `n`; they are evaluated both at the real root `n_frac` and at
//! `⌊n_frac⌋`. Only the floor variant is known to be conservative.
//!
//! The upper bounds are the costs of the truncated Laplacian.

use serde::{Deserialize, Serialize};

use crate::error::{DpError, Result};
use crate::mechanism::NoiseMechanism;
use crate::numeric::{log_ratio, KahanSum};
use crate::params::{CostKind, PrivacyParams, Sensitivity};
use crate::trunclap::TruncatedLaplace;

/// Below this value the helper differences are summed as Taylor series.
const SERIES_SWITCH: f64 = 1.0;
/// Terms kept in those series; the next term is below 1e-20 on `[0, 1]`.
const SERIES_TERMS: i32 = 24;

/// The staircase `(a, b, n)` behind the lower bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBoundParams {
    pub a: f64,
    pub b: f64,
    pub n_frac: f64,
    pub n_floor: u64,
    pub delta_f: f64,
    #[serde(skip)]
    epsilon: f64,
}

/// A lower bound at the real root `n_frac` and at `⌊n_frac⌋`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub frac: f64,
    pub floor: f64,
}

/// Lower and upper bound for one cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
    pub cost: CostKind,
    /// The lower bound at `⌊n_frac⌋`.
    pub lower_floor: f64,
}

impl BoundPair {
    /// `lower / upper`.
    pub fn ratio(&self) -> f64 {
        self.lower / self.upper
    }

    pub fn ratio_floor(&self) -> f64 {
        self.lower_floor / self.upper
    }
}

impl LowerBoundParams {
    pub fn new(params: PrivacyParams, sens: Sensitivity) -> Self {
        let eps = params.epsilon();
        let b = (-eps).exp();
        let a = params.delta() * b + 0.5 * -(-eps).exp_m1();
        let n_frac = log_ratio(eps, params.delta()) / eps;
        Self {
            a,
            b,
            n_frac,
            n_floor: n_frac.floor() as u64,
            delta_f: sens.get(),
            epsilon: eps,
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `S₁(n) = Σ_{k<n} k·bᵏ` for real `n`.
    pub fn s1(&self, n: f64) -> f64 {
        if n <= 1.0 {
            return 0.0;
        }
        let h = Helpers::new(self.epsilon, self.b);
        let ln = n * self.epsilon;
        let decay = (-ln).exp();
        let v = if ln <= SERIES_SWITCH {
            decay * (ln * h.d1() + self.b * exp_tail(ln, 2))
        } else {
            self.b * -(-ln).exp_m1() - decay * ln * h.tau
        };
        v / h.t.powi(2)
    }

    /// `S₂(n) = Σ_{k<n} k²·bᵏ` for real `n`.
    pub fn s2(&self, n: f64) -> f64 {
        if n <= 1.0 {
            return 0.0;
        }
        let h = Helpers::new(self.epsilon, self.b);
        let b = self.b;
        let ln = n * self.epsilon;
        let decay = (-ln).exp();
        let v = if ln <= SERIES_SWITCH {
            decay * (h.c1() * ln + h.c2() * ln * ln + b * (1.0 + b) * exp_tail(ln, 3))
        } else {
            let lt = ln * h.tau;
            b * (1.0 + b) * -(-ln).exp_m1() - decay * lt * (2.0 * b + lt)
        };
        v / h.t.powi(3)
    }

    /// `2aΔ·S₁(n)` or `2aΔ²·S₂(n)` at a given `n`.
    pub fn bound_at(&self, cost: CostKind, n: f64) -> f64 {
        match cost {
            CostKind::Amplitude => 2.0 * self.a * self.delta_f * self.s1(n),
            CostKind::Power => 2.0 * self.a * self.delta_f.powi(2) * self.s2(n),
        }
    }

    /// Direct compensated summation of `2a·Σ kᵖ·bᵏ·Δᵖ`.
    ///
    /// A fractional `n` weights the term `k = ⌊n⌋` by `n − ⌊n⌋`. At integer
    /// `n` this is the plain finite series.
    pub fn series(&self, cost: CostKind, n: f64) -> f64 {
        let p = match cost {
            CostKind::Amplitude => 1,
            CostKind::Power => 2,
        };
        let whole = n.floor();
        let mut acc = KahanSum::new();
        for k in 1..whole as u64 {
            let k = k as f64;
            acc.add(k.powi(p) * (k * -self.epsilon).exp());
        }
        let rest = n - whole;
        if rest > 0.0 {
            acc.add(rest * whole.powi(p) * (whole * -self.epsilon).exp());
        }
        2.0 * self.a * self.delta_f.powi(p) * acc.value()
    }
}

/// Cancellation-free pieces shared by the closed forms.
struct Helpers {
    eps: f64,
    b: f64,
    /// `1 − b`
    t: f64,
    /// `(1 − b)/ε`
    tau: f64,
}

impl Helpers {
    fn new(eps: f64, b: f64) -> Self {
        let t = -(-eps).exp_m1();
        Self {
            eps,
            b,
            t,
            tau: t / eps,
        }
    }

    /// Sums `Σ_{k ≥ start} coef(k)·εᵏ`.
    fn series(&self, start: i32, coef: impl Fn(i32) -> f64) -> f64 {
        let mut acc = KahanSum::new();
        for k in start..start + SERIES_TERMS {
            acc.add(coef(k) * self.eps.powi(k));
        }
        acc.value()
    }

    /// `b − τ`
    fn d1(&self) -> f64 {
        if self.eps >= SERIES_SWITCH {
            return self.b - self.tau;
        }
        self.series(1, |k| sign(k) * k as f64 / factorial(k + 1))
    }

    /// `b·(1 + b − 2τ)`
    fn c1(&self) -> f64 {
        if self.eps >= SERIES_SWITCH {
            return self.b * (1.0 + self.b - 2.0 * self.tau);
        }
        self.b * self.series(2, |k| sign(k) * (k - 1) as f64 / factorial(k + 1))
    }

    /// `b(1 + b)/2 − τ²`
    fn c2(&self) -> f64 {
        if self.eps >= SERIES_SWITCH {
            return self.b * (1.0 + self.b) / 2.0 - self.tau * self.tau;
        }
        self.series(1, |k| {
            let p = 2f64.powi(k);
            sign(k) * ((1.0 + p) / (2.0 * factorial(k)) - (4.0 * p - 2.0) / factorial(k + 2))
        })
    }
}

fn sign(k: i32) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn factorial(k: i32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// `e^x − Σ_{k<m} xᵏ/k!` for `0 <= x`.
fn exp_tail(x: f64, m: i32) -> f64 {
    if x >= SERIES_SWITCH {
        let head: f64 = (1..m).map(|k| x.powi(k) / factorial(k)).sum();
        return x.exp_m1() - head;
    }
    let mut term = x.powi(m) / factorial(m);
    let mut acc = KahanSum::new();
    let mut k = m;
    while term > 0.0 && k < m + SERIES_TERMS {
        acc.add(term);
        k += 1;
        term *= x / k as f64;
    }
    acc.value()
}

pub fn lower_bound_params(params: PrivacyParams, sens: Sensitivity) -> LowerBoundParams {
    LowerBoundParams::new(params, sens)
}

/// Amplitude lower bound at `n_frac` and `n_floor`.
pub fn q1_lower(lbp: &LowerBoundParams) -> LowerBound {
    LowerBound {
        frac: lbp.bound_at(CostKind::Amplitude, lbp.n_frac),
        floor: lbp.bound_at(CostKind::Amplitude, lbp.n_floor as f64),
    }
}

/// Power lower bound at `n_frac` and `n_floor`.
pub fn q2_lower(lbp: &LowerBoundParams) -> LowerBound {
    LowerBound {
        frac: lbp.bound_at(CostKind::Power, lbp.n_frac),
        floor: lbp.bound_at(CostKind::Power, lbp.n_floor as f64),
    }
}

/// Expected amplitude of the calibrated truncated Laplacian.
pub fn q1_upper(params: PrivacyParams, sens: Sensitivity) -> f64 {
    TruncatedLaplace::calibrate(params, sens).expected_amplitude()
}

/// Expected power of the calibrated truncated Laplacian.
pub fn q2_upper(params: PrivacyParams, sens: Sensitivity) -> f64 {
    TruncatedLaplace::calibrate(params, sens).expected_power()
}

/// Lower and upper bound for `cost`.
///
/// Fails only if both lower-bound variants exceed the upper bound, which
/// would indicate a bug.
pub fn bound_pair(params: PrivacyParams, sens: Sensitivity, cost: CostKind) -> Result<BoundPair> {
    let lbp = LowerBoundParams::new(params, sens);
    let (lower, upper) = match cost {
        CostKind::Amplitude => (q1_lower(&lbp), q1_upper(params, sens)),
        CostKind::Power => (q2_lower(&lbp), q2_upper(params, sens)),
    };
    if lower.frac > upper && lower.floor > upper {
        return Err(DpError::Invariant(format!(
            "{cost} lower bound {} exceeds upper bound {upper} at {params}",
            lower.frac
        )));
    }
    Ok(BoundPair {
        lower: lower.frac,
        upper,
        cost,
        lower_floor: lower.floor,
    })
}
