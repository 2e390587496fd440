//! Brute-force check of the hockey-stick privacy constraint on a grid.
//!
//! A noise density `p` is `(ε, δ)`-private for sensitivity `Δ` iff
//! `sup_{|d| ≤ Δ} sup_S P(S) − e^ε·P(S + d) ≤ δ`. After binning into cells
//! of width `h = Δ/m`, the inner supremum for a shift of `j` cells is
//! `Σ_i max(0, p_i − e^ε·p_{i+j})`, attained by the cells where the summand
//! is positive.
//!
//! Binning is a post-processing of the noise, so the binned violation never
//! exceeds the continuous one. Two effects can push it above:
//!
//! * floating-point rounding in the cell masses and the sum;
//! * for unbounded densities, partners that fall off the grid count as
//!   empty, adding at most `(1 + e^ε)` times the mass left outside.
//!
//! The pass tolerance covers exactly these. [`ViolationReport::discretization_budget`]
//! bounds how far the binned value can sit below the continuous one.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{DpError, Result};
use crate::mechanism::NoiseMechanism;
use crate::params::{PrivacyParams, Sensitivity};

/// Default cells per sensitivity unit.
pub const DEFAULT_CELLS_PER_SENSITIVITY: usize = 1000;
/// Smallest admissible cells per sensitivity unit.
pub const MIN_CELLS_PER_SENSITIVITY: usize = 10;
/// Mass that may fall outside the grid of an unbounded density.
pub const COVERAGE_TAIL: f64 = 1e-15;
/// Allowed mismatch between `m·h` and `Δ`.
const STEP_RTOL: f64 = 1e-12;
/// Rounding allowance, in units of `n_cells · ulp · max cell mass`.
const ROUNDING_ULPS: f64 = 64.0;
/// Cell differences below this many ulps of the compared masses are noise.
const NOISE_ULPS: f64 = 256.0;
const LANES: usize = 8;

/// Cell masses of a noise density on the uniform grid `origin + i·step`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedDist {
    pub origin: f64,
    pub step: f64,
    pub masses: Vec<f64>,
    /// `m` with `m·step = Δ`.
    pub shift_cells: usize,
    /// Mass beyond the grid that was added to the two edge cells.
    pub folded_tail: f64,
}

impl DiscretizedDist {
    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn max_mass(&self) -> f64 {
        self.masses.iter().copied().fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }
}

/// Outcome of [`dp_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationReport {
    pub max_violation: f64,
    /// Worst shift `d* = j*·h`.
    pub worst_shift: f64,
    pub worst_shift_cells: i64,
    /// Half-open index ranges of the cells forming the worst set.
    pub worst_set_cells: Vec<(usize, usize)>,
    pub pass: bool,
    pub h: f64,
    pub tolerance: f64,
    /// `2·h·max density`: bound on the gap to the continuous violation.
    pub discretization_budget: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub cells: usize,
}

impl ViolationReport {
    /// Whether the measured violation fits a budget of `delta`.
    pub fn passes(&self, delta: f64) -> bool {
        self.max_violation <= delta + self.tolerance
    }
}

/// `m = Δ/h`, rejecting steps that do not divide `Δ`.
pub fn shift_cells(sens: Sensitivity, h: f64) -> Result<usize> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(DpError::domain("h", h, "grid step must be positive"));
    }
    let ratio = sens.get() / h;
    let m = ratio.round();
    if (m * h - sens.get()).abs() > STEP_RTOL * sens.get() {
        return Err(DpError::domain(
            "h",
            h,
            "grid step must divide the sensitivity",
        ));
    }
    if m < MIN_CELLS_PER_SENSITIVITY as f64 {
        return Err(DpError::domain(
            "h",
            h,
            "grid step must be at most sensitivity/10",
        ));
    }
    Ok(m as usize)
}

/// Bins `mech` with step `h` on a symmetric grid reaching at least `radius`.
///
/// Mass beyond the grid is added to the outermost cells.
pub fn discretize_with_radius(
    mech: &dyn NoiseMechanism,
    sens: Sensitivity,
    h: f64,
    radius: f64,
) -> Result<DiscretizedDist> {
    let m = shift_cells(sens, h)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(DpError::domain(
            "radius",
            radius,
            "must be positive and finite",
        ));
    }
    let n = ((2.0 * radius / h) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let origin = -(n as f64) * h / 2.0;
    let edge = |i: usize| origin + i as f64 * h;
    let mut masses = (0..n)
        .into_par_iter()
        .map(|i| mech.cell_mass(edge(i), h))
        .collect::<Result<Vec<f64>>>()?;
    let below = mech.mass_between(f64::NEG_INFINITY, edge(0))?;
    let above = mech.mass_between(edge(n), f64::INFINITY)?;
    masses[0] += below;
    masses[n - 1] += above;
    Ok(DiscretizedDist {
        origin,
        step: h,
        masses,
        shift_cells: m,
        folded_tail: below + above,
    })
}

/// Bins `mech` over its support, or over the radius holding all but
/// [`COVERAGE_TAIL`] of its mass when the support is unbounded.
pub fn discretize(mech: &dyn NoiseMechanism, sens: Sensitivity, h: f64) -> Result<DiscretizedDist> {
    let support = mech.support();
    let radius = if support.is_bounded() {
        support.hi.max(-support.lo)
    } else {
        mech.coverage_radius(COVERAGE_TAIL)
    };
    discretize_with_radius(mech, sens, h, radius)
}

/// `Σ_i max(0, p_i − e^ε·p_{i+j})`, with cells off the grid holding no mass.
pub fn max_violation(dist: &DiscretizedDist, epsilon: f64, j: i64) -> f64 {
    let p = &dist.masses;
    let n = p.len();
    let s = j.unsigned_abs() as usize;
    if s >= n {
        return p.iter().sum();
    }
    let c = epsilon.exp();
    // cells whose partner falls off the grid contribute their full mass
    let (lhs, rhs, orphans) = if j >= 0 {
        (&p[..n - s], &p[s..], &p[n - s..])
    } else {
        (&p[s..], &p[..n - s], &p[..s])
    };
    hinge_sum(lhs, rhs, c) + orphans.iter().sum::<f64>()
}

/// `Σ max(0, a_i − c·b_i)` with independent lanes so the loop vectorizes.
fn hinge_sum(a: &[f64], b: &[f64], c: f64) -> f64 {
    let mut acc = [0.0; LANES];
    let ca = a.chunks_exact(LANES);
    let cb = b.chunks_exact(LANES);
    let tail: f64 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(x, y)| (x - c * y).max(0.0))
        .sum();
    for (xa, xb) in ca.zip(cb) {
        for k in 0..LANES {
            acc[k] += (xa[k] - c * xb[k]).max(0.0);
        }
    }
    acc.iter().sum::<f64>() + tail
}

/// Violation for every shift `j ∈ [−m, m]`, indexed by `j + m`.
pub fn violation_profile(dist: &DiscretizedDist, epsilon: f64) -> Vec<f64> {
    let m = dist.shift_cells as i64;
    (-m..=m)
        .into_par_iter()
        .map(|j| max_violation(dist, epsilon, j))
        .collect()
}

/// Cells `i` with `p_i > e^ε·p_{i+j}` beyond rounding noise, as half-open
/// index runs.
pub fn worst_set(dist: &DiscretizedDist, epsilon: f64, j: i64) -> Vec<(usize, usize)> {
    let p = &dist.masses;
    let n = p.len() as i64;
    let c = epsilon.exp();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        let k = i + j;
        let partner = if (0..n).contains(&k) {
            p[k as usize]
        } else {
            0.0
        };
        let (a, b) = (p[i as usize], c * partner);
        if a - b > NOISE_ULPS * f64::EPSILON * a.max(b) {
            let i = i as usize;
            match runs.last_mut() {
                Some(last) if last.1 == i => last.1 = i + 1,
                _ => runs.push((i, i + 1)),
            }
        }
    }
    runs
}

/// Allowance for rounding and for mass left outside the grid.
pub fn tolerance(dist: &DiscretizedDist, epsilon: f64) -> f64 {
    let rounding = ROUNDING_ULPS * dist.len() as f64 * f64::EPSILON * dist.max_mass();
    (1.0 + epsilon.exp()) * (dist.folded_tail + rounding)
}

/// Worst violation over all shifts `|j| ≤ m`; passes iff it is at most
/// `δ + tolerance`.
pub fn dp_check(dist: &DiscretizedDist, params: PrivacyParams) -> ViolationReport {
    let eps = params.epsilon();
    let profile = violation_profile(dist, eps);
    let m = dist.shift_cells as i64;
    // ties resolve toward the larger shift
    let (idx, &max_violation) = profile
        .iter()
        .enumerate()
        .max_by(|a, b| {
            a.1.total_cmp(b.1)
                .then_with(|| (a.0 as i64 - m).abs().cmp(&(b.0 as i64 - m).abs()))
        })
        .expect("profile has 2m + 1 >= 21 entries");
    let j = idx as i64 - m;
    let tolerance = tolerance(dist, eps);
    ViolationReport {
        max_violation,
        worst_shift: j as f64 * dist.step,
        worst_shift_cells: j,
        worst_set_cells: worst_set(dist, eps, j),
        pass: max_violation <= params.delta() + tolerance,
        h: dist.step,
        tolerance,
        discretization_budget: 2.0 * dist.max_mass(),
        epsilon: eps,
        delta: params.delta(),
        cells: dist.len(),
    }
}
