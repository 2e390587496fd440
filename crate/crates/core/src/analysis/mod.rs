//! Parameter sweeps, tightness curves, and their tabular and SVG output.

mod emit;
mod sweep;
mod tightness;

pub use emit::{emit, emit_svg, Column, Format, CSV_HEADER};
pub use sweep::{run_sweep, AxisRange, NMode, SweepConfig, SweepRow};
pub use tightness::{
    limit_prediction, tightness_curve, tightness_curve_at, Regime, TightnessPoint,
};
