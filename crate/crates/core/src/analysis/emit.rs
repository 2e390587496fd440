use std::fmt::Write as _;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::sweep::SweepRow;

pub const CSV_HEADER: [&str; 9] = [
    "epsilon",
    "delta",
    "q_lower",
    "q_upper",
    "tl_cost",
    "gauss_classic",
    "gauss_analytic",
    "ratio_bounds",
    "ratio_tl_gauss",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Ratio column shown by the SVG heatmap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Column {
    RatioBounds,
    RatioTlGauss,
}

impl Column {
    fn name(self) -> &'static str {
        match self {
            Column::RatioBounds => "ratio_bounds",
            Column::RatioTlGauss => "ratio_tl_gauss",
        }
    }

    fn get(self, row: &SweepRow) -> f64 {
        match self {
            Column::RatioBounds => row.ratio_bounds,
            Column::RatioTlGauss => row.ratio_tl_gauss,
        }
    }
}

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `rows` as CSV, JSON, or an SVG heatmap of `ratio_tl_gauss`.
pub fn emit<W: Write>(rows: &[SweepRow], format: Format, out: W) -> io::Result<()> {
    if rows.is_empty() {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            "empty sweep table",
        ));
    }
    match format {
        Format::Csv => emit_csv(rows, out),
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows)?;
            out.write_all(b"\n")
        }
        Format::Svg => emit_svg(rows, Column::RatioTlGauss, out),
    }
}

fn emit_csv<W: Write>(rows: &[SweepRow], out: W) -> io::Result<()> {
    let with_floor = rows.iter().any(|r| r.q_lower_floor.is_some());
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = CSV_HEADER.to_vec();
    if with_floor {
        header.push("q_lower_floor");
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            num(r.epsilon),
            num(r.delta),
            num(r.q_lower),
            num(r.q_upper),
            num(r.tl_cost),
            num(r.gauss_classic),
            num(r.gauss_analytic),
            num(r.ratio_bounds),
            num(r.ratio_tl_gauss),
        ];
        if with_floor {
            rec.push(r.q_lower_floor.map(num).unwrap_or_default());
        }
        w.write_record(&rec)?;
    }
    w.flush()
}

/// Distinct values in first-seen order.
fn distinct(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for v in values {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Linear blend from dark blue (low) to yellow (high).
fn color(t: f64) -> String {
    let t = if t.is_finite() {
        t.clamp(0.0, 1.0)
    } else {
        0.0
    };
    let lerp = |a: f64, b: f64| (a + t * (b - a)).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        lerp(48.0, 250.0),
        lerp(18.0, 230.0),
        lerp(110.0, 40.0)
    )
}

const CELL: usize = 24;
const MARGIN: usize = 60;

/// Heatmap of `column` with `ε` along x and `δ` along y, largest `δ` on top.
pub fn emit_svg<W: Write>(rows: &[SweepRow], column: Column, mut out: W) -> io::Result<()> {
    if rows.is_empty() {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            "empty sweep table",
        ));
    }
    let eps = distinct(rows.iter().map(|r| r.epsilon));
    let dels = distinct(rows.iter().map(|r| r.delta));
    let (lo, hi) = rows
        .iter()
        .map(|r| column.get(r))
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
    let span = if hi > lo { hi - lo } else { 1.0 };
    let width = 2 * MARGIN + CELL * eps.len();
    let height = 2 * MARGIN + CELL * dels.len();

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="{}" font-family="sans-serif" font-size="14">{} (min {lo:.4}, max {hi:.4})</text>"#,
        MARGIN / 2,
        column.name()
    );
    for r in rows {
        let Some(i) = eps.iter().position(|&e| e == r.epsilon) else {
            continue;
        };
        let Some(j) = dels.iter().position(|&d| d == r.delta) else {
            continue;
        };
        let v = column.get(r);
        let x = MARGIN + i * CELL;
        let y = MARGIN + (dels.len() - 1 - j) * CELL;
        let _ = writeln!(
            s,
            r#"<rect class="cell" x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{}"><title>epsilon={} delta={} {}={}</title></rect>"#,
            color((v - lo) / span),
            num(r.epsilon),
            num(r.delta),
            column.name(),
            num(v)
        );
    }
    let bottom = MARGIN + CELL * dels.len();
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">epsilon (log, {:.0e} to {:.0e})</text>"#,
        width / 2,
        bottom + 30,
        eps[0],
        eps[eps.len() - 1]
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 20 {})">delta (log, {:.0e} to {:.0e})</text>"#,
        height / 2,
        height / 2,
        dels[0],
        dels[dels.len() - 1]
    );
    s.push_str("</svg>\n");
    out.write_all(s.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{run_sweep, AxisRange, NMode, SweepConfig};

    fn table(n_mode: NMode) -> Vec<SweepRow> {
        let cfg = SweepConfig {
            eps_range: AxisRange::new(0.1, 1.0, 2, true).unwrap(),
            delta_range: AxisRange::new(1e-4, 1e-2, 2, true).unwrap(),
            n_mode,
            ..SweepConfig::default()
        };
        run_sweep(&cfg).unwrap()
    }

    fn render(rows: &[SweepRow], f: Format) -> String {
        let mut buf = Vec::new();
        emit(rows, f, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn csv_shape() {
        let text = render(&table(NMode::Fractional), Format::Csv);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], CSV_HEADER.join(","));
        assert!(lines[1].starts_with("1.0000000000000001e-1,1.0000000000000000e-4,"));
        let both = render(&table(NMode::Both), Format::Csv);
        assert!(both.lines().next().unwrap().ends_with(",q_lower_floor"));
    }

    #[test]
    fn csv_numbers_round_trip() {
        let rows = table(NMode::Fractional);
        let text = render(&rows, Format::Csv);
        let second: Vec<f64> = text
            .lines()
            .nth(2)
            .unwrap()
            .split(',')
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(second[2], rows[1].q_lower);
        assert_eq!(second[8], rows[1].ratio_tl_gauss);
    }

    #[test]
    fn json_round_trip() {
        let rows = table(NMode::Both);
        let back: Vec<SweepRow> = serde_json::from_str(&render(&rows, Format::Json)).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn svg_cell_count() {
        let svg = render(&table(NMode::Fractional), Format::Svg);
        assert_eq!(svg.matches(r#"class="cell""#).count(), 4);
        assert!(svg.contains(r#"width="168""#));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn empty_table_is_an_error() {
        assert!(emit(&[], Format::Csv, Vec::new()).is_err());
    }
}
