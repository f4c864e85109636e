//! Flat-file emission: CSV traces, the iterations-to-threshold table and
//! self-contained SVG convergence plots.
//!
//! Everything here is a pure function of the run records, so re-emission
//! without re-running reproduces byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use sep_core::{first_crossing, SeriesRow, Vector};

use crate::error::{HarnessError, Result};
use crate::runner::ExperimentRun;

/// Render a float with 17 significant digits, enough for a lossless
/// `f64` round-trip.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Vectors serialize as semicolon-separated 17-digit decimals.
pub fn fmt_vector(v: &Vector) -> String {
    v.as_slice()
        .iter()
        .map(|&c| fmt_f64(c))
        .collect::<Vec<_>>()
        .join(";")
}

fn require_runs(runs: &[ExperimentRun]) -> Result<()> {
    if runs.is_empty() {
        return Err(HarnessError::Config(
            "cannot emit artifacts from an empty run list".into(),
        ));
    }
    Ok(())
}

/// CSV schema: `algorithm,x0,y0,n,E_n,gamma_n,delta_n`, one row per
/// iteration per run, runs in record order.
pub fn emit_csv(runs: &[ExperimentRun], path: &Path) -> Result<()> {
    require_runs(runs)?;
    let mut out = String::from("algorithm,x0,y0,n,E_n,gamma_n,delta_n\n");
    for run in runs {
        let x0 = fmt_vector(&run.x0);
        let y0 = fmt_vector(&run.y0);
        for row in &run.record.series {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                run.algorithm,
                x0,
                y0,
                row.n,
                fmt_f64(row.e),
                fmt_f64(row.gamma),
                fmt_f64(row.delta)
            );
        }
    }
    fs::write(path, out).map_err(|e| HarnessError::io(path, e))
}

/// One run parsed back from the CSV trace.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRun {
    pub algorithm: String,
    pub x0: Vec<f64>,
    pub y0: Vec<f64>,
    pub series: Vec<SeriesRow>,
}

/// Parse a file produced by [`emit_csv`], grouping consecutive rows with
/// the same (algorithm, x0, y0) key into runs.
pub fn parse_csv(text: &str) -> Result<Vec<CsvRun>> {
    let mut lines = text.lines();
    match lines.next() {
        Some("algorithm,x0,y0,n,E_n,gamma_n,delta_n") => {}
        other => {
            return Err(HarnessError::Config(format!(
                "unexpected CSV header: {other:?}"
            )))
        }
    }
    let parse_vec = |s: &str| -> Result<Vec<f64>> {
        s.split(';')
            .map(|c| {
                c.parse::<f64>()
                    .map_err(|e| HarnessError::Config(format!("bad CSV number {c:?}: {e}")))
            })
            .collect()
    };
    let mut runs: Vec<CsvRun> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(HarnessError::Config(format!(
                "CSV line {} has {} fields, expected 7",
                lineno + 2,
                fields.len()
            )));
        }
        let key_alg = fields[0].to_string();
        let x0 = parse_vec(fields[1])?;
        let y0 = parse_vec(fields[2])?;
        let row = SeriesRow {
            n: fields[3]
                .parse()
                .map_err(|e| HarnessError::Config(format!("bad iteration index: {e}")))?,
            e: fields[4]
                .parse()
                .map_err(|e| HarnessError::Config(format!("bad error estimate: {e}")))?,
            gamma: fields[5]
                .parse()
                .map_err(|e| HarnessError::Config(format!("bad stepsize: {e}")))?,
            delta: fields[6]
                .parse()
                .map_err(|e| HarnessError::Config(format!("bad mixing parameter: {e}")))?,
        };
        match runs.last_mut() {
            Some(last) if last.algorithm == key_alg && last.x0 == x0 && last.y0 == y0 => {
                last.series.push(row)
            }
            _ => runs.push(CsvRun {
                algorithm: key_alg,
                x0,
                y0,
                series: vec![row],
            }),
        }
    }
    Ok(runs)
}

fn fmt_threshold(t: f64) -> String {
    format!("{t:e}")
}

fn fmt_point(label: &str, v: &Vector) -> String {
    let coords = v
        .as_slice()
        .iter()
        .map(|c| format!("{c}"))
        .collect::<Vec<_>>()
        .join(", ");
    format!("{label}=({coords})")
}

/// Aligned plain-text table: one block of rows per initial point (one row
/// per threshold), one column per algorithm, cells holding the
/// iterations-to-threshold count or an em dash when the threshold was
/// never crossed.
pub fn emit_iteration_table(
    runs: &[ExperimentRun],
    thresholds: &[f64],
    path: &Path,
) -> Result<()> {
    require_runs(runs)?;
    let text = render_iteration_table(runs, thresholds);
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

/// The table body as a string (also used by the reproduction report).
pub fn render_iteration_table(runs: &[ExperimentRun], thresholds: &[f64]) -> String {
    // Column and row orders follow first appearance in the record list.
    let mut algorithms: Vec<&str> = Vec::new();
    let mut points: Vec<(&Vector, &Vector)> = Vec::new();
    for run in runs {
        if !algorithms.contains(&run.algorithm.as_str()) {
            algorithms.push(&run.algorithm);
        }
        if !points.iter().any(|(x, y)| **x == run.x0 && **y == run.y0) {
            points.push((&run.x0, &run.y0));
        }
    }

    let cell = |x0: &Vector, y0: &Vector, alg: &str, t: f64| -> String {
        runs.iter()
            .find(|r| r.algorithm == alg && &r.x0 == x0 && &r.y0 == y0)
            .and_then(|r| first_crossing(&r.record.series, t))
            .map(|c| c.to_string())
            .unwrap_or_else(|| "\u{2014}".to_string())
    };

    // Assemble rows first, then pad columns.
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut header = vec!["initial point (x0, y0)".to_string(), "E_n".to_string()];
    header.extend(algorithms.iter().map(|a| a.to_string()));
    rows.push(header);
    for (x0, y0) in &points {
        for (k, &t) in thresholds.iter().enumerate() {
            let left = match k {
                0 => fmt_point("x0", x0),
                1 => fmt_point("y0", y0),
                _ => String::new(),
            };
            let mut row = vec![left, fmt_threshold(t)];
            row.extend(algorithms.iter().map(|a| cell(x0, y0, a, t)));
            rows.push(row);
        }
        // A table with fewer thresholds than the two label lines still
        // needs the y0 line.
        if thresholds.len() < 2 {
            let mut row = vec![fmt_point("y0", y0), String::new()];
            row.extend(std::iter::repeat_n(String::new(), algorithms.len()));
            rows.push(row);
        }
    }

    let cols = rows[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c == 0 {
                // Left-align the point column.
                let _ = write!(line, "{cell:<width$}", width = widths[c]);
            } else {
                let _ = write!(line, "  {cell:>width$}", width = widths[c]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
        if i == 0 {
            let total: usize = widths.iter().sum::<usize>() + 2 * (cols - 1);
            out.push_str(&"-".repeat(total));
            out.push('\n');
        }
    }
    out
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

const PLOT_WIDTH: f64 = 960.0;
const PLOT_HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 230.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;

/// Error estimates below this are clipped before taking logs.
pub const PLOT_FLOOR: f64 = 1e-16;

/// Self-contained SVG line plot of `E_n` against `n`, one polyline per
/// run, log10 vertical axis clipped at [`PLOT_FLOOR`].
pub fn emit_convergence_plot(runs: &[ExperimentRun], title: &str, path: &Path) -> Result<()> {
    require_runs(runs)?;
    let svg = render_convergence_plot(runs, title);
    fs::write(path, svg).map_err(|e| HarnessError::io(path, e))
}

pub fn render_convergence_plot(runs: &[ExperimentRun], title: &str) -> String {
    let inner_w = PLOT_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let inner_h = PLOT_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

    let mut n_max = 1u64;
    let mut log_min = f64::INFINITY;
    let mut log_max = f64::NEG_INFINITY;
    for run in runs {
        for row in &run.record.series {
            n_max = n_max.max(row.n);
            let l = row.e.max(PLOT_FLOOR).log10();
            log_min = log_min.min(l);
            log_max = log_max.max(l);
        }
    }
    if !log_min.is_finite() {
        log_min = -1.0;
        log_max = 1.0;
    }
    let mut dec_min = log_min.floor() as i64;
    let mut dec_max = log_max.ceil() as i64;
    if dec_min == dec_max {
        dec_min -= 1;
        dec_max += 1;
    }

    let x_of = |n: u64| MARGIN_LEFT + inner_w * (n as f64 - 1.0) / ((n_max.max(2) - 1) as f64);
    let y_of = |e: f64| {
        let l = e.max(PLOT_FLOOR).log10();
        MARGIN_TOP + inner_h * (dec_max as f64 - l) / (dec_max - dec_min) as f64
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {PLOT_WIDTH} {PLOT_HEIGHT}\" \
         font-family=\"Helvetica, Arial, sans-serif\" font-size=\"13\">"
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{PLOT_WIDTH}\" height=\"{PLOT_HEIGHT}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">{}</text>",
        MARGIN_LEFT + inner_w / 2.0,
        escape_xml(title)
    );

    // Axes frame.
    let _ = writeln!(
        svg,
        "<rect x=\"{MARGIN_LEFT:.2}\" y=\"{MARGIN_TOP:.2}\" width=\"{inner_w:.2}\" \
         height=\"{inner_h:.2}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>"
    );

    // Horizontal decade grid and labels (thinned to at most ~12 lines).
    let decades = (dec_max - dec_min) as usize;
    let dec_step = (decades / 12 + 1) as i64;
    let mut d = dec_min;
    while d <= dec_max {
        let y = y_of(10f64.powi(d as i32));
        let _ = writeln!(
            svg,
            "<line x1=\"{MARGIN_LEFT:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>",
            MARGIN_LEFT + inner_w
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">1e{}</text>",
            MARGIN_LEFT - 8.0,
            y + 4.0,
            d
        );
        d += dec_step;
    }

    // Vertical ticks at nice iteration counts.
    for &frac in &[0.0, 0.25, 0.5, 0.75, 1.0] {
        let n = 1 + ((n_max.max(2) - 1) as f64 * frac).round() as u64;
        let x = x_of(n);
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" \
             stroke=\"black\" stroke-width=\"1\"/>",
            MARGIN_TOP + inner_h,
            MARGIN_TOP + inner_h + 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{n}</text>",
            MARGIN_TOP + inner_h + 20.0
        );
    }

    // Axis labels.
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">iteration n</text>",
        MARGIN_LEFT + inner_w / 2.0,
        PLOT_HEIGHT - 18.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"20\" y=\"{:.2}\" text-anchor=\"middle\" \
         transform=\"rotate(-90 20 {:.2})\">E_n = ||Ax - By||^2</text>",
        MARGIN_TOP + inner_h / 2.0,
        MARGIN_TOP + inner_h / 2.0
    );

    // Polylines, decimated to at most ~4000 points each.
    for (i, run) in runs.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let series = &run.record.series;
        if series.is_empty() {
            continue;
        }
        let stride = series.len() / 4000 + 1;
        let mut points = String::new();
        for (j, row) in series.iter().enumerate() {
            if j % stride != 0 && j != series.len() - 1 {
                continue;
            }
            let _ = write!(points, "{:.2},{:.2} ", x_of(row.n), y_of(row.e));
        }
        if series.len() == 1 {
            let _ = writeln!(
                svg,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>",
                x_of(series[0].n),
                y_of(series[0].e)
            );
        } else {
            let _ = writeln!(
                svg,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
                points.trim_end()
            );
        }
    }

    // Legend.
    for (i, run) in runs.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = MARGIN_TOP + 14.0 + 18.0 * i as f64;
        let x = MARGIN_LEFT + inner_w + 16.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
             stroke=\"{color}\" stroke-width=\"2\"/>",
            y - 4.0,
            x + 22.0,
            y - 4.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{y:.2}\">{}</text>",
            x + 28.0,
            escape_xml(&legend_label(run, runs))
        );
    }

    svg.push_str("</svg>\n");
    svg
}

/// Legend entries carry the initial point index when the same algorithm
/// appears for several starting points.
fn legend_label(run: &ExperimentRun, all: &[ExperimentRun]) -> String {
    let same_label_other_point = all
        .iter()
        .any(|r| r.algorithm == run.algorithm && (r.x0 != run.x0 || r.y0 != run.y0));
    if !same_label_other_point {
        return run.algorithm.clone();
    }
    let mut points: Vec<(&Vector, &Vector)> = Vec::new();
    for r in all {
        if !points.iter().any(|(x, y)| **x == r.x0 && **y == r.y0) {
            points.push((&r.x0, &r.y0));
        }
    }
    let idx = points
        .iter()
        .position(|(x, y)| **x == run.x0 && **y == run.y0)
        .unwrap_or(0);
    format!("{} (start {})", run.algorithm, idx + 1)
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use sep_core::{RunRecord, RunStatus};

    fn dummy_run(label: &str, es: &[f64]) -> ExperimentRun {
        let series = es
            .iter()
            .enumerate()
            .map(|(i, &e)| SeriesRow {
                n: i as u64 + 1,
                e,
                gamma: 0.5,
                delta: 0.1,
            })
            .collect::<Vec<_>>();
        ExperimentRun {
            algorithm: label.to_string(),
            x0: Vector::from_slice(&[0.1, 0.2]).unwrap(),
            y0: Vector::from_slice(&[0.3, 0.4]).unwrap(),
            record: RunRecord {
                crossings: vec![(1e-2, first_crossing(&series, 1e-2))],
                final_x: Vector::from_slice(&[0.0, 0.0]).unwrap(),
                final_y: Vector::from_slice(&[0.0, 0.0]).unwrap(),
                steps: es.len() as u64 - 1,
                status: RunStatus::MaxIters,
                series,
            },
            wall_seconds: 0.0,
        }
    }

    #[test]
    fn fmt_f64_round_trips_exactly() {
        for v in [0.0357, 1.0 / 3.0, 5.0_f64.sqrt(), 1e-300, -0.6557] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn serialized_floats_pin_the_17_digit_format() {
        assert_eq!(fmt_f64(0.0357), "3.5700000000000003e-2");
        assert_eq!(fmt_f64(0.0), "0.0000000000000000e0");
        assert_eq!(fmt_f64(-1.0), "-1.0000000000000000e0");
        let v = Vector::from_slice(&[0.5, 0.25]).unwrap();
        assert_eq!(
            fmt_vector(&v),
            "5.0000000000000000e-1;2.5000000000000000e-1"
        );
    }

    #[test]
    fn csv_round_trips_through_the_parser() {
        let runs = vec![dummy_run("A", &[1.0, 0.5, 0.001]), dummy_run("B", &[2.0, 0.3])];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("runs.csv");
        emit_csv(&runs, &path).unwrap();
        let parsed = parse_csv(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0].algorithm, "A");
        assert_eq!(parsed[0].series, runs[0].record.series);
        assert_eq!(parsed[1].series, runs[1].record.series);
        assert_eq!(parsed[0].x0, vec![0.1, 0.2]);
    }

    #[test]
    fn table_shows_counts_and_dashes() {
        let runs = vec![dummy_run("A", &[1.0, 0.5, 0.001])];
        let text = render_iteration_table(&runs, &[1e-2, 1e-6]);
        assert!(text.contains("1e-2"));
        assert!(text.contains('2'), "{text}");
        assert!(text.contains('\u{2014}'), "{text}");
    }

    #[test]
    fn svg_is_self_contained_and_scriptless() {
        let runs = vec![dummy_run("A", &[1.0, 0.5, 0.001]), dummy_run("B", &[2.0, 0.3])];
        let svg = render_convergence_plot(&runs, "demo");
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("demo"));
        assert!(!svg.contains("<script"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn zero_error_estimates_are_clipped_not_dropped() {
        let runs = vec![dummy_run("A", &[1.0, 0.0])];
        let svg = render_convergence_plot(&runs, "clip");
        assert!(svg.contains("<polyline"));
    }
}
