//! Deterministic CSV/JSON emission and a minimal SVG log-log plotter.
//!
//! CSV is the interface of record (schema `parameter,value_low,value_high,
//! bound,ratio`, bit-identical across runs with the same config on the same
//! build); the JSON outcome carries verdicts, slopes, thresholds and a full
//! config echo; SVG plots are diagnostic only.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::Result;
use crate::experiments::{EquivalenceCheck, RateReport, TheoremOutcome};
use crate::fit::{RatioThresholds, Verdict};

/// The fixed CSV header.
pub const CSV_HEADER: &str = "parameter,value_low,value_high,bound,ratio";

/// Renders a rate report as CSV text (header + one row per grid point).
pub fn report_to_csv(report: &RateReport) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (i, &(t, lo, hi)) in report.grid.iter().enumerate() {
        let bound = report.bound_values[i];
        let ratio = report.ratios[i];
        // shortest round-trip float formatting: deterministic per build
        writeln!(out, "{t},{lo},{hi},{bound},{ratio}").expect("string write");
    }
    out
}

pub fn write_report_csv(path: &Path, report: &RateReport) -> Result<()> {
    fs::write(path, report_to_csv(report))?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct PointRow {
    parameter: f64,
    value_low: f64,
    value_high: f64,
    bound: f64,
    ratio: f64,
}

#[derive(Debug, Serialize)]
struct ReportJson {
    statement: String,
    verdict: Verdict,
    fitted_slope: Option<f64>,
    thresholds: RatioThresholds,
    points: Vec<PointRow>,
}

#[derive(Debug, Serialize)]
struct OutcomeJson<'a> {
    experiment: &'a str,
    config: &'a RunConfig,
    reports: Vec<ReportJson>,
    equivalence: &'a [EquivalenceCheck],
    version: &'a str,
}

fn report_json(statement: &str, report: &RateReport) -> ReportJson {
    ReportJson {
        statement: statement.to_string(),
        verdict: report.verdict,
        fitted_slope: report.fitted_slope,
        thresholds: report.thresholds,
        points: report
            .grid
            .iter()
            .enumerate()
            .map(|(i, &(t, lo, hi))| PointRow {
                parameter: t,
                value_low: lo,
                value_high: hi,
                bound: report.bound_values[i],
                ratio: report.ratios[i],
            })
            .collect(),
    }
}

/// Serializes a theorem outcome (reports in statement order + implications).
pub fn outcome_to_json(
    experiment: &str,
    config: &RunConfig,
    outcome: &TheoremOutcome,
) -> Result<String> {
    let reports = outcome
        .statement_ids
        .iter()
        .map(|id| report_json(id, &outcome.reports[id]))
        .collect();
    let doc = OutcomeJson {
        experiment,
        config,
        reports,
        equivalence: &outcome.equivalence,
        version: crate::VERSION,
    };
    Ok(serde_json::to_string_pretty(&doc).expect("serializable outcome") + "\n")
}

/// Serializes a single-report outcome (relation (7)).
pub fn single_report_to_json(
    experiment: &str,
    config: &RunConfig,
    report: &RateReport,
) -> Result<String> {
    let doc = OutcomeJson {
        experiment,
        config,
        reports: vec![report_json(&report.quantity_name, report)],
        equivalence: &[],
        version: crate::VERSION,
    };
    Ok(serde_json::to_string_pretty(&doc).expect("serializable outcome") + "\n")
}

/// Writes the resolved config sidecar.
pub fn write_config_sidecar(path: &Path, config: &RunConfig) -> Result<()> {
    let text = serde_json::to_string_pretty(config).expect("serializable config") + "\n";
    fs::write(path, text)?;
    Ok(())
}

// ─────────────────────────────────────────────────────────────────────────
// Minimal SVG log-log plots
// ─────────────────────────────────────────────────────────────────────────

const PLOT_W: f64 = 640.0;
const PLOT_H: f64 = 480.0;
const MARGIN: f64 = 60.0;
const SERIES_COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Writes a log-log plot with one polyline per series. Points with
/// non-positive coordinates are skipped (log scale).
pub fn write_loglog_svg(
    path: &Path,
    title: &str,
    series: &[(&str, Vec<(f64, f64)>)],
) -> Result<()> {
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for (_, pts) in series {
        for &(x, y) in pts {
            if x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite() {
                xs.push(x.log10());
                ys.push(y.log10());
            }
        }
    }
    let (x_min, x_max) = span(&xs);
    let (y_min, y_max) = span(&ys);
    let to_px = |lx: f64, ly: f64| -> (f64, f64) {
        let px = MARGIN + (lx - x_min) / (x_max - x_min) * (PLOT_W - 2.0 * MARGIN);
        let py = PLOT_H - MARGIN - (ly - y_min) / (y_max - y_min) * (PLOT_H - 2.0 * MARGIN);
        (px, py)
    };

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{PLOT_W}" height="{PLOT_H}" viewBox="0 0 {PLOT_W} {PLOT_H}">"#
    )
    .unwrap();
    writeln!(
        svg,
        r#"<rect width="{PLOT_W}" height="{PLOT_H}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="monospace" font-size="14">{}</text>"#,
        PLOT_W / 2.0,
        xml_escape(title)
    )
    .unwrap();
    // frame
    writeln!(
        svg,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        PLOT_W - 2.0 * MARGIN,
        PLOT_H - 2.0 * MARGIN
    )
    .unwrap();
    // decade ticks
    for e in (x_min.floor() as i64)..=(x_max.ceil() as i64) {
        let lx = e as f64;
        if lx < x_min || lx > x_max {
            continue;
        }
        let (px, _) = to_px(lx, y_min);
        writeln!(
            svg,
            r##"<line x1="{px}" y1="{}" x2="{px}" y2="{}" stroke="#cccccc"/>"##,
            MARGIN,
            PLOT_H - MARGIN
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{px}" y="{}" text-anchor="middle" font-family="monospace" font-size="11">1e{e}</text>"#,
            PLOT_H - MARGIN + 18.0
        )
        .unwrap();
    }
    for e in (y_min.floor() as i64)..=(y_max.ceil() as i64) {
        let ly = e as f64;
        if ly < y_min || ly > y_max {
            continue;
        }
        let (_, py) = to_px(x_min, ly);
        writeln!(
            svg,
            r##"<line x1="{}" y1="{py}" x2="{}" y2="{py}" stroke="#cccccc"/>"##,
            MARGIN,
            PLOT_W - MARGIN
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{}" y="{py}" text-anchor="end" font-family="monospace" font-size="11">1e{e}</text>"#,
            MARGIN - 6.0
        )
        .unwrap();
    }
    // series
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = SERIES_COLORS[i % SERIES_COLORS.len()];
        let path_pts: Vec<String> = pts
            .iter()
            .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
            .map(|&(x, y)| {
                let (px, py) = to_px(x.log10(), y.log10());
                format!("{px:.2},{py:.2}")
            })
            .collect();
        if path_pts.is_empty() {
            continue;
        }
        writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            path_pts.join(" ")
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="12" fill="{color}">{}</text>"#,
            MARGIN + 8.0,
            MARGIN + 16.0 + 16.0 * i as f64,
            xml_escape(name)
        )
        .unwrap();
    }
    writeln!(svg, "</svg>").unwrap();
    fs::write(path, svg)?;
    Ok(())
}

fn span(values: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-9 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::big_o_ratio_test;
    use crate::fit::ParamLimit;
    use crate::spectrum::NormInterval;

    fn sample_report() -> RateReport {
        let values: Vec<(f64, NormInterval)> = (1..=6)
            .map(|j| {
                let t = 2f64.powi(-j);
                (
                    t,
                    NormInterval {
                        lower: t.sqrt() * 0.99,
                        upper: t.sqrt(),
                    },
                )
            })
            .collect();
        big_o_ratio_test(
            "q",
            &values,
            |t| t.sqrt(),
            ParamLimit::ToZero,
            &RatioThresholds::default(),
        )
        .unwrap()
    }

    #[test]
    fn csv_has_exact_header_and_rows() {
        let text = report_to_csv(&sample_report());
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        assert_eq!(lines.count(), 6);
        // deterministic: same report renders identically
        assert_eq!(text, report_to_csv(&sample_report()));
    }

    #[test]
    fn svg_writer_produces_valid_looking_output() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("plot.svg");
        let series = vec![
            ("value", vec![(0.5, 0.7), (0.25, 0.5), (0.125, 0.35)]),
            ("bound", vec![(0.5, 0.71), (0.25, 0.5), (0.125, 0.354)]),
        ];
        write_loglog_svg(&path, "test <plot>", &series).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("<svg"));
        assert!(text.contains("polyline"));
        assert!(text.contains("&lt;plot&gt;"));
        assert!(text.trim_end().ends_with("</svg>"));
    }
}
