//! Plot series derived from report rows: one TSV per measure, and an
//! optional standalone SVG bar chart for each.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use densub::EvaluationReport;

use crate::error::{CliError, CliResult};

type Accessor = fn(&EvaluationReport) -> f64;

/// (file stem, chart title, value accessor)
pub const SERIES: [(&str, &str, Accessor); 6] = [
    ("clustering_time", "Clustering time (ms)", |r| r.clustering_time_ms),
    ("calculation_time", "Calculation time (ms)", |r| r.calculation_time_ms),
    ("accuracy", "Accuracy", |r| r.accuracy),
    ("coverage", "Coverage", |r| r.coverage),
    ("io_entropy", "IO entropy", |r| r.io_entropy),
    ("f1_measure", "F1 measure", |r| r.f1_measure),
];

pub fn series_tsv(rows: &[EvaluationReport], value: Accessor) -> String {
    let mut out = String::from("method\tno_of_clusters\tvalue\n");
    for r in rows {
        let _ = writeln!(out, "{}\t{}\t{}", r.method, r.no_of_clusters, value(r));
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Bar chart with one bar per row, labelled "method (clusters)".
pub fn series_svg(title: &str, rows: &[EvaluationReport], value: Accessor) -> String {
    const BAR: f64 = 60.0;
    const GAP: f64 = 30.0;
    const PLOT_H: f64 = 240.0;
    const TOP: f64 = 50.0;
    const LEFT: f64 = 40.0;
    let width = LEFT * 2.0 + rows.len() as f64 * (BAR + GAP);
    let height = TOP + PLOT_H + 60.0;
    let max = rows.iter().map(value).fold(0.0f64, f64::max);
    let scale = if max > 0.0 { PLOT_H / max } else { 0.0 };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        width / 2.0,
        escape(title)
    );
    let base = TOP + PLOT_H;
    let _ = writeln!(
        svg,
        r##"<line x1="{LEFT}" y1="{base}" x2="{}" y2="{base}" stroke="#333"/>"##,
        width - LEFT
    );
    for (i, r) in rows.iter().enumerate() {
        let v = value(r);
        let h = v * scale;
        let x = LEFT + GAP / 2.0 + i as f64 * (BAR + GAP);
        let cx = x + BAR / 2.0;
        let _ = writeln!(
            svg,
            r##"<rect x="{x}" y="{}" width="{BAR}" height="{h}" fill="#4a7ab5"/>"##,
            base - h
        );
        let _ = writeln!(
            svg,
            r#"<text x="{cx}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            base - h - 4.0,
            v
        );
        let _ = writeln!(
            svg,
            r#"<text x="{cx}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{} ({})</text>"#,
            base + 18.0,
            escape(&r.method),
            r.no_of_clusters
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Writes the six series into `dir`; returns the files written.
pub fn write_series(rows: &[EvaluationReport], dir: &Path, svg: bool) -> CliResult<Vec<PathBuf>> {
    if rows.is_empty() {
        return Err(CliError::Usage("nothing to plot: no report rows".into()));
    }
    fs::create_dir_all(dir).map_err(|e| densub::Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    let mut written = Vec::new();
    for (stem, title, value) in SERIES {
        let mut files = vec![(dir.join(format!("{stem}.tsv")), series_tsv(rows, value))];
        if svg {
            files.push((dir.join(format!("{stem}.svg")), series_svg(title, rows, value)));
        }
        for (path, text) in files {
            fs::write(&path, text).map_err(|e| densub::Error::Io {
                path: path.clone(),
                source: e,
            })?;
            written.push(path);
        }
    }
    Ok(written)
}
