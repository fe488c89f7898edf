//! Dataset, clustering, ground-truth and report files.
//!
//! * Datasets: CSV (comma separated, header row, `.` decimals) and ARFF
//!   (numeric attributes plus one nominal class attribute).
//! * Clusterings: `# algorithm`, `# param` and `# clusters` header comments,
//!   then one `dims | members` line per cluster preceded by a
//!   `# cluster i size k` comment, then a final `noise | ids` line.
//! * Reports: CSV with the fixed header [`REPORT_HEADER`], or JSON.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{EvaluationReport, GroundTruth};
use crate::model::{Clustering, Dataset, PointId, Subspace, SubspaceCluster};

pub const REPORT_HEADER: &str =
    "Method,NoOfClusters,ClusteringTimeMs,Accuracy,Coverage,IOEntropy,F1Measure,CalculationTimeMs";

/// Column name used for labels when writing CSV.
pub const CLASS_COLUMN: &str = "class";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetFormat {
    Arff,
    Csv,
}

impl DatasetFormat {
    /// Guesses the format from the file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "arff" => Some(DatasetFormat::Arff),
            "csv" => Some(DatasetFormat::Csv),
            _ => None,
        }
    }
}

/// Which attribute carries the ground-truth label: a name, or a zero-based
/// column index when no attribute has that name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetFileSpec {
    pub path: PathBuf,
    pub format: DatasetFormat,
    pub class_attribute: Option<String>,
}

impl DatasetFileSpec {
    pub fn new(path: impl Into<PathBuf>, format: DatasetFormat) -> Self {
        DatasetFileSpec {
            path: path.into(),
            format,
            class_attribute: None,
        }
    }

    pub fn with_class(mut self, class: impl Into<String>) -> Self {
        self.class_attribute = Some(class.into());
        self
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_dataset(spec: &DatasetFileSpec) -> Result<Dataset> {
    let text = read_text(&spec.path)?;
    let source = spec.path.display().to_string();
    let class = spec.class_attribute.as_deref();
    match spec.format {
        DatasetFormat::Csv => parse_csv(&text, &source, class),
        DatasetFormat::Arff => parse_arff(&text, &source, class),
    }
}

fn resolve_class(names: &[String], class: &str) -> Result<usize> {
    if let Some(i) = names.iter().position(|n| n == class) {
        return Ok(i);
    }
    match class.parse::<usize>() {
        Ok(i) if i < names.len() => Ok(i),
        _ => Err(Error::Config(format!("class attribute '{class}' not found"))),
    }
}

fn parse_number(field: &str, source: &str, line: usize, column: &str) -> Result<f64> {
    let field = field.trim();
    if field.is_empty() || field == "?" {
        return Err(Error::parse(source, line, format!("missing value in column '{column}'")));
    }
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::parse(
            source,
            line,
            format!("non-numeric value '{field}' in column '{column}'"),
        )),
    }
}

/// Parses CSV text. Every column except the class column must be numeric;
/// without an explicit class attribute a column named `class` is used.
pub fn parse_csv(text: &str, source: &str, class: Option<&str>) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let csv_err = |e: csv::Error| {
        let line = e.position().map_or(0, |p| p.line() as usize);
        Error::parse(source, line, e.to_string())
    };
    let header: Vec<String> = reader
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(Error::parse(source, 1, "missing header row"));
    }
    let class_idx = match class {
        Some(c) => Some(resolve_class(&header, c)?),
        None => header.iter().position(|h| h == CLASS_COLUMN),
    };
    let names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(i, _)| Some(i) != class_idx)
        .map(|(_, h)| h.clone())
        .collect();
    if names.is_empty() {
        return Err(Error::parse(source, 1, "no numeric attributes"));
    }

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let mut row = Vec::with_capacity(names.len());
        for (i, field) in record.iter().enumerate() {
            if Some(i) == class_idx {
                let label = field.trim();
                if label.is_empty() || label == "?" {
                    return Err(Error::parse(source, line, "missing class label"));
                }
                labels.push(label.to_string());
            } else {
                row.push(parse_number(field, source, line, &header[i])?);
            }
        }
        rows.push(row);
    }
    let d = names.len();
    Dataset::new(rows, d, names, class_idx.map(|_| labels))
}

#[derive(Debug, Clone, PartialEq)]
enum ArffType {
    Numeric,
    Nominal(Vec<String>),
}

fn unquote(s: &str) -> &str {
    let s = s.trim();
    if s.len() >= 2 && ((s.starts_with('\'') && s.ends_with('\'')) || (s.starts_with('"') && s.ends_with('"'))) {
        &s[1..s.len() - 1]
    } else {
        s
    }
}

/// Splits `@attribute <name> <type>` into name and type text, honoring quoted names.
fn split_attribute(rest: &str) -> Option<(String, &str)> {
    let rest = rest.trim_start();
    let quote = rest.chars().next().filter(|c| *c == '\'' || *c == '"');
    if let Some(q) = quote {
        let end = rest[1..].find(q)? + 1;
        Some((rest[1..end].to_string(), rest[end + 1..].trim()))
    } else {
        let end = rest.find(char::is_whitespace)?;
        Some((rest[..end].to_string(), rest[end..].trim()))
    }
}

/// Splits a data row on commas, keeping quoted values intact.
fn split_row(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quote: Option<char> = None;
    for ch in line.chars() {
        match (quote, ch) {
            (Some(q), c) if c == q => quote = None,
            (Some(_), c) => cur.push(c),
            (None, '\'' | '"') => quote = Some(ch),
            (None, ',') => out.push(std::mem::take(&mut cur).trim().to_string()),
            (None, c) => cur.push(c),
        }
    }
    out.push(cur.trim().to_string());
    out
}

/// Parses ARFF text: numeric attributes become coordinates, the class
/// attribute (by default the single nominal attribute, if any) becomes labels.
pub fn parse_arff(text: &str, source: &str, class: Option<&str>) -> Result<Dataset> {
    let mut attributes: Vec<(String, ArffType)> = Vec::new();
    let mut in_data = false;
    let mut class_idx: Option<usize> = None;
    let mut rows = Vec::new();
    let mut labels = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if !in_data {
            let lower = line.to_ascii_lowercase();
            if lower.starts_with("@relation") {
                continue;
            }
            if lower.starts_with("@attribute") {
                let (name, ty) = split_attribute(&line["@attribute".len()..])
                    .ok_or_else(|| Error::parse(source, line_no, "malformed @attribute line"))?;
                let ty_lower = ty.to_ascii_lowercase();
                let parsed = if matches!(ty_lower.as_str(), "numeric" | "real" | "integer") {
                    ArffType::Numeric
                } else if ty.starts_with('{') && ty.ends_with('}') {
                    ArffType::Nominal(ty[1..ty.len() - 1].split(',').map(|v| unquote(v).to_string()).collect())
                } else {
                    return Err(Error::parse(
                        source,
                        line_no,
                        format!("unsupported attribute type '{ty}' for '{name}' (only numeric and nominal are supported)"),
                    ));
                };
                attributes.push((name, parsed));
                continue;
            }
            if lower.starts_with("@data") {
                if attributes.is_empty() {
                    return Err(Error::parse(source, line_no, "@data before any @attribute"));
                }
                let names: Vec<String> = attributes.iter().map(|(n, _)| n.clone()).collect();
                class_idx = match class {
                    Some(c) => Some(resolve_class(&names, c)?),
                    None => {
                        let nominal: Vec<usize> = attributes
                            .iter()
                            .enumerate()
                            .filter(|(_, (_, t))| matches!(t, ArffType::Nominal(_)))
                            .map(|(i, _)| i)
                            .collect();
                        match nominal.as_slice() {
                            [] => None,
                            [i] => Some(*i),
                            _ => {
                                return Err(Error::Config(
                                    "several nominal attributes; name the class attribute".into(),
                                ))
                            }
                        }
                    }
                };
                for (i, (name, ty)) in attributes.iter().enumerate() {
                    if Some(i) != class_idx && matches!(ty, ArffType::Nominal(_)) {
                        return Err(Error::parse(
                            source,
                            line_no,
                            format!("nominal attribute '{name}' is not the class attribute"),
                        ));
                    }
                }
                in_data = true;
                continue;
            }
            return Err(Error::parse(source, line_no, format!("unexpected header line '{line}'")));
        }

        if line.starts_with('{') {
            return Err(Error::parse(source, line_no, "sparse ARFF rows are not supported"));
        }
        let fields = split_row(line);
        if fields.len() != attributes.len() {
            return Err(Error::parse(
                source,
                line_no,
                format!("expected {} values, found {}", attributes.len(), fields.len()),
            ));
        }
        let mut row = Vec::with_capacity(attributes.len());
        for (i, field) in fields.iter().enumerate() {
            let (name, ty) = &attributes[i];
            if Some(i) == class_idx {
                if field.is_empty() || field == "?" {
                    return Err(Error::parse(source, line_no, "missing class label"));
                }
                if let ArffType::Nominal(values) = ty {
                    if !values.iter().any(|v| v == field) {
                        return Err(Error::parse(
                            source,
                            line_no,
                            format!("'{field}' is not a declared value of '{name}'"),
                        ));
                    }
                }
                labels.push(field.clone());
            } else {
                row.push(parse_number(field, source, line_no, name)?);
            }
        }
        rows.push(row);
    }
    if !in_data {
        return Err(Error::parse(source, text.lines().count(), "missing @data section"));
    }
    let names: Vec<String> = attributes
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| Some(i) != class_idx)
        .map(|(_, (n, _))| n)
        .collect();
    if names.is_empty() {
        return Err(Error::parse(source, 1, "no numeric attributes"));
    }
    let d = names.len();
    Dataset::new(rows, d, names, class_idx.map(|_| labels))
}

/// CSV text for a dataset; labels, if any, go in a trailing `class` column.
pub fn format_dataset_csv(dataset: &Dataset) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = dataset.attribute_names().iter().map(String::as_str).collect();
    if dataset.labels().is_some() {
        header.push(CLASS_COLUMN);
    }
    writer.write_record(&header).expect("in-memory write");
    for (i, row) in dataset.rows().enumerate() {
        let mut record: Vec<String> = row.iter().map(f64::to_string).collect();
        if let Some(labels) = dataset.labels() {
            record.push(labels[i].clone());
        }
        writer.write_record(&record).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

pub fn format_dataset_arff(dataset: &Dataset, relation: &str) -> String {
    let mut out = format!("@relation {relation}\n\n");
    for name in dataset.attribute_names() {
        out.push_str(&format!("@attribute {name} numeric\n"));
    }
    if let Some(labels) = dataset.labels() {
        let mut values: Vec<&str> = labels.iter().map(String::as_str).collect();
        values.sort_unstable();
        values.dedup();
        out.push_str(&format!("@attribute {CLASS_COLUMN} {{{}}}\n", values.join(",")));
    }
    out.push_str("\n@data\n");
    for (i, row) in dataset.rows().enumerate() {
        let mut fields: Vec<String> = row.iter().map(f64::to_string).collect();
        if let Some(labels) = dataset.labels() {
            fields.push(labels[i].clone());
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn write_dataset(dataset: &Dataset, path: &Path, format: DatasetFormat) -> Result<()> {
    let text = match format {
        DatasetFormat::Csv => format_dataset_csv(dataset),
        DatasetFormat::Arff => format_dataset_arff(dataset, "synthetic"),
    };
    write_text(path, &text)
}

fn join_ids(ids: &[PointId]) -> String {
    ids.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

/// Text form of a clustering. Timings are not written, so identical runs give
/// identical files.
pub fn format_clustering(c: &Clustering) -> String {
    let mut out = format!("# algorithm {}\n", c.algorithm);
    for (k, v) in &c.params {
        out.push_str(&format!("# param {k} {v}\n"));
    }
    out.push_str(&format!("# clusters {}\n", c.clusters.len()));
    for (i, cluster) in c.clusters.iter().enumerate() {
        out.push_str(&format!("# cluster {i} size {}\n", cluster.len()));
        out.push_str(&format!(
            "{} | {}\n",
            join_ids(cluster.subspace.dims()),
            join_ids(&cluster.members)
        ));
    }
    out.push_str(&format!("noise | {}\n", join_ids(&c.noise)));
    out
}

pub fn write_clustering(c: &Clustering, path: &Path) -> Result<()> {
    write_text(path, &format_clustering(c))
}

fn parse_ids(text: &str, source: &str, line: usize) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(source, line, format!("bad id '{t}'")))
        })
        .collect()
}

pub fn parse_clustering(text: &str, source: &str) -> Result<Clustering> {
    let mut c = Clustering {
        algorithm: String::new(),
        clusters: Vec::new(),
        noise: Vec::new(),
        params: Default::default(),
        clustering_time_ms: 0.0,
    };
    let mut expected_clusters = None;
    let mut saw_noise = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let mut parts = comment.split_whitespace();
            match parts.next() {
                Some("algorithm") => c.algorithm = parts.collect::<Vec<_>>().join(" "),
                Some("param") => {
                    let key = parts
                        .next()
                        .ok_or_else(|| Error::parse(source, line_no, "param without name"))?;
                    c.params.insert(key.to_string(), parts.collect::<Vec<_>>().join(" "));
                }
                Some("clusters") => {
                    expected_clusters = parts.next().and_then(|v| v.parse::<usize>().ok());
                }
                _ => {}
            }
            continue;
        }
        let (left, right) = line
            .split_once('|')
            .ok_or_else(|| Error::parse(source, line_no, "expected 'dims | members'"))?;
        let ids = parse_ids(right, source, line_no)?;
        if left.trim() == "noise" {
            c.noise = ids;
            saw_noise = true;
        } else {
            let dims = parse_ids(left, source, line_no)?;
            if dims.is_empty() {
                return Err(Error::parse(source, line_no, "cluster without dimensions"));
            }
            c.clusters.push(SubspaceCluster::new(Subspace::new(dims), ids));
        }
    }
    if !saw_noise {
        return Err(Error::parse(source, text.lines().count(), "missing noise record"));
    }
    if let Some(k) = expected_clusters {
        if k != c.clusters.len() {
            return Err(Error::parse(
                source,
                text.lines().count(),
                format!("header announces {k} clusters, found {}", c.clusters.len()),
            ));
        }
    }
    Ok(c)
}

pub fn read_clustering(path: &Path) -> Result<Clustering> {
    parse_clustering(&read_text(path)?, &path.display().to_string())
}

pub fn format_report(rows: &[EvaluationReport]) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.method,
            r.no_of_clusters,
            r.clustering_time_ms,
            r.accuracy,
            r.coverage,
            r.io_entropy,
            r.f1_measure,
            r.calculation_time_ms
        ));
    }
    out
}

pub fn write_report(rows: &[EvaluationReport], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::Config("a report needs at least one row".into()));
    }
    if let Some(bad) = rows.iter().find(|r| r.method.contains([',', '\n', '"'])) {
        return Err(Error::Config(format!("method name '{}' cannot appear in a CSV report", bad.method)));
    }
    write_text(path, &format_report(rows))
}

pub fn parse_report(text: &str, source: &str) -> Result<Vec<EvaluationReport>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.trim() == REPORT_HEADER => {}
        Some((i, _)) => return Err(Error::parse(source, i + 1, "unexpected report header")),
        None => return Err(Error::parse(source, 1, "empty report")),
    }
    lines
        .map(|(i, line)| {
            let line_no = i + 1;
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != 8 {
                return Err(Error::parse(source, line_no, format!("expected 8 fields, found {}", fields.len())));
            }
            let num = |j: usize| -> Result<f64> {
                fields[j]
                    .parse::<f64>()
                    .map_err(|_| Error::parse(source, line_no, format!("bad number '{}'", fields[j])))
            };
            Ok(EvaluationReport {
                method: fields[0].to_string(),
                no_of_clusters: fields[1]
                    .parse()
                    .map_err(|_| Error::parse(source, line_no, format!("bad cluster count '{}'", fields[1])))?,
                clustering_time_ms: num(2)?,
                accuracy: num(3)?,
                coverage: num(4)?,
                io_entropy: num(5)?,
                f1_measure: num(6)?,
                calculation_time_ms: num(7)?,
            })
        })
        .collect()
}

pub fn read_report(path: &Path) -> Result<Vec<EvaluationReport>> {
    parse_report(&read_text(path)?, &path.display().to_string())
}

/// JSON export of report rows, keys in lower_snake_case.
pub fn write_report_json(rows: &[EvaluationReport], path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(rows).expect("reports serialize");
    write_text(path, &text)
}

pub fn write_truth(truth: &GroundTruth, path: &Path) -> Result<()> {
    let text = serde_json::to_string(truth).expect("ground truth serializes");
    write_text(path, &text)
}

pub fn read_truth(path: &Path) -> Result<GroundTruth> {
    let text = read_text(path)?;
    let truth: GroundTruth = serde_json::from_str(&text).map_err(|e| {
        Error::parse(path.display().to_string(), e.line(), e.to_string())
    })?;
    truth.validate()?;
    Ok(truth)
}
