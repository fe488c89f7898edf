use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use densub::dataio::{
    read_clustering, read_dataset, read_report, read_truth, write_clustering, write_dataset, write_report,
    write_report_json, write_truth, DatasetFileSpec, DatasetFormat,
};
use densub::{generate, AlgorithmConfig, Clustering, Dataset, EvaluationReport, GroundTruth};

use crate::args::{EvaluateArgs, GenerateArgs, PlotArgs, RunArgs};
use crate::config::{self, InputSource, RunConfig, DEFAULT_SEED};
use crate::error::{CliError, CliResult};
use crate::plot;

pub const DATASET_STEM: &str = "dataset";
pub const TRUTH_FILE: &str = "truth.json";
pub const REPORT_CSV: &str = "report.csv";
pub const REPORT_JSON: &str = "report.json";
pub const ERRORS_CSV: &str = "errors.csv";
pub const PLOTS_DIR: &str = "plots";

fn create_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| densub::Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    Ok(())
}

pub fn cmd_generate(args: &GenerateArgs) -> CliResult<()> {
    let file = config::load(args.config.as_deref())?;
    let seed = args.seed.or(file.generate.seed).unwrap_or(DEFAULT_SEED);
    let spec = config::generator_spec(&args.generator, &file.generate, seed)?
        .ok_or_else(|| CliError::Usage("choose --paper-shape or give --dims and --points".into()))?;
    let format: DatasetFormat = args.format.map(Into::into).or(file.generate.format).unwrap_or(DatasetFormat::Csv);
    let out = args
        .output_dir
        .clone()
        .or(file.generate.output_dir)
        .unwrap_or_else(|| PathBuf::from("."));

    let (dataset, truth) = generate(&spec)?;
    create_dir(&out)?;
    let ext = match format {
        DatasetFormat::Csv => "csv",
        DatasetFormat::Arff => "arff",
    };
    let data_path = out.join(format!("{DATASET_STEM}.{ext}"));
    write_dataset(&dataset, &data_path, format)?;
    write_truth(&truth, &out.join(TRUTH_FILE))?;
    println!("{}", serde_json::to_string_pretty(&spec).expect("generator spec serializes"));
    eprintln!(
        "wrote {} ({} points x {} attributes) and {}",
        data_path.display(),
        dataset.n(),
        dataset.d(),
        out.join(TRUTH_FILE).display()
    );
    Ok(())
}

fn load_truth(path: Option<&Path>, dataset: Option<&Dataset>, noise_label: &str) -> CliResult<GroundTruth> {
    if let Some(path) = path {
        return Ok(read_truth(path)?);
    }
    match dataset.and_then(|ds| ds.labels().map(|l| (ds, l))) {
        Some((ds, labels)) => Ok(GroundTruth::from_labels(labels.to_vec(), noise_label, ds.d())?),
        None => Err(CliError::Usage(
            "no ground truth: pass --truth or name the --class-attribute".into(),
        )),
    }
}

fn check_truth(truth: &GroundTruth, n: usize) -> CliResult<()> {
    if truth.n() != n {
        return Err(CliError::Data(densub::Error::InvalidDataset(format!(
            "ground truth has {} labels but the dataset has {n} points",
            truth.n()
        ))));
    }
    if truth.hidden_clusters.is_empty() {
        return Err(CliError::Data(densub::Error::MetricUndefined(
            "ground truth has no hidden clusters, so F1 is undefined".into(),
        )));
    }
    Ok(())
}

/// Runs each configured algorithm, concurrently if asked; results keep the
/// configured order.
pub fn run_algorithms(
    dataset: &Dataset,
    algorithms: &[AlgorithmConfig],
    parallel: bool,
) -> Vec<densub::Result<Clustering>> {
    if !parallel {
        return algorithms.iter().map(|a| a.run(dataset)).collect();
    }
    thread::scope(|scope| {
        let handles: Vec<_> = algorithms.iter().map(|a| scope.spawn(move || a.run(dataset))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(densub::Error::InvalidParameter("algorithm thread panicked".into()))))
            .collect()
    })
}

fn clustering_file(out: &Path, method: &str) -> PathBuf {
    out.join(format!("{}.clusters", method.to_ascii_lowercase()))
}

pub fn cmd_run(args: &RunArgs) -> CliResult<()> {
    let file = config::load(args.config.as_deref())?;
    let cfg = RunConfig::resolve(args, &file)?;
    execute_run(&cfg)
}

pub fn execute_run(cfg: &RunConfig) -> CliResult<()> {
    let (mut dataset, generated_truth) = match &cfg.input {
        InputSource::File(spec) => (read_dataset(spec)?, None),
        InputSource::Generated(spec) => {
            eprintln!("generating {} x {} dataset with seed {}", spec.n, spec.d, cfg.seed);
            let (ds, truth) = generate(spec)?;
            (ds, Some(truth))
        }
    };
    let truth = match generated_truth {
        Some(t) if cfg.truth.is_none() => t,
        _ => load_truth(cfg.truth.as_deref(), Some(&dataset), &cfg.noise_label)?,
    };
    check_truth(&truth, dataset.n())?;
    if cfg.normalize {
        dataset = dataset.min_max_normalized();
    }
    create_dir(&cfg.output_dir)?;

    let results = run_algorithms(&dataset, &cfg.algorithms, cfg.parallel);
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (alg, result) in cfg.algorithms.iter().zip(results) {
        let name = alg.algorithm().name();
        let outcome = result.and_then(|c| {
            write_clustering(&c, &clustering_file(&cfg.output_dir, name))?;
            densub::evaluate(&c, &truth)
        });
        match outcome {
            Ok(row) => {
                eprintln!(
                    "{name}: {} clusters in {:.1} ms",
                    row.no_of_clusters, row.clustering_time_ms
                );
                rows.push(row);
            }
            Err(e) => {
                eprintln!("{name}: failed: {e}");
                failures.push((name, e.to_string()));
            }
        }
    }
    if !failures.is_empty() {
        write_errors(&cfg.output_dir.join(ERRORS_CSV), &failures)?;
    }
    if rows.is_empty() {
        return Err(CliError::Algorithm("every algorithm failed".into()));
    }
    write_reports(&rows, &cfg.output_dir)?;
    if cfg.emit_plots {
        plot::write_series(&rows, &cfg.output_dir.join(PLOTS_DIR), true)?;
    }
    Ok(())
}

fn write_errors(path: &Path, failures: &[(&str, String)]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["Method", "Error"]).expect("in-memory write");
    for (name, msg) in failures {
        w.write_record([*name, msg.as_str()]).expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    fs::write(path, bytes).map_err(|e| densub::Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    Ok(())
}

fn write_reports(rows: &[EvaluationReport], out: &Path) -> CliResult<()> {
    write_report(rows, &out.join(REPORT_CSV))?;
    write_report_json(rows, &out.join(REPORT_JSON))?;
    print!("{}", densub::dataio::format_report(rows));
    Ok(())
}

/// Scores saved clusterings. Clustering files carry no timing, so the
/// clustering-time column is 0.
pub fn cmd_evaluate(args: &EvaluateArgs) -> CliResult<()> {
    let dataset = match &args.input {
        Some(path) => {
            let format = config::format_of(args.format, None, path)?;
            let mut spec = DatasetFileSpec::new(path, format);
            spec.class_attribute = args.class_attribute.clone();
            Some(read_dataset(&spec)?)
        }
        None => None,
    };
    let noise = args.noise_label.as_deref().unwrap_or(densub::metrics::DEFAULT_NOISE_LABEL);
    let truth = load_truth(args.truth.as_deref(), dataset.as_ref(), noise)?;
    check_truth(&truth, dataset.as_ref().map_or(truth.n(), Dataset::n))?;
    let mut rows = Vec::new();
    for path in &args.clusterings {
        let c = read_clustering(path)?;
        rows.push(densub::evaluate(&c, &truth)?);
    }
    let out = args.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    create_dir(&out)?;
    write_reports(&rows, &out)
}

pub fn cmd_plot(args: &PlotArgs) -> CliResult<()> {
    let mut rows = Vec::new();
    for path in &args.reports {
        rows.extend(read_report(path)?);
    }
    let out = args.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    for path in plot::write_series(&rows, &out, args.svg)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}
