use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "densub", version, about = "Density-based subspace clustering benchmark")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset with planted subspace clusters.
    Generate(GenerateArgs),
    /// Run clustering algorithms on a dataset and write a report.
    Run(RunArgs),
    /// Score existing clustering files against a ground truth.
    Evaluate(EvaluateArgs),
    /// Turn report files into plot series (TSV, optionally SVG).
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FileFormat {
    Csv,
    Arff,
}

impl From<FileFormat> for densub::dataio::DatasetFormat {
    fn from(f: FileFormat) -> Self {
        match f {
            FileFormat::Csv => densub::dataio::DatasetFormat::Csv,
            FileFormat::Arff => densub::dataio::DatasetFormat::Arff,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct GeneratorArgs {
    /// 6 attributes x 1595 points with four planted clusters and 10% noise.
    #[arg(long)]
    pub paper_shape: bool,
    /// Number of attributes.
    #[arg(long, conflicts_with = "paper_shape")]
    pub dims: Option<usize>,
    /// Number of points, noise included.
    #[arg(long, conflicts_with = "paper_shape")]
    pub points: Option<usize>,
    /// Number of planted clusters.
    #[arg(long, conflicts_with = "paper_shape")]
    pub clusters: Option<usize>,
    /// Fraction of uniform noise points (default 0.1).
    #[arg(long, conflicts_with = "paper_shape")]
    pub noise_fraction: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub generator: GeneratorArgs,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(short, long)]
    pub output_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FileFormat>,
    /// TOML file; its [generate] section supplies defaults for these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Dataset file (.csv or .arff).
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FileFormat>,
    /// Attribute holding the class labels (name or zero-based index).
    #[arg(long)]
    pub class_attribute: Option<String>,
    /// Ground-truth JSON as written by `generate`.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Label marking noise points when the truth comes from class labels.
    #[arg(long)]
    pub noise_label: Option<String>,
    /// Generate the input instead of reading it.
    #[command(flatten)]
    pub generator: GeneratorArgs,
    /// Comma-separated subset of subclu, fires, inscy.
    #[arg(short, long, value_delimiter = ',')]
    pub algorithms: Option<Vec<String>>,
    /// Neighbourhood radius (all algorithms).
    #[arg(long)]
    pub eps: Option<f64>,
    /// Neighbourhood size, the point itself included, for a core point.
    #[arg(long)]
    pub minpts: Option<usize>,
    /// INSCY grid intervals per dimension.
    #[arg(long)]
    pub xi: Option<usize>,
    /// INSCY overlap fraction at which a cluster counts as redundant.
    #[arg(long)]
    pub redundancy_factor: Option<f64>,
    /// FIRES: most similar bases kept per base cluster.
    #[arg(long)]
    pub k_neighbors: Option<usize>,
    /// FIRES: best-merge pairs a base needs to become a merge cluster.
    #[arg(long)]
    pub mu: Option<usize>,
    /// FIRES: shared k-list entries that make two bases a best-merge pair.
    #[arg(long)]
    pub min_clu: Option<usize>,
    /// Min-max scale every attribute to [0, 1] before clustering.
    #[arg(long)]
    pub normalize: bool,
    /// Run the algorithms concurrently.
    #[arg(long)]
    pub parallel: bool,
    /// Also write plot series for the report.
    #[arg(long)]
    pub plots: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(short, long)]
    pub output_dir: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Clustering files written by `run`.
    #[arg(required = true)]
    pub clusterings: Vec<PathBuf>,
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Dataset whose class labels serve as truth when --truth is absent.
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FileFormat>,
    #[arg(long)]
    pub class_attribute: Option<String>,
    #[arg(long)]
    pub noise_label: Option<String>,
    #[arg(short, long)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Report CSV files.
    #[arg(required = true)]
    pub reports: Vec<PathBuf>,
    #[arg(short, long)]
    pub output_dir: Option<PathBuf>,
    /// Also write one SVG bar chart per series.
    #[arg(long)]
    pub svg: bool,
}
