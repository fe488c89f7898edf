//! TOML configuration mirroring the command-line flags, and resolution of
//! flags over file values over defaults.

use std::fs;
use std::path::{Path, PathBuf};

use densub::datagen::{paper_shape_spec, PAPER_SHAPE_EPS, PAPER_SHAPE_MINPTS};
use densub::dataio::{DatasetFileSpec, DatasetFormat};
use densub::{Algorithm, AlgorithmConfig, DensityParams, FiresParams, GeneratorSpec, InscyParams};
use serde::Deserialize;

use crate::args::{FileFormat, GeneratorArgs, RunArgs};
use crate::error::{CliError, CliResult};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_CLUSTERS: usize = 3;
pub const DEFAULT_NOISE_FRACTION: f64 = 0.1;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub input: InputSection,
    #[serde(default)]
    pub generate: GenerateSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub density: DensitySection,
    #[serde(default)]
    pub subclu: DensitySection,
    #[serde(default)]
    pub fires: FiresSection,
    #[serde(default)]
    pub inscy: InscySection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSection {
    pub path: Option<PathBuf>,
    pub format: Option<DatasetFormat>,
    pub class_attribute: Option<String>,
    pub truth: Option<PathBuf>,
    pub noise_label: Option<String>,
    pub normalize: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateSection {
    pub paper_shape: Option<bool>,
    pub dims: Option<usize>,
    pub points: Option<usize>,
    pub clusters: Option<usize>,
    pub noise_fraction: Option<f64>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub format: Option<DatasetFormat>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub algorithms: Option<Vec<String>>,
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub parallel: Option<bool>,
    pub plots: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensitySection {
    pub eps: Option<f64>,
    pub minpts: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiresSection {
    pub eps: Option<f64>,
    pub minpts: Option<usize>,
    pub k_neighbors: Option<usize>,
    pub mu: Option<usize>,
    pub min_clu: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InscySection {
    pub eps: Option<f64>,
    pub minpts: Option<usize>,
    pub xi: Option<usize>,
    pub redundancy_factor: Option<f64>,
}

pub fn load(path: Option<&Path>) -> CliResult<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

pub fn format_of(flag: Option<FileFormat>, file: Option<DatasetFormat>, path: &Path) -> CliResult<DatasetFormat> {
    flag.map(Into::into)
        .or(file)
        .or_else(|| DatasetFormat::from_path(path))
        .ok_or_else(|| {
            CliError::Usage(format!(
                "cannot tell the format of {}; pass --format csv or --format arff",
                path.display()
            ))
        })
}

/// The generator spec selected by flags and the [generate] section, if any.
pub fn generator_spec(flags: &GeneratorArgs, file: &GenerateSection, seed: u64) -> CliResult<Option<GeneratorSpec>> {
    let any_flag = flags.dims.is_some() || flags.points.is_some() || flags.clusters.is_some() || flags.noise_fraction.is_some();
    if flags.paper_shape || (!any_flag && file.paper_shape == Some(true)) {
        return Ok(Some(paper_shape_spec(seed)));
    }
    let dims = flags.dims.or(file.dims);
    let points = flags.points.or(file.points);
    let clusters = flags.clusters.or(file.clusters);
    let noise = flags.noise_fraction.or(file.noise_fraction);
    if dims.is_none() && points.is_none() && clusters.is_none() && noise.is_none() {
        return Ok(None);
    }
    let (Some(d), Some(n)) = (dims, points) else {
        return Err(CliError::Usage("a custom dataset needs both --dims and --points".into()));
    };
    let spec = GeneratorSpec::random_plant(
        d,
        n,
        clusters.unwrap_or(DEFAULT_CLUSTERS),
        noise.unwrap_or(DEFAULT_NOISE_FRACTION),
        seed,
    )?;
    Ok(Some(spec))
}

#[derive(Debug, Clone)]
pub enum InputSource {
    File(DatasetFileSpec),
    Generated(GeneratorSpec),
}

/// Everything `run` needs, after merging flags over the config file.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: InputSource,
    pub truth: Option<PathBuf>,
    pub noise_label: String,
    pub normalize: bool,
    pub algorithms: Vec<AlgorithmConfig>,
    pub output_dir: PathBuf,
    pub parallel: bool,
    pub emit_plots: bool,
    pub seed: u64,
}

impl RunConfig {
    pub fn resolve(args: &RunArgs, file: &FileConfig) -> CliResult<Self> {
        let seed = args.seed.or(file.run.seed).unwrap_or(DEFAULT_SEED);
        let generated = generator_spec(&args.generator, &file.generate, seed)?;
        let input_path = args.input.clone().or_else(|| file.input.path.clone());
        let input = match (input_path, generated) {
            (Some(_), Some(_)) => {
                return Err(CliError::Usage("give either --input or generator flags, not both".into()));
            }
            (Some(path), None) => {
                let format = format_of(args.format, file.input.format, &path)?;
                let mut spec = DatasetFileSpec::new(path, format);
                spec.class_attribute = args.class_attribute.clone().or_else(|| file.input.class_attribute.clone());
                InputSource::File(spec)
            }
            (None, Some(spec)) => InputSource::Generated(spec),
            (None, None) => return Err(CliError::Usage("no input: pass --input or --paper-shape".into())),
        };

        let names = args
            .algorithms
            .clone()
            .or_else(|| file.run.algorithms.clone())
            .unwrap_or_else(|| Algorithm::ALL.iter().map(|a| a.name().to_string()).collect());
        if names.is_empty() {
            return Err(CliError::Usage("at least one algorithm is required".into()));
        }
        let mut algorithms = Vec::new();
        for name in &names {
            let algorithm: Algorithm = name.parse()?;
            if algorithms.iter().any(|a: &AlgorithmConfig| a.algorithm() == algorithm) {
                return Err(CliError::Usage(format!("algorithm {algorithm} listed twice")));
            }
            let config = algorithm_config(algorithm, args, file)?;
            config.validate()?;
            algorithms.push(config);
        }

        Ok(RunConfig {
            input,
            truth: args.truth.clone().or_else(|| file.input.truth.clone()),
            noise_label: args
                .noise_label
                .clone()
                .or_else(|| file.input.noise_label.clone())
                .unwrap_or_else(|| densub::metrics::DEFAULT_NOISE_LABEL.to_string()),
            normalize: args.normalize || file.input.normalize.unwrap_or(false),
            algorithms,
            output_dir: args
                .output_dir
                .clone()
                .or_else(|| file.run.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from(".")),
            parallel: args.parallel || file.run.parallel.unwrap_or(false),
            emit_plots: args.plots || file.run.plots.unwrap_or(false),
            seed,
        })
    }
}

fn density(args: &RunArgs, file: &FileConfig, eps: Option<f64>, minpts: Option<usize>) -> CliResult<DensityParams> {
    let eps = args.eps.or(eps).or(file.density.eps).unwrap_or(PAPER_SHAPE_EPS);
    let minpts = args.minpts.or(minpts).or(file.density.minpts).unwrap_or(PAPER_SHAPE_MINPTS);
    Ok(DensityParams::new(eps, minpts)?)
}

fn algorithm_config(algorithm: Algorithm, args: &RunArgs, file: &FileConfig) -> CliResult<AlgorithmConfig> {
    Ok(match algorithm {
        Algorithm::Subclu => AlgorithmConfig::Subclu(density(args, file, file.subclu.eps, file.subclu.minpts)?),
        Algorithm::Fires => {
            let f = &file.fires;
            let base = FiresParams::new(density(args, file, f.eps, f.minpts)?);
            AlgorithmConfig::Fires(FiresParams {
                k_neighbors: args.k_neighbors.or(f.k_neighbors).unwrap_or(base.k_neighbors),
                mu: args.mu.or(f.mu).unwrap_or(base.mu),
                min_clu: args.min_clu.or(f.min_clu).unwrap_or(base.min_clu),
                ..base
            })
        }
        Algorithm::Inscy => {
            let s = &file.inscy;
            let base = InscyParams::new(density(args, file, s.eps, s.minpts)?);
            AlgorithmConfig::Inscy(InscyParams {
                xi: args.xi.or(s.xi).unwrap_or(base.xi),
                redundancy_factor: args.redundancy_factor.or(s.redundancy_factor).unwrap_or(base.redundancy_factor),
                ..base
            })
        }
    })
}
