//! Uniform entry point over the three subspace clustering algorithms, with
//! whole-algorithm wall-clock timing.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dbscan::DensityParams;
use crate::error::{Error, Result};
use crate::fires::{self, FiresParams};
use crate::inscy::{self, InscyParams};
use crate::model::{Clustering, Dataset};
use crate::subclu;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Subclu,
    Fires,
    Inscy,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Subclu, Algorithm::Fires, Algorithm::Inscy];

    /// Report name, as it appears in the `Method` column.
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Subclu => subclu::NAME,
            Algorithm::Fires => fires::NAME,
            Algorithm::Inscy => inscy::NAME,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "subclu" => Ok(Algorithm::Subclu),
            "fires" => Ok(Algorithm::Fires),
            "inscy" => Ok(Algorithm::Inscy),
            other => Err(Error::Config(format!(
                "unknown algorithm '{other}' (expected subclu, fires or inscy)"
            ))),
        }
    }
}

/// An algorithm together with its full parameter set.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgorithmConfig {
    Subclu(DensityParams),
    Fires(FiresParams),
    Inscy(InscyParams),
}

impl AlgorithmConfig {
    /// Default parameters for `algorithm` around the shared density settings.
    pub fn with_defaults(algorithm: Algorithm, density: DensityParams) -> Self {
        match algorithm {
            Algorithm::Subclu => AlgorithmConfig::Subclu(density),
            Algorithm::Fires => AlgorithmConfig::Fires(FiresParams::new(density)),
            Algorithm::Inscy => AlgorithmConfig::Inscy(InscyParams::new(density)),
        }
    }

    pub fn algorithm(&self) -> Algorithm {
        match self {
            AlgorithmConfig::Subclu(_) => Algorithm::Subclu,
            AlgorithmConfig::Fires(_) => Algorithm::Fires,
            AlgorithmConfig::Inscy(_) => Algorithm::Inscy,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AlgorithmConfig::Subclu(p) => p.validate(),
            AlgorithmConfig::Fires(p) => p.validate(),
            AlgorithmConfig::Inscy(p) => p.validate(),
        }
    }

    /// Runs the algorithm and stores its wall time in `clustering_time_ms`.
    pub fn run(&self, dataset: &Dataset) -> Result<Clustering> {
        self.validate()?;
        let start = Instant::now();
        let mut c = match self {
            AlgorithmConfig::Subclu(p) => subclu::subclu(dataset, *p)?,
            AlgorithmConfig::Fires(p) => fires::fires(dataset, p)?,
            AlgorithmConfig::Inscy(p) => inscy::inscy(dataset, p)?,
        };
        c.clustering_time_ms = start.elapsed().as_secs_f64() * 1000.0;
        Ok(c)
    }
}
