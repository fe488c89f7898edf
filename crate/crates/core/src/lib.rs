//! Density-based subspace clustering: subspace-restricted DBSCAN, SUBCLU,
//! FIRES and INSCY, plus evaluation metrics, a synthetic data generator and
//! file I/O for datasets, clusterings and reports.

pub mod algorithm;
pub mod datagen;
pub mod dataio;
pub mod dbscan;
pub mod error;
pub mod fires;
pub mod inscy;
pub mod metrics;
pub mod model;
pub mod subclu;

pub use algorithm::{Algorithm, AlgorithmConfig};
pub use datagen::{generate, paper_shape_spec, GeneratorSpec, PlantedCluster};
pub use dbscan::{dbscan, region_query, DbscanOutcome, DensityParams};
pub use error::{Error, Result};
pub use fires::{fires, FiresParams};
pub use inscy::{inscy, InscyParams};
pub use metrics::{evaluate, EvaluationReport, GroundTruth};
pub use model::{distance, project, Clustering, Dataset, PointId, Subspace, SubspaceCluster};
pub use subclu::subclu;
