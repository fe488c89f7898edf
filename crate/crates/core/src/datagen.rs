//! Deterministic synthetic data with planted subspace clusters.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`) seeded with the spec's 64-bit
//! seed, so a spec always yields the same dataset on every platform. Points
//! are emitted cluster by cluster in spec order, followed by the noise points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{GroundTruth, DEFAULT_NOISE_LABEL};
use crate::model::{Dataset, PointId, Subspace, SubspaceCluster};

/// `eps` used for the 6 x 1595 benchmark dataset.
pub const PAPER_SHAPE_EPS: f64 = 0.05;
/// `minpts` used for the 6 x 1595 benchmark dataset.
pub const PAPER_SHAPE_MINPTS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedCluster {
    pub subspace: Subspace,
    pub size: usize,
    /// One coordinate per dataset dimension; only the subspace dims are used.
    pub center: Vec<f64>,
    /// Standard deviation in each subspace dimension.
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub d: usize,
    pub n: usize,
    pub clusters: Vec<PlantedCluster>,
    pub noise_fraction: f64,
    pub value_range: (f64, f64),
    pub seed: u64,
}

impl GeneratorSpec {
    /// Points not assigned to a planted cluster.
    pub fn noise_count(&self) -> usize {
        self.n.saturating_sub(self.clusters.iter().map(|c| c.size).sum())
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::Infeasible("need at least one dimension".into()));
        }
        let (lo, hi) = self.value_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Infeasible(format!("value range ({lo}, {hi}) is empty")));
        }
        if !(0.0..=1.0).contains(&self.noise_fraction) {
            return Err(Error::Infeasible(format!(
                "noise fraction {} outside [0, 1]",
                self.noise_fraction
            )));
        }
        for (i, c) in self.clusters.iter().enumerate() {
            if c.subspace.is_empty() || c.subspace.dims().iter().any(|&j| j >= self.d) {
                return Err(Error::Infeasible(format!("cluster {i} has subspace {} invalid for d = {}", c.subspace, self.d)));
            }
            if c.center.len() != self.d {
                return Err(Error::Infeasible(format!(
                    "cluster {i} center has {} coordinates, expected {}",
                    c.center.len(),
                    self.d
                )));
            }
            if !(c.spread.is_finite() && c.spread > 0.0) || c.center.iter().any(|v| !v.is_finite()) {
                return Err(Error::Infeasible(format!("cluster {i} has a non-finite center or spread")));
            }
        }
        let planted: usize = self.clusters.iter().map(|c| c.size).sum();
        if planted > self.n {
            return Err(Error::Infeasible(format!("cluster sizes sum to {planted} > n = {}", self.n)));
        }
        let expected_noise = (self.noise_fraction * self.n as f64).round() as usize;
        if self.n - planted != expected_noise {
            return Err(Error::Infeasible(format!(
                "cluster sizes sum to {planted}, leaving {} noise points, but noise fraction {} of {} requires {expected_noise}",
                self.n - planted,
                self.noise_fraction,
                self.n
            )));
        }
        Ok(())
    }

    /// Spreads `n - round(noise_fraction * n)` points over `k` clusters placed
    /// at random in random subspaces of 2..=min(4, d) dimensions.
    pub fn random_plant(d: usize, n: usize, k: usize, noise_fraction: f64, seed: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Infeasible("need at least one dimension".into()));
        }
        if !(0.0..=1.0).contains(&noise_fraction) {
            return Err(Error::Infeasible(format!("noise fraction {noise_fraction} outside [0, 1]")));
        }
        let noise = (noise_fraction * n as f64).round() as usize;
        let planted = n - noise.min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005e_edc1_u64);
        let clusters = (0..k)
            .map(|i| {
                let size = planted / k + usize::from(i < planted % k);
                let max_dims = d.min(4);
                let min_dims = 2.min(max_dims);
                let dims = rng.gen_range(min_dims..=max_dims);
                let mut all: Vec<usize> = (0..d).collect();
                for j in 0..dims {
                    let pick = rng.gen_range(j..d);
                    all.swap(j, pick);
                }
                let center = (0..d).map(|_| rng.gen_range(0.15..0.85)).collect();
                PlantedCluster {
                    subspace: Subspace::new(all[..dims].iter().copied()),
                    size,
                    center,
                    spread: 0.02,
                }
            })
            .collect();
        let spec = GeneratorSpec {
            d,
            n,
            clusters,
            noise_fraction,
            value_range: (0.0, 1.0),
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn cluster_label(i: usize) -> String {
    format!("cluster_{i}")
}

/// Generates the dataset and its ground truth.
pub fn generate(spec: &GeneratorSpec) -> Result<(Dataset, GroundTruth)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (lo, hi) = spec.value_range;
    let mut rows = Vec::with_capacity(spec.n);
    let mut labels = Vec::with_capacity(spec.n);
    let mut hidden = Vec::new();

    for (ci, c) in spec.clusters.iter().enumerate() {
        let first: PointId = rows.len();
        for _ in 0..c.size {
            let row: Vec<f64> = (0..spec.d)
                .map(|j| {
                    if c.subspace.contains(j) {
                        let z: f64 = rng.sample(StandardNormal);
                        c.center[j] + c.spread * z
                    } else {
                        rng.gen_range(lo..hi)
                    }
                })
                .collect();
            rows.push(row);
            labels.push(cluster_label(ci));
        }
        if c.size > 0 {
            hidden.push(SubspaceCluster::new(c.subspace.clone(), (first..rows.len()).collect()));
        }
    }
    for _ in 0..spec.noise_count() {
        rows.push((0..spec.d).map(|_| rng.gen_range(lo..hi)).collect());
        labels.push(DEFAULT_NOISE_LABEL.to_string());
    }

    let names = (0..spec.d).map(|j| format!("a{j}")).collect();
    let dataset = Dataset::new(rows, spec.d, names, Some(labels.clone()))?;
    let truth = GroundTruth::new(labels, DEFAULT_NOISE_LABEL, hidden)?;
    Ok((dataset, truth))
}

/// The 6-attribute, 1595-point benchmark shape: four Gaussian clusters in 2-
/// to 4-dimensional subspaces of the unit cube plus 10% uniform noise.
pub fn paper_shape_spec(seed: u64) -> GeneratorSpec {
    let plant = |dims: &[usize], size: usize, at: &[(usize, f64)], spread: f64| {
        let mut center = vec![0.5; 6];
        for &(j, v) in at {
            center[j] = v;
        }
        PlantedCluster {
            subspace: Subspace::new(dims.iter().copied()),
            size,
            center,
            spread,
        }
    };
    GeneratorSpec {
        d: 6,
        n: 1595,
        clusters: vec![
            plant(&[0, 1], 400, &[(0, 0.25), (1, 0.30)], 0.025),
            plant(&[2, 3, 4], 380, &[(2, 0.70), (3, 0.25), (4, 0.60)], 0.02),
            plant(&[1, 2, 4, 5], 355, &[(1, 0.75), (2, 0.30), (4, 0.20), (5, 0.70)], 0.02),
            plant(&[3, 5], 300, &[(3, 0.75), (5, 0.25)], 0.025),
        ],
        noise_fraction: 0.1,
        value_range: (0.0, 1.0),
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_shape_dimensions() {
        let spec = paper_shape_spec(42);
        spec.validate().unwrap();
        let (ds, truth) = generate(&spec).unwrap();
        assert_eq!((ds.n(), ds.d()), (1595, 6));
        assert_eq!(truth.hidden_clusters.len(), 4);
        assert!(truth.hidden_clusters.iter().all(|h| (2..=4).contains(&h.subspace.len())));
        assert_eq!(spec.noise_count(), 160);
    }

    #[test]
    fn same_seed_same_data() {
        let a = generate(&paper_shape_spec(7)).unwrap();
        let b = generate(&paper_shape_spec(7)).unwrap();
        assert_eq!(a, b);
        let c = generate(&paper_shape_spec(8)).unwrap();
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn all_noise_spec() {
        let spec = GeneratorSpec {
            d: 3,
            n: 50,
            clusters: vec![PlantedCluster {
                subspace: Subspace::new([0]),
                size: 0,
                center: vec![0.5; 3],
                spread: 0.1,
            }],
            noise_fraction: 1.0,
            value_range: (0.0, 1.0),
            seed: 1,
        };
        let (ds, truth) = generate(&spec).unwrap();
        assert_eq!(ds.n(), 50);
        assert!(truth.labels.iter().all(|l| l == DEFAULT_NOISE_LABEL));
        assert!(truth.hidden_clusters.is_empty());
    }

    #[test]
    fn infeasible_specs_rejected() {
        let mut spec = paper_shape_spec(1);
        spec.n = 1000;
        assert!(matches!(generate(&spec), Err(Error::Infeasible(_))));
        let mut spec = paper_shape_spec(1);
        spec.noise_fraction = 0.5;
        assert!(generate(&spec).is_err());
        let mut spec = paper_shape_spec(1);
        spec.clusters[0].subspace = Subspace::new([6]);
        assert!(generate(&spec).is_err());
    }

    #[test]
    fn planted_cluster_is_tight_in_its_subspace_only() {
        let spec = GeneratorSpec {
            d: 3,
            n: 1000,
            clusters: vec![PlantedCluster {
                subspace: Subspace::new([0, 1]),
                size: 1000,
                center: vec![0.4, 0.6, 0.5],
                spread: 0.01,
            }],
            noise_fraction: 0.0,
            value_range: (0.0, 1.0),
            seed: 99,
        };
        let (ds, truth) = generate(&spec).unwrap();
        let members = &truth.hidden_clusters[0].members;
        let tight = members
            .iter()
            .filter(|&&i| (ds.value(i, 0) - 0.4).abs() <= 0.03 && (ds.value(i, 1) - 0.6).abs() <= 0.03)
            .count();
        assert!(tight as f64 >= 0.99 * members.len() as f64, "{tight}");
        let (lo, hi) = ds.dimension_range(2).unwrap();
        assert!(hi - lo >= 0.8);
    }

    #[test]
    fn labels_match_hidden_clusters() {
        let (_, truth) = generate(&paper_shape_spec(3)).unwrap();
        for (i, h) in truth.hidden_clusters.iter().enumerate() {
            assert!(h.members.iter().all(|&m| truth.labels[m] == cluster_label(i)));
        }
    }

    #[test]
    fn random_plant_is_valid() {
        let spec = GeneratorSpec::random_plant(3, 100, 3, 0.1, 5).unwrap();
        assert_eq!(spec.clusters.iter().map(|c| c.size).sum::<usize>(), 90);
        let (ds, _) = generate(&spec).unwrap();
        assert_eq!((ds.n(), ds.d()), (100, 3));
        assert!(GeneratorSpec::random_plant(1, 10, 1, 0.0, 5).is_ok());
    }
}
