//! Clustering quality measures and the per-method evaluation report.
//!
//! Accuracy is a majority-vote proxy: each cluster predicts its most common
//! true label, each point takes the prediction of the largest cluster holding
//! it, and uncovered points fall back to the global majority label.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Clustering, PointId, Subspace, SubspaceCluster};

pub const DEFAULT_NOISE_LABEL: &str = "noise";

/// Per-point truth plus, optionally, the planted clusters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub labels: Vec<String>,
    pub noise_label: String,
    #[serde(default)]
    pub hidden_clusters: Vec<SubspaceCluster>,
}

impl GroundTruth {
    pub fn new(labels: Vec<String>, noise_label: impl Into<String>, hidden_clusters: Vec<SubspaceCluster>) -> Result<Self> {
        let truth = GroundTruth {
            labels,
            noise_label: noise_label.into(),
            hidden_clusters,
        };
        truth.validate()?;
        Ok(truth)
    }

    /// Derives hidden clusters from the labels: one full-space cluster per
    /// non-noise label, in label order.
    pub fn from_labels(labels: Vec<String>, noise_label: impl Into<String>, d: usize) -> Result<Self> {
        let noise_label = noise_label.into();
        let mut groups: BTreeMap<&str, Vec<PointId>> = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if *l != noise_label {
                groups.entry(l.as_str()).or_default().push(i);
            }
        }
        let hidden = groups
            .into_values()
            .map(|members| SubspaceCluster::new(Subspace::full(d), members))
            .collect();
        GroundTruth::new(labels, noise_label, hidden)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.labels.len();
        for h in &self.hidden_clusters {
            if let Some(&bad) = h.members.iter().find(|&&id| id >= n) {
                return Err(Error::PointOutOfRange { id: bad, n });
            }
        }
        Ok(())
    }

    fn check_against(&self, c: &Clustering) -> Result<()> {
        let n = self.n();
        for cluster in &c.clusters {
            if let Some(&bad) = cluster.members.iter().find(|&&id| id >= n) {
                return Err(Error::PointOutOfRange { id: bad, n });
            }
        }
        Ok(())
    }
}

/// One row of the comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub method: String,
    pub no_of_clusters: usize,
    pub clustering_time_ms: f64,
    pub accuracy: f64,
    pub coverage: f64,
    pub io_entropy: f64,
    pub f1_measure: f64,
    pub calculation_time_ms: f64,
}

/// Fraction of the `n` points that belong to at least one cluster.
pub fn coverage(c: &Clustering, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::MetricUndefined("coverage of an empty dataset".into()));
    }
    Ok(c.covered_points() as f64 / n as f64)
}

/// One minus the size-weighted, `log(L)`-normalized label entropy of the
/// clusters. 1 means every cluster is label-pure; an empty clustering scores 0.
pub fn io_entropy(c: &Clustering, truth: &GroundTruth) -> Result<f64> {
    truth.check_against(c)?;
    if c.clusters.is_empty() {
        return Ok(0.0);
    }
    let distinct = {
        let mut ls: Vec<&String> = truth.labels.iter().collect();
        ls.sort();
        ls.dedup();
        ls.len()
    };
    if distinct < 2 {
        return Ok(1.0);
    }
    let total: usize = c.clusters.iter().map(SubspaceCluster::len).sum();
    let log_l = (distinct as f64).ln();
    let mut weighted = 0.0;
    for cluster in &c.clusters {
        let size = cluster.len() as f64;
        let mut freq: BTreeMap<&str, usize> = BTreeMap::new();
        for &id in &cluster.members {
            *freq.entry(truth.labels[id].as_str()).or_default() += 1;
        }
        let h: f64 = freq
            .values()
            .map(|&k| {
                let p = k as f64 / size;
                -p * p.ln()
            })
            .sum();
        weighted += (size / total as f64) * (h / log_l);
    }
    Ok((1.0 - weighted).clamp(0.0, 1.0))
}

/// Mean over hidden clusters of the best F1 against any found cluster.
/// Only member sets are compared.
pub fn f1_measure(c: &Clustering, truth: &GroundTruth) -> Result<f64> {
    truth.check_against(c)?;
    if truth.hidden_clusters.is_empty() {
        return Err(Error::MetricUndefined("F1 needs at least one hidden cluster".into()));
    }
    let mut sum = 0.0;
    for h in &truth.hidden_clusters {
        let best = c
            .clusters
            .iter()
            .map(|f| {
                let hits = f.overlap(&h.members);
                if hits == 0 {
                    return 0.0;
                }
                let recall = hits as f64 / h.len() as f64;
                let precision = hits as f64 / f.len() as f64;
                2.0 * precision * recall / (precision + recall)
            })
            .fold(0.0, f64::max);
        sum += best;
    }
    Ok(sum / truth.hidden_clusters.len() as f64)
}

/// Majority label, ties to the lexicographically smallest.
fn majority<'a>(labels: impl IntoIterator<Item = &'a str>) -> Option<&'a str> {
    let mut freq: BTreeMap<&str, usize> = BTreeMap::new();
    for l in labels {
        *freq.entry(l).or_default() += 1;
    }
    // BTreeMap iterates labels ascending; max_by keeps the last maximum, so reverse
    freq.into_iter()
        .rev()
        .max_by_key(|&(_, count)| count)
        .map(|(l, _)| l)
}

/// Majority-vote accuracy proxy.
pub fn accuracy(c: &Clustering, truth: &GroundTruth) -> Result<f64> {
    truth.check_against(c)?;
    let n = truth.n();
    if n == 0 {
        return Err(Error::MetricUndefined("accuracy of an empty dataset".into()));
    }
    let fallback = majority(truth.labels.iter().map(String::as_str)).unwrap_or_default();
    let cluster_labels: Vec<&str> = c
        .clusters
        .iter()
        .map(|cl| majority(cl.members.iter().map(|&id| truth.labels[id].as_str())).unwrap_or(fallback))
        .collect();

    // index of the largest cluster holding each point, ties to the lowest index
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (ci, cl) in c.clusters.iter().enumerate() {
        for &id in &cl.members {
            match owner[id] {
                Some(prev) if c.clusters[prev].len() >= cl.len() => {}
                _ => owner[id] = Some(ci),
            }
        }
    }
    let correct = (0..n)
        .filter(|&i| {
            let predicted = owner[i].map_or(fallback, |ci| cluster_labels[ci]);
            predicted == truth.labels[i]
        })
        .count();
    Ok(correct as f64 / n as f64)
}

/// Computes every metric for one clustering; `calculation_time_ms` is the
/// wall time spent in this call.
pub fn evaluate(c: &Clustering, truth: &GroundTruth) -> Result<EvaluationReport> {
    let start = Instant::now();
    let accuracy = accuracy(c, truth)?;
    let coverage = coverage(c, truth.n())?;
    let io_entropy = io_entropy(c, truth)?;
    let f1_measure = f1_measure(c, truth)?;
    let calculation_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(EvaluationReport {
        method: c.algorithm.clone(),
        no_of_clusters: c.clusters.len(),
        clustering_time_ms: c.clustering_time_ms,
        accuracy,
        coverage,
        io_entropy,
        f1_measure,
        calculation_time_ms,
    })
}
