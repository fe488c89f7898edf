//! FIRES: filter-refinement subspace clustering.
//!
//! 1. Pre-clustering: DBSCAN on every single dimension yields 1-D base
//!    clusters; bases smaller than a quarter of the average base size are
//!    dropped.
//! 2. Approximation: bases are compared by shared-object count. Each base
//!    keeps its `k_neighbors` most similar bases (itself included, zero
//!    similarity excluded). Two bases whose lists share at least `min_clu`
//!    entries form a best-merge pair; a base in at least `mu` pairs is a
//!    best-merge cluster. Connected groups of best-merge clusters are merged
//!    into one candidate, everything else passes through as a 1-D candidate.
//! 3. Refinement: DBSCAN on each candidate's points in the candidate subspace,
//!    with `eps` scaled by `sqrt(|subspace|)`.
//!
//! Phase 2 works on the base-cluster similarity matrix only, so its cost is
//! quadratic in the number of bases and independent of `2^d`.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::dbscan::{dbscan, dbscan_subset, DensityParams};
use crate::error::{Error, Result};
use crate::model::{sorted_intersection_len, Clustering, Dataset, PointId, Subspace, SubspaceCluster};

pub const NAME: &str = "FIRES";

/// Bases below this fraction of the mean base size are discarded.
pub const BASE_PRUNE_FRACTION: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiresParams {
    pub density: DensityParams,
    pub k_neighbors: usize,
    pub mu: usize,
    pub min_clu: usize,
}

impl FiresParams {
    pub const DEFAULT_K_NEIGHBORS: usize = 3;
    pub const DEFAULT_MU: usize = 1;
    pub const DEFAULT_MIN_CLU: usize = 1;

    pub fn new(density: DensityParams) -> Self {
        FiresParams {
            density,
            k_neighbors: Self::DEFAULT_K_NEIGHBORS,
            mu: Self::DEFAULT_MU,
            min_clu: Self::DEFAULT_MIN_CLU,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.density.validate()?;
        for (name, v) in [("k_neighbors", self.k_neighbors), ("mu", self.mu), ("min_clu", self.min_clu)] {
            if v < 1 {
                return Err(Error::InvalidParameter(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }
}

/// A 1-D cluster found by DBSCAN on a single dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseCluster {
    pub dim: usize,
    /// Ascending point ids.
    pub members: Vec<PointId>,
}

impl BaseCluster {
    pub fn new(dim: usize, mut members: Vec<PointId>) -> Self {
        members.sort_unstable();
        members.dedup();
        BaseCluster { dim, members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// A subspace cluster approximation awaiting refinement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub subspace: Subspace,
    pub members: Vec<PointId>,
    /// Indices of the base clusters this candidate was built from.
    pub sources: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Approximations {
    pub candidates: Vec<Candidate>,
    /// Number of pairwise similarity evaluations performed.
    pub similarity_evaluations: usize,
}

/// Phase 1: per-dimension DBSCAN followed by small-base pruning.
pub fn pre_cluster(dataset: &Dataset, density: DensityParams) -> Result<Vec<BaseCluster>> {
    let mut bases = Vec::new();
    for dim in 0..dataset.d() {
        let outcome = dbscan(dataset, &Subspace::single(dim), density)?;
        bases.extend(outcome.clusters.into_iter().map(|m| BaseCluster::new(dim, m)));
    }
    Ok(prune_small_bases(bases))
}

/// Drops bases with fewer than [`BASE_PRUNE_FRACTION`] of the mean base size.
pub fn prune_small_bases(bases: Vec<BaseCluster>) -> Vec<BaseCluster> {
    if bases.is_empty() {
        return bases;
    }
    let mean = bases.iter().map(BaseCluster::len).sum::<usize>() as f64 / bases.len() as f64;
    let threshold = BASE_PRUNE_FRACTION * mean;
    bases.into_iter().filter(|b| b.len() as f64 >= threshold).collect()
}

/// Shared-object count.
pub fn similarity(a: &BaseCluster, b: &BaseCluster) -> usize {
    sorted_intersection_len(&a.members, &b.members)
}

/// For each base, the indices of its `k` most similar bases (itself included),
/// ranked by similarity descending then index ascending. Zero similarity never
/// qualifies.
pub fn k_most_similar(sim: &[Vec<usize>], k: usize) -> Vec<Vec<usize>> {
    sim.iter()
        .map(|row| {
            let mut ranked: Vec<usize> = (0..row.len()).filter(|&j| row[j] > 0).collect();
            ranked.sort_by(|&x, &y| row[y].cmp(&row[x]).then(x.cmp(&y)));
            ranked.truncate(k);
            ranked.sort_unstable();
            ranked
        })
        .collect()
}

/// Phase 2: merge similar base clusters into subspace cluster approximations.
pub fn generate_approximations(bases: &[BaseCluster], params: &FiresParams) -> Approximations {
    let m = bases.len();
    let mut sim = vec![vec![0usize; m]; m];
    let mut evaluations = 0;
    for i in 0..m {
        for j in i..m {
            let s = similarity(&bases[i], &bases[j]);
            evaluations += 1;
            sim[i][j] = s;
            sim[j][i] = s;
        }
    }

    let lists = k_most_similar(&sim, params.k_neighbors);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut pair_count = vec![0usize; m];
    for a in 0..m {
        for b in a + 1..m {
            if sorted_intersection_len(&lists[a], &lists[b]) >= params.min_clu {
                pairs.push((a, b));
                pair_count[a] += 1;
                pair_count[b] += 1;
            }
        }
    }
    let best_merge: Vec<bool> = pair_count.iter().map(|&c| c >= params.mu).collect();

    // union-find over best-merge clusters joined by best-merge pairs
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for &(a, b) in &pairs {
        if best_merge[a] && best_merge[b] {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                let (lo, hi) = (ra.min(rb), ra.max(rb));
                parent[hi] = lo;
            }
        }
    }

    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..m {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }

    let candidates = groups
        .into_values()
        .map(|sources| {
            let subspace = Subspace::new(sources.iter().map(|&i| bases[i].dim));
            let mut members: Vec<PointId> = sources.iter().flat_map(|&i| bases[i].members.iter().copied()).collect();
            members.sort_unstable();
            members.dedup();
            Candidate {
                subspace,
                members,
                sources,
            }
        })
        .collect();

    Approximations {
        candidates,
        similarity_evaluations: evaluations,
    }
}

/// Phase 3: DBSCAN each candidate's points in its subspace.
///
/// `eps` grows with `sqrt(|subspace|)`. Refinements yielding no cluster are
/// dropped, as are exact duplicates of an earlier refined cluster.
pub fn refine(dataset: &Dataset, candidates: &[Candidate], density: DensityParams) -> Result<Clustering> {
    let clusters = refine_clusters(dataset, candidates, density)?;
    Ok(Clustering::from_clusters(NAME, clusters, dataset.n(), density_params_map(density)))
}

fn refine_clusters(
    dataset: &Dataset,
    candidates: &[Candidate],
    density: DensityParams,
) -> Result<Vec<SubspaceCluster>> {
    density.validate()?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for cand in candidates {
        let scaled = DensityParams {
            eps: density.eps * (cand.subspace.len() as f64).sqrt(),
            minpts: density.minpts,
        };
        let outcome = dbscan_subset(dataset, &cand.members, &cand.subspace, scaled)?;
        for members in outcome.clusters {
            let cluster = SubspaceCluster::new(cand.subspace.clone(), members);
            if seen.insert(cluster.clone()) {
                out.push(cluster);
            }
        }
    }
    Ok(out)
}

/// Runs all three phases.
pub fn fires(dataset: &Dataset, params: &FiresParams) -> Result<Clustering> {
    params.validate()?;
    let bases = pre_cluster(dataset, params.density)?;
    let approx = generate_approximations(&bases, params);
    let clusters = refine_clusters(dataset, &approx.candidates, params.density)?;
    let mut p = density_params_map(params.density);
    p.insert("k_neighbors".into(), params.k_neighbors.to_string());
    p.insert("mu".into(), params.mu.to_string());
    p.insert("min_clu".into(), params.min_clu.to_string());
    Ok(Clustering::from_clusters(NAME, clusters, dataset.n(), p))
}

fn density_params_map(density: DensityParams) -> BTreeMap<String, String> {
    let mut p = BTreeMap::new();
    p.insert("eps".to_string(), density.eps.to_string());
    p.insert("minpts".to_string(), density.minpts.to_string());
    p
}
