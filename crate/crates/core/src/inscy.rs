//! INSCY: grid-indexed, depth-first subspace clustering with in-process
//! redundancy removal.
//!
//! Every dimension's value range is split into `xi` equal-width intervals. A
//! (dimension, interval) pair is a [`Descriptor`]; restricting the index by a
//! descriptor keeps the points falling in that interval, after which points
//! within `eps` of the interval's borders are re-admitted so clusters that
//! straddle a grid line are not cut. The recursion descends into every
//! higher dimension before clustering the current region, so the most
//! specific projections are found first and lower-dimensional shadows of
//! them can be suppressed as soon as they appear.
//!
//! The index is kept as restriction metadata, surviving point ids and
//! per-interval tallies instead of a compressed trie.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dbscan::{dbscan_subset, DensityParams};
use crate::error::{Error, Result};
use crate::model::{Clustering, Dataset, PointId, Subspace, SubspaceCluster};

pub const NAME: &str = "INSCY";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InscyParams {
    pub density: DensityParams,
    /// Grid resolution: intervals per dimension.
    pub xi: usize,
    /// Fraction of a cluster a superspace cluster must cover to suppress it.
    pub redundancy_factor: f64,
}

impl InscyParams {
    pub const DEFAULT_XI: usize = 10;
    pub const DEFAULT_REDUNDANCY_FACTOR: f64 = 1.0;

    pub fn new(density: DensityParams) -> Self {
        InscyParams {
            density,
            xi: Self::DEFAULT_XI,
            redundancy_factor: Self::DEFAULT_REDUNDANCY_FACTOR,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.density.validate()?;
        if self.xi < 1 {
            return Err(Error::InvalidParameter("xi must be at least 1".into()));
        }
        let r = self.redundancy_factor;
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::InvalidParameter(format!("redundancy factor must be in (0, 1], got {r}")));
        }
        Ok(())
    }
}

/// A grid cell along one dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Descriptor {
    pub dim: usize,
    pub interval: usize,
}

/// Equal-width partition of each dimension's observed value range.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    xi: usize,
    ranges: Vec<(f64, f64)>,
}

impl GridSpec {
    pub fn new(dataset: &Dataset, xi: usize) -> Self {
        let ranges = (0..dataset.d())
            .map(|dim| dataset.dimension_range(dim).unwrap_or((0.0, 0.0)))
            .collect();
        GridSpec { xi, ranges }
    }

    pub fn xi(&self) -> usize {
        self.xi
    }

    fn width(&self, dim: usize) -> f64 {
        let (lo, hi) = self.ranges[dim];
        (hi - lo) / self.xi as f64
    }

    /// Interval holding `v`; the maximum lands in the last interval and a
    /// degenerate range puts everything in interval 0.
    pub fn interval_of(&self, dim: usize, v: f64) -> usize {
        let w = self.width(dim);
        if w <= 0.0 {
            return 0;
        }
        let idx = ((v - self.ranges[dim].0) / w).floor();
        if idx <= 0.0 {
            0
        } else {
            (idx as usize).min(self.xi - 1)
        }
    }

    /// `[lo, hi]` of an interval.
    pub fn bounds(&self, desc: Descriptor) -> (f64, f64) {
        let (min, max) = self.ranges[desc.dim];
        let w = self.width(desc.dim);
        if w <= 0.0 {
            return (min, max);
        }
        let lo = min + desc.interval as f64 * w;
        let hi = if desc.interval + 1 == self.xi {
            max
        } else {
            min + (desc.interval + 1) as f64 * w
        };
        (lo, hi)
    }
}

/// A region of the grid index: the restrictions applied so far and the
/// points that survive them.
#[derive(Debug, Clone, PartialEq)]
pub struct ScyTree {
    grid: Arc<GridSpec>,
    restriction: Vec<Descriptor>,
    points: Vec<PointId>,
    /// Points before the most recent restriction; source for border re-admission.
    parent_points: Vec<PointId>,
    counts: Vec<Vec<usize>>,
}

impl ScyTree {
    pub fn xi(&self) -> usize {
        self.grid.xi
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn restriction(&self) -> &[Descriptor] {
        &self.restriction
    }

    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    /// `counts()[dim][interval]`: points of this region in that interval.
    pub fn counts(&self) -> &[Vec<usize>] {
        &self.counts
    }

    /// The subspace spanned by the restricted dimensions.
    pub fn subspace(&self) -> Subspace {
        Subspace::new(self.restriction.iter().map(|d| d.dim))
    }

    fn is_restricted(&self, dim: usize) -> bool {
        self.restriction.iter().any(|d| d.dim == dim)
    }
}

fn tally(dataset: &Dataset, grid: &GridSpec, points: &[PointId]) -> Vec<Vec<usize>> {
    let mut counts = vec![vec![0usize; grid.xi]; dataset.d()];
    for &p in points {
        for (dim, row) in counts.iter_mut().enumerate() {
            row[grid.interval_of(dim, dataset.value(p, dim))] += 1;
        }
    }
    counts
}

/// The unrestricted index over all points.
pub fn build_scytree(dataset: &Dataset, xi: usize) -> Result<ScyTree> {
    if xi < 1 {
        return Err(Error::InvalidParameter("xi must be at least 1".into()));
    }
    let grid = GridSpec::new(dataset, xi);
    let points: Vec<PointId> = (0..dataset.n()).collect();
    let counts = tally(dataset, &grid, &points);
    Ok(ScyTree {
        grid: Arc::new(grid),
        restriction: Vec::new(),
        parent_points: points.clone(),
        points,
        counts,
    })
}

/// Keeps the points of `tree` whose `desc.dim` value falls in `desc.interval`.
pub fn restrict(dataset: &Dataset, tree: &ScyTree, desc: Descriptor) -> Result<ScyTree> {
    if desc.dim >= dataset.d() {
        return Err(Error::DimensionOutOfRange {
            dim: desc.dim,
            d: dataset.d(),
        });
    }
    if desc.interval >= tree.xi() {
        return Err(Error::InvalidParameter(format!(
            "interval {} out of range for xi = {}",
            desc.interval,
            tree.xi()
        )));
    }
    if tree.is_restricted(desc.dim) {
        return Err(Error::InvalidParameter(format!("dimension {} is already restricted", desc.dim)));
    }
    let points: Vec<PointId> = tree
        .points
        .iter()
        .copied()
        .filter(|&p| tree.grid.interval_of(desc.dim, dataset.value(p, desc.dim)) == desc.interval)
        .collect();
    let mut restriction = tree.restriction.clone();
    restriction.push(desc);
    Ok(ScyTree {
        grid: Arc::clone(&tree.grid),
        restriction,
        counts: tally(dataset, &tree.grid, &points),
        points,
        parent_points: tree.points.clone(),
    })
}

/// Re-admits points of the parent region lying within `eps` of the last
/// restricted interval, measured along that interval's dimension.
pub fn merge_with_neighbors(dataset: &Dataset, tree: &ScyTree, eps: f64) -> ScyTree {
    let Some(&last) = tree.restriction.last() else {
        return tree.clone();
    };
    let (lo, hi) = tree.grid.bounds(last);
    let points: Vec<PointId> = tree
        .parent_points
        .iter()
        .copied()
        .filter(|&p| {
            let v = dataset.value(p, last.dim);
            tree.grid.interval_of(last.dim, v) == last.interval || (v >= lo - eps && v <= hi + eps)
        })
        .collect();
    if points.len() == tree.points.len() {
        return tree.clone();
    }
    ScyTree {
        grid: Arc::clone(&tree.grid),
        restriction: tree.restriction.clone(),
        counts: tally(dataset, &tree.grid, &points),
        points,
        parent_points: tree.parent_points.clone(),
    }
}

/// True when the region is too sparse for any point in it to be core.
pub fn prune_recursion(tree: &ScyTree, density: DensityParams) -> bool {
    tree.points.len() < density.minpts
}

/// True when an already found cluster in a strict superspace shares at least
/// `r * |cluster|` members with `cluster`.
pub fn prune_redundancy(cluster: &SubspaceCluster, found: &[SubspaceCluster], r: f64) -> bool {
    let needed = r * cluster.len() as f64;
    found.iter().any(|other| {
        cluster.subspace.is_strict_subset_of(&other.subspace) && other.overlap(&cluster.members) as f64 >= needed
    })
}

/// Which clusters survive [`prune_redundancy`] when clusters are checked from
/// the highest dimensionality down against those already kept.
fn redundancy_mask(clusters: &[SubspaceCluster], r: f64) -> Vec<bool> {
    let mut order: Vec<usize> = (0..clusters.len()).collect();
    order.sort_by(|&a, &b| clusters[b].subspace.len().cmp(&clusters[a].subspace.len()));
    let mut kept: Vec<SubspaceCluster> = Vec::new();
    let mut keep = vec![false; clusters.len()];
    for i in order {
        if !prune_redundancy(&clusters[i], &kept, r) {
            kept.push(clusters[i].clone());
            keep[i] = true;
        }
    }
    keep
}

/// Applies [`prune_redundancy`] to a finished cluster list, checking clusters
/// from the highest dimensionality down against those already kept. Returns
/// the survivors in their original order.
pub fn redundancy_filter(clusters: &[SubspaceCluster], r: f64) -> Vec<SubspaceCluster> {
    clusters
        .iter()
        .zip(redundancy_mask(clusters, r))
        .filter(|&(_, k)| k)
        .map(|(c, _)| c.clone())
        .collect()
}

/// DBSCAN over the region's points in the restricted subspace.
pub fn db_clustering(dataset: &Dataset, tree: &ScyTree, density: DensityParams) -> Result<Vec<SubspaceCluster>> {
    if tree.restriction.is_empty() {
        return Err(Error::EmptySubspace);
    }
    let s = tree.subspace();
    let outcome = dbscan_subset(dataset, &tree.points, &s, density)?;
    Ok(outcome
        .clusters
        .into_iter()
        .map(|members| SubspaceCluster::new(s.clone(), members))
        .collect())
}

/// An INSCY result together with the grid region each cluster came from.
#[derive(Debug, Clone, PartialEq)]
pub struct InscyRun {
    /// Clusters in emission order.
    pub clustering: Clustering,
    /// `regions[i]` is the restriction that produced `clustering.clusters[i]`.
    pub regions: Vec<Vec<Descriptor>>,
    /// Clusters suppressed as redundant.
    pub suppressed: usize,
}

pub fn inscy(dataset: &Dataset, params: &InscyParams) -> Result<Clustering> {
    inscy_traced(dataset, params).map(|run| run.clustering)
}

pub fn inscy_traced(dataset: &Dataset, params: &InscyParams) -> Result<InscyRun> {
    params.validate()?;
    let mut miner = Miner {
        dataset,
        params,
        found: Vec::new(),
        regions: Vec::new(),
        seen: HashSet::new(),
        suppressed: 0,
    };
    if dataset.n() >= params.density.minpts {
        let root = build_scytree(dataset, params.xi)?;
        miner.mine(&root)?;
    }
    // a covering cluster can turn up later in a sibling branch, after the
    // in-process check already let the covered one through
    let keep = redundancy_mask(&miner.found, params.redundancy_factor);
    let before = miner.found.len();
    let (found, regions): (Vec<_>, Vec<_>) = miner
        .found
        .into_iter()
        .zip(miner.regions)
        .zip(keep)
        .filter_map(|(pair, k)| k.then_some(pair))
        .unzip();
    miner.suppressed += before - found.len();
    let mut p = BTreeMap::new();
    p.insert("eps".to_string(), params.density.eps.to_string());
    p.insert("minpts".to_string(), params.density.minpts.to_string());
    p.insert("xi".to_string(), params.xi.to_string());
    p.insert("redundancy_factor".to_string(), params.redundancy_factor.to_string());
    Ok(InscyRun {
        clustering: Clustering::from_clusters(NAME, found, dataset.n(), p),
        regions,
        suppressed: miner.suppressed,
    })
}

struct Miner<'a> {
    dataset: &'a Dataset,
    params: &'a InscyParams,
    found: Vec<SubspaceCluster>,
    regions: Vec<Vec<Descriptor>>,
    seen: HashSet<SubspaceCluster>,
    suppressed: usize,
}

impl Miner<'_> {
    fn mine(&mut self, tree: &ScyTree) -> Result<()> {
        // only dimensions after the last restricted one, so each subspace is reached once
        let first_dim = tree.restriction.last().map_or(0, |d| d.dim + 1);
        for dim in first_dim..self.dataset.d() {
            for interval in 0..tree.xi() {
                let desc = Descriptor { dim, interval };
                if tree.counts[dim][interval] == 0 {
                    continue;
                }
                let restricted = restrict(self.dataset, tree, desc)?;
                let restricted = merge_with_neighbors(self.dataset, &restricted, self.params.density.eps);
                if prune_recursion(&restricted, self.params.density) {
                    continue;
                }
                self.mine(&restricted)?;
                for cluster in db_clustering(self.dataset, &restricted, self.params.density)? {
                    if prune_redundancy(&cluster, &self.found, self.params.redundancy_factor) {
                        self.suppressed += 1;
                        continue;
                    }
                    if self.seen.insert(cluster.clone()) {
                        self.found.push(cluster);
                        self.regions.push(restricted.restriction.clone());
                    }
                }
            }
        }
        Ok(())
    }
}
