//! Subspace-restricted DBSCAN.
//!
//! The scan follows the classic formulation literally: unvisited points are
//! taken in ascending id order, a point whose closed `eps`-ball (itself
//! included) holds fewer than `minpts` points is provisionally noise, and a
//! core point seeds a cluster that grows by joining the neighborhoods of
//! every core point reached. A border point reachable from several clusters
//! stays with the first cluster whose expansion touches it.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Dataset, PointId, Subspace};

/// Neighborhood radius and minimum neighborhood cardinality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityParams {
    pub eps: f64,
    pub minpts: usize,
}

impl DensityParams {
    pub fn new(eps: f64, minpts: usize) -> Result<Self> {
        let params = DensityParams { eps, minpts };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps.is_finite() && self.eps > 0.0) {
            return Err(Error::InvalidParameter(format!("eps must be positive, got {}", self.eps)));
        }
        if self.minpts < 1 {
            return Err(Error::InvalidParameter("minpts must be at least 1".into()));
        }
        Ok(())
    }
}

/// Result of a single DBSCAN run.
#[derive(Debug, Clone, PartialEq)]
pub struct DbscanOutcome {
    /// Clusters in creation order; members ascending. Pairwise disjoint.
    pub clusters: Vec<Vec<PointId>>,
    /// Scanned points left in no cluster, ascending.
    pub noise: Vec<PointId>,
    /// Indexed by dataset point id; `false` for points outside the scanned set.
    pub core_flags: Vec<bool>,
}

/// How region queries are answered. Both strategies return identical neighborhoods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IndexKind {
    #[default]
    Linear,
    Grid,
}

/// All points within `eps` of `p` over the dimensions of `s`, `p` included, ascending.
pub fn region_query(dataset: &Dataset, s: &Subspace, p: PointId, eps: f64) -> Result<Vec<PointId>> {
    dataset.check_point(p)?;
    dataset.check_subspace(s)?;
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be non-negative, got {eps}")));
    }
    let all: Vec<PointId> = (0..dataset.n()).collect();
    Ok(RegionIndex::linear(dataset, s, &all, eps).query(p))
}

/// DBSCAN over every point of the dataset projected onto `s`.
pub fn dbscan(dataset: &Dataset, s: &Subspace, params: DensityParams) -> Result<DbscanOutcome> {
    let all: Vec<PointId> = (0..dataset.n()).collect();
    dbscan_subset(dataset, &all, s, params)
}

/// DBSCAN restricted to the points `ids`: neighborhoods only count points of `ids`.
pub fn dbscan_subset(
    dataset: &Dataset,
    ids: &[PointId],
    s: &Subspace,
    params: DensityParams,
) -> Result<DbscanOutcome> {
    dbscan_with_index(dataset, ids, s, params, IndexKind::Linear)
}

pub fn dbscan_with_index(
    dataset: &Dataset,
    ids: &[PointId],
    s: &Subspace,
    params: DensityParams,
    kind: IndexKind,
) -> Result<DbscanOutcome> {
    params.validate()?;
    dataset.check_subspace(s)?;
    let mut ids = ids.to_vec();
    ids.sort_unstable();
    ids.dedup();
    if let Some(&last) = ids.last() {
        dataset.check_point(last)?;
    }
    let index = match kind {
        IndexKind::Linear => RegionIndex::linear(dataset, s, &ids, params.eps),
        IndexKind::Grid => RegionIndex::grid(dataset, s, &ids, params.eps),
    };
    Ok(run(dataset.n(), &ids, &index, params.minpts))
}

fn run(n: usize, ids: &[PointId], index: &RegionIndex<'_>, minpts: usize) -> DbscanOutcome {
    let mut visited = vec![false; n];
    let mut core_flags = vec![false; n];
    let mut cluster_of: Vec<Option<usize>> = vec![None; n];
    // queue_stamp[q] == c + 1 once q has joined cluster c's expansion queue
    let mut queue_stamp = vec![0usize; n];
    let mut clusters: Vec<Vec<PointId>> = Vec::new();

    for &p in ids {
        if visited[p] {
            continue;
        }
        visited[p] = true;
        let neighbors = index.query(p);
        if neighbors.len() < minpts {
            continue;
        }
        let c = clusters.len();
        let stamp = c + 1;
        core_flags[p] = true;
        cluster_of[p] = Some(c);
        let mut members = vec![p];
        for &q in &neighbors {
            queue_stamp[q] = stamp;
        }
        let mut queue = neighbors;
        let mut head = 0;
        while head < queue.len() {
            let q = queue[head];
            head += 1;
            if !visited[q] {
                visited[q] = true;
                let q_neighbors = index.query(q);
                if q_neighbors.len() >= minpts {
                    core_flags[q] = true;
                    for r in q_neighbors {
                        if queue_stamp[r] != stamp {
                            queue_stamp[r] = stamp;
                            queue.push(r);
                        }
                    }
                }
            }
            if cluster_of[q].is_none() {
                cluster_of[q] = Some(c);
                members.push(q);
            }
        }
        members.sort_unstable();
        clusters.push(members);
    }

    let noise = ids.iter().copied().filter(|&p| cluster_of[p].is_none()).collect();
    DbscanOutcome {
        clusters,
        noise,
        core_flags,
    }
}

/// Neighborhood lookup over a fixed point set in one subspace.
pub(crate) struct RegionIndex<'a> {
    dataset: &'a Dataset,
    subspace: &'a Subspace,
    eps: f64,
    eps_sq: f64,
    backend: Backend,
}

enum Backend {
    Linear(Vec<PointId>),
    Grid(Grid),
}

struct Grid {
    width: f64,
    cells: HashMap<Vec<i64>, Vec<PointId>>,
}

// Slack on the searched cell range so rounding in the cell arithmetic never
// excludes a point the exact distance test would accept.
const GRID_SLACK: f64 = 1e-6;

impl<'a> RegionIndex<'a> {
    pub(crate) fn linear(dataset: &'a Dataset, subspace: &'a Subspace, ids: &[PointId], eps: f64) -> Self {
        RegionIndex {
            dataset,
            subspace,
            eps,
            eps_sq: eps * eps,
            backend: Backend::Linear(ids.to_vec()),
        }
    }

    pub(crate) fn grid(dataset: &'a Dataset, subspace: &'a Subspace, ids: &[PointId], eps: f64) -> Self {
        let width = eps;
        let mut cells: HashMap<Vec<i64>, Vec<PointId>> = HashMap::new();
        for &id in ids {
            let key = subspace
                .dims()
                .iter()
                .map(|&dim| cell_coord(dataset.value(id, dim), width))
                .collect();
            cells.entry(key).or_default().push(id);
        }
        RegionIndex {
            dataset,
            subspace,
            eps,
            eps_sq: eps * eps,
            backend: Backend::Grid(Grid { width, cells }),
        }
    }

    /// Neighbors of `p` (which need not belong to the indexed set), ascending.
    pub(crate) fn query(&self, p: PointId) -> Vec<PointId> {
        match &self.backend {
            Backend::Linear(ids) => ids
                .iter()
                .copied()
                .filter(|&q| self.dataset.dist_sq(p, q, self.subspace) <= self.eps_sq)
                .collect(),
            Backend::Grid(grid) => {
                let reach = self.eps * (1.0 + GRID_SLACK);
                let ranges: Vec<(i64, i64)> = self
                    .subspace
                    .dims()
                    .iter()
                    .map(|&dim| {
                        let v = self.dataset.value(p, dim);
                        (cell_coord(v - reach, grid.width), cell_coord(v + reach, grid.width))
                    })
                    .collect();
                let mut out = Vec::new();
                let mut key: Vec<i64> = ranges.iter().map(|r| r.0).collect();
                loop {
                    if let Some(bucket) = grid.cells.get(&key) {
                        out.extend(
                            bucket
                                .iter()
                                .copied()
                                .filter(|&q| self.dataset.dist_sq(p, q, self.subspace) <= self.eps_sq),
                        );
                    }
                    // odometer increment over the cell ranges
                    let mut j = 0;
                    loop {
                        if j == key.len() {
                            out.sort_unstable();
                            return out;
                        }
                        if key[j] < ranges[j].1 {
                            key[j] += 1;
                            break;
                        }
                        key[j] = ranges[j].0;
                        j += 1;
                    }
                }
            }
        }
    }
}

fn cell_coord(v: f64, width: f64) -> i64 {
    (v / width).floor() as i64
}
