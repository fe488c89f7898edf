//! SUBCLU: bottom-up enumeration of every subspace that holds a
//! density-connected cluster.
//!
//! Level 1 runs DBSCAN on each single dimension. Each following level joins
//! the surviving k-dimensional subspaces into (k+1)-dimensional candidates,
//! drops any candidate with a k-dimensional face that has no cluster, and
//! confirms the rest by running DBSCAN on the candidate restricted to the
//! clustered points of its cheapest face.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::dbscan::{dbscan, dbscan_subset, DensityParams};
use crate::error::Result;
use crate::model::{Clustering, Dataset, PointId, Subspace, SubspaceCluster};

pub const NAME: &str = "SUBCLU";

/// Clusters found at one level of the lattice: subspace -> its clusters.
pub type LevelClusters = BTreeMap<Subspace, Vec<Vec<PointId>>>;

/// The level-k state of the bottom-up search.
#[derive(Debug, Clone, Default)]
pub struct SubcluState {
    pub level: usize,
    pub clusters: LevelClusters,
}

impl SubcluState {
    /// `S_k`: the subspaces with at least one cluster, in lexicographic order.
    pub fn subspaces(&self) -> impl Iterator<Item = &Subspace> {
        self.clusters.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }
}

/// Apriori join of the k-dimensional subspaces in `level`.
///
/// Two subspaces are joined only when they agree on their first k-1
/// dimensions; a candidate survives only if every k-dimensional face is in
/// `level`.
pub fn generate_candidates<'a, I>(level: I) -> Vec<Subspace>
where
    I: IntoIterator<Item = &'a Subspace>,
{
    let sorted: BTreeSet<&Subspace> = level.into_iter().collect();
    let members: Vec<&Subspace> = sorted.iter().copied().collect();
    let mut out = Vec::new();
    for (i, a) in members.iter().enumerate() {
        let k = a.len();
        for b in &members[i + 1..] {
            if k == 0 || b.len() != k || a.dims()[..k - 1] != b.dims()[..k - 1] {
                continue;
            }
            let cand = a.with(b.dims()[k - 1]);
            if cand.facets().iter().all(|f| sorted.contains(&f)) {
                out.push(cand);
            }
        }
    }
    out.sort();
    out
}

/// The k-dimensional face of `cand` whose clusters hold the fewest objects.
///
/// Ties go to the lexicographically smallest face. Returns `None` when no face
/// of `cand` is in `level`.
pub fn best_subspace(cand: &Subspace, level: &LevelClusters) -> Option<Subspace> {
    cand.facets()
        .into_iter()
        .filter_map(|f| {
            level
                .get(&f)
                .map(|clusters| (clusters.iter().map(Vec::len).sum::<usize>(), f))
        })
        .min()
        .map(|(_, f)| f)
}

/// Runs SUBCLU and returns clusters of every level, lowest dimensionality first.
pub fn subclu(dataset: &Dataset, params: DensityParams) -> Result<Clustering> {
    let levels = subclu_levels(dataset, params)?;
    let clusters = levels
        .iter()
        .flat_map(|state| {
            state.clusters.iter().flat_map(|(s, cs)| {
                cs.iter()
                    .map(move |members| SubspaceCluster::new(s.clone(), members.clone()))
            })
        })
        .collect();
    let mut p = BTreeMap::new();
    p.insert("eps".to_string(), params.eps.to_string());
    p.insert("minpts".to_string(), params.minpts.to_string());
    Ok(Clustering::from_clusters(NAME, clusters, dataset.n(), p))
}

/// Runs SUBCLU and returns the state of every non-empty level.
pub fn subclu_levels(dataset: &Dataset, params: DensityParams) -> Result<Vec<SubcluState>> {
    params.validate()?;
    let mut level = SubcluState {
        level: 1,
        clusters: BTreeMap::new(),
    };
    for dim in 0..dataset.d() {
        let s = Subspace::single(dim);
        let outcome = dbscan(dataset, &s, params)?;
        if !outcome.clusters.is_empty() {
            level.clusters.insert(s, outcome.clusters);
        }
    }

    let mut levels = Vec::new();
    while !level.is_empty() {
        let mut next = SubcluState {
            level: level.level + 1,
            clusters: BTreeMap::new(),
        };
        for cand in generate_candidates(level.subspaces()) {
            let Some(best) = best_subspace(&cand, &level.clusters) else {
                continue;
            };
            // Every point of a candidate cluster is clustered in each face, so
            // the union of the best face's clusters loses nothing. Running one
            // DBSCAN over the union (rather than one per parent cluster) keeps
            // border points shared by two parents with the cluster that
            // full-data DBSCAN would give them.
            let mut ids: Vec<PointId> = level.clusters[&best].iter().flatten().copied().collect();
            ids.sort_unstable();
            ids.dedup();
            let outcome = dbscan_subset(dataset, &ids, &cand, params)?;
            let found = dedup_clusters(outcome.clusters);
            if !found.is_empty() {
                next.clusters.insert(cand, found);
            }
        }
        debug_assert!(next
            .subspaces()
            .all(|s| s.facets().iter().all(|f| level.clusters.contains_key(f))));
        levels.push(level);
        level = next;
    }
    Ok(levels)
}

fn dedup_clusters(clusters: Vec<Vec<PointId>>) -> Vec<Vec<PointId>> {
    let mut seen = HashSet::new();
    clusters.into_iter().filter(|c| seen.insert(c.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subspaces(list: &[&[usize]]) -> Vec<Subspace> {
        list.iter().map(|d| Subspace::new(d.iter().copied())).collect()
    }

    #[test]
    fn candidates_from_two_singletons() {
        let s1 = subspaces(&[&[0], &[1]]);
        assert_eq!(generate_candidates(&s1), subspaces(&[&[0, 1]]));
    }

    #[test]
    fn candidate_pruned_by_missing_face() {
        let s2 = subspaces(&[&[0, 1], &[1, 2]]);
        assert!(generate_candidates(&s2).is_empty());
    }

    #[test]
    fn candidate_kept_when_all_faces_present() {
        let s2 = subspaces(&[&[0, 1], &[0, 2], &[1, 2]]);
        assert_eq!(generate_candidates(&s2), subspaces(&[&[0, 1, 2]]));
    }

    #[test]
    fn candidates_match_exhaustive_superset_check() {
        // every 3-subset of 0..5 whose faces are all present
        let s2 = subspaces(&[&[0, 1], &[0, 2], &[1, 2], &[1, 3], &[2, 3], &[0, 3], &[3, 4], &[2, 4]]);
        let present: BTreeSet<Subspace> = s2.iter().cloned().collect();
        let mut expected = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                for c in b + 1..5 {
                    let cand = Subspace::new([a, b, c]);
                    if cand.facets().iter().all(|f| present.contains(f)) {
                        expected.push(cand);
                    }
                }
            }
        }
        assert_eq!(generate_candidates(&s2), expected);
        assert_eq!(expected.len(), 5);
    }

    fn level_with(entries: &[(&[usize], &[usize])]) -> LevelClusters {
        entries
            .iter()
            .map(|(dims, sizes)| {
                let clusters = sizes.iter().map(|&n| (0..n).collect()).collect();
                (Subspace::new(dims.iter().copied()), clusters)
            })
            .collect()
    }

    #[test]
    fn best_subspace_minimizes_total_objects() {
        let level = level_with(&[(&[0, 1], &[70, 50]), (&[0, 2], &[80]), (&[1, 2], &[100, 30])]);
        assert_eq!(best_subspace(&Subspace::new([0, 1, 2]), &level), Some(Subspace::new([0, 2])));
    }

    #[test]
    fn best_subspace_ties_go_lexicographic() {
        let level = level_with(&[(&[1, 2], &[40, 40]), (&[0, 2], &[80])]);
        assert_eq!(best_subspace(&Subspace::new([0, 1, 2]), &level), Some(Subspace::new([0, 2])));
        assert_eq!(best_subspace(&Subspace::new([3, 4, 5]), &level), None);
    }

    #[test]
    fn best_subspace_matches_brute_force() {
        let totals = [17usize, 5, 33, 5, 12];
        let cand = Subspace::new([0, 1, 2, 3, 4]);
        let faces = cand.facets();
        let level: LevelClusters = faces
            .iter()
            .zip(totals)
            .map(|(f, t)| (f.clone(), vec![(0..t).collect::<Vec<_>>()]))
            .collect();
        let (min_total, min_face) = faces.iter().zip(totals).map(|(f, t)| (t, f.clone())).min().unwrap();
        assert_eq!(min_total, 5);
        assert_eq!(best_subspace(&cand, &level), Some(min_face));
    }

    #[test]
    fn sparse_data_yields_empty_clustering() {
        let rows = (0..10).map(|i| vec![i as f64 * 10.0, i as f64 * 7.0]).collect();
        let ds = Dataset::from_rows(rows, 2).unwrap();
        let c = subclu(&ds, DensityParams::new(1.0, 2).unwrap()).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.noise.len(), 10);
        assert!(subclu_levels(&ds, DensityParams::new(1.0, 2).unwrap()).unwrap().is_empty());
    }
}
