//! Shared data model: datasets, subspaces, subspace clusters and clusterings.
//!
//! Point ids are dense indices `0..n` in file order. Every algorithm in this
//! crate breaks ties by ascending id, so all outputs are deterministic.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier of a point: its row index in the dataset.
pub type PointId = usize;

/// An immutable `n x d` matrix of finite coordinates with optional class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: Vec<f64>,
    n: usize,
    d: usize,
    labels: Option<Vec<String>>,
    attribute_names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset from rows. Attribute names default to `a0..a{d-1}`.
    pub fn from_rows(rows: Vec<Vec<f64>>, d: usize) -> Result<Self> {
        let names = (0..d).map(|j| format!("a{j}")).collect();
        Self::new(rows, d, names, None)
    }

    pub fn new(
        rows: Vec<Vec<f64>>,
        d: usize,
        attribute_names: Vec<String>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDataset("dataset needs at least one dimension".into()));
        }
        if attribute_names.len() != d {
            return Err(Error::InvalidDataset(format!(
                "{} attribute names given for {d} dimensions",
                attribute_names.len()
            )));
        }
        let n = rows.len();
        let mut values = Vec::with_capacity(n * d);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != d {
                return Err(Error::InvalidDataset(format!(
                    "row {i} has {} coordinates, expected {d}",
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::InvalidDataset(format!("row {i} has non-finite coordinate {v}")));
            }
            values.extend(row);
        }
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(Error::InvalidDataset(format!(
                    "{} labels given for {n} points",
                    labels.len()
                )));
            }
        }
        Ok(Dataset {
            values,
            n,
            d,
            labels,
            attribute_names,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    /// Coordinates of point `id`. Panics if `id >= n`.
    #[inline]
    pub fn point(&self, id: PointId) -> &[f64] {
        &self.values[id * self.d..(id + 1) * self.d]
    }

    #[inline]
    pub fn value(&self, id: PointId, dim: usize) -> f64 {
        self.values[id * self.d + dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.d)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidDataset(format!(
                "{} labels given for {} points",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Min-max scales every dimension to `[0, 1]`. Constant dimensions map to 0.
    pub fn min_max_normalized(&self) -> Dataset {
        let mut out = self.clone();
        for dim in 0..self.d {
            let (lo, hi) = self.dimension_range(dim).unwrap_or((0.0, 0.0));
            let width = hi - lo;
            for i in 0..self.n {
                let v = &mut out.values[i * self.d + dim];
                *v = if width > 0.0 { (*v - lo) / width } else { 0.0 };
            }
        }
        out
    }

    /// `(min, max)` of a dimension, or `None` for an empty dataset.
    pub fn dimension_range(&self, dim: usize) -> Option<(f64, f64)> {
        (0..self.n).map(|i| self.value(i, dim)).fold(None, |acc, v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
    }

    pub fn check_point(&self, id: PointId) -> Result<()> {
        if id < self.n {
            Ok(())
        } else {
            Err(Error::PointOutOfRange { id, n: self.n })
        }
    }

    pub fn check_subspace(&self, s: &Subspace) -> Result<()> {
        if s.is_empty() {
            return Err(Error::EmptySubspace);
        }
        match s.dims().iter().find(|&&dim| dim >= self.d) {
            Some(&dim) => Err(Error::DimensionOutOfRange { dim, d: self.d }),
            None => Ok(()),
        }
    }

    /// Squared Euclidean distance over the dimensions of `s`, without bounds checks.
    #[inline]
    pub(crate) fn dist_sq(&self, a: PointId, b: PointId, s: &Subspace) -> f64 {
        let pa = self.point(a);
        let pb = self.point(b);
        s.dims()
            .iter()
            .map(|&j| {
                let diff = pa[j] - pb[j];
                diff * diff
            })
            .sum()
    }
}

/// Euclidean distance between points `a` and `b` restricted to the dimensions of `s`.
pub fn distance(dataset: &Dataset, a: PointId, b: PointId, s: &Subspace) -> Result<f64> {
    dataset.check_point(a)?;
    dataset.check_point(b)?;
    dataset.check_subspace(s)?;
    Ok(dataset.dist_sq(a, b, s).sqrt())
}

/// A read-only view of a dataset projected onto a subspace.
#[derive(Debug, Clone, Copy)]
pub struct Projection<'a> {
    dataset: &'a Dataset,
    subspace: &'a Subspace,
}

impl<'a> Projection<'a> {
    pub fn n(&self) -> usize {
        self.dataset.n
    }

    pub fn d(&self) -> usize {
        self.subspace.len()
    }

    /// Coordinate `j` of point `id` in the projected space.
    pub fn value(&self, id: PointId, j: usize) -> f64 {
        self.dataset.value(id, self.subspace.dims()[j])
    }

    pub fn row(&self, id: PointId) -> Vec<f64> {
        self.subspace.dims().iter().map(|&dim| self.dataset.value(id, dim)).collect()
    }

    pub fn distance(&self, a: PointId, b: PointId) -> f64 {
        self.dataset.dist_sq(a, b, self.subspace).sqrt()
    }
}

pub fn project<'a>(dataset: &'a Dataset, s: &'a Subspace) -> Result<Projection<'a>> {
    dataset.check_subspace(s)?;
    Ok(Projection { dataset, subspace: s })
}

/// A set of dimension indices, kept strictly increasing.
///
/// The derived ordering is lexicographic over the sorted indices, which is the
/// tie-break order used throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subspace(Vec<usize>);

impl Subspace {
    /// Builds a subspace from any dimension list; duplicates are collapsed.
    pub fn new(dims: impl IntoIterator<Item = usize>) -> Self {
        let mut dims: Vec<usize> = dims.into_iter().collect();
        dims.sort_unstable();
        dims.dedup();
        Subspace(dims)
    }

    pub fn single(dim: usize) -> Self {
        Subspace(vec![dim])
    }

    /// The full space `{0, .., d-1}`.
    pub fn full(d: usize) -> Self {
        Subspace((0..d).collect())
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, dim: usize) -> bool {
        self.0.binary_search(&dim).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subspace) -> bool {
        self.0.iter().all(|&dim| other.contains(dim))
    }

    pub fn is_strict_subset_of(&self, other: &Subspace) -> bool {
        self.len() < other.len() && self.is_subset_of(other)
    }

    pub fn with(&self, dim: usize) -> Subspace {
        Subspace::new(self.0.iter().copied().chain(std::iter::once(dim)))
    }

    pub fn without(&self, dim: usize) -> Subspace {
        Subspace(self.0.iter().copied().filter(|&x| x != dim).collect())
    }

    pub fn union(&self, other: &Subspace) -> Subspace {
        Subspace::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// All subsets with exactly one dimension removed, in lexicographic order.
    pub fn facets(&self) -> Vec<Subspace> {
        let mut out: Vec<Subspace> = self.0.iter().map(|&dim| self.without(dim)).collect();
        out.sort();
        out
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, dim) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{dim}")?;
        }
        write!(f, "}}")
    }
}

/// A subspace paired with the ids of the points clustered in it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubspaceCluster {
    pub subspace: Subspace,
    /// Sorted ascending, no duplicates.
    pub members: Vec<PointId>,
}

impl SubspaceCluster {
    pub fn new(subspace: Subspace, mut members: Vec<PointId>) -> Self {
        members.sort_unstable();
        members.dedup();
        SubspaceCluster { subspace, members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: PointId) -> bool {
        self.members.binary_search(&id).is_ok()
    }

    /// Size of the member intersection with `other`.
    pub fn overlap(&self, other: &[PointId]) -> usize {
        sorted_intersection_len(&self.members, other)
    }
}

/// Intersection size of two ascending id lists.
pub fn sorted_intersection_len(a: &[PointId], b: &[PointId]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// The complete output of one algorithm run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub algorithm: String,
    pub clusters: Vec<SubspaceCluster>,
    /// Points in no cluster, ascending.
    pub noise: Vec<PointId>,
    pub params: BTreeMap<String, String>,
    pub clustering_time_ms: f64,
}

impl Clustering {
    /// Assembles a clustering over `n` points; noise is every point in no cluster.
    pub fn from_clusters(
        algorithm: impl Into<String>,
        clusters: Vec<SubspaceCluster>,
        n: usize,
        params: BTreeMap<String, String>,
    ) -> Self {
        let mut covered = vec![false; n];
        for c in &clusters {
            for &id in &c.members {
                covered[id] = true;
            }
        }
        let noise = (0..n).filter(|&i| !covered[i]).collect();
        Clustering {
            algorithm: algorithm.into(),
            clusters,
            noise,
            params,
            clustering_time_ms: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Number of distinct points covered by at least one cluster.
    pub fn covered_points(&self) -> usize {
        let mut ids: Vec<PointId> = self.clusters.iter().flat_map(|c| c.members.iter().copied()).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair_3_4() -> Dataset {
        Dataset::from_rows(vec![vec![0.0, 0.0], vec![3.0, 4.0]], 2).unwrap()
    }

    #[test]
    fn distance_examples() {
        let ds = pair_3_4();
        assert_eq!(distance(&ds, 0, 0, &Subspace::full(2)).unwrap(), 0.0);
        assert_eq!(distance(&ds, 1, 1, &Subspace::single(1)).unwrap(), 0.0);
        assert_eq!(distance(&ds, 0, 1, &Subspace::full(2)).unwrap(), 5.0);
        assert_eq!(distance(&ds, 0, 1, &Subspace::single(0)).unwrap(), 3.0);
    }

    #[test]
    fn distance_rejects_bad_arguments() {
        let ds = pair_3_4();
        assert!(matches!(
            distance(&ds, 0, 2, &Subspace::full(2)),
            Err(Error::PointOutOfRange { id: 2, n: 2 })
        ));
        assert!(matches!(distance(&ds, 0, 1, &Subspace::new([])), Err(Error::EmptySubspace)));
        assert!(matches!(
            distance(&ds, 0, 1, &Subspace::new([0, 5])),
            Err(Error::DimensionOutOfRange { dim: 5, d: 2 })
        ));
    }

    #[test]
    fn project_examples() {
        let ds = Dataset::from_rows(vec![vec![1.0, 2.0, 3.0]], 3).unwrap();
        let full = Subspace::full(3);
        assert_eq!(project(&ds, &full).unwrap().row(0), vec![1.0, 2.0, 3.0]);
        let last = Subspace::single(2);
        let view = project(&ds, &last).unwrap();
        assert_eq!(view.row(0), vec![3.0]);
        assert_eq!(view.d(), 1);
        assert_eq!(view.n(), 1);
        assert!(matches!(
            project(&ds, &Subspace::single(3)),
            Err(Error::DimensionOutOfRange { .. })
        ));
    }

    #[test]
    fn dataset_invariants_enforced() {
        assert!(Dataset::from_rows(vec![vec![1.0], vec![1.0, 2.0]], 1).is_err());
        assert!(Dataset::from_rows(vec![vec![f64::NAN]], 1).is_err());
        assert!(Dataset::from_rows(vec![], 0).is_err());
        let ds = Dataset::from_rows(vec![vec![1.0]], 1).unwrap();
        assert!(ds.clone().with_labels(vec![]).is_err());
        assert!(ds.with_labels(vec!["a".into()]).is_ok());
        assert_eq!(Dataset::from_rows(vec![], 2).unwrap().n(), 0);
    }

    #[test]
    fn normalization_maps_to_unit_range() {
        let ds = Dataset::from_rows(vec![vec![2.0, 5.0], vec![4.0, 5.0], vec![3.0, 5.0]], 2).unwrap();
        let norm = ds.min_max_normalized();
        assert_eq!(norm.point(0), &[0.0, 0.0]);
        assert_eq!(norm.point(1), &[1.0, 0.0]);
        assert_eq!(norm.point(2), &[0.5, 0.0]);
    }

    #[test]
    fn subspace_ordering_and_facets() {
        let s = Subspace::new([2, 0, 1, 2]);
        assert_eq!(s.dims(), &[0, 1, 2]);
        assert_eq!(
            s.facets(),
            vec![Subspace::new([0, 1]), Subspace::new([0, 2]), Subspace::new([1, 2])]
        );
        assert!(Subspace::new([0, 2]).is_strict_subset_of(&s));
        assert!(!s.is_strict_subset_of(&s));
        assert_eq!(s.to_string(), "{0,1,2}");
    }

    #[test]
    fn clustering_noise_is_complement() {
        let c = Clustering::from_clusters(
            "x",
            vec![SubspaceCluster::new(Subspace::single(0), vec![3, 1])],
            5,
            BTreeMap::new(),
        );
        assert_eq!(c.noise, vec![0, 2, 4]);
        assert_eq!(c.covered_points(), 2);
    }

    fn dataset_strategy() -> impl Strategy<Value = Dataset> {
        (1usize..5).prop_flat_map(|d| {
            prop::collection::vec(prop::collection::vec(-100.0f64..100.0, d), 3..20)
                .prop_map(move |rows| Dataset::from_rows(rows, d).unwrap())
        })
    }

    fn subspace_of(d: usize, mask: u32) -> Subspace {
        let s = Subspace::new((0..d).filter(|j| mask & (1 << j) != 0));
        if s.is_empty() {
            Subspace::single(0)
        } else {
            s
        }
    }

    proptest! {
        #[test]
        fn distance_is_a_metric(ds in dataset_strategy(), mask in 1u32..16, seed in any::<(usize, usize, usize)>()) {
            let s = subspace_of(ds.d(), mask);
            let (a, b, c) = (seed.0 % ds.n(), seed.1 % ds.n(), seed.2 % ds.n());
            let ab = distance(&ds, a, b, &s).unwrap();
            let ba = distance(&ds, b, a, &s).unwrap();
            let bc = distance(&ds, b, c, &s).unwrap();
            let ac = distance(&ds, a, c, &s).unwrap();
            prop_assert!(ab >= 0.0);
            prop_assert_eq!(ab, ba);
            prop_assert!(ac <= ab + bc + 1e-9);
            prop_assert_eq!(distance(&ds, a, a, &s).unwrap(), 0.0);
        }

        #[test]
        fn distance_monotone_in_subspace(ds in dataset_strategy(), mask in 1u32..16, extra in 0usize..4, seed in any::<(usize, usize)>()) {
            let s = subspace_of(ds.d(), mask);
            let sup = s.with(extra % ds.d());
            let (a, b) = (seed.0 % ds.n(), seed.1 % ds.n());
            prop_assert!(distance(&ds, a, b, &s).unwrap() <= distance(&ds, a, b, &sup).unwrap());
        }

        #[test]
        fn projection_distance_matches_subspace_distance(ds in dataset_strategy(), mask in 1u32..16) {
            let s = subspace_of(ds.d(), mask);
            let view = project(&ds, &s).unwrap();
            for a in 0..ds.n() {
                for b in 0..ds.n() {
                    let direct = distance(&ds, a, b, &s).unwrap();
                    let viewed: f64 = view.row(a).iter().zip(view.row(b)).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
                    prop_assert!((direct - viewed).abs() <= 1e-12 * (1.0 + direct));
                    prop_assert_eq!(view.distance(a, b), direct);
                }
            }
        }
    }
}
