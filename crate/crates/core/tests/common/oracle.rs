//! Brute-force reference implementations. They work on plain row vectors and
//! share no code with the library beyond the input data.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::Rng;

pub type Rows = Vec<Vec<f64>>;
/// A cluster as (subspace dims, sorted members).
pub type Pair = (Vec<usize>, Vec<usize>);

/// Closed-ball test on the listed dimensions. Squared distances are compared so
/// that lattice data with integer eps is decided without rounding.
pub fn within(a: &[f64], b: &[f64], dims: &[usize], eps: f64) -> bool {
    let sq: f64 = dims.iter().map(|&j| (a[j] - b[j]) * (a[j] - b[j])).sum();
    sq <= eps * eps
}

/// Every id in `ids` within eps of `p`, `p` included, ascending.
pub fn neighbors(rows: &Rows, ids: &[usize], dims: &[usize], p: usize, eps: f64) -> Vec<usize> {
    let mut out: Vec<usize> = ids
        .iter()
        .copied()
        .filter(|&q| within(&rows[p], &rows[q], dims, eps))
        .collect();
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutcome {
    /// Ordered by smallest core id, members ascending.
    pub clusters: Vec<Vec<usize>>,
    pub noise: Vec<usize>,
    pub core: BTreeSet<usize>,
}

/// Reachability closure: connected components of the core graph, then each
/// border point joins the component with the smallest core id among those it
/// touches (the first one an ascending scan would expand).
pub fn dbscan(rows: &Rows, ids: &[usize], dims: &[usize], eps: f64, minpts: usize) -> OracleOutcome {
    let mut ids = ids.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let nbrs: BTreeMap<usize, Vec<usize>> = ids.iter().map(|&p| (p, neighbors(rows, &ids, dims, p, eps))).collect();
    let core: BTreeSet<usize> = ids.iter().copied().filter(|p| nbrs[p].len() >= minpts).collect();

    let mut component: BTreeMap<usize, usize> = BTreeMap::new();
    let mut roots: Vec<usize> = Vec::new();
    for &c in &core {
        if component.contains_key(&c) {
            continue;
        }
        let id = roots.len();
        roots.push(c);
        let mut stack = vec![c];
        component.insert(c, id);
        while let Some(p) = stack.pop() {
            for &q in &nbrs[&p] {
                if core.contains(&q) && !component.contains_key(&q) {
                    component.insert(q, id);
                    stack.push(q);
                }
            }
        }
    }

    let mut clusters = vec![Vec::new(); roots.len()];
    let mut noise = Vec::new();
    for &p in &ids {
        let target = if let Some(&c) = component.get(&p) {
            Some(c)
        } else {
            nbrs[&p].iter().filter_map(|q| component.get(q).copied()).min()
        };
        match target {
            Some(c) => clusters[c].push(p),
            None => noise.push(p),
        }
    }
    OracleOutcome { clusters, noise, core }
}

/// All non-empty subsets of `0..d`, as ascending dim lists.
pub fn all_subspaces(d: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << d))
        .map(|mask| (0..d).filter(|&j| mask & (1 << j) != 0).collect())
        .collect()
}

/// DBSCAN on every non-empty subspace.
pub fn exhaustive(rows: &Rows, d: usize, eps: f64, minpts: usize) -> BTreeSet<Pair> {
    let ids: Vec<usize> = (0..rows.len()).collect();
    let mut out = BTreeSet::new();
    for dims in all_subspaces(d) {
        for c in dbscan(rows, &ids, &dims, eps, minpts).clusters {
            out.insert((dims.clone(), c));
        }
    }
    out
}

fn is_strict_subset(a: &[usize], b: &[usize]) -> bool {
    a.len() < b.len() && a.iter().all(|x| b.contains(x))
}

fn overlap(a: &[usize], b: &[usize]) -> usize {
    let b: HashSet<&usize> = b.iter().collect();
    a.iter().filter(|x| b.contains(x)).count()
}

/// True when some cluster of `all` in a strict superspace shares at least
/// `r * |c|` members with `c`.
pub fn covered_by_superspace(c: &Pair, all: &BTreeSet<Pair>, r: f64) -> bool {
    all.iter()
        .any(|o| is_strict_subset(&c.0, &o.0) && overlap(&c.1, &o.1) as f64 >= r * c.1.len() as f64)
}

/// Drops every cluster covered by a strict-superspace cluster of the full set.
/// At r = 1 containment is transitive, so this equals any filter that only
/// compares against surviving clusters.
pub fn full_containment_filter(all: &BTreeSet<Pair>) -> BTreeSet<Pair> {
    all.iter().filter(|c| !covered_by_superspace(c, all, 1.0)).cloned().collect()
}

/// Downward-closure check: every member of a k-dim cluster lies in some
/// cluster of every (k-1)-dim facet. Returns the violations found.
pub fn monotonicity_violations(pairs: &BTreeSet<Pair>) -> Vec<(Pair, Vec<usize>, usize)> {
    let mut bad = Vec::new();
    for c in pairs {
        if c.0.len() < 2 {
            continue;
        }
        for skip in 0..c.0.len() {
            let facet: Vec<usize> = c.0.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &j)| j).collect();
            for &m in &c.1 {
                let held = pairs.iter().any(|o| o.0 == facet && o.1.binary_search(&m).is_ok());
                if !held {
                    bad.push((c.clone(), facet.clone(), m));
                }
            }
        }
    }
    bad
}

/// Random data for the oracle corpus: either a small integer lattice (many
/// exact boundary distances) or uniform background plus compact blobs in
/// random subspaces. Returns rows, eps and minpts.
pub fn random_case<R: Rng>(rng: &mut R, max_n: usize, max_d: usize) -> (Rows, f64, usize) {
    let d = rng.gen_range(1..=max_d);
    let n = rng.gen_range(1..=max_n);
    if rng.gen_bool(0.3) {
        let side = rng.gen_range(3..8) as f64;
        let rows = (0..n)
            .map(|_| (0..d).map(|_| rng.gen_range(0..side as i64) as f64).collect())
            .collect();
        let eps = [1.0, 1.5, 2.0, 2.0f64.sqrt()][rng.gen_range(0..4)];
        let minpts = rng.gen_range(1..=6);
        return (rows, eps, minpts);
    }
    let blobs = rng.gen_range(0..=3);
    let mut rows: Rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
        if blobs > 0 && i % (blobs + 1) != 0 {
            // blob b is tight in dims whose bit is set in a fixed mask
            let b = i % (blobs + 1) - 1;
            let mask = (b * 2654435761usize) % ((1 << d) - 1) + 1;
            for (j, v) in row.iter_mut().enumerate() {
                if mask & (1 << j) != 0 {
                    let center = 0.2 + 0.6 * ((b + j) % 3) as f64 / 2.0;
                    *v = center + rng.gen_range(-0.05..0.05);
                }
            }
        }
        rows.push(row);
    }
    let eps = rng.gen_range(0.02..0.15);
    let minpts = rng.gen_range(1..=8);
    (rows, eps, minpts)
}

/// Coverage recomputed with a hash set.
pub fn coverage(clusters: &[Vec<usize>], n: usize) -> f64 {
    let covered: HashSet<usize> = clusters.iter().flatten().copied().collect();
    covered.len() as f64 / n as f64
}

/// Mean over hidden clusters of the best F1 against any found cluster.
pub fn f1(found: &[Vec<usize>], hidden: &[Vec<usize>]) -> f64 {
    let score = |h: &Vec<usize>| {
        found
            .iter()
            .map(|f| {
                let tp = overlap(h, f) as f64;
                if tp == 0.0 {
                    0.0
                } else {
                    let (p, r) = (tp / f.len() as f64, tp / h.len() as f64);
                    2.0 * p * r / (p + r)
                }
            })
            .fold(0.0, f64::max)
    };
    hidden.iter().map(score).sum::<f64>() / hidden.len() as f64
}
