mod common;

use common::oracle;
use densub::dbscan::{dbscan_subset, dbscan_with_index, IndexKind};
use densub::{dbscan, region_query, Dataset, DensityParams, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dataset(rows: &oracle::Rows) -> Dataset {
    let d = rows.first().map_or(1, Vec::len);
    Dataset::from_rows(rows.clone(), d).unwrap()
}

#[test]
fn region_query_matches_pairwise_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let rows: oracle::Rows = (0..200).map(|_| vec![rng.gen(), rng.gen(), rng.gen()]).collect();
    let ds = dataset(&rows);
    let all: Vec<usize> = (0..200).collect();
    for dims in oracle::all_subspaces(3) {
        let s = Subspace::new(dims.clone());
        for p in (0..200).step_by(7) {
            let expected = oracle::neighbors(&rows, &all, &dims, p, 0.2);
            assert_eq!(region_query(&ds, &s, p, 0.2).unwrap(), expected, "p={p} s={s}");
        }
    }
}

#[test]
fn matches_reachability_closure_on_random_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..120 {
        let (rows, eps, minpts) = oracle::random_case(&mut rng, 200, 4);
        let ds = dataset(&rows);
        let dims: Vec<usize> = (0..ds.d()).filter(|_| rng.gen_bool(0.6)).collect();
        let dims = if dims.is_empty() { vec![0] } else { dims };
        let s = Subspace::new(dims.clone());
        let all: Vec<usize> = (0..ds.n()).collect();
        let expected = oracle::dbscan(&rows, &all, &dims, eps, minpts);
        let got = dbscan(&ds, &s, DensityParams::new(eps, minpts).unwrap()).unwrap();
        assert_eq!(got.clusters, expected.clusters, "case {case}");
        assert_eq!(got.noise, expected.noise, "case {case}");
        let core: Vec<usize> = (0..ds.n()).filter(|&p| got.core_flags[p]).collect();
        assert_eq!(core, expected.core.iter().copied().collect::<Vec<_>>(), "case {case}");
    }
}

#[test]
fn subset_runs_match_closure_on_the_subset() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for case in 0..60 {
        let (rows, eps, minpts) = oracle::random_case(&mut rng, 150, 3);
        let ds = dataset(&rows);
        let ids: Vec<usize> = (0..ds.n()).filter(|_| rng.gen_bool(0.7)).collect();
        let dims: Vec<usize> = (0..ds.d()).collect();
        let expected = oracle::dbscan(&rows, &ids, &dims, eps, minpts);
        let params = DensityParams::new(eps, minpts).unwrap();
        for kind in [IndexKind::Linear, IndexKind::Grid] {
            let got = dbscan_with_index(&ds, &ids, &Subspace::new(dims.clone()), params, kind).unwrap();
            assert_eq!(got.clusters, expected.clusters, "case {case} {kind:?}");
            assert_eq!(got.noise, expected.noise, "case {case} {kind:?}");
        }
    }
}

#[test]
fn chain_of_five_is_one_cluster() {
    let rows: oracle::Rows = (0..5).map(|i| vec![i as f64]).collect();
    let ds = dataset(&rows);
    let got = dbscan(&ds, &Subspace::single(0), DensityParams::new(1.1, 3).unwrap()).unwrap();
    let expected = oracle::dbscan(&rows, &[0, 1, 2, 3, 4], &[0], 1.1, 3);
    assert_eq!(got.clusters, vec![vec![0, 1, 2, 3, 4]]);
    assert_eq!(got.clusters, expected.clusters);
}

#[test]
fn cluster_members_are_density_connected() {
    // every non-core member has a core member within eps
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let (rows, eps, minpts) = oracle::random_case(&mut rng, 150, 3);
        let ds = dataset(&rows);
        let dims: Vec<usize> = (0..ds.d()).collect();
        let out = dbscan_subset(&ds, &(0..ds.n()).collect::<Vec<_>>(), &Subspace::full(ds.d()), DensityParams::new(eps, minpts).unwrap()).unwrap();
        for cluster in &out.clusters {
            assert!(cluster.iter().any(|&p| out.core_flags[p]));
            for &p in cluster {
                if !out.core_flags[p] {
                    assert!(cluster.iter().any(|&q| out.core_flags[q] && oracle::within(&rows[p], &rows[q], &dims, eps)));
                }
            }
        }
        let mut seen: Vec<usize> = out.clusters.iter().flatten().chain(&out.noise).copied().collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..ds.n()).collect::<Vec<_>>());
    }
}
