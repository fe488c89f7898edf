mod common;

use common::oracle;
use densub::datagen::{cluster_label, PAPER_SHAPE_EPS, PAPER_SHAPE_MINPTS};
use densub::{generate, paper_shape_spec, GeneratorSpec};

#[test]
fn dbscan_recovers_each_planted_cluster() {
    for seed in [42, 7] {
        let (ds, truth) = generate(&paper_shape_spec(seed)).unwrap();
        let rows: oracle::Rows = ds.rows().map(<[f64]>::to_vec).collect();
        let all: Vec<usize> = (0..ds.n()).collect();
        for h in &truth.hidden_clusters {
            let found = oracle::dbscan(&rows, &all, h.subspace.dims(), PAPER_SHAPE_EPS, PAPER_SHAPE_MINPTS);
            let best = found.clusters.iter().map(|c| h.overlap(c)).max().unwrap_or(0);
            assert!(best as f64 >= 0.95 * h.len() as f64, "seed {seed} {}: {best}/{}", h.subspace, h.len());
        }
    }
}

#[test]
fn random_plants_are_consistent() {
    for seed in 0..20 {
        let spec = GeneratorSpec::random_plant(5, 300, 3, 0.2, seed).unwrap();
        let (ds, truth) = generate(&spec).unwrap();
        assert_eq!((ds.n(), ds.d()), (300, 5));
        assert_eq!(truth.labels.iter().filter(|l| *l == "noise").count(), 60);
        for (i, h) in truth.hidden_clusters.iter().enumerate() {
            assert!(h.members.iter().all(|&m| truth.labels[m] == cluster_label(i)));
            assert!((2..=4).contains(&h.subspace.len()));
        }
        assert_eq!(generate(&spec).unwrap(), (ds, truth));
    }
}
