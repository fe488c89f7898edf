use densub::dataio::{
    read_clustering, read_dataset, read_report, read_truth, write_clustering, write_dataset, write_report,
    write_truth, DatasetFileSpec, DatasetFormat, CLASS_COLUMN, REPORT_HEADER,
};
use densub::{evaluate, generate, paper_shape_spec, subclu, Dataset, DensityParams, Error};
use proptest::prelude::*;

#[test]
fn generated_data_survives_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let (ds, truth) = generate(&paper_shape_spec(9)).unwrap();
    for (format, name) in [(DatasetFormat::Csv, "d.csv"), (DatasetFormat::Arff, "d.arff")] {
        let path = dir.path().join(name);
        write_dataset(&ds, &path, format).unwrap();
        let spec = DatasetFileSpec::new(&path, format).with_class(CLASS_COLUMN);
        assert_eq!(read_dataset(&spec).unwrap(), ds);
    }
    let tpath = dir.path().join("truth.json");
    write_truth(&truth, &tpath).unwrap();
    assert_eq!(read_truth(&tpath).unwrap(), truth);
}

#[test]
fn clustering_and_report_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (ds, truth) = generate(&paper_shape_spec(2)).unwrap();
    let c = subclu(&ds, DensityParams::new(0.05, 200).unwrap()).unwrap();
    let cpath = dir.path().join("subclu.clusters");
    write_clustering(&c, &cpath).unwrap();
    let mut back = read_clustering(&cpath).unwrap();
    back.clustering_time_ms = c.clustering_time_ms;
    assert_eq!(back, c);

    let row = evaluate(&c, &truth).unwrap();
    let rpath = dir.path().join("report.csv");
    write_report(std::slice::from_ref(&row), &rpath).unwrap();
    assert!(std::fs::read_to_string(&rpath).unwrap().starts_with(&format!("{REPORT_HEADER}\n")));
    assert_eq!(read_report(&rpath).unwrap(), vec![row]);
}

#[test]
fn missing_file_is_an_io_error() {
    let spec = DatasetFileSpec::new("/nonexistent/x.csv", DatasetFormat::Csv);
    assert!(matches!(read_dataset(&spec), Err(Error::Io { .. })));
}

proptest! {
    #[test]
    fn any_finite_dataset_round_trips(
        rows in prop::collection::vec(prop::collection::vec(-1e12f64..1e12, 3), 0..30),
        labelled in any::<bool>(),
    ) {
        let mut ds = Dataset::from_rows(rows.clone(), 3).unwrap();
        if labelled {
            ds = ds.with_labels((0..rows.len()).map(|i| format!("c{}", i % 3)).collect()).unwrap();
        }
        let dir = tempfile::tempdir().unwrap();
        for format in [DatasetFormat::Csv, DatasetFormat::Arff] {
            // an ARFF file without rows cannot name nominal values
            if format == DatasetFormat::Arff && labelled && rows.is_empty() {
                continue;
            }
            let path = dir.path().join("d");
            write_dataset(&ds, &path, format).unwrap();
            let mut spec = DatasetFileSpec::new(&path, format);
            if labelled {
                spec = spec.with_class(CLASS_COLUMN);
            }
            prop_assert_eq!(read_dataset(&spec).unwrap(), ds.clone());
        }
    }
}
