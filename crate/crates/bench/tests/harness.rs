use proptest::prelude::*;
use torus_search_bench::config::{Algo, ExperimentSpec, MarkedPolicy, Window};
use torus_search_bench::record::{read_csv, read_csv_file, write_csv, write_csv_file, ExperimentRecord, RowKind};
use torus_search_bench::{run_experiment, scaling_report};

fn small_spec(algos: Vec<Algo>, sides: Vec<usize>) -> ExperimentSpec {
    ExperimentSpec {
        algos,
        sides,
        c_delta: vec![1.0],
        window: Window {
            lo: 0.5,
            hi: 1.5,
            points: 9,
        },
        seed: 3,
        ..Default::default()
    }
}

fn peak(records: &[ExperimentRecord], algo: Algo, side: usize) -> &ExperimentRecord {
    records
        .iter()
        .find(|r| r.algo == algo && r.side == side && r.row == RowKind::Peak)
        .unwrap()
}

#[test]
fn controlled_beats_uniform_at_side_eight() {
    let recs = run_experiment(&small_spec(vec![Algo::Controlled], vec![8])).unwrap();
    assert!(!recs.is_empty());
    assert!(recs.iter().all(|r| r.algo == Algo::Controlled));
    assert!(peak(&recs, Algo::Controlled, 8).marked_probability > 1.0 / 64.0);
}

#[test]
fn controlled_peak_exceeds_walk_peak_at_side_sixteen() {
    let recs = run_experiment(&small_spec(vec![Algo::Akr, Algo::Controlled], vec![16])).unwrap();
    let akr = peak(&recs, Algo::Akr, 16);
    let ctl = peak(&recs, Algo::Controlled, 16);
    assert!(
        ctl.marked_probability > akr.marked_probability,
        "controlled {} walk {}",
        ctl.marked_probability,
        akr.marked_probability
    );
}

#[test]
fn reruns_are_identical_except_for_timing() {
    let spec = small_spec(vec![Algo::Akr, Algo::AkrQaa, Algo::Controlled], vec![8, 12]);
    let csv = |workers: usize| {
        let spec = ExperimentSpec {
            workers: Some(workers),
            ..spec.clone()
        };
        let rows: Vec<_> = run_experiment(&spec)
            .unwrap()
            .iter()
            .map(ExperimentRecord::without_timing)
            .collect();
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        buf
    };
    let a = csv(1);
    assert_eq!(a, csv(1));
    assert_eq!(a, csv(4));
}

#[test]
fn records_are_consistent() {
    let spec = small_spec(vec![Algo::Akr, Algo::AkrQaa, Algo::Controlled], vec![4, 8, 16]);
    let recs = run_experiment(&spec).unwrap();
    let keys: Vec<_> = recs.iter().map(|r| r.sort_key()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    for r in &recs {
        assert!((0.0..=1.0 + 1e-12).contains(&r.marked_probability));
        assert!(r.overlap_target <= 1.0 + 1e-12);
        assert_eq!(r.n, r.side * r.side);
        match r.algo {
            Algo::AkrQaa => assert!(r.time_steps_charged > 2 * r.steps as u64 + 2 * r.side as u64),
            _ => assert_eq!(r.time_steps_charged, 2 * r.steps as u64 + 2 * r.side as u64),
        }
        if r.side <= spec.dense_max_side {
            let dense = r.alpha_dense.expect("dense phase for small sides");
            assert!((dense - r.alpha_predicted).abs() < 1e-8);
        } else {
            assert!(r.alpha_dense.is_none());
        }
    }
    let qaa = peak(&recs, Algo::AkrQaa, 16);
    let akr = peak(&recs, Algo::Akr, 16);
    assert!(qaa.marked_probability > akr.marked_probability);
    assert_eq!(qaa.steps, akr.steps);
}

#[test]
fn csv_file_round_trip_and_report() {
    let spec = small_spec(vec![Algo::Akr, Algo::AkrQaa, Algo::Controlled], vec![8, 12, 16]);
    let recs = run_experiment(&spec).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/results.csv");
    write_csv_file(&path, &recs).unwrap();
    let back = read_csv_file(&path).unwrap();
    assert_eq!(back, recs);

    let summary = scaling_report(&back).unwrap();
    assert_eq!(summary.controlled_candidates.len(), 1);
    let c = summary.controlled.as_ref().unwrap();
    assert_eq!(c.points.len(), 3);
    assert_eq!(summary.akr_qaa.as_ref().unwrap().points.len(), 3);
    assert_eq!(summary.akr_overlap.as_ref().unwrap().sides, vec![8, 12, 16]);
    assert_eq!(summary.cost_ratio.len(), 3);
    let json = serde_json::to_value(&summary).unwrap();
    assert_eq!(json["schema_version"], 1);
}

#[test]
fn report_needs_three_sides() {
    let recs = run_experiment(&small_spec(vec![Algo::Controlled], vec![8, 16])).unwrap();
    assert!(scaling_report(&recs).is_err());
}

#[test]
fn spec_from_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    std::fs::write(
        &path,
        r#"{"algos": ["akr", "akr+qaa"], "sides": [8], "window": {"lo": 0.8, "hi": 1.2}, "marked": "origin", "seed": 9}"#,
    )
    .unwrap();
    let spec = ExperimentSpec::from_json_file(&path).unwrap();
    assert_eq!(spec.algos, vec![Algo::Akr, Algo::AkrQaa]);
    assert_eq!(spec.window.points, 25);
    assert_eq!(spec.marked, MarkedPolicy::Origin);
    assert_eq!(spec.seed, 9);
    assert!(ExperimentSpec::from_json_file(&dir.path().join("missing.json")).is_err());
}

fn any_record() -> impl Strategy<Value = ExperimentRecord> {
    (
        (2usize..200, prop::sample::select(vec![Algo::Akr, Algo::AkrQaa, Algo::Controlled]), 0.0f64..1.5, 0usize..5000),
        (0.0f64..1.0, 0.0f64..1.0, 1e-6f64..1.0, prop::option::of(1e-6f64..1.0)),
        (0usize..5000, 0.0f64..5000.0, 0.0f64..100.0, prop::option::of(0.1f64..4.0), any::<bool>(), any::<bool>()),
    )
        .prop_map(|((side, algo, delta, steps), (p, o, a, ad), (t, tp, wc, c, is_peak, edge))| ExperimentRecord {
            side,
            n: side * side,
            algo,
            delta,
            steps,
            time_steps_charged: 2 * steps as u64 + 2 * side as u64,
            marked_probability: p,
            overlap_target: o,
            alpha_predicted: a,
            alpha_dense: ad,
            t_predicted: t,
            t_peak_empirical: tp,
            wall_clock: wc,
            c_delta: c,
            row: if is_peak { RowKind::Peak } else { RowKind::Window },
            peak_at_boundary: edge,
        })
}

proptest! {
    #[test]
    fn csv_round_trip_is_lossless(records in prop::collection::vec(any_record(), 0..8)) {
        let mut buf = Vec::new();
        write_csv(&mut buf, &records).unwrap();
        let back = read_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back, records);
    }
}
