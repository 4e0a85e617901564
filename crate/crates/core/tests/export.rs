use std::fs;

use fsdfe::harness::export::{
    self, read_csv, write_csv, ActiveCountRow, EqualizerRow, FrequencyRow, ImpulseRow,
    LearningCurveRow, TapRow,
};
use fsdfe::harness::{compare_variants, run_experiment, ExperimentConfig};

fn small() -> ExperimentConfig {
    ExperimentConfig {
        training_length: 1200,
        data_length: 300,
        ..ExperimentConfig::default()
    }
}

#[test]
fn run_tables_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_experiment(&small()).unwrap();
    let paths = export::export_run(&r, dir.path()).unwrap();
    assert_eq!(paths.len(), 4);

    let curve: Vec<LearningCurveRow> = read_csv(&dir.path().join("learning_curve.csv")).unwrap();
    assert_eq!(curve, export::learning_curve_rows(&r));
    assert_eq!(curve.len(), r.trajectory.iterations());
    let taps: Vec<TapRow> = read_csv(&dir.path().join("taps.csv")).unwrap();
    assert_eq!(taps, export::tap_rows(&r));
    let counts: Vec<ActiveCountRow> = read_csv(&dir.path().join("active_count.csv")).unwrap();
    assert_eq!(counts, export::active_count_rows(&r));
    let eq: Vec<EqualizerRow> = read_csv(&dir.path().join("equalizer_output.csv")).unwrap();
    assert_eq!(eq, export::equalizer_rows(&r));
    assert_eq!(
        eq.iter().map(|e| e.error_flag as usize).sum::<usize>(),
        r.error_flags().iter().filter(|&&f| f).count()
    );

    let header = fs::read_to_string(dir.path().join("learning_curve.csv")).unwrap();
    assert!(header.starts_with("iteration,mse_raw,mse_smooth,estimate_error\n"));
    let header = fs::read_to_string(dir.path().join("equalizer_output.csv")).unwrap();
    assert!(header.starts_with("symbol_index,soft,decision,truth,error_flag\n"));
}

#[test]
fn empty_table_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    write_csv::<TapRow>(&path, export::TAPS_HEADER, &[]).unwrap();
    assert_eq!(
        fs::read_to_string(&path).unwrap(),
        "index,true_gain,estimated_gain,active_flag\n"
    );
    assert!(read_csv::<TapRow>(&path).unwrap().is_empty());
}

#[test]
fn comparison_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cmp = compare_variants(&small(), &[1, 2]).unwrap();
    let path = dir.path().join("compare.csv");
    export::export_comparison(&cmp.rows, &path).unwrap();
    assert_eq!(export::read_comparison(&path).unwrap(), cmp.rows);
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("variant,seed,convergence_iter,asymptotic_mse,symbol_errors\n"));
}

#[test]
fn channel_tables_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    export::export_channel_tables(1.5, 0.25, dir.path()).unwrap();
    let (ir, fr) = export::channel_tables(1.5, 0.25).unwrap();
    assert_eq!(
        read_csv::<ImpulseRow>(&dir.path().join("impulse_response.csv")).unwrap(),
        ir
    );
    assert_eq!(
        read_csv::<FrequencyRow>(&dir.path().join("frequency_response.csv")).unwrap(),
        fr
    );
    assert!(
        fs::read_to_string(dir.path().join("frequency_response.csv"))
            .unwrap()
            .starts_with("f,H\n")
    );
    assert!(export::channel_tables(1.5, 0.0).is_err());
}
