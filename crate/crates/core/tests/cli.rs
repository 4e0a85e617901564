use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fsdfe::harness::ExperimentConfig;

fn fsdfe(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsdfe"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

fn write_config(dir: &Path) {
    let cfg = ExperimentConfig {
        training_length: 1200,
        data_length: 300,
        ..ExperimentConfig::default()
    };
    fs::write(dir.join("cfg.toml"), cfg.to_toml_string()).unwrap();
}

#[test]
fn run_writes_tables_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    write_config(dir.path());
    let out = fsdfe(
        &["run", "--config", "cfg.toml", "--seed", "3", "--out", "r"],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for f in [
        "learning_curve.csv",
        "taps.csv",
        "active_count.csv",
        "equalizer_output.csv",
        "learning_curve.svg",
        "taps.svg",
        "active_count.svg",
        "equalizer_output.svg",
    ] {
        assert!(dir.path().join("r").join(f).is_file(), "missing {f}");
    }
    assert!(String::from_utf8_lossy(&out.stdout).contains("seed=3"));
}

#[test]
fn compare_writes_one_row_per_variant_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    write_config(dir.path());
    let out = fsdfe(
        &[
            "compare", "--config", "cfg.toml", "--seeds", "1..3", "--out", "c",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("c/compare.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 3);
    assert!(dir.path().join("c/compare.svg").is_file());
    assert!(dir.path().join("c/compare_summary.csv").is_file());
}

#[test]
fn channel_writes_both_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = fsdfe(
        &[
            "channel",
            "--tau",
            "1.5",
            "--spacing",
            "0.25",
            "--out",
            "ch",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let ir = fs::read_to_string(dir.path().join("ch/impulse_response.csv")).unwrap();
    assert!(ir.starts_with("t,h\n"));
    // |t| <= tau at step 0.25 gives 13 samples.
    assert_eq!(ir.lines().count(), 14);
    assert!(dir.path().join("ch/frequency_response.csv").is_file());
}

#[test]
fn sweep_writes_one_row_per_value() {
    let dir = tempfile::tempdir().unwrap();
    write_config(dir.path());
    let out = fsdfe(
        &[
            "sweep",
            "--config",
            "cfg.toml",
            "--vary",
            "step_size",
            "--values",
            "0.002,0.005,0.01",
            "--out",
            "s",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("s/sweep.csv")).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().nth(2).unwrap().starts_with("step_size,0.005,"));
}

#[test]
fn bad_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    write_config(dir.path());
    let missing = fsdfe(&["run", "--config", "nope.toml"], dir.path());
    assert!(!missing.status.success());
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("error:"));

    let bad_key = fsdfe(
        &[
            "sweep", "--config", "cfg.toml", "--vary", "bogus", "--values", "1",
        ],
        dir.path(),
    );
    assert!(!bad_key.status.success());

    let backwards = fsdfe(
        &["compare", "--config", "cfg.toml", "--seeds", "5..2"],
        dir.path(),
    );
    assert!(!backwards.status.success());

    fs::write(dir.path().join("bad.toml"), "noise_variance = -1.0\n").unwrap();
    let invalid = fsdfe(&["run", "--config", "bad.toml"], dir.path());
    assert!(!invalid.status.success());
}
