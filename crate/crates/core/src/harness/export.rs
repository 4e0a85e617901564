//! CSV output. Floats are written in shortest round-trip form, so reading a
//! file back reproduces the values bit for bit.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::experiment::{ComparisonRow, RunResult, SweepRow, VariantSummary};
use crate::channel::{frequency_response, impulse_response};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearningCurveRow {
    pub iteration: usize,
    pub mse_raw: f64,
    pub mse_smooth: f64,
    pub estimate_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TapRow {
    pub index: usize,
    pub true_gain: f64,
    pub estimated_gain: f64,
    pub active_flag: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActiveCountRow {
    pub iteration: usize,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EqualizerRow {
    pub symbol_index: usize,
    pub soft: f64,
    pub decision: f64,
    pub truth: f64,
    pub error_flag: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImpulseRow {
    pub t: f64,
    pub h: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyRow {
    pub f: f64,
    #[serde(rename = "H")]
    pub response: f64,
}

pub const LEARNING_CURVE_HEADER: &[&str] =
    &["iteration", "mse_raw", "mse_smooth", "estimate_error"];
pub const TAPS_HEADER: &[&str] = &["index", "true_gain", "estimated_gain", "active_flag"];
pub const ACTIVE_COUNT_HEADER: &[&str] = &["iteration", "count"];
pub const EQUALIZER_HEADER: &[&str] = &["symbol_index", "soft", "decision", "truth", "error_flag"];
pub const COMPARE_HEADER: &[&str] = &[
    "variant",
    "seed",
    "convergence_iter",
    "asymptotic_mse",
    "symbol_errors",
];
pub const SUMMARY_HEADER: &[&str] = &[
    "variant",
    "runs",
    "mean_convergence_iter",
    "not_converged",
    "mean_asymptotic_mse",
    "mean_symbol_errors",
];
pub const SWEEP_HEADER: &[&str] = &[
    "key",
    "value",
    "variant",
    "seed",
    "convergence_iter",
    "asymptotic_mse",
    "symbol_errors",
];

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `header` followed by one record per row. An empty slice yields a
/// header-only file.
pub fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(csv_err(path))?;
    w.write_record(header).map_err(csv_err(path))?;
    for row in rows {
        w.serialize(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    r.deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(csv_err(path))
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })
}

pub fn learning_curve_rows(r: &RunResult) -> Vec<LearningCurveRow> {
    let t = &r.trajectory;
    let est = t.estimate_errors.as_deref().unwrap_or(&[]);
    (0..t.iterations())
        .map(|i| LearningCurveRow {
            iteration: i,
            mse_raw: t.squared_errors[i],
            mse_smooth: r.mse_smooth[i],
            estimate_error: est.get(i).copied().unwrap_or(f64::NAN),
        })
        .collect()
}

pub fn tap_rows(r: &RunResult) -> Vec<TapRow> {
    (0..r.true_channel.len())
        .map(|k| TapRow {
            index: k,
            true_gain: r.true_channel.taps()[k],
            estimated_gain: r.estimate.taps()[k],
            active_flag: r.estimate.active_mask()[k] as u8,
        })
        .collect()
}

pub fn active_count_rows(r: &RunResult) -> Vec<ActiveCountRow> {
    r.trajectory
        .active_counts
        .iter()
        .enumerate()
        .map(|(i, &count)| ActiveCountRow {
            iteration: i,
            count,
        })
        .collect()
}

pub fn equalizer_rows(r: &RunResult) -> Vec<EqualizerRow> {
    let d = r.equalized.decisions.as_slice();
    let t = r.truth.as_slice();
    (0..d.len())
        .map(|k| EqualizerRow {
            symbol_index: k,
            soft: r.equalized.soft[k],
            decision: d[k],
            truth: t[k],
            error_flag: (d[k] != t[k]) as u8,
        })
        .collect()
}

/// Writes `learning_curve.csv`, `taps.csv`, `active_count.csv` and
/// `equalizer_output.csv` into `dir`.
pub fn export_run(r: &RunResult, dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let files = [
        "learning_curve.csv",
        "taps.csv",
        "active_count.csv",
        "equalizer_output.csv",
    ]
    .map(|f| dir.join(f));
    write_csv(&files[0], LEARNING_CURVE_HEADER, &learning_curve_rows(r))?;
    write_csv(&files[1], TAPS_HEADER, &tap_rows(r))?;
    write_csv(&files[2], ACTIVE_COUNT_HEADER, &active_count_rows(r))?;
    write_csv(&files[3], EQUALIZER_HEADER, &equalizer_rows(r))?;
    Ok(files.to_vec())
}

pub fn export_comparison(rows: &[ComparisonRow], path: &Path) -> Result<()> {
    write_csv(path, COMPARE_HEADER, rows)
}

pub fn read_comparison(path: &Path) -> Result<Vec<ComparisonRow>> {
    read_csv(path)
}

pub fn export_summary(rows: &[VariantSummary], path: &Path) -> Result<()> {
    write_csv(path, SUMMARY_HEADER, rows)
}

pub fn export_sweep(rows: &[SweepRow], path: &Path) -> Result<()> {
    write_csv(path, SWEEP_HEADER, rows)
}

/// Impulse response over `|t| <= tau` at step `spacing`, and frequency
/// response over `|f tau| <= 4` at 801 points.
pub fn channel_tables(tau: f64, spacing: f64) -> Result<(Vec<ImpulseRow>, Vec<FrequencyRow>)> {
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(Error::invalid(format!(
            "spacing must be > 0, got {spacing}"
        )));
    }
    let half = (tau / spacing).floor() as i64;
    let impulse = (-half..=half)
        .map(|k| {
            let t = k as f64 * spacing;
            impulse_response(t, tau).map(|h| ImpulseRow { t, h })
        })
        .collect::<Result<_>>()?;
    let points = 800;
    let frequency = (0..=points)
        .map(|i| {
            let f = (-4.0 + 8.0 * i as f64 / points as f64) / tau;
            frequency_response(f, tau).map(|response| FrequencyRow { f, response })
        })
        .collect::<Result<_>>()?;
    Ok((impulse, frequency))
}

pub fn export_channel_tables(tau: f64, spacing: f64, dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let (impulse, frequency) = channel_tables(tau, spacing)?;
    let ir = dir.join("impulse_response.csv");
    let fr = dir.join("frequency_response.csv");
    write_csv(&ir, &["t", "h"], &impulse)?;
    write_csv(&fr, &["f", "H"], &frequency)?;
    Ok(vec![ir, fr])
}
