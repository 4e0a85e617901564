#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};

use fsdfe::harness::ExperimentConfig;
use fsdfe::lms::Regressor;

/// Batch least-squares channel fit by QR on the stacked regressors.
pub fn batch_least_squares(input: &[f64], received: &[f64], taps: usize) -> Vec<f64> {
    let mut reg = Regressor::new(taps);
    let rows: Vec<f64> = input.iter().flat_map(|&x| reg.push(x).to_vec()).collect();
    let a = DMatrix::from_row_slice(input.len(), taps, &rows);
    let b = DVector::from_column_slice(received);
    let qr = a.qr();
    let qtb = qr.q().transpose() * b;
    let x = qr
        .r()
        .solve_upper_triangular(&qtb)
        .expect("regressors have full column rank");
    x.iter().copied().collect()
}

/// Composite Simpson's rule.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// The sparse seven-tap scenario with its stock parameters.
pub fn sparse_scenario() -> ExperimentConfig {
    ExperimentConfig::default()
}
