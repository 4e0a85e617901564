//! Optical channel models.
//!
//! The analytic model is a cosine-squared pulse of duration `tau` (unit area)
//! and its baseband spectrum `sinc(f tau) / (1 - (f tau)^2)`. Simulation runs on
//! [`DiscreteChannel`], a tapped delay line at a fixed fraction of the symbol
//! period. Time is measured in symbol periods throughout.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::signals::{gen_awgn, RandomSource};
use crate::{Error, Result};

/// Cosine-squared pulse, `tau` in symbol periods.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContinuousOpticalChannel {
    tau: f64,
}

impl ContinuousOpticalChannel {
    pub fn new(tau: f64) -> Result<Self> {
        check_tau(tau)?;
        Ok(Self { tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn impulse_response(&self, t: f64) -> f64 {
        pulse(t, self.tau)
    }

    pub fn frequency_response(&self, f: f64) -> f64 {
        spectrum(f * self.tau)
    }

    pub fn discretize(&self, spacing: f64, span: f64) -> Result<DiscreteChannel> {
        discretize(self.tau, spacing, span)
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "pulse duration must be > 0, got {tau}"
        )))
    }
}

/// `(2/tau) cos^2(pi t / tau)` on `|t| < tau/2`, zero elsewhere.
pub fn impulse_response(t: f64, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    Ok(pulse(t, tau))
}

fn pulse(t: f64, tau: f64) -> f64 {
    // The edge value cos^2(pi/2) is exactly zero; avoid the 1e-33 rounding residue.
    if t.abs() >= tau / 2.0 {
        return 0.0;
    }
    let c = (PI * t / tau).cos();
    2.0 / tau * c * c
}

/// Baseband response `sin(pi f tau)/(pi f tau) * 1/(1 - f^2 tau^2)`,
/// continuous through the removable singularities at `f = 0` and `f = ±1/tau`.
pub fn frequency_response(f: f64, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    Ok(spectrum(f * tau))
}

fn sinc(z: f64) -> f64 {
    let x = PI * z;
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

fn spectrum(x: f64) -> f64 {
    let a = x.abs();
    if a < 0.5 {
        sinc(x) / (1.0 - x * x)
    } else {
        // sin(pi a) = sin(pi (1 - a)), so the (1 - a) factor of 1 - a^2 cancels.
        sinc(1.0 - a) / (a * (1.0 + a))
    }
}

/// Sampled channel: real taps at `spacing` (fraction of the symbol period)
/// and a per-tap activity flag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteChannel {
    taps: Vec<f64>,
    spacing: f64,
    active_mask: Vec<bool>,
}

impl DiscreteChannel {
    pub fn new(taps: Vec<f64>, spacing: f64, active_mask: Vec<bool>) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::invalid(format!(
                "tap spacing must be > 0, got {spacing}"
            )));
        }
        Error::check_len(taps.len(), active_mask.len())?;
        Ok(Self {
            taps,
            spacing,
            active_mask,
        })
    }

    /// Channel whose active taps are exactly the nonzero ones.
    pub fn from_taps(taps: Vec<f64>, spacing: f64) -> Result<Self> {
        let mask = taps.iter().map(|&t| t != 0.0).collect();
        Self::new(taps, spacing, mask)
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn active_mask(&self) -> &[bool] {
        &self.active_mask
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    pub fn active_count(&self) -> usize {
        self.active_mask.iter().filter(|&&a| a).count()
    }

    pub fn energy(&self) -> f64 {
        self.taps.iter().map(|t| t * t).sum()
    }

    /// Cascade with an FIR `pulse` at the same spacing.
    pub fn convolve(&self, pulse: &[f64]) -> DiscreteChannel {
        let taps = convolve_full(&self.taps, pulse);
        let active_mask = taps.iter().map(|&t| t != 0.0).collect();
        DiscreteChannel {
            taps,
            spacing: self.spacing,
            active_mask,
        }
    }

    /// Real-valued DTFT of the taps at frequency `f` (cycles per symbol period),
    /// with tap `k` placed at time `(k - center) * spacing`.
    pub fn dtft(&self, f: f64, center: f64) -> (f64, f64) {
        self.taps
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (k, &h)| {
                let phase = -2.0 * PI * f * (k as f64 - center) * self.spacing;
                (re + h * phase.cos(), im + h * phase.sin())
            })
    }
}

fn convolve_full(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Samples the cosine-squared pulse on a symmetric grid of step `spacing`
/// covering `span`, scaling each sample by `spacing` so the taps sum to ~1.
pub fn discretize(tau: f64, spacing: f64, span: f64) -> Result<DiscreteChannel> {
    check_tau(tau)?;
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(Error::invalid(format!(
            "tap spacing must be > 0, got {spacing}"
        )));
    }
    if span.is_nan() || span < tau {
        return Err(Error::invalid(format!(
            "span {span} must cover the pulse duration {tau}"
        )));
    }
    let half = (span / 2.0 / spacing + 1e-9).floor() as usize;
    let taps: Vec<f64> = (0..=2 * half)
        .map(|k| pulse((k as f64 - half as f64) * spacing, tau) * spacing)
        .collect();
    DiscreteChannel::from_taps(taps, spacing)
}

/// Channel of `length` taps, nonzero exactly at `positions`.
pub fn sparse_channel(
    positions: &[usize],
    gains: &[f64],
    length: usize,
    spacing: f64,
) -> Result<DiscreteChannel> {
    Error::check_len(positions.len(), gains.len())?;
    if positions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(
            "tap positions must be strictly increasing without duplicates",
        ));
    }
    if let Some(&p) = positions.iter().find(|&&p| p >= length) {
        return Err(Error::invalid(format!(
            "tap position {p} out of range for length {length}"
        )));
    }
    if gains.iter().any(|&g| g == 0.0 || !g.is_finite()) {
        return Err(Error::invalid(
            "active tap gains must be finite and nonzero",
        ));
    }
    let mut taps = vec![0.0; length];
    let mut mask = vec![false; length];
    for (&p, &g) in positions.iter().zip(gains) {
        taps[p] = g;
        mask[p] = true;
    }
    DiscreteChannel::new(taps, spacing, mask)
}

/// Linear convolution with zero initial state, truncated to the input length,
/// followed by additive white Gaussian noise.
pub fn transmit(
    ch: &DiscreteChannel,
    input: &[f64],
    noise_variance: f64,
    src: &mut RandomSource,
) -> Result<Vec<f64>> {
    if input.is_empty() {
        return Err(Error::invalid("cannot transmit an empty input"));
    }
    let noise = gen_awgn(input.len(), noise_variance, src)?;
    let taps = ch.taps();
    Ok(noise
        .into_iter()
        .enumerate()
        .map(|(i, n)| {
            let clean: f64 = taps
                .iter()
                .take(i + 1)
                .enumerate()
                .map(|(j, &h)| h * input[i - j])
                .sum();
            clean + n
        })
        .collect())
}
