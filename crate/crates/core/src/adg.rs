//! Activity detection guidance.
//!
//! Each tap `k` of a channel estimate gets an activity measure, the squared
//! sample cross-correlation between the desired signal and the regressor
//! entry feeding that tap, normalized by that entry's sample power:
//!
//! ```text
//! C_k = ((1/N) sum_i u_i y_{i,k})^2 / ((1/N) sum_i y_{i,k}^2)
//! ```
//!
//! A tap is active when `C_k` exceeds `c * var(u) * ln(N) / N`. With
//! correlated regressors a strong tap leaks correlation into its neighbours;
//! the decoupled measure correlates against the residual
//! `u_i - w.y_i + w_k y_{i,k}` instead, which removes the contribution of
//! every other tap already captured by the current estimate `w`.

use serde::{Deserialize, Serialize};

use crate::lms::{dot, Guidance};
use crate::{Error, Result};

/// Minimum number of updates before a threshold exists.
pub const MIN_UPDATES: usize = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureMode {
    #[default]
    Plain,
    Decoupled,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub mask: Vec<bool>,
    pub count: usize,
}

/// Streaming accumulator for the per-tap activity statistics.
#[derive(Clone, Debug)]
pub struct ActivityTracker {
    mode: MeasureMode,
    threshold_constant: f64,
    cross: Vec<f64>,
    residual_cross: Vec<f64>,
    energy: Vec<f64>,
    sum_desired: f64,
    sum_desired_sq: f64,
    updates: usize,
    active: Vec<bool>,
}

impl ActivityTracker {
    pub fn new(taps: usize, mode: MeasureMode, threshold_constant: f64) -> Result<Self> {
        if !(threshold_constant.is_finite() && threshold_constant >= 0.0) {
            return Err(Error::invalid(format!(
                "threshold constant must be finite and >= 0, got {threshold_constant}"
            )));
        }
        Ok(Self {
            mode,
            threshold_constant,
            cross: vec![0.0; taps],
            residual_cross: vec![0.0; taps],
            energy: vec![0.0; taps],
            sum_desired: 0.0,
            sum_desired_sq: 0.0,
            updates: 0,
            active: vec![false; taps],
        })
    }

    pub fn mode(&self) -> MeasureMode {
        self.mode
    }

    pub fn taps(&self) -> usize {
        self.cross.len()
    }

    pub fn updates(&self) -> usize {
        self.updates
    }

    pub fn threshold_constant(&self) -> f64 {
        self.threshold_constant
    }

    /// `sum_i u_i y_{i,k}` for every tap.
    pub fn cross_sums(&self) -> &[f64] {
        &self.cross
    }

    /// `sum_i y_{i,k}^2` for every tap.
    pub fn energy_sums(&self) -> &[f64] {
        &self.energy
    }

    /// Active set from the latest [`classify`](Self::classify).
    pub fn active_set(&self) -> &[bool] {
        &self.active
    }

    /// Folds in one sample. `weights` is the current channel estimate; it only
    /// enters the decoupled statistics.
    pub fn update(&mut self, desired: f64, regressor: &[f64], weights: &[f64]) -> Result<()> {
        let taps = self.taps();
        Error::check_len(taps, regressor.len())?;
        Error::check_len(taps, weights.len())?;

        let prediction = match self.mode {
            MeasureMode::Plain => 0.0,
            MeasureMode::Decoupled => dot(weights, regressor),
        };
        for k in 0..taps {
            let y = regressor[k];
            let y2 = y * y;
            self.cross[k] += desired * y;
            self.energy[k] += y2;
            if self.mode == MeasureMode::Decoupled {
                self.residual_cross[k] += (desired - prediction) * y + weights[k] * y2;
            }
        }
        self.sum_desired += desired;
        self.sum_desired_sq += desired * desired;
        self.updates += 1;
        Ok(())
    }

    fn normalized(&self, k: usize, correlation_sum: f64) -> Result<f64> {
        let energy = self.energy[k];
        if energy.is_nan() || energy <= 0.0 {
            return Err(Error::UndefinedMeasure { tap: k });
        }
        let n = self.updates as f64;
        let corr = correlation_sum / n;
        Ok(corr * corr / (energy / n))
    }

    fn check_tap(&self, k: usize) -> Result<()> {
        if k < self.taps() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "tap {k} out of range for {} taps",
                self.taps()
            )))
        }
    }

    /// Plain activity measure at tap `k`.
    pub fn activity_measure(&self, k: usize) -> Result<f64> {
        self.check_tap(k)?;
        self.normalized(k, self.cross[k])
    }

    /// Tap-decoupled activity measure at tap `k`. Only available in
    /// [`MeasureMode::Decoupled`].
    pub fn decoupled_measure(&self, k: usize) -> Result<f64> {
        self.check_tap(k)?;
        if self.mode != MeasureMode::Decoupled {
            return Err(Error::invalid(
                "decoupled measure requested from a plain-mode tracker",
            ));
        }
        self.normalized(k, self.residual_cross[k])
    }

    /// The measure selected by the tracker's mode.
    pub fn measure(&self, k: usize) -> Result<f64> {
        match self.mode {
            MeasureMode::Plain => self.activity_measure(k),
            MeasureMode::Decoupled => self.decoupled_measure(k),
        }
    }

    /// Running (biased) sample variance of the desired signal.
    pub fn desired_variance(&self) -> f64 {
        if self.updates == 0 {
            return 0.0;
        }
        let n = self.updates as f64;
        let mean = self.sum_desired / n;
        (self.sum_desired_sq / n - mean * mean).max(0.0)
    }

    /// `c * var(u) * ln(N) / N`.
    pub fn activity_threshold(&self) -> Result<f64> {
        if self.updates < MIN_UPDATES {
            return Err(Error::NotReady {
                updates: self.updates,
                needed: MIN_UPDATES,
            });
        }
        let n = self.updates as f64;
        Ok(self.threshold_constant * self.desired_variance() * n.ln() / n)
    }

    /// Marks every tap whose measure exceeds the threshold. Taps without
    /// regressor energy are inactive.
    pub fn classify(&mut self) -> Result<Classification> {
        let threshold = self.activity_threshold()?;
        let mut mask = Vec::with_capacity(self.taps());
        for k in 0..self.taps() {
            let active = match self.measure(k) {
                Ok(m) => m > threshold,
                Err(Error::UndefinedMeasure { .. }) => false,
                Err(e) => return Err(e),
            };
            mask.push(active);
        }
        let count = mask.iter().filter(|&&a| a).count();
        self.active.clone_from(&mask);
        Ok(Classification { mask, count })
    }
}

/// Drives an [`ActivityTracker`] alongside an LMS filter: re-classifies every
/// `cadence` updates and hands the resulting mask to the filter.
///
/// A tap that has been active for at least `hysteresis` consecutive
/// classifications is only dropped after two consecutive sub-threshold
/// readings. Until the first classification the filter adapts every tap.
#[derive(Clone, Debug)]
pub struct ActivityGate {
    tracker: ActivityTracker,
    cadence: usize,
    hysteresis: Hysteresis,
    mask: Vec<bool>,
    history: Vec<(usize, usize)>,
}

/// Per-tap hold-over: a tap active for `min_streak` consecutive
/// classifications needs two consecutive misses to be dropped.
#[derive(Clone, Debug)]
pub struct Hysteresis {
    min_streak: usize,
    streak: Vec<usize>,
    misses: Vec<usize>,
}

impl Hysteresis {
    pub fn new(taps: usize, min_streak: usize) -> Self {
        Self {
            min_streak,
            streak: vec![0; taps],
            misses: vec![0; taps],
        }
    }

    /// Folds the raw threshold decisions into `mask` in place.
    pub fn apply(&mut self, mask: &mut [bool], raw: &[bool]) {
        for k in 0..mask.len() {
            let above = raw[k];
            self.misses[k] = if above { 0 } else { self.misses[k] + 1 };
            let keep = mask[k]
                && self.min_streak > 0
                && self.streak[k] >= self.min_streak
                && self.misses[k] < 2;
            let active = above || keep;
            self.streak[k] = if active { self.streak[k] + 1 } else { 0 };
            mask[k] = active;
        }
    }
}

impl ActivityGate {
    pub fn new(tracker: ActivityTracker, cadence: usize, hysteresis: usize) -> Result<Self> {
        if cadence == 0 {
            return Err(Error::invalid("classification cadence must be >= 1"));
        }
        let taps = tracker.taps();
        Ok(Self {
            tracker,
            cadence,
            hysteresis: Hysteresis::new(taps, hysteresis),
            mask: vec![true; taps],
            history: Vec::new(),
        })
    }

    pub fn tracker(&self) -> &ActivityTracker {
        &self.tracker
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// `(update count, active count)` at every classification so far.
    pub fn history(&self) -> &[(usize, usize)] {
        &self.history
    }

    fn reclassify(&mut self) -> Result<Vec<bool>> {
        let raw = self.tracker.classify()?;
        self.hysteresis.apply(&mut self.mask, &raw.mask);
        let count = self.mask.iter().filter(|&&a| a).count();
        self.history.push((self.tracker.updates(), count));
        Ok(self.mask.clone())
    }
}

impl Guidance for ActivityGate {
    fn observe(
        &mut self,
        desired: f64,
        regressor: &[f64],
        weights: &[f64],
    ) -> Result<Option<Vec<bool>>> {
        self.tracker.update(desired, regressor, weights)?;
        let n = self.tracker.updates();
        if n >= MIN_UPDATES && n.is_multiple_of(self.cadence) {
            self.reclassify().map(Some)
        } else {
            Ok(None)
        }
    }
}
