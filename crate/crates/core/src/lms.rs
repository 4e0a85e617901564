//! LMS identification of an unknown FIR channel.
//!
//! The filter predicts the received sample from a regressor of the most
//! recent inputs, `y_i = [x_i, x_{i-1}, .., x_{i-L+1}]`, and adapts with the
//! plain stochastic-gradient rule `w <- w + mu * e * y`. An optional active
//! mask pins the excluded taps at exactly zero.

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct LmsFilter {
    weights: Vec<f64>,
    step_size: f64,
    active_mask: Option<Vec<bool>>,
}

impl LmsFilter {
    /// Zero-initialized filter with `len` taps. A step size of 0 freezes it.
    pub fn new(len: usize, step_size: f64) -> Result<Self> {
        if !(step_size.is_finite() && step_size >= 0.0) {
            return Err(Error::invalid(format!(
                "step size must be finite and >= 0, got {step_size}"
            )));
        }
        Ok(Self {
            weights: vec![0.0; len],
            step_size,
            active_mask: None,
        })
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        Error::check_len(self.weights.len(), weights.len())?;
        self.weights = weights;
        if let Some(mask) = self.active_mask.take() {
            self.set_active_mask(mask)?;
        }
        Ok(self)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn step_size(&self) -> f64 {
        self.step_size
    }

    pub fn active_mask(&self) -> Option<&[bool]> {
        self.active_mask.as_deref()
    }

    pub fn active_count(&self) -> usize {
        match &self.active_mask {
            Some(mask) => mask.iter().filter(|&&a| a).count(),
            None => self.weights.len(),
        }
    }

    /// Restricts adaptation to `mask`; newly excluded weights are zeroed now.
    pub fn set_active_mask(&mut self, mask: Vec<bool>) -> Result<()> {
        Error::check_len(self.weights.len(), mask.len())?;
        for (w, &active) in self.weights.iter_mut().zip(&mask) {
            if !active {
                *w = 0.0;
            }
        }
        self.active_mask = Some(mask);
        Ok(())
    }

    pub fn clear_active_mask(&mut self) {
        self.active_mask = None;
    }

    pub fn predict(&self, regressor: &[f64]) -> Result<f64> {
        Error::check_len(self.weights.len(), regressor.len())?;
        Ok(dot(&self.weights, regressor))
    }

    /// One LMS iteration. Returns the a priori error `desired - w.y`.
    pub fn step(&mut self, regressor: &[f64], desired: f64) -> Result<f64> {
        let e = desired - self.predict(regressor)?;
        let g = self.step_size * e;
        match &self.active_mask {
            None => {
                for (w, &y) in self.weights.iter_mut().zip(regressor) {
                    *w += g * y;
                }
            }
            Some(mask) => {
                for ((w, &y), &active) in self.weights.iter_mut().zip(regressor).zip(mask) {
                    if active {
                        *w += g * y;
                    }
                }
            }
        }
        Ok(e)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Free-function form of [`LmsFilter::step`].
pub fn lms_step(filter: &mut LmsFilter, regressor: &[f64], desired: f64) -> Result<f64> {
    filter.step(regressor, desired)
}

/// Free-function form of [`LmsFilter::set_active_mask`].
pub fn set_active_mask(filter: &mut LmsFilter, mask: Vec<bool>) -> Result<()> {
    filter.set_active_mask(mask)
}

/// Sliding regressor windows over an input sequence, zero before time 0.
#[derive(Clone, Debug)]
pub struct Regressor {
    window: Vec<f64>,
}

impl Regressor {
    pub fn new(len: usize) -> Self {
        Self {
            window: vec![0.0; len],
        }
    }

    /// Shifts in the newest input sample.
    pub fn push(&mut self, x: f64) -> &[f64] {
        if !self.window.is_empty() {
            self.window.rotate_right(1);
            self.window[0] = x;
        }
        &self.window
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.window
    }
}

/// Hook consulted after every identification step. Returning a mask replaces
/// the filter's active set.
pub trait Guidance {
    fn observe(
        &mut self,
        desired: f64,
        regressor: &[f64],
        weights: &[f64],
    ) -> Result<Option<Vec<bool>>>;
}

/// Leaves the filter unrestricted.
#[derive(Clone, Copy, Debug, Default)]
pub struct Unguided;

impl Guidance for Unguided {
    fn observe(&mut self, _: f64, _: &[f64], _: &[f64]) -> Result<Option<Vec<bool>>> {
        Ok(None)
    }
}

/// Record of an identification run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WeightTrajectory {
    /// Squared a priori prediction error, one entry per iteration.
    pub squared_errors: Vec<f64>,
    /// `(iteration, weights after that iteration)` every `stride` iterations,
    /// plus the final iteration.
    pub snapshots: Vec<(usize, Vec<f64>)>,
    pub stride: usize,
    /// Number of adapting taps after each iteration.
    pub active_counts: Vec<usize>,
    /// `|w - h|^2` after each iteration, present when the true channel was given.
    pub estimate_errors: Option<Vec<f64>>,
}

impl WeightTrajectory {
    pub fn iterations(&self) -> usize {
        self.squared_errors.len()
    }
}

/// Configurable identification run over a training record.
pub struct Identification<'a> {
    input: &'a [f64],
    received: &'a [f64],
    stride: usize,
    truth: Option<&'a [f64]>,
}

impl<'a> Identification<'a> {
    pub fn new(input: &'a [f64], received: &'a [f64]) -> Self {
        Self {
            input,
            received,
            stride: 10,
            truth: None,
        }
    }

    pub fn stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    /// Tracks `|w - truth|^2` per iteration.
    pub fn truth(mut self, truth: &'a [f64]) -> Self {
        self.truth = Some(truth);
        self
    }

    pub fn run(self, filter: &mut LmsFilter) -> Result<WeightTrajectory> {
        self.run_guided(filter, &mut Unguided)
    }

    pub fn run_guided(
        self,
        filter: &mut LmsFilter,
        guidance: &mut dyn Guidance,
    ) -> Result<WeightTrajectory> {
        let n = self.input.len();
        if self.received.len() != n {
            return Err(Error::invalid(format!(
                "input has {n} samples but received has {}",
                self.received.len()
            )));
        }
        if filter.len() > n {
            return Err(Error::invalid(format!(
                "filter length {} exceeds training length {n}",
                filter.len()
            )));
        }
        if self.stride == 0 {
            return Err(Error::invalid("snapshot stride must be >= 1"));
        }
        if let Some(truth) = self.truth {
            Error::check_len(filter.len(), truth.len())?;
        }

        let mut traj = WeightTrajectory {
            squared_errors: Vec::with_capacity(n),
            snapshots: Vec::with_capacity(n / self.stride + 1),
            stride: self.stride,
            active_counts: Vec::with_capacity(n),
            estimate_errors: self.truth.map(|_| Vec::with_capacity(n)),
        };
        let mut reg = Regressor::new(filter.len());
        for (i, (&x, &u)) in self.input.iter().zip(self.received).enumerate() {
            let y = reg.push(x);
            let e = filter.step(y, u)?;
            if let Some(mask) = guidance.observe(u, y, filter.weights())? {
                filter.set_active_mask(mask)?;
            }
            traj.squared_errors.push(e * e);
            traj.active_counts.push(filter.active_count());
            if let (Some(truth), Some(errs)) = (self.truth, traj.estimate_errors.as_mut()) {
                errs.push(
                    filter
                        .weights()
                        .iter()
                        .zip(truth)
                        .map(|(w, h)| (w - h).powi(2))
                        .sum(),
                );
            }
            if (i + 1) % self.stride == 0 || i + 1 == n {
                traj.snapshots.push((i, filter.weights().to_vec()));
            }
        }
        Ok(traj)
    }
}

/// Unguided LMS over the whole training record.
pub fn identify_channel(
    input: &[f64],
    received: &[f64],
    filter: &mut LmsFilter,
    snapshot_stride: usize,
) -> Result<WeightTrajectory> {
    Identification::new(input, received)
        .stride(snapshot_stride)
        .run(filter)
}
