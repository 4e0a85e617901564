//! Fractionally-spaced decision-feedback equalizer.
//!
//! For symbol `k` the soft output is
//!
//! ```text
//! d_k = sum_{n=-N1}^{N2} c_n y[kM - n] + sum_{i=1}^{N3} F_i d_{k-i}
//! ```
//!
//! where `y` runs at `M` samples per symbol and `d_{k-i}` are reference
//! symbols while training, or earlier slicer decisions otherwise.
//!
//! Coefficients come from a channel estimate (the symbol-to-sample response
//! at spacing `T/M`). The feedforward filter solves a ridge-regularized least
//! squares problem that forces a unit main cursor and zero pre-cursors while
//! leaving the first `N3` post-cursors free. Those post-cursors are then
//! cancelled by the feedback filter, `F_i = -q_i`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::channel::DiscreteChannel;
use crate::signals::SymbolSequence;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfeConfig {
    /// Anticausal feedforward taps (N1).
    pub anticausal: usize,
    /// Causal feedforward taps (N2).
    pub causal: usize,
    /// Symbol-spaced feedback taps (N3).
    pub feedback: usize,
    /// Samples per symbol (M).
    pub oversampling: usize,
}

impl Default for DfeConfig {
    fn default() -> Self {
        Self {
            anticausal: 3,
            causal: 3,
            feedback: 4,
            oversampling: 2,
        }
    }
}

impl DfeConfig {
    pub fn feedforward_len(&self) -> usize {
        self.anticausal + self.causal + 1
    }

    pub fn validate(&self) -> Result<()> {
        if self.oversampling == 0 {
            return Err(Error::invalid("oversampling factor must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DfeCoefficients {
    config: DfeConfig,
    /// `c_n` for `n = -N1..=N2`, stored from `n = -N1`.
    feedforward: Vec<f64>,
    /// `F_i` for `i = 1..=N3`.
    feedback: Vec<f64>,
}

impl DfeCoefficients {
    pub fn new(config: DfeConfig, feedforward: Vec<f64>, feedback: Vec<f64>) -> Result<Self> {
        config.validate()?;
        Error::check_len(config.feedforward_len(), feedforward.len())?;
        Error::check_len(config.feedback, feedback.len())?;
        Ok(Self {
            config,
            feedforward,
            feedback,
        })
    }

    pub fn config(&self) -> &DfeConfig {
        &self.config
    }

    pub fn feedforward(&self) -> &[f64] {
        &self.feedforward
    }

    pub fn feedback(&self) -> &[f64] {
        &self.feedback
    }

    /// `c_n`, zero outside `-N1..=N2`.
    pub fn tap(&self, n: isize) -> f64 {
        let idx = n + self.config.anticausal as isize;
        if idx < 0 {
            return 0.0;
        }
        self.feedforward.get(idx as usize).copied().unwrap_or(0.0)
    }

    /// Symbol-spaced response of `response` followed by the feedforward
    /// filter: `(first cursor index, q)` with `q[j]` the cursor at
    /// `first + j`.
    pub fn combined_response(&self, response: &[f64]) -> (isize, Vec<f64>) {
        let (first, rows) = cursor_range(&self.config, response.len());
        let q = rows
            .map(|m| {
                (-(self.config.anticausal as isize)..=self.config.causal as isize)
                    .map(|n| {
                        self.tap(n) * sample(response, m * self.config.oversampling as isize - n)
                    })
                    .sum()
            })
            .collect();
        (first, q)
    }
}

fn sample(xs: &[f64], idx: isize) -> f64 {
    if idx < 0 {
        0.0
    } else {
        xs.get(idx as usize).copied().unwrap_or(0.0)
    }
}

/// Symbol cursors `m` with any overlap between the channel response and the
/// feedforward span.
fn cursor_range(cfg: &DfeConfig, response_len: usize) -> (isize, std::ops::RangeInclusive<isize>) {
    let m = cfg.oversampling as isize;
    let lo = -(cfg.causal as isize);
    let hi = response_len as isize - 1 + cfg.anticausal as isize;
    let first = lo.div_euclid(m) + if lo.rem_euclid(m) == 0 { 0 } else { 1 };
    let last = hi.div_euclid(m);
    (first, first..=last)
}

/// Decision device for antipodal symbols. Zero maps to `+1`.
pub fn slicer(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("cannot slice non-finite value {x}")));
    }
    Ok(if x >= 0.0 { 1.0 } else { -1.0 })
}

/// Designs feedforward and feedback filters for `estimate`, the channel's
/// symbol-to-sample response sampled at `T/M`. `noise_variance` is the ridge
/// weight; zero gives the minimum-norm zero-forcing design.
pub fn design_from_channel(
    estimate: &DiscreteChannel,
    noise_variance: f64,
    cfg: DfeConfig,
) -> Result<DfeCoefficients> {
    cfg.validate()?;
    let fail = |reason: &str| Error::DesignFailure {
        reason: reason.to_string(),
        estimate: estimate.taps().to_vec(),
    };
    if estimate.is_empty() {
        return Err(fail("empty channel estimate"));
    }
    if !(noise_variance.is_finite() && noise_variance >= 0.0) {
        return Err(Error::invalid(format!(
            "noise variance must be finite and >= 0, got {noise_variance}"
        )));
    }
    let expected_spacing = 1.0 / cfg.oversampling as f64;
    if (estimate.spacing() - expected_spacing).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "estimate spacing {} does not match T/{}",
            estimate.spacing(),
            cfg.oversampling
        )));
    }
    if estimate.taps().iter().any(|t| !t.is_finite()) {
        return Err(fail("non-finite channel estimate"));
    }
    if estimate.energy().is_nan() || estimate.energy() <= 0.0 {
        return Err(fail("channel estimate has no energy"));
    }

    let g = estimate.taps();
    let m = cfg.oversampling as isize;
    let n1 = cfg.anticausal as isize;
    let width = cfg.feedforward_len();
    let (_, cursors) = cursor_range(&cfg, g.len());
    // Rows constrain the pre-cursors, the main cursor and the post-cursors
    // the feedback filter cannot reach.
    let rows: Vec<isize> = cursors
        .filter(|&c| c <= 0 || c > cfg.feedback as isize)
        .collect();
    let a = DMatrix::from_fn(rows.len(), width, |r, j| {
        let n = j as isize - n1;
        sample(g, rows[r] * m - n)
    });
    let target = DVector::from_fn(rows.len(), |r, _| if rows[r] == 0 { 1.0 } else { 0.0 });

    let c = if noise_variance > 0.0 {
        let at = a.transpose();
        let normal = &at * &a + DMatrix::identity(width, width) * noise_variance;
        let rhs = &at * &target;
        normal
            .cholesky()
            .ok_or_else(|| fail("normal equations are not positive definite"))?
            .solve(&rhs)
    } else {
        a.svd(true, true).solve(&target, 1e-12).map_err(&fail)?
    };
    if c.iter().any(|v| !v.is_finite()) {
        return Err(fail("non-finite feedforward solution"));
    }

    let mut coeffs =
        DfeCoefficients::new(cfg, c.iter().copied().collect(), vec![0.0; cfg.feedback])?;
    let (first, q) = coeffs.combined_response(g);
    let cursor = |i: isize| {
        let j = i - first;
        if j < 0 {
            0.0
        } else {
            q.get(j as usize).copied().unwrap_or(0.0)
        }
    };
    if cursor(0).abs() < 1e-9 {
        return Err(fail("feedforward design has no main cursor"));
    }
    coeffs.feedback = (1..=cfg.feedback as isize).map(|i| -cursor(i)).collect();
    Ok(coeffs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EqualizerMode {
    /// Feedback uses the reference symbols.
    Training,
    /// Feedback uses the equalizer's own decisions.
    DecisionDirected,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Equalized {
    pub decisions: SymbolSequence,
    pub soft: Vec<f64>,
}

/// Streaming equalizer holding the decision history for one stream.
#[derive(Clone, Debug)]
pub struct Equalizer<'a> {
    coeffs: &'a DfeCoefficients,
    history: Vec<f64>,
}

impl<'a> Equalizer<'a> {
    pub fn new(coeffs: &'a DfeCoefficients) -> Self {
        Self {
            coeffs,
            history: vec![0.0; coeffs.config.feedback],
        }
    }

    /// Soft output for symbol `k` of `received`, using the current history.
    pub fn soft_output(&self, received: &[f64], k: usize) -> f64 {
        let cfg = &self.coeffs.config;
        let base = (k * cfg.oversampling) as isize;
        let ff: f64 = self
            .coeffs
            .feedforward
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                let n = j as isize - cfg.anticausal as isize;
                c * sample(received, base - n)
            })
            .sum();
        let fb: f64 = self
            .coeffs
            .feedback
            .iter()
            .zip(&self.history)
            .map(|(f, d)| f * d)
            .sum();
        ff + fb
    }

    /// Pushes `symbol` as `d_k`; the oldest entry falls off.
    pub fn commit(&mut self, symbol: f64) {
        if !self.history.is_empty() {
            self.history.rotate_right(1);
            self.history[0] = symbol;
        }
    }

    /// Overwrites the history, most recent first.
    pub fn set_history(&mut self, recent_first: &[f64]) -> Result<()> {
        Error::check_len(self.history.len(), recent_first.len())?;
        self.history.copy_from_slice(recent_first);
        Ok(())
    }
}

/// Runs the equalizer over `received` (at `M` samples per symbol) and returns
/// one decision per whole symbol period.
pub fn equalize(
    coeffs: &DfeCoefficients,
    received: &[f64],
    reference: Option<&SymbolSequence>,
    mode: EqualizerMode,
) -> Result<Equalized> {
    let cfg = coeffs.config;
    let needed = cfg.oversampling * cfg.feedforward_len();
    if received.len() < needed {
        return Err(Error::invalid(format!(
            "received has {} samples, need at least {needed}",
            received.len()
        )));
    }
    let symbols = received.len() / cfg.oversampling;
    let reference = match (mode, reference) {
        (EqualizerMode::Training, None) => {
            return Err(Error::invalid("training mode needs a reference sequence"))
        }
        (EqualizerMode::Training, Some(r)) if r.len() < symbols => {
            return Err(Error::invalid(format!(
                "reference has {} symbols, need {symbols}",
                r.len()
            )))
        }
        (EqualizerMode::Training, Some(r)) => Some(r.as_slice()),
        (EqualizerMode::DecisionDirected, _) => None,
    };

    let mut eq = Equalizer::new(coeffs);
    let mut soft = Vec::with_capacity(symbols);
    let mut decisions = Vec::with_capacity(symbols);
    for k in 0..symbols {
        let z = eq.soft_output(received, k);
        let d = slicer(z)?;
        eq.commit(reference.map_or(d, |r| r[k]));
        soft.push(z);
        decisions.push(d);
    }
    Ok(Equalized {
        decisions: SymbolSequence::new(decisions)?,
        soft,
    })
}

/// Mismatches at indices `>= skip`.
pub fn symbol_error_count(
    decisions: &SymbolSequence,
    truth: &SymbolSequence,
    skip: usize,
) -> Result<usize> {
    Error::check_len(truth.len(), decisions.len())?;
    if skip >= decisions.len() && !decisions.is_empty() {
        return Err(Error::invalid(format!(
            "skip {skip} leaves nothing of {} symbols",
            decisions.len()
        )));
    }
    Ok(decisions
        .as_slice()
        .iter()
        .zip(truth.as_slice())
        .skip(skip)
        .filter(|(d, t)| d != t)
        .count())
}
