use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Variant};
use super::metrics::{asymptotic_mse, burst_length, convergence_iterations, moving_average};
use crate::adg::{ActivityGate, ActivityTracker, MeasureMode};
use crate::channel::{transmit, DiscreteChannel};
use crate::dfe::{
    design_from_channel, equalize, symbol_error_count, DfeCoefficients, Equalized, EqualizerMode,
};
use crate::lms::{Identification, LmsFilter, Unguided, WeightTrajectory};
use crate::signals::{gen_symbols, RandomSource, SymbolSequence};
use crate::{Error, Result};

const SYMBOL_STREAM: u64 = 0;
const NOISE_STREAM: u64 = 1;

/// Consecutive correct decisions that end the initial error burst.
const BURST_QUIET: usize = 50;

/// Everything one run produces.
#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub config: ExperimentConfig,
    pub true_channel: DiscreteChannel,
    /// Final channel estimate; its mask is the final active set.
    pub estimate: DiscreteChannel,
    pub trajectory: WeightTrajectory,
    /// Moving average of the squared prediction error.
    pub mse_smooth: Vec<f64>,
    /// Moving average of `|w - h|^2`. Convergence and asymptote use this curve.
    pub estimate_error_smooth: Vec<f64>,
    /// `(update count, active taps)` at every classification; empty for `plain`.
    pub classifications: Vec<(usize, usize)>,
    pub coefficients: DfeCoefficients,
    /// Transmitted data symbols.
    pub truth: SymbolSequence,
    pub equalized: Equalized,
    /// `(truth_k - soft_k)^2` per data symbol.
    pub squared_difference: Vec<f64>,
    pub skip: usize,
    pub symbol_errors: usize,
    pub burst_length: usize,
    pub asymptotic_mse: f64,
    pub asymptotic_prediction_mse: f64,
    pub convergence_iteration: Option<usize>,
    pub training_symbols: usize,
    pub symbols_generated: usize,
}

impl RunResult {
    pub fn error_flags(&self) -> Vec<bool> {
        self.equalized
            .decisions
            .as_slice()
            .iter()
            .zip(self.truth.as_slice())
            .map(|(d, t)| d != t)
            .collect()
    }

    /// Errors after the skip window divided by the symbols counted.
    pub fn symbol_error_rate(&self) -> f64 {
        self.symbol_errors as f64 / (self.truth.len() - self.skip) as f64
    }
}

/// Generates data, identifies the channel, designs the equalizer from the
/// estimate and equalizes the data segment.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunResult> {
    cfg.validate()?;
    let m = cfg.oversampling;
    let h = cfg.true_channel()?;
    let training_symbols = cfg.training_length.div_ceil(m);
    let symbols_generated = training_symbols + cfg.data_length;

    let symbols = gen_symbols(
        symbols_generated,
        &mut RandomSource::with_stream(cfg.seed, SYMBOL_STREAM),
    );
    let input = cfg.pulse.apply(&symbols, m)?;
    let received = transmit(
        &h,
        &input,
        cfg.noise_variance,
        &mut RandomSource::with_stream(cfg.seed, NOISE_STREAM),
    )?;

    let mut filter = LmsFilter::new(h.len(), cfg.step_size)?;
    let identification = Identification::new(
        &input[..cfg.training_length],
        &received[..cfg.training_length],
    )
    .stride(cfg.snapshot_stride)
    .truth(h.taps());
    let (trajectory, classifications) = match cfg.variant {
        Variant::Plain => (
            identification.run_guided(&mut filter, &mut Unguided)?,
            Vec::new(),
        ),
        Variant::Adg | Variant::AdgTd => {
            let mode = if cfg.variant == Variant::AdgTd {
                MeasureMode::Decoupled
            } else {
                MeasureMode::Plain
            };
            let tracker = ActivityTracker::new(h.len(), mode, cfg.threshold_constant)?;
            let mut gate = ActivityGate::new(tracker, cfg.cadence, cfg.hysteresis)?;
            let traj = identification.run_guided(&mut filter, &mut gate)?;
            (traj, gate.history().to_vec())
        }
    };

    let mask = filter
        .active_mask()
        .map_or_else(|| vec![true; h.len()], <[bool]>::to_vec);
    let estimate = DiscreteChannel::new(filter.weights().to_vec(), h.spacing(), mask)?;

    // The equalizer sees symbols through the transmit pulse and the channel.
    let response = estimate.convolve(&cfg.pulse.shape(m));
    let coefficients = design_from_channel(&response, cfg.noise_variance, cfg.dfe_config())
        .map_err(|e| match e {
            Error::DesignFailure { reason, .. } => Error::DesignFailure {
                reason,
                estimate: estimate.taps().to_vec(),
            },
            other => other,
        })?;

    let truth = SymbolSequence::new(symbols.as_slice()[training_symbols..].to_vec())?;
    let equalized = equalize(
        &coefficients,
        &received[training_symbols * m..],
        None,
        EqualizerMode::DecisionDirected,
    )?;
    let skip = cfg.skip();
    let symbol_errors = symbol_error_count(&equalized.decisions, &truth, skip)?;
    let squared_difference = truth
        .as_slice()
        .iter()
        .zip(&equalized.soft)
        .map(|(s, z)| (s - z).powi(2))
        .collect();

    let mse_smooth = moving_average(&trajectory.squared_errors, cfg.smoothing_window);
    let estimate_errors = trajectory
        .estimate_errors
        .as_deref()
        .expect("truth was supplied");
    let estimate_error_smooth = moving_average(estimate_errors, cfg.smoothing_window);
    let asymptote = asymptotic_mse(&estimate_error_smooth, cfg.tail_fraction)?;
    let asymptotic_prediction_mse = asymptotic_mse(&mse_smooth, cfg.tail_fraction)?;
    let convergence_iteration =
        convergence_iterations(&estimate_error_smooth, cfg.convergence_factor * asymptote);

    let mut result = RunResult {
        config: cfg.clone(),
        true_channel: h,
        estimate,
        trajectory,
        mse_smooth,
        estimate_error_smooth,
        classifications,
        coefficients,
        truth,
        equalized,
        squared_difference,
        skip,
        symbol_errors,
        burst_length: 0,
        asymptotic_mse: asymptote,
        asymptotic_prediction_mse,
        convergence_iteration,
        training_symbols,
        symbols_generated,
    };
    result.burst_length = burst_length(&result.error_flags(), BURST_QUIET);
    Ok(result)
}

/// One row of a variant comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub variant: Variant,
    pub seed: u64,
    /// Empty when the run never converged.
    pub convergence_iter: Option<usize>,
    pub asymptotic_mse: f64,
    pub symbol_errors: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariantSummary {
    pub variant: Variant,
    pub runs: usize,
    /// Unconverged runs count as the full training length.
    pub mean_convergence_iter: f64,
    pub not_converged: usize,
    pub mean_asymptotic_mse: f64,
    pub mean_symbol_errors: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub summaries: Vec<VariantSummary>,
    /// Per-variant mean of the smoothed estimate-error curves.
    pub mean_curves: Vec<(Variant, Vec<f64>)>,
}

impl Comparison {
    pub fn summary(&self, variant: Variant) -> Option<&VariantSummary> {
        self.summaries.iter().find(|s| s.variant == variant)
    }
}

/// Runs all three variants for every seed. Runs execute in parallel; the
/// result is ordered by variant, then seed.
pub fn compare_variants(cfg: &ExperimentConfig, seeds: &[u64]) -> Result<Comparison> {
    if seeds.is_empty() {
        return Err(Error::invalid("comparison needs at least one seed"));
    }
    let jobs: Vec<(Variant, u64)> = Variant::ALL
        .iter()
        .flat_map(|&v| seeds.iter().map(move |&s| (v, s)))
        .collect();
    let results: Vec<(Variant, u64, RunResult)> = jobs
        .par_iter()
        .map(|&(variant, seed)| {
            let run_cfg = ExperimentConfig {
                variant,
                seed,
                ..cfg.clone()
            };
            run_experiment(&run_cfg).map(|r| (variant, seed, r))
        })
        .collect::<Result<_>>()?;

    let rows = results
        .iter()
        .map(|(variant, seed, r)| ComparisonRow {
            variant: *variant,
            seed: *seed,
            convergence_iter: r.convergence_iteration,
            asymptotic_mse: r.asymptotic_mse,
            symbol_errors: r.symbol_errors,
        })
        .collect();

    let mut summaries = Vec::new();
    let mut mean_curves = Vec::new();
    for variant in Variant::ALL {
        let runs: Vec<&RunResult> = results
            .iter()
            .filter(|(v, _, _)| *v == variant)
            .map(|(_, _, r)| r)
            .collect();
        let n = runs.len() as f64;
        let mean = |f: &dyn Fn(&RunResult) -> f64| runs.iter().map(|r| f(r)).sum::<f64>() / n;
        summaries.push(VariantSummary {
            variant,
            runs: runs.len(),
            mean_convergence_iter: mean(&|r| {
                r.convergence_iteration
                    .unwrap_or(r.estimate_error_smooth.len()) as f64
            }),
            not_converged: runs
                .iter()
                .filter(|r| r.convergence_iteration.is_none())
                .count(),
            mean_asymptotic_mse: mean(&|r| r.asymptotic_mse),
            mean_symbol_errors: mean(&|r| r.symbol_errors as f64),
        });
        let len = runs[0].estimate_error_smooth.len();
        let curve = (0..len)
            .map(|i| runs.iter().map(|r| r.estimate_error_smooth[i]).sum::<f64>() / n)
            .collect();
        mean_curves.push((variant, curve));
    }
    Ok(Comparison {
        rows,
        summaries,
        mean_curves,
    })
}

/// One row of a parameter sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub key: String,
    pub value: String,
    pub variant: Variant,
    pub seed: u64,
    pub convergence_iter: Option<usize>,
    pub asymptotic_mse: f64,
    pub symbol_errors: usize,
}

/// Re-runs `cfg` with `key` set to each of `values`.
pub fn sweep(cfg: &ExperimentConfig, key: &str, values: &[String]) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(Error::invalid("sweep needs at least one value"));
    }
    let configs = values
        .iter()
        .map(|v| cfg.with_override(key, v))
        .collect::<Result<Vec<_>>>()?;
    let results = configs
        .par_iter()
        .map(run_experiment)
        .collect::<Result<Vec<_>>>()?;
    Ok(values
        .iter()
        .zip(results)
        .map(|(value, r)| SweepRow {
            key: key.to_string(),
            value: value.clone(),
            variant: r.config.variant,
            seed: r.config.seed,
            convergence_iter: r.convergence_iteration,
            asymptotic_mse: r.asymptotic_mse,
            symbol_errors: r.symbol_errors,
        })
        .collect())
}
