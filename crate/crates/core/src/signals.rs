//! Seeded symbol/noise generation and rate conversion.
//!
//! All randomness comes from [`RandomSource`], a ChaCha20 stream cipher
//! generator (`rand_chacha::ChaCha20Rng`). Its output is fixed by the ChaCha20
//! definition, so a `(seed, stream)` pair reproduces the same draws on every
//! platform. Uniform doubles take the top 53 bits of a `u64` draw; Gaussian
//! draws use the Box–Muller transform on pairs of uniforms.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Deterministic pseudo-random source.
#[derive(Clone, Debug)]
pub struct RandomSource {
    rng: ChaCha20Rng,
    spare_normal: Option<f64>,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Independent sub-stream of the same seed. Streams never overlap.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RandomSource {
            rng,
            spare_normal: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal draw (Box–Muller, both outputs used).
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        // 1 - U lies in (0, 1], keeping the logarithm finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare_normal = Some(r * theta.sin());
        r * theta.cos()
    }
}

/// Antipodal (BPSK) symbol sequence at one sample per symbol period.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SymbolSequence(Vec<f64>);

impl SymbolSequence {
    /// Wraps `symbols`, rejecting anything outside `{-1, +1}`.
    pub fn new(symbols: Vec<f64>) -> Result<Self> {
        if let Some(bad) = symbols.iter().find(|&&s| s != 1.0 && s != -1.0) {
            return Err(Error::invalid(format!("symbol {bad} is not +1 or -1")));
        }
        Ok(SymbolSequence(symbols))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for SymbolSequence {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// `n` equiprobable ±1 symbols.
pub fn gen_symbols(n: usize, src: &mut RandomSource) -> SymbolSequence {
    let symbols = (0..n)
        .map(|_| if src.next_u64() >> 63 == 0 { 1.0 } else { -1.0 })
        .collect();
    SymbolSequence(symbols)
}

/// `n` i.i.d. zero-mean Gaussian samples of the given variance.
pub fn gen_awgn(n: usize, variance: f64, src: &mut RandomSource) -> Result<Vec<f64>> {
    if !(variance.is_finite() && variance >= 0.0) {
        return Err(Error::invalid(format!(
            "noise variance must be finite and >= 0, got {variance}"
        )));
    }
    if variance == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let sigma = variance.sqrt();
    Ok((0..n).map(|_| sigma * src.standard_normal()).collect())
}

/// Zero-stuffing: symbol `k` lands at sample `k * factor`, the rest are zero.
pub fn upsample(symbols: &SymbolSequence, factor: usize) -> Result<Vec<f64>> {
    check_factor(factor)?;
    let mut out = vec![0.0; symbols.len() * factor];
    for (k, &s) in symbols.as_slice().iter().enumerate() {
        out[k * factor] = s;
    }
    Ok(out)
}

/// Sample-and-hold (NRZ): each symbol is repeated for `factor` samples.
pub fn hold(symbols: &SymbolSequence, factor: usize) -> Result<Vec<f64>> {
    check_factor(factor)?;
    Ok(symbols
        .as_slice()
        .iter()
        .flat_map(|&s| std::iter::repeat_n(s, factor))
        .collect())
}

/// Keeps every `factor`-th sample starting at index 0.
pub fn downsample(samples: &[f64], factor: usize) -> Result<Vec<f64>> {
    check_factor(factor)?;
    Ok(samples.iter().step_by(factor).copied().collect())
}

fn check_factor(factor: usize) -> Result<()> {
    if factor == 0 {
        Err(Error::invalid("oversampling factor must be >= 1"))
    } else {
        Ok(())
    }
}

/// How symbols are carried onto the fractional-rate sample grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pulse {
    /// Zero-stuffed impulses, see [`upsample`].
    Impulse,
    /// Rectangular NRZ pulse one symbol long, see [`hold`].
    #[default]
    Hold,
}

impl Pulse {
    pub fn apply(self, symbols: &SymbolSequence, factor: usize) -> Result<Vec<f64>> {
        match self {
            Pulse::Impulse => upsample(symbols, factor),
            Pulse::Hold => hold(symbols, factor),
        }
    }

    /// Fractional-rate samples of a single symbol's pulse.
    pub fn shape(self, factor: usize) -> Vec<f64> {
        match self {
            Pulse::Impulse => vec![1.0],
            Pulse::Hold => vec![1.0; factor.max(1)],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_symbols() {
        let mut src = RandomSource::new(1);
        assert!(gen_symbols(0, &mut src).is_empty());
    }

    #[test]
    fn symbols_are_deterministic() {
        let a = gen_symbols(1000, &mut RandomSource::new(42));
        let b = gen_symbols(1000, &mut RandomSource::new(42));
        assert_eq!(a, b);
        let c = gen_symbols(1000, &mut RandomSource::new(43));
        assert_ne!(a, c);
    }

    #[test]
    fn symbol_mean_is_small() {
        // 3 sigma of the mean of n fair +-1 draws is 3/sqrt(n) ~ 0.0095.
        let s = gen_symbols(100_000, &mut RandomSource::new(7));
        assert!(s.as_slice().iter().all(|&x| x == 1.0 || x == -1.0));
        let mean = s.as_slice().iter().sum::<f64>() / s.len() as f64;
        assert!(mean.abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn awgn_variance() {
        let n = 100_000;
        let x = gen_awgn(n, 0.1, &mut RandomSource::new(3)).unwrap();
        let mean = x.iter().sum::<f64>() / n as f64;
        let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((0.095..=0.105).contains(&var), "variance {var}");
        assert!(mean.abs() < 0.005);
    }

    #[test]
    fn awgn_degenerate_and_invalid() {
        let mut src = RandomSource::new(0);
        assert_eq!(gen_awgn(5, 0.0, &mut src).unwrap(), vec![0.0; 5]);
        assert!(matches!(
            gen_awgn(5, -0.1, &mut src),
            Err(Error::InvalidArgument(_))
        ));
        let a = gen_awgn(64, 1.0, &mut RandomSource::new(9)).unwrap();
        let b = gen_awgn(64, 1.0, &mut RandomSource::new(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn streams_differ() {
        let a = RandomSource::with_stream(5, 0).next_u64();
        let b = RandomSource::with_stream(5, 1).next_u64();
        assert_ne!(a, b);
    }

    #[test]
    fn upsample_examples() {
        let s = SymbolSequence::new(vec![1.0, -1.0]).unwrap();
        assert_eq!(upsample(&s, 1).unwrap(), vec![1.0, -1.0]);
        assert_eq!(upsample(&s, 2).unwrap(), vec![1.0, 0.0, -1.0, 0.0]);
        assert_eq!(hold(&s, 2).unwrap(), vec![1.0, 1.0, -1.0, -1.0]);
        assert!(upsample(&s, 0).is_err());
        assert!(SymbolSequence::new(vec![0.5]).is_err());
    }

    proptest! {
        #[test]
        fn upsample_then_downsample_is_identity(seed in any::<u64>(), n in 0usize..200, m in 1usize..6) {
            let s = gen_symbols(n, &mut RandomSource::new(seed));
            let up = upsample(&s, m).unwrap();
            prop_assert_eq!(up.len(), n * m);
            prop_assert_eq!(downsample(&up, m).unwrap(), s.as_slice().to_vec());
            let held = hold(&s, m).unwrap();
            prop_assert_eq!(downsample(&held, m).unwrap(), s.as_slice().to_vec());
        }
    }
}
