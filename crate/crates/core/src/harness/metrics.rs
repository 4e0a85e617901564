use crate::{Error, Result};

/// Points the curve must stay within `2 * level` after a convergence crossing.
pub const HOLD_POINTS: usize = 200;

/// Trailing moving average; the first `window - 1` outputs average what is
/// available so far.
pub fn moving_average(xs: &[f64], window: usize) -> Vec<f64> {
    let window = window.max(1);
    let mut out = Vec::with_capacity(xs.len());
    let mut acc = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        acc += x;
        if i >= window {
            acc -= xs[i - window];
        }
        out.push(acc / (i + 1).min(window) as f64);
    }
    out
}

/// First index where `curve <= level` and the following [`HOLD_POINTS`]
/// points (fewer near the end of the curve) stay `<= 2 * level`.
pub fn convergence_iterations(curve: &[f64], level: f64) -> Option<usize> {
    let band = 2.0 * level;
    // Index of the next point above the band, scanning from the back.
    let mut next_above = vec![usize::MAX; curve.len() + 1];
    for i in (0..curve.len()).rev() {
        next_above[i] = if curve[i] > band {
            i
        } else {
            next_above[i + 1]
        };
    }
    (0..curve.len()).find(|&i| curve[i] <= level && next_above[i + 1] > i + HOLD_POINTS)
}

/// Mean of the last `tail_fraction` of `curve` (at least one point).
pub fn asymptotic_mse(curve: &[f64], tail_fraction: f64) -> Result<f64> {
    if curve.is_empty() {
        return Err(Error::invalid("empty curve has no asymptote"));
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::invalid(format!(
            "tail fraction must lie in (0, 1], got {tail_fraction}"
        )));
    }
    let n = ((curve.len() as f64 * tail_fraction).round() as usize).clamp(1, curve.len());
    let tail = &curve[curve.len() - n..];
    Ok(tail.iter().sum::<f64>() / n as f64)
}

/// Length of the initial error burst: one past the last error that occurs
/// before the first run of `quiet` consecutive correct decisions.
pub fn burst_length(errors: &[bool], quiet: usize) -> usize {
    let mut last_error = None;
    let mut run = 0;
    for (i, &e) in errors.iter().enumerate() {
        if e {
            last_error = Some(i);
            run = 0;
        } else {
            run += 1;
            if run >= quiet {
                break;
            }
        }
    }
    last_error.map_or(0, |i| i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moving_average_basics() {
        assert_eq!(
            moving_average(&[2.0, 4.0, 6.0, 8.0], 2),
            vec![2.0, 3.0, 5.0, 7.0]
        );
        assert_eq!(moving_average(&[1.0, 3.0], 1), vec![1.0, 3.0]);
        assert!(moving_average(&[], 5).is_empty());
    }

    #[test]
    fn convergence_examples() {
        let level = 0.01;
        assert_eq!(
            convergence_iterations(&vec![level / 2.0; 500], level),
            Some(0)
        );
        assert_eq!(convergence_iterations(&vec![level * 3.0; 500], level), None);

        // Geometric decay through the level at exactly index 417.
        let r: f64 = 0.99;
        let a = level / r.powi(417);
        let curve: Vec<f64> = (0..2000).map(|i| a * r.powi(i)).collect();
        assert!(curve[416] > level && curve[417] <= level);
        assert_eq!(convergence_iterations(&curve, level), Some(417));
    }

    #[test]
    fn convergence_requires_holding() {
        let level = 1.0;
        let mut curve = vec![5.0; 1000];
        curve[100] = 0.5; // isolated dip
        for v in &mut curve[600..] {
            *v = 0.8;
        }
        curve[700] = 1.9; // inside the 2x band, allowed
        assert_eq!(convergence_iterations(&curve, level), Some(600));
    }

    #[test]
    fn asymptote_examples() {
        assert_eq!(asymptotic_mse(&[0.3; 50], 0.1).unwrap(), 0.3);
        let mut curve = vec![1.0; 900];
        curve.extend(vec![0.001; 100]);
        assert!((asymptotic_mse(&curve, 0.1).unwrap() - 0.001).abs() < 1e-15);
        assert!(asymptotic_mse(&[], 0.1).is_err());
        assert!(asymptotic_mse(&[1.0], 0.0).is_err());
        assert!(asymptotic_mse(&[1.0], 1.5).is_err());
    }

    #[test]
    fn burst() {
        assert_eq!(burst_length(&[false; 10], 3), 0);
        let e = [true, false, true, false, false, false, true];
        assert_eq!(burst_length(&e, 3), 3);
    }
}
