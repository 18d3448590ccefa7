use super::{ScaledMatrix, Mat2};
use crate::error::{Error, Result};
use crate::sequences::SequenceSpec;

/// Mean and spread of `(1/n) ln ‖A(n, x)‖` over several window starts.
#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovEstimate {
    pub energy: f64,
    pub gamma: f64,
    /// `max - min` over the samples.
    pub spread: f64,
    pub samples: Vec<f64>,
    pub starts: Vec<i64>,
}

/// Window starts used by [`lyapunov`]: `1, 1 + 1009, 1 + 2·1009, …`.
pub fn sample_starts(samples: usize) -> Vec<i64> {
    (0..samples as i64).map(|i| 1 + 1009 * i).collect()
}

/// `(1/n) ln ‖A_{V(s+n-1)} ⋯ A_{V(s)}‖` for every start `s`.
pub fn lyapunov(
    source: &SequenceSpec,
    energy: f64,
    n_steps: usize,
    starts: &[i64],
) -> Result<LyapunovEstimate> {
    if n_steps == 0 || starts.is_empty() {
        return Err(Error::Precondition("need n_steps >= 1 and at least one start".into()));
    }
    let mut samples = Vec::with_capacity(starts.len());
    for &s in starts {
        let pot = source.potential(s, n_steps)?;
        let mut acc = ScaledMatrix::identity();
        for (i, &v) in pot.values.iter().enumerate() {
            acc.push(&Mat2::transfer(energy, v));
            if (i + 1) % ScaledMatrix::RESCALE_EVERY == 0 {
                acc.rescale();
            }
        }
        if !acc.is_finite() {
            return Err(Error::Overflow { energy });
        }
        samples.push(acc.ln_norm() / n_steps as f64);
    }
    let gamma = samples.iter().sum::<f64>() / samples.len() as f64;
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    Ok(LyapunovEstimate { energy, gamma, spread: hi - lo, samples, starts: starts.to_vec() })
}
