//! Block complexity, maximal pattern complexity and the tests built on them.
//!
//! All counts are taken over finite windows and are therefore lower bounds
//! for the complexity of the underlying infinite word.

mod nonrecurrent;
mod pattern;

pub use nonrecurrent::{nonrecurrent_extension_test, NonRecurrentProbe, NonRecurrentReport, Witness};
pub use pattern::{
    complexity_report, count_patterns, max_pattern_complexity, ComplexityReport, PatternTemplate,
    SearchMode, SearchOptions,
};

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::sequences::{Symbol, Window};

/// Number of distinct length-`n` factors of the window.
pub fn block_complexity(window: &Window, n: usize) -> Result<usize> {
    Ok(factor_set(&window.symbols, n)?.len())
}

pub(crate) fn factor_set(word: &[Symbol], n: usize) -> Result<HashSet<&[Symbol]>> {
    if n == 0 || n > word.len() {
        return Err(Error::WindowTooShort { len: word.len(), required: n.max(1) });
    }
    Ok(word.windows(n).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Periodicity {
    /// Some probed `n` has `p(n) <= n`.
    Periodic { n: usize },
    Aperiodic,
}

/// Morse–Hedlund test on `n = 1..=n_max`.
pub fn periodicity_test(window: &Window, n_max: usize) -> Result<Periodicity> {
    for n in 1..=n_max {
        if block_complexity(window, n)? <= n {
            return Ok(Periodicity::Periodic { n });
        }
    }
    Ok(Periodicity::Aperiodic)
}

/// Two-sided aperiodicity criterion: `p*(n) >= 2n` for every probed `n`.
pub fn pattern_aperiodic(report: &ComplexityReport) -> bool {
    report.n_values.iter().zip(&report.pstar).all(|(&n, &p)| p >= 2 * n)
}

/// Smallest `p <= max_period` with `w[i] = w[i + p]` throughout the window.
pub fn smallest_period(window: &Window, max_period: usize) -> Option<usize> {
    let w = &window.symbols;
    (1..=max_period.min(w.len())).find(|&p| w.iter().zip(&w[p..]).all(|(a, b)| a == b))
}
