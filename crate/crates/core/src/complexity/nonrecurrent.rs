use std::collections::HashSet;

use super::factor_set;
use crate::error::{Error, Result};
use crate::sequences::{SparseSpec, Symbol};

/// A factor `v` of the one-sided word occurring at `position` and nowhere
/// to its right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub position: i64,
    pub word: Vec<Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonRecurrentProbe {
    pub n: usize,
    /// Exact `p(n)` of the one-sided word.
    pub p_one_sided: usize,
    /// Exact `p(n)` of the two-sided extension.
    pub p_two_sided: usize,
    pub threshold: usize,
    /// `p_two_sided > 2n + j`.
    pub certified: bool,
    /// Number of left-crossing words `w^(m)`; zero when `n <= k + |v|`.
    pub crossing_words: usize,
    /// The crossing words are distinct, contain `v`, and do not occur in
    /// the one-sided word.
    pub crossing_words_new: bool,
    /// Window `[lo, hi)` used for the two-sided count.
    pub window: (i64, i64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonRecurrentReport {
    pub j: usize,
    pub witness: Witness,
    pub probes: Vec<NonRecurrentProbe>,
}

impl NonRecurrentReport {
    pub fn certified_count(&self) -> usize {
        self.probes.iter().filter(|p| p.certified).count()
    }
}

/// Block complexity of the two-sided extension of a sparse word against
/// the `2n + j` threshold.
///
/// The witness is `v = u[n_1 ..= n_2]`, which never recurs since the gaps
/// grow. Counts are exact: the window runs until the first barrier whose
/// gaps on both sides exceed `n`, past which no new length-`n` factor can
/// appear.
pub fn nonrecurrent_extension_test(
    spec: &SparseSpec,
    j: usize,
    n_probe: &[usize],
    max_window: usize,
) -> Result<NonRecurrentReport> {
    let rule = spec.rule();
    let (Some(n1), Some(n2)) = (rule.position(1), rule.position(2)) else {
        return Err(Error::Precondition("the witness needs two barrier positions".into()));
    };
    let v = spec.window(n1, (n2 - n1 + 1) as usize)?.symbols;
    let witness = Witness { position: n1, word: v };
    let k = n1 as usize;
    let kv = k + witness.word.len();

    let mut probes = Vec::with_capacity(n_probe.len());
    for &n in n_probe {
        if n == 0 {
            return Err(Error::Precondition("probe n must be at least 1".into()));
        }
        let barrier = (2..)
            .map_while(|i| Some((rule.position(i - 1)?, rule.position(i)?, rule.position(i + 1))))
            .find(|&(prev, cur, next)| {
                cur - prev > n as i64 && next.is_none_or(|nx| nx - cur > n as i64)
            })
            .map(|(_, cur, _)| cur);
        let Some(barrier) = barrier else {
            return Err(Error::Precondition(format!(
                "the growth rule has no isolated barrier for n = {n}"
            )));
        };
        let lo = -(n as i64) + 1;
        let hi = barrier + n as i64;
        let len = (hi - lo) as usize;
        if len > max_window {
            return Err(Error::WindowTooShort { len: max_window, required: len });
        }
        let two_sided = spec.window(lo, len)?;
        let one_sided = &two_sided.symbols[(1 - lo) as usize..];
        let p_one = factor_set(one_sided, n)?;
        let p_two = factor_set(&two_sided.symbols, n)?.len();

        let crossing = n.saturating_sub(kv);
        let mut fresh = true;
        let mut seen = HashSet::new();
        for m in 1..=crossing {
            let start = (kv as i64 - n as i64 + m as i64 - lo) as usize;
            let w = &two_sided.symbols[start..start + n];
            let has_v = w.windows(witness.word.len()).any(|f| f == &witness.word[..]);
            fresh &= has_v && seen.insert(w) && !p_one.contains(w);
        }
        let threshold = 2 * n + j;
        probes.push(NonRecurrentProbe {
            n,
            p_one_sided: p_one.len(),
            p_two_sided: p_two,
            threshold,
            certified: p_two > threshold,
            crossing_words: crossing,
            crossing_words_new: fresh,
            window: (lo, hi),
        });
    }
    Ok(NonRecurrentReport { j, witness, probes })
}
