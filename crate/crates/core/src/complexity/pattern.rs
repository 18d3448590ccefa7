use std::collections::HashSet;

use rayon::prelude::*;

use super::factor_set;
use crate::error::{Error, Result};
use crate::sequences::{Symbol, Window};

/// Gap template `0 = τ(0) < τ(1) < ⋯ < τ(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternTemplate {
    offsets: Vec<usize>,
}

impl PatternTemplate {
    pub fn new(offsets: Vec<usize>) -> Result<Self> {
        if offsets.first() != Some(&0) || offsets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(format!(
                "template offsets must start at 0 and increase strictly: {offsets:?}"
            )));
        }
        Ok(Self { offsets })
    }

    pub fn contiguous(n: usize) -> Self {
        Self { offsets: (0..n.max(1)).collect() }
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn span(&self) -> usize {
        *self.offsets.last().expect("templates are non-empty")
    }
}

/// Number of distinct tuples `V(m + τ(0)) ⋯ V(m + τ(n-1))` over the
/// positions `m` in `[window.start, window.end() - t_max)`.
pub fn count_patterns(window: &Window, template: &PatternTemplate, t_max: usize) -> Result<usize> {
    let m_count = positions(window, t_max)?;
    if template.span() > t_max {
        return Err(Error::Precondition(format!(
            "template span {} exceeds T_max = {t_max}",
            template.span()
        )));
    }
    let w = &window.symbols;
    let set: HashSet<Vec<Symbol>> = (0..m_count)
        .map(|m| template.offsets.iter().map(|&t| w[m + t]).collect())
        .collect();
    Ok(set.len())
}

fn positions(window: &Window, t_max: usize) -> Result<usize> {
    if window.len() <= t_max {
        return Err(Error::WindowTooShort { len: window.len(), required: t_max + 1 });
    }
    Ok(window.len() - t_max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Exhaustive within the configured limits, beam search beyond.
    Auto,
    Exhaustive,
    Beam,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub mode: SearchMode,
    pub beam_width: usize,
    /// Largest number of templates an exhaustive search may visit.
    pub template_cap: u128,
    pub exhaustive_max_n: usize,
    pub exhaustive_max_t: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            mode: SearchMode::Auto,
            beam_width: 64,
            template_cap: 50_000_000,
            exhaustive_max_n: 5,
            exhaustive_max_t: 60,
        }
    }
}

impl SearchOptions {
    fn exhaustive_for(&self, n: usize, t_max: usize) -> bool {
        match self.mode {
            SearchMode::Exhaustive => true,
            SearchMode::Beam => false,
            SearchMode::Auto => n <= self.exhaustive_max_n && t_max <= self.exhaustive_max_t,
        }
    }
}

/// Partition of the sampling positions into classes of equal tuples.
#[derive(Clone)]
struct Classes {
    ids: Vec<u32>,
    count: usize,
}

impl Classes {
    fn initial(word: &[Symbol], m_count: usize, alpha: usize) -> Self {
        Self::from_column(&word[..m_count], alpha)
    }

    fn from_column(col: &[Symbol], alpha: usize) -> Self {
        let mut map = vec![u32::MAX; alpha];
        let mut count = 0u32;
        let ids = col
            .iter()
            .map(|&s| {
                let slot = &mut map[s as usize];
                if *slot == u32::MAX {
                    *slot = count;
                    count += 1;
                }
                *slot
            })
            .collect();
        Self { ids, count: count as usize }
    }

    fn refine(&self, word: &[Symbol], shift: usize, alpha: usize) -> Self {
        let mut map = vec![u32::MAX; self.count * alpha];
        let mut count = 0u32;
        let ids = self
            .ids
            .iter()
            .enumerate()
            .map(|(m, &c)| {
                let slot = &mut map[c as usize * alpha + word[m + shift] as usize];
                if *slot == u32::MAX {
                    *slot = count;
                    count += 1;
                }
                *slot
            })
            .collect();
        Self { ids, count: count as usize }
    }

    fn refined_count(&self, word: &[Symbol], shift: usize, alpha: usize) -> usize {
        let mut seen = vec![false; self.count * alpha];
        let mut count = 0;
        for (m, &c) in self.ids.iter().enumerate() {
            let slot = &mut seen[c as usize * alpha + word[m + shift] as usize];
            if !*slot {
                *slot = true;
                count += 1;
            }
        }
        count
    }

    fn of_template(word: &[Symbol], m_count: usize, alpha: usize, offsets: &[usize]) -> Self {
        offsets[1..]
            .iter()
            .fold(Self::initial(word, m_count, alpha), |c, &t| c.refine(word, t, alpha))
    }
}

fn alphabet_size(word: &[Symbol]) -> usize {
    word.iter().copied().max().map_or(1, |s| s as usize + 1)
}

/// Best template first: larger count, then lexicographically smaller offsets.
fn better(a: &(usize, Vec<usize>), b: &(usize, Vec<usize>)) -> std::cmp::Ordering {
    b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1))
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Estimated `p*(n)` with offsets bounded by `t_max`, and a maximizing
/// template (ties broken lexicographically).
pub fn max_pattern_complexity(
    window: &Window,
    n: usize,
    t_max: usize,
    opts: &SearchOptions,
) -> Result<(usize, PatternTemplate)> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    if n > t_max + 1 {
        return Err(Error::Precondition(format!("n = {n} needs T_max >= {}", n - 1)));
    }
    if opts.exhaustive_for(n, t_max) {
        exhaustive(window, n, t_max, opts.template_cap)
    } else {
        let report = beam(window, n, t_max, opts.beam_width)?;
        Ok(report.into_iter().last().expect("beam yields one result per n"))
    }
}

fn exhaustive(
    window: &Window,
    n: usize,
    t_max: usize,
    cap: u128,
) -> Result<(usize, PatternTemplate)> {
    let count = binomial(t_max as u128, (n - 1) as u128);
    if count > cap {
        return Err(Error::TemplateBudget { count, cap });
    }
    let m_count = positions(window, t_max)?;
    let word = &window.symbols[..];
    let alpha = alphabet_size(word);
    let root = Classes::initial(word, m_count, alpha);
    if n == 1 {
        return Ok((root.count, PatternTemplate::contiguous(1)));
    }

    fn dfs(
        word: &[Symbol],
        alpha: usize,
        t_max: usize,
        remaining: usize,
        classes: &Classes,
        offsets: &mut Vec<usize>,
        best: &mut (usize, Vec<usize>),
    ) {
        let last = *offsets.last().expect("root offset present");
        let hi = t_max + 1 - (remaining - 1);
        for t in last + 1..hi {
            offsets.push(t);
            if remaining == 1 {
                let c = classes.refined_count(word, t, alpha);
                let cand = (c, offsets.clone());
                if better(&cand, best).is_lt() {
                    *best = cand;
                }
            } else {
                let next = classes.refine(word, t, alpha);
                dfs(word, alpha, t_max, remaining - 1, &next, offsets, best);
            }
            offsets.pop();
        }
    }

    let best = (1..=t_max + 1 - (n - 1))
        .into_par_iter()
        .map(|first| {
            let mut best = (0usize, Vec::new());
            let mut offsets = vec![0, first];
            if n == 2 {
                best = (root.refined_count(word, first, alpha), offsets);
            } else {
                let c = root.refine(word, first, alpha);
                dfs(word, alpha, t_max, n - 2, &c, &mut offsets, &mut best);
            }
            best
        })
        .reduce(|| (0, Vec::new()), |a, b| if better(&b, &a).is_lt() { b } else { a });
    Ok((best.0, PatternTemplate { offsets: best.1 }))
}

/// Beam search for `n = 1..=n_max`, one result per `n`.
fn beam(
    window: &Window,
    n_max: usize,
    t_max: usize,
    width: usize,
) -> Result<Vec<(usize, PatternTemplate)>> {
    let m_count = positions(window, t_max)?;
    let word = &window.symbols[..];
    let alpha = alphabet_size(word);
    let width = width.max(1);

    // (count, offsets, parent beam index and inserted offset)
    type Candidate = (usize, Vec<usize>, Option<(usize, usize)>);
    let root = Classes::initial(word, m_count, alpha);
    let mut out = vec![(root.count, PatternTemplate::contiguous(1))];
    let mut beam: Vec<(Vec<usize>, Classes)> = vec![(vec![0], root)];

    for n in 2..=n_max {
        let mut cands: Vec<Candidate> = beam
            .par_iter()
            .enumerate()
            .flat_map_iter(|(i, (offsets, classes))| {
                (1..=t_max).filter(|t| !offsets.contains(t)).map(move |t| {
                    let mut o = offsets.clone();
                    let pos = o.partition_point(|&x| x < t);
                    o.insert(pos, t);
                    (classes.refined_count(word, t, alpha), o, Some((i, t)))
                })
            })
            .collect();
        let contiguous: Vec<usize> = (0..n).collect();
        let c = Classes::of_template(word, m_count, alpha, &contiguous).count;
        cands.push((c, contiguous, None));

        cands.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        cands.dedup_by(|a, b| a.1 == b.1);
        cands.truncate(width);

        out.push((cands[0].0, PatternTemplate { offsets: cands[0].1.clone() }));
        if n < n_max {
            beam = cands
                .into_par_iter()
                .map(|(_, offsets, parent)| {
                    let classes = match parent {
                        Some((i, t)) => beam[i].1.refine(word, t, alpha),
                        None => Classes::of_template(word, m_count, alpha, &offsets),
                    };
                    (offsets, classes)
                })
                .collect();
        }
    }
    Ok(out)
}

/// `p` and `p*` estimates for `n = 1..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityReport {
    pub n_values: Vec<usize>,
    /// Contiguous-template counts over the same positions as `pstar`.
    pub p: Vec<usize>,
    pub pstar: Vec<usize>,
    pub templates: Vec<PatternTemplate>,
    pub window_len: usize,
    pub t_max: usize,
    /// Sampling positions `m`, half-open.
    pub position_range: (i64, i64),
}

/// Complexity estimates for every `n <= n_max`. Small `n` use the exhaustive
/// search when the options allow it; the rest share one beam pass.
pub fn complexity_report(
    window: &Window,
    n_max: usize,
    t_max: usize,
    opts: &SearchOptions,
) -> Result<ComplexityReport> {
    if n_max == 0 || n_max > t_max + 1 {
        return Err(Error::Precondition(format!("need 1 <= n_max <= T_max + 1 (n_max = {n_max})")));
    }
    let m_count = positions(window, t_max)?;
    let beam_results = if (1..=n_max).any(|n| !opts.exhaustive_for(n, t_max)) {
        Some(beam(window, n_max, t_max, opts.beam_width)?)
    } else {
        None
    };
    let mut report = ComplexityReport {
        n_values: Vec::new(),
        p: Vec::new(),
        pstar: Vec::new(),
        templates: Vec::new(),
        window_len: window.len(),
        t_max,
        position_range: (window.start, window.start + m_count as i64),
    };
    for n in 1..=n_max {
        let (pstar, template) = if opts.exhaustive_for(n, t_max) {
            exhaustive(window, n, t_max, opts.template_cap)?
        } else {
            beam_results.as_ref().expect("beam ran")[n - 1].clone()
        };
        let p = factor_set(&window.symbols[..m_count + n - 1], n)?.len();
        report.n_values.push(n);
        report.p.push(p);
        report.pstar.push(pstar);
        report.templates.push(template);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(bits: &str) -> Window {
        Window::new(0, bits.bytes().map(|b| b - b'0').collect()).unwrap()
    }

    #[test]
    fn template_validation() {
        assert!(PatternTemplate::new(vec![0, 2, 5]).is_ok());
        assert!(PatternTemplate::new(vec![1, 2]).is_err());
        assert!(PatternTemplate::new(vec![0, 2, 2]).is_err());
    }

    #[test]
    fn refinement_matches_hashing() {
        let w = word("0010010100100101001001010010010100100");
        let t = PatternTemplate::new(vec![0, 3, 4, 9]).unwrap();
        let m = w.len() - 10;
        let c = Classes::of_template(&w.symbols, m, 2, t.offsets());
        assert_eq!(c.count, count_patterns(&w, &t, 10).unwrap());
    }

    #[test]
    fn single_symbol_count() {
        let w = word("0110100110010110");
        let opts = SearchOptions::default();
        assert_eq!(max_pattern_complexity(&w, 1, 3, &opts).unwrap().0, 2);
    }

    #[test]
    fn budget_is_enforced() {
        let w = word(&"01".repeat(200));
        let opts = SearchOptions { mode: SearchMode::Exhaustive, template_cap: 10, ..Default::default() };
        assert!(matches!(
            max_pattern_complexity(&w, 3, 50, &opts),
            Err(Error::TemplateBudget { .. })
        ));
    }

    #[test]
    fn beam_agrees_with_exhaustive_on_small_cases() {
        let w = word("0010010100100101001001010010010100100101001001010010010100100");
        for n in 1..=3 {
            let ex = SearchOptions { mode: SearchMode::Exhaustive, ..Default::default() };
            let bm = SearchOptions { mode: SearchMode::Beam, beam_width: 1000, ..Default::default() };
            let a = max_pattern_complexity(&w, n, 8, &ex).unwrap();
            let b = max_pattern_complexity(&w, n, 8, &bm).unwrap();
            assert_eq!(a.0, b.0, "n = {n}");
        }
    }
}
