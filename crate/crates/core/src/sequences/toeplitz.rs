use std::collections::HashSet;

use super::{Alphabet, PartialWord, Symbol, Window};
use crate::error::{Error, Result};

/// `(ϖ, n, l)`: the period-`n` partial word reading `ϖ?` on `[l+1, l+n]`,
/// so its hole class is `nℤ + l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodingTriple {
    pub pattern: Vec<Symbol>,
    pub period: usize,
    pub offset: usize,
}

impl CodingTriple {
    pub fn new(pattern: Vec<Symbol>, period: usize, offset: usize) -> Result<Self> {
        if period == 0 || pattern.len() + 1 != period || offset >= period {
            return Err(Error::InvalidSpec(format!(
                "coding triple needs |pattern| = period - 1 and 0 <= offset < period \
                 (got |pattern| = {}, period = {period}, offset = {offset})",
                pattern.len()
            )));
        }
        Ok(Self { pattern, period, offset })
    }

    pub fn identity() -> Self {
        Self { pattern: Vec::new(), period: 1, offset: 0 }
    }

    /// `(a^{n-1}, n, l)`.
    pub fn simple(letter: Symbol, period: usize, offset: usize) -> Result<Self> {
        Self::new(vec![letter; period.saturating_sub(1)], period, offset)
    }

    /// The single letter of a constant pattern, if any.
    pub fn letter(&self) -> Option<Symbol> {
        let first = *self.pattern.first()?;
        self.pattern.iter().all(|&s| s == first).then_some(first)
    }

    /// Cell at `x`; `None` on the hole class.
    pub fn cell(&self, x: i64) -> Option<Symbol> {
        let n = self.period as i64;
        let l = self.offset as i64;
        let r = x.rem_euclid(n);
        if r == l {
            None
        } else {
            Some(self.pattern[(r - l - 1).rem_euclid(n) as usize])
        }
    }

    pub fn partial_word(&self) -> PartialWord {
        let cells = (0..self.period as i64).map(|x| self.cell(x)).collect();
        PartialWord::new(cells).expect("a coding triple has exactly one hole")
    }

    /// The triple of `self ⊲ inner`: pattern `ϖ ϖ'_1 ϖ ϖ'_2 ⋯ ϖ'_{n'-1} ϖ`,
    /// period `n n'`, offset `l + n l'`.
    pub fn merge(&self, inner: &CodingTriple) -> CodingTriple {
        let mut pattern = Vec::with_capacity(self.period * inner.period - 1);
        for &s in &inner.pattern {
            pattern.extend_from_slice(&self.pattern);
            pattern.push(s);
        }
        pattern.extend_from_slice(&self.pattern);
        CodingTriple {
            pattern,
            period: self.period * inner.period,
            offset: self.offset + self.period * inner.offset,
        }
    }
}

/// A Toeplitz word `β^{(ϖ,n,l)} ⊲ β̃` with `β̃` simple.
///
/// The simple tail is an eventually periodic list of coding triples:
/// `tail[cycle_from..]` repeats forever. Construction normalizes the coding
/// so every tail period is at least 3.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzSpec {
    alphabet: Alphabet,
    prefix: CodingTriple,
    tail: Vec<CodingTriple>,
    cycle_from: usize,
    extension: Option<Symbol>,
    folded: usize,
}

const MAX_DESCENT: usize = 100_000;

impl ToeplitzSpec {
    pub fn new(
        alphabet: Alphabet,
        prefix: CodingTriple,
        tail: Vec<CodingTriple>,
        cycle_from: usize,
        extension: Option<Symbol>,
    ) -> Result<Self> {
        let n_sym = alphabet.len();
        let check_symbols = |t: &CodingTriple| -> Result<()> {
            if t.pattern.iter().any(|&s| s as usize >= n_sym) {
                return Err(Error::InvalidSpec("pattern symbol outside the alphabet".into()));
            }
            Ok(())
        };
        check_symbols(&prefix)?;
        if tail.is_empty() {
            return Err(Error::InvalidSpec("simple tail must be non-empty".into()));
        }
        if cycle_from >= tail.len() {
            return Err(Error::InvalidSpec(format!(
                "cycle_from = {cycle_from} is past the end of a tail of length {}",
                tail.len()
            )));
        }
        let mut letters = Vec::with_capacity(tail.len());
        for (i, t) in tail.iter().enumerate() {
            check_symbols(t)?;
            if t.period < 2 {
                return Err(Error::InvalidSpec(format!("tail triple {} has period < 2", i + 1)));
            }
            letters.push(t.letter().ok_or_else(|| {
                Error::InvalidSpec(format!("tail triple {} is not a constant pattern", i + 1))
            })?);
        }
        for i in 0..tail.len() {
            let next = if i + 1 < tail.len() { i + 1 } else { cycle_from };
            if letters[i] == letters[next] {
                return Err(Error::InvalidSpec(format!(
                    "consecutive tail letters must differ (triples {} and {})",
                    i + 1,
                    next + 1
                )));
            }
        }
        if let Some(i) = tail[cycle_from..].iter().position(|t| t.period == 2) {
            return Err(Error::InvalidSpec(format!(
                "repeating tail triple {} has period 2 and cannot be merged away",
                cycle_from + i + 1
            )));
        }
        if let Some(e) = extension {
            if e as usize >= n_sym {
                return Err(Error::InvalidSpec("extension letter outside the alphabet".into()));
            }
            if !letters[cycle_from..].contains(&e) {
                return Err(Error::InvalidSpec(
                    "extension letter must recur in the coding patterns".into(),
                ));
            }
        }

        // Fold every leading period-2 triple (and everything before it) into
        // the prefix; the word is unchanged by associativity.
        let (prefix, tail, cycle_from, folded) =
            match tail[..cycle_from].iter().rposition(|t| t.period == 2) {
                Some(last) => {
                    let merged =
                        tail[..=last].iter().fold(prefix, |acc, t| acc.merge(t));
                    (merged, tail[last + 1..].to_vec(), cycle_from - last - 1, last + 1)
                }
                None => (prefix, tail, cycle_from, 0),
            };
        Ok(Self { alphabet, prefix, tail, cycle_from, extension, folded })
    }

    /// Simple Toeplitz word with identity prefix, the given cycle of periods
    /// and letters alternating `a, b, a, b, …`, all offsets zero.
    pub fn simple_cycle(
        alphabet: Alphabet,
        periods: &[usize],
        extension: Option<Symbol>,
    ) -> Result<Self> {
        let cycle = if periods.len() % 2 == 1 { 2 } else { 1 };
        let tail = periods
            .iter()
            .cycle()
            .take(periods.len() * cycle)
            .enumerate()
            .map(|(i, &n)| CodingTriple::simple((i % 2) as Symbol, n, 0))
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, CodingTriple::identity(), tail, 0, extension)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn prefix(&self) -> &CodingTriple {
        &self.prefix
    }

    pub fn tail(&self) -> &[CodingTriple] {
        &self.tail
    }

    pub fn cycle_from(&self) -> usize {
        self.cycle_from
    }

    pub fn extension(&self) -> Option<Symbol> {
        self.extension
    }

    /// Number of leading tail triples absorbed into the prefix by normalization.
    pub fn folded(&self) -> usize {
        self.folded
    }

    /// Level 0 is the prefix; level `k >= 1` is the `k`-th tail triple.
    pub fn level(&self, k: usize) -> &CodingTriple {
        if k == 0 {
            return &self.prefix;
        }
        let i = k - 1;
        if i < self.tail.len() {
            &self.tail[i]
        } else {
            let cyc = self.tail.len() - self.cycle_from;
            &self.tail[self.cycle_from + (i - self.cycle_from) % cyc]
        }
    }

    /// `n_k` for `k >= 1`.
    pub fn tail_period(&self, k: usize) -> usize {
        self.level(k).period
    }

    /// `a_k` for `k >= 1`.
    pub fn tail_letter(&self, k: usize) -> Symbol {
        self.level(k).letter().expect("tail triples are simple")
    }

    /// Period of the composition of levels `0..=depth`, saturating.
    pub fn period(&self, depth: usize) -> u128 {
        (0..=depth).fold(1u128, |acc, k| acc.saturating_mul(self.level(k).period as u128))
    }

    /// `ℓ_k = n · n_1 ⋯ n_k`, the common length of `s_k` and `t_k`.
    pub fn block_len(&self, k: usize) -> usize {
        usize::try_from(self.period(k)).unwrap_or(usize::MAX)
    }

    /// Smallest depth whose period exceeds `len`.
    pub fn depth_for(&self, len: usize) -> usize {
        (0..).find(|&d| self.period(d) > len as u128).expect("periods grow")
    }

    /// Undetermined part `D_m` as `(modulus, residue)`.
    pub fn hole_class(&self, m: usize) -> (i128, i128) {
        let mut modulus = 1i128;
        let mut residue = 0i128;
        for k in 0..=m {
            let t = self.level(k);
            residue += modulus * t.offset as i128;
            modulus *= t.period as i128;
        }
        (modulus, residue.rem_euclid(modulus))
    }

    /// Letter of the limit word at `x`, or `None` if `x ∈ D_∞`.
    pub fn letter_at(&self, x: i64) -> Option<Symbol> {
        let mut y = x;
        let mut seen = HashSet::new();
        for k in 0..MAX_DESCENT {
            let t = self.level(k);
            if let Some(s) = t.cell(y) {
                return Some(s);
            }
            y = (y - t.offset as i64).div_euclid(t.period as i64);
            if k > self.cycle_from {
                let phase = (k - 1 - self.cycle_from) % (self.tail.len() - self.cycle_from);
                if !seen.insert((y, phase)) {
                    return None;
                }
            }
        }
        None
    }

    /// Window `[start, start + len)` of the limit word. `depth` must be deep
    /// enough that the composed period exceeds `len`; the single position of
    /// `D_∞`, if visible, takes the extension letter.
    pub fn window(&self, depth: usize, start: i64, len: usize) -> Result<Window> {
        if len == 0 {
            return Err(Error::Precondition("len must be at least 1".into()));
        }
        if self.period(depth) <= len as u128 {
            return Err(Error::Precondition(format!(
                "depth {depth} has period {} <= window length {len}; use depth >= {}",
                self.period(depth),
                self.depth_for(len)
            )));
        }
        let symbols = (start..start + len as i64)
            .map(|x| match self.letter_at(x) {
                Some(s) => Ok(s),
                None => self.extension.ok_or(Error::UnfilledHole { index: x }),
            })
            .collect::<Result<Vec<_>>>()?;
        Window::new(start, symbols)
    }

    /// Same coding with every offset replaced (prefix first, then the tail).
    pub fn with_offsets(&self, prefix_offset: usize, tail_offsets: &[usize]) -> Result<Self> {
        if tail_offsets.len() != self.tail.len() {
            return Err(Error::InvalidSpec("one offset per tail triple".into()));
        }
        let prefix =
            CodingTriple::new(self.prefix.pattern.clone(), self.prefix.period, prefix_offset)?;
        let tail = self
            .tail
            .iter()
            .zip(tail_offsets)
            .map(|(t, &l)| CodingTriple::new(t.pattern.clone(), t.period, l))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.alphabet.clone(), prefix, tail, self.cycle_from, self.extension)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(vec!['a', 'b'], vec![0.0, 1.0]).unwrap()
    }

    fn simple3(ext: Option<Symbol>) -> ToeplitzSpec {
        ToeplitzSpec::simple_cycle(ab(), &[3], ext).unwrap()
    }

    #[test]
    fn triple_cells_follow_the_displayed_layout() {
        // β([l+1, l+n]) = ϖ?
        let t = CodingTriple::new(vec![0, 1], 3, 1).unwrap();
        assert_eq!(t.cell(2), Some(0));
        assert_eq!(t.cell(3), Some(1));
        assert_eq!(t.cell(4), None);
        assert_eq!(t.cell(1), None);
        assert_eq!(t.cell(-1), Some(0));
    }

    #[test]
    fn merge_matches_composition() {
        let outer = CodingTriple::new(vec![0], 2, 1).unwrap();
        let inner = CodingTriple::new(vec![1, 1, 1], 4, 2).unwrap();
        let m = outer.merge(&inner);
        assert_eq!(m.period, 8);
        assert_eq!(m.offset, 1 + 2 * 2);
        let composed = outer.partial_word().compose(&inner.partial_word()).unwrap();
        assert_eq!(m.partial_word(), composed);
    }

    #[test]
    fn simple_window_reads_s2() {
        // (a,3,0),(b,3,0),(a,3,0): [1, 9] is s_2 = aab aab aaa
        let s = simple3(None);
        let w = s.window(3, 1, 9).unwrap();
        assert_eq!(s.alphabet().render(&w.symbols), "aabaabaaa");
    }

    #[test]
    fn d_infinity_needs_extension() {
        let s = simple3(None);
        assert_eq!(s.window(4, -3, 7).unwrap_err(), Error::UnfilledHole { index: 0 });
        let s = simple3(Some(1));
        let w = s.window(4, -3, 7).unwrap();
        assert_eq!(w.get(0), Some(1));
        assert_eq!(s.letter_at(0), None);
    }

    #[test]
    fn depth_must_cover_window() {
        let s = simple3(Some(0));
        assert!(s.window(3, 1, 27).is_err());
        assert!(s.window(3, 1, 26).is_ok());
        assert_eq!(s.depth_for(27), 4);
    }

    #[test]
    fn depth_stability() {
        let s = simple3(Some(0));
        let a = s.window(5, -100, 200).unwrap();
        let b = s.window(9, -100, 200).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hole_class_matches_formula() {
        let a = ab();
        let tail = vec![
            CodingTriple::simple(0, 3, 1).unwrap(),
            CodingTriple::simple(1, 4, 2).unwrap(),
        ];
        let s = ToeplitzSpec::new(a, CodingTriple::identity(), tail, 0, None).unwrap();
        // D_2 = 12ℤ + (1 + 3·2)
        assert_eq!(s.hole_class(2), (12, 7));
        for x in -30..30i64 {
            let hole2 = (x - 7).rem_euclid(12) == 0;
            let c1 = s.level(1).cell(x);
            let inner = if c1.is_none() { s.level(2).cell((x - 1) / 3) } else { c1 };
            assert_eq!(inner.is_none(), hole2, "x = {x}");
        }
    }

    #[test]
    fn period_two_is_folded_into_prefix() {
        let a = ab();
        let tail = vec![
            CodingTriple::simple(0, 3, 0).unwrap(),
            CodingTriple::simple(1, 2, 1).unwrap(),
            CodingTriple::simple(0, 3, 0).unwrap(),
            CodingTriple::simple(1, 3, 0).unwrap(),
        ];
        let s = ToeplitzSpec::new(a.clone(), CodingTriple::identity(), tail.clone(), 2, Some(0))
            .unwrap();
        assert_eq!(s.folded(), 2);
        assert_eq!(s.prefix().period, 6);
        assert!(s.tail().iter().all(|t| t.period >= 3));
        // cell-wise equality against the unnormalized composition
        let raw = tail.iter().fold(CodingTriple::identity().partial_word(), |acc, t| {
            acc.compose(&t.partial_word()).unwrap()
        });
        for x in 0..raw.period() as i64 {
            if let Some(sym) = raw.at(x) {
                assert_eq!(s.letter_at(x), Some(sym), "x = {x}");
            }
        }
    }

    #[test]
    fn rejects_invalid_tails() {
        let a = ab();
        let same = vec![
            CodingTriple::simple(0, 3, 0).unwrap(),
            CodingTriple::simple(0, 3, 0).unwrap(),
        ];
        assert!(ToeplitzSpec::new(a.clone(), CodingTriple::identity(), same, 0, None).is_err());
        let cyc2 = vec![
            CodingTriple::simple(0, 2, 0).unwrap(),
            CodingTriple::simple(1, 3, 0).unwrap(),
        ];
        assert!(ToeplitzSpec::new(a.clone(), CodingTriple::identity(), cyc2, 0, None).is_err());
        let odd = vec![CodingTriple::simple(0, 3, 0).unwrap()];
        assert!(ToeplitzSpec::new(a, CodingTriple::identity(), odd, 0, None).is_err());
    }
}
