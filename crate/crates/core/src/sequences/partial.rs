use super::{Alphabet, Symbol, HOLE};
use crate::error::{Error, Result};

/// A periodic partial word with at most one hole per period.
///
/// `cells[r]` is the letter at every index `x ≡ r (mod period)`; `None` marks
/// the hole.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialWord {
    cells: Vec<Option<Symbol>>,
    hole: Option<usize>,
}

impl PartialWord {
    pub fn new(cells: Vec<Option<Symbol>>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidSpec("partial word needs period >= 1".into()));
        }
        let mut holes = cells.iter().enumerate().filter(|(_, c)| c.is_none()).map(|(i, _)| i);
        let hole = holes.next();
        if holes.next().is_some() {
            return Err(Error::InvalidSpec("more than one hole per period".into()));
        }
        Ok(Self { cells, hole })
    }

    /// `?^Z`, the neutral element of composition.
    pub fn identity() -> Self {
        Self { cells: vec![None], hole: Some(0) }
    }

    /// Parses one period, `?` marking the hole.
    pub fn parse(alphabet: &Alphabet, period: &str) -> Result<Self> {
        let cells = period
            .chars()
            .map(|c| if c == HOLE { Ok(None) } else { alphabet.symbol(c).map(Some) })
            .collect::<Result<Vec<_>>>()?;
        Self::new(cells)
    }

    pub fn period(&self) -> usize {
        self.cells.len()
    }

    pub fn hole_offset(&self) -> Option<usize> {
        self.hole
    }

    pub fn cells(&self) -> &[Option<Symbol>] {
        &self.cells
    }

    pub fn at(&self, x: i64) -> Option<Symbol> {
        self.cells[x.rem_euclid(self.cells.len() as i64) as usize]
    }

    /// `self ⊲ inner`: writes `inner` into the holes of `self`, in order.
    pub fn compose(&self, inner: &PartialWord) -> Result<PartialWord> {
        let l = self.hole.ok_or_else(|| {
            Error::Precondition("outer partial word is fully determined".into())
        })? as i64;
        let n = self.period() as i64;
        let period = self.period() * inner.period();
        let cells = (0..period as i64)
            .map(|x| {
                if x % n == l {
                    inner.at((x - l) / n)
                } else {
                    self.cells[(x % n) as usize]
                }
            })
            .collect();
        let out = PartialWord::new(cells)?;
        debug_assert_eq!(out.hole, inner.hole.map(|h| l as usize + self.period() * h));
        Ok(out)
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        self.cells.iter().map(|c| c.map_or(HOLE, |s| alphabet.label(s))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(vec!['a', 'b'], vec![0.0, 1.0]).unwrap()
    }

    #[test]
    fn worked_composition() {
        let a = ab();
        let outer = PartialWord::parse(&a, "?aa").unwrap();
        let inner = PartialWord::parse(&a, "?bb").unwrap();
        let c = outer.compose(&inner).unwrap();
        assert_eq!(c.period(), 9);
        assert_eq!(c.hole_offset(), Some(0));
        assert_eq!(c.render(&a), "?aabaabaa");
    }

    #[test]
    fn identity_is_neutral() {
        let a = ab();
        let w = PartialWord::parse(&a, "ab?b").unwrap();
        assert_eq!(PartialWord::identity().compose(&w).unwrap(), w);
        assert_eq!(w.compose(&PartialWord::identity()).unwrap(), w);
    }

    #[test]
    fn hole_follows_inner_hole() {
        let a = ab();
        let outer = PartialWord::parse(&a, "a?a").unwrap();
        let inner = PartialWord::parse(&a, "bb?a").unwrap();
        let c = outer.compose(&inner).unwrap();
        assert_eq!(c.hole_offset(), Some(1 + 3 * 2));
        let full = PartialWord::parse(&a, "ab").unwrap();
        assert_eq!(outer.compose(&full).unwrap().hole_offset(), None);
    }

    #[test]
    fn errors() {
        let a = ab();
        assert!(PartialWord::parse(&a, "a??").is_err());
        let full = PartialWord::parse(&a, "ab").unwrap();
        assert!(full.compose(&PartialWord::identity()).is_err());
    }
}
