use super::{Alphabet, Symbol, Window};
use crate::error::{Error, Result};

/// Positions `n_1 < n_2 < ⋯` of a sparse potential.
#[derive(Debug, Clone, PartialEq)]
pub enum GrowthRule {
    Explicit(Vec<i64>),
    /// `n_k = scale · base^k + offset` for `k >= 1`.
    Geometric { scale: i64, base: i64, offset: i64 },
    /// `n_1 = first`, `n_{k+1} = n_k + (k + shift)!`.
    FactorialGaps { first: i64, shift: u32 },
}

impl GrowthRule {
    /// `n_k` for `k >= 1`, or `None` past the end of the list or on overflow.
    pub fn position(&self, k: usize) -> Option<i64> {
        if k == 0 {
            return None;
        }
        match self {
            GrowthRule::Explicit(list) => list.get(k - 1).copied(),
            GrowthRule::Geometric { scale, base, offset } => {
                let p = base.checked_pow(u32::try_from(k).ok()?)?;
                scale.checked_mul(p)?.checked_add(*offset)
            }
            GrowthRule::FactorialGaps { first, shift } => {
                let mut n = *first;
                for j in 1..k {
                    n = n.checked_add(factorial(j as u64 + *shift as u64)?)?;
                }
                Some(n)
            }
        }
    }

    /// All positions `<= max`.
    pub fn positions_up_to(&self, max: i64) -> Vec<i64> {
        (1..).map_while(|k| self.position(k)).take_while(|&n| n <= max).collect()
    }

    /// Checks `n_{k+1} > 2 n_k >= 1` on every representable pair.
    pub fn validate(&self) -> Result<()> {
        let Some(first) = self.position(1) else {
            return Err(Error::InvalidSpec("sparse rule has no positions".into()));
        };
        if first < 1 {
            return Err(Error::InvalidSpec(format!("n_1 = {first} must be at least 1")));
        }
        let mut prev = first;
        for k in 2.. {
            let Some(n) = self.position(k) else { break };
            if n <= prev.saturating_mul(2) {
                return Err(Error::InvalidSpec(format!(
                    "n_{k} = {n} must exceed 2 n_{} = {}",
                    k - 1,
                    2 * prev
                )));
            }
            prev = n;
        }
        Ok(())
    }
}

fn factorial(m: u64) -> Option<i64> {
    (1..=m).try_fold(1i64, |acc, j| acc.checked_mul(j as i64))
}

/// Sparse potential: `v` at every `n_k`, `0` at the other positive sites,
/// and `left_fill` at sites `<= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSpec {
    rule: GrowthRule,
    barrier: f64,
    left_fill: Symbol,
    alphabet: Alphabet,
}

impl SparseSpec {
    pub const ZERO: Symbol = 0;
    pub const BARRIER: Symbol = 1;

    pub fn new(rule: GrowthRule, barrier: f64, left_fill: Symbol) -> Result<Self> {
        if barrier == 0.0 || !barrier.is_finite() {
            return Err(Error::InvalidSpec(format!("barrier v = {barrier} must be finite and nonzero")));
        }
        if left_fill > Self::BARRIER {
            return Err(Error::InvalidSpec("left_fill must be symbol 0 or 1".into()));
        }
        rule.validate()?;
        let alphabet = Alphabet::new(vec!['0', 'v'], vec![0.0, barrier])?;
        Ok(Self { rule, barrier, left_fill, alphabet })
    }

    pub fn rule(&self) -> &GrowthRule {
        &self.rule
    }

    pub fn barrier(&self) -> f64 {
        self.barrier
    }

    pub fn left_fill(&self) -> Symbol {
        self.left_fill
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn window(&self, start: i64, len: usize) -> Result<Window> {
        if len == 0 {
            return Err(Error::Precondition("len must be at least 1".into()));
        }
        let end = start + len as i64;
        let mut symbols: Vec<Symbol> = (start..end)
            .map(|x| if x <= 0 { self.left_fill } else { Self::ZERO })
            .collect();
        for n in self.rule.positions_up_to(end - 1) {
            if n >= start {
                symbols[(n - start) as usize] = Self::BARRIER;
            }
        }
        Window::new(start, symbols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pow3() -> GrowthRule {
        GrowthRule::Geometric { scale: 1, base: 3, offset: 0 }
    }

    #[test]
    fn barriers_sit_at_the_positions() {
        let s = SparseSpec::new(pow3(), 2.0, 0).unwrap();
        let w = s.window(1, 29).unwrap();
        for x in 1..30 {
            let want = if [3, 9, 27].contains(&x) { 1 } else { 0 };
            assert_eq!(w.get(x), Some(want), "x = {x}");
        }
    }

    #[test]
    fn growth_condition() {
        assert!(SparseSpec::new(GrowthRule::Explicit(vec![1, 3]), 1.0, 0).is_ok());
        assert!(SparseSpec::new(GrowthRule::Explicit(vec![2, 4]), 1.0, 0).is_err());
        assert!(SparseSpec::new(GrowthRule::Explicit(vec![0, 4]), 1.0, 0).is_err());
        assert!(SparseSpec::new(pow3(), 0.0, 0).is_err());
        let two = GrowthRule::Geometric { scale: 1, base: 2, offset: -1 };
        assert!(SparseSpec::new(two, 1.0, 0).is_ok());
        let fact = GrowthRule::FactorialGaps { first: 1, shift: 0 };
        assert!(SparseSpec::new(fact, 1.0, 0).is_err());
        let fact = GrowthRule::FactorialGaps { first: 1, shift: 2 };
        assert!(SparseSpec::new(fact.clone(), 1.0, 0).is_ok());
        assert_eq!(fact.positions_up_to(200), vec![1, 7, 31, 151]);
    }

    #[test]
    fn left_extension() {
        let s = SparseSpec::new(pow3(), 2.0, 0).unwrap();
        let w = s.window(-5, 10).unwrap();
        assert!((-5..=0).all(|x| w.get(x) == Some(0)));
        assert_eq!(w.get(3), Some(1));
    }
}
