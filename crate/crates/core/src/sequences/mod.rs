//! Finite windows of circle-map, Toeplitz and sparse sequences.
//!
//! Every generator produces a [`Window`]: a contiguous run of symbols
//! together with the index of its first site. Index 1 is the first site of
//! the half line; two-sided words use the same frame and extend to
//! negative indices.

mod alphabet;
mod blocks;
mod circle;
mod partial;
mod sparse;
mod toeplitz;

pub use alphabet::{Alphabet, Symbol, HOLE};
pub use blocks::{blocks, k_partition, BlockKind, PartitionBlock, PartitionView};
pub use circle::{golden_convergent, CircleMapSpec, Convergent};
pub use partial::PartialWord;
pub use sparse::{GrowthRule, SparseSpec};
pub use toeplitz::{CodingTriple, ToeplitzSpec};

use crate::error::{Error, Result};

/// A finite view of an infinite word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub start: i64,
    pub symbols: Vec<Symbol>,
}

impl Window {
    pub fn new(start: i64, symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::Precondition("window must be non-empty".into()));
        }
        Ok(Self { start, symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// One past the last index.
    pub fn end(&self) -> i64 {
        self.start + self.symbols.len() as i64
    }

    pub fn contains(&self, index: i64) -> bool {
        index >= self.start && index < self.end()
    }

    pub fn get(&self, index: i64) -> Option<Symbol> {
        if self.contains(index) {
            Some(self.symbols[(index - self.start) as usize])
        } else {
            None
        }
    }

    /// Sub-window `[from, from + len)`, which must lie inside `self`.
    pub fn slice(&self, from: i64, len: usize) -> Result<Window> {
        if len == 0 || from < self.start || from + len as i64 > self.end() {
            return Err(Error::Precondition(format!(
                "slice [{from}, {}) is not inside window [{}, {})",
                from + len as i64,
                self.start,
                self.end()
            )));
        }
        let off = (from - self.start) as usize;
        Window::new(from, self.symbols[off..off + len].to_vec())
    }

    pub fn valued(&self, alphabet: &Alphabet) -> Potential {
        Potential {
            start: self.start,
            values: self.symbols.iter().map(|&s| alphabet.value(s)).collect(),
        }
    }
}

/// Real-valued potential on a contiguous index range.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    pub start: i64,
    pub values: Vec<f64>,
}

impl Potential {
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64
    }

    pub fn at(&self, index: i64) -> Option<f64> {
        if index >= self.start && index < self.end() {
            Some(self.values[(index - self.start) as usize])
        } else {
            None
        }
    }
}

/// Tagged description of any supported generator.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceSpec {
    CircleMap(CircleMapSpec),
    Toeplitz(ToeplitzSpec),
    Sparse(SparseSpec),
}

impl SequenceSpec {
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            SequenceSpec::CircleMap(s) => s.alphabet(),
            SequenceSpec::Toeplitz(s) => s.alphabet(),
            SequenceSpec::Sparse(s) => s.alphabet(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SequenceSpec::CircleMap(_) => "circle_map",
            SequenceSpec::Toeplitz(_) => "toeplitz",
            SequenceSpec::Sparse(_) => "sparse",
        }
    }

    /// Window `[start, start + len)`; Toeplitz windows use the smallest depth
    /// whose period exceeds `len`.
    pub fn window(&self, start: i64, len: usize) -> Result<Window> {
        match self {
            SequenceSpec::CircleMap(s) => s.window(start, len),
            SequenceSpec::Toeplitz(s) => s.window(s.depth_for(len), start, len),
            SequenceSpec::Sparse(s) => s.window(start, len),
        }
    }

    pub fn potential(&self, start: i64, len: usize) -> Result<Potential> {
        Ok(self.window(start, len)?.valued(self.alphabet()))
    }
}
