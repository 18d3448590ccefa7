use crate::error::{Error, Result};

/// Index of a letter in its [`Alphabet`].
pub type Symbol = u8;

/// Reserved label of the undetermined position in partial words.
pub const HOLE: char = '?';

/// Ordered single-character labels with the real coupling attached to each.
#[derive(Debug, Clone, PartialEq)]
pub struct Alphabet {
    labels: Vec<char>,
    values: Vec<f64>,
}

impl Alphabet {
    pub fn new(labels: Vec<char>, values: Vec<f64>) -> Result<Self> {
        if labels.len() != values.len() {
            return Err(Error::InvalidSpec(format!(
                "{} labels but {} values",
                labels.len(),
                values.len()
            )));
        }
        if labels.len() < 2 {
            return Err(Error::InvalidSpec("alphabet needs at least two symbols".into()));
        }
        if labels.len() > Symbol::MAX as usize {
            return Err(Error::InvalidSpec("alphabet too large".into()));
        }
        if labels.contains(&HOLE) {
            return Err(Error::InvalidSpec(format!("'{HOLE}' is reserved for holes")));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidSpec(format!("duplicate label '{l}'")));
            }
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidSpec(format!("non-finite coupling {v}")));
        }
        Ok(Self { labels, values })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[char] {
        &self.labels
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self, s: Symbol) -> char {
        self.labels[s as usize]
    }

    pub fn value(&self, s: Symbol) -> f64 {
        self.values[s as usize]
    }

    pub fn symbol(&self, label: char) -> Result<Symbol> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|i| i as Symbol)
            .ok_or(Error::UnknownSymbol(label))
    }

    pub fn parse(&self, word: &str) -> Result<Vec<Symbol>> {
        word.chars().map(|c| self.symbol(c)).collect()
    }

    pub fn render(&self, word: &[Symbol]) -> String {
        word.iter().map(|&s| self.label(s)).collect()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_hole_label() {
        assert!(Alphabet::new(vec!['a', '?'], vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn rejects_duplicates_and_nan() {
        assert!(Alphabet::new(vec!['a', 'a'], vec![0.0, 1.0]).is_err());
        assert!(Alphabet::new(vec!['a', 'b'], vec![0.0, f64::NAN]).is_err());
        assert!(Alphabet::new(vec!['a'], vec![0.0]).is_err());
    }

    #[test]
    fn parse_render() {
        let a = Alphabet::new(vec!['a', 'b'], vec![0.0, 1.0]).unwrap();
        let w = a.parse("abba").unwrap();
        assert_eq!(w, vec![0, 1, 1, 0]);
        assert_eq!(a.render(&w), "abba");
        assert_eq!(a.parse("abc"), Err(Error::UnknownSymbol('c')));
    }
}
