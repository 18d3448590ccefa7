//! Transfer matrices, trace polynomials and Lyapunov exponents.
//!
//! Products follow the right-to-left convention
//! `A_{w_1 ⋯ w_n} = A_{w_n} ⋯ A_{w_1}` with `A_x = [[E - x, -1], [1, 0]]`.

mod cheb;
mod ext;
mod lyapunov;
mod matrix;
mod trace;

pub use cheb::{cheb_eval, cheb_pair};
pub use ext::ExtFloat;
pub use lyapunov::{lyapunov, sample_starts, LyapunovEstimate};
pub use matrix::{Mat2, ScaledMatrix};
pub use trace::{d_matrix, trace_at, trace_recursion, trace_table, TraceEvaluator, TraceTable, DIRECT_BUDGET};

use crate::error::{Error, Result};
use crate::sequences::{Alphabet, Symbol};

/// Rescaled product over a word of symbol indices into `values`.
pub fn word_product(word: &[Symbol], energy: f64, values: &[f64]) -> Result<ScaledMatrix> {
    let mut acc = ScaledMatrix::identity();
    for (i, &s) in word.iter().enumerate() {
        let v = *values
            .get(s as usize)
            .ok_or_else(|| Error::Precondition(format!("symbol index {s} outside the alphabet")))?;
        acc.push(&Mat2::transfer(energy, v));
        if (i + 1) % ScaledMatrix::RESCALE_EVERY == 0 {
            acc.rescale();
        }
    }
    acc.rescale();
    Ok(acc)
}

/// `A_{w_1 ⋯ w_n}` for a word written with alphabet labels.
pub fn word_matrix(word: &str, energy: f64, alphabet: &Alphabet) -> Result<Mat2> {
    let symbols = alphabet.parse(word)?;
    let mut m = Mat2::IDENTITY;
    for s in symbols {
        m = Mat2::transfer(energy, alphabet.value(s)) * m;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(vec!['a', 'b'], vec![0.0, 1.0]).unwrap()
    }

    #[test]
    fn word_matrix_examples() {
        assert_eq!(word_matrix("", 0.3, &ab()).unwrap(), Mat2::IDENTITY);
        let m = word_matrix("aab", 0.0, &ab()).unwrap();
        assert_eq!(m, Mat2::new(1.0, 1.0, -1.0, 0.0));
        assert_eq!(m.trace(), 1.0);
        assert_eq!(word_matrix("aaaa", 0.0, &ab()).unwrap(), Mat2::IDENTITY);
        assert!(word_matrix("abc", 0.0, &ab()).is_err());
    }

    #[test]
    fn scaled_product_matches_plain() {
        let w: Vec<Symbol> = (0..100).map(|i| ((i * 7) % 3 == 0) as Symbol).collect();
        let text = ab().render(&w);
        let plain = word_matrix(&text, 0.37, &ab()).unwrap();
        let scaled = word_product(&w, 0.37, ab().values()).unwrap();
        let t = scaled.trace().to_f64();
        assert!((t - plain.trace()).abs() <= 1e-12 * plain.trace().abs().max(1.0));
    }

    #[test]
    fn norm_of_rotation_and_diagonal() {
        assert!((Mat2::transfer(0.0, 0.0).norm() - 1.0).abs() < 1e-15);
        assert!((Mat2::new(3.0, 0.0, 0.0, 0.5).norm() - 3.0).abs() < 1e-14);
    }
}
