use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sequences::Potential;

/// Truncation of `H_φ` to `ℓ²({1, …, N})`.
///
/// The condition `ψ(0) sin φ + ψ(1) cos φ = 0` eliminates `ψ(0) = -cot φ · ψ(1)`,
/// so the first diagonal entry becomes `V(1) - cot φ`. When `sin φ = 0` the
/// condition forces `ψ(1) = 0` and site 1 is removed.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfLineOperator {
    pub phi: f64,
    diag: Vec<f64>,
}

impl HalfLineOperator {
    pub const MIN_SIZE: usize = 64;

    pub fn new(potential: &Potential, phi: f64) -> Result<Self> {
        if potential.start != 1 {
            return Err(Error::Precondition(format!(
                "half-line potential must start at site 1, not {}",
                potential.start
            )));
        }
        let n = potential.values.len();
        if n < Self::MIN_SIZE {
            return Err(Error::Precondition(format!(
                "truncation size {n} is below {}",
                Self::MIN_SIZE
            )));
        }
        let mut diag = potential.values.clone();
        let (s, c) = phi.sin_cos();
        if s.abs() < 1e-12 {
            diag.remove(0);
        } else {
            diag[0] -= c / s;
        }
        Ok(Self { phi, diag })
    }

    /// Dirichlet condition `ψ(0) = 0`.
    pub fn dirichlet(potential: &Potential) -> Result<Self> {
        Self::new(potential, std::f64::consts::FRAC_PI_2)
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Number of eigenvalues strictly below `x`, from the signs of the
    /// `LDLᵀ` pivots of `H - x`.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - x } else { d - x - 1.0 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + x.abs() + 2.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval.
    pub fn bounds(&self) -> (f64, f64) {
        let lo = self.diag.iter().fold(f64::INFINITY, |m, &d| m.min(d)) - 2.0;
        let hi = self.diag.iter().fold(f64::NEG_INFINITY, |m, &d| m.max(d)) + 2.0;
        (lo, hi)
    }

    /// The `j`-th smallest eigenvalue (0-based), by bisection.
    pub fn eigenvalue(&self, j: usize) -> f64 {
        let (mut lo, mut hi) = self.bounds();
        loop {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                return mid;
            }
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    /// Eigenvalues in `[lo, hi)`, ascending.
    pub fn eigs_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let (a, b) = (self.count_below(lo), self.count_below(hi));
        (a..b).into_par_iter().map(|j| self.eigenvalue(j)).collect()
    }
}

/// The `count` largest eigenvalues, ascending (all of them when
/// `count >= N`).
pub fn halfline_eigs(op: &HalfLineOperator, count: usize) -> Vec<f64> {
    let n = op.size();
    let first = n.saturating_sub(count);
    (first..n).into_par_iter().map(|j| op.eigenvalue(j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero(n: usize) -> Potential {
        Potential { start: 1, values: vec![0.0; n] }
    }

    #[test]
    fn free_dirichlet_spectrum() {
        let n = 128;
        let op = HalfLineOperator::dirichlet(&zero(n)).unwrap();
        let eigs = halfline_eigs(&op, n);
        for (i, e) in eigs.iter().enumerate() {
            let j = (n - i) as f64;
            let want = 2.0 * (std::f64::consts::PI * j / (n + 1) as f64).cos();
            assert!((e - want).abs() < 1e-12, "{e} vs {want}");
        }
    }

    #[test]
    fn boundary_row() {
        let op = HalfLineOperator::new(&zero(64), std::f64::consts::FRAC_PI_4).unwrap();
        assert!((op.diagonal()[0] + 1.0).abs() < 1e-12);
        let op = HalfLineOperator::new(&zero(64), 0.0).unwrap();
        assert_eq!(op.size(), 63);
        assert!(HalfLineOperator::new(&zero(10), 1.0).is_err());
    }
}
