//! Band approximants `σ_k = { E : |h_k(E)| <= 2 }` and half-line checks for
//! sparse potentials.

mod bands;
mod halfline;
mod sparse;

pub use bands::{
    band_approximant, grid_containment, sample_energies, sigma_n, BandParams, Containment, MAX_LEVEL,
};
pub use halfline::{halfline_eigs, HalfLineOperator};
pub use sparse::{
    sparse_essential_spectrum, sparse_no_eigenvalue_certificate, SeriesVerdict, SparseCertificate,
};

/// Closed interval `[lo, hi]`; `isolated` marks a tangency point found
/// without a sign change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
    pub isolated: bool,
}

impl Band {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Sorted, disjoint union of closed bands.
#[derive(Debug, Clone, PartialEq)]
pub struct BandSet {
    /// Trace levels whose union this set approximates.
    pub levels: Vec<usize>,
    pub bands: Vec<Band>,
    pub tol: f64,
    pub grid_step: f64,
}

impl BandSet {
    pub fn measure(&self) -> f64 {
        self.bands.iter().map(Band::width).sum()
    }

    pub fn len(&self) -> usize {
        self.bands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bands.is_empty()
    }

    /// `E` lies within `slack` of some band.
    pub fn contains(&self, energy: f64, slack: f64) -> bool {
        let i = self.bands.partition_point(|b| b.hi + slack < energy);
        self.bands.get(i).is_some_and(|b| b.lo - slack <= energy)
    }

    /// Union, merging bands that overlap or touch.
    pub fn union(&self, other: &BandSet) -> BandSet {
        let mut all: Vec<Band> = self.bands.iter().chain(&other.bands).copied().collect();
        all.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut bands: Vec<Band> = Vec::with_capacity(all.len());
        for b in all {
            match bands.last_mut() {
                Some(last) if b.lo <= last.hi => {
                    last.hi = last.hi.max(b.hi);
                    last.isolated &= b.isolated;
                }
                _ => bands.push(b),
            }
        }
        let mut levels: Vec<usize> = self.levels.iter().chain(&other.levels).copied().collect();
        levels.sort_unstable();
        levels.dedup();
        BandSet {
            levels,
            bands,
            tol: self.tol.max(other.tol),
            grid_step: self.grid_step.max(other.grid_step),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(b: &[(f64, f64)]) -> BandSet {
        BandSet {
            levels: vec![0],
            bands: b.iter().map(|&(lo, hi)| Band { lo, hi, isolated: false }).collect(),
            tol: 1e-10,
            grid_step: 1e-3,
        }
    }

    #[test]
    fn union_merges_overlaps() {
        let u = set(&[(0.0, 1.0), (2.0, 3.0)]).union(&set(&[(0.5, 1.5), (4.0, 5.0)]));
        assert_eq!(u.bands.len(), 3);
        assert_eq!((u.bands[0].lo, u.bands[0].hi), (0.0, 1.5));
        assert!((u.measure() - 3.5).abs() < 1e-15);
    }

    #[test]
    fn containment_with_slack() {
        let s = set(&[(0.0, 1.0), (2.0, 3.0)]);
        assert!(s.contains(0.5, 0.0));
        assert!(!s.contains(1.5, 0.1));
        assert!(s.contains(1.05, 0.1));
        assert!(!s.contains(-0.2, 0.1));
        assert!(s.contains(3.0, 0.0));
    }
}
