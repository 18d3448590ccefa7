use crate::cocycle::Mat2;
use crate::error::{Error, Result};
use crate::sequences::SparseSpec;

/// `([-2, 2], sgn v · √(4 + v²))`.
pub fn sparse_essential_spectrum(spec: &SparseSpec) -> ((f64, f64), f64) {
    let v = spec.barrier();
    ((-2.0, 2.0), v.signum() * (4.0 + v * v).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesVerdict {
    /// The terms grow: the series diverges and `E` is not an eigenvalue.
    Divergent,
    /// The terms decay geometrically: no conclusion.
    Convergent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseCertificate {
    pub energy: f64,
    /// `sup_j ‖T^j‖` for `T = [[E, -1], [1, 0]]`: the condition number
    /// `√((2 + |E|) / (2 - |E|))` of the matrix conjugating `T` to a rotation.
    pub c_e: f64,
    /// `max_{j <= sample_powers} ‖T^j‖`.
    pub c_e_sampled: f64,
    pub sample_powers: usize,
    /// `‖[[E - v, -1], [1, 0]]‖`.
    pub o_ev: f64,
    /// Terms `(n_{k+1} - n_k) / (C_E O_{E,v})^{2k}` for `k = 1..=k_max`.
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub verdict: SeriesVerdict,
}

/// Evaluates the divergence criterion excluding `E` from the point
/// spectrum. The verdict is a ratio test on the last three terms.
pub fn sparse_no_eigenvalue_certificate(
    spec: &SparseSpec,
    energy: f64,
    k_max: usize,
    sample_powers: usize,
) -> Result<SparseCertificate> {
    if energy.is_nan() || energy.abs() >= 2.0 {
        return Err(Error::EnergyOutOfRange(energy));
    }
    if k_max < 4 {
        return Err(Error::Precondition("k_max must be at least 4".into()));
    }
    let c_e = ((2.0 + energy.abs()) / (2.0 - energy.abs())).sqrt();
    let t = Mat2::transfer(energy, 0.0);
    let mut p = Mat2::IDENTITY;
    let mut c_e_sampled: f64 = 1.0;
    for _ in 0..sample_powers {
        p = t * p;
        c_e_sampled = c_e_sampled.max(p.norm());
    }
    let o_ev = Mat2::transfer(energy, spec.barrier()).norm();
    let base = (c_e * o_ev).powi(2);

    let rule = spec.rule();
    let mut terms = Vec::with_capacity(k_max);
    let mut partial_sums = Vec::with_capacity(k_max);
    let mut sum = 0.0;
    for k in 1..=k_max {
        let (Some(a), Some(b)) = (rule.position(k), rule.position(k + 1)) else {
            return Err(Error::Precondition(format!("n_{} is not available", k + 1)));
        };
        let term = (b - a) as f64 / base.powi(k as i32);
        sum += term;
        terms.push(term);
        partial_sums.push(sum);
    }
    let ratios: Vec<f64> = terms[terms.len() - 4..].windows(2).map(|w| w[1] / w[0]).collect();
    let verdict = if ratios.iter().all(|&r| r >= 1.0) {
        SeriesVerdict::Divergent
    } else if ratios.iter().all(|&r| r < 1.0) {
        SeriesVerdict::Convergent
    } else {
        SeriesVerdict::Inconclusive
    };
    Ok(SparseCertificate {
        energy,
        c_e,
        c_e_sampled,
        sample_powers,
        o_ev,
        terms,
        partial_sums,
        verdict,
    })
}
