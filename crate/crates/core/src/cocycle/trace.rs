use super::{cheb_pair, word_product, ExtFloat, Mat2};
use crate::error::{Error, Result};
use crate::sequences::{blocks, Symbol, ToeplitzSpec};

/// `h_k = tr A_{s_k}` at one energy, by direct products and by recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceTable {
    pub energy: f64,
    /// `None` where `ℓ_k` exceeds the product-length budget.
    pub h_direct: Vec<Option<ExtFloat>>,
    pub h_rec: Vec<ExtFloat>,
    /// `n_1, …, n_K`.
    pub periods: Vec<usize>,
}

impl TraceTable {
    pub fn levels(&self) -> usize {
        self.h_rec.len()
    }

    pub fn h(&self, k: usize) -> ExtFloat {
        self.h_rec[k]
    }

    /// Largest relative disagreement between the two routes,
    /// `|h_direct - h_rec| / max(1, |h_direct|)`, on the levels where both exist.
    pub fn max_rel_diff(&self) -> f64 {
        self.h_direct
            .iter()
            .zip(&self.h_rec)
            .filter_map(|(d, r)| d.map(|d| rel_diff(d, *r)))
            .fold(0.0, f64::max)
    }

    /// Levels at which the two routes differ by more than `rel`.
    pub fn disagreements(&self, rel: f64) -> Vec<usize> {
        self.h_direct
            .iter()
            .zip(&self.h_rec)
            .enumerate()
            .filter(|(_, (d, r))| d.is_some_and(|d| !d.close_to(**r, rel)))
            .map(|(k, _)| k)
            .collect()
    }
}

fn rel_diff(a: ExtFloat, b: ExtFloat) -> f64 {
    let diff = (a - b).abs();
    let scale = if a.abs().to_f64() > 1.0 { a.abs() } else { ExtFloat::from(1.0) };
    let l = diff.log10_abs() - scale.log10_abs();
    if diff.is_zero() {
        0.0
    } else {
        10f64.powf(l)
    }
}

/// Default limit on `ℓ_k` for the direct route.
pub const DIRECT_BUDGET: usize = 10_000_000;

/// Evaluates `h_0, …, h_k` by the scalar recursion
/// `h_{k+1} = S_{n_{k+1}}(h_k) τ_k - 2 S_{n_{k+1}-1}(h_k)`, where
/// `τ_k = tr A_{t_k}` and `τ_{k+1} = S_{n_{k+1}}(h_k) h_k - 2 S_{n_{k+1}-1}(h_k)`.
///
/// The seeds `h_0 = tr A_{s_0}` and `τ_0 = tr A_{t_0}` come from products of
/// length `|ϖ| + 1`.
#[derive(Debug, Clone)]
pub struct TraceEvaluator {
    s0: Vec<Symbol>,
    t0: Vec<Symbol>,
    values: Vec<f64>,
    periods: Vec<i64>,
}

impl TraceEvaluator {
    pub fn new(spec: &ToeplitzSpec, k_max: usize) -> Result<Self> {
        let (s0, t0) = blocks(spec, 0)?;
        Ok(Self {
            s0,
            t0,
            values: spec.alphabet().values().to_vec(),
            periods: (1..=k_max).map(|k| spec.tail_period(k) as i64).collect(),
        })
    }

    pub fn k_max(&self) -> usize {
        self.periods.len()
    }

    /// `h_0, …, h_{k_max}`.
    pub fn eval(&self, energy: f64) -> Vec<ExtFloat> {
        self.eval_to(self.k_max(), energy)
    }

    /// `h_0, …, h_k` for `k <= k_max`.
    pub fn eval_to(&self, k: usize, energy: f64) -> Vec<ExtFloat> {
        let mut h = word_product(&self.s0, energy, &self.values).expect("validated").trace();
        let mut tau = word_product(&self.t0, energy, &self.values).expect("validated").trace();
        let two = ExtFloat::from(2.0);
        let mut out = Vec::with_capacity(k + 1);
        out.push(h);
        for &n in &self.periods[..k] {
            let (s_n, s_nm1) = cheb_pair(n, h);
            let next = s_n * tau - two * s_nm1;
            tau = s_n * h - two * s_nm1;
            h = next;
            out.push(h);
        }
        out
    }

    /// `h_k(E)`.
    pub fn h(&self, k: usize, energy: f64) -> ExtFloat {
        *self.eval_to(k, energy).last().expect("k + 1 entries")
    }
}

/// `h_0, …, h_k_max` by recursion.
pub fn trace_recursion(spec: &ToeplitzSpec, energy: f64, k_max: usize) -> Result<Vec<ExtFloat>> {
    Ok(TraceEvaluator::new(spec, k_max)?.eval(energy))
}

/// `h_k(E)` by recursion.
pub fn trace_at(spec: &ToeplitzSpec, k: usize, energy: f64) -> Result<ExtFloat> {
    Ok(*trace_recursion(spec, energy, k)?.last().expect("k + 1 entries"))
}

/// Both routes for `k = 0..=k_max`.
pub fn trace_table(
    spec: &ToeplitzSpec,
    energy: f64,
    k_max: usize,
    direct_budget: usize,
) -> Result<TraceTable> {
    if !energy.is_finite() {
        return Err(Error::Precondition(format!("energy {energy} is not finite")));
    }
    let h_rec = trace_recursion(spec, energy, k_max)?;
    let values = spec.alphabet().values();
    let mut h_direct = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        if spec.block_len(k) > direct_budget {
            h_direct.push(None);
            continue;
        }
        let (s, _) = blocks(spec, k)?;
        h_direct.push(Some(word_product(&s, energy, values)?.trace()));
    }
    let periods = (1..=k_max).map(|k| spec.tail_period(k)).collect();
    Ok(TraceTable { energy, h_direct, h_rec, periods })
}

/// `D = A_x A_y^{-1}`, the correction between words differing only in
/// their last letter `y → x`.
pub fn d_matrix(energy: f64, x: f64, y: f64) -> Mat2 {
    Mat2::transfer(energy, x) * Mat2::transfer(energy, y).inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::Alphabet;

    fn simple3() -> ToeplitzSpec {
        let a = Alphabet::new(vec!['a', 'b'], vec![0.0, 1.0]).unwrap();
        ToeplitzSpec::simple_cycle(a, &[3], Some(0)).unwrap()
    }

    #[test]
    fn first_traces_at_zero_energy() {
        let t = trace_table(&simple3(), 0.0, 2, DIRECT_BUDGET).unwrap();
        assert_eq!(t.h_direct[0].unwrap().to_f64(), 0.0);
        assert_eq!(t.h_direct[1].unwrap().to_f64(), 1.0);
        assert_eq!(t.h_rec[0].to_f64(), 0.0);
        assert_eq!(t.h_rec[1].to_f64(), 1.0);
        assert!(t.max_rel_diff() < 1e-12);
    }

    #[test]
    fn budget_marks_direct_entries_absent() {
        let t = trace_table(&simple3(), 0.3, 4, 30).unwrap();
        assert!(t.h_direct[3].is_some());
        assert!(t.h_direct[4].is_none());
        assert_eq!(t.h_rec.len(), 5);
    }

    #[test]
    fn d_matrix_is_unipotent() {
        let d = d_matrix(0.4, 1.0, 0.0);
        assert!((d.trace() - 2.0).abs() < 1e-14);
        let back = d_matrix(0.4, 0.0, 1.0);
        let p = back * d;
        assert!(p.sub(&Mat2::IDENTITY).max_abs() < 1e-14);
    }
}
