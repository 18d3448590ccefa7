use rayon::prelude::*;

use super::{Band, BandSet};
use crate::cocycle::TraceEvaluator;
use crate::error::{Error, Result};
use crate::sequences::ToeplitzSpec;

/// Largest level the grid scans accept.
pub const MAX_LEVEL: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandParams {
    pub e_min: f64,
    pub e_max: f64,
    pub grid: usize,
    /// Endpoint tolerance on `||h_k| - 2|`.
    pub tol: f64,
}

impl BandParams {
    /// Grid of `10^5` points over `[min V - 2.5, max V + 2.5]`.
    pub fn for_spec(spec: &ToeplitzSpec) -> Self {
        let a = spec.alphabet();
        Self { e_min: a.min_value() - 2.5, e_max: a.max_value() + 2.5, grid: 100_000, tol: 1e-10 }
    }

    pub fn with_grid(self, grid: usize) -> Self {
        Self { grid, ..self }
    }

    pub fn step(&self) -> f64 {
        (self.e_max - self.e_min) / (self.grid - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.grid {
            self.e_max
        } else {
            self.e_min + i as f64 * self.step()
        }
    }

    fn validate(&self, spec: &ToeplitzSpec, k: usize) -> Result<()> {
        if k > MAX_LEVEL {
            return Err(Error::LevelBudget { level: k, max: MAX_LEVEL });
        }
        if self.grid < 1000 {
            return Err(Error::Precondition(format!("grid = {} must be at least 1000", self.grid)));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Precondition("tol must be positive".into()));
        }
        let a = spec.alphabet();
        let (lo, hi) = (a.min_value() - 2.0, a.max_value() + 2.0);
        if !(self.e_min < lo && self.e_max > hi) {
            return Err(Error::Precondition(format!(
                "energy range [{}, {}] must strictly contain [{lo}, {hi}]",
                self.e_min, self.e_max
            )));
        }
        Ok(())
    }
}

struct Scan<'a> {
    eval: &'a TraceEvaluator,
    k: usize,
    tol: f64,
}

impl Scan<'_> {
    fn f(&self, e: f64) -> f64 {
        self.eval.h(self.k, e).abs_minus(2.0)
    }

    /// Boundary between `outside` (`f > 0`) and `inside` (`f <= 0`).
    fn bisect(&self, mut outside: f64, mut inside: f64) -> f64 {
        loop {
            let mid = 0.5 * (outside + inside);
            if mid == outside || mid == inside {
                return inside;
            }
            let fm = self.f(mid);
            if fm.abs() <= self.tol {
                return mid;
            }
            if fm > 0.0 {
                outside = mid;
            } else {
                inside = mid;
            }
        }
    }

    /// Golden-section minimum of `f` on `[a, b]`.
    fn minimize(&self, mut a: f64, mut b: f64) -> (f64, f64) {
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (self.f(c), self.f(d));
        for _ in 0..80 {
            if fc.min(fd) <= 0.0 || b - a <= f64::EPSILON * b.abs().max(1.0) {
                break;
            }
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = self.f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = self.f(d);
            }
        }
        if fc < fd {
            (c, fc)
        } else {
            (d, fd)
        }
    }
}

/// `σ_k` on a grid: sign changes of `|h_k| - 2` are bisected to `tol`, and
/// local minima between grid points are searched for tangencies and bands
/// narrower than the grid step. Bands narrower than the step that do not
/// produce a local minimum on the grid can be missed.
pub fn sigma_n(spec: &ToeplitzSpec, k: usize, params: &BandParams) -> Result<BandSet> {
    params.validate(spec, k)?;
    let eval = TraceEvaluator::new(spec, k)?;
    let scan = Scan { eval: &eval, k, tol: params.tol };
    let f: Vec<f64> = (0..params.grid).into_par_iter().map(|i| scan.f(params.point(i))).collect();
    if f[0] <= 0.0 || f[params.grid - 1] <= 0.0 {
        return Err(Error::Invariant(format!("σ_{k} reaches the edge of the energy range")));
    }

    let mut bands = Vec::new();
    let mut i = 0;
    while i < params.grid {
        if f[i] <= 0.0 {
            let i0 = i;
            while f[i + 1] <= 0.0 {
                i += 1;
            }
            let lo = scan.bisect(params.point(i0 - 1), params.point(i0));
            let hi = scan.bisect(params.point(i + 1), params.point(i));
            bands.push(Band { lo, hi, isolated: false });
        } else if i > 0 && i + 1 < params.grid && f[i] < f[i - 1] && f[i] <= f[i + 1] {
            let (a, b) = (params.point(i - 1), params.point(i + 1));
            let (e, fe) = scan.minimize(a, b);
            if fe <= 0.0 {
                let lo = scan.bisect(a, e);
                let hi = scan.bisect(b, e);
                bands.push(Band { lo, hi, isolated: hi - lo <= params.tol });
            }
        }
        i += 1;
    }
    bands.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    Ok(BandSet { levels: vec![k], bands, tol: params.tol, grid_step: params.step() })
}

/// `σ_k ∪ σ_{k+1}`.
pub fn band_approximant(spec: &ToeplitzSpec, k: usize, params: &BandParams) -> Result<BandSet> {
    Ok(sigma_n(spec, k, params)?.union(&sigma_n(spec, k + 1, params)?))
}

/// Grid points of `σ_m` lying farther than `slack` from `outer`.
#[derive(Debug, Clone, PartialEq)]
pub struct Containment {
    pub level: usize,
    pub checked: usize,
    pub violations: Vec<f64>,
}

pub fn grid_containment(
    spec: &ToeplitzSpec,
    m: usize,
    outer: &BandSet,
    params: &BandParams,
    slack: f64,
) -> Result<Containment> {
    params.validate(spec, m)?;
    let eval = TraceEvaluator::new(spec, m)?;
    let inside: Vec<f64> = (0..params.grid)
        .into_par_iter()
        .map(|i| params.point(i))
        .filter(|&e| eval.h(m, e).abs_minus(2.0) <= 0.0)
        .collect();
    let violations = inside.iter().copied().filter(|&e| !outer.contains(e, slack)).collect();
    Ok(Containment { level: m, checked: inside.len(), violations })
}

/// `count` energies at the `(j + 1/2) / count` quantiles of the band measure.
pub fn sample_energies(set: &BandSet, count: usize) -> Vec<f64> {
    let total = set.measure();
    if count == 0 || set.is_empty() {
        return Vec::new();
    }
    if total == 0.0 {
        return set.bands.iter().cycle().take(count).map(|b| b.lo).collect();
    }
    let mut out = Vec::with_capacity(count);
    let mut bi = 0;
    let mut before = 0.0;
    for j in 0..count {
        let target = (j as f64 + 0.5) / count as f64 * total;
        while bi + 1 < set.bands.len() && before + set.bands[bi].width() < target {
            before += set.bands[bi].width();
            bi += 1;
        }
        let b = set.bands[bi];
        out.push((b.lo + (target - before)).clamp(b.lo, b.hi));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::Alphabet;

    fn spec(values: [f64; 2]) -> ToeplitzSpec {
        let a = Alphabet::new(vec!['a', 'b'], values.to_vec()).unwrap();
        ToeplitzSpec::simple_cycle(a, &[3], Some(0)).unwrap()
    }

    #[test]
    fn free_laplacian_band() {
        // equal couplings give a constant potential
        let s = spec([0.0, 0.0]);
        let p = BandParams::for_spec(&s).with_grid(2000);
        for k in 0..4 {
            let b = sigma_n(&s, k, &p).unwrap();
            assert_eq!(b.len(), 1, "k = {k}");
            assert!((b.bands[0].lo + 2.0).abs() < 1e-9);
            assert!((b.bands[0].hi - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn endpoints_sit_on_the_level_set() {
        let s = spec([0.0, 1.0]);
        let p = BandParams::for_spec(&s).with_grid(5000);
        let b = sigma_n(&s, 3, &p).unwrap();
        let eval = TraceEvaluator::new(&s, 3).unwrap();
        assert!(b.len() >= 9);
        for band in &b.bands {
            for e in [band.lo, band.hi] {
                assert!(eval.h(3, e).abs_minus(2.0).abs() <= 10.0 * p.tol, "E = {e}");
            }
        }
        assert!(!b.contains(10.0, 0.0));
    }

    #[test]
    fn quantile_samples_fall_in_bands() {
        let s = spec([0.0, 1.0]);
        let p = BandParams::for_spec(&s).with_grid(5000);
        let b = band_approximant(&s, 2, &p).unwrap();
        let e = sample_energies(&b, 25);
        assert_eq!(e.len(), 25);
        assert!(e.iter().all(|&x| b.contains(x, 0.0)));
        assert!(e.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_small_grids_and_ranges() {
        let s = spec([0.0, 1.0]);
        let p = BandParams::for_spec(&s);
        assert!(sigma_n(&s, 2, &p.with_grid(10)).is_err());
        let narrow = BandParams { e_min: -1.0, ..p };
        assert!(sigma_n(&s, 2, &narrow).is_err());
        assert!(matches!(sigma_n(&s, 40, &p), Err(Error::LevelBudget { .. })));
    }
}
