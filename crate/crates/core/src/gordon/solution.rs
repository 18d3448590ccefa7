use crate::error::{Error, Result};
use crate::sequences::Potential;

/// Solution of `φ(n+1) + φ(n-1) + V(n)φ(n) = Eφ(n)` over a window, with
/// `Φ(t) = (φ(o+t), φ(o+t-1))` measured from the origin `o`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTrack {
    pub energy: f64,
    pub origin: i64,
    /// Potential on sites `[first, first + values.len())`.
    pub potential: Potential,
    /// `φ` on sites `[first - 1, first + values.len()]`.
    phi: Vec<f64>,
}

impl SolutionTrack {
    fn phi_at(&self, site: i64) -> Option<f64> {
        let i = site - (self.potential.start - 1);
        (i >= 0).then(|| self.phi.get(i as usize).copied()).flatten()
    }

    /// `Φ(t) = (φ(o+t), φ(o+t-1))`.
    pub fn big_phi(&self, t: i64) -> Option<(f64, f64)> {
        let n = self.origin + t;
        Some((self.phi_at(n)?, self.phi_at(n - 1)?))
    }

    pub fn norm(&self, t: i64) -> Option<f64> {
        self.big_phi(t).map(|(a, b)| a.hypot(b))
    }

    /// Range of `t` for which `Φ(t)` is available, inclusive.
    pub fn t_range(&self) -> (i64, i64) {
        (self.potential.start - self.origin, self.potential.end() - self.origin)
    }
}

/// Propagates the solution with `(φ(o-1), φ(o)) = phi_init` across the
/// whole potential window by the two-term recurrence in both directions.
pub fn propagate(
    potential: &Potential,
    energy: f64,
    origin: i64,
    phi_init: (f64, f64),
) -> Result<SolutionTrack> {
    let norm2 = phi_init.0 * phi_init.0 + phi_init.1 * phi_init.1;
    if (norm2 - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "initial data must satisfy |φ(-1)|² + |φ(0)|² = 1 (got {norm2})"
        )));
    }
    if origin - 1 < potential.start - 1 || origin > potential.end() {
        return Err(Error::Precondition(format!(
            "origin {origin} lies outside the window [{}, {})",
            potential.start,
            potential.end()
        )));
    }
    let first = potential.start - 1;
    let len = potential.values.len() + 2;
    let mut phi = vec![0.0; len];
    let io = (origin - first) as usize;
    phi[io - 1] = phi_init.0;
    phi[io] = phi_init.1;
    let v = |site_index: usize| potential.values[site_index - 1];
    for i in io..len - 1 {
        phi[i + 1] = (energy - v(i)) * phi[i] - phi[i - 1];
    }
    for i in (1..io).rev() {
        phi[i - 1] = (energy - v(i)) * phi[i] - phi[i + 1];
    }
    Ok(SolutionTrack { energy, origin, potential: potential.clone(), phi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_rotation_preserves_norm() {
        let p = Potential { start: -50, values: vec![0.0; 100] };
        let t = propagate(&p, 0.0, 0, (1.0, 0.0)).unwrap();
        let (lo, hi) = t.t_range();
        for s in lo..=hi {
            assert!((t.norm(s).unwrap() - 1.0).abs() < 1e-14, "t = {s}");
        }
        assert_eq!(t.big_phi(0), Some((0.0, 1.0)));
    }

    #[test]
    fn recurrence_holds_everywhere() {
        let values: Vec<f64> = (0..60).map(|i| ((i * 7) % 5) as f64 * 0.3).collect();
        let p = Potential { start: -30, values };
        let t = propagate(&p, 0.4, 3, (0.6, 0.8)).unwrap();
        for n in -30..30i64 {
            let v = p.at(n).unwrap();
            let (a, b) = t.big_phi(n - 3).unwrap();
            let (c, _) = t.big_phi(n - 3 + 1).unwrap();
            assert!((c + b + v * a - 0.4 * a).abs() < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn rejects_unnormalized_data() {
        let p = Potential { start: 0, values: vec![0.0; 10] };
        assert!(propagate(&p, 0.0, 5, (1.0, 1.0)).is_err());
        assert!(propagate(&p, 0.0, 50, (1.0, 0.0)).is_err());
    }
}
