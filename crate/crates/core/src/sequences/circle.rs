use super::{Alphabet, Symbol, Window};
use crate::error::{Error, Result};

/// Rational convergent `p/q` standing in for an irrational rotation number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Convergent {
    pub p: i64,
    pub q: i64,
}

impl Convergent {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q <= 0 || p <= 0 || p >= q {
            return Err(Error::InvalidSpec(format!("need 0 < {p}/{q} < 1")));
        }
        if gcd(p, q) != 1 {
            return Err(Error::InvalidSpec(format!("{p}/{q} is not in lowest terms")));
        }
        Ok(Self { p, q })
    }

    pub fn as_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

/// The first Fibonacci convergent `F_k / F_{k+1}` of the inverse golden mean
/// with denominator strictly above `min_q`.
pub fn golden_convergent(min_q: i64) -> Convergent {
    let (mut p, mut q) = (1i64, 2i64);
    while q <= min_q {
        (p, q) = (q, p + q);
    }
    Convergent { p, q }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// `V(n) = λ·χ_[1-β,1)(nα + θ mod 1)` with every parameter rational.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleMapSpec {
    alpha: Convergent,
    beta: (i64, i64),
    theta: (i64, i64),
    lambda: f64,
    alphabet: Alphabet,
}

impl CircleMapSpec {
    /// `beta` and `theta` are `(numerator, denominator)` pairs.
    pub fn new(alpha: Convergent, beta: (i64, i64), theta: (i64, i64), lambda: f64) -> Result<Self> {
        let (bn, bd) = beta;
        if bd <= 0 || bn <= 0 || bn >= bd {
            return Err(Error::InvalidSpec(format!("need 0 < beta = {bn}/{bd} < 1")));
        }
        let (tn, td) = theta;
        if td <= 0 || tn < 0 || tn >= td {
            return Err(Error::InvalidSpec(format!("need 0 <= theta = {tn}/{td} < 1")));
        }
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::InvalidSpec(format!("lambda must be a nonzero real, got {lambda}")));
        }
        let alphabet = Alphabet::new(vec!['0', '1'], vec![0.0, lambda])?;
        Ok(Self { alpha, beta, theta, lambda, alphabet })
    }

    pub fn alpha(&self) -> Convergent {
        self.alpha
    }

    pub fn beta(&self) -> (i64, i64) {
        self.beta
    }

    pub fn theta(&self) -> (i64, i64) {
        self.theta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Exact membership of `nα + θ mod 1` in `[1-β, 1)`.
    pub fn symbol_at(&self, n: i64) -> Symbol {
        let Convergent { p, q } = self.alpha;
        let (bn, bd) = (self.beta.0 as i128, self.beta.1 as i128);
        let (tn, td) = (self.theta.0 as i128, self.theta.1 as i128);
        let (p, q) = (p as i128, q as i128);
        let den = q * td;
        let rot = (n as i128 * p).rem_euclid(q);
        let residue = (rot * td + tn * q).rem_euclid(den);
        // residue/den >= 1 - bn/bd
        u8::from(residue * bd >= (bd - bn) * den)
    }

    pub fn window(&self, start: i64, len: usize) -> Result<Window> {
        if len == 0 {
            return Err(Error::Precondition("len must be at least 1".into()));
        }
        let required = len as i64 + start.abs();
        if self.alpha.q <= required {
            return Err(Error::DenominatorTooSmall { q: self.alpha.q, required });
        }
        Window::new(start, (start..start + len as i64).map(|n| self.symbol_at(n)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn fib() -> CircleMapSpec {
        let a = Convergent::new(13, 21).unwrap();
        CircleMapSpec::new(a, (13, 21), (0, 1), 1.0).unwrap()
    }

    #[test]
    fn golden_convergents() {
        assert_eq!(golden_convergent(500), Convergent { p: 377, q: 610 });
        assert_eq!(golden_convergent(610), Convergent { p: 610, q: 987 });
    }

    #[test]
    fn fibonacci_rotation_window() {
        let w = fib().window(0, 12).unwrap();
        // brute force on a float grid far from the boundary: n*13/21 mod 1 >= 8/21
        let expect: Vec<u8> = (0..12)
            .map(|n| u8::from(((n * 13) % 21) as f64 / 21.0 >= 8.0 / 21.0 - 1e-12))
            .collect();
        assert_eq!(w.symbols, expect);
    }

    #[test]
    fn boundary_is_half_open() {
        // theta = 1 - beta sits exactly on the left endpoint: included
        let a = Convergent::new(2, 7).unwrap();
        let s = CircleMapSpec::new(a, (1, 3), (2, 3), 1.0).unwrap();
        assert_eq!(s.symbol_at(0), 1);
        // theta = 0 with beta < 1: 0 is never in [1-beta, 1)
        let s = CircleMapSpec::new(a, (1, 3), (0, 1), 1.0).unwrap();
        assert_eq!(s.symbol_at(0), 0);
    }

    #[test]
    fn near_full_interval_is_near_constant() {
        let a = golden_convergent(1000);
        let s = CircleMapSpec::new(a, (999, 1000), (0, 1), 2.5).unwrap();
        let w = s.window(0, 200).unwrap();
        let zeros: Vec<usize> = (0..200).filter(|&i| w.symbols[i] == 0).collect();
        // only residues in [0, 1/1000) give 0
        for &i in &zeros {
            let r = (i as i64 * a.p).rem_euclid(a.q) as f64 / a.q as f64;
            assert!(r < 1e-3);
        }
        assert!(zeros.len() <= 2);
        assert_eq!(s.alphabet().value(1), 2.5);
    }

    #[test]
    fn rejects_bad_parameters() {
        let a = Convergent::new(13, 21).unwrap();
        assert!(CircleMapSpec::new(a, (13, 21), (0, 1), 0.0).is_err());
        assert!(CircleMapSpec::new(a, (1, 1), (0, 1), 1.0).is_err());
        assert!(CircleMapSpec::new(a, (1, 2), (1, 1), 1.0).is_err());
        assert!(Convergent::new(2, 4).is_err());
    }

    #[test]
    fn denominator_must_exceed_span() {
        let err = fib().window(-5, 20).unwrap_err();
        assert_eq!(err, Error::DenominatorTooSmall { q: 21, required: 25 });
    }

    #[test]
    fn fibonacci_three_factors() {
        let a = golden_convergent(200);
        let s = CircleMapSpec::new(a, (a.p, a.q), (0, 1), 1.0).unwrap();
        let w = s.window(0, 200).unwrap();
        let f: HashSet<&[u8]> = w.symbols.windows(3).collect();
        assert_eq!(f.len(), 4);
    }
}
