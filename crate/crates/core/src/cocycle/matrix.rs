use std::ops::Mul;

use super::ExtFloat;

/// Real 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    /// One-step transfer matrix `A = [[E - v, -1], [1, 0]]`.
    pub fn transfer(energy: f64, v: f64) -> Self {
        Self::new(energy - v, -1.0, 1.0, 0.0)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Adjugate divided by the determinant.
    pub fn inverse(&self) -> Self {
        let det = self.det();
        Self::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn sub(&self, o: &Mat2) -> Self {
        Self::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }

    pub fn frobenius(&self) -> f64 {
        (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d).sqrt()
    }

    /// Operator 2-norm: the largest singular value.
    pub fn norm(&self) -> f64 {
        let f2 = self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d;
        let det = self.det();
        let disc = (f2 * f2 - 4.0 * det * det).max(0.0);
        ((f2 + disc.sqrt()) / 2.0).sqrt()
    }

    pub fn apply(&self, v: (f64, f64)) -> (f64, f64) {
        (self.a * v.0 + self.b * v.1, self.c * v.0 + self.d * v.1)
    }

    pub fn max_abs(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::IDENTITY, |acc, _| *self * acc)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// Matrix product `2^exp2 · m`, rescaled by exact powers of two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledMatrix {
    pub m: Mat2,
    pub exp2: i64,
}

impl ScaledMatrix {
    pub const RESCALE_EVERY: usize = 32;

    pub fn identity() -> Self {
        Self { m: Mat2::IDENTITY, exp2: 0 }
    }

    /// Left-multiplies by `step`.
    pub fn push(&mut self, step: &Mat2) {
        self.m = *step * self.m;
    }

    pub fn rescale(&mut self) {
        let mx = self.m.max_abs();
        if mx == 0.0 || !mx.is_finite() {
            return;
        }
        let e = ExtFloat::from(mx).exp2();
        if e != 0 {
            self.m = self.m.scale(ExtFloat::pow2(-e));
            self.exp2 += e;
        }
    }

    pub fn trace(&self) -> ExtFloat {
        ExtFloat::from(self.m.trace()).mul_pow2(self.exp2)
    }

    /// `ln ‖·‖` of the unscaled product.
    pub fn ln_norm(&self) -> f64 {
        self.m.norm().ln() + self.exp2 as f64 * std::f64::consts::LN_2
    }

    /// Determinant of the unscaled product; `1` for transfer products.
    pub fn det_unscaled(&self) -> ExtFloat {
        ExtFloat::from(self.m.det()).mul_pow2(2 * self.exp2)
    }

    pub fn is_finite(&self) -> bool {
        [self.m.a, self.m.b, self.m.c, self.m.d].iter().all(|x| x.is_finite())
    }
}
