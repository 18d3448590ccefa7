use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Real number `mant · 2^exp` with `0.5 <= |mant| < 1`, or zero.
///
/// Keeps trace values at high levels finite where `f64` would overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtFloat {
    mant: f64,
    exp: i64,
}

const EXP_BIAS: i64 = 1022;

fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let raw = ((bits >> 52) & 0x7ff) as i64;
    if raw == 0 {
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let mant = f64::from_bits((bits & !(0x7ff << 52)) | ((EXP_BIAS as u64) << 52));
    (mant, raw - EXP_BIAS)
}

impl ExtFloat {
    pub const ZERO: ExtFloat = ExtFloat { mant: 0.0, exp: 0 };

    /// `2^e` as an `f64`, for `e` within the normal range.
    pub fn pow2(e: i64) -> f64 {
        f64::from_bits(((e + 1023) as u64) << 52)
    }

    fn normalized(mant: f64, exp: i64) -> Self {
        let (m, e) = frexp(mant);
        if m == 0.0 {
            Self::ZERO
        } else {
            Self { mant: m, exp: exp + e }
        }
    }

    pub fn mantissa(&self) -> f64 {
        self.mant
    }

    /// Binary exponent: `|x|` lies in `[2^(e-1), 2^e)`.
    pub fn exp2(&self) -> i64 {
        self.exp
    }

    pub fn mul_pow2(self, e: i64) -> Self {
        if self.mant == 0.0 {
            self
        } else {
            Self { mant: self.mant, exp: self.exp + e }
        }
    }

    pub fn abs(self) -> Self {
        Self { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn is_finite(&self) -> bool {
        self.mant.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.mant == 0.0
    }

    /// Nearest `f64`, saturating to `±∞` or flushing to zero.
    pub fn to_f64(self) -> f64 {
        if self.mant == 0.0 || !self.mant.is_finite() {
            return self.mant;
        }
        if self.exp > 1024 {
            return self.mant.signum() * f64::INFINITY;
        }
        if self.exp < -1074 {
            return 0.0;
        }
        let half = self.exp / 2;
        self.mant * Self::pow2(half) * Self::pow2(self.exp - half)
    }

    pub fn log10_abs(&self) -> f64 {
        self.mant.abs().log10() + self.exp as f64 * std::f64::consts::LOG10_2
    }

    /// `|self - other| <= rel · max(1, |self|)`.
    pub fn close_to(self, other: ExtFloat, rel: f64) -> bool {
        let diff = (self - other).abs();
        let scale = if self.abs().cmp_abs(ExtFloat::from(1.0)) == Ordering::Greater {
            self.abs()
        } else {
            ExtFloat::from(1.0)
        };
        (diff - scale * ExtFloat::from(rel)).mant <= 0.0
    }

    /// Ordering of absolute values.
    pub fn cmp_abs(&self, other: ExtFloat) -> Ordering {
        let (a, b) = (self.abs(), other.abs());
        match (a.mant == 0.0, b.mant == 0.0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => a.exp.cmp(&b.exp).then(a.mant.total_cmp(&b.mant)),
        }
    }

    /// `|self| - c` as an `f64`, saturating; the sign is always exact.
    pub fn abs_minus(&self, c: f64) -> f64 {
        (self.abs() - ExtFloat::from(c)).to_f64()
    }
}

impl From<f64> for ExtFloat {
    fn from(x: f64) -> Self {
        Self::normalized(x, 0)
    }
}

impl Mul for ExtFloat {
    type Output = ExtFloat;

    fn mul(self, o: ExtFloat) -> ExtFloat {
        Self::normalized(self.mant * o.mant, self.exp + o.exp)
    }
}

impl Add for ExtFloat {
    type Output = ExtFloat;

    fn add(self, o: ExtFloat) -> ExtFloat {
        if self.mant == 0.0 {
            return o;
        }
        if o.mant == 0.0 {
            return self;
        }
        let (hi, lo) = if self.exp >= o.exp { (self, o) } else { (o, self) };
        let shift = lo.exp - hi.exp;
        if shift < -64 {
            return hi;
        }
        Self::normalized(hi.mant + lo.mant * Self::pow2(shift), hi.exp)
    }
}

impl Neg for ExtFloat {
    type Output = ExtFloat;

    fn neg(self) -> ExtFloat {
        Self { mant: -self.mant, exp: self.exp }
    }
}

impl Sub for ExtFloat {
    type Output = ExtFloat;

    fn sub(self, o: ExtFloat) -> ExtFloat {
        self + (-o)
    }
}

impl fmt::Display for ExtFloat {
    /// Scientific notation with 17 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.to_f64();
        if x.is_finite() && (x == 0.0 || x.abs() >= f64::MIN_POSITIVE) {
            return write!(f, "{x:.16e}");
        }
        let l = self.log10_abs();
        let e10 = l.floor();
        let m10 = 10f64.powf(l - e10) * self.mant.signum();
        write!(f, "{m10:.16}e{}", e10 as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for x in [1.0, -3.5, 1e-300, 7e307, 0.0, 2.0f64.powi(-1060)] {
            assert_eq!(ExtFloat::from(x).to_f64(), x);
        }
    }

    #[test]
    fn arithmetic_beyond_f64() {
        let big = ExtFloat::from(1e300);
        let sq = big * big;
        assert!(sq.to_f64().is_infinite());
        assert!((sq.log10_abs() - 600.0).abs() < 1e-12);
        let back = sq * ExtFloat::from(1e-300) * ExtFloat::from(1e-300);
        assert!((back.to_f64() - 1.0).abs() < 1e-14);
        assert_eq!((sq - sq).to_f64(), 0.0);
        assert!(sq.close_to(sq + ExtFloat::from(1.0), 1e-12));
    }

    #[test]
    fn formatting() {
        assert_eq!(ExtFloat::from(1.5).to_string(), "1.5000000000000000e0");
        let s = (ExtFloat::from(1e300) * ExtFloat::from(3e100)).to_string();
        assert!(s.starts_with("2.99999999999") || s.starts_with("3.0000000000"), "{s}");
        assert!(s.ends_with("e400"), "{s}");
    }
}
