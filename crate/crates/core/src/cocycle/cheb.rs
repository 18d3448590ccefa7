use std::ops::{Mul, Sub};

/// `S_n(x)` from `S_0 = 0`, `S_1 = 1`, `S_{j+1} = x S_j - S_{j-1}`;
/// negative degrees follow the same recurrence run backwards.
///
/// For `det M = 1` this gives `M^n = S_n(tr M) M - S_{n-1}(tr M) I`.
pub fn cheb_eval(n: i64, x: f64) -> f64 {
    cheb_pair(n, x).0
}

/// `(S_n(x), S_{n-1}(x))` over any ring-like scalar.
pub fn cheb_pair<T>(n: i64, x: T) -> (T, T)
where
    T: Copy + Mul<Output = T> + Sub<Output = T> + From<f64>,
{
    let zero = T::from(0.0);
    let one = T::from(1.0);
    if n >= 1 {
        let (mut prev, mut cur) = (zero, one);
        for _ in 1..n {
            let next = x * cur - prev;
            prev = cur;
            cur = next;
        }
        (cur, prev)
    } else {
        // S_{j-1} = x S_j - S_{j+1}
        let (mut cur, mut next) = (zero, one);
        for _ in n..0 {
            let prev = x * cur - next;
            next = cur;
            cur = prev;
        }
        (cur, x * cur - next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::Mat2;

    #[test]
    fn base_values() {
        for x in [-3.0, 0.0, 0.7, 5.0] {
            assert_eq!(cheb_eval(0, x), 0.0);
            assert_eq!(cheb_eval(1, x), 1.0);
            assert_eq!(cheb_eval(-1, x), -1.0);
        }
        assert_eq!(cheb_eval(2, 3.0), 3.0);
        assert_eq!(cheb_eval(3, 2.0), 3.0);
        assert_eq!(cheb_pair(3, 2.0), (3.0, 2.0));
        assert_eq!(cheb_pair(0, 2.0), (0.0, -1.0));
    }

    #[test]
    fn power_identity_example() {
        let m = Mat2::new(2.0, 1.0, 1.0, 1.0);
        let (s, sm1) = cheb_pair(2, m.trace());
        let p = m.scale(s).sub(&Mat2::IDENTITY.scale(sm1));
        assert_eq!(p, Mat2::new(5.0, 3.0, 3.0, 2.0));
        assert_eq!(p, m * m);
    }
}
