//! Minimal double-double arithmetic (~31 significant digits).
//!
//! The alternating Bessel series cancels catastrophically for moderate
//! arguments: at `s = 20` the largest term exceeds the sum by seven orders
//! of magnitude, which already costs nine digits in plain `f64`. Carrying
//! the term recurrence and the accumulator in double-double keeps the
//! evaluation at full `f64` accuracy for all arguments handled by the
//! series path.

#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let err = b - (s - a);
    Dd { hi: s, lo: err }
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    let err = a.mul_add(b, -p);
    Dd { hi: p, lo: err }
}

impl Dd {
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact sum of two `f64` values as a double-double.
    #[inline]
    pub fn from_sum(a: f64, b: f64) -> Dd {
        two_sum(a, b)
    }

    /// Exact product of two `f64` values as a double-double.
    #[inline]
    pub fn from_prod(a: f64, b: f64) -> Dd {
        two_prod(a, b)
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let s = two_sum(self.hi, other.hi);
        let t = two_sum(self.lo, other.lo);
        let c = s.lo + t.hi;
        let v = quick_two_sum(s.hi, c);
        let w = t.lo + v.lo;
        quick_two_sum(v.hi, w)
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let p = two_prod(self.hi, other.hi);
        let e = self.hi.mul_add(other.lo, self.lo * other.hi) + p.lo;
        quick_two_sum(p.hi, e)
    }

    #[inline]
    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.add(other.mul(Dd::from_f64(-q1)));
        let q2 = r.hi / other.hi;
        let r2 = r.add(other.mul(Dd::from_f64(-q2)));
        let q3 = r2.hi / other.hi;
        quick_two_sum(q1, q2).add(Dd::from_f64(q3))
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn scale(self, k: f64) -> Dd {
        self.mul(Dd::from_f64(k))
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs_hi(self) -> f64 {
        self.hi.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_tracks_low_order_bits() {
        let a = Dd::from_f64(1.0);
        let b = Dd::from_f64(1e-20);
        let s = a.add(b);
        assert_eq!(s.hi, 1.0);
        assert_eq!(s.lo, 1e-20);
    }

    #[test]
    fn mul_recovers_exact_products() {
        let a = Dd::from_f64(1.0 + 2f64.powi(-30));
        let s = a.mul(a);
        // (1 + u)^2 = 1 + 2u + u^2 with u = 2^-30; u^2 = 2^-60 lives in lo.
        assert_eq!(s.hi, 1.0 + 2f64.powi(-29));
        assert_eq!(s.lo, 2f64.powi(-60));
    }

    #[test]
    fn div_inverts_mul() {
        let a = Dd::from_prod(core::f64::consts::PI, core::f64::consts::E);
        let b = Dd::from_f64(core::f64::consts::E);
        let q = a.div(b);
        assert!((q.to_f64() - core::f64::consts::PI).abs() < 1e-30);
    }
}
