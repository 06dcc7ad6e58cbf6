use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{dyadic_ceil, dyadic_floor, pow2, BigInt, Rational};

/// Closed interval `[lo, hi]` with exact rational endpoints.
///
/// Enclosures of irrational oracles have dyadic endpoints; enclosures of
/// rational values are points. Arithmetic is exact, so results of operations
/// may carry arbitrary rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(q: Rational) -> Self {
        Interval {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn from_integer(n: BigInt) -> Self {
        Interval::point(Rational::from_integer(n))
    }

    pub fn zero() -> Self {
        Interval::point(Rational::zero())
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    /// True when both endpoints have power-of-two denominators.
    pub fn is_dyadic(&self) -> bool {
        let dyadic = |q: &Rational| {
            let d = q.denom();
            d.trailing_zeros() == Some(d.bits() - 1)
        };
        dyadic(&self.lo) && dyadic(&self.hi)
    }

    /// Outward rounding of both endpoints to the `2^-bits` grid.
    pub fn round_outward(&self, bits: u32) -> Interval {
        Interval {
            lo: dyadic_floor(&self.lo, bits),
            hi: dyadic_ceil(&self.hi, bits),
        }
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if c.is_negative() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    pub fn shift(&self, c: &Rational) -> Interval {
        Interval {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    /// `{ |x| : x in self }`
    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            Interval {
                lo: -&self.hi,
                hi: -&self.lo,
            }
        } else {
            let hi = if -&self.lo > self.hi {
                -&self.lo
            } else {
                self.hi.clone()
            };
            Interval {
                lo: Rational::zero(),
                hi,
            }
        }
    }

    pub fn pow(&self, exp: u32) -> Interval {
        let mut acc = Interval::point(Rational::one());
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn certainly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Interval hull.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Loose `f64` view of the midpoint, for human-readable summaries only.
    pub fn approx_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let mid = (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2));
        mid.to_f64().unwrap_or(f64::NAN)
    }

    /// Largest `k` such that the width is at most `2^-k` (capped at `cap`).
    pub fn precision_bits(&self, cap: u32) -> u32 {
        let w = self.width();
        if w.is_zero() {
            return cap;
        }
        let mut k = 0;
        while k < cap && w <= Rational::new(BigInt::one(), pow2(k + 1)) {
            k += 1;
        }
        k
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        if self.is_point() {
            return rhs.scale(&self.lo);
        }
        if rhs.is_point() {
            return self.scale(&rhs.lo);
        }
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().cloned().unwrap();
        let hi = products.iter().max().cloned().unwrap();
        Interval { lo, hi }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Interval {
            type Output = Interval;
            fn $method(self, rhs: Interval) -> Interval {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::super::rat;
    use super::*;
    use proptest::prelude::*;

    fn iv(a: (i64, i64), b: (i64, i64)) -> Interval {
        Interval::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    #[should_panic]
    fn rejects_reversed_endpoints() {
        let _ = iv((1, 1), (0, 1));
    }

    #[test]
    fn abs_straddling_zero() {
        let a = iv((-3, 1), (2, 1)).abs();
        assert_eq!(a, iv((0, 1), (3, 1)));
        assert_eq!(iv((-3, 1), (-1, 1)).abs(), iv((1, 1), (3, 1)));
    }

    #[test]
    fn point_times_anything_stays_exact() {
        let z = Interval::zero();
        let w = iv((-1, 3), (5, 7));
        assert!((&z * &w).is_point());
        assert_eq!(&z * &w, Interval::zero());
    }

    #[test]
    fn dyadic_detection() {
        assert!(iv((1, 4), (3, 8)).is_dyadic());
        assert!(!Interval::point(rat(1, 3)).is_dyadic());
        assert!(Interval::point(rat(1, 3)).round_outward(5).is_dyadic());
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        // Inclusion property: the operation applied to members lands in the
        // operation applied to the intervals.
        #[test]
        fn arithmetic_is_inclusion_isotone(
            a in small_rat(), b in small_rat(), c in small_rat(), d in small_rat(),
            s in 0u8..=10, t in 0u8..=10,
        ) {
            let x = Interval::new(a.clone().min(b.clone()), a.max(b));
            let y = Interval::new(c.clone().min(d.clone()), c.max(d));
            let xs = x.lo() + x.width() * rat(s as i64, 10);
            let ys = y.lo() + y.width() * rat(t as i64, 10);
            prop_assert!((&x + &y).contains(&(&xs + &ys)));
            prop_assert!((&x - &y).contains(&(&xs - &ys)));
            prop_assert!((&x * &y).contains(&(&xs * &ys)));
            let abs_xs = if xs < Rational::zero() { -xs.clone() } else { xs.clone() };
            prop_assert!(x.abs().contains(&abs_xs));
            prop_assert!(x.pow(3).contains(&(&xs * &xs * &xs)));
        }
    }
}
