//! Exact numeric substrate: big integers, reduced rationals, rational
//! intervals, computable-real oracles and the `lcm(1..n)` machinery.

mod interval;
mod oracle;
mod primes;
pub mod serde_dec;

pub use interval::Interval;
pub use num_bigint::BigInt;
pub use oracle::{LinearCombination, RealOracle};
pub use primes::{lcm_upto, prime_count, primes_upto, LcmSequence};

use num_integer::Integer;
use num_traits::{One, Signed};

/// Reduced fraction with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

/// `2^bits`
pub fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

pub fn floor(q: &Rational) -> BigInt {
    q.numer().div_floor(q.denom())
}

pub fn ceil(q: &Rational) -> BigInt {
    q.numer().div_ceil(q.denom())
}

/// Largest multiple of `2^-bits` that is `<= q`.
pub fn dyadic_floor(q: &Rational, bits: u32) -> Rational {
    let scale = pow2(bits);
    Rational::new(floor(&(q * Rational::from_integer(scale.clone()))), scale)
}

/// Smallest multiple of `2^-bits` that is `>= q`.
pub fn dyadic_ceil(q: &Rational, bits: u32) -> Rational {
    let scale = pow2(bits);
    Rational::new(ceil(&(q * Rational::from_integer(scale.clone()))), scale)
}

/// `floor(n^(1/k))` for `n >= 0`.
pub fn root_floor(n: &BigInt, k: u32) -> BigInt {
    assert!(!n.is_negative(), "root of a negative integer");
    assert!(k >= 1, "zeroth root");
    n.nth_root(k)
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Bit length of `|n|` (0 for zero).
pub fn bit_len(n: &BigInt) -> u32 {
    n.bits() as u32
}

/// Enclosure of `base^(num/den)` for `base >= 1`, `den >= 1`, with width at
/// most `2^-bits`. Exact (a point) when the power is an integer.
pub fn rational_power_enclosure(base: &BigInt, num: u32, den: u32, bits: u32) -> Interval {
    let radicand = num_traits::pow(base.clone(), num as usize);
    let scaled = &radicand << (den as usize * bits as usize);
    let r = root_floor(&scaled, den);
    let scale = pow2(bits);
    if num_traits::pow(r.clone(), den as usize) == scaled {
        return Interval::point(Rational::new(r, scale));
    }
    Interval::new(
        Rational::new(r.clone(), scale.clone()),
        Rational::new(r + 1, scale),
    )
}
