//! Coefficient enclosures over a common integer denominator.
//!
//! Every coefficient `α` is stored as integers `lo ≤ hi` with
//! `lo/den ≤ α ≤ hi/den`; exact rationals get `lo = hi`. Integer linear
//! combinations then need only integer arithmetic, and floors of rational
//! combinations are decided exactly.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactnum::{ceil, floor, pow2, BigInt, Rational, RealOracle};

pub(crate) struct ScaledMatrix {
    pub den: BigInt,
    pub lo: Vec<Vec<BigInt>>,
    pub hi: Vec<Vec<BigInt>>,
}

impl ScaledMatrix {
    pub fn new(coeffs: &[Vec<RealOracle>], bits: u32) -> Self {
        let mut den = BigInt::one();
        let mut exact = true;
        for x in coeffs.iter().flatten() {
            match x.exact_value() {
                Some(q) => den = den.lcm(q.denom()),
                None => exact = false,
            }
        }
        if !exact {
            den *= pow2(bits);
        }
        let scale = Rational::from_integer(den.clone());
        let mut lo = Vec::with_capacity(coeffs.len());
        let mut hi = Vec::with_capacity(coeffs.len());
        for row in coeffs {
            let mut rlo = Vec::with_capacity(row.len());
            let mut rhi = Vec::with_capacity(row.len());
            for x in row {
                match x.exact_value() {
                    Some(q) => {
                        let v = (q * &scale).to_integer();
                        rlo.push(v.clone());
                        rhi.push(v);
                    }
                    None => {
                        let e = x.enclosure(bits);
                        rlo.push(floor(&(e.lo() * &scale)));
                        rhi.push(ceil(&(e.hi() * &scale)));
                    }
                }
            }
            lo.push(rlo);
            hi.push(rhi);
        }
        ScaledMatrix { den, lo, hi }
    }

    /// Scaled enclosure `[lo, hi]` of `Σ_ℓ α_{row,ℓ} n_ℓ`.
    pub fn row_form(&self, row: usize, n: &[BigInt]) -> (BigInt, BigInt) {
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (l, k) in n.iter().enumerate() {
            if k.is_zero() {
                continue;
            }
            if k.is_negative() {
                lo += k * &self.hi[row][l];
                hi += k * &self.lo[row][l];
            } else {
                lo += k * &self.lo[row][l];
                hi += k * &self.hi[row][l];
            }
        }
        (lo, hi)
    }

    /// Certified `floor(N·x)` for the scaled enclosure `[lo, hi]` of `x`,
    /// or `None` when the enclosure straddles a multiple of `1/N`.
    pub fn scaled_floor(&self, lo: &BigInt, hi: &BigInt, buckets: &BigInt) -> Option<BigInt> {
        let a = (lo * buckets).div_floor(&self.den);
        if lo == hi {
            return Some(a);
        }
        let b = (hi * buckets).div_floor(&self.den);
        (a == b).then_some(a)
    }
}
