use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{bit_len, ceil, floor, is_perfect_square, pow2, BigInt, Interval, Rational};
use crate::witness::CantorSeries;
use crate::{Config, Error, Result};

/// A real number that can be enclosed to any requested precision.
///
/// The enclosure at precision `k` always contains the true value and has
/// width at most `2^-k`. Rational values are enclosed by points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealOracle {
    Rational(Rational),
    /// `√c` for `c >= 0`. Build through [`RealOracle::sqrt`] so that perfect
    /// squares collapse to `Rational`.
    Sqrt(BigInt),
    EulerE,
    Zeta2,
    Zeta3,
    Cantor(CantorSeries),
    Linear(Box<LinearCombination>),
}

/// `Σ coeff·oracle + constant` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCombination {
    pub terms: Vec<(Rational, RealOracle)>,
    pub constant: Rational,
}

impl RealOracle {
    pub fn rational(q: Rational) -> Self {
        RealOracle::Rational(q)
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        RealOracle::Rational(Rational::from_integer(n.into()))
    }

    pub fn sqrt(c: impl Into<BigInt>) -> Result<Self> {
        let c = c.into();
        if c.is_negative() {
            return Err(Error::InvalidInput(format!("sqrt of negative number {c}")));
        }
        if is_perfect_square(&c) {
            return Ok(RealOracle::integer(c.sqrt()));
        }
        Ok(RealOracle::Sqrt(c))
    }

    pub fn cantor(series: CantorSeries) -> Self {
        match series.exact_value() {
            Some(q) => RealOracle::Rational(q),
            None => RealOracle::Cantor(series),
        }
    }

    pub fn linear(terms: Vec<(Rational, RealOracle)>, constant: Rational) -> Self {
        let combo = LinearCombination { terms, constant };
        match combo.exact_value() {
            Some(q) => RealOracle::Rational(q),
            None => RealOracle::Linear(Box::new(combo)),
        }
    }

    /// `coeff·self + constant`
    pub fn affine(&self, coeff: Rational, constant: Rational) -> Self {
        RealOracle::linear(vec![(coeff, self.clone())], constant)
    }

    /// The exact value, when the descriptor is known to be rational.
    pub fn exact_value(&self) -> Option<Rational> {
        match self {
            RealOracle::Rational(q) => Some(q.clone()),
            RealOracle::Sqrt(c) if is_perfect_square(c) => {
                Some(Rational::from_integer(c.sqrt()))
            }
            RealOracle::Cantor(series) => series.exact_value(),
            RealOracle::Linear(combo) => combo.exact_value(),
            _ => None,
        }
    }

    /// True when the descriptor is provably irrational. `false` means
    /// "rational or not recognized".
    pub fn is_irrational(&self) -> bool {
        match self {
            RealOracle::Rational(_) => false,
            RealOracle::Sqrt(c) => !c.is_negative() && !is_perfect_square(c),
            RealOracle::EulerE | RealOracle::Zeta2 | RealOracle::Zeta3 => true,
            RealOracle::Cantor(series) => series.is_irrational(),
            RealOracle::Linear(combo) => {
                // rational combination of exactly one irrational value
                let mut irrational = 0;
                for (c, x) in &combo.terms {
                    if c.is_zero() {
                        continue;
                    }
                    if x.is_irrational() {
                        irrational += 1;
                    } else if x.exact_value().is_none() {
                        return false;
                    }
                }
                irrational == 1
            }
        }
    }

    /// Enclosure of width at most `2^-bits` containing the value.
    pub fn enclosure(&self, bits: u32) -> Interval {
        match self {
            RealOracle::Rational(q) => Interval::point(q.clone()),
            RealOracle::Sqrt(c) => sqrt_enclosure(c, bits),
            RealOracle::EulerE => e_enclosure(bits),
            RealOracle::Zeta2 => zeta2_enclosure(bits),
            RealOracle::Zeta3 => zeta3_enclosure(bits),
            RealOracle::Cantor(series) => series.enclosure(bits),
            RealOracle::Linear(combo) => combo.enclosure(bits),
        }
    }

    /// `[x]` and the oracle for `x − [x]`.
    pub fn floor_fract(&self, cfg: &Config) -> Result<(BigInt, RealOracle)> {
        let f = self.floor(cfg)?;
        let fract = match self.exact_value() {
            Some(q) => RealOracle::Rational(q - Rational::from_integer(f.clone())),
            None => self.affine(Rational::one(), Rational::from_integer(-f.clone())),
        };
        Ok((f, fract))
    }

    /// Certified `floor`. Refines until the enclosure does not straddle an
    /// integer; fails only for values that are integers in disguise.
    pub fn floor(&self, cfg: &Config) -> Result<BigInt> {
        if let Some(q) = self.exact_value() {
            return Ok(floor(&q));
        }
        for bits in cfg.precisions(16) {
            let e = self.enclosure(bits);
            let lo = floor(e.lo());
            if lo == floor(e.hi()) {
                return Ok(lo);
            }
        }
        Err(Error::PrecisionExhausted {
            bits: cfg.max_bits,
        })
    }
}

impl fmt::Display for RealOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealOracle::Rational(q) => write!(f, "rat:{q}"),
            RealOracle::Sqrt(c) => write!(f, "sqrt:{c}"),
            RealOracle::EulerE => write!(f, "e"),
            RealOracle::Zeta2 => write!(f, "zeta2"),
            RealOracle::Zeta3 => write!(f, "zeta3"),
            RealOracle::Cantor(series) => write!(f, "cantor:{series}"),
            RealOracle::Linear(combo) => {
                write!(f, "(")?;
                for (c, x) in &combo.terms {
                    write!(f, "{c}*{x} + ")?;
                }
                write!(f, "{})", combo.constant)
            }
        }
    }
}

impl LinearCombination {
    fn exact_value(&self) -> Option<Rational> {
        let mut acc = self.constant.clone();
        for (c, x) in &self.terms {
            if c.is_zero() {
                continue;
            }
            acc += c * x.exact_value()?;
        }
        Some(acc)
    }

    fn enclosure(&self, bits: u32) -> Interval {
        let weight: Rational = self.terms.iter().map(|(c, _)| c.abs()).sum();
        let guard = bit_len(&ceil(&weight));
        let mut acc = Interval::point(self.constant.clone());
        for (c, x) in &self.terms {
            if c.is_zero() {
                continue;
            }
            acc = &acc + &x.enclosure(bits + guard).scale(c);
        }
        acc
    }
}

fn sqrt_enclosure(c: &BigInt, bits: u32) -> Interval {
    assert!(!c.is_negative(), "sqrt oracle of negative number {c}");
    let scaled = c << (2 * bits as usize);
    let s = scaled.sqrt();
    let scale = pow2(bits);
    if &s * &s == scaled {
        return Interval::point(Rational::new(s, scale));
    }
    Interval::new(
        Rational::new(s.clone(), scale.clone()),
        Rational::new(s + 1, scale),
    )
}

/// `e = Σ 1/j!`, tail after `K` terms below `2/(K+1)!`.
fn e_enclosure(bits: u32) -> Interval {
    // smallest K with (K+1)! >= 2^(bits+2), so the tail is <= 2^-(bits+1)
    let target = pow2(bits + 2);
    let mut k: u64 = 0;
    let mut fact_next = BigInt::one(); // (k+1)!
    while fact_next < target {
        k += 1;
        fact_next *= k + 1;
    }
    let w = bits + 1 + bit_len(&BigInt::from(k + 1));
    let one = pow2(w);
    // each of the k+1 terms is rounded down by less than one unit
    let mut sum = BigInt::zero();
    let mut fact = BigInt::one();
    for j in 0..=k {
        if j > 0 {
            fact *= j;
        }
        sum += &one / &fact;
    }
    let lo = Rational::new(sum.clone(), one.clone());
    let hi = Rational::new(sum + (k + 1), one) + Rational::new(BigInt::one(), pow2(bits + 1));
    Interval::new(lo, hi)
}

/// `ζ(2) = 3 Σ_{n>=1} 1 / (n² C(2n, n))`; consecutive terms shrink by more
/// than a factor of 4, so the tail after `K` terms is below `(4/3)·t_{K+1}`.
fn zeta2_enclosure(bits: u32) -> Interval {
    // t_{K+1} (4/3) = 4 / ((K+1)² C(2K+2, K+1)) <= 2^-(bits+1)
    let target = pow2(bits + 3);
    let mut k: u64 = 0;
    let mut central = BigInt::from(2); // C(2(k+1), k+1)
    while BigInt::from((k + 1) * (k + 1)) * &central < target {
        k += 1;
        central = central * (2 * k + 1) * (2 * k + 2) / ((k + 1) * (k + 1));
    }
    let w = bits + 1 + bit_len(&BigInt::from(k.max(1)));
    let three = BigInt::from(3) << w as usize;
    let mut sum = BigInt::zero();
    let mut c = BigInt::one(); // C(2n, n)
    for n in 1..=k {
        c = c * (2 * n - 1) * (2 * n) / (n * n);
        sum += &three / (BigInt::from(n * n) * &c);
    }
    let one = pow2(w);
    let lo = Rational::new(sum.clone(), one.clone());
    let hi = Rational::new(sum + k, one) + Rational::new(BigInt::one(), pow2(bits + 1));
    Interval::new(lo, hi)
}

/// `ζ(3) = (5/2) Σ_{n>=1} (-1)^(n+1) / (n³ C(2n, n))`, an alternating series
/// with decreasing terms: the truncation error is below the first omitted
/// term.
fn zeta3_enclosure(bits: u32) -> Interval {
    // t_{K+1} = 5 / (2 (K+1)³ C(2K+2, K+1)) <= 2^-(bits+2)
    let target = BigInt::from(5) << (bits as usize + 1);
    let mut k: u64 = 0;
    let mut central = BigInt::from(2);
    while BigInt::from((k + 1) * (k + 1) * (k + 1)) * &central < target {
        k += 1;
        central = central * (2 * k + 1) * (2 * k + 2) / ((k + 1) * (k + 1));
    }
    let w = bits + 2 + bit_len(&BigInt::from(k.max(1)));
    let five_halves = BigInt::from(5) << (w as usize - 1);
    let mut sum = BigInt::zero();
    let mut c = BigInt::one();
    for n in 1..=k {
        c = c * (2 * n - 1) * (2 * n) / (n * n);
        let t = &five_halves / (BigInt::from(n * n * n) * &c);
        if n % 2 == 1 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    let one = pow2(w);
    let slack = Rational::new(BigInt::from(k), one.clone()) + Rational::new(BigInt::one(), pow2(bits + 2));
    let mid = Rational::new(sum, one);
    Interval::new(&mid - &slack, &mid + &slack)
}

#[cfg(test)]
mod tests {
    use super::super::{int, rat};
    use super::*;

    fn width_ok(e: &Interval, bits: u32) -> bool {
        e.width() <= Rational::new(BigInt::one(), pow2(bits))
    }

    #[test]
    fn rational_point_enclosure() {
        let x = RealOracle::rational(rat(1, 3));
        let e = x.enclosure(4);
        assert!(e.is_point());
        assert!(e.contains(&rat(1, 3)));
    }

    #[test]
    fn sqrt_two_at_ten_bits() {
        let x = RealOracle::sqrt(2).unwrap();
        let e = x.enclosure(10);
        assert!(width_ok(&e, 10));
        assert!(e.is_dyadic());
        assert!(e.lo() >= &rat(14132, 10000) && e.hi() <= &rat(14152, 10000));
        // squaring the endpoints brackets 2
        assert!(e.lo() * e.lo() <= rat(2, 1) && e.hi() * e.hi() >= rat(2, 1));
    }

    #[test]
    fn sqrt_of_square_degrades_to_rational() {
        assert_eq!(RealOracle::sqrt(49).unwrap(), RealOracle::integer(7));
        assert!(RealOracle::sqrt(-1).is_err());
        assert!(!RealOracle::sqrt(49).unwrap().is_irrational());
    }

    /// Direct partial sums with the elementary tail majorants:
    /// Σ_{k>K} 1/k² < 1/K, Σ_{k>K} 1/k³ < 1/(2K²), Σ_{j>K} 1/j! < 2/(K+1)!.
    fn direct_zeta2(terms: u64) -> Interval {
        let s: Rational = (1..=terms).map(|k| rat(1, (k * k) as i64)).sum();
        Interval::new(s.clone(), s + rat(1, terms as i64))
    }

    fn direct_zeta3(terms: u64) -> Interval {
        let s: Rational = (1..=terms).map(|k| rat(1, (k * k * k) as i64)).sum();
        Interval::new(s.clone(), s + rat(1, (2 * terms * terms) as i64))
    }

    fn direct_e(terms: u64) -> Interval {
        let mut s = Rational::zero();
        let mut f = BigInt::one();
        for j in 0..=terms {
            if j > 0 {
                f *= j;
            }
            s += Rational::new(BigInt::one(), f.clone());
        }
        let tail = Rational::new(BigInt::from(2), f * (terms + 1));
        Interval::new(s.clone(), s + tail)
    }

    fn overlaps(a: &Interval, b: &Interval) -> bool {
        a.lo() <= b.hi() && b.lo() <= a.hi()
    }

    #[test]
    fn constants_agree_with_direct_series() {
        let z2 = direct_zeta2(400);
        let z3 = direct_zeta3(400);
        let e = direct_e(30);
        for bits in [1, 4, 10, 20, 64, 200] {
            let a = RealOracle::Zeta2.enclosure(bits);
            assert!(width_ok(&a, bits) && a.is_dyadic());
            assert!(overlaps(&a, &z2), "zeta2 at {bits}");
            let b = RealOracle::Zeta3.enclosure(bits);
            assert!(width_ok(&b, bits) && b.is_dyadic());
            assert!(overlaps(&b, &z3), "zeta3 at {bits}");
            let c = RealOracle::EulerE.enclosure(bits);
            assert!(width_ok(&c, bits) && c.is_dyadic());
            assert!(overlaps(&c, &e), "e at {bits}");
        }
        // π²/6 ≈ 1.6449340668
        let z = RealOracle::Zeta2.enclosure(20);
        assert!(z.lo() > &rat(1_644_933, 1_000_000) && z.hi() < &rat(1_644_935, 1_000_000));
    }

    #[test]
    fn enclosures_are_consistent_across_precisions() {
        for x in [RealOracle::EulerE, RealOracle::Zeta2, RealOracle::Zeta3, RealOracle::Sqrt(int(7))] {
            let fine = x.enclosure(600);
            for bits in (0..120).step_by(7) {
                assert!(overlaps(&x.enclosure(bits), &fine), "{x} at {bits}");
            }
        }
    }

    #[test]
    fn floor_fract_cases() {
        let cfg = Config::default();
        let (f, r) = RealOracle::rational(rat(7, 3)).floor_fract(&cfg).unwrap();
        assert_eq!(f, int(2));
        assert_eq!(r, RealOracle::rational(rat(1, 3)));
        let (f, r) = RealOracle::rational(rat(-1, 2)).floor_fract(&cfg).unwrap();
        assert_eq!(f, int(-1));
        assert_eq!(r, RealOracle::rational(rat(1, 2)));
        let (f, r) = RealOracle::sqrt(2).unwrap().floor_fract(&cfg).unwrap();
        assert_eq!(f, int(1));
        let e = r.enclosure(30);
        assert!(e.lo() > &rat(414, 1000) && e.hi() < &rat(415, 1000));
        assert!(r.is_irrational());
    }

    #[test]
    fn floor_of_disguised_integer_exhausts_precision() {
        // √2 − √2 is not recognized as the integer 0
        let s = RealOracle::sqrt(2).unwrap();
        let zero = RealOracle::linear(
            vec![(rat(1, 1), s.clone()), (rat(-1, 1), s)],
            Rational::zero(),
        );
        let cfg = Config::new(64, 10);
        assert_eq!(zero.floor(&cfg), Err(Error::PrecisionExhausted { bits: 64 }));
    }

    #[test]
    fn linear_combination_width() {
        let s = RealOracle::sqrt(3).unwrap();
        let x = RealOracle::linear(
            vec![(rat(1000, 3), s.clone()), (rat(-7, 1), RealOracle::Zeta2)],
            rat(1, 2),
        );
        let e = x.enclosure(40);
        assert!(width_ok(&e, 40));
        assert!(!x.is_irrational()); // two irrational terms: not decided
        assert!(s.affine(rat(2, 1), rat(1, 1)).is_irrational());
    }
}
