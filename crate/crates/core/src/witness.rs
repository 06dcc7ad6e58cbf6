//! Irrationality witnesses: pairs `(x, y)` with `0 < |αx − y| < ε`, the
//! converse obstruction for rationals, and Cantor series
//! `Σ z_n / (g_1 ⋯ g_n)`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::approx::{form_error, GoodApproximations};
use crate::exactnum::{serde_dec, BigInt, Interval, Rational, RealOracle};
use crate::{Config, Error, Result};

/// Denominator sequence `g_n` of a Cantor series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DenominatorSequence {
    /// `g_n = n`; with all digits 1 the series sums to `e − 1`.
    Factorial,
    /// `g_n = k` for all `n`.
    Constant(BigInt),
    /// `g_n = k^n`.
    Geometric(BigInt),
}

impl DenominatorSequence {
    /// `g_n` for `n >= 1`.
    pub fn term(&self, n: u64) -> BigInt {
        match self {
            DenominatorSequence::Factorial => BigInt::from(n),
            DenominatorSequence::Constant(k) => k.clone(),
            DenominatorSequence::Geometric(k) => num_traits::pow(k.clone(), n as usize),
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, DenominatorSequence::Constant(_))
    }
}

/// `α = Σ_{n>=1} z_n / (g_1 g_2 ⋯ g_n)` with a nondecreasing `g` and digits
/// `z_n ∈ {0, 1}` repeating a fixed pattern that contains at least one 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CantorSeries {
    g: DenominatorSequence,
    digits: Vec<bool>,
}

impl CantorSeries {
    pub fn new(g: DenominatorSequence, digits: Vec<bool>) -> Result<Self> {
        match &g {
            DenominatorSequence::Constant(k) | DenominatorSequence::Geometric(k)
                if *k < BigInt::from(2) =>
            {
                return Err(Error::InvalidInput(format!(
                    "Cantor series base must be at least 2, got {k}"
                )));
            }
            _ => {}
        }
        if !digits.iter().any(|&d| d) {
            return Err(Error::InvalidInput(
                "digit pattern must contain a 1".into(),
            ));
        }
        Ok(CantorSeries { g, digits })
    }

    /// `g_n = n`, `z_n = 1`: the series for `e − 1`.
    pub fn factorial() -> Self {
        CantorSeries {
            g: DenominatorSequence::Factorial,
            digits: vec![true],
        }
    }

    /// Parses `factorial`, `constant:k` or `geometric:k`, with an optional
    /// digit pattern such as `"10"` (default `"1"`).
    pub fn from_preset(preset: &str, digits: Option<&str>) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unknown Cantor preset {preset:?}"));
        let g = match preset.split_once(':') {
            None if preset == "factorial" => DenominatorSequence::Factorial,
            Some(("constant", k)) => DenominatorSequence::Constant(k.parse().map_err(|_| bad())?),
            Some(("geometric", k)) => DenominatorSequence::Geometric(k.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        let digits = match digits {
            None => vec![true],
            Some(s) => s
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::InvalidInput(format!("bad digit pattern {s:?}"))),
                })
                .collect::<Result<_>>()?,
        };
        CantorSeries::new(g, digits)
    }

    pub fn denominators(&self) -> &DenominatorSequence {
        &self.g
    }

    pub fn g(&self, n: u64) -> BigInt {
        self.g.term(n)
    }

    pub fn z(&self, n: u64) -> bool {
        self.digits[((n - 1) % self.digits.len() as u64) as usize]
    }

    /// `(P_N, G_N)` with `P_N / G_N = Σ_{n<=N} z_n/(g_1⋯g_n)` and
    /// `G_N = g_1⋯g_N` (not reduced).
    pub fn partial(&self, big_n: u64) -> (BigInt, BigInt) {
        let mut p = BigInt::zero();
        let mut g = BigInt::one();
        for n in 1..=big_n {
            let gn = self.g(n);
            p *= &gn;
            g *= gn;
            if self.z(n) {
                p += 1;
            }
        }
        (p, g)
    }

    /// `1 / (G_N (g_{N+1} − 1))`, a bound for the tail after `N` terms;
    /// `None` when `g_{N+1} = 1`.
    pub fn tail_bound(&self, big_n: u64) -> Option<Rational> {
        let (_, g) = self.partial(big_n);
        let next: BigInt = self.g(big_n + 1) - 1;
        (!next.is_zero()).then(|| Rational::new(BigInt::one(), g * next))
    }

    pub fn is_bounded(&self) -> bool {
        self.g.is_bounded()
    }

    /// Unbounded `g` with infinitely many nonzero digits.
    pub fn is_irrational(&self) -> bool {
        !self.is_bounded() && self.digits.iter().any(|&d| d)
    }

    /// Exact value of a bounded series: with `g_n = k` and period `z_1..z_p`
    /// the sum is `(Σ_i z_i k^{p−i}) / (k^p − 1)`.
    pub fn exact_value(&self) -> Option<Rational> {
        let DenominatorSequence::Constant(k) = &self.g else {
            return None;
        };
        let mut block = BigInt::zero();
        for &d in &self.digits {
            block = block * k + u32::from(d);
        }
        let period = num_traits::pow(k.clone(), self.digits.len());
        Some(Rational::new(block, period - 1))
    }

    pub(crate) fn enclosure(&self, bits: u32) -> Interval {
        if let Some(q) = self.exact_value() {
            return Interval::point(q);
        }
        let target = Rational::new(BigInt::one(), crate::exactnum::pow2(bits + 1));
        let mut p = BigInt::zero();
        let mut g = BigInt::one();
        let mut n = 0u64;
        loop {
            n += 1;
            let gn = self.g(n);
            p *= &gn;
            g *= gn;
            if self.z(n) {
                p += 1;
            }
            let next: BigInt = self.g(n + 1) - 1;
            if next.is_zero() {
                continue;
            }
            let tail = Rational::new(BigInt::one(), &g * next);
            if tail <= target {
                let s = Rational::new(p, g);
                return Interval::new(s.clone(), s + tail).round_outward(bits + 2);
            }
        }
    }
}

impl fmt::Display for CantorSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.g {
            DenominatorSequence::Factorial => write!(f, "factorial")?,
            DenominatorSequence::Constant(k) => write!(f, "constant:{k}")?,
            DenominatorSequence::Geometric(k) => write!(f, "geometric:{k}")?,
        }
        if self.digits != [true] {
            write!(f, "@")?;
            for &d in &self.digits {
                write!(f, "{}", u8::from(d))?;
            }
        }
        Ok(())
    }
}

/// `(x, y)` with certified `0 < |αx − y| < ε`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrrationalityWitness {
    #[serde(serialize_with = "serde_dec::bigint")]
    pub x: BigInt,
    #[serde(serialize_with = "serde_dec::bigint")]
    pub y: BigInt,
    #[serde(serialize_with = "serde_dec::rational")]
    pub epsilon: Rational,
    /// Enclosure of `|αx − y|`.
    pub certified_value: Interval,
}

/// Walks the stream of good approximations `p/q` of `α` until `q > 1/ε`;
/// then `|αq − p| < 1/q < ε`, and the value is nonzero because `α` is
/// irrational.
pub fn find_witness(
    alpha: &RealOracle,
    epsilon: &Rational,
    cfg: &Config,
) -> Result<IrrationalityWitness> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let threshold = epsilon.recip();
    for item in GoodApproximations::new(alpha, cfg)? {
        let (q, err) = item?;
        if Rational::from_integer(q.denom().clone()) <= threshold {
            continue;
        }
        let x = q.denom().clone();
        let y = q.numer().clone();
        let alphas = std::slice::from_ref(alpha);
        let mut value = err;
        for bits in cfg.precisions(64) {
            if value.certainly_positive() && value.hi() < epsilon {
                return Ok(IrrationalityWitness {
                    x,
                    y,
                    epsilon: epsilon.clone(),
                    certified_value: value,
                });
            }
            value = form_error(alphas, std::slice::from_ref(&x), &y, bits);
        }
        return Err(Error::PrecisionExhausted {
            bits: cfg.max_bits,
        });
    }
    unreachable!("approximation stream is infinite")
}

/// Outcome of the exhaustive scan for `0 < |(a/b)x − y| < 1/b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    #[serde(serialize_with = "serde_dec::bigint")]
    pub a: BigInt,
    #[serde(serialize_with = "serde_dec::bigint")]
    pub b: BigInt,
    pub max_abs_x: u64,
    pub pairs_checked: u64,
    pub violations: Vec<(i64, String)>,
}

impl ObstructionReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For `α = a/b`, confirms that no `|x| <= X` and integer `y` give
/// `0 < |αx − y| < 1/b`. Only the two integers nearest `αx` need checking,
/// since every other `y` is farther away.
pub fn rational_obstruction(a: &BigInt, b: &BigInt, max_abs_x: u64) -> Result<ObstructionReport> {
    if !b.is_positive() {
        return Err(Error::InvalidInput("b must be at least 1".into()));
    }
    let alpha = Rational::new(a.clone(), b.clone());
    let bound = Rational::new(BigInt::one(), b.clone());
    let x_max = i64::try_from(max_abs_x)
        .map_err(|_| Error::InvalidInput("X out of range".into()))?;
    let mut report = ObstructionReport {
        a: a.clone(),
        b: b.clone(),
        max_abs_x,
        pairs_checked: 0,
        violations: Vec::new(),
    };
    for x in -x_max..=x_max {
        let ax = &alpha * Rational::from_integer(BigInt::from(x));
        let y0 = ax.numer().div_floor(ax.denom());
        for y in [y0.clone(), y0 + 1] {
            report.pairs_checked += 1;
            let d = (&ax - Rational::from_integer(y.clone())).abs();
            if d.is_positive() && d < bound {
                report.violations.push((x, y.to_string()));
            }
        }
    }
    Ok(report)
}

/// Partial sum data of a Cantor series with the certified gap
/// `0 < |α G_N − P_N| <= 1/(g_{N+1} − 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CantorPartials {
    pub terms: u64,
    #[serde(serialize_with = "serde_dec::bigint")]
    pub p: BigInt,
    #[serde(serialize_with = "serde_dec::bigint")]
    pub g: BigInt,
    #[serde(serialize_with = "serde_dec::rational")]
    pub bound: Rational,
    /// Enclosure of `|α G_N − P_N|`.
    pub certified_gap: Interval,
}

pub fn cantor_partials(series: &CantorSeries, big_n: u64) -> Result<CantorPartials> {
    let next: BigInt = series.g(big_n + 1) - 1;
    if next.is_zero() {
        return Err(Error::DegenerateBound);
    }
    let bound = Rational::new(BigInt::one(), next);
    let (p, g) = series.partial(big_n);
    let gr = Rational::from_integer(g.clone());

    let gap = if let Some(alpha) = series.exact_value() {
        Interval::point((alpha * &gr - Rational::from_integer(p.clone())).abs())
    } else {
        // G_N · tail, with the tail after K > N terms enclosed by
        // [T_K, T_K + 1/(G_K (g_{K+1} − 1))]
        let head = Rational::new(p.clone(), g.clone());
        let precision = &bound / Rational::from_integer(BigInt::one() << 40);
        let mut k = big_n;
        loop {
            k += 1;
            let (pk, gk) = series.partial(k);
            let tail_lo = Rational::new(pk, gk) - &head;
            let rest = series
                .tail_bound(k)
                .ok_or(Error::DegenerateBound)?;
            let gap = Interval::new(&tail_lo * &gr, (&tail_lo + rest) * &gr);
            let settled = gap.certainly_positive() && gap.width() <= precision;
            if settled || k >= big_n + 400 {
                break gap;
            }
        }
    };
    if !gap.certainly_positive() || gap.hi() > &bound {
        return Err(Error::CertificationFailed(format!(
            "gap {gap} not within (0, {bound}]"
        )));
    }
    Ok(CantorPartials {
        terms: big_n,
        p,
        g,
        bound,
        certified_gap: gap,
    })
}

/// Value of `G_N` as `u64` when it fits; handy for reports.
pub fn small_product(g: &BigInt) -> Option<u64> {
    g.to_u64()
}
