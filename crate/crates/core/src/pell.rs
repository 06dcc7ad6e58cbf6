//! The linear equation `ax − by = 1` and the Pell equation `x² − cy² = 1`.

use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::approx::dirichlet_approx;
use crate::exactnum::{is_perfect_square, root_floor, serde_dec, BigInt, Rational, RealOracle};
use crate::{Config, Error, Result};

/// `ξ + η√c` with integer `ξ, η` and `c >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuadInt {
    #[serde(serialize_with = "serde_dec::bigint")]
    pub xi: BigInt,
    #[serde(serialize_with = "serde_dec::bigint")]
    pub eta: BigInt,
    #[serde(serialize_with = "serde_dec::bigint")]
    pub c: BigInt,
}

impl QuadInt {
    pub fn new(xi: BigInt, eta: BigInt, c: BigInt) -> Self {
        assert!(!c.is_negative(), "QuadInt requires c >= 0");
        QuadInt { xi, eta, c }
    }

    pub fn one(c: BigInt) -> Self {
        QuadInt::new(BigInt::one(), BigInt::zero(), c)
    }

    pub fn conj(&self) -> Self {
        QuadInt::new(self.xi.clone(), -&self.eta, self.c.clone())
    }

    /// `ξ² − cη²`.
    pub fn norm(&self) -> BigInt {
        &self.xi * &self.xi - &self.c * &self.eta * &self.eta
    }

    /// `self / other` when the quotient has integer coordinates.
    pub fn div_exact(&self, other: &QuadInt) -> Option<QuadInt> {
        let d = other.norm();
        if d.is_zero() {
            return None;
        }
        let num = self * &other.conj();
        let (xi, rx) = num.xi.div_rem(&d);
        let (eta, ry) = num.eta.div_rem(&d);
        (rx.is_zero() && ry.is_zero()).then(|| QuadInt::new(xi, eta, self.c.clone()))
    }

    pub fn pow(&self, k: u32) -> QuadInt {
        let mut acc = QuadInt::one(self.c.clone());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl Mul for &QuadInt {
    type Output = QuadInt;

    fn mul(self, rhs: &QuadInt) -> QuadInt {
        assert_eq!(self.c, rhs.c, "QuadInt radicands differ");
        QuadInt::new(
            &self.xi * &rhs.xi + &self.c * &self.eta * &rhs.eta,
            &self.xi * &rhs.eta + &rhs.xi * &self.eta,
            self.c.clone(),
        )
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·√{}", self.xi, self.eta, self.c)
    }
}

/// `(x, y)` with `x² − c·y² = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PellSolution {
    #[serde(serialize_with = "serde_dec::bigint")]
    pub x: BigInt,
    #[serde(serialize_with = "serde_dec::bigint")]
    pub y: BigInt,
    #[serde(serialize_with = "serde_dec::bigint")]
    pub c: BigInt,
}

impl PellSolution {
    pub fn new(x: BigInt, y: BigInt, c: BigInt) -> Result<Self> {
        let s = PellSolution { x, y, c };
        if !s.is_valid() {
            return Err(Error::CertificationFailed(format!(
                "({}, {}) does not solve x² − {}y² = 1",
                s.x, s.y, s.c
            )));
        }
        Ok(s)
    }

    pub fn is_valid(&self) -> bool {
        &self.x * &self.x - &self.c * &self.y * &self.y == BigInt::one()
    }

    pub fn as_quad(&self) -> QuadInt {
        QuadInt::new(self.x.clone(), self.y.clone(), self.c.clone())
    }
}

/// Solves `ax − by = 1` for coprime `a` and `b >= 1`.
///
/// `b = 1` gives `(0, −1)`. Otherwise Dirichlet's theorem with `N = b − 1`
/// yields `1 <= n < b` and `p` with `0 < |an − bp| < b/(b−1) <= 2`, so
/// `an − bp = ±1`. Denominators beyond the enumeration cap fall back to the
/// extended Euclidean algorithm.
pub fn solve_unit_linear(a: &BigInt, b: &BigInt, cfg: &Config) -> Result<(BigInt, BigInt)> {
    if !b.is_positive() {
        return Err(Error::InvalidInput("b must be at least 1".into()));
    }
    let g = a.gcd(b);
    if !g.is_one() {
        return Err(Error::NotCoprime {
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    if b.is_one() {
        return Ok((BigInt::zero(), -BigInt::one()));
    }
    let (x, y) = match (b - 1u32).to_u64() {
        Some(big_n) if big_n < cfg.enumeration_cap => {
            let alpha = RealOracle::rational(Rational::new(a.clone(), b.clone()));
            let r = dirichlet_approx(&alpha, big_n, cfg)?;
            (BigInt::from(r.n), r.p)
        }
        _ => {
            let e = a.extended_gcd(b);
            (e.x, -e.y)
        }
    };
    let value = a * &x - b * &y;
    if value.is_one() {
        Ok((x, y))
    } else if value == -BigInt::one() {
        Ok((-x, -y))
    } else {
        Err(Error::CertificationFailed(format!(
            "a·x − b·y = {value}, expected ±1"
        )))
    }
}

/// Solution set of `x² − cy² = 1` when `c < 0` or `c` is a square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TrivialPell {
    /// All solutions.
    Finite {
        #[serde(serialize_with = "pairs")]
        solutions: Vec<(BigInt, BigInt)>,
    },
    /// `c = 0`: every `(±1, t)` with `t ∈ Z`.
    Parametric,
}

fn pairs<S: serde::Serializer>(v: &[(BigInt, BigInt)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (x, y) in v {
        seq.serialize_element(&(x.to_string(), y.to_string()))?;
    }
    seq.end()
}

pub fn solve_pell_trivial(c: &BigInt) -> Result<TrivialPell> {
    let one = BigInt::one();
    let zero = BigInt::zero();
    if c.is_zero() {
        return Ok(TrivialPell::Parametric);
    }
    if c.is_positive() && !is_perfect_square(c) {
        return Err(Error::NonTrivialCase(format!(
            "c = {c} is positive and not a square"
        )));
    }
    let mut solutions = vec![(one.clone(), zero.clone()), (-one.clone(), zero.clone())];
    if *c == -BigInt::one() {
        solutions.push((zero.clone(), one.clone()));
        solutions.push((zero, -one));
    }
    Ok(TrivialPell::Finite { solutions })
}

/// The Pell solver's output with the data behind it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PellCertificate {
    /// Minimal positive solution.
    pub fundamental: PellSolution,
    /// `ε = α/β` from the first colliding pair of approximations.
    pub collision_unit: QuadInt,
    /// `ε = ±fundamental^k` (up to conjugation).
    pub collision_power: u32,
    /// Common norm `p² − cn²` of the colliding pair.
    #[serde(serialize_with = "serde_dec::bigint")]
    pub collision_norm: BigInt,
    /// Approximations drawn from the convergent stream.
    pub approximations_used: usize,
    /// Every observed `p² − cn²` satisfied `|v| <= 2√c + 1`.
    pub norms_bounded: bool,
}

/// Convergents `p/n` of the continued fraction of `√c`, computed with the
/// periodic recurrence in exact integers.
struct SqrtConvergents {
    c: BigInt,
    a0: BigInt,
    m: BigInt,
    d: BigInt,
    a: BigInt,
    prev: (BigInt, BigInt),
    cur: (BigInt, BigInt),
    started: bool,
}

impl SqrtConvergents {
    fn new(c: &BigInt) -> Self {
        let a0 = c.sqrt();
        SqrtConvergents {
            c: c.clone(),
            a0: a0.clone(),
            m: BigInt::zero(),
            d: BigInt::one(),
            a: a0.clone(),
            prev: (BigInt::one(), BigInt::zero()),
            cur: (a0, BigInt::one()),
            started: false,
        }
    }
}

impl Iterator for SqrtConvergents {
    type Item = (BigInt, BigInt);

    fn next(&mut self) -> Option<Self::Item> {
        if !self.started {
            self.started = true;
            return Some(self.cur.clone());
        }
        self.m = &self.d * &self.a - &self.m;
        self.d = (&self.c - &self.m * &self.m) / &self.d;
        self.a = (&self.a0 + &self.m) / &self.d;
        let next = (
            &self.a * &self.cur.0 + &self.prev.0,
            &self.a * &self.cur.1 + &self.prev.1,
        );
        self.prev = std::mem::replace(&mut self.cur, next);
        Some(self.cur.clone())
    }
}

const MAX_CONVERGENTS: usize = 100_000;

/// Fundamental solution of `x² − cy² = 1` for non-square `c >= 2`.
///
/// Good approximations `p/n` of `√c` have `|p² − cn²| <= 2√c + 1`, so some
/// nonzero value `v` repeats with `(p, n) ≡ (q, m) mod |v|`; then
/// `ε = (p + n√c)/(q + m√c)` has integer coordinates and norm 1. The
/// minimal solution is the first convergent of norm 1, and `ε` is checked to
/// be a power of it.
pub fn solve_pell(c: &BigInt) -> Result<PellCertificate> {
    if *c < BigInt::from(2) {
        return Err(Error::InvalidInput(format!("c must be at least 2, got {c}")));
    }
    if is_perfect_square(c) {
        return Err(Error::SquareInput(c.to_string()));
    }
    let four_c = c * 4u32;
    let one = BigInt::one();
    let mut classes: HashMap<(BigInt, BigInt, BigInt), (BigInt, BigInt)> = HashMap::new();
    let mut fundamental: Option<PellSolution> = None;
    let mut collision: Option<(QuadInt, BigInt)> = None;
    let mut norms_bounded = true;

    for (i, (p, n)) in SqrtConvergents::new(c).take(MAX_CONVERGENTS).enumerate() {
        let used = i + 1;
        let v = &p * &p - c * &n * &n;
        // |v| <= 2√c + 1  <=>  (|v| − 1)² <= 4c
        let excess = v.abs() - &one;
        norms_bounded &= excess.is_negative() || &excess * &excess <= four_c;
        if fundamental.is_none() && v.is_one() {
            fundamental = Some(PellSolution::new(p.clone(), n.clone(), c.clone())?);
        }
        if collision.is_none() && !v.is_zero() {
            let modulus = v.abs();
            let key = (v.clone(), p.mod_floor(&modulus), n.mod_floor(&modulus));
            match classes.get(&key) {
                Some((q, m)) => {
                    let alpha = QuadInt::new(p.clone(), n.clone(), c.clone());
                    let beta = QuadInt::new(q.clone(), m.clone(), c.clone());
                    let eps = alpha.div_exact(&beta).ok_or_else(|| {
                        Error::CertificationFailed("collision quotient is not integral".into())
                    })?;
                    if !eps.norm().is_one() || eps.eta.is_zero() {
                        return Err(Error::CertificationFailed(format!(
                            "collision unit {eps} has norm {}",
                            eps.norm()
                        )));
                    }
                    collision = Some((eps, v.clone()));
                }
                None => {
                    classes.insert(key, (p.clone(), n.clone()));
                }
            }
        }
        if let (Some(fund), Some((eps, v))) = (&fundamental, &collision) {
            let power = unit_power(fund, eps).ok_or_else(|| {
                Error::CertificationFailed(format!("{eps} is not a power of the fundamental unit"))
            })?;
            if !norms_bounded {
                return Err(Error::CertificationFailed(
                    "an approximation norm exceeded 2√c + 1".into(),
                ));
            }
            return Ok(PellCertificate {
                fundamental: fund.clone(),
                collision_unit: eps.clone(),
                collision_power: power,
                collision_norm: v.clone(),
                approximations_used: used,
                norms_bounded,
            });
        }
    }
    Err(Error::InfeasibleEnumeration {
        size: format!("more than {MAX_CONVERGENTS} convergents"),
        cap: MAX_CONVERGENTS as u64,
    })
}

/// `k` with `|ξ| + |η|√c = fundamental^k`.
fn unit_power(fund: &PellSolution, eps: &QuadInt) -> Option<u32> {
    let target = QuadInt::new(eps.xi.abs(), eps.eta.abs(), eps.c.clone());
    let base = fund.as_quad();
    let mut acc = base.clone();
    let mut k = 1;
    while acc.xi <= target.xi {
        if acc == target {
            return Some(k);
        }
        acc = &acc * &base;
        k += 1;
    }
    None
}

/// `ε, ε², ..., ε^k` for `ε = x + y√c`.
pub fn pell_powers(fundamental: &PellSolution, k: u32) -> Result<Vec<PellSolution>> {
    if !fundamental.is_valid() {
        return Err(Error::InvalidInput(format!(
            "({}, {}) does not solve x² − {}y² = 1",
            fundamental.x, fundamental.y, fundamental.c
        )));
    }
    let base = fundamental.as_quad();
    let mut acc = base.clone();
    let mut out = Vec::with_capacity(k as usize);
    for i in 1..=k {
        if i > 1 {
            acc = &acc * &base;
        }
        out.push(PellSolution::new(acc.xi.clone(), acc.eta.clone(), acc.c.clone())?);
    }
    Ok(out)
}

/// Smallest `y` in `1..=y_max` with `1 + cy²` a square, by direct search.
pub fn pell_brute_force(c: u64, y_max: u64) -> Option<(BigInt, BigInt)> {
    let c = BigInt::from(c);
    (1..=y_max).find_map(|y| {
        let y = BigInt::from(y);
        let t = BigInt::one() + &c * &y * &y;
        let x = root_floor(&t, 2);
        (&x * &x == t).then_some((x, y))
    })
}
