//! Exact witness sequences for ζ(2) and ζ(3).
//!
//! The double integrals
//!
//! ```text
//! ∬ (1−y)^n P_n(x) / (1 − xy) dx dy      and      ∬ −ln(xy) P_n(x) P_n(y) / (1 − xy) dx dy
//! ```
//!
//! over the unit square are computed exactly: the integrands are expanded
//! into monomials `x^r y^s` with integer coefficients, and every monomial
//! moment has a closed form `c·ζ(s) + q` with integer `c` and rational `q`.
//! No quadrature is involved.

use std::fmt;
use std::ops::{Add, AddAssign};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::exactnum::{bit_len, lcm_upto, serde_dec, BigInt, Interval, LcmSequence, Rational, RealOracle};
use crate::{Config, Error, Result};

/// Polynomial with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntPoly {
    #[serde(serialize_with = "serde_dec::bigint_vec")]
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k)
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() && self.coeffs.len() > 1 {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c.abs())?,
                1 => write!(f, "{}x", c.abs())?,
                _ => write!(f, "{}x^{k}", c.abs())?,
            }
        }
        Ok(())
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `P_n(x) = (1/n!) (d/dx)^n (x^n (1 − x)^n)`, computed by differentiating
/// the integer polynomial `n` times and dividing exactly by `n!`.
pub fn legendre_type(n: u32) -> IntPoly {
    let n64 = u64::from(n);
    let mut coeffs = vec![BigInt::zero(); 2 * n as usize + 1];
    for k in 0..=n64 {
        let c = binomial(n64, k);
        coeffs[(n64 + k) as usize] = if k % 2 == 0 { c } else { -c };
    }
    let mut p = IntPoly::new(coeffs);
    let mut fact = BigInt::one();
    for i in 1..=n64 {
        p = p.derivative();
        fact *= i;
    }
    IntPoly::new(
        p.coeffs
            .into_iter()
            .map(|c| {
                let (q, r) = c.div_rem(&fact);
                assert!(r.is_zero(), "n! does not divide a coefficient");
                q
            })
            .collect(),
    )
}

/// `c·ζ(s) + q` with integer `c` and rational `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaForm {
    #[serde(serialize_with = "serde_dec::bigint")]
    pub zeta_coeff: BigInt,
    #[serde(serialize_with = "serde_dec::rational")]
    pub constant: Rational,
}

impl ZetaForm {
    pub fn zero() -> Self {
        ZetaForm {
            zeta_coeff: BigInt::zero(),
            constant: Rational::zero(),
        }
    }

    pub fn rational(q: Rational) -> Self {
        ZetaForm {
            zeta_coeff: BigInt::zero(),
            constant: q,
        }
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        ZetaForm {
            zeta_coeff: &self.zeta_coeff * k,
            constant: &self.constant * Rational::from_integer(k.clone()),
        }
    }
}

impl Add for ZetaForm {
    type Output = ZetaForm;

    fn add(mut self, rhs: ZetaForm) -> ZetaForm {
        self += rhs;
        self
    }
}

impl AddAssign for ZetaForm {
    fn add_assign(&mut self, rhs: ZetaForm) {
        self.zeta_coeff += rhs.zeta_coeff;
        self.constant += rhs.constant;
    }
}

/// `H^{(e)}_k = Σ_{j<=k} 1/j^e` for `k = 0..=n`.
fn harmonic_table(n: usize, e: u32) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = Rational::zero();
    out.push(acc.clone());
    for j in 1..=n {
        acc += Rational::new(BigInt::one(), num_traits::pow(BigInt::from(j), e as usize));
        out.push(acc.clone());
    }
    out
}

/// Moments of `1/(1 − xy)` from tables of `H^{(1)}` and `H^{(2)}`.
fn kernel_moment_with(h1: &[Rational], h2: &[Rational], r: usize, s: usize) -> ZetaForm {
    if r == s {
        ZetaForm {
            zeta_coeff: BigInt::one(),
            constant: -h2[r].clone(),
        }
    } else {
        let d = Rational::from_integer(BigInt::from(r as i64 - s as i64));
        ZetaForm::rational((&h1[r] - &h1[s]) / d)
    }
}

/// Moments of `−ln(xy)/(1 − xy)` from tables of `H^{(2)}` and `H^{(3)}`.
fn log_kernel_moment_with(h2: &[Rational], h3: &[Rational], r: usize, s: usize) -> ZetaForm {
    if r == s {
        ZetaForm {
            zeta_coeff: BigInt::from(2),
            constant: -h3[r].clone() * Rational::from_integer(BigInt::from(2)),
        }
    } else {
        let d = Rational::from_integer(BigInt::from(r as i64 - s as i64));
        ZetaForm::rational((&h2[r] - &h2[s]) / d)
    }
}

/// `∬ x^r y^s / (1 − xy) dx dy`: `ζ(2) − H^{(2)}_r` on the diagonal and
/// `(H_r − H_s)/(r − s)` off it.
pub fn kernel_moment(r: u32, s: u32) -> ZetaForm {
    let top = r.max(s) as usize;
    kernel_moment_with(&harmonic_table(top, 1), &harmonic_table(top, 2), r as usize, s as usize)
}

/// `∬ −ln(xy) x^r y^s / (1 − xy) dx dy`: `2(ζ(3) − H^{(3)}_r)` on the
/// diagonal and `(H^{(2)}_r − H^{(2)}_s)/(r − s)` off it.
pub fn log_kernel_moment(r: u32, s: u32) -> ZetaForm {
    let top = r.max(s) as usize;
    log_kernel_moment_with(&harmonic_table(top, 2), &harmonic_table(top, 3), r as usize, s as usize)
}

/// Which zeta value a witness approximates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ZetaArg {
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3")]
    Three,
}

impl ZetaArg {
    pub fn exponent(self) -> u32 {
        match self {
            ZetaArg::Two => 2,
            ZetaArg::Three => 3,
        }
    }

    pub fn oracle(self) -> RealOracle {
        match self {
            ZetaArg::Two => RealOracle::Zeta2,
            ZetaArg::Three => RealOracle::Zeta3,
        }
    }
}

/// Exact value `alpha_coeff·ζ(s) + beta` of the `n`-th integral, with the
/// integer normalization `a = V(n)^s·alpha_coeff`, `b = V(n)^s·beta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaWitness {
    pub n: u32,
    pub s: ZetaArg,
    #[serde(serialize_with = "serde_dec::bigint")]
    pub alpha_coeff: BigInt,
    #[serde(serialize_with = "serde_dec::rational")]
    pub beta: Rational,
    #[serde(serialize_with = "serde_dec::bigint")]
    pub a: BigInt,
    #[serde(serialize_with = "serde_dec::bigint")]
    pub b: BigInt,
    /// `V(n) = lcm(1, ..., n)`.
    #[serde(serialize_with = "serde_dec::bigint")]
    pub lcm: BigInt,
}

impl ZetaWitness {
    fn from_form(n: u32, s: ZetaArg, form: ZetaForm) -> Result<Self> {
        let lcm = lcm_upto(u64::from(n));
        let scale = num_traits::pow(lcm.clone(), s.exponent() as usize);
        let scaled = &form.constant * Rational::from_integer(scale.clone());
        if !scaled.is_integer() {
            return Err(Error::CertificationFailed(format!(
                "V({n})^{} · beta = {scaled} is not an integer",
                s.exponent()
            )));
        }
        Ok(ZetaWitness {
            n,
            s,
            a: &form.zeta_coeff * &scale,
            b: scaled.to_integer(),
            alpha_coeff: form.zeta_coeff,
            beta: form.constant,
            lcm,
        })
    }

    /// Enclosure of `alpha_coeff·ζ(s) + beta` of width at most `2^-bits`.
    pub fn value_enclosure(&self, bits: u32) -> Interval {
        let guard = bit_len(&self.alpha_coeff) + 1;
        self.s
            .oracle()
            .enclosure(bits + guard)
            .scale(&Rational::from_integer(self.alpha_coeff.clone()))
            .shift(&self.beta)
    }

    /// Enclosure of `alpha_coeff·ζ(s) + beta`, refined until it excludes 0
    /// and its width is below a thousandth of its distance from 0.
    pub fn certified_value(&self, cfg: &Config) -> Result<Interval> {
        let thousand = Rational::from_integer(BigInt::from(1000));
        for bits in cfg.precisions(64) {
            let v = self.value_enclosure(bits);
            let abs = v.abs();
            if abs.certainly_positive() && abs.width() * &thousand < *abs.lo() {
                return Ok(v);
            }
        }
        Err(Error::PrecisionExhausted {
            bits: cfg.max_bits,
        })
    }

    /// `−beta / alpha_coeff`, the rational approximation of ζ(s).
    pub fn reconstruction(&self) -> Option<Rational> {
        (!self.alpha_coeff.is_zero())
            .then(|| -&self.beta / Rational::from_integer(self.alpha_coeff.clone()))
    }
}

/// The ζ(2) integral `∬ (1−y)^n P_n(x)/(1 − xy)`.
pub fn zeta2_witness(n: u32) -> Result<ZetaWitness> {
    let p = legendre_type(n);
    let size = n as usize;
    let h1 = harmonic_table(size, 1);
    let h2 = harmonic_table(size, 2);
    let mut total = ZetaForm::zero();
    for s in 0..=size {
        let ys = binomial(u64::from(n), s as u64);
        let ys = if s % 2 == 0 { ys } else { -ys };
        for (r, pr) in p.coeffs().iter().enumerate() {
            if pr.is_zero() {
                continue;
            }
            total += kernel_moment_with(&h1, &h2, r, s).scaled(&(pr * &ys));
        }
    }
    ZetaWitness::from_form(n, ZetaArg::Two, total)
}

/// The ζ(3) integral `∬ −ln(xy) P_n(x) P_n(y)/(1 − xy)`.
pub fn zeta3_witness(n: u32) -> Result<ZetaWitness> {
    let p = legendre_type(n);
    let size = n as usize;
    let h2 = harmonic_table(size, 2);
    let h3 = harmonic_table(size, 3);
    let mut total = ZetaForm::zero();
    for (r, pr) in p.coeffs().iter().enumerate() {
        for (s, ps) in p.coeffs().iter().enumerate() {
            total += log_kernel_moment_with(&h2, &h3, r, s).scaled(&(pr * ps));
        }
    }
    ZetaWitness::from_form(n, ZetaArg::Three, total)
}

/// Certified comparison `0 < |a ζ(s) + b| <= majorant`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaBoundReport {
    pub witness: ZetaWitness,
    /// Enclosure of `|a ζ(s) + b|`.
    pub lhs: Interval,
    /// Enclosure of `V(n)^2 ((√5−1)/2)^{5n} ζ(2)` or `2 V(n)^3 (√2−1)^{4n} ζ(3)`.
    pub rhs: Interval,
    /// Enclosure of `rhs − lhs`; its lower end is `>= 0`.
    pub margin: Interval,
    /// ζ(3) only: `V(n) <= 3^n`, checked exactly.
    pub lcm_below_power_of_three: Option<bool>,
    /// ζ(3) only: enclosure of `2 ζ(3) 27^n (√2−1)^{4n}`.
    pub weakened_rhs: Option<Interval>,
    /// ζ(3) only: enclosure of `2 ζ(3) (4/5)^n`.
    pub geometric_rhs: Option<Interval>,
    /// ζ(3) only: `27 (√2−1)^4 < 4/5` certified and `n >= 1`, so the
    /// weakened bound is strictly below the geometric one. At `n = 0` both
    /// equal `2 ζ(3)`.
    pub geometric_strict: Option<bool>,
}

fn golden_conjugate() -> RealOracle {
    // (√5 − 1)/2
    RealOracle::Sqrt(BigInt::from(5)).affine(
        Rational::new(BigInt::one(), BigInt::from(2)),
        Rational::new(-BigInt::one(), BigInt::from(2)),
    )
}

fn silver_conjugate() -> RealOracle {
    // √2 − 1
    RealOracle::Sqrt(BigInt::from(2)).affine(Rational::one(), -Rational::one())
}

/// Enclosure of `scale · x^exp` with width roughly `2^-bits`.
fn scaled_power(x: &RealOracle, exp: u32, scale: &BigInt, bits: u32) -> Interval {
    if exp == 0 {
        return Interval::from_integer(scale.clone());
    }
    let guard = bit_len(scale) + bit_len(&BigInt::from(exp)) + 4;
    x.enclosure(bits + guard)
        .pow(exp)
        .scale(&Rational::from_integer(scale.clone()))
}

/// Certifies `K ζ(s) − |a ζ(s) + b| >= 0`, where `majorant(bits)` encloses
/// `K`. The margin `(K − σa) ζ(s) − σb`, with `σ` the sign of `aζ(s) + b`,
/// is evaluated from one enclosure of ζ(s), so it is exactly 0 when `K = σa`
/// and `b = 0`.
fn certify_majorant(
    w: &ZetaWitness,
    majorant: impl Fn(u32) -> Interval,
    cfg: &Config,
) -> Result<(Interval, Interval, Interval)> {
    let value = w.certified_value(cfg)?;
    let sign = if value.certainly_negative() { -BigInt::one() } else { BigInt::one() };
    let sa = Interval::from_integer(&sign * &w.a);
    let sb = Rational::from_integer(&sign * &w.b);
    let scale = num_traits::pow(w.lcm.clone(), w.s.exponent() as usize);
    let lhs = value.abs().scale(&Rational::from_integer(scale));
    let guard = bit_len(&w.a) + 8;
    for bits in cfg.precisions(64) {
        let k = majorant(bits);
        let zeta = w.s.oracle().enclosure(bits + guard);
        let margin = (&(&k - &sa) * &zeta).shift(&-sb.clone());
        if margin.lo() >= &Rational::zero() {
            return Ok((lhs, &k * &zeta, margin));
        }
        if margin.certainly_negative() {
            return Err(Error::CertificationFailed(format!(
                "bound violated at n = {}: margin {margin}",
                w.n
            )));
        }
    }
    Err(Error::CertificationFailed(format!(
        "bound inconclusive at n = {} with {} bits",
        w.n, cfg.max_bits
    )))
}

/// `0 < |a_n ζ(2) + b_n| <= V(n)^2 ((√5−1)/2)^{5n} ζ(2)`.
pub fn check_zeta2_bound(n: u32, cfg: &Config) -> Result<ZetaBoundReport> {
    let w = zeta2_witness(n)?;
    let phi = golden_conjugate();
    let v2 = &w.lcm * &w.lcm;
    let (lhs, rhs, margin) = certify_majorant(&w, |bits| scaled_power(&phi, 5 * n, &v2, bits), cfg)?;
    Ok(ZetaBoundReport {
        witness: w,
        lhs,
        rhs,
        margin,
        lcm_below_power_of_three: None,
        weakened_rhs: None,
        geometric_rhs: None,
        geometric_strict: None,
    })
}

/// `0 < |a_n ζ(3) + b_n| <= 2 V(n)^3 (√2−1)^{4n} ζ(3)
///  <= 2 ζ(3) 27^n (√2−1)^{4n} < 2 ζ(3) (4/5)^n`, the middle step by the
/// exact check `V(n) <= 3^n` and the last (for `n >= 1`) by
/// `27 (√2−1)^4 < 4/5`.
pub fn check_zeta3_bound(n: u32, cfg: &Config) -> Result<ZetaBoundReport> {
    let w = zeta3_witness(n)?;
    if w.lcm > num_traits::pow(BigInt::from(3), n as usize) {
        return Err(Error::V3BoundFailed { n: u64::from(n) });
    }
    let silver = silver_conjugate();
    let two_v3 = num_traits::pow(w.lcm.clone(), 3) * 2u32;
    let (lhs, rhs, margin) =
        certify_majorant(&w, |bits| scaled_power(&silver, 4 * n, &two_v3, bits), cfg)?;

    let bits = 128;
    let zeta3 = RealOracle::Zeta3.enclosure(bits);
    let weakened = &scaled_power(&silver, 4 * n, &(num_traits::pow(BigInt::from(27), n as usize) * 2u32), bits) * &zeta3;
    let geometric = zeta3.scale(&(Rational::new(BigInt::from(4), BigInt::from(5)).pow(n as i32) * Rational::from_integer(BigInt::from(2))));
    let ratio = scaled_power(&silver, 4, &BigInt::from(27), bits);
    let strict = n >= 1 && ratio.hi() < &Rational::new(BigInt::from(4), BigInt::from(5));
    Ok(ZetaBoundReport {
        witness: w,
        lhs,
        rhs,
        margin,
        lcm_below_power_of_three: Some(true),
        weakened_rhs: Some(weakened),
        geometric_rhs: Some(geometric),
        geometric_strict: Some(strict),
    })
}

/// Outcome of the exact check `V(n) <= 3^n` for `1 <= n <= limit`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LcmGrowthReport {
    pub limit: u64,
    /// Prime powers `<= limit`, the only `n` where `V` changes.
    pub prime_powers: u64,
    pub first_failure: Option<u64>,
}

impl LcmGrowthReport {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Checks `V(n) <= 3^n` for every `1 <= n <= limit`. `V` only grows at prime
/// powers while `3^n` grows at every step, so those `n` suffice.
pub fn check_lcm_growth(limit: u64) -> LcmGrowthReport {
    let mut events: Vec<(u64, u64)> = Vec::new();
    for p in crate::exactnum::primes_upto(limit) {
        let mut q = p;
        loop {
            events.push((q, p));
            match q.checked_mul(p) {
                Some(next) if next <= limit => q = next,
                _ => break,
            }
        }
    }
    events.sort_unstable();
    let three = BigInt::from(3);
    let mut lcm = BigInt::one();
    let mut power = three.clone();
    let mut at = 1u64;
    let mut report = LcmGrowthReport {
        limit,
        prime_powers: events.len() as u64,
        first_failure: None,
    };
    for (n, p) in events {
        power *= num_traits::pow(three.clone(), (n - at) as usize);
        at = n;
        lcm *= p;
        if lcm > power {
            report.first_failure = Some(n);
            break;
        }
    }
    report
}

/// `V(n)` for `n = 1..=limit`, as `(n, V(n))` pairs.
pub fn lcm_values(limit: u64) -> impl Iterator<Item = (u64, BigInt)> {
    LcmSequence::new(limit)
}

/// The integrand whose maximum over the open unit cube bounds the decay.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kernel {
    /// `x(1−x) y(1−y) / (1 − xy)`, maximum `((√5−1)/2)^5`.
    Zeta2Kernel,
    /// `x(1−x) y(1−y) w(1−w) / (1 − (1 − xy) w)`, maximum `(√2−1)^4`.
    Zeta3Kernel,
}

impl std::str::FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zeta2-kernel" | "zeta2" => Ok(Kernel::Zeta2Kernel),
            "zeta3-kernel" | "zeta3" => Ok(Kernel::Zeta3Kernel),
            _ => Err(Error::InvalidInput(format!("unknown kernel {s:?}"))),
        }
    }
}

impl Kernel {
    fn dim(self) -> usize {
        match self {
            Kernel::Zeta2Kernel => 2,
            Kernel::Zeta3Kernel => 3,
        }
    }

    fn eval_f64(self, p: &[f64]) -> f64 {
        let (x, y) = (p[0], p[1]);
        let base = x * (1.0 - x) * y * (1.0 - y);
        match self {
            Kernel::Zeta2Kernel => base / (1.0 - x * y),
            Kernel::Zeta3Kernel => base * p[2] * (1.0 - p[2]) / (1.0 - (1.0 - x * y) * p[2]),
        }
    }

    /// Exact value at an interior rational point.
    fn eval_exact(self, p: &[Rational]) -> Rational {
        let one = Rational::one();
        let (x, y) = (&p[0], &p[1]);
        let base = x * (&one - x) * y * (&one - y);
        match self {
            Kernel::Zeta2Kernel => base / (&one - x * y),
            Kernel::Zeta3Kernel => {
                let w = &p[2];
                base * w * (&one - w) / (&one - (&one - x * y) * w)
            }
        }
    }

    /// Enclosure of the closed-form maximum.
    fn bound(self, bits: u32) -> Interval {
        match self {
            Kernel::Zeta2Kernel => scaled_power(&golden_conjugate(), 5, &BigInt::one(), bits),
            Kernel::Zeta3Kernel => scaled_power(&silver_conjugate(), 4, &BigInt::one(), bits),
        }
    }
}

/// Grid search for the kernel maximum, refined locally and re-checked in
/// exact arithmetic against the closed-form bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelMaxReport {
    pub kernel: Kernel,
    pub grid: u32,
    /// Point attaining the largest value found.
    #[serde(serialize_with = "serde_dec::rational_vec")]
    pub argmax: Vec<Rational>,
    /// Exact kernel value at `argmax`.
    #[serde(serialize_with = "serde_dec::rational")]
    pub max_found: Rational,
    pub bound: Interval,
    /// Points evaluated exactly against the bound.
    pub exact_checks: usize,
    /// Every exactly checked value is certified strictly below the bound.
    pub below_bound: bool,
}

impl KernelMaxReport {
    /// `[max_found, bound]`, which contains the true maximum.
    pub fn enclosure(&self) -> Interval {
        Interval::new(self.max_found.clone(), self.bound.hi().clone())
    }
}

fn refine_locally(kernel: Kernel, start: &[f64], grid: u32) -> Vec<f64> {
    let mut p = start.to_vec();
    let mut best = kernel.eval_f64(&p);
    let mut step = 1.0 / f64::from(grid);
    while step > 1e-12 {
        let mut improved = false;
        for d in 0..p.len() {
            for delta in [step, -step] {
                let mut q = p.clone();
                q[d] += delta;
                if q[d] <= 0.0 || q[d] >= 1.0 {
                    continue;
                }
                let v = kernel.eval_f64(&q);
                if v > best {
                    best = v;
                    p = q;
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    p
}

pub fn kernel_max_estimate(kernel: Kernel, grid: u32, cfg: &Config) -> Result<KernelMaxReport> {
    if grid < 2 {
        return Err(Error::InvalidInput("grid must be at least 2".into()));
    }
    let dim = kernel.dim();
    let bound_f64 = kernel.bound(64).approx_f64();
    // interior grid points; the kernel vanishes on the boundary
    let interior = grid as usize - 1;
    let total = interior.pow(dim as u32);
    let point = |mut index: usize| -> Vec<f64> {
        let mut p = vec![0.0; dim];
        for c in p.iter_mut().rev() {
            *c = (index % interior + 1) as f64 / f64::from(grid);
            index /= interior;
        }
        p
    };
    let mut scored: Vec<(f64, usize)> = (0..total).map(|i| (kernel.eval_f64(&point(i)), i)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let near = scored
        .iter()
        .take_while(|(v, _)| *v >= bound_f64 * (1.0 - 1e-9))
        .count();
    let exact_point = |p: &[f64]| -> Vec<Rational> {
        p.iter().map(|&c| Rational::from_float(c).expect("finite")).collect()
    };
    let mut candidates: Vec<Vec<Rational>> = scored
        .iter()
        .take(near.max(8))
        .map(|&(_, i)| exact_point(&point(i)))
        .collect();
    for &(_, i) in scored.iter().take(4) {
        candidates.push(exact_point(&refine_locally(kernel, &point(i), grid)));
    }

    let mut below = true;
    let mut bound = kernel.bound(64);
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    for point in &candidates {
        let v = kernel.eval_exact(point);
        let mut certified = false;
        for bits in cfg.precisions(64) {
            bound = kernel.bound(bits);
            if &v < bound.lo() {
                certified = true;
                break;
            }
            if &v > bound.hi() {
                break;
            }
        }
        below &= certified;
        if best.as_ref().is_none_or(|(b, _)| &v > b) {
            best = Some((v, point.clone()));
        }
    }
    let (max_found, argmax) = best.expect("at least one candidate");
    Ok(KernelMaxReport {
        kernel,
        grid,
        argmax,
        max_found,
        bound: kernel.bound(64).hull(&bound),
        exact_checks: candidates.len(),
        below_bound: below,
    })
}
