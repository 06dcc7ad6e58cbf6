//! Pigeonhole approximation: Dirichlet's theorem in one dimension,
//! simultaneous approximation, small values of linear forms, the
//! multidimensional version, and the infinite stream of good rational
//! approximations of an irrational number.
//!
//! Each construction follows the pigeonhole argument directly: fractional
//! parts are bucketed into `N` (or `N^M`) half-open cells and the first
//! collision, in lexicographic enumeration order, yields the answer. The
//! returned inequalities are then certified independently by interval
//! arithmetic on fresh enclosures.

mod scaled;

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use serde::Serialize;

use crate::exactnum::{
    bit_len, ceil, floor, rational_power_enclosure, root_floor, serde_dec, BigInt, Interval,
    Rational, RealOracle,
};
use crate::{Config, Error, Result};
use scaled::ScaledMatrix;

/// `(n, p)` with `1 <= n <= N` and certified `|nα − p| < 1/N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproxResult {
    pub n: u64,
    #[serde(serialize_with = "serde_dec::bigint")]
    pub p: BigInt,
    /// Enclosure of `|nα − p|`.
    pub certified_error: Interval,
}

/// Nonzero `n ∈ Z^L` and `p ∈ Z^M` with every `|Σ_ℓ α_{mℓ} n_ℓ − p_m| < 1/N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiApproxResult {
    #[serde(serialize_with = "serde_dec::bigint_vec")]
    pub n: Vec<BigInt>,
    #[serde(serialize_with = "serde_dec::bigint_vec")]
    pub p: Vec<BigInt>,
    /// Enclosures of `|Σ_ℓ α_{mℓ} n_ℓ − p_m|`, one per row.
    pub certified_errors: Vec<Interval>,
    /// `P = floor(N^{M/L})`; every `|n_ℓ| <= P`.
    #[serde(serialize_with = "serde_dec::bigint")]
    pub box_bound: BigInt,
    /// True when bucket membership could not be decided and the result came
    /// from the exhaustive certified search instead.
    pub exhaustive_fallback: bool,
}

/// Nonzero `x ∈ Z^L` making every linear form `Σ_ℓ α_{mℓ} x_ℓ` small.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearFormResult {
    #[serde(serialize_with = "serde_dec::bigint_vec")]
    pub x: Vec<BigInt>,
    /// Enclosures of `|Σ_ℓ α_{mℓ} x_ℓ|`.
    pub certified_values: Vec<Interval>,
    /// Enclosure of the guaranteed bound `2·L·A·N^{M/L−1}` (`L·A` for `N = 1`).
    pub bound: Interval,
    #[serde(serialize_with = "serde_dec::bigint")]
    pub box_bound: BigInt,
}

/// Checks that `coeffs` is a non-empty rectangular matrix; returns `(M, L)`.
pub fn matrix_dims(coeffs: &[Vec<RealOracle>]) -> Result<(usize, usize)> {
    let m = coeffs.len();
    let l = coeffs.first().map_or(0, Vec::len);
    if m == 0 || l == 0 {
        return Err(Error::DimensionError("empty coefficient matrix".into()));
    }
    if coeffs.iter().any(|row| row.len() != l) {
        return Err(Error::DimensionError("ragged coefficient matrix".into()));
    }
    Ok((m, l))
}

fn check_cap(size: &BigInt, cfg: &Config) -> Result<()> {
    if *size > BigInt::from(cfg.enumeration_cap) {
        return Err(Error::InfeasibleEnumeration {
            size: size.to_string(),
            cap: cfg.enumeration_cap,
        });
    }
    Ok(())
}

/// Enclosure of `|Σ α_ℓ n_ℓ − p|` with width at most `2^-bits`.
pub fn form_error(alphas: &[RealOracle], n: &[BigInt], p: &BigInt, bits: u32) -> Interval {
    let mut acc = Interval::from_integer(-p.clone());
    for (a, k) in alphas.iter().zip(n) {
        if k.is_zero() {
            continue;
        }
        let guard = bit_len(k) + bit_len(&BigInt::from(alphas.len()));
        acc = &acc + &a.enclosure(bits + guard).scale(&Rational::from_integer(k.clone()));
    }
    acc.abs()
}

/// Refines `|Σ α_ℓ n_ℓ − p|` until its enclosure is strictly below `bound`.
fn certify_below(
    alphas: &[RealOracle],
    n: &[BigInt],
    p: &BigInt,
    bound: &Rational,
    start: u32,
    cfg: &Config,
) -> Result<Interval> {
    for bits in cfg.precisions(start) {
        let e = form_error(alphas, n, p, bits);
        if e.hi() < bound {
            return Ok(e);
        }
        if e.is_point() {
            return Err(Error::CertificationFailed(format!(
                "exact value {} is not below {bound}",
                e.lo()
            )));
        }
    }
    Err(Error::PrecisionExhausted {
        bits: cfg.max_bits,
    })
}

fn start_bits(spread: &BigInt) -> u32 {
    2 * bit_len(spread) + 16
}

/// Dirichlet's theorem: `1 <= n <= N` and `p` with `|nα − p| < 1/N`.
///
/// The fractional parts of `0, α, 2α, ..., Nα` are dropped into the `N` cells
/// `[(m−1)/N, m/N)`; the first pair `k < j` sharing a cell gives
/// `n = j − k` and `p = [jα] − [kα]`.
pub fn dirichlet_approx(alpha: &RealOracle, big_n: u64, cfg: &Config) -> Result<ApproxResult> {
    if big_n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    check_cap(&BigInt::from(big_n + 1), cfg)?;
    let alphas = [alpha.clone()];
    let bound = Rational::new(BigInt::one(), BigInt::from(big_n));
    let start = start_bits(&BigInt::from(big_n));
    for bits in cfg.precisions(start) {
        let scaled = ScaledMatrix::new(&[vec![alpha.clone()]], bits);
        let resolve = |j: u64| scaled_multiple_floor(alpha, j, big_n, 2 * bits, cfg);
        if let Some((k, j, fk, fj)) = scan_fractional_parts(&scaled, big_n, &resolve) {
            let n = j - k;
            let p = fj - fk;
            let certified_error =
                certify_below(&alphas, &[BigInt::from(n)], &p, &bound, bits, cfg)?;
            return Ok(ApproxResult {
                n,
                p,
                certified_error,
            });
        }
    }
    // bucket membership undecidable at max precision: certified search
    let top = alpha.enclosure(cfg.max_bits);
    for n in 1..=big_n {
        let nb = BigInt::from(n);
        let scaled = top.scale(&Rational::from_integer(nb.clone()));
        let mut p = floor(scaled.lo());
        while p <= ceil(scaled.hi()) {
            let e = form_error(&alphas, std::slice::from_ref(&nb), &p, cfg.max_bits);
            if e.hi() < &bound {
                return Ok(ApproxResult {
                    n,
                    p,
                    certified_error: e,
                });
            }
            p += 1;
        }
    }
    Err(Error::PrecisionExhausted {
        bits: cfg.max_bits,
    })
}

/// Certified `floor(N·jα)` from fresh enclosures starting at `start` bits.
fn scaled_multiple_floor(alpha: &RealOracle, j: u64, big_n: u64, start: u32, cfg: &Config) -> Option<BigInt> {
    let factor = Rational::from_integer(BigInt::from(j) * big_n);
    cfg.precisions(start).find_map(|bits| {
        let e = alpha.enclosure(bits).scale(&factor);
        let f = floor(e.lo());
        (f == floor(e.hi())).then_some(f)
    })
}

/// First bucket collision among the fractional parts of `jα`, `j = 0..=N`,
/// as `(k, j, [kα], [jα])`. Elements whose bucket the scaled enclosure
/// leaves undecided go to `resolve`, which returns `floor(N·jα)` or `None`
/// when even that fails.
fn scan_fractional_parts(
    scaled: &ScaledMatrix,
    big_n: u64,
    resolve: &dyn Fn(u64) -> Option<BigInt>,
) -> Option<(u64, u64, BigInt, BigInt)> {
    let lo = &scaled.lo[0][0];
    let hi = &scaled.hi[0][0];
    let magnitude = bit_len(lo).max(bit_len(hi)) + 2 * bit_len(&BigInt::from(big_n + 1)) + 2;
    if magnitude < 126 && bit_len(&scaled.den) < 126 {
        let found = scan_generic::<i128>(
            lo.to_i128()?,
            hi.to_i128()?,
            scaled.den.to_i128()?,
            big_n,
            resolve,
        )?;
        return Some((found.0, found.1, found.2.into(), found.3.into()));
    }
    scan_generic::<BigInt>(lo.clone(), hi.clone(), scaled.den.clone(), big_n, resolve)
}

fn scan_generic<T>(
    lo: T,
    hi: T,
    den: T,
    big_n: u64,
    resolve: &dyn Fn(u64) -> Option<BigInt>,
) -> Option<(u64, u64, T, T)>
where
    T: Integer + Clone + FromPrimitive + ToPrimitive + TryFrom<BigInt>,
{
    const EMPTY: u32 = u32::MAX;
    let buckets = T::from_u64(big_n)?;
    // floor(N·jα) from the running enclosure [j·lo, j·hi] / den
    let cell_floor = |j: u64, x_lo: &T, x_hi: &T| -> Option<T> {
        let a = (x_lo.clone() * buckets.clone()).div_floor(&den);
        if a == (x_hi.clone() * buckets.clone()).div_floor(&den) {
            Some(a)
        } else {
            T::try_from(resolve(j)?).ok()
        }
    };
    let mut table = vec![EMPTY; big_n as usize];
    let mut x_lo = T::zero();
    let mut x_hi = T::zero();
    for j in 0..=big_n {
        if j > 0 {
            x_lo = x_lo + lo.clone();
            x_hi = x_hi + hi.clone();
        }
        let m = cell_floor(j, &x_lo, &x_hi)?;
        let (f, cell) = m.div_mod_floor(&buckets);
        let cell = cell.to_usize()?;
        match table[cell] {
            EMPTY => table[cell] = j as u32,
            k => {
                let k = k as u64;
                let kt = T::from_u64(k)?;
                let mk = cell_floor(k, &(lo.clone() * kt.clone()), &(hi.clone() * kt))?;
                return Some((k, j, mk.div_floor(&buckets), f));
            }
        }
    }
    None
}

/// Multidimensional Dirichlet approximation for an `M × L` real matrix.
///
/// With `P = floor(N^{M/L})`, the `(P+1)^L` tuples `0 <= n_ℓ <= P` are
/// enumerated lexicographically and the `M`-vectors of fractional parts of
/// `Σ_ℓ α_{mℓ} n_ℓ` are bucketed into the `N^M` subcubes of side `1/N`.
/// Since `(P+1)^L > N^M`, two tuples collide; their difference is returned.
pub fn multidim_approx(
    coeffs: &[Vec<RealOracle>],
    big_n: u64,
    cfg: &Config,
) -> Result<MultiApproxResult> {
    let (rows, cols) = matrix_dims(coeffs)?;
    if big_n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    let nb = BigInt::from(big_n);
    let box_bound = root_floor(&num_traits::pow(nb.clone(), rows), cols as u32);
    let side = &box_bound + 1u32;
    check_cap(&num_traits::pow(side.clone(), cols), cfg)?;
    let side = side
        .to_u64()
        .ok_or_else(|| Error::InfeasibleEnumeration {
            size: box_bound.to_string(),
            cap: cfg.enumeration_cap,
        })?;
    let bound = Rational::new(BigInt::one(), nb.clone());
    let start = start_bits(&(&nb * &box_bound * BigInt::from(cols)));

    for bits in cfg.precisions(start) {
        let scaled = ScaledMatrix::new(coeffs, bits);
        let Some((n, p)) = scan_box(&scaled, rows, cols, side, &nb) else {
            continue;
        };
        let certified_errors = coeffs
            .iter()
            .zip(&p)
            .map(|(row, pm)| certify_below(row, &n, pm, &bound, bits, cfg))
            .collect::<Result<Vec<_>>>()?;
        return Ok(MultiApproxResult {
            n,
            p,
            certified_errors,
            box_bound,
            exhaustive_fallback: false,
        });
    }
    exhaustive_multidim(coeffs, &nb, box_bound, cfg)
}

/// Lexicographic odometer over `[0, side)^len`.
fn advance(tuple: &mut [u64], side: u64) -> bool {
    for slot in tuple.iter_mut().rev() {
        *slot += 1;
        if *slot < side {
            return true;
        }
        *slot = 0;
    }
    false
}

fn scan_box(
    scaled: &ScaledMatrix,
    rows: usize,
    cols: usize,
    side: u64,
    buckets: &BigInt,
) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    let mut seen: HashMap<Vec<BigInt>, (Vec<BigInt>, Vec<BigInt>)> = HashMap::new();
    let mut tuple = vec![0u64; cols];
    loop {
        let n: Vec<BigInt> = tuple.iter().map(|&v| BigInt::from(v)).collect();
        let mut cells = Vec::with_capacity(rows);
        let mut floors = Vec::with_capacity(rows);
        for m in 0..rows {
            let (lo, hi) = scaled.row_form(m, &n);
            let scaled_floor = scaled.scaled_floor(&lo, &hi, buckets)?;
            let (f, cell) = scaled_floor.div_mod_floor(buckets);
            floors.push(f);
            cells.push(cell);
        }
        if let Some((earlier, earlier_floors)) = seen.get(&cells) {
            let diff = n.iter().zip(earlier).map(|(a, b)| a - b).collect();
            let p = floors.iter().zip(earlier_floors).map(|(a, b)| a - b).collect();
            return Some((diff, p));
        }
        seen.insert(cells, (n, floors));
        if !advance(&mut tuple, side) {
            // unreachable when (P+1)^L > N^M
            return None;
        }
    }
}

/// Certified search over the symmetric box `[-P, P]^L \ {0}`.
fn exhaustive_multidim(
    coeffs: &[Vec<RealOracle>],
    nb: &BigInt,
    box_bound: BigInt,
    cfg: &Config,
) -> Result<MultiApproxResult> {
    let cols = coeffs[0].len();
    let width = &box_bound * 2u32 + 1u32;
    check_cap(&num_traits::pow(width.clone(), cols), cfg)?;
    let side = width.to_u64().unwrap_or(u64::MAX);
    let bound = Rational::new(BigInt::one(), nb.clone());
    let top = ScaledMatrix::new(coeffs, cfg.max_bits);
    let mut tuple = vec![0u64; cols];
    while advance(&mut tuple, side) {
        let n: Vec<BigInt> = tuple
            .iter()
            .map(|&v| BigInt::from(v) - &box_bound)
            .collect();
        if n.iter().all(Zero::is_zero) {
            continue;
        }
        let mut p = Vec::with_capacity(coeffs.len());
        let mut errors = Vec::with_capacity(coeffs.len());
        for (m, row) in coeffs.iter().enumerate() {
            let (lo, hi) = top.row_form(m, &n);
            let guess = (&lo + &hi).div_floor(&(&top.den * 2u32));
            let hit = [guess.clone(), &guess + 1u32]
                .into_iter()
                .map(|pm| (form_error(row, &n, &pm, cfg.max_bits), pm))
                .find(|(e, _)| e.hi() < &bound);
            match hit {
                Some((e, pm)) => {
                    p.push(pm);
                    errors.push(e);
                }
                None => break,
            }
        }
        if p.len() == coeffs.len() {
            return Ok(MultiApproxResult {
                n,
                p,
                certified_errors: errors,
                box_bound,
                exhaustive_fallback: true,
            });
        }
    }
    Err(Error::PrecisionExhausted {
        bits: cfg.max_bits,
    })
}

/// One denominator `1 <= n <= N^L` for all of `α_1..α_L` with
/// `|α_ℓ − p_ℓ/n| < 1/(N n)`: the `L × 1` case of [`multidim_approx`].
pub fn simultaneous_approx(
    alphas: &[RealOracle],
    big_n: u64,
    cfg: &Config,
) -> Result<MultiApproxResult> {
    if alphas.is_empty() {
        return Err(Error::DimensionError("no reals given".into()));
    }
    let column: Vec<Vec<RealOracle>> = alphas.iter().map(|a| vec![a.clone()]).collect();
    multidim_approx(&column, big_n, cfg)
}

/// Nonzero `(n_1..n_L)` with `max|n_ℓ| <= N^{1/L}` and an integer `p` with
/// `|Σ α_ℓ n_ℓ − p| < 1/N`: the `1 × L` case of [`multidim_approx`].
pub fn linear_form_approx(
    alphas: &[RealOracle],
    big_n: u64,
    cfg: &Config,
) -> Result<MultiApproxResult> {
    if alphas.is_empty() {
        return Err(Error::DimensionError("no reals given".into()));
    }
    multidim_approx(&[alphas.to_vec()], big_n, cfg)
}

/// Enclosure of `A = max_{m,ℓ} |α_{mℓ}|`.
fn max_abs_enclosure(coeffs: &[Vec<RealOracle>], bits: u32) -> Interval {
    coeffs
        .iter()
        .flatten()
        .map(|x| x.enclosure(bits).abs())
        .reduce(|a, b| {
            Interval::new(
                a.lo().clone().max(b.lo().clone()),
                a.hi().clone().max(b.hi().clone()),
            )
        })
        .expect("non-empty matrix")
}

/// Small values of `M < L` real linear forms: nonzero `x` with
/// `max|x_ℓ| <= N^{M/L}` and every `|Σ_ℓ α_{mℓ} x_ℓ| <= 2·L·A·N^{M/L−1}`,
/// where `A` is the largest `|α_{mℓ}|`.
///
/// For `N >= 2` the matrix is scaled by a rational `κ` chosen so that the
/// integers produced by [`multidim_approx`] on `κα` are forced to vanish.
pub fn small_linear_forms(
    coeffs: &[Vec<RealOracle>],
    big_n: u64,
    cfg: &Config,
) -> Result<LinearFormResult> {
    let (rows, cols) = matrix_dims(coeffs)?;
    if rows >= cols {
        return Err(Error::DimensionError(format!(
            "need fewer forms than unknowns, got M = {rows}, L = {cols}"
        )));
    }
    if big_n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    let nb = BigInt::from(big_n);
    let box_bound = root_floor(&num_traits::pow(nb.clone(), rows), cols as u32);
    let l_rat = Rational::from_integer(BigInt::from(cols));

    let all_zero = coeffs
        .iter()
        .flatten()
        .all(|x| x.exact_value().is_some_and(|q| q.is_zero()));
    if all_zero {
        let mut x = vec![BigInt::zero(); cols];
        x[0] = BigInt::one();
        return Ok(LinearFormResult {
            x,
            certified_values: vec![Interval::zero(); rows],
            bound: Interval::zero(),
            box_bound,
        });
    }

    let x = if big_n == 1 {
        multidim_approx(coeffs, 1, cfg)?.n
    } else {
        let kappa = choose_kappa(coeffs, &nb, &box_bound, rows, cols, cfg)?;
        let scaled: Vec<Vec<RealOracle>> = coeffs
            .iter()
            .map(|row| row.iter().map(|a| a.affine(kappa.clone(), Rational::zero())).collect())
            .collect();
        let res = multidim_approx(&scaled, big_n, cfg)?;
        if res.p.iter().any(|p| !p.is_zero()) {
            return Err(Error::CertificationFailed(
                "scaled approximation produced a nonzero integer part".into(),
            ));
        }
        res.n
    };

    let zero = BigInt::zero();
    for bits in cfg.precisions(start_bits(&(&nb * BigInt::from(cols)))) {
        let a = max_abs_enclosure(coeffs, bits);
        let bound = if big_n == 1 {
            a.scale(&l_rat)
        } else {
            let root = rational_power_enclosure(&nb, rows as u32, cols as u32, bits);
            (&a * &root).scale(&(Rational::from_integer(BigInt::from(2 * cols)) / Rational::from_integer(nb.clone())))
        };
        let values: Vec<Interval> = coeffs
            .iter()
            .map(|row| form_error(row, &x, &zero, bits))
            .collect();
        if values.iter().all(|v| v.hi() <= bound.lo()) {
            return Ok(LinearFormResult {
                x,
                certified_values: values,
                bound,
                box_bound,
            });
        }
    }
    Err(Error::PrecisionExhausted {
        bits: cfg.max_bits,
    })
}

/// Rational `κ` with `κ <= (1 − 1/N)/(L·A·P)`, which forces the integer parts
/// to vanish, and `κ >= 1/(2·L·A·N^{M/L})`, which yields the stated bound.
fn choose_kappa(
    coeffs: &[Vec<RealOracle>],
    nb: &BigInt,
    box_bound: &BigInt,
    rows: usize,
    cols: usize,
    cfg: &Config,
) -> Result<Rational> {
    let l = BigInt::from(cols);
    let one = Rational::one();
    for bits in cfg.precisions(32) {
        let a = max_abs_enclosure(coeffs, bits);
        if !a.certainly_positive() {
            continue;
        }
        let root = rational_power_enclosure(nb, rows as u32, cols as u32, bits);
        let allowed = (&one - Rational::new(BigInt::one(), nb.clone()))
            / (a.hi() * Rational::from_integer(&l * box_bound));
        let needed = &one / (a.lo() * root.lo() * Rational::from_integer(&l * 2u32));
        if needed <= allowed {
            return Ok(allowed);
        }
    }
    Err(Error::PrecisionExhausted {
        bits: cfg.max_bits,
    })
}

/// Good rational approximations `p/n` (lowest terms, strictly increasing
/// denominators, each with certified `|α − p/n| < 1/n²`), produced by
/// running [`dirichlet_approx`] with `N = 1, 2, 4, ...`.
pub struct GoodApproximations<'a> {
    alpha: &'a RealOracle,
    cfg: &'a Config,
    big_n: u64,
    last_den: BigInt,
}

impl<'a> GoodApproximations<'a> {
    pub fn new(alpha: &'a RealOracle, cfg: &'a Config) -> Result<Self> {
        if !alpha.is_irrational() {
            return Err(Error::IrrationalRequired(alpha.to_string()));
        }
        Ok(GoodApproximations {
            alpha,
            cfg,
            big_n: 1,
            last_den: BigInt::zero(),
        })
    }

    fn step(&mut self) -> Result<(Rational, Interval)> {
        loop {
            let res = dirichlet_approx(self.alpha, self.big_n, self.cfg)?;
            self.big_n = self.big_n.checked_mul(2).ok_or_else(|| Error::InfeasibleEnumeration {
                size: "2^64".into(),
                cap: self.cfg.enumeration_cap,
            })?;
            let q = Rational::new(res.p, BigInt::from(res.n));
            if *q.denom() <= self.last_den {
                continue;
            }
            // |α − p/n| < 1/n²  <=>  |nα − p| < 1/n
            let bound = Rational::new(BigInt::one(), q.denom().clone());
            let err = certify_below(
                std::slice::from_ref(self.alpha),
                &[q.denom().clone()],
                q.numer(),
                &bound,
                start_bits(q.denom()),
                self.cfg,
            )?;
            self.last_den = q.denom().clone();
            return Ok((q, err));
        }
    }
}

impl Iterator for GoodApproximations<'_> {
    /// The fraction and an enclosure of `|nα − p|`.
    type Item = Result<(Rational, Interval)>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.step())
    }
}

/// The first `count` fractions of [`GoodApproximations`].
pub fn good_approx_stream(alpha: &RealOracle, count: usize, cfg: &Config) -> Result<Vec<Rational>> {
    GoodApproximations::new(alpha, cfg)?
        .take(count)
        .map(|r| r.map(|(q, _)| q))
        .collect()
}
