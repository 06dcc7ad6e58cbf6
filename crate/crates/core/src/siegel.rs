//! Siegel's lemma: an integer system of `M < L` equations in `L` unknowns
//! with entries bounded by `A` has a nonzero integer solution with
//! `max|x_ℓ| <= N^{M/L}`, where `N = [(2LA)^{L/(L−M)}] + 1`.

use std::collections::HashMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::exactnum::{root_floor, serde_dec, BigInt, Rational};
use crate::{Config, Error, Result};

/// `M × L` integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntLinearSystem {
    rows: usize,
    cols: usize,
    #[serde(serialize_with = "matrix")]
    entries: Vec<Vec<BigInt>>,
}

fn matrix<S: serde::Serializer>(m: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for row in m {
        seq.serialize_element(&row.iter().map(ToString::to_string).collect::<Vec<_>>())?;
    }
    seq.end()
}

impl IntLinearSystem {
    pub fn new(entries: Vec<Vec<BigInt>>) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionError("empty system".into()));
        }
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionError("ragged system".into()));
        }
        Ok(IntLinearSystem {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_i64(entries: &[&[i64]]) -> Result<Self> {
        IntLinearSystem::new(
            entries
                .iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    /// `A = max |a_{mℓ}|`.
    pub fn max_abs(&self) -> BigInt {
        self.entries
            .iter()
            .flatten()
            .map(Signed::abs)
            .max()
            .unwrap_or_default()
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, v)| a * v).sum())
            .collect()
    }

    pub fn annihilates(&self, x: &[BigInt]) -> bool {
        self.apply(x).iter().all(Zero::is_zero)
    }

    fn require_underdetermined(&self) -> Result<()> {
        if self.rows >= self.cols {
            return Err(Error::DimensionError(format!(
                "need fewer equations than unknowns, got M = {}, L = {}",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    /// `(N, P)` with `N = [(2LA)^{L/(L−M)}] + 1` and `P = [N^{M/L}]`.
    pub fn height_parameters(&self) -> (BigInt, BigInt) {
        let (m, l) = (self.rows, self.cols);
        let two_la = self.max_abs() * BigInt::from(2 * l);
        let big_n: BigInt = root_floor(&num_traits::pow(two_la, l), (l - m) as u32) + 1;
        let p = root_floor(&num_traits::pow(big_n.clone(), m), l as u32);
        (big_n, p)
    }
}

/// Nonzero `x` with `Ax = 0` and `max|x_ℓ|^L <= N^M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SiegelSolution {
    #[serde(serialize_with = "serde_dec::bigint_vec")]
    pub x: Vec<BigInt>,
    /// `N = [(2LA)^{L/(L−M)}] + 1`.
    #[serde(serialize_with = "serde_dec::bigint")]
    pub n_param: BigInt,
    /// `P = [N^{M/L}]`, the largest integer not exceeding the height bound.
    #[serde(serialize_with = "serde_dec::bigint")]
    pub bound: BigInt,
    /// The box was too large and the elimination search produced `x`.
    pub elimination_fallback: bool,
}

impl SiegelSolution {
    pub fn height(&self) -> BigInt {
        max_norm(&self.x)
    }

    /// Exact check `max|x_ℓ|^L <= N^M`.
    pub fn within_bound(&self, rows: usize) -> bool {
        let l = self.x.len();
        num_traits::pow(self.height(), l) <= num_traits::pow(self.n_param.clone(), rows)
    }
}

fn max_norm(x: &[BigInt]) -> BigInt {
    x.iter().map(Signed::abs).max().unwrap_or_default()
}

fn unit_vector(l: usize) -> Vec<BigInt> {
    let mut x = vec![BigInt::zero(); l];
    x[0] = BigInt::one();
    x
}

/// Small nonzero integer kernel vector.
///
/// The tuples of the box `0 <= n_ℓ <= P` are enumerated lexicographically
/// and bucketed by their exact image `An`; there are more tuples than
/// possible images, so two collide and their difference is the answer. A
/// box beyond the enumeration cap is replaced by an elimination search over
/// the free variables.
pub fn siegel_solve(system: &IntLinearSystem, cfg: &Config) -> Result<SiegelSolution> {
    system.require_underdetermined()?;
    let (big_n, p) = system.height_parameters();
    if system.max_abs().is_zero() {
        return Ok(SiegelSolution {
            x: unit_vector(system.cols),
            n_param: big_n,
            bound: p,
            elimination_fallback: false,
        });
    }
    let box_size = num_traits::pow(&p + 1u32, system.cols);
    let (x, fallback) = if box_size <= BigInt::from(cfg.enumeration_cap) {
        (box_collision(system, &p)?, false)
    } else {
        (elimination_search(system, &p, cfg)?, true)
    };
    let solution = SiegelSolution {
        x,
        n_param: big_n,
        bound: p,
        elimination_fallback: fallback,
    };
    if solution.x.iter().all(Zero::is_zero)
        || !system.annihilates(&solution.x)
        || !solution.within_bound(system.rows)
    {
        return Err(Error::CertificationFailed(format!(
            "kernel vector {:?} failed verification",
            solution.x
        )));
    }
    Ok(solution)
}

fn box_collision(system: &IntLinearSystem, p: &BigInt) -> Result<Vec<BigInt>> {
    let l = system.cols;
    let p = p
        .to_i64()
        .ok_or_else(|| Error::InvalidInput("box bound out of range".into()))?;
    let mut seen: HashMap<Vec<BigInt>, Vec<i64>> = HashMap::new();
    let mut n = vec![0i64; l];
    loop {
        let nb: Vec<BigInt> = n.iter().map(|&v| BigInt::from(v)).collect();
        let image = system.apply(&nb);
        if let Some(prev) = seen.get(&image) {
            return Ok(n.iter().zip(prev).map(|(a, b)| BigInt::from(a - b)).collect());
        }
        seen.insert(image, n.clone());
        // lexicographic successor in [0, P]^L
        let mut d = l;
        loop {
            if d == 0 {
                return Err(Error::CertificationFailed(
                    "box exhausted without a collision".into(),
                ));
            }
            d -= 1;
            if n[d] < p {
                n[d] += 1;
                break;
            }
            n[d] = 0;
        }
    }
}

/// Reduced row echelon form over the rationals; returns the rows and the
/// pivot column of each.
fn rref(system: &IntLinearSystem) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut a: Vec<Vec<Rational>> = system
        .entries
        .iter()
        .map(|r| r.iter().map(|v| Rational::from_integer(v.clone())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..system.cols {
        let Some(k) = (row..a.len()).find(|&k| !a[k][col].is_zero()) else {
            continue;
        };
        a.swap(row, k);
        let inv = a[row][col].recip();
        for v in &mut a[row] {
            *v *= &inv;
        }
        let pivot_row = a[row].clone();
        for (k, r) in a.iter_mut().enumerate() {
            if k != row && !r[col].is_zero() {
                let f = r[col].clone();
                for (x, pv) in r.iter_mut().zip(&pivot_row) {
                    *x -= &f * pv;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    a.truncate(row);
    (a, pivots)
}

/// Integer kernel vectors have integer free coordinates; free coordinate
/// vectors are tried in increasing max norm and the first one whose pivot
/// coordinates are integers within `P` is returned.
fn elimination_search(system: &IntLinearSystem, p: &BigInt, cfg: &Config) -> Result<Vec<BigInt>> {
    let (rows, pivots) = rref(system);
    let free: Vec<usize> = (0..system.cols).filter(|c| !pivots.contains(c)).collect();
    let p_i64 = p.to_i64().unwrap_or(i64::MAX);
    let mut visited: u64 = 0;
    for k in 1..=p_i64 {
        let mut found = None;
        for_each_shell_vector(free.len(), k, &mut |t| {
            visited += 1;
            if visited > cfg.enumeration_cap {
                return true;
            }
            let mut x = vec![BigInt::zero(); system.cols];
            for (&c, &v) in free.iter().zip(t) {
                x[c] = BigInt::from(v);
            }
            for (row, &pc) in rows.iter().zip(&pivots) {
                let mut v = Rational::zero();
                for (&c, &tv) in free.iter().zip(t) {
                    v -= &row[c] * Rational::from_integer(BigInt::from(tv));
                }
                if !v.is_integer() || v.abs() > Rational::from_integer(p.clone()) {
                    return false;
                }
                x[pc] = v.to_integer();
            }
            found = Some(x);
            true
        });
        if let Some(x) = found {
            return Ok(x);
        }
        if visited > cfg.enumeration_cap {
            break;
        }
    }
    Err(Error::InfeasibleEnumeration {
        size: format!("more than {} free-variable candidates", cfg.enumeration_cap),
        cap: cfg.enumeration_cap,
    })
}

/// Calls `f` on every `t ∈ Z^d` with `max|t_i| = k` whose first nonzero
/// entry is positive, in lexicographic order, until `f` returns true.
fn for_each_shell_vector(d: usize, k: i64, f: &mut dyn FnMut(&[i64]) -> bool) -> bool {
    fn rec(t: &mut Vec<i64>, d: usize, k: i64, leading: bool, hit: bool, f: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        if t.len() == d {
            return hit && f(t);
        }
        let lo = if leading { 0 } else { -k };
        for v in lo..=k {
            t.push(v);
            let stop = rec(t, d, k, leading && v == 0, hit || v.abs() == k, f);
            t.pop();
            if stop {
                return true;
            }
        }
        false
    }
    rec(&mut Vec::with_capacity(d), d, k, true, false, f)
}

/// Smallest-height nonzero kernel vector with `max|x_ℓ| <= cap`, by direct
/// enumeration of each shell `max|x_ℓ| = k` with the first nonzero entry
/// positive.
pub fn siegel_brute_min(system: &IntLinearSystem, cap: u64) -> Result<Option<Vec<BigInt>>> {
    system.require_underdetermined()?;
    let cap = i64::try_from(cap).map_err(|_| Error::InvalidInput("cap out of range".into()))?;
    let small: Option<Vec<Vec<i64>>> = system
        .entries
        .iter()
        .map(|r| r.iter().map(ToPrimitive::to_i64).collect())
        .collect();
    for k in 1..=cap {
        let mut found = None;
        for_each_shell_vector(system.cols, k, &mut |t| {
            let hit = match &small {
                Some(rows) => rows.iter().all(|r| {
                    r.iter().zip(t).map(|(&a, &v)| i128::from(a) * i128::from(v)).sum::<i128>() == 0
                }),
                None => system.annihilates(&t.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>()),
            };
            if hit {
                found = Some(t.iter().map(|&v| BigInt::from(v)).collect());
            }
            hit
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}
