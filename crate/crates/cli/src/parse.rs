//! Grammar for reals, rationals and matrices on the command line.
//!
//! Reals: `rat:p/q`, `sqrt:c`, `e`, `zeta2`, `zeta3`, `cantor:<preset>[@digits]`
//! or a bare rational. Rationals: `p/q`, integers, decimals and scientific
//! notation (`1e-6`), all read exactly. Matrices: rows separated by `;` or
//! newlines, entries by `,`.

use std::path::Path;

use dirichlet_core::witness::CantorSeries;
use dirichlet_core::{BigInt, Error, Rational, RealOracle};
use num_traits::{One, Zero};

fn invalid(what: &str, s: &str) -> Error {
    Error::InvalidInput(format!("{s:?} is not {what}"))
}

pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| invalid("a rational", s))?;
        let q: BigInt = q.trim().parse().map_err(|_| invalid("a rational", s))?;
        if q.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| invalid("a rational", s))?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    let all_digits = |t: &str| t.chars().all(|c| c.is_ascii_digit());
    if int_part.is_empty() && frac_part.is_empty() || !all_digits(int_part) || !all_digits(frac_part) {
        return Err(invalid("a rational", s));
    }
    let joined = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(joined.parse::<BigInt>().map_err(|_| invalid("a rational", s))?);
    let shift = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    value *= num_traits::pow::pow(if shift >= 0 { ten.clone() } else { Rational::one() / ten }, shift.unsigned_abs() as usize);
    Ok(if negative { -value } else { value })
}

pub fn parse_real(s: &str) -> Result<RealOracle, Error> {
    let s = s.trim();
    match s {
        "e" => return Ok(RealOracle::EulerE),
        "zeta2" => return Ok(RealOracle::Zeta2),
        "zeta3" => return Ok(RealOracle::Zeta3),
        _ => {}
    }
    if let Some(q) = s.strip_prefix("rat:") {
        return parse_rational(q).map(RealOracle::rational);
    }
    if let Some(c) = s.strip_prefix("sqrt:") {
        let c: BigInt = c.trim().parse().map_err(|_| invalid("an integer radicand", s))?;
        return RealOracle::sqrt(c);
    }
    if let Some(preset) = s.strip_prefix("cantor:") {
        let (preset, digits) = match preset.split_once('@') {
            Some((p, d)) => (p, Some(d)),
            None => (preset, None),
        };
        return CantorSeries::from_preset(preset, digits).map(RealOracle::cantor);
    }
    parse_rational(s)
        .map(RealOracle::rational)
        .map_err(|_| invalid("a real (rat:p/q, sqrt:c, e, zeta2, zeta3, cantor:<preset>)", s))
}

pub fn parse_real_list(s: &str) -> Result<Vec<RealOracle>, Error> {
    s.split(',').map(parse_real).collect()
}

/// The contents of `source` when it names a file, otherwise `source` itself.
pub(crate) fn read_matrix_source(source: &str) -> Result<String, Error> {
    let path = Path::new(source);
    if path.is_file() {
        std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {source}: {e}")))
    } else {
        Ok(source.to_string())
    }
}

fn split_matrix(text: &str) -> Vec<Vec<&str>> {
    text.split([';', '\n'])
        .map(str::trim)
        .filter(|row| !row.is_empty())
        .map(|row| row.split(',').map(str::trim).collect())
        .collect()
}

pub fn parse_real_matrix(text: &str) -> Result<Vec<Vec<RealOracle>>, Error> {
    split_matrix(text)
        .into_iter()
        .map(|row| row.into_iter().map(parse_real).collect())
        .collect()
}

pub fn parse_int_matrix(text: &str) -> Result<Vec<Vec<BigInt>>, Error> {
    split_matrix(text)
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| v.parse().map_err(|_| invalid("an integer", v)))
                .collect()
        })
        .collect()
}
