//! Acceptance suite: ten end-to-end criteria, each with a wall-clock budget.
//! Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use dirichlet_core::approx::{dirichlet_approx, form_error, multidim_approx};
use dirichlet_core::exactnum::{lcm_upto, LcmSequence};
use dirichlet_core::pell::solve_pell;
use dirichlet_core::siegel::{siegel_brute_min, siegel_solve, IntLinearSystem};
use dirichlet_core::witness::{cantor_partials, find_witness, rational_obstruction, CantorSeries};
use dirichlet_core::zeta::{
    check_lcm_growth, check_zeta2_bound, check_zeta3_bound, kernel_max_estimate, zeta2_witness,
    zeta3_witness, Kernel,
};
use dirichlet_core::{BigInt, Config, Interval, Rational, RealOracle};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

fn random_oracle(rng: &mut ChaCha8Rng) -> RealOracle {
    match rng.gen_range(0..6) {
        0 => RealOracle::rational(rat(rng.gen_range(-200..=200), rng.gen_range(1..=60))),
        1 => loop {
            let c: i64 = rng.gen_range(2..=1000);
            let r = (c as f64).sqrt() as i64;
            if r * r != c {
                break RealOracle::sqrt(BigInt::from(c)).unwrap();
            }
        },
        2 => RealOracle::EulerE,
        3 => RealOracle::Zeta2,
        4 => RealOracle::Zeta3,
        _ => RealOracle::cantor(CantorSeries::factorial()),
    }
}

fn dirichlet_suite() -> Outcome {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..500 {
        let alpha = random_oracle(&mut rng);
        let big_n: u64 = rng.gen_range(1..=10_000);
        let r = dirichlet_approx(&alpha, big_n, &cfg).map_err(|e| format!("case {case}: {e}"))?;
        let bound = rat(1, big_n as i64);
        let fresh = form_error(
            std::slice::from_ref(&alpha),
            &[BigInt::from(r.n)],
            &r.p,
            160,
        );
        ensure((1..=big_n).contains(&r.n), || format!("case {case}: n = {} out of range", r.n))?;
        ensure(*r.certified_error.hi() < bound && *fresh.hi() < bound, || {
            format!("case {case}: |nα − p| not below 1/{big_n} for {alpha:?}")
        })?;
    }
    Ok("500 cases certified".into())
}

/// Every nonzero `n` in `[−P, P]^L` whose forms all lie within `1/N` of an
/// integer, judged in floating point with a safety margin.
fn box_search(alphas: &[Vec<f64>], big_n: u64, box_bound: i64) -> Vec<Vec<i64>> {
    let cols = alphas[0].len();
    let margin = 1e-9;
    let limit = 1.0 / big_n as f64 - margin;
    let mut found = Vec::new();
    let mut n = vec![-box_bound; cols];
    loop {
        if n.iter().any(|&v| v != 0) {
            let ok = alphas.iter().all(|row| {
                let s: f64 = row.iter().zip(&n).map(|(a, &k)| a * k as f64).sum();
                (s - s.round()).abs() < limit
            });
            if ok {
                found.push(n.clone());
            }
        }
        let mut i = cols;
        loop {
            if i == 0 {
                return found;
            }
            i -= 1;
            if n[i] < box_bound {
                n[i] += 1;
                break;
            }
            n[i] = -box_bound;
        }
    }
}

fn multidim_suite() -> Outcome {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut fallbacks = 0;
    for case in 0..100 {
        let rows = rng.gen_range(1..=3usize);
        let cols = rng.gen_range(1..=3usize);
        let big_n: u64 = rng.gen_range(1..=20);
        let coeffs: Vec<Vec<RealOracle>> = (0..rows)
            .map(|_| (0..cols).map(|_| random_oracle(&mut rng)).collect())
            .collect();
        let r = multidim_approx(&coeffs, big_n, &cfg).map_err(|e| format!("case {case}: {e}"))?;
        fallbacks += usize::from(r.exhaustive_fallback);
        let bound = rat(1, big_n as i64);
        // |n_ℓ| <= N^{M/L}, i.e. |n_ℓ|^L <= N^M
        let cap = num_traits::pow(BigInt::from(big_n), rows);
        ensure(!r.n.iter().all(Zero::is_zero), || format!("case {case}: zero vector"))?;
        ensure(
            r.n.iter().all(|k| num_traits::pow(k.abs(), cols) <= cap && k.abs() <= r.box_bound),
            || format!("case {case}: {:?} outside the box", r.n),
        )?;
        for (m, row) in coeffs.iter().enumerate() {
            let fresh = form_error(row, &r.n, &r.p[m], 160);
            ensure(*fresh.hi() < bound, || format!("case {case}: row {m} not within 1/N"))?;
        }
        let floats: Vec<Vec<f64>> = coeffs
            .iter()
            .map(|row| row.iter().map(|a| a.enclosure(64).approx_f64()).collect())
            .collect();
        let p = r.box_bound.to_i64().ok_or("box bound overflows")?;
        let found = box_search(&floats, big_n, p);
        ensure(!found.is_empty(), || format!("case {case}: box search found nothing"))?;
        let n: Vec<i64> = r.n.iter().map(|k| k.to_i64().unwrap()).collect();
        let neg: Vec<i64> = n.iter().map(|k| -k).collect();
        let set: HashSet<&Vec<i64>> = found.iter().collect();
        ensure(set.contains(&n) || set.contains(&neg), || {
            format!("case {case}: {n:?} not among the box search solutions")
        })?;
    }
    Ok(format!("100 matrices certified and box-checked ({fallbacks} exhaustive fallbacks)"))
}

fn isqrt(v: u128) -> u128 {
    let mut r = (v as f64).sqrt() as u128;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

fn brute_pell(c: u128, y_max: u128) -> Option<(u128, u128)> {
    (1..=y_max).find_map(|y| {
        let v = 1 + c * y * y;
        let x = isqrt(v);
        (x * x == v).then_some((x, y))
    })
}

/// Fundamental solution from the period of the continued fraction of `√c`:
/// the convergent before the end of the first period, or of the second
/// period when the length is odd.
fn period_oracle(c: i128) -> (i128, i128) {
    let a0 = isqrt(c as u128) as i128;
    let mut partials = Vec::new();
    let (mut m, mut d, mut a) = (0i128, 1i128, a0);
    loop {
        m = d * a - m;
        d = (c - m * m) / d;
        a = (a0 + m) / d;
        partials.push(a);
        if a == 2 * a0 {
            break;
        }
    }
    let period = partials.len();
    let take = if period % 2 == 0 { period - 1 } else { 2 * period - 1 };
    let (mut p0, mut p1) = (1i128, a0);
    let (mut q0, mut q1) = (0i128, 1i128);
    for k in 0..take {
        let a = partials[k % period];
        (p0, p1) = (p1, a * p1 + p0);
        (q0, q1) = (q1, a * q1 + q0);
    }
    (p1, q1)
}

fn pell_suite() -> Outcome {
    let mut matched = 0;
    let mut beyond = Vec::new();
    for c in 2u32..=100 {
        let r = (c as f64).sqrt() as u32;
        if r * r == c {
            continue;
        }
        let cert = solve_pell(&BigInt::from(c)).map_err(|e| format!("c = {c}: {e}"))?;
        let (x, y) = (&cert.fundamental.x, &cert.fundamental.y);
        ensure(x * x - BigInt::from(c) * y * y == BigInt::one(), || format!("c = {c}: norm ≠ 1"))?;
        match brute_pell(u128::from(c), 1_000_000) {
            Some((bx, by)) => {
                ensure(*x == BigInt::from(bx) && *y == BigInt::from(by), || {
                    format!("c = {c}: solver gave ({x}, {y}), brute force ({bx}, {by})")
                })?;
                matched += 1;
            }
            None => {
                ensure(*y > BigInt::from(1_000_000), || format!("c = {c}: brute force missed"))?;
                beyond.push(c);
            }
        }
    }
    let cert = solve_pell(&BigInt::from(61)).map_err(|e| e.to_string())?;
    let (ox, oy) = period_oracle(61);
    ensure(
        cert.fundamental.x == BigInt::from(ox) && cert.fundamental.y == BigInt::from(oy),
        || format!("c = 61: solver ({}, {}), period oracle ({ox}, {oy})", cert.fundamental.x, cert.fundamental.y),
    )?;
    ensure(
        BigInt::from(ox).pow(2u32) - BigInt::from(61) * BigInt::from(oy).pow(2u32) == BigInt::one(),
        || "c = 61: oracle value fails the norm check".into(),
    )?;
    Ok(format!(
        "{matched} matched brute force, {beyond:?} beyond y ≤ 10^6; c = 61 gives x = {ox}"
    ))
}

fn zeta2_suite() -> Outcome {
    let cfg = Config::default();
    let zeta2 = RealOracle::Zeta2.enclosure(96);
    let mut previous: Option<Interval> = None;
    for n in 0..=15u32 {
        let w = zeta2_witness(n).map_err(|e| format!("n = {n}: {e}"))?;
        let v2 = Rational::from_integer(w.lcm.pow(2u32));
        ensure(w.lcm == lcm_upto(u64::from(n)), || format!("n = {n}: wrong V(n)"))?;
        ensure((&w.beta * &v2).is_integer(), || format!("n = {n}: V(n)²·beta not integral"))?;
        ensure(
            w.a == &w.alpha_coeff * w.lcm.pow(2u32) && Rational::from_integer(w.b.clone()) == &w.beta * &v2,
            || format!("n = {n}: (a, b) inconsistent"),
        )?;
        let report = check_zeta2_bound(n, &cfg).map_err(|e| format!("n = {n}: {e}"))?;
        ensure(report.lhs.certainly_positive() && !report.margin.lo().is_negative(), || {
            format!("n = {n}: bound not certified")
        })?;
        let value = w.certified_value(&cfg).map_err(|e| format!("n = {n}: {e}"))?.abs();
        if let Some(prev) = &previous {
            ensure(value.certainly_lt(prev), || format!("n = {n}: no strict decrease"))?;
        }
        previous = Some(value);
        if n >= 10 {
            let rec = w.reconstruction().ok_or_else(|| format!("n = {n}: alpha_coeff = 0"))?;
            // farthest distance from rec to any point of the enclosure
            let gap = (&rec - zeta2.lo()).abs().max((&rec - zeta2.hi()).abs());
            ensure(gap < rat(1, 1_000_000), || format!("n = {n}: reconstruction off by ≥ 1e-6"))?;
        }
    }
    Ok("n = 0..15 integral, bounded, strictly decreasing; reconstruction < 1e-6 from n = 10".into())
}

fn zeta3_suite() -> Outcome {
    let cfg = Config::default();
    for n in 0..=10u32 {
        let w = zeta3_witness(n).map_err(|e| format!("n = {n}: {e}"))?;
        let v3 = Rational::from_integer(w.lcm.pow(3u32));
        ensure((&w.beta * &v3).is_integer(), || format!("n = {n}: V(n)³·beta not integral"))?;
        let r = check_zeta3_bound(n, &cfg).map_err(|e| format!("n = {n}: {e}"))?;
        let weakened = r.weakened_rhs.clone().ok_or("missing weakened bound")?;
        let geometric = r.geometric_rhs.clone().ok_or("missing geometric bound")?;
        ensure(r.lhs.certainly_positive() && !r.margin.lo().is_negative(), || {
            format!("n = {n}: first inequality not certified")
        })?;
        // rhs and weakened differ only by V(n)³ versus 27^n, compared exactly
        let enclosures_agree = n == 0 || r.rhs.certainly_le(&weakened);
        ensure(r.lcm_below_power_of_three == Some(true) && enclosures_agree, || {
            format!("n = {n}: V(n)³ ≤ 27^n step failed")
        })?;
        if n == 0 {
            // 27^0 = (4/5)^0: the two majorants coincide
            ensure(weakened.certainly_le(&geometric) || weakened == geometric, || {
                "n = 0: weakened bound exceeds the geometric one".into()
            })?;
        } else {
            ensure(weakened.certainly_lt(&geometric) && r.geometric_strict == Some(true), || {
                format!("n = {n}: geometric step not strict")
            })?;
        }
    }
    Ok("n = 0..10 chain certified (equality of the two majorants at n = 0)".into())
}

fn lcm_suite() -> Outcome {
    let report = check_lcm_growth(100_000);
    ensure(report.holds(), || format!("V(n) > 3^n at n = {:?}", report.first_failure))?;
    let mut seq = LcmSequence::new(2_000);
    let mut three = BigInt::one();
    for n in 1..=2_000u64 {
        three *= 3;
        let (k, v) = seq.next().ok_or("sequence ended early")?;
        ensure(k == n && v <= three && (n % 500 != 0 || v == lcm_upto(n)), || format!("direct check fails at n = {n}"))?;
    }
    Ok(format!("1 ≤ n ≤ 10^5 ({} prime powers); direct check to 2000 agrees", report.prime_powers))
}

fn random_system(rng: &mut ChaCha8Rng) -> IntLinearSystem {
    let cols = rng.gen_range(2..=4usize);
    let rows = rng.gen_range(1..cols);
    loop {
        let entries: Vec<Vec<BigInt>> = (0..rows)
            .map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-5..=5))).collect())
            .collect();
        if entries.iter().flatten().any(|v| !v.is_zero()) {
            return IntLinearSystem::new(entries).unwrap();
        }
    }
}

fn siegel_suite() -> Outcome {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut fallbacks = 0;
    let mut minimal = 0;
    for case in 0..200 {
        let system = random_system(&mut rng);
        let s = siegel_solve(&system, &cfg).map_err(|e| format!("case {case}: {e}"))?;
        fallbacks += usize::from(s.elimination_fallback);
        ensure(!s.x.iter().all(Zero::is_zero) && system.annihilates(&s.x), || {
            format!("case {case}: {:?} not a nonzero kernel vector", s.x)
        })?;
        ensure(s.within_bound(system.rows()), || format!("case {case}: height bound violated"))?;
        let brute_cap = match system.cols() {
            2 => 60,
            3 => 20,
            _ => 7,
        };
        let cap = s.bound.to_u64().unwrap_or(u64::MAX).min(brute_cap);
        match siegel_brute_min(&system, cap).map_err(|e| format!("case {case}: {e}"))? {
            Some(m) => {
                ensure(system.annihilates(&m), || format!("case {case}: brute result not in kernel"))?;
                let h = m.iter().map(Signed::abs).max().unwrap();
                ensure(s.height() >= h, || format!("case {case}: beat the brute-force minimum"))?;
                minimal += usize::from(s.height() == h);
            }
            None => ensure(s.height() > BigInt::from(cap), || {
                format!("case {case}: brute force found nothing up to height {cap}")
            })?,
        }
    }
    Ok(format!(
        "200 systems certified; {minimal} minimal-height, {fallbacks} elimination fallbacks"
    ))
}

fn witness_suite() -> Outcome {
    let cfg = Config::default();
    let eps = rat(1, 1_000_000);
    let mut xs = Vec::new();
    for alpha in [RealOracle::sqrt(BigInt::from(2)).unwrap(), RealOracle::EulerE, RealOracle::Zeta2] {
        let w = find_witness(&alpha, &eps, &cfg).map_err(|e| format!("{alpha:?}: {e}"))?;
        let fresh = form_error(std::slice::from_ref(&alpha), std::slice::from_ref(&w.x), &w.y, 160);
        ensure(fresh.certainly_positive() && *fresh.hi() < eps, || {
            format!("{alpha:?}: recomputed value not in (0, ε)")
        })?;
        xs.push(w.x.to_string());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let b: i64 = rng.gen_range(1..=50);
        let a: i64 = rng.gen_range(-500..=500);
        let report = rational_obstruction(&BigInt::from(a), &BigInt::from(b), 1_000)
            .map_err(|e| e.to_string())?;
        ensure(report.holds(), || format!("{a}/{b}: violations {:?}", report.violations))?;
    }
    Ok(format!("witness x = {} for √2, e, ζ(2); 200 rationals unobstructed", xs.join(", ")))
}

fn cantor_suite() -> Outcome {
    let series = CantorSeries::factorial();
    let e_minus_one = RealOracle::EulerE.enclosure(200).shift(&-Rational::one());
    for big_n in 1..=20u64 {
        let r = cantor_partials(&series, big_n).map_err(|e| format!("N = {big_n}: {e}"))?;
        let bound = rat(1, big_n as i64);
        ensure(r.bound == bound, || format!("N = {big_n}: bound {} ≠ 1/N", r.bound))?;
        let fresh = e_minus_one
            .scale(&Rational::from_integer(r.g.clone()))
            .shift(&-Rational::from_integer(r.p.clone()))
            .abs();
        for gap in [&r.certified_gap, &fresh] {
            ensure(gap.certainly_positive() && *gap.hi() <= bound, || {
                format!("N = {big_n}: gap not in (0, 1/N]")
            })?;
        }
    }
    Ok("N = 1..20 certified against an independent e enclosure".into())
}

fn kernel_suite() -> Outcome {
    let cfg = Config::default();
    let mut lines = Vec::new();
    for kernel in [Kernel::Zeta2Kernel, Kernel::Zeta3Kernel] {
        let r = kernel_max_estimate(kernel, 128, &cfg).map_err(|e| e.to_string())?;
        ensure(r.below_bound && r.max_found < *r.bound.lo(), || {
            format!("{kernel:?}: grid value {} reaches the bound", r.max_found)
        })?;
        lines.push(format!(
            "{kernel:?} max ≈ {:.12} < {:.12}",
            r.max_found.to_f64().unwrap_or(f64::NAN),
            r.bound.approx_f64()
        ));
    }
    Ok(lines.join("; "))
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { name: "dirichlet", budget: secs(10), run: dirichlet_suite },
        Criterion { name: "multidim", budget: secs(30), run: multidim_suite },
        Criterion { name: "pell", budget: secs(10), run: pell_suite },
        Criterion { name: "zeta2 witnesses", budget: secs(60), run: zeta2_suite },
        Criterion { name: "zeta3 witnesses", budget: secs(60), run: zeta3_suite },
        Criterion { name: "lcm growth", budget: secs(10), run: lcm_suite },
        Criterion { name: "siegel", budget: secs(30), run: siegel_suite },
        Criterion { name: "irrationality witnesses", budget: secs(20), run: witness_suite },
        Criterion { name: "cantor partials", budget: secs(5), run: cantor_suite },
        Criterion { name: "kernel maxima", budget: secs(10), run: kernel_suite },
    ];
    let mut failures = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(d) if elapsed <= c.budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(e) => (false, e),
        };
        failures += usize::from(!pass);
        println!(
            "{} {:>2} {:<24} {:>7.2}s / {:>3}s  {}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs(),
            detail
        );
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failures, failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
