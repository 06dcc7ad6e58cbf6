//! Argument parsing, dispatch and JSON rendering for the `dirichlet` binary.
//!
//! [`run`] is pure apart from reading matrix files and the two environment
//! variables, so the binary and the tests share one code path.

mod parse;

use std::time::Instant;

use clap::{Parser, Subcommand};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use dirichlet_core::approx::{
    dirichlet_approx, good_approx_stream, linear_form_approx, multidim_approx,
    simultaneous_approx, small_linear_forms,
};
use dirichlet_core::exactnum::lcm_upto;
use dirichlet_core::pell::{pell_powers, solve_pell, solve_unit_linear};
use dirichlet_core::siegel::{siegel_solve, IntLinearSystem};
use dirichlet_core::witness::{cantor_partials, find_witness, CantorSeries};
use dirichlet_core::zeta::{
    check_lcm_growth, check_zeta2_bound, check_zeta3_bound, kernel_max_estimate, zeta2_witness,
    zeta3_witness, Kernel, ZetaWitness,
};
use dirichlet_core::{BigInt, Config, Error, Interval, Rational};

pub use parse::{parse_int_matrix, parse_rational, parse_real, parse_real_list, parse_real_matrix};

/// Environment variable overriding [`Config::max_bits`].
pub const MAX_BITS_VAR: &str = "DIRICHLET_MAX_BITS";
/// Environment variable overriding [`Config::enumeration_cap`].
pub const ENUM_CAP_VAR: &str = "DIRICHLET_ENUM_CAP";

#[derive(Parser, Debug)]
#[command(
    name = "dirichlet",
    version,
    about = "Certified Diophantine approximation, Pell equations, irrationality witnesses and Siegel's lemma"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// 1 <= n <= N and p with |nα − p| < 1/N
    Approx {
        real: String,
        #[arg(long = "N")]
        big_n: u64,
    },
    /// Simultaneous approximation of α_1, ..., α_L (comma separated)
    Simul {
        reals: String,
        #[arg(long = "N")]
        big_n: u64,
    },
    /// Small value of the linear form Σ α_ℓ n_ℓ − p
    Linform {
        reals: String,
        #[arg(long = "N")]
        big_n: u64,
    },
    /// Multidimensional approximation for a real matrix
    Multidim {
        #[arg(long)]
        matrix: String,
        #[arg(long = "N")]
        big_n: u64,
    },
    /// Small values of M < L real linear forms
    Smallforms {
        #[arg(long)]
        matrix: String,
        #[arg(long = "N")]
        big_n: u64,
    },
    /// Good rational approximations p/n with |α − p/n| < 1/n²
    Stream {
        real: String,
        #[arg(long)]
        count: usize,
    },
    /// Fundamental solution of x² − cy² = 1
    Pell {
        #[arg(allow_hyphen_values = true)]
        c: String,
    },
    /// First k powers of the fundamental solution
    PellPowers {
        c: String,
        #[arg(long)]
        k: u32,
    },
    /// Solution of ax − by = 1
    Lineq {
        #[arg(allow_hyphen_values = true)]
        a: String,
        b: String,
    },
    /// (x, y) with 0 < |αx − y| < ε
    Witness {
        real: String,
        #[arg(long)]
        eps: String,
    },
    /// Partial sums of a Cantor series with the certified gap
    Cantor {
        /// factorial, constant:k or geometric:k
        #[arg(long)]
        g: String,
        /// Repeating digit pattern over {0, 1}
        #[arg(long)]
        z: Option<String>,
        #[arg(long = "N")]
        big_n: u64,
    },
    /// Exact ζ(2) witness a_n ζ(2) + b_n
    Zeta2 {
        #[arg(long)]
        n: u32,
    },
    /// Exact ζ(3) witness a_n ζ(3) + b_n
    Zeta3 {
        #[arg(long)]
        n: u32,
    },
    /// Certify 0 < |a_n ζ(2) + b_n| <= V(n)² ((√5−1)/2)^{5n} ζ(2)
    Zeta2Bound {
        #[arg(long)]
        n: u32,
    },
    /// Certify 0 < |a_n ζ(3) + b_n| <= 2 ζ(3) 27^n (√2−1)^{4n} < 2 ζ(3) (4/5)^n
    Zeta3Bound {
        #[arg(long)]
        n: u32,
    },
    /// Small nonzero integer solution of an integer system with M < L
    Siegel {
        #[arg(long)]
        matrix: String,
    },
    /// lcm(1, ..., n) and the check lcm(1, ..., m) <= 3^m for m <= n
    LcmUpto { n: u64 },
    /// Grid estimate of a kernel maximum against its closed form
    KernelMax {
        /// zeta2-kernel or zeta3-kernel
        kernel: String,
        #[arg(long)]
        grid: u32,
    },
}

/// Certification status of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Certified,
    ReportOnly,
    Error,
}

/// The single JSON document written to standard output.
#[derive(Debug, Serialize)]
pub struct CommandResult {
    pub command: Vec<String>,
    pub status: Status,
    pub payload: Value,
}

/// Exit code, standard output and standard error of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Reads the environment overrides; invalid values are errors.
pub fn config_from_env() -> Result<Config, Error> {
    let mut cfg = Config::default();
    if let Ok(v) = std::env::var(MAX_BITS_VAR) {
        cfg.max_bits = v
            .parse()
            .map_err(|_| Error::InvalidInput(format!("{MAX_BITS_VAR}={v} is not a bit count")))?;
    }
    if let Ok(v) = std::env::var(ENUM_CAP_VAR) {
        cfg.enumeration_cap = v
            .parse()
            .map_err(|_| Error::InvalidInput(format!("{ENUM_CAP_VAR}={v} is not a count")))?;
    }
    Ok(cfg)
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::PrecisionExhausted { .. } => "precision-exhausted",
        Error::InfeasibleEnumeration { .. } => "infeasible-enumeration",
        Error::IrrationalRequired(_) => "irrational-required",
        Error::NotCoprime { .. } => "not-coprime",
        Error::NonTrivialCase(_) => "non-trivial-case",
        Error::SquareInput(_) => "square-input",
        Error::DegenerateBound => "degenerate-bound",
        Error::CertificationFailed(_) => "certification-failed",
        Error::V3BoundFailed { .. } => "v3-bound-failed",
        Error::DimensionError(_) => "dimension-error",
        Error::InvalidInput(_) => "invalid-input",
    }
}

fn render(result: &CommandResult) -> String {
    let mut s = serde_json::to_string_pretty(result).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Runs one command line (`argv[0]` is the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let echo: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    exit_code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    exit_code: 1,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };

    let started = Instant::now();
    let outcome = config_from_env().and_then(|cfg| dispatch(&cli.command, &cfg));
    let elapsed = started.elapsed();
    match outcome {
        Ok((status, payload, summary)) => Outcome {
            exit_code: 0,
            stdout: render(&CommandResult {
                command: echo,
                status,
                payload,
            }),
            stderr: format!("{summary}\nelapsed: {:.3} ms\n", elapsed.as_secs_f64() * 1e3),
        },
        Err(e) => Outcome {
            exit_code: if e.is_resource_limit() { 2 } else { 1 },
            stdout: render(&CommandResult {
                command: echo,
                status: Status::Error,
                payload: json!({ "kind": error_kind(&e), "message": e.to_string() }),
            }),
            stderr: format!("error: {e}\nelapsed: {:.3} ms\n", elapsed.as_secs_f64() * 1e3),
        },
    }
}

type Dispatched = (Status, Value, String);

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("payload types always serialize")
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), Error> {
    if ok {
        Ok(())
    } else {
        Err(Error::CertificationFailed(what()))
    }
}

fn parse_int(s: &str) -> Result<BigInt, Error> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("{s:?} is not an integer")))
}

fn inverse(n: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(n))
}

fn all_below(errors: &[Interval], bound: &Rational) -> bool {
    errors.iter().all(|e| e.hi() < bound)
}

fn witness_payload(w: &ZetaWitness, cfg: &Config) -> Result<Dispatched, Error> {
    let scale = num_traits::pow(w.lcm.clone(), w.s.exponent() as usize);
    ensure(w.a == &w.alpha_coeff * &scale, || "a != V(n)^s · alpha_coeff".into())?;
    ensure(
        Rational::from_integer(w.b.clone()) == &w.beta * Rational::from_integer(scale),
        || "b != V(n)^s · beta".into(),
    )?;
    let value = w.certified_value(cfg)?;
    let sign = if w.beta.is_negative() { "−" } else { "+" };
    let summary = format!(
        "n = {}: {}·ζ({}) {sign} {} ≈ {:.6e}",
        w.n,
        w.alpha_coeff,
        w.s.exponent(),
        w.beta.abs(),
        value.approx_f64()
    );
    Ok((
        Status::Certified,
        json!({ "witness": to_value(w), "value": to_value(&value) }),
        summary,
    ))
}

fn dispatch(command: &Command, cfg: &Config) -> Result<Dispatched, Error> {
    match command {
        Command::Approx { real, big_n } => {
            let alpha = parse_real(real)?;
            let r = dirichlet_approx(&alpha, *big_n, cfg)?;
            ensure(
                r.n >= 1 && r.n <= *big_n && r.certified_error.hi() < &inverse(*big_n),
                || "approximation outside its contract".into(),
            )?;
            let summary = format!("n = {}, p = {}, |nα − p| <= {:.3e}", r.n, r.p, r.certified_error.approx_f64());
            Ok((Status::Certified, to_value(&r), summary))
        }
        Command::Simul { reals, big_n } => {
            let alphas = parse_real_list(reals)?;
            let r = simultaneous_approx(&alphas, *big_n, cfg)?;
            ensure(all_below(&r.certified_errors, &inverse(*big_n)), || {
                "simultaneous error not below 1/N".into()
            })?;
            let summary = format!("n = {}, p = {:?}", r.n[0], r.p.iter().map(ToString::to_string).collect::<Vec<_>>());
            Ok((Status::Certified, to_value(&r), summary))
        }
        Command::Linform { reals, big_n } => {
            let alphas = parse_real_list(reals)?;
            let r = linear_form_approx(&alphas, *big_n, cfg)?;
            ensure(all_below(&r.certified_errors, &inverse(*big_n)), || {
                "linear form not below 1/N".into()
            })?;
            let summary = format!("n = {:?}, p = {}", r.n.iter().map(ToString::to_string).collect::<Vec<_>>(), r.p[0]);
            Ok((Status::Certified, to_value(&r), summary))
        }
        Command::Multidim { matrix, big_n } => {
            let m = parse_real_matrix(&parse::read_matrix_source(matrix)?)?;
            let r = multidim_approx(&m, *big_n, cfg)?;
            ensure(
                all_below(&r.certified_errors, &inverse(*big_n))
                    && r.n.iter().all(|v| v.abs() <= r.box_bound)
                    && r.n.iter().any(|v| !v.is_zero()),
                || "multidimensional approximation outside its contract".into(),
            )?;
            let summary = format!("n = {:?}", r.n.iter().map(ToString::to_string).collect::<Vec<_>>());
            Ok((Status::Certified, to_value(&r), summary))
        }
        Command::Smallforms { matrix, big_n } => {
            let m = parse_real_matrix(&parse::read_matrix_source(matrix)?)?;
            let r = small_linear_forms(&m, *big_n, cfg)?;
            ensure(
                r.certified_values.iter().all(|v| v.hi() <= r.bound.hi())
                    && r.x.iter().all(|v| v.abs() <= r.box_bound)
                    && r.x.iter().any(|v| !v.is_zero()),
                || "small linear forms outside their contract".into(),
            )?;
            let summary = format!("x = {:?}", r.x.iter().map(ToString::to_string).collect::<Vec<_>>());
            Ok((Status::Certified, to_value(&r), summary))
        }
        Command::Stream { real, count } => {
            let alpha = parse_real(real)?;
            let fractions = good_approx_stream(&alpha, *count, cfg)?;
            ensure(
                fractions.windows(2).all(|w| w[0].denom() < w[1].denom()),
                || "denominators not strictly increasing".into(),
            )?;
            let strings: Vec<String> = fractions.iter().map(ToString::to_string).collect();
            let summary = format!("{} approximations, last {}", strings.len(), strings.last().map_or("-", String::as_str));
            Ok((Status::Certified, json!({ "approximations": strings }), summary))
        }
        Command::Pell { c } => {
            let cert = solve_pell(&parse_int(c)?)?;
            ensure(cert.fundamental.is_valid(), || "x² − cy² != 1".into())?;
            let summary = format!("x = {}, y = {}", cert.fundamental.x, cert.fundamental.y);
            Ok((Status::Certified, to_value(&cert), summary))
        }
        Command::PellPowers { c, k } => {
            let cert = solve_pell(&parse_int(c)?)?;
            let powers = pell_powers(&cert.fundamental, *k)?;
            ensure(
                powers.iter().all(|s| s.is_valid()) && powers.windows(2).all(|w| w[0].x < w[1].x),
                || "powers not increasing solutions".into(),
            )?;
            let summary = format!("{} solutions of x² − {}y² = 1", powers.len(), c);
            Ok((Status::Certified, json!({ "powers": to_value(&powers) }), summary))
        }
        Command::Lineq { a, b } => {
            let (a, b) = (parse_int(a)?, parse_int(b)?);
            let (x, y) = solve_unit_linear(&a, &b, cfg)?;
            ensure((&a * &x - &b * &y).is_one(), || "ax − by != 1".into())?;
            let summary = format!("{a}·{x} − {b}·{y} = 1");
            Ok((
                Status::Certified,
                json!({ "a": a.to_string(), "b": b.to_string(), "x": x.to_string(), "y": y.to_string() }),
                summary,
            ))
        }
        Command::Witness { real, eps } => {
            let alpha = parse_real(real)?;
            let eps = parse_rational(eps)?;
            let w = find_witness(&alpha, &eps, cfg)?;
            ensure(
                w.certified_value.certainly_positive() && w.certified_value.hi() < &eps,
                || "witness not strictly inside (0, ε)".into(),
            )?;
            let summary = format!("x = {}, y = {}, |αx − y| ≈ {:.3e}", w.x, w.y, w.certified_value.approx_f64());
            Ok((Status::Certified, to_value(&w), summary))
        }
        Command::Cantor { g, z, big_n } => {
            let series = CantorSeries::from_preset(g, z.as_deref())?;
            let r = cantor_partials(&series, *big_n)?;
            ensure(
                r.certified_gap.certainly_positive() && r.certified_gap.hi() <= &r.bound,
                || "gap outside (0, bound]".into(),
            )?;
            let summary = format!("P = {}, G = {}, bound = {}", r.p, r.g, r.bound);
            Ok((
                Status::Certified,
                json!({ "series": series.to_string(), "partials": to_value(&r) }),
                summary,
            ))
        }
        Command::Zeta2 { n } => witness_payload(&zeta2_witness(*n)?, cfg),
        Command::Zeta3 { n } => witness_payload(&zeta3_witness(*n)?, cfg),
        Command::Zeta2Bound { n } | Command::Zeta3Bound { n } => {
            let report = if matches!(command, Command::Zeta2Bound { .. }) {
                check_zeta2_bound(*n, cfg)?
            } else {
                check_zeta3_bound(*n, cfg)?
            };
            ensure(
                report.lhs.certainly_positive() && report.margin.lo() >= &Rational::zero(),
                || "bound not certified".into(),
            )?;
            let summary = format!(
                "n = {}: |a ζ + b| ≈ {:.3e} <= {:.3e}",
                n,
                report.lhs.approx_f64(),
                report.rhs.approx_f64()
            );
            Ok((Status::Certified, to_value(&report), summary))
        }
        Command::Siegel { matrix } => {
            let system = IntLinearSystem::new(parse_int_matrix(&parse::read_matrix_source(matrix)?)?)?;
            let s = siegel_solve(&system, cfg)?;
            ensure(
                system.annihilates(&s.x) && s.within_bound(system.rows()),
                || "Siegel solution failed verification".into(),
            )?;
            let summary = format!("x = {:?}, height {} <= {}", s.x.iter().map(ToString::to_string).collect::<Vec<_>>(), s.height(), s.bound);
            Ok((
                Status::Certified,
                json!({ "system": to_value(&system), "solution": to_value(&s) }),
                summary,
            ))
        }
        Command::LcmUpto { n } => {
            let v = lcm_upto(*n);
            let growth = check_lcm_growth(*n);
            let summary = format!("lcm(1..{n}) has {} bits", v.bits());
            Ok((
                Status::Certified,
                json!({
                    "n": n,
                    "lcm": v.to_string(),
                    "bits": v.bits(),
                    "growth": to_value(&growth),
                }),
                summary,
            ))
        }
        Command::KernelMax { kernel, grid } => {
            let kernel: Kernel = kernel.parse()?;
            let r = kernel_max_estimate(kernel, *grid, cfg)?;
            let summary = format!(
                "max found {:.8} vs bound {:.8} ({})",
                Interval::point(r.max_found.clone()).approx_f64(),
                r.bound.approx_f64(),
                if r.below_bound { "below" } else { "NOT below" }
            );
            Ok((Status::ReportOnly, to_value(&r), summary))
        }
    }
}
