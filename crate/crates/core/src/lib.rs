//! Certified, exact-arithmetic versions of the classical Dirichlet
//! approximation results and their consequences.
//!
//! Every real number is handled through a [`RealOracle`], which hands out
//! rational enclosures of any requested width. All inequalities reported by
//! this crate (`|nα − p| < 1/N`, Pell norms, the decay bounds of the ζ(2) and
//! ζ(3) witness sequences, Siegel heights) are certified either by exact
//! integer arithmetic or by interval arithmetic on those enclosures; nothing
//! goes through floating point.
//!
//! Module map:
//!
//! * [`exactnum`]: integers, rationals, intervals, real oracles, `lcm(1..n)`.
//! * [`approx`]: one- and multi-dimensional pigeonhole approximation.
//! * [`pell`]: `ax − by = 1` and `x² − cy² = 1`.
//! * [`witness`]: irrationality witnesses and Cantor series.
//! * [`zeta`]: exact witness sequences for ζ(2) and ζ(3).
//! * [`siegel`]: small integer kernel vectors of integer systems.

pub mod approx;
mod config;
mod error;
pub mod exactnum;
pub mod pell;
pub mod siegel;
pub mod witness;
pub mod zeta;

pub use config::Config;
pub use error::{Error, Result};
pub use exactnum::{BigInt, Interval, Rational, RealOracle};
