//! Certified bounds for the constant `c` in `P(x) ~ c x / log x`, where
//! `P(x)` counts practical numbers up to `x`.
//!
//! The computation runs in four stages:
//!
//! 1. enumerate practical `n <= N` with `sigma(n)` ([`practical`]);
//! 2. stream primes once, in `theta(n) = sigma(n) + 1` order, recording the
//!    Mertens product, `sum log p / (p - 1)` and `sum W_{q,J}` at each
//!    threshold ([`primes`], [`divisor_series`], [`aggregation`]);
//! 3. bound the prime-sum error `E(2N)` ([`eta_bounds`]);
//! 4. assemble the interval for `c` ([`bounds`]).
//!
//! Every real quantity is carried as an [`Interval`] with outward rounding.
//!
//! ```
//! use practical_bounds::{Certifier, PUBLISHED_C};
//!
//! let report = Certifier::default().report(1 << 12, 13, 24).unwrap();
//! assert!(report.c_lo < PUBLISHED_C.1 && report.c_hi > PUBLISHED_C.0);
//! ```

// `!(a < b)` is deliberate: a NaN must fail these checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aggregation;
pub mod bounds;
pub mod checkpoint;
pub mod divisor_series;
pub mod error;
pub mod eta_bounds;
pub mod interval;
pub mod oracle;
pub mod practical;
pub mod primes;
pub mod run;
pub mod selftest;

pub use aggregation::{run_pipeline, Aggregates, AugmentedRow, PipelineConfig, PipelineRun};
pub use bounds::{assemble, y_sum, BoundsReport, OutputFormat, YSum};
pub use error::{Error, Result};
pub use eta_bounds::{e_bound, EBound, MkTable};
pub use interval::{Interval, MathConstants};
pub use practical::{enumerate_practical, is_practical, PracticalRow};
pub use primes::{eta, eta_sup_bound, PrimeSieve};
pub use run::{cmd_bounds, cmd_selftest, cmd_table, Certifier, RunConfig, VerifyLevel};
pub use selftest::PUBLISHED_C;
