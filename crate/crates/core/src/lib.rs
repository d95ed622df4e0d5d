//! Laplace-Adomian decomposition (LADM) for the relativistic harmonic oscillator
//! `x'' + (1 - x'^2)^(3/2) x = 0`, `x(0) = 0`, `x'(0) = beta`.
//!
//! - [`series`]: factorial-scaled truncated power series in `t`.
//! - [`adomian`]: generic and oscillator-specific Adomian polynomials.
//! - [`solver`]: the LADM recurrence and the closed-form oscillator series.
//! - [`approximants`]: harmonic-balance and tabulated periodic approximants.
//! - [`oracle`]: adaptive Dormand-Prince reference integration.
//! - [`report`], [`plot`], [`csv`]: comparison tables, sweeps and SVG output.
//!
//! ```
//! use ladm_core::solver::oscillator_series;
//!
//! let sol = oscillator_series(0.1, 14).unwrap();
//! let x = sol.full_sum();
//! assert!((x.eval(1.0) - 0.0838).abs() < 1e-3);
//! ```

pub mod adomian;
pub mod approximants;
pub mod csv;
pub mod error;
pub mod exec;
pub mod oracle;
pub mod plot;
pub mod report;
pub mod series;
pub mod solver;

pub use adomian::{AdomianSequence, AnalyticNonlinearity};
pub use approximants::{ApproxMethod, SinusoidSum};
pub use error::{Error, Result};
pub use exec::Execution;
pub use oracle::{OracleConfig, OracleTrajectory};
pub use report::{ComparisonReport, Method};
pub use series::TimePolynomial;
pub use solver::{IvpSpec, SeriesSolution};
