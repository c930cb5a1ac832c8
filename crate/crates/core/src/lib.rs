//! Cauchy integral formulas for first-order systems with coefficients in a
//! finite-dimensional real algebra.
//!
//! The crate decides whether a system `sum_j (df/dx_j) a^j_m = 0` admits a
//! kernel with a linear numerator, computes that kernel, and checks the
//! resulting integral formulas numerically.
//!
//! ```
//! use hypercauchy::admissibility::{solve_admissibility, CRConditionSet, DEFAULT_TOL};
//!
//! let report = solve_admissibility(&CRConditionSet::fueter(), DEFAULT_TOL).unwrap();
//! assert!(report.feasible);
//! let alpha = report.solution.b[0][0].0[0];
//! assert!((alpha - 1.0 / (2.0 * std::f64::consts::PI.powi(2))).abs() < 1e-12);
//! ```

// Index loops mirror the tensor formulas (a^j_m, b^i_m, Gamma^k_ij).
#![allow(clippy::needless_range_loop)]

pub mod admissibility;
pub mod algebra;
pub mod error;
pub mod io;
pub mod kernel;
mod linalg;
pub mod par;
pub mod solutions;
pub mod suite;
pub mod varcoef;
pub mod verify;

pub use error::{Error, Result};

/// Version tag written into every JSON document.
pub const SCHEMA_VERSION: u32 = 1;
