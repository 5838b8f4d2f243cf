//! Exact verification routines around the Borwein sign conjecture.
//!
//! * [`exactmath`]: divisors, Möbius, Ramanujan sums, binomials, cycle types.
//! * [`qpoly`]: dense integer polynomials and sparse binomial products.
//! * [`borwein`]: the product ∏(1−q^{3j+1})(1−q^{3j+2}), its A/B/C split, sign
//!   checks and residue partial sums.
//! * [`modcount`]: signed subset-sum counts over Z_N, by DP, enumeration and a
//!   divisor-grouped character formula.
//! * [`partitions`]: pentagonal series, eta-quotient prefixes, restricted
//!   partition counts and Stanley's two-term formula.
//! * [`report`]: the machine-readable verification report.

pub mod borwein;
pub mod error;
pub mod exactmath;
pub mod modcount;
pub mod partitions;
pub mod qpoly;
pub mod report;

pub use error::{Error, Result};
pub use qpoly::{IntPolynomial, ProductSpec};
pub use report::{ReportDocument, Status};
