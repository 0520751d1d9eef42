//! Exact evaluation of the dyadic Hilbert transform (Haar shift) restricted
//! to dyadic intervals, with lower-bound constants, a brute-force oracle and
//! a claims audit.

pub mod audit;
pub mod bounds;
pub mod dyadic;
pub mod error;
pub mod format;
pub mod haar;
pub mod scalar;
pub mod oracle;
pub mod shift;
pub mod svd;

pub use dyadic::{DyadicInterval, HalfLineSign, Sign};
pub use error::{Error, Result};
pub use haar::{DyadicFunction, ExactFunction, LeafVector};
pub use scalar::{Amplitude, Sqrt2Scalar};
pub use shift::{classify, restricted_indicator_shift, restricted_shift, CaseClass, RestrictedShiftForm};
pub use audit::{audit_claims, ClaimReport, ClaimStatus, Universe};
pub use bounds::{bound_constant, BoundReport};
pub use num_rational::BigRational;
