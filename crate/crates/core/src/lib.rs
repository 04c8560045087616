//! Experimental sum–product toolkit over prime fields.
//!
//! Exact additive and multiplicative energies, non-abelian energies of matrix
//! families `G_λ(A, B)`, hyperbola incidence counts `(a+b)(c+d) = λ`, and
//! bilinear forms of Kloosterman sums. Each fast path has an independent
//! brute-force or spectral cross-check, and the inequality evaluators return
//! [`BoundReport`]s rather than bare booleans.

pub mod energies;
pub mod error;
pub mod incidence;
pub mod kloosterman;
pub mod modfield;
pub mod oracle;
pub mod report;
pub mod sl2;
pub mod spectral;

pub use error::{Error, Result};
pub use modfield::{rep_additive, rep_multiplicative, FieldContext, FpSet, RepTable, Sign};
pub use report::{envelope_log_cubed, log2, BoundReport, RhsTerm};
pub use spectral::{Spectrum, WeightFn};

/// Exact counts. Energies of moderate sets overflow 64 bits quickly.
pub type Count = num_bigint::BigUint;
