//! Exact formal calculus for the rank-one free boson: Fock space, normal-ordered
//! and zeta-regularized quadratic operators, sparse multivariate formal series,
//! vertex operators, and coefficient-by-coefficient verifiers for the identities
//! relating them.
//!
//! Every number is an exact [`Rational`]; every verifier returns a
//! [`VerificationReport`] listing the compared cells with exact witnesses.

pub mod error;
pub mod fock;
pub mod formal;
pub mod linalg;
pub mod power_series;
pub mod qseries;
pub mod quadratic;
pub mod rational;
pub mod report;
pub mod voa;
pub mod zeta;

pub use error::{Error, Result};
pub use fock::{basis, h_apply, FockMonomial, FockVector, LaurentPoly};
pub use power_series::PowerSeries;
pub use qseries::ShiftedQSeries;
pub use quadratic::{CentralDecomposition, GradedOperator, OperatorSpec};
pub use rational::Rational;
pub use report::{CellFilter, VerificationReport};
pub use voa::{VoaConstants, Windows};
