//! Multivariate formal series with per-variable certification policies, formal delta
//! functions, dilation and translation exponentials, and the zeta-regularized pair
//! generating functions of the free boson.

mod boson;
mod bracket_identity;
mod localized;
mod series;

use std::fmt::Debug;

use serde::Serialize;

use crate::fock::FockVector;
use crate::rational::Rational;

pub use boson::{
    contraction_check, diagonal_extraction_check, lbar_generating, normal_ordered_pair, normal_pair, plusplus_pair,
    PlusPlusPair,
};
pub use bracket_identity::{
    bracket_identity_cells, bracket_identity_check, bracket_identity_conventions, bracket_identity_lhs,
    BracketIdentityRhs,
};
pub use localized::{f_series, one_minus_exp_inverse, ExpansionConvention, LocalizedSeries};
pub use series::{
    apply_dilation, apply_dilation_scaled, apply_taylor, delta_series, exp_linear, LinearForm, MultiSeries, Policy,
    TotalCap, VarSpec,
};

/// Coefficient spaces for [`MultiSeries`]: rational scalars or Fock-space vectors.
pub trait Coefficient: Clone + PartialEq + Debug + Serialize + Send + Sync {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    /// `self += c · other`.
    fn add_scaled(&mut self, other: &Self, c: &Rational);
}

impl Coefficient for Rational {
    fn zero() -> Self {
        Rational::zero()
    }

    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }

    fn add_scaled(&mut self, other: &Self, c: &Rational) {
        *self += other * c;
    }
}

impl Coefficient for FockVector {
    fn zero() -> Self {
        FockVector::zero()
    }

    fn is_zero(&self) -> bool {
        FockVector::is_zero(self)
    }

    fn add_scaled(&mut self, other: &Self, c: &Rational) {
        FockVector::add_scaled(self, other, c)
    }
}
