//! Fixtures shared by the benchmarks.

use vertexcalc::{basis, FockVector};

pub fn basis_vectors(weight: i64) -> Vec<FockVector> {
    basis(weight).into_iter().map(FockVector::from_monomial).collect()
}

/// `h(-1)`, `ω` and a weight-three monomial.
pub fn sample_states() -> Vec<(&'static str, FockVector)> {
    vec![("h", FockVector::mono(&[1])), ("omega", vertexcalc::voa::omega()), ("h2h1", FockVector::mono(&[2, 1]))]
}
