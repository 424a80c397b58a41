//! Normal-ordered quadratic operators `L(n)`, `L^{(r)}(n)` and their
//! zeta-regularized forms `L̄^{(r)}(n)` acting on the Fock space.

mod matrix;
mod verify;

pub use matrix::{commutator, to_matrix, GradedOperator};
pub use verify::{
    bracket_decompose, central_decompose, decompose, verify_diff_op_projection, verify_modified_virasoro,
    verify_monomial_purity, verify_virasoro, CentralDecomposition,
};

use serde::{Deserialize, Serialize};

use crate::fock::{FockMonomial, FockVector};
use crate::rational::Rational;
use crate::zeta::zeta_nonpositive;

/// `:h(a)h(b):` applied to one monomial; the annihilation factor acts first.
pub fn normal_pair_on_monomial(a: i64, b: i64, m: &FockMonomial) -> Option<(Rational, FockMonomial)> {
    let (first, second) = if a > 0 { (a, b) } else { (b, a) };
    let (c1, m1) = m.h_apply(first)?;
    let (c2, m2) = m1.h_apply(second)?;
    Some((c1 * c2, m2))
}

/// `Σ_j weight(j) :h(j)h(n-j): v` over the finitely many `j` that act nonzero.
pub fn quadratic_apply(n: i64, v: &FockVector, mut weight: impl FnMut(i64) -> Rational) -> FockVector {
    let mut out = FockVector::zero();
    for (m, c) in v.terms() {
        let bound = n.abs() + m.weight() + 1;
        for j in -bound..=bound {
            if let Some((a, m2)) = normal_pair_on_monomial(j, n - j, m) {
                let w = weight(j);
                if !w.is_zero() {
                    out.add_term(m2, a * w * c);
                }
            }
        }
    }
    out
}

/// `(-1)^r ½ ζ(-2r-1)`, the constant added to `L^{(r)}(0)` by regularization.
pub fn regularization_constant(r: u32) -> Rational {
    let z = zeta_nonpositive(2 * r as usize + 1) * Rational::new(1, 2);
    if r % 2 == 0 {
        z
    } else {
        -z
    }
}

/// `L^{(r)}(n) = ½ :Σ_j j^r h(j) (n-j)^r h(n-j):`.
pub fn lr_apply(r: u32, n: i64, v: &FockVector) -> FockVector {
    let half = Rational::new(1, 2);
    quadratic_apply(n, v, |j| {
        let p = j * (n - j);
        &half * Rational::from_integer(p).pow(r as i32)
    })
}

/// The Virasoro operator `L(n) = L^{(0)}(n)`.
pub fn l_apply(n: i64, v: &FockVector) -> FockVector {
    lr_apply(0, n, v)
}

/// `L̄^{(r)}(n)`: equal to `L^{(r)}(n)` for `n ≠ 0`, shifted by [`regularization_constant`] at `n = 0`.
pub fn lbar_apply(r: u32, n: i64, v: &FockVector) -> FockVector {
    let mut out = lr_apply(r, n, v);
    if n == 0 {
        out.add_scaled(v, &regularization_constant(r));
    }
    out
}

/// A named homogeneous operator on the Fock space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum OperatorSpec {
    Identity,
    H { n: i64 },
    L { n: i64 },
    Lr { r: u32, n: i64 },
    Lbar { r: u32, n: i64 },
}

impl OperatorSpec {
    /// Weight lowered by the operator: it maps weight `w` to `w - degree`.
    pub fn degree(&self) -> i64 {
        match *self {
            OperatorSpec::Identity => 0,
            OperatorSpec::H { n } | OperatorSpec::L { n } => n,
            OperatorSpec::Lr { n, .. } | OperatorSpec::Lbar { n, .. } => n,
        }
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        match *self {
            OperatorSpec::Identity => v.clone(),
            OperatorSpec::H { n } => crate::fock::h_apply(n, v),
            OperatorSpec::L { n } => l_apply(n, v),
            OperatorSpec::Lr { r, n } => lr_apply(r, n, v),
            OperatorSpec::Lbar { r, n } => lbar_apply(r, n, v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::basis;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn l_examples() {
        assert_eq!(l_apply(0, &FockVector::mono(&[1])), FockVector::mono(&[1]));
        assert!(l_apply(-1, &FockVector::vacuum()).is_zero());
        assert_eq!(l_apply(-2, &FockVector::vacuum()), FockVector::mono(&[1, 1]).scale(&q(1, 2)));
    }

    #[test]
    fn lr_examples() {
        for mono in basis(4) {
            let v = FockVector::from_monomial(mono);
            for n in -3..=3 {
                assert_eq!(lr_apply(0, n, &v), l_apply(n, &v));
            }
        }
        assert_eq!(lr_apply(1, 0, &FockVector::mono(&[1])), FockVector::mono(&[1]).scale(&q(-1, 1)));
        // -Σ_{j>0} j² h(-j)h(j) on h(-2)·1: h(2) contributes a further factor 2.
        assert_eq!(lr_apply(1, 0, &FockVector::mono(&[2])), FockVector::mono(&[2]).scale(&q(-8, 1)));
    }

    #[test]
    fn lr_zero_mode_is_power_sum() {
        // L^{(r)}(0) acts on a monomial by (-1)^r Σ parts^{2r+1}.
        for mono in basis(6) {
            for r in 0..4u32 {
                let ps: i64 = mono.parts().iter().map(|&p| (p as i64).pow(2 * r + 1)).sum();
                let ev = if r % 2 == 0 { ps } else { -ps };
                let v = FockVector::from_monomial(mono.clone());
                assert_eq!(lr_apply(r, 0, &v), v.scale(&Rational::from_integer(ev)));
            }
        }
    }

    #[test]
    fn lbar_examples() {
        let vac = FockVector::vacuum();
        assert_eq!(lbar_apply(0, 0, &vac), vac.scale(&q(-1, 24)));
        assert_eq!(lbar_apply(1, 0, &vac), vac.scale(&q(-1, 240)));
        let v = FockVector::mono(&[2, 1]);
        assert_eq!(lbar_apply(2, 3, &v), lr_apply(2, 3, &v));
    }

    #[test]
    fn l_shifts_weight_and_grades() {
        for mono in basis(6) {
            let v = FockVector::from_monomial(mono.clone());
            assert_eq!(l_apply(0, &v), v.scale(&Rational::from_integer(mono.weight())));
            for n in -4..=4 {
                let out = l_apply(n, &v);
                if !out.is_zero() {
                    assert_eq!(out.weight().unwrap(), mono.weight() - n);
                }
            }
        }
    }
}
