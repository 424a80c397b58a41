use std::collections::BTreeMap;

use rayon::prelude::*;

use super::OperatorSpec;
use crate::error::{Error, Result};
use crate::fock::{basis, partitions, FockMonomial, FockVector};
use crate::rational::Rational;

/// A weight-homogeneous linear map on the Fock space truncated at `domain_bound`,
/// stored column by column: the image of every basis monomial of weight `≤ domain_bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedOperator {
    degree: i64,
    domain_bound: i64,
    columns: BTreeMap<FockMonomial, FockVector>,
}

impl GradedOperator {
    pub fn from_fn(degree: i64, domain_bound: i64, f: impl Fn(&FockVector) -> FockVector + Sync) -> Self {
        let columns = basis(domain_bound)
            .into_par_iter()
            .map(|m| {
                let img = f(&FockVector::from_monomial(m.clone()));
                (m, img)
            })
            .collect();
        GradedOperator { degree, domain_bound, columns }
    }

    pub fn identity(domain_bound: i64) -> Self {
        Self::from_fn(0, domain_bound, |v| v.clone())
    }

    pub fn zero(degree: i64, domain_bound: i64) -> Self {
        Self::from_fn(degree, domain_bound, |_| FockVector::zero())
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn domain_bound(&self) -> i64 {
        self.domain_bound
    }

    pub fn columns(&self) -> impl Iterator<Item = (&FockMonomial, &FockVector)> {
        self.columns.iter()
    }

    pub fn column(&self, m: &FockMonomial) -> Result<&FockVector> {
        self.columns.get(m).ok_or(Error::OutsideDomain(m.weight()))
    }

    pub fn is_zero(&self) -> bool {
        self.columns.values().all(FockVector::is_zero)
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        let mut out = FockVector::zero();
        for (m, c) in v.terms() {
            out.add_scaled(self.column(m)?, c);
        }
        Ok(out)
    }

    /// The dense block from weight `w` to weight `w - degree`, rows and columns in basis order.
    pub fn block(&self, w: i64) -> Vec<Vec<Rational>> {
        let target = w - self.degree;
        let rows = if target < 0 { Vec::new() } else { partitions(target as u32) };
        let cols = if w < 0 || w > self.domain_bound { Vec::new() } else { partitions(w as u32) };
        rows.iter().map(|r| cols.iter().map(|c| self.columns[c].coeff(r)).collect()).collect()
    }

    /// Restricts to source weights `≤ bound`.
    pub fn restrict(&self, bound: i64) -> Self {
        GradedOperator {
            degree: self.degree,
            domain_bound: bound.min(self.domain_bound),
            columns: self
                .columns
                .iter()
                .filter(|(m, _)| m.weight() <= bound)
                .map(|(m, v)| (m.clone(), v.clone()))
                .collect(),
        }
    }

    /// `Σ c_i · ops_i` over the common domain; all degrees must agree.
    pub fn linear_combination(terms: &[(Rational, &GradedOperator)]) -> Result<Self> {
        let (_, first) = terms.first().ok_or_else(|| Error::InvalidParameter("empty linear combination".into()))?;
        let degree = first.degree;
        let bound = terms.iter().map(|(_, o)| o.domain_bound).min().unwrap_or(0);
        if terms.iter().any(|(_, o)| o.degree != degree) {
            return Err(Error::Incompatible("operators of different degree".into()));
        }
        let columns = basis(bound)
            .into_iter()
            .map(|m| {
                let mut v = FockVector::zero();
                for (c, op) in terms {
                    v.add_scaled(&op.columns[&m], c);
                }
                (m, v)
            })
            .collect();
        Ok(GradedOperator { degree, domain_bound: bound, columns })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::linear_combination(&[(Rational::one(), self), (-Rational::one(), other)])
    }
}

/// Builds the per-weight columns of a named operator for every basis vector of weight `≤ w`.
pub fn to_matrix(op: &OperatorSpec, w: i64) -> GradedOperator {
    let op = *op;
    GradedOperator::from_fn(op.degree(), w, move |v| op.apply(v))
}

/// `[a, b] = ab - ba` on the source weights `≤ w` where both compositions are
/// computable from the stored columns. The certified range is the result's domain.
pub fn commutator(a: &GradedOperator, b: &GradedOperator, w: i64) -> Result<GradedOperator> {
    // Source weight u is certified when b's and a's columns at u exist and the
    // intermediate weights u - deg b, u - deg a are inside the other operator's domain.
    let top = [w, a.domain_bound, b.domain_bound, a.domain_bound + b.degree, b.domain_bound + a.degree]
        .into_iter()
        .min()
        .expect("nonempty");
    if top < 0 {
        return Err(Error::WindowTooSmall);
    }
    let columns = basis(top)
        .into_par_iter()
        .map(|m| {
            let ab = a.apply(&b.columns[&m]).expect("certified intermediate weight");
            let ba = b.apply(&a.columns[&m]).expect("certified intermediate weight");
            (m, ab.sub(&ba))
        })
        .collect();
    Ok(GradedOperator { degree: a.degree + b.degree, domain_bound: top, columns })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::l_apply;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn l0_blocks_are_weights() {
        let op = to_matrix(&OperatorSpec::L { n: 0 }, 2);
        assert_eq!(op.block(0), vec![vec![q(0)]]);
        assert_eq!(op.block(1), vec![vec![q(1)]]);
        assert_eq!(op.block(2), vec![vec![q(2), q(0)], vec![q(0), q(2)]]);
    }

    #[test]
    fn lowering_past_zero_is_zero() {
        let op = to_matrix(&OperatorSpec::L { n: 5 }, 3);
        assert!(op.is_zero());
        for w in 0..=3 {
            assert!(op.block(w).is_empty());
        }
    }

    #[test]
    fn matrix_agrees_with_apply() {
        let op = to_matrix(&OperatorSpec::Lr { r: 2, n: -2 }, 5);
        for m in basis(5) {
            let v = FockVector::from_monomial(m);
            assert_eq!(op.apply(&v).unwrap(), crate::quadratic::lr_apply(2, -2, &v));
        }
        assert!(matches!(op.apply(&FockVector::mono(&[6])), Err(Error::OutsideDomain(6))));
    }

    #[test]
    fn l1_lm1_commutator() {
        let a = to_matrix(&OperatorSpec::L { n: 1 }, 5);
        let b = to_matrix(&OperatorSpec::L { n: -1 }, 5);
        let c = commutator(&a, &b, 4).unwrap();
        assert_eq!(c.degree(), 0);
        assert_eq!(c.domain_bound(), 4);
        let two_l0 = GradedOperator::from_fn(0, 4, |v| l_apply(0, v).scale(&q(2)));
        assert_eq!(c, two_l0);
        let l0 = to_matrix(&OperatorSpec::L { n: 0 }, 4);
        assert!(commutator(&l0, &l0, 4).unwrap().is_zero());
    }

    #[test]
    fn window_too_small() {
        let a = to_matrix(&OperatorSpec::L { n: -3 }, 1);
        let b = to_matrix(&OperatorSpec::L { n: 3 }, 1);
        // a's domain needs weight u + 3 for any u; none fits inside bound 1.
        assert_eq!(commutator(&a, &b, 1), Err(Error::WindowTooSmall));
    }
}
