use std::collections::BTreeMap;

use serde::Serialize;

use crate::rational::Rational;

/// A Laurent polynomial `Σ c_m t^m` with finitely many nonzero terms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: Rational, m: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn t_pow(m: i64) -> Self {
        Self::monomial(Rational::one(), m)
    }

    pub fn add_term(&mut self, m: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, m: i64) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, a) in self.terms() {
            out.add_term(m, a * c);
        }
        out
    }

    /// `D = t d/dt`.
    pub fn d(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            out.add_term(m, c * Rational::from_integer(m));
        }
        out
    }

    pub fn d_pow(&self, r: u32) -> Self {
        (0..r).fold(self.clone(), |p, _| p.d())
    }

    /// Multiplication by `t^n`.
    pub fn shift(&self, n: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(m, c)| (m + n, c.clone())).collect() }
    }
}

/// Applies `(-1)^{r+1} D^r (t^n D) D^r` to `p`.
pub fn diff_op_apply(r: u32, n: i64, p: &LaurentPoly) -> LaurentPoly {
    let sign = if r % 2 == 0 { -Rational::one() } else { Rational::one() };
    p.d_pow(r).d().shift(n).d_pow(r).scale(&sign)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        for m in -4..=4 {
            let tm = LaurentPoly::t_pow(m);
            assert_eq!(diff_op_apply(0, 0, &tm), LaurentPoly::monomial(Rational::from_integer(-m), m));
            assert_eq!(diff_op_apply(1, 0, &tm), LaurentPoly::monomial(Rational::from_integer(m * m * m), m));
        }
        for r in 1..4 {
            for n in -3..=3 {
                assert!(diff_op_apply(r, n, &LaurentPoly::t_pow(0)).is_zero());
            }
        }
    }

    #[test]
    fn closed_form_on_monomials() {
        // (-1)^{r+1} (m+n)^r m^{r+1} t^{m+n}
        for r in 0..4u32 {
            for n in -3i64..=3 {
                for m in -5i64..=5 {
                    let c = (m + n).pow(r) * m.pow(r + 1) * if r % 2 == 0 { -1 } else { 1 };
                    assert_eq!(
                        diff_op_apply(r, n, &LaurentPoly::t_pow(m)),
                        LaurentPoly::monomial(Rational::from_integer(c), m + n)
                    );
                }
            }
        }
    }

    #[test]
    fn witt_composition() {
        // Applying r=0 twice agrees with the direct polynomial (t^a D)(t^b D) t^m = b(m+b) t^{m+a+b}.
        for a in -2..=2 {
            for b in -2..=2 {
                for m in -3..=3 {
                    let twice = diff_op_apply(0, a, &diff_op_apply(0, b, &LaurentPoly::t_pow(m)));
                    let direct = LaurentPoly::monomial(Rational::from_integer(m * (m + b)), m + a + b);
                    assert_eq!(twice, direct);
                }
            }
        }
    }
}
