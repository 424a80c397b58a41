//! Bernoulli numbers and zeta values at nonpositive integers.

use std::sync::{Mutex, OnceLock};

use serde_json::json;

use crate::power_series::PowerSeries;
use crate::rational::Rational;
use crate::report::VerificationReport;

fn table() -> &'static Mutex<Vec<Rational>> {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// `B_k` with the convention `x/(e^x - 1) = Σ B_k x^k / k!` (so `B_1 = -1/2`).
///
/// Computed from `Σ_{j=0}^{k} C(k+1, j) B_j = 0`, which is the coefficient
/// identity behind `(e^x - 1) · x/(e^x - 1) = x`.
pub fn bernoulli(k: usize) -> Rational {
    let mut t = table().lock().expect("bernoulli table poisoned");
    while t.len() <= k {
        let n = t.len();
        let mut acc = Rational::zero();
        let mut binom = Rational::one(); // C(n+1, j)
        for (j, b) in t.iter().enumerate() {
            if !b.is_zero() {
                acc += &binom * b;
            }
            binom = binom * Rational::from(n + 1 - j) / Rational::from(j + 1);
        }
        t.push(-acc / Rational::from(n + 1));
    }
    t[k].clone()
}

/// `ζ(-n)` for `n ≥ 0`: `-B_{n+1}/(n+1)` for `n ≥ 1` and `-B_1 - 1` at `n = 0`.
pub fn zeta_nonpositive(n: usize) -> Rational {
    if n == 0 {
        return -bernoulli(1) - Rational::one();
    }
    -bernoulli(n + 1) / Rational::from(n + 1)
}

/// `x/(e^x - 1)` through `x^order`, by long division of formal power series.
pub fn bernoulli_generating_series(order: usize) -> PowerSeries {
    let denom = PowerSeries::from_fn(order, |k| Rational::factorial(k as u32 + 1).recip());
    PowerSeries::one(order).div(&denom).expect("(e^x-1)/x has constant term 1")
}

/// Checks `1/(1 - e^x) = -Σ_k B_k x^{k-1}/k!` coefficient-wise for exponents `-1..=order`.
///
/// The left side is `-x^{-1}` times the divided series; the right side uses
/// [`bernoulli`].
pub fn check_geometric_bernoulli(order: usize) -> VerificationReport {
    let mut report = VerificationReport::new("geometric-bernoulli").param("order", order);
    let lhs_series = bernoulli_generating_series(order + 1);
    for k in 0..=order + 1 {
        let lhs = -lhs_series.coeff(k as i64).expect("within order").clone();
        let rhs = -bernoulli(k) / Rational::factorial(k as u32);
        report.compare(json!({ "exponent": k as i64 - 1 }), lhs, rhs);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0), q(1, 1));
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(3), q(0, 1));
        assert_eq!(bernoulli(4), q(-1, 30));
        assert_eq!(bernoulli(12), q(-691, 2730));
    }

    #[test]
    fn bernoulli_matches_series_division() {
        let s = bernoulli_generating_series(30);
        for k in 0..=30 {
            assert_eq!(bernoulli(k), s.coeff(k as i64).unwrap() * Rational::factorial(k as u32), "k={k}");
        }
    }

    #[test]
    fn odd_bernoulli_and_even_zeta_vanish() {
        for k in 1..20 {
            assert!(bernoulli(2 * k + 1).is_zero());
            assert!(zeta_nonpositive(2 * k).is_zero());
        }
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(zeta_nonpositive(0), q(-1, 2));
        assert_eq!(zeta_nonpositive(1), q(-1, 12));
        assert_eq!(zeta_nonpositive(2), q(0, 1));
        assert_eq!(zeta_nonpositive(3), q(1, 120));
        assert_eq!(zeta_nonpositive(5), q(-1, 252));
    }

    #[test]
    fn geometric_bernoulli() {
        let r = check_geometric_bernoulli(4);
        assert!(r.passed(), "{r}");
        let first = &r.cells[0];
        assert_eq!(first.key["exponent"], -1);
        assert_eq!(first.lhs, q(-1, 1).into());
        let second = &r.cells[1];
        assert_eq!(second.rhs, q(1, 2).into());
    }
}
