//! Graded dimension of the Fock space and the eta-shifted character.

use serde::Serialize;

use crate::power_series::PowerSeries;
use crate::rational::Rational;

/// `q^shift · series`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftedQSeries {
    pub shift: Rational,
    pub series: PowerSeries,
}

impl ShiftedQSeries {
    pub fn mul(&self, other: &Self) -> Self {
        ShiftedQSeries { shift: &self.shift + &other.shift, series: self.series.mul(&other.series) }
    }
}

/// `Π_{n ≥ 1} (1 - q^n)` through `q^max_n`.
pub fn euler_product(max_n: usize) -> PowerSeries {
    let mut c = vec![Rational::zero(); max_n + 1];
    c[0] = Rational::one();
    for n in 1..=max_n {
        for k in (n..=max_n).rev() {
            let t = c[k - n].clone();
            c[k] -= t;
        }
    }
    PowerSeries::from_coeffs(c, max_n)
}

/// `Π_{n ≥ 1} (1 - q^n)^{-1}`: the coefficient of `q^n` is the number of partitions of `n`.
pub fn graded_dimension(max_n: usize) -> PowerSeries {
    let mut c = vec![Rational::zero(); max_n + 1];
    c[0] = Rational::one();
    for n in 1..=max_n {
        for k in n..=max_n {
            let t = c[k - n].clone();
            c[k] += t;
        }
    }
    PowerSeries::from_coeffs(c, max_n)
}

/// `η(q) = q^{1/24} Π (1 - q^n)`.
pub fn eta(max_n: usize) -> ShiftedQSeries {
    ShiftedQSeries { shift: Rational::new(1, 24), series: euler_product(max_n) }
}

/// The character `1/η(q)`, i.e. the graded dimension under the weight shift by `-1/24`.
pub fn chi_s(max_n: usize) -> ShiftedQSeries {
    ShiftedQSeries { shift: Rational::new(-1, 24), series: graded_dimension(max_n) }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Partitions of `n` with all parts `≤ k`.
    fn p(n: i64, k: i64) -> u64 {
        if n == 0 {
            return 1;
        }
        if n < 0 || k == 0 {
            return 0;
        }
        p(n - k, k) + p(n, k - 1)
    }

    #[test]
    fn examples() {
        let g = graded_dimension(6);
        assert_eq!(g.coeff(0).unwrap(), &Rational::one());
        assert_eq!(g.coeff(4).unwrap(), &Rational::from(5));
        assert_eq!(g.coeff(6).unwrap(), &Rational::from(11));
        let c = chi_s(5);
        assert_eq!(c.shift, Rational::new(-1, 24));
        assert_eq!(c.series.coeff(5).unwrap(), &Rational::from(7));
    }

    #[test]
    fn partition_oracle() {
        let g = graded_dimension(30);
        for n in 0..=30 {
            assert_eq!(g.coeff(n).unwrap(), &Rational::from(p(n, n) as i64));
        }
    }

    #[test]
    fn chi_times_eta_is_one() {
        let prod = chi_s(25).mul(&eta(25));
        assert!(prod.shift.is_zero());
        assert_eq!(prod.series, PowerSeries::one(25));
    }
}
