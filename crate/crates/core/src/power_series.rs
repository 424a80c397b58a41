//! Univariate truncated power series over the rationals.

use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// `Σ_{k ≤ order} c_k x^k`, exact through `x^order`; higher coefficients are unknown.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Div,
    Compose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpLog {
    Exp,
    Log,
}

impl PowerSeries {
    /// The zero series known through `x^order`.
    pub fn zero(order: usize) -> Self {
        PowerSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(Rational::one(), 0, order)
    }

    pub fn monomial(c: Rational, exp: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if exp <= order {
            s.coeffs[exp] = c;
        }
        s
    }

    /// Builds a series from leading coefficients; missing ones up to `order` are zero.
    pub fn from_coeffs(coeffs: impl IntoIterator<Item = Rational>, order: usize) -> Self {
        let mut s = Self::zero(order);
        for (k, c) in coeffs.into_iter().enumerate().take(order + 1) {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        PowerSeries { coeffs: (0..=order).map(f).collect() }
    }

    /// `e^{c x}`.
    pub fn exp_linear(c: &Rational, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = Rational::one();
        for k in 0..=order {
            if k > 0 {
                term = term * c / Rational::from(k);
            }
            coeffs.push(term.clone());
        }
        PowerSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^k`; asking past the truncation order is an error.
    pub fn coeff(&self, k: i64) -> Result<&Rational> {
        if k < 0 {
            return Err(Error::InvalidParameter(format!("negative exponent {k} in power series")));
        }
        self.coeffs.get(k as usize).ok_or(Error::BeyondTruncation { requested: k, order: self.order() as i64 })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn constant(&self) -> &Rational {
        &self.coeffs[0]
    }

    /// Lowest exponent with a nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        PowerSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self::from_fn(order, |k| &self.coeffs[k] + &other.coeffs[k])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self::from_fn(order, |k| &self.coeffs[k] - &other.coeffs[k])
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        PowerSeries { coeffs: out }
    }

    /// `self / other`; the divisor must be a unit.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let b0 = other.constant();
        if b0.is_zero() {
            return Err(Error::DivisionByNonUnit);
        }
        let order = self.order().min(other.order());
        let inv_b0 = b0.recip();
        let mut q: Vec<Rational> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.coeffs[n].clone();
            for k in 1..=n {
                let b = &other.coeffs[k];
                if !b.is_zero() {
                    acc -= b * &q[n - k];
                }
            }
            q.push(acc * &inv_b0);
        }
        Ok(PowerSeries { coeffs: q })
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one(self.order()).div(self)
    }

    /// `self(inner(x))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.constant().is_zero() {
            return Err(Error::CompositionNonZeroConstant);
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Self::monomial(self.coeffs[order].clone(), 0, order);
        for k in (0..order).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        let order = self.order().saturating_sub(1);
        Self::from_fn(order, |k| {
            self.coeffs.get(k + 1).map(|c| c * Rational::from(k + 1)).unwrap_or_else(Rational::zero)
        })
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Self {
        Self::from_fn(
            self.order() + 1,
            |k| {
                if k == 0 {
                    Rational::zero()
                } else {
                    &self.coeffs[k - 1] / Rational::from(k)
                }
            },
        )
    }

    pub fn exp(&self) -> Result<Self> {
        if !self.constant().is_zero() {
            return Err(Error::ExpNonZeroConstant);
        }
        let order = self.order();
        let mut e: Vec<Rational> = Vec::with_capacity(order + 1);
        e.push(Rational::one());
        // n e_n = Σ_{k=1}^{n} k a_k e_{n-k}
        for n in 1..=order {
            let mut acc = Rational::zero();
            for k in 1..=n {
                let a = &self.coeffs[k];
                if !a.is_zero() {
                    acc += a * Rational::from(k) * &e[n - k];
                }
            }
            e.push(acc / Rational::from(n));
        }
        Ok(PowerSeries { coeffs: e })
    }

    pub fn log(&self) -> Result<Self> {
        if !self.constant().is_one() {
            return Err(Error::LogNonUnitConstant);
        }
        let q = self.derivative().div(&self.truncate(self.order().saturating_sub(1)))?;
        Ok(q.integral().truncate(self.order()))
    }

    /// Integer power; negative exponents need a unit constant term.
    pub fn powi(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.recip()?.powi(-e);
        }
        let mut base = self.clone();
        let mut acc = Self::one(self.order());
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Nonzero `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }
}

pub fn series_arith(a: &PowerSeries, b: &PowerSeries, op: SeriesOp) -> Result<PowerSeries> {
    match op {
        SeriesOp::Add => Ok(a.add(b)),
        SeriesOp::Mul => Ok(a.mul(b)),
        SeriesOp::Div => a.div(b),
        SeriesOp::Compose => a.compose(b),
    }
}

pub fn series_exp_log(a: &PowerSeries, op: ExpLog) -> Result<PowerSeries> {
    match op {
        ExpLog::Exp => a.exp(),
        ExpLog::Log => a.log(),
    }
}

/// Serialized as `[[exponent, "p/q"], ...]` over the nonzero terms.
impl Serialize for PowerSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<_> = self.terms().collect();
        let mut seq = serializer.serialize_seq(Some(terms.len()))?;
        for (k, c) in terms {
            seq.serialize_element(&(k, c))?;
        }
        seq.end()
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})x^{k}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}
