//! The polynomial Fock space `S = Q[h(-1), h(-2), ...]` and the Heisenberg action on it.

mod laurent;

pub use laurent::{diff_op_apply, LaurentPoly};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::de::Deserializer;
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// `h(-j_1) ··· h(-j_k) · 1` with `j_1 ≥ ... ≥ j_k ≥ 1`.
///
/// Ordered by weight, then with larger leading parts first, which is the
/// order [`basis`] enumerates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FockMonomial {
    weight: u32,
    parts: Vec<u32>,
}

impl FockMonomial {
    pub fn vacuum() -> Self {
        FockMonomial { weight: 0, parts: Vec::new() }
    }

    /// Parts in any order; zeros are rejected.
    pub fn new(mut parts: Vec<u32>) -> Self {
        assert!(parts.iter().all(|&p| p > 0), "Fock monomial parts must be positive");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        FockMonomial { weight: parts.iter().sum(), parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> i64 {
        self.weight as i64
    }

    pub fn is_vacuum(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn multiplicity(&self, part: u32) -> usize {
        self.parts.iter().filter(|&&p| p == part).count()
    }

    /// Multiplies by `h(-part)`.
    pub fn with_part(&self, part: u32) -> Self {
        let pos = self.parts.partition_point(|&p| p >= part);
        let mut parts = Vec::with_capacity(self.parts.len() + 1);
        parts.extend_from_slice(&self.parts[..pos]);
        parts.push(part);
        parts.extend_from_slice(&self.parts[pos..]);
        FockMonomial { weight: self.weight + part, parts }
    }

    /// Removes one copy of `part`, if present.
    pub fn without_part(&self, part: u32) -> Option<Self> {
        let pos = self.parts.iter().position(|&p| p == part)?;
        let mut parts = self.parts.clone();
        parts.remove(pos);
        Some(FockMonomial { weight: self.weight - part, parts })
    }

    /// `h(n)` applied to this monomial: a single scaled monomial or zero.
    pub fn h_apply(&self, n: i64) -> Option<(Rational, FockMonomial)> {
        match n.cmp(&0) {
            Ordering::Less => Some((Rational::one(), self.with_part((-n) as u32))),
            Ordering::Equal => None,
            Ordering::Greater => {
                if n > self.weight as i64 {
                    return None;
                }
                let part = n as u32;
                let mult = self.multiplicity(part);
                if mult == 0 {
                    return None;
                }
                let rest = self.without_part(part).expect("part present");
                Some((Rational::from_integer(n * mult as i64), rest))
            }
        }
    }
}

impl Ord for FockMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight.cmp(&other.weight).then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for FockMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.parts)
    }
}

impl fmt::Display for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "1");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "h(-{p})")?;
        }
        Ok(())
    }
}

/// Serialized as the array of parts, e.g. `[3,1,1]`.
impl Serialize for FockMonomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.parts.len()))?;
        for p in &self.parts {
            seq.serialize_element(p)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for FockMonomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(deserializer)?;
        if parts.contains(&0) {
            return Err(serde::de::Error::custom("Fock monomial parts must be positive"));
        }
        Ok(FockMonomial::new(parts))
    }
}

/// A finite rational combination of Fock monomials. Never stores zero coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct FockVector {
    terms: BTreeMap<FockMonomial, Rational>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::from_monomial(FockMonomial::vacuum())
    }

    pub fn from_monomial(m: FockMonomial) -> Self {
        Self::term(Rational::one(), m)
    }

    pub fn term(c: Rational, m: FockMonomial) -> Self {
        let mut v = Self::zero();
        v.add_term(m, c);
        v
    }

    /// Shorthand for the monomial with the given parts.
    pub fn mono(parts: &[u32]) -> Self {
        Self::from_monomial(FockMonomial::new(parts.to_vec()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &FockMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: FockMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &FockVector, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn scale(&self, c: &Rational) -> FockVector {
        if c.is_zero() {
            return Self::zero();
        }
        FockVector { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    /// The common weight of a nonzero homogeneous vector.
    pub fn weight(&self) -> Result<i64> {
        let mut it = self.terms.keys();
        let first = it.next().ok_or(Error::ZeroVector)?.weight();
        if it.any(|m| m.weight() != first) {
            return Err(Error::MixedWeight);
        }
        Ok(first)
    }

    pub fn max_weight(&self) -> Option<i64> {
        self.terms.keys().next_back().map(FockMonomial::weight)
    }

    /// Splits into homogeneous components keyed by weight.
    pub fn weight_components(&self) -> BTreeMap<i64, FockVector> {
        let mut out: BTreeMap<i64, FockVector> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.weight()).or_default().terms.insert(m.clone(), c.clone());
        }
        out
    }

    /// Applies a monomial-wise linear map.
    pub fn map_linear(&self, mut f: impl FnMut(&FockMonomial) -> FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (m, c) in &self.terms {
            out.add_scaled(&f(m), c);
        }
        out
    }
}

impl FromIterator<(FockMonomial, Rational)> for FockVector {
    fn from_iter<I: IntoIterator<Item = (FockMonomial, Rational)>>(iter: I) -> Self {
        let mut v = FockVector::zero();
        for (m, c) in iter {
            v.add_term(m, c);
        }
        v
    }
}

impl fmt::Debug for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}){m:?}")?;
        }
        Ok(())
    }
}

struct TermRef<'a>(&'a FockMonomial, &'a Rational);

impl Serialize for TermRef<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Term", 2)?;
        st.serialize_field("monomial", self.0)?;
        st.serialize_field("coefficient", self.1)?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Term {
    monomial: FockMonomial,
    coefficient: Rational,
}

/// Serialized as `[{"monomial": [..], "coefficient": "p/q"}, ...]` in basis order.
impl Serialize for FockVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            seq.serialize_element(&TermRef(m, c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for FockVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<Term>::deserialize(deserializer)?;
        Ok(terms.into_iter().map(|t| (t.monomial, t.coefficient)).collect())
    }
}

/// `h(n)` acting on `S`: multiplication for `n < 0`, `n ∂/∂h(-n)` for `n > 0`, zero for `n = 0`.
pub fn h_apply(n: i64, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (m, c) in v.terms() {
        if let Some((a, m2)) = m.h_apply(n) {
            out.add_term(m2, a * c);
        }
    }
    out
}

pub fn weight(v: &FockVector) -> Result<i64> {
    v.weight()
}

/// All partitions of `n`, largest leading part first.
pub fn partitions(n: u32) -> Vec<FockMonomial> {
    fn go(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<FockMonomial>) {
        if rem == 0 {
            out.push(FockMonomial::new(cur.clone()));
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            go(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Basis monomials of every weight `≤ max_weight`, by weight then largest leading part first.
pub fn basis(max_weight: i64) -> Vec<FockMonomial> {
    (0..=max_weight.max(-1)).flat_map(|w| partitions(w as u32)).collect()
}
