use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::Coefficient;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Which exponents of a variable a series knows exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum Policy {
    /// Power series in the variable, exact through degree `order`; negative powers are zero.
    NonNegTruncated { order: i64 },
    /// Doubly infinite in the variable, exact on `lo..=hi`.
    IntegerWindow { lo: i64, hi: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VarSpec {
    pub name: String,
    #[serde(flatten)]
    pub policy: Policy,
}

impl VarSpec {
    pub fn truncated(name: &str, order: i64) -> Self {
        VarSpec { name: name.to_string(), policy: Policy::NonNegTruncated { order } }
    }

    pub fn window(name: &str, lo: i64, hi: i64) -> Self {
        VarSpec { name: name.to_string(), policy: Policy::IntegerWindow { lo, hi } }
    }

    fn range(&self) -> (i64, i64) {
        match self.policy {
            Policy::NonNegTruncated { order } => (0, order),
            Policy::IntegerWindow { lo, hi } => (lo, hi),
        }
    }

    fn is_truncated(&self) -> bool {
        matches!(self.policy, Policy::NonNegTruncated { .. })
    }
}

/// Exactness also requires the summed exponents of `vars` to stay `≤ max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TotalCap {
    pub vars: Vec<String>,
    pub max: i64,
}

/// An integer linear combination of named variables.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct LinearForm(pub Vec<(String, i64)>);

impl LinearForm {
    pub fn new(terms: &[(&str, i64)]) -> Self {
        let mut out = LinearForm::default();
        for &(v, c) in terms {
            out.add(v, c);
        }
        out
    }

    pub fn var(name: &str) -> Self {
        Self::new(&[(name, 1)])
    }

    fn add(&mut self, v: &str, c: i64) {
        match self.0.iter_mut().find(|(n, _)| n == v) {
            Some(t) => t.1 += c,
            None => self.0.push((v.to_string(), c)),
        }
        self.0.retain(|(_, c)| *c != 0);
    }

    pub fn coeff(&self, name: &str) -> i64 {
        self.0.iter().find(|(n, _)| n == name).map_or(0, |t| t.1)
    }

    pub fn plus(&self, other: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        for (v, c) in &other.0 {
            out.add(v, *c);
        }
        out
    }

    pub fn scaled(&self, k: i64) -> LinearForm {
        let mut out = LinearForm::default();
        for (v, c) in &self.0 {
            out.add(v, c * k);
        }
        out
    }

    /// The form with every variable renamed through `f`.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> LinearForm {
        let mut out = LinearForm::default();
        for (v, c) in &self.0 {
            out.add(&f(v), *c);
        }
        out
    }
}

/// A sparse multivariate series with coefficients in `C` and a certified region
/// described by per-variable policies and optional total-degree caps.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiSeries<C> {
    vars: Vec<VarSpec>,
    caps: Vec<TotalCap>,
    terms: BTreeMap<Vec<i64>, C>,
}

impl<C: Coefficient> MultiSeries<C> {
    pub fn new(vars: Vec<VarSpec>) -> Self {
        MultiSeries { vars, caps: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn with_cap(mut self, vars: &[&str], max: i64) -> Self {
        self.caps.push(TotalCap { vars: vars.iter().map(|v| v.to_string()).collect(), max });
        self
    }

    /// Fills every certified cell of a bounded region from `f`.
    pub fn from_fn(vars: Vec<VarSpec>, caps: Vec<TotalCap>, f: impl Fn(&[i64]) -> C + Sync) -> Self {
        let mut s = MultiSeries { vars, caps, terms: BTreeMap::new() };
        let cells = s.region_cells();
        let computed: Vec<(Vec<i64>, C)> = cells
            .into_par_iter()
            .map(|e| {
                let c = f(&e);
                (e, c)
            })
            .filter(|(_, c)| !c.is_zero())
            .collect();
        s.terms.extend(computed);
        s
    }

    pub fn vars(&self) -> &[VarSpec] {
        &self.vars
    }

    pub fn caps(&self) -> &[TotalCap] {
        &self.caps
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown variable {name}")))
    }

    pub fn policy(&self, name: &str) -> Result<Policy> {
        Ok(self.vars[self.var_index(name)?].policy)
    }

    /// Exponent vector from `(name, exponent)` pairs; unnamed variables get 0.
    pub fn exps(&self, named: &[(&str, i64)]) -> Result<Vec<i64>> {
        let mut e = vec![0; self.vars.len()];
        for &(n, k) in named {
            e[self.var_index(n)?] = k;
        }
        Ok(e)
    }

    pub fn certified(&self, e: &[i64]) -> bool {
        if e.len() != self.vars.len() {
            return false;
        }
        let per_var = self.vars.iter().zip(e).all(|(v, &k)| match v.policy {
            Policy::NonNegTruncated { order } => k <= order,
            Policy::IntegerWindow { lo, hi } => lo <= k && k <= hi,
        });
        per_var
            && self.caps.iter().all(|cap| {
                let s: i64 =
                    cap.vars.iter().filter_map(|n| self.vars.iter().position(|v| &v.name == n)).map(|i| e[i]).sum();
                s <= cap.max
            })
    }

    pub fn coefficient(&self, e: &[i64]) -> Result<C> {
        if !self.certified(e) {
            return Err(Error::Uncertified(format!("exponent {e:?} outside the certified region")));
        }
        let negative_truncated = self.vars.iter().zip(e).any(|(v, &k)| v.is_truncated() && k < 0);
        if negative_truncated {
            return Ok(C::zero());
        }
        Ok(self.terms.get(e).cloned().unwrap_or_else(C::zero))
    }

    pub fn coefficient_named(&self, named: &[(&str, i64)]) -> Result<C> {
        self.coefficient(&self.exps(named)?)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c·t^e`; terms outside the certified region are dropped.
    pub fn add_term(&mut self, e: Vec<i64>, c: &C, scale: &Rational) {
        if c.is_zero() || scale.is_zero() || !self.certified(&e) {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                let mut z = C::zero();
                z.add_scaled(c, scale);
                if !z.is_zero() {
                    slot.insert(z);
                }
            }
            Entry::Occupied(mut slot) => {
                slot.get_mut().add_scaled(c, scale);
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    /// Every exponent vector of the bounded certified region.
    pub fn region_cells(&self) -> Vec<Vec<i64>> {
        let mut cells = vec![Vec::new()];
        for v in &self.vars {
            let (lo, hi) = v.range();
            cells = cells
                .into_iter()
                .flat_map(|c| {
                    (lo..=hi).map(move |k| {
                        let mut c2 = c.clone();
                        c2.push(k);
                        c2
                    })
                })
                .collect();
        }
        cells.retain(|e| self.certified(e));
        cells
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = MultiSeries { vars: self.vars.clone(), caps: self.caps.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c, k);
        }
        out
    }

    /// Sum over the intersection of the two certified regions; variables must agree in order.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, &Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, &-Rational::one())
    }

    fn combine(&self, other: &Self, k: &Rational) -> Result<Self> {
        if self.vars.len() != other.vars.len() || self.vars.iter().zip(&other.vars).any(|(a, b)| a.name != b.name) {
            return Err(Error::Incompatible("series over different variables".into()));
        }
        let vars = self
            .vars
            .iter()
            .zip(&other.vars)
            .map(|(a, b)| {
                let policy = match (a.policy, b.policy) {
                    (Policy::NonNegTruncated { order: p }, Policy::NonNegTruncated { order: q }) => {
                        Policy::NonNegTruncated { order: p.min(q) }
                    }
                    (Policy::IntegerWindow { lo: a1, hi: b1 }, Policy::IntegerWindow { lo: a2, hi: b2 }) => {
                        Policy::IntegerWindow { lo: a1.max(a2), hi: b1.min(b2) }
                    }
                    _ => return Err(Error::Incompatible(format!("policies differ for {}", a.name))),
                };
                Ok(VarSpec { name: a.name.clone(), policy })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut caps = self.caps.clone();
        caps.extend(other.caps.iter().cloned());
        let mut out = MultiSeries { vars, caps, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c, &Rational::one());
        }
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c, k);
        }
        Ok(out)
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> MultiSeries<D> {
        let mut out = MultiSeries { vars: self.vars.clone(), caps: self.caps.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &f(c), &Rational::one());
        }
        out
    }

    /// `∂/∂(name)`. The certified region loses one degree in that variable.
    pub fn derivative(&self, name: &str) -> Result<Self> {
        let i = self.var_index(name)?;
        let mut vars = self.vars.clone();
        vars[i].policy = match vars[i].policy {
            Policy::NonNegTruncated { order } if order >= 1 => Policy::NonNegTruncated { order: order - 1 },
            Policy::NonNegTruncated { order } => return Err(Error::BeyondTruncation { requested: 1, order }),
            Policy::IntegerWindow { lo, hi } => Policy::IntegerWindow { lo, hi: hi - 1 },
        };
        let caps = self
            .caps
            .iter()
            .map(|c| {
                let mut c = c.clone();
                if c.vars.iter().any(|v| v == name) {
                    c.max -= 1;
                }
                c
            })
            .collect();
        let mut out = MultiSeries { vars, caps, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            if e[i] != 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c, &Rational::from_integer(e[i]));
            }
        }
        Ok(out)
    }

    /// `x ∂/∂x`, which keeps the certified region.
    pub fn euler_derivative(&self, name: &str) -> Result<Self> {
        let i = self.var_index(name)?;
        let mut out = MultiSeries { vars: self.vars.clone(), caps: self.caps.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c, &Rational::from_integer(e[i]));
        }
        Ok(out)
    }

    /// Product with a finite Laurent polynomial over the same variables. Each window
    /// shrinks by the polynomial's exponent spread in that variable.
    pub fn mul_poly(&self, poly: &[(Vec<i64>, Rational)]) -> Result<Self> {
        let n = self.vars.len();
        if poly.is_empty() {
            return Ok(MultiSeries { vars: self.vars.clone(), caps: self.caps.clone(), terms: BTreeMap::new() });
        }
        if poly.iter().any(|(e, _)| e.len() != n) {
            return Err(Error::Incompatible("polynomial over different variables".into()));
        }
        let mut vars = self.vars.clone();
        for (i, v) in vars.iter_mut().enumerate() {
            let kmin = poly.iter().map(|(e, _)| e[i]).min().unwrap();
            let kmax = poly.iter().map(|(e, _)| e[i]).max().unwrap();
            v.policy = match v.policy {
                Policy::NonNegTruncated { order } if kmin >= 0 => Policy::NonNegTruncated { order: order + kmin },
                Policy::NonNegTruncated { .. } => {
                    return Err(Error::Incompatible(format!("negative power of truncated {}", v.name)))
                }
                Policy::IntegerWindow { lo, hi } => Policy::IntegerWindow { lo: lo + kmax, hi: hi + kmin },
            };
        }
        let caps = self
            .caps
            .iter()
            .map(|c| {
                let idx: Vec<usize> = c.vars.iter().filter_map(|n| self.var_index(n).ok()).collect();
                let kmin = poly.iter().map(|(e, _)| idx.iter().map(|&i| e[i]).sum::<i64>()).min().unwrap();
                TotalCap { vars: c.vars.clone(), max: c.max + kmin }
            })
            .collect();
        let mut out = MultiSeries { vars, caps, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            for (k, a) in poly {
                let e2: Vec<i64> = e.iter().zip(k).map(|(x, y)| x + y).collect();
                out.add_term(e2, c, a);
            }
        }
        Ok(out)
    }

    /// Product with a scalar series. Shared variables must be truncated in both factors.
    pub fn mul_series(&self, other: &MultiSeries<Rational>) -> Result<Self> {
        let mut vars = self.vars.clone();
        let mut map = Vec::new();
        for v in &other.vars {
            match vars.iter().position(|w| w.name == v.name) {
                Some(i) => {
                    let policy = match (vars[i].policy, v.policy) {
                        (Policy::NonNegTruncated { order: p }, Policy::NonNegTruncated { order: q }) => {
                            Policy::NonNegTruncated { order: p.min(q) }
                        }
                        _ => {
                            return Err(Error::Incompatible(format!(
                                "cannot multiply series sharing window variable {}",
                                v.name
                            )))
                        }
                    };
                    vars[i].policy = policy;
                    map.push(i);
                }
                None => {
                    vars.push(v.clone());
                    map.push(vars.len() - 1);
                }
            }
        }
        let mut caps = self.caps.clone();
        caps.extend(other.caps.iter().cloned());
        let n = vars.len();
        let mut out = MultiSeries { vars, caps, terms: BTreeMap::new() };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = ea.clone();
                e.resize(n, 0);
                for (j, &i) in map.iter().enumerate() {
                    e[i] += eb[j];
                }
                out.add_term(e, ca, cb);
            }
        }
        Ok(out)
    }

    /// Replaces truncated variables by linear forms in new truncated variables, keeping
    /// every term whose substituted degree is `≤ cap`.
    pub fn substitute_linear(&self, subs: &[(&str, LinearForm)], new_vars: &[&str], cap: i64) -> Result<Self> {
        let mut old_idx = Vec::new();
        for (name, _) in subs {
            let i = self.var_index(name)?;
            match self.vars[i].policy {
                Policy::NonNegTruncated { order } if order >= cap => {}
                _ => return Err(Error::Incompatible(format!("{name} is not truncated at degree ≥ {cap}"))),
            }
            old_idx.push(i);
        }
        for c in &self.caps {
            let touches = c.vars.iter().any(|v| subs.iter().any(|(n, _)| n == v));
            let inside = c.vars.iter().all(|v| subs.iter().any(|(n, _)| n == v));
            if touches && !(inside && c.max >= cap) {
                return Err(Error::Incompatible("total cap incompatible with substitution".into()));
            }
        }
        let kept: Vec<usize> = (0..self.vars.len()).filter(|i| !old_idx.contains(i)).collect();
        let mut vars: Vec<VarSpec> = kept.iter().map(|&i| self.vars[i].clone()).collect();
        for nv in new_vars {
            if vars.iter().any(|v| &v.name == nv) {
                return Err(Error::Incompatible(format!("variable {nv} already present")));
            }
            vars.push(VarSpec::truncated(nv, cap));
        }
        let caps: Vec<TotalCap> = self
            .caps
            .iter()
            .filter(|c| !c.vars.iter().any(|v| subs.iter().any(|(n, _)| n == v)))
            .cloned()
            .chain([TotalCap { vars: new_vars.iter().map(|s| s.to_string()).collect(), max: cap }])
            .collect();
        // powers[j][a] = (form_j)^a as a polynomial over new_vars
        let forms: Vec<Poly> = subs
            .iter()
            .map(|(_, f)| {
                let mut p = Poly::new();
                for (v, c) in &f.0 {
                    let mut e = vec![0; new_vars.len()];
                    let j = new_vars
                        .iter()
                        .position(|n| n == v)
                        .ok_or_else(|| Error::InvalidParameter(format!("form uses unknown variable {v}")))?;
                    e[j] = 1;
                    p.insert(e, Rational::from_integer(*c));
                }
                Ok(p)
            })
            .collect::<Result<_>>()?;
        let powers: Vec<Vec<Poly>> = forms
            .iter()
            .map(|f| {
                let mut ps = vec![poly_one(new_vars.len())];
                for a in 1..=cap as usize {
                    let next = poly_mul(&ps[a - 1], f);
                    ps.push(next);
                }
                ps
            })
            .collect();
        let mut out = MultiSeries { vars, caps, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            let deg: i64 = old_idx.iter().map(|&i| e[i]).sum();
            if deg > cap {
                continue;
            }
            let mut p = poly_one(new_vars.len());
            for (j, &i) in old_idx.iter().enumerate() {
                p = poly_mul(&p, &powers[j][e[i] as usize]);
            }
            let base: Vec<i64> = kept.iter().map(|&i| e[i]).collect();
            for (pe, pc) in &p {
                let mut e2 = base.clone();
                e2.extend(pe);
                out.add_term(e2, c, pc);
            }
        }
        Ok(out)
    }

    /// `S · δ(e^{ℓ} x_new / x_old)` where `x_new` is a new window variable and `ℓ` a linear
    /// form in truncated variables of `S`: the cell at `x_new^l x_old^e` collects
    /// `S(x_old^{e+l}) · e^{lℓ}`.
    pub fn times_delta(&self, x_old: &str, x_new: VarSpec, form: &LinearForm) -> Result<Self> {
        let io = self.var_index(x_old)?;
        let (olo, ohi) = match self.vars[io].policy {
            Policy::IntegerWindow { lo, hi } => (lo, hi),
            _ => return Err(Error::Incompatible(format!("{x_old} is not a window variable"))),
        };
        let (nlo, nhi) = match x_new.policy {
            Policy::IntegerWindow { lo, hi } => (lo, hi),
            _ => return Err(Error::Incompatible("delta needs a window variable".into())),
        };
        let mut form_idx = Vec::new();
        for (v, c) in &form.0 {
            let i = self.var_index(v)?;
            if !self.vars[i].is_truncated() {
                return Err(Error::Incompatible(format!("{v} is not truncated")));
            }
            form_idx.push((i, *c));
        }
        let mut vars = self.vars.clone();
        vars[io].policy = Policy::IntegerWindow { lo: olo - nlo, hi: ohi - nhi };
        vars.push(x_new);
        let mut out = MultiSeries { vars, caps: self.caps.clone(), terms: BTreeMap::new() };
        let n = self.vars.len();
        let degree_bound = self
            .vars
            .iter()
            .filter_map(|v| match v.policy {
                Policy::NonNegTruncated { order } => Some(order),
                _ => None,
            })
            .sum();
        for l in nlo..=nhi {
            let exp_terms = exp_linear_terms(&form_idx, l, n, degree_bound);
            for (e, c) in &self.terms {
                let eo = e[io] - l;
                for (k, a) in &exp_terms {
                    let mut e2: Vec<i64> = e.iter().zip(k).map(|(x, y)| x + y).collect();
                    e2[io] = eo;
                    e2.push(l);
                    out.add_term(e2, c, a);
                }
            }
        }
        Ok(out)
    }

    /// JSON records `{exponents: {var: int}, coefficient}`.
    pub fn to_json(&self) -> Value {
        let records: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let exps: serde_json::Map<String, Value> =
                    self.vars.iter().zip(e).map(|(v, k)| (v.name.clone(), json!(k))).collect();
                json!({ "exponents": exps, "coefficient": c })
            })
            .collect();
        json!({ "variables": self.vars, "caps": self.caps, "terms": records })
    }
}

type Poly = BTreeMap<Vec<i64>, Rational>;

fn poly_one(n: usize) -> Poly {
    let mut p = Poly::new();
    p.insert(vec![0; n], Rational::one());
    p
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let t = out.entry(e).or_insert_with(Rational::zero);
            *t += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Terms of `exp(l · Σ c_i y_i)` through total degree `max_deg`, as exponent vectors of length `n`.
fn exp_linear_terms(form: &[(usize, i64)], l: i64, n: usize, max_deg: i64) -> Vec<(Vec<i64>, Rational)> {
    let mut out = vec![(vec![0; n], Rational::one())];
    for &(i, c) in form {
        let base = Rational::from_integer(c * l);
        let mut next = Vec::new();
        for (e, a) in &out {
            let used: i64 = e.iter().sum();
            for k in 0..=(max_deg - used) {
                let mut e2 = e.clone();
                e2[i] += k;
                let coef = a * base.pow(k as i32) / Rational::factorial(k as u32);
                if !coef.is_zero() {
                    next.push((e2, coef));
                }
            }
        }
        out = next;
    }
    out
}

/// `exp(ℓ)` for a linear form over truncated variables, exact through total degree `cap`.
pub fn exp_linear(vars: &[&str], form: &LinearForm, cap: i64) -> Result<MultiSeries<Rational>> {
    let specs: Vec<VarSpec> = vars.iter().map(|v| VarSpec::truncated(v, cap)).collect();
    let mut out = MultiSeries::new(specs).with_cap(vars, cap);
    let mut idx = Vec::new();
    for (v, c) in &form.0 {
        idx.push((out.var_index(v)?, *c));
    }
    for (e, c) in exp_linear_terms(&idx, 1, vars.len(), cap) {
        out.add_term(e, &c, &Rational::one());
    }
    Ok(out)
}

/// `δ(Π x_i^{ratio_i}) = Σ_n (Π x_i^{ratio_i})^n` on the given windows.
pub fn delta_series(vars: Vec<VarSpec>, ratio: &[i64]) -> Result<MultiSeries<Rational>> {
    if ratio.len() != vars.len() || ratio.iter().all(|&r| r == 0) {
        return Err(Error::InvalidParameter("delta ratio must be a nonconstant monomial".into()));
    }
    let mut out = MultiSeries::new(vars);
    let (lo, hi) = out
        .vars
        .iter()
        .zip(ratio)
        .filter(|(_, &r)| r != 0)
        .map(|(v, &r)| {
            let (a, b) = v.range();
            let (p, q) = (a.div_euclid(r.abs()) - 1, b.div_euclid(r.abs()) + 1);
            if r > 0 {
                (p, q)
            } else {
                (-q, -p)
            }
        })
        .fold((i64::MIN, i64::MAX), |(l, h), (a, b)| (l.max(a), h.min(b)));
    for n in lo..=hi {
        let e: Vec<i64> = ratio.iter().map(|r| r * n).collect();
        out.add_term(e, &Rational::one(), &Rational::one());
    }
    Ok(out)
}

/// `e^{y d/dx} f(x) = f(x + y)`: the coefficient of `y^k x^n` is `C(n+k, k) f_{n+k}`.
/// The window in `x` loses `order` from the top.
pub fn apply_taylor<C: Coefficient>(y: &str, order: i64, f: &MultiSeries<C>, x: &str) -> Result<MultiSeries<C>> {
    let ix = f.var_index(x)?;
    if f.var_index(y).is_ok() {
        return Err(Error::Incompatible(format!("{y} already present")));
    }
    let mut vars = f.vars.clone();
    vars[ix].policy = match vars[ix].policy {
        Policy::IntegerWindow { lo, hi } if hi - order >= lo => Policy::IntegerWindow { lo, hi: hi - order },
        _ => return Err(Error::Uncertified(format!("window in {x} too small for order {order}"))),
    };
    vars.push(VarSpec::truncated(y, order));
    let mut out = MultiSeries { vars, caps: f.caps.clone(), terms: BTreeMap::new() };
    for (e, c) in &f.terms {
        let big_n = e[ix];
        for k in 0..=order {
            let mut e2 = e.clone();
            e2[ix] = big_n - k;
            e2.push(k);
            out.add_term(e2, c, &Rational::binomial(big_n, k));
        }
    }
    Ok(out)
}

/// `e^{c·y D_x} f(x) = f(e^{c y} x)`: the coefficient of `x^n` is multiplied by `e^{c n y}`.
/// `y` may be new or an existing truncated variable.
pub fn apply_dilation_scaled<C: Coefficient>(
    y: &str,
    scale: i64,
    order: i64,
    f: &MultiSeries<C>,
    x: &str,
) -> Result<MultiSeries<C>> {
    let ix = f.var_index(x)?;
    if !matches!(f.vars[ix].policy, Policy::IntegerWindow { .. }) {
        return Err(Error::Incompatible(format!("{x} is not a window variable")));
    }
    let mut vars = f.vars.clone();
    let iy = match f.var_index(y) {
        Ok(i) => {
            vars[i].policy = match vars[i].policy {
                Policy::NonNegTruncated { order: d } => Policy::NonNegTruncated { order: d.min(order) },
                _ => return Err(Error::Incompatible(format!("{y} is not truncated"))),
            };
            i
        }
        Err(_) => {
            vars.push(VarSpec::truncated(y, order));
            vars.len() - 1
        }
    };
    let n = vars.len();
    let mut out = MultiSeries { vars, caps: f.caps.clone(), terms: BTreeMap::new() };
    for (e, c) in &f.terms {
        let base = Rational::from_integer(scale * e[ix]);
        for k in 0..=order {
            let mut e2 = e.clone();
            e2.resize(n, 0);
            e2[iy] += k;
            out.add_term(e2, c, &(base.pow(k as i32) / Rational::factorial(k as u32)));
        }
    }
    Ok(out)
}

pub fn apply_dilation<C: Coefficient>(y: &str, order: i64, f: &MultiSeries<C>, x: &str) -> Result<MultiSeries<C>> {
    apply_dilation_scaled(y, 1, order, f, x)
}
