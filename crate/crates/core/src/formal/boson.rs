use rayon::prelude::*;
use serde_json::json;

use super::localized::{one_minus_exp_inverse, ExpansionConvention};
use super::series::{delta_series, MultiSeries, TotalCap, VarSpec};
use crate::error::{Error, Result};
use crate::fock::{basis, h_apply, FockVector};
use crate::quadratic::{lbar_apply, normal_pair_on_monomial};
use crate::rational::Rational;
use crate::report::VerificationReport;

/// `:h(a)h(b): v`.
pub fn normal_pair(a: i64, b: i64, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (m, c) in v.terms() {
        if let Some((k, m2)) = normal_pair_on_monomial(a, b, m) {
            out.add_term(m2, k * c);
        }
    }
    out
}

/// The nonzero `(j, :h(j)h(n-j): v)` for a fixed total mode `n`.
fn pair_terms(n: i64, v: &FockVector) -> Vec<(i64, FockVector)> {
    let bound = n.abs() + v.max_weight().unwrap_or(0) + 1;
    (-bound..=bound).map(|j| (j, normal_pair(j, n - j, v))).filter(|(_, w)| !w.is_zero()).collect()
}

/// `:h(e^{y1} x) h(e^{y2} x): v` (no factor ½). The coefficient of `y1^a y2^b x^{-n}` is
/// `Σ_j (-j)^a (-(n-j))^b / (a! b!) :h(j)h(n-j): v`.
pub fn normal_ordered_pair(
    y1: &str,
    y2: &str,
    x: &str,
    v: &FockVector,
    window: (i64, i64),
    order: i64,
) -> MultiSeries<FockVector> {
    let vars =
        vec![VarSpec::truncated(y1, order), VarSpec::truncated(y2, order), VarSpec::window(x, window.0, window.1)];
    let mut out = MultiSeries::new(vars);
    let cells: Vec<(i64, Vec<(i64, FockVector)>)> =
        (window.0..=window.1).into_par_iter().map(|e| (e, pair_terms(-e, v))).collect();
    let fact: Vec<Rational> = (0..=order).map(|k| Rational::factorial(k as u32)).collect();
    for (e, terms) in cells {
        let n = -e;
        for a in 0..=order {
            for b in 0..=order {
                let mut acc = FockVector::zero();
                for (j, w) in &terms {
                    let c = Rational::from(-j).pow(a as i32) * Rational::from(j - n).pow(b as i32);
                    acc.add_scaled(w, &c);
                }
                out.add_term(vec![a, b, e], &acc, &(&fact[a as usize] * &fact[b as usize]).recip());
            }
        }
    }
    out
}

/// `++h(e^{y1} x) h(e^{y2} x)++` as a reusable operator: the normal-ordered product minus
/// `∂/∂y1 1/(1 - e^{-y1+y2})`, expanded under a convention.
#[derive(Debug, Clone)]
pub struct PlusPlusPair {
    y1: String,
    y2: String,
    x: String,
    window: (i64, i64),
    order: i64,
    /// Expanded scalar correction over `[y1, y2]`.
    scalar: MultiSeries<Rational>,
}

impl PlusPlusPair {
    pub fn new(
        y1: &str,
        y2: &str,
        x: &str,
        window: (i64, i64),
        order: i64,
        conv: &ExpansionConvention,
    ) -> Result<Self> {
        if conv.distinguished_variable != y1 && conv.distinguished_variable != y2 {
            return Err(Error::InvalidParameter(format!(
                "convention variable {} is not {y1} or {y2}",
                conv.distinguished_variable
            )));
        }
        if window.0 > 0 || window.1 < 0 {
            return Err(Error::InvalidParameter("window must contain 0".into()));
        }
        let correction = one_minus_exp_inverse(y1, y2, order + 3)?.derivative(y1)?.scale(&-Rational::one());
        let scalar = correction.expand(conv, order)?;
        Ok(PlusPlusPair { y1: y1.to_string(), y2: y2.to_string(), x: x.to_string(), window, order, scalar })
    }

    /// The expanded scalar correction `-∂/∂y1 1/(1 - e^{-y1+y2})`.
    pub fn scalar(&self) -> &MultiSeries<Rational> {
        &self.scalar
    }

    pub fn apply(&self, v: &FockVector) -> MultiSeries<FockVector> {
        let normal = normal_ordered_pair(&self.y1, &self.y2, &self.x, v, self.window, self.order);
        let mut vars: Vec<VarSpec> = self.scalar.vars().to_vec();
        vars.push(VarSpec::window(&self.x, self.window.0, self.window.1));
        let caps: Vec<TotalCap> = self.scalar.caps().to_vec();
        let mut out = MultiSeries::new(vars);
        for cap in caps {
            let names: Vec<&str> = cap.vars.iter().map(String::as_str).collect();
            out = out.with_cap(&names, cap.max);
        }
        for (e, c) in normal.terms() {
            out.add_term(e.clone(), c, &Rational::one());
        }
        for (e, c) in self.scalar.terms() {
            out.add_term(vec![e[0], e[1], 0], v, c);
        }
        out
    }
}

pub fn plusplus_pair(
    y1: &str,
    y2: &str,
    x: &str,
    v: &FockVector,
    window: (i64, i64),
    order: i64,
    conv: &ExpansionConvention,
) -> Result<MultiSeries<FockVector>> {
    Ok(PlusPlusPair::new(y1, y2, x, window, order, conv)?.apply(v))
}

/// `L̄^{(y1,y2)}(x) v = ½ ++h(e^{y1}x) h(e^{y2}x)++ v`.
pub fn lbar_generating(
    v: &FockVector,
    window: (i64, i64),
    order: i64,
    conv: &ExpansionConvention,
) -> Result<MultiSeries<FockVector>> {
    Ok(plusplus_pair("y1", "y2", "x", v, window, order, conv)?.scale(&Rational::new(1, 2)))
}

/// `h(x1)h(x2) v = :h(x1)h(x2): v + x2 ∂/∂x2 (1 - x2/x1)^{-1} v` on the window `[-w, w]²`.
pub fn contraction_check(v: &FockVector, w: i64) -> VerificationReport {
    let mut report = VerificationReport::new("contraction").param("window", w).param("vector", v);
    let vars = vec![VarSpec::window("x1", -w, w), VarSpec::window("x2", -w, w)];
    // iterated: h(x2) first, then h(x1)
    let lhs = MultiSeries::from_fn(vars.clone(), Vec::new(), |e| h_apply(-e[0], &h_apply(-e[1], v)));
    let normal = MultiSeries::from_fn(vars.clone(), Vec::new(), |e| normal_pair(-e[0], -e[1], v));
    // the geometric series Σ_{k≥0} (x2/x1)^k is the k ≥ 0 half of δ(x2/x1)
    let half_delta: MultiSeries<Rational> = {
        let d = delta_series(vars.clone(), &[-1, 1]).expect("nonconstant ratio");
        let mut s = MultiSeries::new(vars.clone());
        for (e, c) in d.terms().filter(|(e, _)| e[1] >= 0) {
            s.add_term(e.clone(), c, &Rational::one());
        }
        s
    };
    let contraction = half_delta.euler_derivative("x2").expect("x2 present");
    let rhs = normal.add(&contraction.map_coeffs(|c| v.scale(c))).expect("same variables");
    for cell in lhs.region_cells() {
        let l = lhs.coefficient(&cell).expect("certified");
        let r = rhs.coefficient(&cell).expect("certified");
        report.compare(json!({ "x1": cell[0], "x2": cell[1] }), l, r);
    }
    report
}

/// `(r!)² [y1^r y2^r x^{-n}] L̄^{(y1,y2)}(x) = L̄^{(r)}(n)` on every basis vector of weight `≤ w`.
pub fn diagonal_extraction_check(
    r_max: u32,
    n_max: i64,
    w: i64,
    conv: &ExpansionConvention,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("diagonal_extraction")
        .param("r_max", r_max)
        .param("n_max", n_max)
        .param("weight", w)
        .param("convention", conv);
    let order = 2 * r_max as i64;
    let pair = PlusPlusPair::new("y1", "y2", "x", (-n_max, n_max), order, conv)?;
    let half = Rational::new(1, 2);
    let results: Vec<_> = basis(w)
        .into_par_iter()
        .map(|m| {
            let v = FockVector::from_monomial(m.clone());
            let series = pair.apply(&v);
            let mut cells = Vec::new();
            for r in 0..=r_max {
                let rf = Rational::factorial(r);
                let k = &half * &rf * &rf;
                for n in -n_max..=n_max {
                    let c = series.coefficient(&[r as i64, r as i64, -n]).map(|c| c.scale(&k));
                    cells.push((json!({ "basis_vector": m, "r": r, "n": n }), c, lbar_apply(r, n, &v)));
                }
            }
            cells
        })
        .collect();
    for (key, lhs, rhs) in results.into_iter().flatten() {
        report.compare(key, lhs?, rhs);
    }
    Ok(report)
}
