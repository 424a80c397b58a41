use serde::{Deserialize, Serialize};

use super::series::{LinearForm, MultiSeries, Policy, TotalCap, VarSpec};
use crate::error::{Error, Result};
use crate::power_series::PowerSeries;
use crate::rational::Rational;

/// Which variable may carry negative powers when a pole `λ^{-k}` is expanded.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExpansionConvention {
    pub distinguished_variable: String,
}

impl ExpansionConvention {
    pub fn negative_powers_in(var: &str) -> Self {
        ExpansionConvention { distinguished_variable: var.to_string() }
    }
}

impl Default for ExpansionConvention {
    fn default() -> Self {
        Self::negative_powers_in("y1")
    }
}

/// `λ^{-k} · body` kept symbolic until a convention is chosen.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizedSeries {
    pole_form: LinearForm,
    pole_order: u32,
    body: MultiSeries<Rational>,
}

impl LocalizedSeries {
    pub fn new(pole_form: LinearForm, pole_order: u32, body: MultiSeries<Rational>) -> Result<Self> {
        if body.vars().iter().any(|v| !matches!(v.policy, Policy::NonNegTruncated { .. })) {
            return Err(Error::Incompatible("body must be a power series".into()));
        }
        for (v, _) in &pole_form.0 {
            body.var_index(v)?;
        }
        if pole_form.0.is_empty() {
            return Err(Error::InvalidParameter("empty pole form".into()));
        }
        Ok(LocalizedSeries { pole_form, pole_order, body })
    }

    pub fn pole_form(&self) -> &LinearForm {
        &self.pole_form
    }

    pub fn pole_order(&self) -> u32 {
        self.pole_order
    }

    pub fn body(&self) -> &MultiSeries<Rational> {
        &self.body
    }

    pub fn scale(&self, k: &Rational) -> Self {
        LocalizedSeries { body: self.body.scale(k), ..self.clone() }
    }

    pub fn mul_series(&self, other: &MultiSeries<Rational>) -> Result<Self> {
        Ok(LocalizedSeries { body: self.body.mul_series(other)?, ..self.clone() })
    }

    fn pole_poly(&self) -> Result<Vec<(Vec<i64>, Rational)>> {
        self.pole_form
            .0
            .iter()
            .map(|(v, c)| {
                let mut e = vec![0; self.body.vars().len()];
                e[self.body.var_index(v)?] = 1;
                Ok((e, Rational::from_integer(*c)))
            })
            .collect()
    }

    /// `∂(λ^{-k} B) = λ^{-k-1} (-k ∂λ · B + λ ∂B)`.
    pub fn derivative(&self, var: &str) -> Result<Self> {
        let k = self.pole_order as i64;
        let c = self.pole_form.coeff(var);
        let first = self.body.scale(&Rational::from_integer(-k * c));
        let second = self.body.derivative(var)?.mul_poly(&self.pole_poly()?)?;
        Ok(LocalizedSeries {
            pole_form: self.pole_form.clone(),
            pole_order: self.pole_order + 1,
            body: first.add(&second)?,
        })
    }

    /// Substitutes linear forms for body variables, in the pole form and in the body.
    pub fn substitute_linear(&self, subs: &[(&str, LinearForm)], new_vars: &[&str], cap: i64) -> Result<Self> {
        let mut form = LinearForm::default();
        for (v, c) in &self.pole_form.0 {
            let image = subs
                .iter()
                .find(|(n, _)| n == v)
                .map(|(_, f)| f.clone())
                .ok_or_else(|| Error::InvalidParameter(format!("pole variable {v} not substituted")))?;
            form = form.plus(&image.scaled(*c));
        }
        if form.0.is_empty() {
            return Err(Error::InvalidParameter("pole form vanishes after substitution".into()));
        }
        Ok(LocalizedSeries {
            pole_form: form,
            pole_order: self.pole_order,
            body: self.body.substitute_linear(subs, new_vars, cap)?,
        })
    }

    /// The coefficient at `e` (in body-variable order) after expanding `λ^{-k}` in
    /// nonnegative powers of every variable except the distinguished one.
    pub fn coefficient(&self, e: &[i64], conv: &ExpansionConvention) -> Result<Rational> {
        let vars = self.body.vars();
        if e.len() != vars.len() {
            return Err(Error::Incompatible("exponent length".into()));
        }
        let d = self.body.var_index(&conv.distinguished_variable)?;
        let cd = self.pole_form.coeff(&conv.distinguished_variable);
        if cd == 0 {
            return Err(Error::InvalidParameter(format!(
                "{} does not occur in the pole form",
                conv.distinguished_variable
            )));
        }
        if e.iter().enumerate().any(|(i, &k)| i != d && k < 0) {
            return Ok(Rational::zero());
        }
        let k = self.pole_order as i64;
        let rho: Vec<Rational> = vars.iter().map(|v| Rational::from_integer(self.pole_form.coeff(&v.name))).collect();
        let cd = Rational::from_integer(cd);
        let others: Vec<usize> = (0..vars.len()).filter(|&i| i != d).collect();
        let mut total = Rational::zero();
        // t_i = e_i - b_i is the exponent contributed by ρ^l in variable i
        let mut t = vec![0i64; vars.len()];
        loop {
            let l: i64 = others.iter().map(|&i| t[i]).sum();
            let bd = e[d] + k + l;
            let all_rho_present = others.iter().all(|&i| t[i] == 0 || !rho[i].is_zero());
            if bd >= 0 && all_rho_present {
                let mut b = e.to_vec();
                for &i in &others {
                    b[i] -= t[i];
                }
                b[d] = bd;
                let body = self.body.coefficient(&b)?;
                if !body.is_zero() {
                    let mut coef = Rational::binomial(-k, l) * cd.pow(-(k + l) as i32) * Rational::factorial(l as u32);
                    for &i in &others {
                        coef = coef * rho[i].pow(t[i] as i32) / Rational::factorial(t[i] as u32);
                    }
                    total += coef * body;
                }
            }
            // odometer over t_i in 0..=e_i
            let mut pos = 0;
            loop {
                if pos == others.len() {
                    return Ok(total);
                }
                let i = others[pos];
                if t[i] < e[i] {
                    t[i] += 1;
                    break;
                }
                t[i] = 0;
                pos += 1;
            }
        }
    }

    /// Expands into a series whose distinguished variable ranges over a window; every
    /// cell with total degree and non-distinguished degree `≤ max_total` is filled.
    /// Requires the body to be exact through total degree `max_total + k`.
    pub fn expand(&self, conv: &ExpansionConvention, max_total: i64) -> Result<MultiSeries<Rational>> {
        let k = self.pole_order as i64;
        let d = self.body.var_index(&conv.distinguished_variable)?;
        let names: Vec<String> = self.body.vars().iter().map(|v| v.name.clone()).collect();
        let vars: Vec<VarSpec> = names
            .iter()
            .enumerate()
            .map(|(i, n)| {
                // below -k minus the other degrees every cell vanishes; the extra margin keeps
                // those certified zeros addressable
                if i == d {
                    VarSpec::window(n, -2 * (k + max_total), max_total)
                } else {
                    VarSpec::truncated(n, max_total)
                }
            })
            .collect();
        let caps = vec![
            TotalCap { vars: names.clone(), max: max_total },
            TotalCap {
                vars: names.iter().enumerate().filter(|(i, _)| *i != d).map(|(_, n)| n.clone()).collect(),
                max: max_total,
            },
        ];
        let shell: MultiSeries<Rational> = MultiSeries::from_fn(vars.clone(), caps.clone(), |_| Rational::zero());
        let mut out = shell.clone();
        for cell in shell.region_cells() {
            let c = self.coefficient(&cell, conv)?;
            out.add_term(cell, &c, &Rational::one());
        }
        Ok(out)
    }
}

/// `u/(1 - e^{-u})` through `u^order`.
pub fn f_series(order: usize) -> Result<PowerSeries> {
    // (1 - e^{-u})/u = Σ_k (-1)^k u^k / (k+1)!
    let denom = PowerSeries::from_fn(order, |k| {
        let s = Rational::factorial(k as u32 + 1).recip();
        if k % 2 == 0 {
            s
        } else {
            -s
        }
    });
    denom.recip()
}

/// `1/(1 - e^{-y1+y2}) = (y1 - y2)^{-1} F(y1, y2)` with `F` exact through total degree `order`.
pub fn one_minus_exp_inverse(y1: &str, y2: &str, order: i64) -> Result<LocalizedSeries> {
    if order < 1 {
        return Err(Error::InvalidParameter("order must be at least 1".into()));
    }
    let f = f_series(order as usize)?;
    let mut u = MultiSeries::new(vec![VarSpec::truncated("u", order)]).with_cap(&["u"], order);
    for (k, c) in f.terms() {
        u.add_term(vec![k as i64], c, &Rational::one());
    }
    let body = u.substitute_linear(&[("u", LinearForm::new(&[(y1, 1), (y2, -1)]))], &[y1, y2], order)?;
    LocalizedSeries::new(LinearForm::new(&[(y1, 1), (y2, -1)]), 1, body)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn f_series_matches_bernoulli() {
        // u/(1-e^{-u}) = Σ (-1)^k B_k u^k / k!  (B_1 = -1/2)
        let f = f_series(10).unwrap();
        for k in 0..=10 {
            let b = crate::zeta::bernoulli(k) / Rational::factorial(k as u32);
            let expect = if k % 2 == 1 { -b } else { b };
            assert_eq!(f.coeff(k as i64).unwrap(), &expect);
        }
    }

    #[test]
    fn one_minus_exp_examples() {
        let s = one_minus_exp_inverse("y1", "y2", 6).unwrap();
        assert_eq!(s.body().coefficient(&[0, 0]).unwrap(), q(1, 1));
        let conv = ExpansionConvention::default();
        assert_eq!(s.coefficient(&[0, 0], &conv).unwrap(), q(1, 2));
        // diagonal profile: coefficient of y1^1 y2^0 picks the u^1 term 1/12
        assert_eq!(s.coefficient(&[1, 0], &conv).unwrap(), q(1, 12));
        // the pole term y1^{-1} appears only under the y1 convention
        assert_eq!(s.coefficient(&[-1, 0], &conv).unwrap(), q(1, 1));
        let alt = ExpansionConvention::negative_powers_in("y2");
        assert_eq!(s.coefficient(&[0, -1], &alt).unwrap(), q(-1, 1));
        assert_eq!(s.coefficient(&[0, 0], &alt).unwrap(), q(1, 2));
    }

    #[test]
    fn expansion_inverts_pole() {
        // λ · (λ^{-1} F) = F under either convention
        let s = one_minus_exp_inverse("y1", "y2", 6).unwrap();
        for conv in [ExpansionConvention::default(), ExpansionConvention::negative_powers_in("y2")] {
            let ex = s.expand(&conv, 4).unwrap();
            let times = ex.mul_poly(&[(vec![1, 0], q(1, 1)), (vec![0, 1], q(-1, 1))]).unwrap();
            for a in 0..=3i64 {
                for b in 0..=(3 - a) {
                    assert_eq!(times.coefficient(&[a, b]).unwrap(), s.body().coefficient(&[a, b]).unwrap());
                }
            }
        }
    }

    #[test]
    fn derivative_raises_pole_order() {
        let s = one_minus_exp_inverse("y1", "y2", 8).unwrap();
        let d = s.derivative("y1").unwrap();
        assert_eq!(d.pole_order(), 2);
        // -∂_{y1} 1/(1-e^{-u}) = u^{-2} - 1/12 + ...: constant term -1/12 before the sign
        let conv = ExpansionConvention::default();
        assert_eq!(d.coefficient(&[0, 0], &conv).unwrap(), q(1, 12));
        assert_eq!(d.coefficient(&[-2, 0], &conv).unwrap(), q(-1, 1));
        // direct route: derivative of the expanded series
        let ex = s.expand(&conv, 5).unwrap();
        let dex = ex.derivative("y1").unwrap();
        for cell in [[0, 0], [1, 0], [0, 1], [1, 1], [-2, 1], [-3, 2], [2, 1]] {
            assert_eq!(d.coefficient(&cell, &conv).unwrap(), dex.coefficient(&cell).unwrap(), "{cell:?}");
        }
    }
}
