//! The rank-one free boson vertex operator algebra on `S`: modes of `Y(v,x)`,
//! the weight-shifted `X(v,x)`, Zhu's `Y[u,y]`, and verifiers for its axioms and
//! Jacobi identities.

mod axioms;
mod jacobi;

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{h_apply, FockMonomial, FockVector};
use crate::formal::{MultiSeries, VarSpec};
use crate::power_series::PowerSeries;
use crate::rational::Rational;

pub use axioms::{axiom_suite, weak_comm_check};
pub use jacobi::{dilation_jacobi_check, jacobi_check};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VoaConstants {
    pub rank: Rational,
    pub vacuum: FockVector,
    pub omega: FockVector,
}

impl VoaConstants {
    pub fn free_boson() -> Self {
        VoaConstants { rank: Rational::one(), vacuum: FockVector::vacuum(), omega: omega() }
    }
}

/// `ω = ½ h(-1)²`.
pub fn omega() -> FockVector {
    FockVector::term(Rational::new(1, 2), FockMonomial::new(vec![1, 1]))
}

/// Coefficient windows for the three-variable identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Windows {
    pub x0: [i64; 2],
    pub x1: [i64; 2],
    pub x2: [i64; 2],
    /// Truncation order in `y` for Zhu's operator.
    pub ydeg: i64,
    /// Basis weight bound for the vectors acted on.
    pub weight: i64,
}

impl Windows {
    pub fn symmetric(radius: i64, ydeg: i64, weight: i64) -> Self {
        let r = [-radius, radius];
        Windows { x0: r, x1: r, x2: r, ydeg, weight }
    }

    pub(crate) fn cells(&self) -> Result<Vec<[i64; 3]>> {
        if [self.x0, self.x1, self.x2].iter().any(|w| w[0] > w[1]) {
            return Err(Error::WindowTooSmall);
        }
        let mut out = Vec::new();
        for a0 in self.x0[0]..=self.x0[1] {
            for a1 in self.x1[0]..=self.x1[1] {
                for a2 in self.x2[0]..=self.x2[1] {
                    out.push([a0, a1, a2]);
                }
            }
        }
        Ok(out)
    }
}

type ModeKey = (FockMonomial, FockMonomial, i64);

fn cache() -> &'static RwLock<HashMap<ModeKey, FockVector>> {
    static CACHE: OnceLock<RwLock<HashMap<ModeKey, FockVector>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Drops every memoized mode; used to time cold computations.
pub fn clear_mode_cache() {
    cache().write().expect("mode cache").clear();
}

/// `C(-n-1, k-1)`: the coefficient of `h(n) x^{-n-k}` in `(1/(k-1)!) (d/dx)^{k-1} Σ h(n) x^{-n-1}`.
fn derivative_coeff(k: u32, n: i64) -> Rational {
    Rational::binomial(-n - 1, k as i64 - 1)
}

/// `v_p w` for basis monomials.
fn mode_mono(v: &FockMonomial, w: &FockMonomial, p: i64) -> FockVector {
    if v.is_vacuum() {
        return if p == -1 { FockVector::from_monomial(w.clone()) } else { FockVector::zero() };
    }
    if p > v.weight() + w.weight() - 1 {
        return FockVector::zero();
    }
    let key = (v.clone(), w.clone(), p);
    if let Some(hit) = cache().read().expect("mode cache").get(&key) {
        return hit.clone();
    }

    // v = h(-k) u, Y(v,x) = :∂^{(k-1)}h(x) Y(u,x):
    let k = v.parts()[0];
    let u = v.without_part(k).expect("leading part");
    let k_i = k as i64;
    let mut out = FockVector::zero();
    for q in (p - k_i + 1)..=(u.weight() + w.weight() - 1) {
        let n = p - k_i - q;
        let c = derivative_coeff(k, n);
        if c.is_zero() {
            continue;
        }
        let inner = mode_mono(&u, w, q);
        if !inner.is_zero() {
            out.add_scaled(&h_apply(n, &inner), &c);
        }
    }
    for n in 1..=w.weight() {
        if let Some((a, w2)) = w.h_apply(n) {
            let c = derivative_coeff(k, n) * a;
            if !c.is_zero() {
                out.add_scaled(&mode_mono(&u, &w2, p - n - k_i), &c);
            }
        }
    }

    cache().write().expect("mode cache").insert(key, out.clone());
    out
}

/// The mode `v_n w`, where `Y(v,x) = Σ v_n x^{-n-1}`.
pub fn y_apply(v: &FockVector, w: &FockVector, n: i64) -> FockVector {
    let mut out = FockVector::zero();
    for (mv, cv) in v.terms() {
        for (mw, cw) in w.terms() {
            out.add_scaled(&mode_mono(mv, mw, n), &(cv * cw));
        }
    }
    out
}

/// Coefficient of `x^{-n}` in `X(v,x) w = x^{L(0)}`-shifted `Y(v,x) w`; lowers weight by `n`.
pub fn x_apply(v: &FockVector, w: &FockVector, n: i64) -> FockVector {
    let mut out = FockVector::zero();
    for (k, vk) in v.weight_components() {
        out.add_scaled(&y_apply(&vk, w, n + k - 1), &Rational::one());
    }
    out
}

fn max_weight(v: &FockVector) -> i64 {
    v.max_weight().unwrap_or(0)
}

/// `Y[u,y] v = Y(e^{y L(0)} u, e^y - 1) v`, a Laurent series in `y` exact through `y^d`.
pub fn zhu_bracket_apply(u: &FockVector, v: &FockVector, d: i64) -> Result<MultiSeries<FockVector>> {
    if d < 0 {
        return Err(Error::InvalidParameter("y-degree must be nonnegative".into()));
    }
    // Y(u,z)v has z-powers ≥ -low.
    let low = max_weight(u) + max_weight(v);
    let order = (d + low) as usize;
    // (e^y - 1)/y
    let unit = PowerSeries::from_fn(order, |i| Rational::factorial(i as u32 + 1).recip());
    let mut out = MultiSeries::new(vec![VarSpec::window("y", -low, d)]);
    for (k, uk) in u.weight_components() {
        let dilation = PowerSeries::exp_linear(&Rational::from_integer(k), order);
        for j in -low..=d {
            let mode = y_apply(&uk, v, -j - 1);
            if mode.is_zero() {
                continue;
            }
            // z^j e^{ky} = y^j · (unit^j e^{ky})
            let factor = unit.powi(j)?.mul(&dilation);
            for e in j..=d {
                let c = factor.coeff(e - j)?;
                out.add_term(vec![e], &mode, c);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::l_apply;

    fn h1() -> FockVector {
        FockVector::mono(&[1])
    }

    #[test]
    fn vacuum_modes() {
        let w = FockVector::mono(&[2, 1]);
        let one = FockVector::vacuum();
        assert_eq!(y_apply(&one, &w, -1), w);
        assert!(y_apply(&one, &w, 0).is_zero());
        assert!(y_apply(&one, &w, -2).is_zero());
    }

    #[test]
    fn h_minus_one_modes_are_h() {
        let w = FockVector::mono(&[3, 1, 1]);
        for n in -4..=4 {
            assert_eq!(y_apply(&h1(), &w, n), h_apply(n, &w), "n = {n}");
            assert_eq!(x_apply(&h1(), &w, n), h_apply(n, &w), "n = {n}");
        }
    }

    #[test]
    fn creation() {
        let v = FockVector::mono(&[3, 1]);
        let one = FockVector::vacuum();
        assert_eq!(y_apply(&v, &one, -1), v);
        for n in 0..6 {
            assert!(y_apply(&v, &one, n).is_zero());
        }
    }

    #[test]
    fn omega_modes_match_virasoro() {
        let om = omega();
        for w in crate::fock::basis(4) {
            let w = FockVector::from_monomial(w);
            for n in -3..=3 {
                assert_eq!(y_apply(&om, &w, n + 1), l_apply(n, &w));
                assert_eq!(x_apply(&om, &w, n), l_apply(n, &w));
            }
        }
    }

    #[test]
    fn zhu_bracket_scalar_part() {
        let s = zhu_bracket_apply(&h1(), &h1(), 4).unwrap();
        let vac = FockMonomial::vacuum();
        let at = |e: i64| s.coefficient(&[e]).unwrap().coeff(&vac);
        // e^y/(e^y - 1)^2 = y^-2 - 1/12 + y^2/240 - ...
        assert_eq!(at(-2), Rational::one());
        assert_eq!(at(-1), Rational::zero());
        assert_eq!(at(0), Rational::new(-1, 12));
        assert_eq!(at(2), Rational::new(1, 240));
    }

    #[test]
    fn zhu_bracket_vacuum() {
        let v = FockVector::mono(&[2, 1]);
        let s = zhu_bracket_apply(&FockVector::vacuum(), &v, 3).unwrap();
        assert_eq!(s.coefficient(&[0]).unwrap(), v);
        assert_eq!(s.len(), 1);
        let c = zhu_bracket_apply(&v, &FockVector::vacuum(), 3).unwrap();
        assert_eq!(c.coefficient(&[0]).unwrap(), v);
        assert!(c.coefficient(&[-1]).unwrap().is_zero());
    }
}
