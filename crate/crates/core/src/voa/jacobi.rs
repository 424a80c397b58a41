use rayon::prelude::*;
use serde_json::json;

use super::{max_weight, omega, x_apply, y_apply, zhu_bracket_apply, Windows};
use crate::error::Result;
use crate::fock::FockVector;
use crate::power_series::{series_exp_log, ExpLog, PowerSeries};
use crate::quadratic::l_apply;
use crate::rational::Rational;
use crate::report::VerificationReport;

fn sign(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Coefficient of `x0^a0 x1^a1 x2^a2` in `x0^{-1}δ((x1-x2)/x0) A(x1)B(x2) w`, with
/// `(x1-x2)^k` expanded in nonnegative powers of `x2`; `idx(s, t, e)` is the `x^e`
/// coefficient of the vertex operator of `s` applied to `t`.
fn delta_first<F>(a: [i64; 3], u: &FockVector, v: &FockVector, w: &FockVector, i_max: i64, idx: F) -> FockVector
where
    F: Fn(&FockVector, &FockVector, i64) -> FockVector + Copy,
{
    let [a0, a1, a2] = a;
    let k = -a0 - 1;
    let mut out = FockVector::zero();
    for i in 0..=i_max {
        let c = Rational::binomial(k, i) * sign(i);
        if c.is_zero() {
            continue;
        }
        let inner = idx(v, w, a2 - i);
        if inner.is_zero() {
            continue;
        }
        out.add_scaled(&idx(u, &inner, a1 - k + i), &c);
    }
    out
}

/// `x0^{-1}δ((x1-x2)/x0) B(x2)A(x1)`, expanded in nonnegative powers of `x1`.
fn delta_second<F>(a: [i64; 3], u: &FockVector, v: &FockVector, w: &FockVector, i_max: i64, idx: F) -> FockVector
where
    F: Fn(&FockVector, &FockVector, i64) -> FockVector + Copy,
{
    let [a0, a1, a2] = a;
    let k = -a0 - 1;
    let mut out = FockVector::zero();
    for i in 0..=i_max {
        let c = Rational::binomial(k, i) * sign(k - i);
        if c.is_zero() {
            continue;
        }
        let inner = idx(u, w, a1 - i);
        if inner.is_zero() {
            continue;
        }
        out.add_scaled(&idx(v, &inner, a2 - k + i), &c);
    }
    out
}

/// Y-modes indexed by the exponent of the formal variable: coefficient of `x^{e}` in `Y(s,x)t`.
fn y_exp(s: &FockVector, t: &FockVector, e: i64) -> FockVector {
    y_apply(s, t, -e - 1)
}

/// X-modes indexed the same way: coefficient of `x^{e}` in `X(s,x)t`.
fn x_exp(s: &FockVector, t: &FockVector, e: i64) -> FockVector {
    x_apply(s, t, -e)
}

/// The classical left-hand side `T1 - T2` at one cell.
fn jacobi_lhs(a: [i64; 3], u: &FockVector, v: &FockVector, w: &FockVector) -> FockVector {
    let (wu, wv, ww) = (max_weight(u), max_weight(v), max_weight(w));
    let t1 = delta_first(a, u, v, w, (a[2] + wv + ww).max(-1), y_exp);
    let t2 = delta_second(a, u, v, w, (a[1] + wu + ww).max(-1), y_exp);
    t1.sub(&t2)
}

/// `x2^{-1}δ((x1-x0)/x2) Y(Y(u,x0)v, x2) w` at one cell.
fn jacobi_rhs(a: [i64; 3], u: &FockVector, v: &FockVector, w: &FockVector) -> FockVector {
    let [a0, a1, a2] = a;
    let i_max = a0 + max_weight(u) + max_weight(v);
    let mut out = FockVector::zero();
    for i in 0..=i_max {
        let k = a1 + i;
        let c = Rational::binomial(k, i) * sign(i);
        if c.is_zero() {
            continue;
        }
        let uv = y_apply(u, v, i - a0 - 1);
        if uv.is_zero() {
            continue;
        }
        out.add_scaled(&y_apply(&uv, w, -k - 2 - a2), &c);
    }
    out
}

/// Closed-form brackets for the two generating pairs, used as an independent residue check.
fn known_commutator(u: &FockVector, v: &FockVector, w: &FockVector, a1: i64, a2: i64) -> Option<FockVector> {
    let h1 = FockVector::mono(&[1]);
    let om = omega();
    if *u == h1 && *v == h1 {
        let (m, n) = (-a1 - 1, -a2 - 1);
        let c = if m + n == 0 { Rational::from_integer(m) } else { Rational::zero() };
        return Some(w.scale(&c));
    }
    if *u == om && *v == om {
        let (m, n) = (-a1 - 2, -a2 - 2);
        let mut out = l_apply(m + n, w).scale(&Rational::from_integer(m - n));
        if m + n == 0 {
            out.add_scaled(w, &Rational::new(m * m * m - m, 12));
        }
        return Some(out);
    }
    None
}

fn cell_key(a: [i64; 3], kind: &str) -> serde_json::Value {
    json!({ "check": kind, "x0": a[0], "x1": a[1], "x2": a[2] })
}

/// Every cell of the classical three-term identity, plus the `x0`-residue compared with
/// the directly computed commutator.
pub fn jacobi_check(u: &FockVector, v: &FockVector, w: &FockVector, windows: &Windows) -> Result<VerificationReport> {
    let cells = windows.cells()?;
    let mut report =
        VerificationReport::new("jacobi").param("u", u).param("v", v).param("w", w).param("windows", windows);
    let computed: Vec<_> = cells.par_iter().map(|&a| (a, jacobi_lhs(a, u, v, w), jacobi_rhs(a, u, v, w))).collect();
    for (a, lhs, rhs) in computed {
        report.compare(cell_key(a, "jacobi"), lhs, rhs.clone());
        if a[0] == -1 {
            let direct = y_exp(u, &y_exp(v, w, a[2]), a[1]).sub(&y_exp(v, &y_exp(u, w, a[1]), a[2]));
            report.compare(cell_key(a, "residue"), rhs.clone(), direct);
            if let Some(formula) = known_commutator(u, v, w, a[1], a[2]) {
                report.compare(cell_key(a, "bracket_formula"), rhs, formula);
            }
        }
    }
    Ok(report)
}

/// `[t^m] Y[u, -log(1-t)] v` for `m ≤ d`, indexed from `m = -low`.
fn zhu_in_log(u: &FockVector, v: &FockVector, d: i64) -> Result<(i64, Vec<FockVector>)> {
    let zhu = zhu_bracket_apply(u, v, d)?;
    let low = max_weight(u) + max_weight(v);
    let order = (d + low + 1) as usize;
    let one_minus_t = PowerSeries::from_coeffs([Rational::one(), -Rational::one()], order);
    let minus_log = series_exp_log(&one_minus_t, ExpLog::Log)?.scale(&-Rational::one());
    // -log(1-t)/t
    let ratio = PowerSeries::from_fn(order - 1, |i| minus_log.coeff(i as i64 + 1).expect("in range").clone());
    let mut out = vec![FockVector::zero(); (d + low + 1) as usize];
    for j in -low..=d {
        let c = zhu.coefficient(&[j])?;
        if c.is_zero() {
            continue;
        }
        let pow = ratio.powi(j)?;
        for m in j..=d {
            out[(m + low) as usize].add_scaled(&c, pow.coeff(m - j)?);
        }
    }
    Ok((low, out))
}

/// `x2^{-1}δ((x1-x0)/x2) X(Y[u,-y01]v, x2) w` at one cell; `None` beyond the certified `x0`-degree.
fn dilation_rhs(a: [i64; 3], low: i64, d: i64, zhu: &[FockVector], w: &FockVector) -> Option<FockVector> {
    let [a0, a1, a2] = a;
    if a0 > d {
        return None;
    }
    let k = a0 + a1;
    let n = -k - 1 - a2;
    let mut out = FockVector::zero();
    for m in -low..=a0 {
        let c = Rational::binomial(k, a0 - m) * sign(a0 - m);
        let r = &zhu[(m + low) as usize];
        if c.is_zero() || r.is_zero() {
            continue;
        }
        out.add_scaled(&x_apply(r, w, n), &c);
    }
    Some(out)
}

fn dilation_lhs(a: [i64; 3], u: &FockVector, v: &FockVector, w: &FockVector) -> FockVector {
    let ww = max_weight(w);
    // X-modes lower weight by their index, so X_n t = 0 once n > wt t.
    let t1 = delta_first(a, u, v, w, (a[2] + ww).max(-1), x_exp);
    let t2 = delta_second(a, u, v, w, (a[1] + ww).max(-1), x_exp);
    t1.sub(&t2)
}

/// The dilation-variable Jacobi identity, cell by cell, with its `x0`-residue compared
/// against `[X(u,x1), X(v,x2)] w` and, for homogeneous `u, v`, each side compared with the
/// classical identity after the shift `x1^{wt u} x2^{wt v}`.
pub fn dilation_jacobi_check(
    u: &FockVector,
    v: &FockVector,
    w: &FockVector,
    windows: &Windows,
) -> Result<VerificationReport> {
    let cells = windows.cells()?;
    let d = windows.ydeg;
    let (low, zhu) = zhu_in_log(u, v, d)?;
    let shift = u.weight().ok().zip(v.weight().ok());
    let mut report =
        VerificationReport::new("dilation_jacobi").param("u", u).param("v", v).param("w", w).param("windows", windows);
    let computed: Vec<_> =
        cells.par_iter().map(|&a| (a, dilation_lhs(a, u, v, w), dilation_rhs(a, low, d, &zhu, w))).collect();
    let mut skipped = 0;
    for (a, lhs, rhs) in computed {
        if a[0] == -1 {
            let direct = x_exp(u, &x_exp(v, w, a[2]), a[1]).sub(&x_exp(v, &x_exp(u, w, a[1]), a[2]));
            report.compare(cell_key(a, "residue_lhs"), lhs.clone(), direct.clone());
            if let Some(r) = &rhs {
                report.compare(cell_key(a, "residue_rhs"), r.clone(), direct);
            }
        }
        if let Some((su, sv)) = shift {
            let b = [a[0], a[1] - su, a[2] - sv];
            report.compare(cell_key(a, "classical_lhs"), lhs.clone(), jacobi_lhs(b, u, v, w));
            if let Some(r) = &rhs {
                report.compare(cell_key(a, "classical_rhs"), r.clone(), jacobi_rhs(b, u, v, w));
            }
        }
        match rhs {
            Some(r) => {
                report.compare(cell_key(a, "dilation_jacobi"), lhs, r);
            }
            None => skipped += 1,
        }
    }
    report.uncertified(skipped);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_small() {
        let h1 = FockVector::mono(&[1]);
        let w = FockVector::mono(&[1]);
        let r = jacobi_check(&h1, &h1, &w, &Windows::symmetric(3, 2, 1)).unwrap();
        assert!(r.passed(), "{r}");
        let om = omega();
        let r = jacobi_check(&om, &h1, &FockVector::vacuum(), &Windows::symmetric(3, 2, 0)).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn swapped_iterate_is_detected() {
        let h1 = FockVector::mono(&[1]);
        let v = FockVector::mono(&[2]);
        let w = FockVector::vacuum();
        let mut distinguished = false;
        for a in Windows::symmetric(3, 0, 0).cells().unwrap() {
            let lhs = jacobi_lhs(a, &h1, &v, &w);
            assert_eq!(lhs, jacobi_rhs(a, &h1, &v, &w), "{a:?}");
            distinguished |= lhs != jacobi_rhs(a, &v, &h1, &w);
        }
        assert!(distinguished);
    }

    #[test]
    fn dilation_jacobi_small() {
        let h1 = FockVector::mono(&[1]);
        let r = dilation_jacobi_check(&h1, &h1, &FockVector::vacuum(), &Windows::symmetric(3, 2, 0)).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.summary.uncertified, 7 * 7);
    }

    #[test]
    fn dilation_jacobi_vacuum_u() {
        let one = FockVector::vacuum();
        let v = FockVector::mono(&[2]);
        let r = dilation_jacobi_check(&one, &v, &FockVector::mono(&[1]), &Windows::symmetric(3, 3, 1)).unwrap();
        assert!(r.passed(), "{r}");
    }
}
