use serde_json::json;

use super::matrix::{commutator, to_matrix, GradedOperator};
use super::OperatorSpec;
use crate::error::{Error, Result};
use crate::fock::{diff_op_apply, FockVector, LaurentPoly};
use crate::linalg::{interpolate, solve};
use crate::rational::Rational;
use crate::report::VerificationReport;

/// `lhs = Σ_j operator_part[j] · family[j] + scalar_part · Id + residual`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralDecomposition {
    pub operator_part: Vec<Rational>,
    pub scalar_part: Rational,
    pub residual: GradedOperator,
    /// Whether the fitted coefficients are determined by the data up to the certified weight.
    pub unique: bool,
}

impl CentralDecomposition {
    pub fn is_exact(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Fits `lhs` against `family` (and the identity, if requested) by exact linear algebra
/// over every basis image in `lhs`'s domain.
pub fn decompose(
    lhs: &GradedOperator,
    family: &[GradedOperator],
    include_identity: bool,
) -> Result<CentralDecomposition> {
    let bound = lhs.domain_bound();
    if family.iter().any(|f| f.domain_bound() < bound || f.degree() != lhs.degree()) {
        return Err(Error::Incompatible("family does not cover the commutator's domain".into()));
    }
    if include_identity && lhs.degree() != 0 {
        return Err(Error::Incompatible("identity has degree 0".into()));
    }
    let cols = family.len() + usize::from(include_identity);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (m, image) in lhs.columns() {
        let fam: Vec<&FockVector> = family.iter().map(|f| f.column(m)).collect::<Result<_>>()?;
        let mut targets: Vec<_> = image.terms().map(|(t, _)| t.clone()).collect();
        for f in &fam {
            targets.extend(f.terms().map(|(t, _)| t.clone()));
        }
        if include_identity {
            targets.push(m.clone());
        }
        targets.sort();
        targets.dedup();
        for t in targets {
            let mut row: Vec<Rational> = fam.iter().map(|f| f.coeff(&t)).collect();
            if include_identity {
                row.push(if &t == m { Rational::one() } else { Rational::zero() });
            }
            a.push(row);
            b.push(image.coeff(&t));
        }
    }
    let sol = solve(&a, &b, cols)?;
    let mut terms: Vec<(Rational, &GradedOperator)> = vec![(Rational::one(), lhs)];
    for (c, f) in sol.x.iter().zip(family) {
        terms.push((-c, f));
    }
    let identity = GradedOperator::identity(bound);
    let scalar_part = if include_identity { sol.x[family.len()].clone() } else { Rational::zero() };
    if include_identity {
        terms.push((-&scalar_part, &identity));
    }
    let residual = GradedOperator::linear_combination(&terms)?.restrict(bound);
    if !residual.is_zero() {
        return Err(Error::FitFailed("nonzero residual".into()));
    }
    Ok(CentralDecomposition {
        operator_part: sol.x[..family.len()].to_vec(),
        scalar_part,
        residual,
        unique: sol.unique,
    })
}

fn bracket(a: OperatorSpec, b: OperatorSpec, w: i64) -> Result<GradedOperator> {
    let am = to_matrix(&a, w + b.degree().abs());
    let bm = to_matrix(&b, w + a.degree().abs());
    commutator(&am, &bm, w)
}

/// Decomposes `[L^{(r)}(m), L^{(s)}(n)]` (or its regularized form) against
/// `{L^{(j)}(m+n) : j ≤ r+s}` and, when `m + n = 0`, the identity.
pub fn bracket_decompose(r: u32, s: u32, m: i64, n: i64, w: i64, regularized: bool) -> Result<CentralDecomposition> {
    let op = |r, n| {
        if regularized {
            OperatorSpec::Lbar { r, n }
        } else {
            OperatorSpec::Lr { r, n }
        }
    };
    let lhs = bracket(op(r, m), op(s, n), w)?;
    let family: Vec<_> = (0..=r + s).map(|j| to_matrix(&op(j, m + n), w)).collect();
    decompose(&lhs, &family, m + n == 0)
}

/// [`bracket_decompose`] with the zeta-regularized operators `L̄^{(j)}`.
pub fn central_decompose(r: u32, s: u32, m: i64, n: i64, w: i64) -> Result<CentralDecomposition> {
    bracket_decompose(r, s, m, n, w, true)
}

fn verify_bracket_cells(
    report: &mut VerificationReport,
    a: OperatorSpec,
    b: OperatorSpec,
    w: i64,
    rhs: impl Fn(&FockVector) -> FockVector,
) {
    let lhs = match bracket(a, b, w) {
        Ok(l) => l,
        Err(_) => {
            report.uncertified(1);
            return;
        }
    };
    report.set_param("certified_weight", lhs.domain_bound());
    for (m, image) in lhs.columns() {
        let expected = rhs(&FockVector::from_monomial(m.clone()));
        report.compare(json!({ "basis_vector": m }), image.clone(), expected);
    }
}

/// `[L(m), L(n)] = (m-n) L(m+n) + (m³-m)/12 δ_{m+n,0}` on every basis vector of weight `≤ w`.
pub fn verify_virasoro(m: i64, n: i64, w: i64) -> VerificationReport {
    let central = if m + n == 0 { Rational::new(m * m * m - m, 12) } else { Rational::zero() };
    let mut report = VerificationReport::new("virasoro").param("m", m).param("n", n).param("weight", w);
    let k = Rational::from_integer(m - n);
    verify_bracket_cells(&mut report, OperatorSpec::L { n: m }, OperatorSpec::L { n }, w, |v| {
        let mut out = OperatorSpec::L { n: m + n }.apply(v).scale(&k);
        out.add_scaled(v, &central);
        out
    });
    report.record("central_term", &central);
    report
}

/// `[L̄(m), L̄(n)] = (m-n) L̄(m+n) + m³/12 δ_{m+n,0}`.
pub fn verify_modified_virasoro(m: i64, n: i64, w: i64) -> VerificationReport {
    let central = if m + n == 0 { Rational::new(m * m * m, 12) } else { Rational::zero() };
    let mut report = VerificationReport::new("modified_virasoro").param("m", m).param("n", n).param("weight", w);
    let k = Rational::from_integer(m - n);
    let lbar = |n| OperatorSpec::Lbar { r: 0, n };
    verify_bracket_cells(&mut report, lbar(m), lbar(n), w, |v| {
        let mut out = lbar(m + n).apply(v).scale(&k);
        out.add_scaled(v, &central);
        out
    });
    report.record("central_term", &central);
    report
}

/// Interpolates the scalar of `[L̄^{(r)}(m), L̄^{(s)}(-m)]` for `m = 1..=m_max` and checks
/// that it is a single monomial in `m`.
pub fn verify_monomial_purity(r: u32, s: u32, m_max: i64, w: i64) -> VerificationReport {
    let deg = 2 * (r + s) as usize + 3;
    let mut report = VerificationReport::new("monomial_purity")
        .param("r", r)
        .param("s", s)
        .param("m_max", m_max)
        .param("weight", w)
        .param("degree_bound", deg);
    let mut points = Vec::new();
    for m in 0..=m_max {
        match central_decompose(r, s, m, -m, w) {
            Ok(d) => {
                report.compare(
                    json!({ "m": m, "check": "unique_fit" }),
                    Rational::from(d.unique as i64),
                    Rational::one(),
                );
                if m == 0 {
                    report.compare(json!({ "m": 0, "check": "scalar" }), d.scalar_part, Rational::zero());
                } else {
                    points.push((Rational::from_integer(m), d.scalar_part));
                }
            }
            Err(e) => {
                report.record(&format!("fit_error_m{m}"), e.to_string());
                report.compare(json!({ "m": m, "check": "fit" }), Rational::zero(), Rational::one());
            }
        }
    }
    report.record("scalars", points.iter().map(|(m, c)| json!({ "m": m, "scalar": c })).collect::<Vec<_>>());
    let coeffs = match interpolate(&points, deg) {
        Ok(c) => c,
        Err(e) => {
            report.record("interpolation_error", e.to_string());
            report.compare(json!({ "check": "interpolation" }), Rational::zero(), Rational::one());
            return report;
        }
    };
    let nonzero: Vec<(usize, &Rational)> = coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
    report.record("polynomial", &coeffs);
    report.compare(json!({ "check": "nonzero_coefficients" }), Rational::from(nonzero.len()), Rational::one());
    if let [(e, c)] = nonzero[..] {
        report.record("exponent", e);
        report.record("coefficient", c);
        for (m, scalar) in &points {
            report.compare(json!({ "m": m, "check": "monomial" }), scalar.clone(), c * m.pow(e as i32));
        }
    }
    report
}

/// Maps the fitted operator part of `[L^{(r)}(m), L^{(s)}(n)]` to differential operators and
/// compares with the bracket of `(-1)^{r+1} D^r (t^m D) D^r` and its `s, n` analogue on `t^p`.
pub fn verify_diff_op_projection(r: u32, s: u32, m: i64, n: i64, w: i64, p_max: i64) -> VerificationReport {
    let mut report = VerificationReport::new("diff_op_projection")
        .param("r", r)
        .param("s", s)
        .param("m", m)
        .param("n", n)
        .param("weight", w)
        .param("p_max", p_max);
    let d = match bracket_decompose(r, s, m, n, w, false) {
        Ok(d) => d,
        Err(e) => {
            report.record("fit_error", e.to_string());
            report.compare(json!({ "check": "fit" }), Rational::zero(), Rational::one());
            return report;
        }
    };
    report.compare(json!({ "check": "unique_fit" }), Rational::from(d.unique as i64), Rational::one());
    report.record("operator_part", &d.operator_part);
    report.record("cocycle", &d.scalar_part);
    let k = m + n;
    for p in -p_max..=p_max {
        let tp = LaurentPoly::t_pow(p);
        let direct =
            diff_op_apply(r, m, &diff_op_apply(s, n, &tp)).sub(&diff_op_apply(s, n, &diff_op_apply(r, m, &tp)));
        let mut projected = LaurentPoly::zero();
        for (j, c) in d.operator_part.iter().enumerate() {
            projected = projected.add(&diff_op_apply(j as u32, k, &tp).scale(c));
        }
        report.compare(json!({ "p": p }), projected.coeff(p + k), direct.coeff(p + k));
        let stray = direct.sub(&projected);
        if stray.terms().any(|(e, _)| e != p + k) {
            report.compare(json!({ "p": p, "check": "off_degree" }), Rational::one(), Rational::zero());
        }
    }
    report
}
