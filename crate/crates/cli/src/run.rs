use serde_json::{json, Value};
use vertexcalc::formal::{bracket_identity_check, bracket_identity_conventions, contraction_check};
use vertexcalc::qseries::{chi_s, graded_dimension};
use vertexcalc::quadratic::{
    verify_diff_op_projection, verify_modified_virasoro, verify_monomial_purity, verify_virasoro,
};
use vertexcalc::report::SCHEMA_VERSION;
use vertexcalc::voa::{axiom_suite, dilation_jacobi_check, jacobi_check, weak_comm_check, Windows};
use vertexcalc::zeta::{bernoulli, zeta_nonpositive};
use vertexcalc::{basis, CellFilter, FockVector, Rational, VerificationReport};

use crate::config::{Command, Format, JacobiArgs, RunConfig};

pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

fn basis_vectors(weight: i64) -> Vec<FockVector> {
    basis(weight).into_iter().map(FockVector::from_monomial).collect()
}

fn table(
    config: &RunConfig,
    name: &str,
    index: &str,
    rows: Vec<(i64, Rational)>,
    extra: Option<(&str, Value)>,
) -> Outcome {
    let text = match config.format.unwrap_or_default() {
        Format::Json => {
            let mut doc = json!({
                "schema": SCHEMA_VERSION,
                "table": name,
                "rows": rows.iter().map(|(k, v)| json!({ index: k, "value": v })).collect::<Vec<_>>(),
            });
            if let Some((k, v)) = extra {
                doc[k] = v;
            }
            serde_json::to_string_pretty(&doc).expect("table serializes") + "\n"
        }
        Format::Text => {
            let mut out = String::new();
            if let Some((k, v)) = extra {
                out += &format!("{k} = {}\n", v.as_str().map(str::to_string).unwrap_or(v.to_string()));
            }
            for (k, v) in &rows {
                out += &format!("{name}({k}) = {v}\n");
            }
            out
        }
    };
    Outcome { text, pass: true }
}

fn render(config: &RunConfig, mut report: VerificationReport) -> Outcome {
    let filter: CellFilter = config.cells.unwrap_or_default().into();
    report.apply_filter(filter);
    let pass = report.passed();
    let text = match config.format.unwrap_or_default() {
        Format::Json => report.to_json() + "\n",
        Format::Text => {
            let mut out = report.to_string();
            // passing cells are listed only on request
            let listed = if config.cells.is_some() { report.cells.as_slice() } else { &[] };
            for c in listed.iter().filter(|c| c.pass) {
                out += &format!("  ok {}: {}\n", c.key, serde_json::to_string(&c.lhs).unwrap_or_default());
            }
            out
        }
    };
    Outcome { text, pass }
}

fn combine(identity: &str, parts: Vec<VerificationReport>) -> VerificationReport {
    let mut out = VerificationReport::new(identity);
    for p in parts {
        out.absorb(p, "");
    }
    out
}

fn windows(a: &JacobiArgs) -> Windows {
    let sym = [-a.window, a.window];
    Windows {
        x0: a.x0.map_or(sym, |r| r.0),
        x1: a.x1.map_or(sym, |r| r.0),
        x2: a.x2.map_or(sym, |r| r.0),
        ydeg: a.ydeg,
        weight: a.weight,
    }
}

type Check = fn(&FockVector, &FockVector, &FockVector, &Windows) -> vertexcalc::Result<VerificationReport>;

fn jacobi_family(identity: &str, a: &JacobiArgs, check: Check) -> Result<VerificationReport, String> {
    let win = windows(a);
    let ws = match &a.w {
        Some(w) => vec![w.vector.clone()],
        None => basis_vectors(a.weight),
    };
    let mut parts = Vec::new();
    for w in &ws {
        parts.push(check(&a.u.vector, &a.v.vector, w, &win).map_err(|e| e.to_string())?);
    }
    let mut out = combine(identity, parts);
    out.set_param("u", &a.u);
    out.set_param("v", &a.v);
    out.set_param("ws", &ws);
    out.set_param("windows", win);
    Ok(out)
}

pub fn run(config: &RunConfig) -> Result<Outcome, String> {
    let report = match &config.command {
        Command::Bernoulli(a) => {
            let rows = (0..=a.max).map(|k| (k as i64, bernoulli(k))).collect();
            return Ok(table(config, "B", "k", rows, None));
        }
        Command::Zeta(a) => {
            let rows = (0..=a.max).map(|n| (-(n as i64), zeta_nonpositive(n))).collect();
            return Ok(table(config, "zeta", "s", rows, None));
        }
        Command::Qdim(a) => {
            let s = graded_dimension(a.max);
            let rows = (0..=a.max as i64).map(|n| (n, s.coeff(n).expect("in range").clone())).collect();
            return Ok(table(config, "dim", "n", rows, None));
        }
        Command::Chi(a) => {
            let c = chi_s(a.max);
            let rows = (0..=a.max as i64).map(|n| (n, c.series.coeff(n).expect("in range").clone())).collect();
            return Ok(table(config, "chi", "n", rows, Some(("shift", json!(c.shift)))));
        }
        Command::VerifyVirasoro(a) => verify_virasoro(a.m, a.n, a.weight),
        Command::VerifyModified(a) => verify_modified_virasoro(a.m, a.n, a.weight),
        Command::VerifyBlochPurity(a) => {
            let m_max = a.m_max.unwrap_or(6.max(2 * (a.r + a.s) as i64 + 4));
            verify_monomial_purity(a.r, a.s, m_max, a.weight)
        }
        Command::VerifyDiffop(a) => verify_diff_op_projection(a.r, a.s, a.m, a.n, a.weight, a.p_max),
        Command::VerifyContraction(a) => {
            let parts = basis_vectors(a.weight).iter().map(|v| contraction_check(v, a.window)).collect();
            combine("contraction", parts).param("weight", a.weight).param("window", a.window)
        }
        Command::VerifyThm31(a) => match a.convention {
            None => bracket_identity_conventions(a.weight, a.window, a.ydeg).map_err(|e| e.to_string())?,
            Some(c) => {
                let conv = c.expansion();
                let parts = basis_vectors(a.weight)
                    .iter()
                    .map(|v| bracket_identity_check(v, a.window, a.ydeg, &conv))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| e.to_string())?;
                combine("bracket_identity", parts)
                    .param("weight", a.weight)
                    .param("window", a.window)
                    .param("y_degree", a.ydeg)
                    .param("convention", c)
            }
        },
        Command::VerifyAxioms(a) => axiom_suite(a.weight, a.modes),
        Command::VerifyJacobi(a) => jacobi_family("jacobi", a, jacobi_check)?,
        Command::VerifyThm42(a) => jacobi_family("dilation_jacobi", a, dilation_jacobi_check)?,
        Command::VerifyWeakComm(a) => {
            let ws = basis_vectors(a.weight);
            weak_comm_check(&a.u.vector, &a.v.vector, &ws, a.window, a.n_max)
        }
    };
    Ok(render(config, report))
}
