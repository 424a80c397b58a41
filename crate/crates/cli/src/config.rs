use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use vertexcalc::formal::ExpansionConvention;
use vertexcalc::voa::omega;
use vertexcalc::{CellFilter, FockMonomial, FockVector};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cells {
    All,
    #[default]
    Nontrivial,
    Failures,
}

impl From<Cells> for CellFilter {
    fn from(c: Cells) -> Self {
        match c {
            Cells::All => CellFilter::All,
            Cells::Nontrivial => CellFilter::Nontrivial,
            Cells::Failures => CellFilter::Failures,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    NegPowersY1,
    NegPowersY2,
}

impl Convention {
    pub fn expansion(self) -> ExpansionConvention {
        match self {
            Convention::NegPowersY1 => ExpansionConvention::negative_powers_in("y1"),
            Convention::NegPowersY2 => ExpansionConvention::negative_powers_in("y2"),
        }
    }
}

/// A state named on the command line: `vacuum`, `h`, `omega`, or comma-separated parts such as `2,1,1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct State {
    name: String,
    pub vector: FockVector,
}

impl FromStr for State {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let vector = match t {
            "1" | "vacuum" => FockVector::vacuum(),
            "h" | "h(-1)" => FockVector::mono(&[1]),
            "omega" => omega(),
            _ => {
                let parts = t
                    .trim_matches(|c| c == '{' || c == '}')
                    .split(',')
                    .map(|p| p.trim().parse::<u32>().ok().filter(|&k| k > 0))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| format!("not a state: {s:?} (use vacuum, h, omega or parts like 2,1)"))?;
                FockVector::from_monomial(FockMonomial::new(parts))
            }
        };
        Ok(State { name: t.to_string(), vector })
    }
}

impl TryFrom<String> for State {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<State> for String {
    fn from(s: State) -> Self {
        s.name
    }
}

/// An inclusive exponent range written `LO,HI`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[i64; 2]")]
pub struct Range(pub [i64; 2]);

impl TryFrom<[i64; 2]> for Range {
    type Error = String;

    fn try_from(r: [i64; 2]) -> Result<Self, Self::Error> {
        if r[0] > r[1] {
            return Err(format!("empty range {},{}", r[0], r[1]));
        }
        Ok(Range(r))
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s.split_once(',').ok_or_else(|| format!("expected LO,HI, got {s:?}"))?;
        let parse = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"));
        Range::try_from([parse(lo)?, parse(hi)?])
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TableArgs {
    /// Largest index in the table.
    #[arg(long, default_value_t = 12)]
    pub max: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BracketArgs {
    #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
    pub m: i64,
    #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
    pub n: i64,
    /// Basis weight bound.
    #[arg(long, default_value_t = 6)]
    pub weight: i64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PurityArgs {
    #[arg(long, default_value_t = 0)]
    pub r: u32,
    #[arg(long, default_value_t = 0)]
    pub s: u32,
    /// Largest m sampled; defaults to max(6, 2(r+s)+4).
    #[arg(long)]
    pub m_max: Option<i64>,
    #[arg(long, default_value_t = 6)]
    pub weight: i64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiffopArgs {
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
    pub m: i64,
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    pub n: i64,
    #[arg(long, default_value_t = 6)]
    pub weight: i64,
    /// Test on t^p for |p| ≤ p_max.
    #[arg(long, default_value_t = 6)]
    pub p_max: i64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ContractionArgs {
    #[arg(long, default_value_t = 6)]
    pub weight: i64,
    /// Exponent window ±window in x1 and x2.
    #[arg(long, default_value_t = 12)]
    pub window: i64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BracketIdentityArgs {
    #[arg(long, default_value_t = 4)]
    pub weight: i64,
    /// Mode window ±window.
    #[arg(long, default_value_t = 5)]
    pub window: i64,
    /// Total y-degree of the compared cells.
    #[arg(long, default_value_t = 2)]
    pub ydeg: i64,
    /// Expansion convention; both are tried when omitted.
    #[arg(long, value_enum)]
    pub convention: Option<Convention>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AxiomArgs {
    #[arg(long, default_value_t = 5)]
    pub weight: i64,
    /// Mode indices ±modes.
    #[arg(long, default_value_t = 8)]
    pub modes: i64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JacobiArgs {
    #[arg(long, default_value = "h")]
    pub u: State,
    #[arg(long, default_value = "h")]
    pub v: State,
    /// A single vector to act on; every basis vector of weight ≤ weight otherwise.
    #[arg(long)]
    pub w: Option<State>,
    #[arg(long, default_value_t = 4)]
    pub weight: i64,
    /// Symmetric exponent window ±window, overridden per variable by --x0/--x1/--x2.
    #[arg(long, default_value_t = 6)]
    pub window: i64,
    #[arg(long)]
    pub x0: Option<Range>,
    #[arg(long)]
    pub x1: Option<Range>,
    #[arg(long)]
    pub x2: Option<Range>,
    /// y-degree of Zhu's operator (dilation identity only).
    #[arg(long, default_value_t = 4)]
    pub ydeg: i64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WeakCommArgs {
    #[arg(long, default_value = "h")]
    pub u: State,
    #[arg(long, default_value = "h")]
    pub v: State,
    #[arg(long, default_value_t = 2)]
    pub weight: i64,
    #[arg(long, default_value_t = 8)]
    pub window: i64,
    #[arg(long, default_value_t = 6)]
    pub n_max: u32,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum Command {
    /// Bernoulli numbers B_0..B_max.
    Bernoulli(TableArgs),
    /// ζ(-n) for n = 0..max.
    Zeta(TableArgs),
    /// Graded dimension of the Fock space through q^max.
    Qdim(TableArgs),
    /// The character 1/η(q): shift and coefficients through q^max.
    Chi(TableArgs),
    /// [L(m), L(n)] against the Virasoro relations.
    VerifyVirasoro(BracketArgs),
    /// [L̄(m), L̄(n)] against the modified relations.
    VerifyModified(BracketArgs),
    /// Monomial purity of the central term of [L̄^(r)(m), L̄^(s)(-m)].
    VerifyBlochPurity(PurityArgs),
    /// Operator part of [L^(r)(m), L^(s)(n)] against differential operators.
    VerifyDiffop(DiffopArgs),
    /// The contraction formula for h(x1)h(x2).
    VerifyContraction(ContractionArgs),
    /// The bracket identity for the zeta-regularized generating functions.
    VerifyThm31(BracketIdentityArgs),
    /// The vertex operator algebra axioms.
    VerifyAxioms(AxiomArgs),
    /// The classical Jacobi identity.
    VerifyJacobi(JacobiArgs),
    /// The Jacobi identity in dilation variables.
    VerifyThm42(JacobiArgs),
    /// Smallest n with (x1-x2)^n [Y(u,x1), Y(v,x2)] = 0.
    VerifyWeakComm(WeakCommArgs),
}

/// A run read from `--config`; unknown fields are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub format: Option<Format>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub cells: Option<Cells>,
}

#[derive(Parser)]
struct DefaultsOf<T: Args> {
    #[command(flatten)]
    inner: T,
}

macro_rules! clap_defaults {
    ($($t:ty),*) => {$(
        impl Default for $t {
            fn default() -> Self {
                DefaultsOf::<$t>::parse_from(["vertexcalc"]).inner
            }
        }
    )*};
}

clap_defaults!(
    TableArgs,
    BracketArgs,
    PurityArgs,
    DiffopArgs,
    ContractionArgs,
    BracketIdentityArgs,
    AxiomArgs,
    JacobiArgs,
    WeakCommArgs
);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn states_parse() {
        assert_eq!("vacuum".parse::<State>().unwrap().vector, FockVector::vacuum());
        assert_eq!("2,1".parse::<State>().unwrap().vector, FockVector::mono(&[2, 1]));
        assert_eq!("{1,2}".parse::<State>().unwrap().vector, FockVector::mono(&[2, 1]));
        assert!("0,1".parse::<State>().is_err());
        assert!("x".parse::<State>().is_err());
    }

    #[test]
    fn config_defaults_match_flags() {
        let c: RunConfig = serde_json::from_str(r#"{"command": {"name": "verify-jacobi", "u": "omega"}}"#).unwrap();
        match c.command {
            Command::VerifyJacobi(a) => {
                assert_eq!(a.u.vector, omega());
                assert_eq!(a.window, 6);
                assert_eq!(a.v.vector, FockVector::mono(&[1]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_fields_rejected() {
        let bad = r#"{"command": {"name": "zeta", "max": 3, "extra": 1}}"#;
        assert!(serde_json::from_str::<RunConfig>(bad).is_err());
        let bad = r#"{"command": {"name": "zeta"}, "colour": "red"}"#;
        assert!(serde_json::from_str::<RunConfig>(bad).is_err());
        let bad = r#"{"command": {"name": "verify-jacobi", "x0": [3, 1]}}"#;
        assert!(serde_json::from_str::<RunConfig>(bad).is_err());
    }
}
