//! Structured pass/fail records shared by every verifier.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::fock::FockVector;
use crate::rational::Rational;

pub const SCHEMA_VERSION: u32 = 1;

/// An exact witness value on one side of a compared cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CellValue {
    Scalar(Rational),
    Vector(FockVector),
}

impl CellValue {
    pub fn is_zero(&self) -> bool {
        match self {
            CellValue::Scalar(r) => r.is_zero(),
            CellValue::Vector(v) => v.is_zero(),
        }
    }
}

impl From<Rational> for CellValue {
    fn from(r: Rational) -> Self {
        CellValue::Scalar(r)
    }
}

impl From<FockVector> for CellValue {
    fn from(v: FockVector) -> Self {
        CellValue::Vector(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub key: Value,
    pub lhs: CellValue,
    pub rhs: CellValue,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: u64,
    pub passed: u64,
    pub failed: u64,
    pub uncertified: u64,
}

/// Which compared cells are kept in `cells`; the summary always counts all of them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellFilter {
    All,
    /// Skip cells where both sides are zero.
    #[default]
    Nontrivial,
    Failures,
}

impl CellFilter {
    pub fn keeps(self, cell: &Cell) -> bool {
        match self {
            CellFilter::All => true,
            CellFilter::Nontrivial => !cell.pass || !(cell.lhs.is_zero() && cell.rhs.is_zero()),
            CellFilter::Failures => !cell.pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub identity: String,
    pub parameters: BTreeMap<String, Value>,
    pub cells: Vec<Cell>,
    pub summary: Summary,
    /// Recorded data that is not itself a pass/fail comparison (central terms, exponents, ...).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub findings: BTreeMap<String, Value>,
    #[serde(skip)]
    filter: CellFilter,
}

impl VerificationReport {
    pub fn new(identity: impl Into<String>) -> Self {
        VerificationReport {
            schema: SCHEMA_VERSION,
            identity: identity.into(),
            parameters: BTreeMap::new(),
            cells: Vec::new(),
            summary: Summary::default(),
            findings: BTreeMap::new(),
            filter: CellFilter::All,
        }
    }

    /// Drops retained cells the filter rejects and applies it to later cells; counts are unchanged.
    pub fn apply_filter(&mut self, filter: CellFilter) {
        self.filter = filter;
        self.cells.retain(|c| filter.keeps(c));
    }

    pub fn with_filter(mut self, filter: CellFilter) -> Self {
        self.filter = filter;
        self
    }

    pub fn filter(&self) -> CellFilter {
        self.filter
    }

    pub fn param(mut self, name: &str, value: impl Serialize) -> Self {
        self.set_param(name, value);
        self
    }

    pub fn set_param(&mut self, name: &str, value: impl Serialize) {
        self.parameters.insert(name.to_string(), serde_json::to_value(value).expect("serializable parameter"));
    }

    pub fn record(&mut self, name: &str, value: impl Serialize) {
        self.findings.insert(name.to_string(), serde_json::to_value(value).expect("serializable finding"));
    }

    /// Compares two exact values; returns whether they agree.
    pub fn compare(&mut self, key: Value, lhs: impl Into<CellValue>, rhs: impl Into<CellValue>) -> bool {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let pass = lhs == rhs;
        self.push(Cell { key, lhs, rhs, pass });
        pass
    }

    pub fn push(&mut self, cell: Cell) {
        self.summary.total += 1;
        if cell.pass {
            self.summary.passed += 1;
        } else {
            self.summary.failed += 1;
        }
        if self.filter.keeps(&cell) {
            self.cells.push(cell);
        }
    }

    /// Counts a cell that could not be computed exactly; it is never counted as passed.
    pub fn uncertified(&mut self, count: u64) {
        self.summary.uncertified += count;
    }

    /// Appends another report's cells and counts, prefixing nothing; findings are merged under `prefix`.
    pub fn absorb(&mut self, other: VerificationReport, prefix: &str) {
        for cell in other.cells {
            self.cells.push(cell);
        }
        self.summary.total += other.summary.total;
        self.summary.passed += other.summary.passed;
        self.summary.failed += other.summary.failed;
        self.summary.uncertified += other.summary.uncertified;
        for (k, v) in other.findings {
            self.findings.insert(format!("{prefix}{k}"), v);
        }
    }

    /// At least one cell was compared and none failed.
    pub fn passed(&self) -> bool {
        self.summary.failed == 0 && self.summary.passed > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.summary;
        writeln!(
            f,
            "{}: {} ({} cells: {} passed, {} failed, {} uncertified)",
            self.identity,
            if self.passed() { "PASS" } else { "FAIL" },
            s.total,
            s.passed,
            s.failed,
            s.uncertified
        )?;
        for (k, v) in &self.parameters {
            writeln!(f, "  param {k} = {v}")?;
        }
        for (k, v) in &self.findings {
            writeln!(f, "  {k} = {v}")?;
        }
        for c in self.cells.iter().filter(|c| !c.pass) {
            writeln!(
                f,
                "  FAILED {}: lhs = {} rhs = {}",
                c.key,
                serde_json::to_string(&c.lhs).unwrap_or_default(),
                serde_json::to_string(&c.rhs).unwrap_or_default()
            )?;
        }
        Ok(())
    }
}
