//! Step graphons, the power family `W(x, y) = (xy)^beta`, and the graphon
//! description file.
//!
//! File format (JSON, or TOML when the path ends in `.toml`):
//!
//! ```json
//! { "kind": "step", "masses": ["1/2", "1/2"], "densities": [["0", "1"], ["1", "0"]] }
//! { "kind": "power", "beta": "1/2" }
//! ```
//!
//! Numbers may be fraction or decimal strings (plain JSON numbers are read
//! through their decimal text). Masses must be positive and sum to exactly 1;
//! densities must form a symmetric matrix with entries in `[0, 1]`.

mod conditions;

pub use conditions::{
    analyze, check_connected, check_degree_tail, check_exact_bipartite_split, degree_tail_ratio,
    find_peninsula, narrow_certificate, peninsula_certificate, BipartiteSplit, ConditionReport,
    Connectivity, HamiltonConditions, PeninsulaCertificate, Regime, StronglyNegative,
    TailVerdict, ENUMERATION_CAP,
};

use std::path::Path;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepGraphon {
    masses: Vec<Rational>,
    densities: Vec<Vec<Rational>>,
}

impl StepGraphon {
    pub fn new(masses: Vec<Rational>, densities: Vec<Vec<Rational>>) -> Result<Self> {
        let k = masses.len();
        if k == 0 {
            return Err(Error::graphon("masses", "at least one block is required"));
        }
        for (i, m) in masses.iter().enumerate() {
            if *m <= Rational::zero() || *m > Rational::one() {
                return Err(Error::graphon(
                    format!("masses[{i}]"),
                    format!("mass {} is not in (0, 1]", rational::format(m)),
                ));
            }
        }
        let total: Rational = masses.iter().sum();
        if !total.is_one() {
            return Err(Error::graphon(
                "masses",
                format!("masses sum to {} instead of 1", rational::format(&total)),
            ));
        }
        if densities.len() != k {
            return Err(Error::graphon(
                "densities",
                format!("expected {k} rows, found {}", densities.len()),
            ));
        }
        for (i, row) in densities.iter().enumerate() {
            if row.len() != k {
                return Err(Error::graphon(
                    format!("densities[{i}]"),
                    format!("row {i} has {} entries, expected {k}", row.len()),
                ));
            }
            for (j, d) in row.iter().enumerate() {
                if *d < Rational::zero() || *d > Rational::one() {
                    return Err(Error::graphon(
                        format!("densities[{i}][{j}]"),
                        format!("row {i}: density {} is not in [0, 1]", rational::format(d)),
                    ));
                }
            }
        }
        for i in 0..k {
            for j in i + 1..k {
                if densities[i][j] != densities[j][i] {
                    return Err(Error::graphon(
                        format!("densities[{i}][{j}]"),
                        format!(
                            "row {i}: matrix is not symmetric ({} vs {} at [{j}][{i}])",
                            rational::format(&densities[i][j]),
                            rational::format(&densities[j][i])
                        ),
                    ));
                }
            }
        }
        Ok(Self { masses, densities })
    }

    /// The constant-`p` graphon as a single block.
    pub fn constant(p: Rational) -> Result<Self> {
        Self::new(vec![Rational::one()], vec![vec![p]])
    }

    pub fn blocks(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    pub fn mass(&self, i: usize) -> &Rational {
        &self.masses[i]
    }

    pub fn densities(&self) -> &[Vec<Rational>] {
        &self.densities
    }

    pub fn density(&self, i: usize, j: usize) -> &Rational {
        &self.densities[i][j]
    }

    pub fn positive(&self, i: usize, j: usize) -> bool {
        !self.densities[i][j].is_zero()
    }

    /// Per-block degrees `sum_j mass_j * density_ij`.
    pub fn degrees(&self) -> Vec<Rational> {
        self.densities
            .iter()
            .map(|row| row.iter().zip(&self.masses).map(|(d, m)| d * m).sum())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerFamilyGraphon {
    beta: Rational,
}

impl PowerFamilyGraphon {
    pub fn new(beta: Rational) -> Result<Self> {
        if beta <= Rational::zero() {
            return Err(Error::graphon("beta", "beta must be positive"));
        }
        Ok(Self { beta })
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn beta_f64(&self) -> f64 {
        rational::to_f64(&self.beta)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (x * y).powf(self.beta_f64()).clamp(0.0, 1.0)
    }

    /// `deg(x) = x^beta / (beta + 1)`.
    pub fn degree(&self, x: f64) -> f64 {
        let b = self.beta_f64();
        x.powf(b) / (b + 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Graphon {
    Step(StepGraphon),
    Power(PowerFamilyGraphon),
}

/// Degree data: exact per-block degrees, or the closed form of the power family.
#[derive(Debug, Clone, PartialEq)]
pub enum DegreeProfile {
    Step(Vec<Rational>),
    Power { beta: f64 },
}

impl DegreeProfile {
    pub fn of(g: &Graphon) -> Self {
        match g {
            Graphon::Step(s) => DegreeProfile::Step(s.degrees()),
            Graphon::Power(p) => DegreeProfile::Power { beta: p.beta_f64() },
        }
    }
}

impl Graphon {
    pub fn as_step(&self) -> Option<&StepGraphon> {
        match self {
            Graphon::Step(s) => Some(s),
            Graphon::Power(_) => None,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawGraphon =
            serde_json::from_str(text).map_err(|e| Error::graphon(json_pos(&e), e.to_string()))?;
        raw.into_graphon()
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawGraphon = toml::from_str(text)
            .map_err(|e| Error::graphon(toml_pos(text, &e), e.message().to_string()))?;
        raw.into_graphon()
    }

    /// Reads a description file; `.toml` selects TOML, anything else JSON.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e == "toml") {
            Self::from_toml_str(&text)
        } else {
            Self::from_json_str(&text)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RawGraphon::from(self)).expect("graphon serializes")
    }
}

fn json_pos(e: &serde_json::Error) -> String {
    format!("line {} column {}", e.line(), e.column())
}

fn toml_pos(text: &str, e: &toml::de::Error) -> String {
    match e.span() {
        Some(span) => {
            let line = text[..span.start].matches('\n').count() + 1;
            format!("line {line}")
        }
        None => "document".into(),
    }
}

/// A number written either as a string or a bare JSON/TOML number.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum NumText {
    Text(String),
    Int(i64),
    Float(f64),
}

impl NumText {
    pub(crate) fn parse(&self, position: &str) -> Result<Rational> {
        let text = match self {
            NumText::Text(s) => s.clone(),
            NumText::Int(i) => i.to_string(),
            NumText::Float(f) => format!("{f}"),
        };
        rational::parse(&text).map_err(|m| Error::graphon(position, m))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawGraphon {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    masses: Option<Vec<NumText>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    densities: Option<Vec<Vec<NumText>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<NumText>,
}

impl RawGraphon {
    pub(crate) fn into_graphon(self) -> Result<Graphon> {
        match self.kind.as_str() {
            "step" => {
                let masses = self
                    .masses
                    .ok_or_else(|| Error::graphon("masses", "missing for kind \"step\""))?
                    .iter()
                    .enumerate()
                    .map(|(i, m)| m.parse(&format!("masses[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                let densities = self
                    .densities
                    .ok_or_else(|| Error::graphon("densities", "missing for kind \"step\""))?
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(j, d)| d.parse(&format!("densities[{i}][{j}]")))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Graphon::Step(StepGraphon::new(masses, densities)?))
            }
            "power" => {
                let beta = self
                    .beta
                    .ok_or_else(|| Error::graphon("beta", "missing for kind \"power\""))?
                    .parse("beta")?;
                Ok(Graphon::Power(PowerFamilyGraphon::new(beta)?))
            }
            other => Err(Error::graphon(
                "kind",
                format!("unknown kind {other:?}, expected \"step\" or \"power\""),
            )),
        }
    }
}

impl From<&Graphon> for RawGraphon {
    fn from(g: &Graphon) -> Self {
        let text = |r: &Rational| NumText::Text(rational::format(r));
        match g {
            Graphon::Step(s) => RawGraphon {
                kind: "step".into(),
                masses: Some(s.masses.iter().map(text).collect()),
                densities: Some(
                    s.densities
                        .iter()
                        .map(|row| row.iter().map(text).collect())
                        .collect(),
                ),
                beta: None,
            },
            Graphon::Power(p) => RawGraphon {
                kind: "power".into(),
                masses: None,
                densities: None,
                beta: Some(text(&p.beta)),
            },
        }
    }
}

impl Serialize for Graphon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawGraphon::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graphon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        RawGraphon::deserialize(d)?
            .into_graphon()
            .map_err(serde::de::Error::custom)
    }
}
