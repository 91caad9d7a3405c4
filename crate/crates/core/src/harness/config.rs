//! Experiment configuration (TOML).
//!
//! ```toml
//! preset = "fig2-u"            # or graphon_file = "w.json", or a [graphon] table
//! n_values = [100, 400]
//! trials = 300
//! seed = 42
//! properties = ["connected", "hamiltonian", "fvcn_ge_half"]
//! t = 4                        # matching slack, default 0
//! budget = 100000              # exact-search nodes, default 100000
//! peninsula = "auto"           # or an explicit certificate table
//!
//! [posa]                       # optional
//! restarts = 20
//! max_rotations = 5000
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphon::{Graphon, PeninsulaCertificate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Connected,
    #[serde(rename = "min_degree_ge_2")]
    MinDegreeGe2,
    IsolatedVertex,
    Hamiltonian,
    FvcnGeHalf,
    PeninsulaCounts,
    DegreeConcentration,
    CutDistance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PeninsulaSpec {
    /// `"auto"`: use the certificate found by the peninsula detector.
    Auto(String),
    Explicit(PeninsulaCertificate),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosaSettings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_rotations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graphon_file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graphon: Option<Graphon>,
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub properties: Vec<Property>,
    #[serde(default)]
    pub t: usize,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peninsula: Option<PeninsulaSpec>,
    #[serde(default)]
    pub posa: PosaSettings,
}

fn default_budget() -> u64 {
    100_000
}

/// `line:column` (1-based) of a byte offset.
fn line_col(text: &str, offset: usize) -> String {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    format!("line {line}, column {col}")
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let position = e
                .span()
                .map_or_else(|| "document".to_string(), |s| line_col(text, s.start));
            Error::config(position, e.message().to_string())
        })?;
        config.validate()?;
        Ok(config)
    }

    /// Loads a config file; a relative `graphon_file` is resolved against
    /// the config's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut config = Self::from_toml_str(&std::fs::read_to_string(path)?)?;
        if let (Some(file), Some(dir)) = (&config.graphon_file, path.parent()) {
            if file.is_relative() {
                config.graphon_file = Some(dir.join(file));
            }
        }
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let sources = [self.preset.is_some(), self.graphon_file.is_some(), self.graphon.is_some()];
        if sources.iter().filter(|&&s| s).count() != 1 {
            return Err(Error::config(
                "graphon",
                "exactly one of preset, graphon_file, graphon is required",
            ));
        }
        if self.trials == 0 {
            return Err(Error::config("trials", "trials must be at least 1"));
        }
        if self.n_values.is_empty() {
            return Err(Error::config("n_values", "at least one n is required"));
        }
        if let Some(i) = self.n_values.iter().position(|&n| n < 3) {
            return Err(Error::config(format!("n_values[{i}]"), "n must be at least 3"));
        }
        if self.properties.is_empty() {
            return Err(Error::config("properties", "no properties requested"));
        }
        if let Some(PeninsulaSpec::Auto(s)) = &self.peninsula {
            if s != "auto" {
                return Err(Error::config("peninsula", format!("expected \"auto\", found {s:?}")));
            }
        }
        Ok(())
    }

    /// Resolves the graphon source.
    pub fn resolve_graphon(&self) -> Result<Graphon> {
        if let Some(name) = &self.preset {
            return super::presets::preset(name);
        }
        if let Some(path) = &self.graphon_file {
            return Graphon::load(path);
        }
        self.graphon
            .clone()
            .ok_or_else(|| Error::config("graphon", "no graphon source"))
    }

    pub fn wants(&self, p: Property) -> bool {
        self.properties.contains(&p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = "preset = \"fig2-u\"\nn_values = [100]\ntrials = 5\nseed = 1\nproperties = [\"connected\"]\n";

    #[test]
    fn parses_basic_config() {
        let c = ExperimentConfig::from_toml_str(BASIC).unwrap();
        assert_eq!(c.budget, 100_000);
        assert_eq!(c.t, 0);
        assert!(c.wants(Property::Connected));
        let again = ExperimentConfig::from_toml_str(&c.to_toml()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn inline_graphon_and_certificate() {
        let text = r#"
n_values = [10]
trials = 1
seed = 0
properties = ["peninsula_counts"]
peninsula = "auto"
[graphon]
kind = "step"
masses = ["1/2", "1/2"]
densities = [["0", "1"], ["1", "0"]]
"#;
        let c = ExperimentConfig::from_toml_str(text).unwrap();
        assert!(matches!(c.resolve_graphon().unwrap(), Graphon::Step(_)));
        assert!(matches!(c.peninsula, Some(PeninsulaSpec::Auto(_))));
    }

    #[test]
    fn errors_carry_positions() {
        let bad = BASIC.replace("trials = 5", "trials = 0");
        match ExperimentConfig::from_toml_str(&bad) {
            Err(Error::InvalidConfig { position, .. }) => assert_eq!(position, "trials"),
            other => panic!("{other:?}"),
        }
        let bad = BASIC.replace("[\"connected\"]", "[\"colour\"]");
        match ExperimentConfig::from_toml_str(&bad) {
            Err(Error::InvalidConfig { position, .. }) => assert!(position.starts_with("line 5")),
            other => panic!("{other:?}"),
        }
        let bad = BASIC.replace("[100]", "[100, 2]");
        match ExperimentConfig::from_toml_str(&bad) {
            Err(Error::InvalidConfig { position, .. }) => assert_eq!(position, "n_values[1]"),
            other => panic!("{other:?}"),
        }
        let two = format!("{BASIC}graphon_file = \"x.json\"\n");
        assert!(ExperimentConfig::from_toml_str(&two).is_err());
    }
}
