//! Hamiltonicity: cheap obstructions, a rotation-extension heuristic and an
//! exact search, combined by [`classify`].

mod exact;
mod posa;

pub use exact::{backtrack_hamilton, dp_hamilton, exact_hamilton, DP_CUTOFF};
pub use posa::{posa_heuristic, PosaConfig};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fracmatch::{fvcn_half, Half, GraphPeninsula, PeninsulaKind};
use crate::graph::FiniteGraph;
use crate::rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Hamiltonian,
    NotHamiltonian,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Obstruction {
    Disconnected,
    MinDegreeBelow2,
    NarrowGraphPeninsula,
    ExactSearchExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    CheapObstruction,
    Posa,
    BitmaskDp,
    Backtracking,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonVerdict {
    pub status: Status,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<Obstruction>,
    /// Present for [`Obstruction::NarrowGraphPeninsula`].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<GraphPeninsula>,
}

impl HamiltonVerdict {
    pub(crate) fn hamiltonian(method: Method, cycle: Vec<usize>) -> Self {
        HamiltonVerdict {
            status: Status::Hamiltonian,
            method,
            witness: Some(cycle),
            obstruction: None,
            certificate: None,
        }
    }

    pub(crate) fn not_hamiltonian(method: Method, obstruction: Obstruction) -> Self {
        HamiltonVerdict {
            status: Status::NotHamiltonian,
            method,
            witness: None,
            obstruction: Some(obstruction),
            certificate: None,
        }
    }

    pub(crate) fn unknown() -> Self {
        HamiltonVerdict {
            status: Status::Unknown,
            method: Method::None,
            witness: None,
            obstruction: None,
            certificate: None,
        }
    }

    /// Re-checks the witness cycle or the peninsula certificate.
    pub fn validate(&self, g: &FiniteGraph) -> Result<()> {
        match self.status {
            Status::Hamiltonian => match &self.witness {
                Some(c) => validate_cycle(g, c),
                None => Err(Error::InvalidCertificate("missing witness cycle".into())),
            },
            Status::NotHamiltonian => match (self.obstruction, &self.certificate) {
                (None, _) => Err(Error::InvalidCertificate("missing obstruction".into())),
                (Some(Obstruction::NarrowGraphPeninsula), Some(c)) => c.validate(g),
                (Some(Obstruction::NarrowGraphPeninsula), None) => {
                    Err(Error::InvalidCertificate("missing peninsula".into()))
                }
                (Some(Obstruction::Disconnected), _) if g.is_connected() => {
                    Err(Error::InvalidCertificate("graph is connected".into()))
                }
                (Some(Obstruction::MinDegreeBelow2), _)
                    if g.n() > 0 && g.min_degree().unwrap_or(0) >= 2 =>
                {
                    Err(Error::InvalidCertificate("minimum degree is at least 2".into()))
                }
                _ => Ok(()),
            },
            Status::Unknown => Ok(()),
        }
    }
}

/// A Hamilton cycle lists every vertex once; consecutive vertices (and the
/// last with the first) are adjacent.
pub fn validate_cycle(g: &FiniteGraph, cycle: &[usize]) -> Result<()> {
    let n = g.n();
    let bad = |m: String| Err(Error::InvalidCertificate(m));
    if n < 3 || cycle.len() != n {
        return bad(format!("cycle has {} vertices, graph has {n}", cycle.len()));
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return bad(format!("vertex {v} repeated or out of range"));
        }
    }
    for i in 0..n {
        let (u, v) = (cycle[i], cycle[(i + 1) % n]);
        if !g.has_edge(u, v) {
            return bad(format!("({u}, {v}) is not an edge"));
        }
    }
    Ok(())
}

/// The first of: disconnected, minimum degree below 2, `fvcn < n/2`.
pub fn cheap_obstructions(g: &FiniteGraph) -> Result<Option<HamiltonVerdict>> {
    g.require_simple()?;
    let n = g.n();
    let cheap = |o| Ok(Some(HamiltonVerdict::not_hamiltonian(Method::CheapObstruction, o)));
    if n > 0 && !g.is_connected() {
        return cheap(Obstruction::Disconnected);
    }
    if n < 3 || g.min_degree().unwrap_or(0) < 2 {
        return cheap(Obstruction::MinDegreeBelow2);
    }
    let cover = fvcn_half(g);
    if cover.weight < rational::ratio(n as i64, 2) {
        let mut v = HamiltonVerdict::not_hamiltonian(
            Method::CheapObstruction,
            Obstruction::NarrowGraphPeninsula,
        );
        v.certificate = Some(GraphPeninsula {
            kind: PeninsulaKind::Narrow,
            a: cover.vertices_with(Half::Zero),
            b: cover.vertices_with(Half::Half),
            cover,
        });
        return Ok(Some(v));
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    /// Node budget of the backtracking search above [`DP_CUTOFF`].
    pub budget: u64,
    pub posa: PosaConfig,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            budget: 1_000_000,
            posa: PosaConfig::default(),
        }
    }
}

/// Cheap obstructions, then the heuristic, then the exact search.
pub fn classify(g: &FiniteGraph, config: &ClassifyConfig) -> Result<HamiltonVerdict> {
    if let Some(v) = cheap_obstructions(g)? {
        return Ok(v);
    }
    if let Some(cycle) = posa_heuristic(g, &config.posa)? {
        return Ok(HamiltonVerdict::hamiltonian(Method::Posa, cycle));
    }
    if g.n() > DP_CUTOFF && config.budget == 0 {
        return Ok(HamiltonVerdict::unknown());
    }
    exact_hamilton(g, config.budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn cheap_obstruction_examples() {
        let two = named::disjoint_union(&named::cycle(3), &named::cycle(3));
        let o = |g: &FiniteGraph| cheap_obstructions(g).unwrap().and_then(|v| v.obstruction);
        assert_eq!(o(&two), Some(Obstruction::Disconnected));
        assert_eq!(o(&named::path(4)), Some(Obstruction::MinDegreeBelow2));
        let k34 = named::complete_bipartite(3, 4);
        let v = cheap_obstructions(&k34).unwrap().unwrap();
        assert_eq!(v.obstruction, Some(Obstruction::NarrowGraphPeninsula));
        v.validate(&k34).unwrap();
        assert_eq!(o(&named::complete(5)), None);
    }

    #[test]
    fn classify_examples() {
        let c7 = named::cycle(7);
        let v = classify(&c7, &ClassifyConfig::default()).unwrap();
        assert_eq!(v.status, Status::Hamiltonian);
        v.validate(&c7).unwrap();
        let star = named::star(5);
        let v = classify(&star, &ClassifyConfig::default()).unwrap();
        assert_eq!(v.obstruction, Some(Obstruction::MinDegreeBelow2));
        let p = classify(&named::petersen(), &ClassifyConfig::default()).unwrap();
        assert_eq!(p.status, Status::NotHamiltonian);
        assert_eq!(p.obstruction, Some(Obstruction::ExactSearchExhausted));
    }

    #[test]
    fn small_budget_on_hard_cubic_graph_is_unknown() {
        let g = named::bridged_cubic_30();
        assert!(cheap_obstructions(&g).unwrap().is_none());
        let config = ClassifyConfig {
            budget: 200,
            posa: PosaConfig {
                restarts: 2,
                ..PosaConfig::default()
            },
        };
        assert_eq!(classify(&g, &config).unwrap().status, Status::Unknown);
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let g = named::cycle(6);
        let mut v = classify(&g, &ClassifyConfig::default()).unwrap();
        v.witness.as_mut().unwrap().swap(0, 2);
        assert!(v.validate(&g).is_err());
    }
}
