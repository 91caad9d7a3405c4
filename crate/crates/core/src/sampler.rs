//! Two-stage sampling of `G(n, W)`: i.i.d. vertex types, then independent
//! edges with probability `W(X_i, X_j)`.
//!
//! Every random draw comes from a ChaCha8 stream keyed by `(seed,
//! trial_index)` and selected by an entity id:
//!
//! - vertex `i` draws its type from stream `i`;
//! - pair `(i, j)` with `i < j` uses 64-bit word `j - i - 1` of stream
//!   `EDGE_STREAM | i`.
//!
//! Disjoint pairs therefore read disjoint words, and rows can be generated in
//! any order or in parallel with bit-identical results.

use std::path::Path;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::FiniteGraph;
use crate::graphon::{Graphon, StepGraphon};
use crate::rational;

/// High bit that separates edge streams from type streams.
pub const EDGE_STREAM: u64 = 1 << 63;

/// Random stream for one entity of one trial.
pub fn stream(seed: u64, trial_index: u64, entity: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&trial_index.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(entity);
    rng
}

/// Uniform double in `[0, 1)` from the top 53 bits.
pub fn unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `(stream id, 32-bit word position)` of the coin for pair `{i, j}`.
pub fn edge_stream_offset(i: usize, j: usize) -> (u64, u128) {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    assert!(i != j, "no coin for a self-pair");
    (EDGE_STREAM | i as u64, 2 * (j - i - 1) as u128)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VertexType {
    /// Step case; `offset` in `[0, 1)` is the relative position inside the block.
    Block { index: usize, offset: f64 },
    /// Power case; a point of `[0, 1)`.
    Point { position: f64 },
}

impl VertexType {
    pub fn block(&self) -> Option<usize> {
        match *self {
            VertexType::Block { index, .. } => Some(index),
            VertexType::Point { .. } => None,
        }
    }
}

/// Cumulative block boundaries as doubles; the last one is forced to 1.
fn boundaries(g: &StepGraphon) -> Vec<f64> {
    let mut acc = rational::from_int(0);
    let mut out: Vec<f64> = g
        .masses()
        .iter()
        .map(|m| {
            acc += m;
            rational::to_f64(&acc)
        })
        .collect();
    *out.last_mut().unwrap() = 1.0;
    out
}

/// One uniform per vertex: the block is the interval it lands in and the
/// offset its relative position there.
pub fn sample_types(g: &Graphon, n: usize, seed: u64, trial_index: u64) -> Result<Vec<VertexType>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let draw = |i: usize| unit(&mut stream(seed, trial_index, i as u64));
    Ok(match g {
        Graphon::Step(s) => {
            let cuts = boundaries(s);
            (0..n)
                .map(|i| {
                    let u = draw(i);
                    let index = cuts.partition_point(|&c| c <= u).min(cuts.len() - 1);
                    let lo = if index == 0 { 0.0 } else { cuts[index - 1] };
                    let offset = ((u - lo) / (cuts[index] - lo)).clamp(0.0, 1.0 - f64::EPSILON);
                    VertexType::Block { index, offset }
                })
                .collect()
        }
        Graphon::Power(_) => (0..n).map(|i| VertexType::Point { position: draw(i) }).collect(),
    })
}

/// A sample together with the latent types and the keys that replay it.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledGraph {
    pub graph: FiniteGraph,
    pub types: Vec<VertexType>,
    pub seed: u64,
    pub trial_index: u64,
}

/// Edge probability between two types.
fn probability(g: &Graphon, dens: &[Vec<f64>], a: &VertexType, b: &VertexType) -> f64 {
    match (g, a, b) {
        (_, VertexType::Block { index: i, .. }, VertexType::Block { index: j, .. }) => dens[*i][*j],
        (Graphon::Power(p), VertexType::Point { position: x }, VertexType::Point { position: y }) => {
            p.eval(*x, *y)
        }
        _ => unreachable!("types do not match the graphon"),
    }
}

pub fn sample_graph(g: &Graphon, n: usize, seed: u64, trial_index: u64) -> Result<SampledGraph> {
    sample_graph_with(g, n, seed, trial_index, Exec::default())
}

pub fn sample_graph_with(
    g: &Graphon,
    n: usize,
    seed: u64,
    trial_index: u64,
    exec: Exec,
) -> Result<SampledGraph> {
    let types = sample_types(g, n, seed, trial_index)?;
    let dens: Vec<Vec<f64>> = match g {
        Graphon::Step(s) => s
            .densities()
            .iter()
            .map(|row| row.iter().map(rational::to_f64).collect())
            .collect(),
        Graphon::Power(_) => Vec::new(),
    };
    let rows = exec.map_range(n, |i| {
        let mut rng = stream(seed, trial_index, EDGE_STREAM | i as u64);
        let mut out = Vec::new();
        for j in i + 1..n {
            if unit(&mut rng) < probability(g, &dens, &types[i], &types[j]) {
                out.push((i, j));
            }
        }
        out
    });
    let graph = FiniteGraph::new(n, rows.into_iter().flatten())?;
    Ok(SampledGraph {
        graph,
        types,
        seed,
        trial_index,
    })
}

impl SampledGraph {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Number of vertices of each block (step case).
    pub fn block_counts(&self, k: usize) -> Vec<usize> {
        let mut counts = vec![0; k];
        for t in &self.types {
            if let Some(b) = t.block() {
                counts[b] += 1;
            }
        }
        counts
    }

    /// Writes the edge list to `path` and the types to [`sidecar_path`].
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.graph.to_edge_list())?;
        let meta = Sidecar {
            n: self.n(),
            seed: self.seed,
            trial_index: self.trial_index,
            types: self.types.clone(),
        };
        let text = serde_json::to_string_pretty(&meta).expect("sidecar serializes");
        std::fs::write(sidecar_path(path), text + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let graph = FiniteGraph::parse_edge_list(&std::fs::read_to_string(path)?)?;
        let text = std::fs::read_to_string(sidecar_path(path)).map_err(|_| Error::TypesMissing)?;
        let meta: Sidecar = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        if meta.n != graph.n() || meta.types.len() != graph.n() {
            return Err(Error::Parse("sidecar does not match the edge list".into()));
        }
        Ok(SampledGraph {
            graph,
            types: meta.types,
            seed: meta.seed,
            trial_index: meta.trial_index,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    n: usize,
    seed: u64,
    trial_index: u64,
    types: Vec<VertexType>,
}

/// `graph.txt` pairs with `graph.txt.types.json`.
pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".types.json");
    name.into()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeConcentration {
    pub max_deviation: f64,
    pub vertex: usize,
}

/// `max_i |deg_G(i)/n - deg_W(X_i)|` with the maximising vertex.
pub fn degree_concentration_report(s: &SampledGraph, g: &Graphon) -> Result<DegreeConcentration> {
    let n = s.n();
    if s.types.len() != n {
        return Err(Error::TypesMissing);
    }
    let block_degrees: Vec<f64> = match g {
        Graphon::Step(st) => st.degrees().iter().map(rational::to_f64).collect(),
        Graphon::Power(_) => Vec::new(),
    };
    let mut best = DegreeConcentration {
        max_deviation: 0.0,
        vertex: 0,
    };
    for (v, t) in s.types.iter().enumerate() {
        let expected = match (g, t) {
            (Graphon::Step(_), VertexType::Block { index, .. }) => block_degrees[*index],
            (Graphon::Power(p), VertexType::Point { position }) => p.degree(*position),
            _ => return Err(Error::InvalidArgument("types do not match the graphon".into())),
        };
        let dev = (s.graph.degree(v) as f64 / n as f64 - expected).abs();
        if dev > best.max_deviation {
            best = DegreeConcentration {
                max_deviation: dev,
                vertex: v,
            };
        }
    }
    Ok(best)
}
