//! Finite graphs shared by the combinatorial modules, plus the edge-list format.
//!
//! Edge-list text: a header line `n m`, then `m` lines `u v` with 0-indexed
//! vertices. Blank lines and lines starting with `#` are ignored.

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    loops: Vec<bool>,
    weights: Option<Vec<Rational>>,
    adj: Vec<Vec<usize>>,
    words: usize,
    bits: Vec<u64>,
}

impl FiniteGraph {
    /// Simple graph: rejects self-loops, duplicate edges and out-of-range ends.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let edges: Vec<_> = edges.into_iter().collect();
        if let Some(&(u, _)) = edges.iter().find(|(u, v)| u == v) {
            return Err(Error::InvalidGraph(format!(
                "self-loop at vertex {u} in a simple graph"
            )));
        }
        Self::build(n, edges, vec![false; n], None)
    }

    /// Vertex-weighted graph with optional self-loops, as used for block
    /// positivity graphs of step graphons.
    pub fn weighted(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        loops: Vec<bool>,
        weights: Vec<Rational>,
    ) -> Result<Self> {
        if loops.len() != n || weights.len() != n {
            return Err(Error::InvalidGraph(format!(
                "expected {n} loop flags and weights, got {} and {}",
                loops.len(),
                weights.len()
            )));
        }
        if let Some(v) = weights.iter().position(|w| *w < Rational::zero()) {
            return Err(Error::InvalidGraph(format!("negative weight at vertex {v}")));
        }
        let mut loops = loops;
        let mut plain = Vec::new();
        for (u, v) in edges {
            if u == v {
                if u >= n {
                    return Err(Error::InvalidGraph(format!("vertex {u} out of range")));
                }
                loops[u] = true;
            } else {
                plain.push((u, v));
            }
        }
        Self::build(n, plain, loops, Some(weights))
    }

    fn build(
        n: usize,
        edges: Vec<(usize, usize)>,
        loops: Vec<bool>,
        weights: Option<Vec<Rational>>,
    ) -> Result<Self> {
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        let words = n.div_ceil(64).max(1);
        let mut bits = vec![0u64; n * words];
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
            bits[u * words + v / 64] |= 1 << (v % 64);
            bits[v * words + u / 64] |= 1 << (u % 64);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self {
            n,
            edges: norm,
            loops,
            weights,
            adj,
            words,
            bits,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as `(u, v)` with `u < v`, sorted; loops are not included.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.loops[v]
    }

    pub fn has_loops(&self) -> bool {
        self.loops.iter().any(|&l| l)
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn weight(&self, v: usize) -> Rational {
        match &self.weights {
            Some(w) => w[v].clone(),
            None => Rational::one(),
        }
    }

    pub fn weights(&self) -> Option<&[Rational]> {
        self.weights.as_deref()
    }

    pub fn total_weight(&self) -> Rational {
        match &self.weights {
            Some(w) => w.iter().sum(),
            None => rational::from_int(self.n as i64),
        }
    }

    pub fn min_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| self.degree(v)).min()
    }

    /// Errors unless the graph is simple (no loops, no vertex weights).
    pub fn require_simple(&self) -> Result<()> {
        if let Some(v) = self.loops.iter().position(|&l| l) {
            return Err(Error::InvalidGraph(format!(
                "self-loop at vertex {v}; loops are only allowed in weighted mode"
            )));
        }
        Ok(())
    }

    /// Induced subgraph on the vertices with `keep[v]`; returns it with the
    /// map from new to old indices.
    pub fn induced(&self, keep: &[bool]) -> (FiniteGraph, Vec<usize>) {
        let old: Vec<usize> = (0..self.n).filter(|&v| keep[v]).collect();
        let mut new_index = vec![usize::MAX; self.n];
        for (i, &v) in old.iter().enumerate() {
            new_index[v] = i;
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|(u, v)| keep[*u] && keep[*v])
            .map(|&(u, v)| (new_index[u], new_index[v]))
            .collect();
        let loops = old.iter().map(|&v| self.loops[v]).collect();
        let weights = self
            .weights
            .as_ref()
            .map(|w| old.iter().map(|&v| w[v].clone()).collect());
        let g = Self::build(old.len(), edges, loops, weights).expect("induced subgraph is valid");
        (g, old)
    }

    /// Connected-component label of every vertex (labels are dense, by first vertex).
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for &u in &self.adj[v] {
                    if label[u] == usize::MAX {
                        label[u] = next;
                        stack.push(u);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// Parses the edge-list text format.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| Error::Parse("empty edge list: missing `n m` header".into()))?;
        let nums = parse_pair(header, line_no)?;
        let (n, m) = nums;
        let mut edges = Vec::with_capacity(m);
        for (line_no, line) in lines {
            edges.push(parse_pair(line, line_no)?);
        }
        if edges.len() != m {
            return Err(Error::Parse(format!(
                "header announces {m} edges but {} were listed",
                edges.len()
            )));
        }
        Self::new(n, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

fn parse_pair(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let mut parts = line.split_whitespace();
    let mut next = || -> Result<usize> {
        parts
            .next()
            .ok_or_else(|| Error::Parse(format!("line {line_no}: expected two integers")))?
            .parse()
            .map_err(|_| Error::Parse(format!("line {line_no}: expected two integers")))
    };
    let a = next()?;
    let b = next()?;
    if parts.next().is_some() {
        return Err(Error::Parse(format!("line {line_no}: trailing tokens")));
    }
    Ok((a, b))
}

/// Small named graphs used by tests, examples and the CLI.
pub mod named {
    use super::FiniteGraph;

    pub fn empty(n: usize) -> FiniteGraph {
        FiniteGraph::new(n, []).unwrap()
    }

    pub fn path(n: usize) -> FiniteGraph {
        FiniteGraph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> FiniteGraph {
        assert!(n >= 3);
        FiniteGraph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn complete(n: usize) -> FiniteGraph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        FiniteGraph::new(n, edges).unwrap()
    }

    /// `K_{a,b}` with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> FiniteGraph {
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        FiniteGraph::new(a + b, edges).unwrap()
    }

    pub fn star(leaves: usize) -> FiniteGraph {
        complete_bipartite(1, leaves)
    }

    pub fn petersen() -> FiniteGraph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        FiniteGraph::new(10, edges).unwrap()
    }

    /// Disjoint union of two graphs.
    pub fn disjoint_union(a: &FiniteGraph, b: &FiniteGraph) -> FiniteGraph {
        let shift = a.n();
        let edges = a
            .edges()
            .iter()
            .copied()
            .chain(b.edges().iter().map(|&(u, v)| (u + shift, v + shift)));
        FiniteGraph::new(a.n() + b.n(), edges).unwrap()
    }

    /// Connected 3-regular graph on 30 vertices with a bridge, hence not
    /// Hamiltonian, yet free of the cheap obstructions.
    pub fn bridged_cubic_30() -> FiniteGraph {
        // Gadget: the 16-vertex prism C8 x K2 minus vertex (0,0), with its
        // outer neighbours (1,0) and (7,0) joined. (0,1) keeps degree 2.
        let id = |i: usize, layer: usize| i + 8 * layer;
        let mut gadget = Vec::new();
        for i in 0..8 {
            for layer in 0..2 {
                gadget.push((id(i, layer), id((i + 1) % 8, layer)));
            }
            gadget.push((id(i, 0), id(i, 1)));
        }
        gadget.retain(|&(u, v)| u != 0 && v != 0);
        gadget.push((id(1, 0), id(7, 0)));
        // relabel 1..16 -> 0..15
        let gadget: Vec<(usize, usize)> = gadget.into_iter().map(|(u, v)| (u - 1, v - 1)).collect();
        let attach = id(0, 1) - 1;
        let mut edges = gadget.clone();
        edges.extend(gadget.iter().map(|&(u, v)| (u + 15, v + 15)));
        edges.push((attach, attach + 15));
        FiniteGraph::new(30, edges).unwrap()
    }
}
