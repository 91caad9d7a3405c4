use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::FiniteGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosaConfig {
    pub seed: u64,
    /// Rotations per restart; `None` means `50 n`.
    pub max_rotations: Option<usize>,
    pub restarts: usize,
}

impl Default for PosaConfig {
    fn default() -> Self {
        PosaConfig {
            seed: 0,
            max_rotations: None,
            restarts: 20,
        }
    }
}

/// Rotation-extension search. A returned cycle is always Hamiltonian;
/// `None` proves nothing.
pub fn posa_heuristic(g: &FiniteGraph, config: &PosaConfig) -> Result<Option<Vec<usize>>> {
    g.require_simple()?;
    let n = g.n();
    if n < 3 || g.min_degree().unwrap_or(0) < 2 {
        return Ok(None);
    }
    let max_rotations = config.max_rotations.unwrap_or(50 * n);
    for restart in 0..config.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(restart as u64);
        if let Some(cycle) = Attempt::new(g, &mut rng).run(max_rotations) {
            debug_assert!(super::validate_cycle(g, &cycle).is_ok());
            return Ok(Some(cycle));
        }
    }
    Ok(None)
}

struct Attempt<'a, R> {
    g: &'a FiniteGraph,
    rng: &'a mut R,
    path: Vec<usize>,
    /// `pos[v]` is the index of `v` in `path`, or `usize::MAX` when outside.
    pos: Vec<usize>,
}

impl<'a, R: Rng> Attempt<'a, R> {
    fn new(g: &'a FiniteGraph, rng: &'a mut R) -> Self {
        let n = g.n();
        let start = rng.gen_range(0..n);
        let mut pos = vec![usize::MAX; n];
        pos[start] = 0;
        Attempt {
            g,
            rng,
            path: vec![start],
            pos,
        }
    }

    fn reindex(&mut self, from: usize) {
        for i in from..self.path.len() {
            self.pos[self.path[i]] = i;
        }
    }

    fn push(&mut self, v: usize) {
        self.pos[v] = self.path.len();
        self.path.push(v);
    }

    fn outside_neighbor(&mut self, v: usize) -> Option<usize> {
        let pos = &self.pos;
        let free: Vec<usize> = self
            .g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| pos[u] == usize::MAX)
            .collect();
        free.choose(self.rng).copied()
    }

    fn run(mut self, max_rotations: usize) -> Option<Vec<usize>> {
        let n = self.g.n();
        let mut rotations = 0;
        loop {
            let end = *self.path.last().unwrap();
            if let Some(u) = self.outside_neighbor(end) {
                self.push(u);
                continue;
            }
            let head = self.path[0];
            if let Some(u) = self.outside_neighbor(head) {
                self.path.reverse();
                self.reindex(0);
                self.push(u);
                continue;
            }
            if self.g.has_edge(end, head) {
                if self.path.len() == n {
                    return Some(self.path);
                }
                if self.absorb() {
                    continue;
                }
            }
            if rotations >= max_rotations {
                return None;
            }
            rotations += 1;
            self.rotate(end);
        }
    }

    /// The path closes into a cycle; reopen it next to a vertex that has an
    /// outside neighbour and append that neighbour.
    fn absorb(&mut self) -> bool {
        let len = self.path.len();
        let mut order: Vec<usize> = (0..len).collect();
        order.shuffle(self.rng);
        for i in order {
            if let Some(x) = self.outside_neighbor(self.path[i]) {
                self.path.rotate_left((i + 1) % len);
                self.reindex(0);
                self.push(x);
                return true;
            }
        }
        false
    }

    /// `end` is adjacent to `path[i]`: reversing `path[i+1..]` makes
    /// `path[i+1]` the new end.
    fn rotate(&mut self, end: usize) {
        let len = self.path.len();
        let pivots: Vec<usize> = self
            .g
            .neighbors(end)
            .iter()
            .map(|&u| self.pos[u])
            .filter(|&i| i + 2 < len)
            .collect();
        if let Some(&i) = pivots.choose(self.rng) {
            self.path[i + 1..].reverse();
            self.reindex(i + 1);
        } else {
            self.path.reverse();
            self.reindex(0);
        }
    }
}
