use std::collections::VecDeque;

use super::{Half, HalfMatching};
use crate::error::Result;
use crate::graph::FiniteGraph;
use crate::rational;

const FREE: usize = usize::MAX;

/// Hopcroft–Karp on the bipartite double cover: left copy `v+`, right copy
/// `u-`, an arc `v+ u-` for every edge `uv` in either orientation.
struct DoubleCoverMatching<'g> {
    g: &'g FiniteGraph,
    left_mate: Vec<usize>,
    right_mate: Vec<usize>,
    dist: Vec<usize>,
}

impl<'g> DoubleCoverMatching<'g> {
    fn new(g: &'g FiniteGraph) -> Self {
        let n = g.n();
        Self {
            g,
            left_mate: vec![FREE; n],
            right_mate: vec![FREE; n],
            dist: vec![0; n],
        }
    }

    fn bfs(&mut self) -> bool {
        let mut queue = VecDeque::new();
        for v in 0..self.g.n() {
            if self.left_mate[v] == FREE {
                self.dist[v] = 0;
                queue.push_back(v);
            } else {
                self.dist[v] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(v) = queue.pop_front() {
            for &u in self.g.neighbors(v) {
                let w = self.right_mate[u];
                if w == FREE {
                    found = true;
                } else if self.dist[w] == usize::MAX {
                    self.dist[w] = self.dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        found
    }

    fn dfs(&mut self, v: usize) -> bool {
        for i in 0..self.g.degree(v) {
            let u = self.g.neighbors(v)[i];
            let w = self.right_mate[u];
            if w == FREE || (self.dist[w] == self.dist[v] + 1 && self.dfs(w)) {
                self.left_mate[v] = u;
                self.right_mate[u] = v;
                return true;
            }
        }
        self.dist[v] = usize::MAX;
        false
    }

    fn run(mut self) -> Vec<usize> {
        while self.bfs() {
            for v in 0..self.g.n() {
                if self.left_mate[v] == FREE {
                    self.dfs(v);
                }
            }
        }
        self.left_mate
    }
}

/// Maximum half-integral fractional matching of a simple graph.
pub fn fmn_half(g: &FiniteGraph) -> Result<HalfMatching> {
    g.require_simple()?;
    let mate = DoubleCoverMatching::new(g).run();
    let values: Vec<Half> = g
        .edges()
        .iter()
        .map(|&(u, v)| Half::from_halves((mate[u] == v) as u8 + (mate[v] == u) as u8))
        .collect();
    let halves: i64 = values.iter().map(|h| h.halves() as i64).sum();
    Ok(HalfMatching {
        edges: g.edges().to_vec(),
        values,
        weight: rational::ratio(halves, 2),
    })
}

/// A half-integral perfect matching, if `fmn(G) = n/2`.
pub fn half_integral_perfect_matching(g: &FiniteGraph) -> Result<Option<HalfMatching>> {
    let m = fmn_half(g)?;
    Ok((m.weight == rational::ratio(g.n() as i64, 2)).then_some(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;
    use crate::rational::ratio;

    /// Exhaustive maximum over all {0, 1/2, 1} edge weightings, in halves.
    fn brute_fmn_halves(g: &FiniteGraph) -> u32 {
        let m = g.edge_count();
        let mut best = 0;
        let mut vals = vec![0u8; m];
        loop {
            let mut load = vec![0u8; g.n()];
            for (e, &(u, v)) in g.edges().iter().enumerate() {
                load[u] += vals[e];
                load[v] += vals[e];
            }
            if load.iter().all(|&l| l <= 2) {
                best = best.max(vals.iter().map(|&x| x as u32).sum());
            }
            let mut i = 0;
            while i < m && vals[i] == 2 {
                vals[i] = 0;
                i += 1;
            }
            if i == m {
                return best;
            }
            vals[i] += 1;
        }
    }

    #[test]
    fn triangle_is_all_halves() {
        let g = named::complete(3);
        let m = fmn_half(&g).unwrap();
        m.validate(&g).unwrap();
        assert_eq!(m.weight, ratio(3, 2));
        assert!(m.values.iter().all(|&h| h == Half::Half));
        assert_eq!(brute_fmn_halves(&g), 3);
    }

    #[test]
    fn path_on_three_vertices() {
        let g = named::path(3);
        assert_eq!(fmn_half(&g).unwrap().weight, ratio(1, 1));
        assert_eq!(brute_fmn_halves(&g), 2);
    }

    #[test]
    fn single_edge_is_perfect() {
        let g = named::path(2);
        let m = half_integral_perfect_matching(&g).unwrap().unwrap();
        assert_eq!(m.weight, ratio(1, 1));
        assert!(m.is_perfect(2));
    }

    #[test]
    fn perfect_matching_examples() {
        let c5 = named::cycle(5);
        let m = half_integral_perfect_matching(&c5).unwrap().unwrap();
        assert!(m.is_perfect(5));
        assert!(m.values.iter().all(|&h| h == Half::Half));
        assert!(half_integral_perfect_matching(&named::complete_bipartite(3, 4))
            .unwrap()
            .is_none());
    }
}
