use super::{HamiltonVerdict, Method, Obstruction};
use crate::error::Result;
use crate::graph::FiniteGraph;

/// Largest `n` handled by the bitmask dynamic program.
pub const DP_CUTOFF: usize = 24;

/// Exact decision: bitmask DP up to [`DP_CUTOFF`], budgeted backtracking above.
pub fn exact_hamilton(g: &FiniteGraph, budget: u64) -> Result<HamiltonVerdict> {
    g.require_simple()?;
    if g.n() <= DP_CUTOFF {
        Ok(dp_hamilton(g))
    } else {
        Ok(backtrack_hamilton(g, budget))
    }
}

/// Paths start at vertex 0. `ends[mask >> 1]` (bit 0 of `mask` always set)
/// holds the possible last vertices of a path from 0 through exactly `mask`.
pub fn dp_hamilton(g: &FiniteGraph) -> HamiltonVerdict {
    let n = g.n();
    assert!(n <= DP_CUTOFF, "n = {n} above the DP cutoff");
    let exhausted = HamiltonVerdict::not_hamiltonian(Method::BitmaskDp, Obstruction::ExactSearchExhausted);
    if n < 3 {
        return exhausted;
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let full = (1u32 << n) - 1;
    let mut ends = vec![0u32; 1 << (n - 1)];
    ends[0] = 1;
    for half in 1..ends.len() as u32 {
        let mask = half << 1 | 1;
        let mut out = 0u32;
        let mut rest = mask & !1;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            let prev = mask ^ 1 << v;
            if ends[(prev >> 1) as usize] & adj[v as usize] != 0 {
                out |= 1 << v;
            }
        }
        ends[half as usize] = out;
    }
    let closing = ends[(full >> 1) as usize] & adj[0];
    if closing == 0 {
        return exhausted;
    }
    let mut cycle = Vec::with_capacity(n);
    let mut mask = full;
    let mut v = closing.trailing_zeros();
    loop {
        cycle.push(v as usize);
        if v == 0 {
            break;
        }
        mask ^= 1 << v;
        let cands = ends[(mask >> 1) as usize] & adj[v as usize];
        v = cands.trailing_zeros();
    }
    cycle.reverse();
    HamiltonVerdict::hamiltonian(Method::BitmaskDp, cycle)
}

/// Depth-first extension from vertex 0, pruning when an unvisited vertex has
/// fewer than two usable neighbours. `budget` counts search nodes.
pub fn backtrack_hamilton(g: &FiniteGraph, budget: u64) -> HamiltonVerdict {
    let n = g.n();
    if n < 3 {
        return HamiltonVerdict::not_hamiltonian(Method::Backtracking, Obstruction::ExactSearchExhausted);
    }
    let mut search = Search {
        g,
        visited: vec![false; n],
        // unvisited neighbours of each vertex
        free: (0..n).map(|v| g.degree(v)).collect(),
        path: Vec::with_capacity(n),
        nodes: 0,
        budget,
    };
    search.visit(0);
    match search.extend() {
        Outcome::Found => HamiltonVerdict::hamiltonian(Method::Backtracking, search.path),
        Outcome::Exhausted => {
            HamiltonVerdict::not_hamiltonian(Method::Backtracking, Obstruction::ExactSearchExhausted)
        }
        Outcome::OutOfBudget => HamiltonVerdict::unknown(),
    }
}

enum Outcome {
    Found,
    Exhausted,
    OutOfBudget,
}

struct Search<'a> {
    g: &'a FiniteGraph,
    visited: Vec<bool>,
    free: Vec<usize>,
    path: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn visit(&mut self, v: usize) {
        self.visited[v] = true;
        self.path.push(v);
        for &u in self.g.neighbors(v) {
            self.free[u] -= 1;
        }
    }

    fn unvisit(&mut self, v: usize) {
        self.visited[v] = false;
        self.path.pop();
        for &u in self.g.neighbors(v) {
            self.free[u] += 1;
        }
    }

    /// An unvisited vertex needs two exits among unvisited vertices, the
    /// current end and vertex 0; only neighbours of the end may give up one.
    fn dead_end(&self, end: usize) -> bool {
        for &u in self.g.neighbors(end) {
            if self.visited[u] {
                continue;
            }
            let mut usable = self.free[u] + 1;
            if end != 0 && self.g.has_edge(u, 0) {
                usable += 1;
            }
            if usable < 2 {
                return true;
            }
        }
        false
    }

    fn extend(&mut self) -> Outcome {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Outcome::OutOfBudget;
        }
        let n = self.g.n();
        let end = *self.path.last().unwrap();
        if self.path.len() == n {
            return if self.g.has_edge(end, 0) {
                Outcome::Found
            } else {
                Outcome::Exhausted
            };
        }
        if self.dead_end(end) {
            return Outcome::Exhausted;
        }
        // forced moves first: neighbours with the fewest remaining exits
        let mut next: Vec<usize> = self
            .g
            .neighbors(end)
            .iter()
            .copied()
            .filter(|&u| !self.visited[u])
            .collect();
        next.sort_by_key(|&u| (self.free[u], u));
        for u in next {
            self.visit(u);
            match self.extend() {
                Outcome::Exhausted => self.unvisit(u),
                other => return other,
            }
        }
        Outcome::Exhausted
    }
}

#[cfg(test)]
mod tests {
    use super::super::{validate_cycle, Status};
    use super::*;
    use crate::graph::named;

    #[test]
    fn dp_examples() {
        let c6 = named::cycle(6);
        let v = dp_hamilton(&c6);
        assert_eq!(v.status, Status::Hamiltonian);
        validate_cycle(&c6, v.witness.as_ref().unwrap()).unwrap();
        assert_eq!(dp_hamilton(&named::petersen()).status, Status::NotHamiltonian);
        let k33 = named::complete_bipartite(3, 3);
        let v = dp_hamilton(&k33);
        validate_cycle(&k33, v.witness.as_ref().unwrap()).unwrap();
        assert_eq!(dp_hamilton(&named::path(5)).status, Status::NotHamiltonian);
    }

    #[test]
    fn backtracking_agrees_with_dp() {
        for g in [
            named::cycle(6),
            named::petersen(),
            named::complete_bipartite(3, 3),
            named::complete_bipartite(3, 4),
            named::complete(7),
        ] {
            let a = dp_hamilton(&g);
            let b = backtrack_hamilton(&g, u64::MAX);
            assert_eq!(a.status, b.status);
            if let Some(c) = &b.witness {
                validate_cycle(&g, c).unwrap();
            }
        }
    }

    #[test]
    fn backtracking_reports_budget_exhaustion() {
        assert_eq!(backtrack_hamilton(&named::petersen(), 1).status, Status::Unknown);
    }
}
