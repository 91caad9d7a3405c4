//! Half-integral fractional matchings and vertex covers.
//!
//! Optimal covers come from a minimum-weight vertex cover of the bipartite
//! double cover (max-flow / min-cut); optimal matchings from a maximum matching
//! of the same double cover (Hopcroft–Karp). The two routes are independent,
//! which is what makes [`check_duality`] a meaningful self-test.

mod matching;
mod peninsula;

pub use matching::{fmn_half, half_integral_perfect_matching};
pub use peninsula::{
    graph_peninsula, non_constant_cover, uniquely_half_covered, GraphPeninsula, PeninsulaKind,
    UhcVerdict,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{Capacity, FlowNetwork};
use crate::graph::FiniteGraph;
use crate::rational::{self, Rational};

/// A value in `{0, 1/2, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Half {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1/2")]
    Half,
    #[serde(rename = "1")]
    One,
}

impl Half {
    pub fn halves(self) -> u8 {
        match self {
            Half::Zero => 0,
            Half::Half => 1,
            Half::One => 2,
        }
    }

    pub fn from_halves(h: u8) -> Self {
        match h {
            0 => Half::Zero,
            1 => Half::Half,
            2 => Half::One,
            _ => panic!("{h} halves is not half-integral in [0, 1]"),
        }
    }

    pub fn to_rational(self) -> Rational {
        rational::ratio(self.halves() as i64, 2)
    }
}

/// Half-integral fractional vertex cover with its (weighted) total.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfCover {
    pub values: Vec<Half>,
    #[serde(with = "rational::serde_str")]
    pub weight: Rational,
}

impl HalfCover {
    pub fn from_values(g: &FiniteGraph, values: Vec<Half>) -> Self {
        let weight = weighted_sum(g, &values);
        Self { values, weight }
    }

    pub fn is_constant_half(&self) -> bool {
        self.values.iter().all(|&v| v == Half::Half)
    }

    pub fn vertices_with(&self, value: Half) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&v| self.values[v] == value)
            .collect()
    }

    /// Re-checks the cover constraints and the stored weight.
    pub fn validate(&self, g: &FiniteGraph) -> Result<()> {
        if self.values.len() != g.n() {
            return Err(Error::InvalidCertificate(format!(
                "cover has {} values for {} vertices",
                self.values.len(),
                g.n()
            )));
        }
        for &(u, v) in g.edges() {
            if self.values[u].halves() + self.values[v].halves() < 2 {
                return Err(Error::InvalidCertificate(format!(
                    "edge ({u}, {v}) is not covered"
                )));
            }
        }
        for v in 0..g.n() {
            if g.has_loop(v) && self.values[v] == Half::Zero {
                return Err(Error::InvalidCertificate(format!(
                    "loop at {v} needs value at least 1/2"
                )));
            }
        }
        if weighted_sum(g, &self.values) != self.weight {
            return Err(Error::InvalidCertificate("stored weight is wrong".into()));
        }
        Ok(())
    }
}

/// Half-integral fractional matching; `values[e]` refers to `g.edges()[e]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfMatching {
    pub edges: Vec<(usize, usize)>,
    pub values: Vec<Half>,
    #[serde(with = "rational::serde_str")]
    pub weight: Rational,
}

impl HalfMatching {
    /// Load at each vertex, counted in halves.
    pub fn loads(&self, n: usize) -> Vec<u32> {
        let mut load = vec![0u32; n];
        for (&(u, v), val) in self.edges.iter().zip(&self.values) {
            load[u] += val.halves() as u32;
            load[v] += val.halves() as u32;
        }
        load
    }

    pub fn is_perfect(&self, n: usize) -> bool {
        self.loads(n).iter().all(|&l| l == 2)
    }

    pub fn validate(&self, g: &FiniteGraph) -> Result<()> {
        if self.edges != g.edges() {
            return Err(Error::InvalidCertificate(
                "matching is indexed by a different edge set".into(),
            ));
        }
        if let Some(v) = self.loads(g.n()).iter().position(|&l| l > 2) {
            return Err(Error::InvalidCertificate(format!(
                "vertex {v} carries load above 1"
            )));
        }
        let halves: u64 = self.values.iter().map(|h| h.halves() as u64).sum();
        if rational::ratio(halves as i64, 2) != self.weight {
            return Err(Error::InvalidCertificate("stored weight is wrong".into()));
        }
        Ok(())
    }
}

fn weighted_sum(g: &FiniteGraph, values: &[Half]) -> Rational {
    match g.weights() {
        None => {
            let halves: u64 = values.iter().map(|h| h.halves() as u64).sum();
            rational::ratio(halves as i64, 2)
        }
        Some(w) => values
            .iter()
            .zip(w)
            .filter(|(h, _)| **h != Half::Zero)
            .map(|(h, w)| h.to_rational() * w)
            .sum(),
    }
}

/// Minimum-weight half-integral vertex cover.
pub fn fvcn_half(g: &FiniteGraph) -> HalfCover {
    let values = match g.weights() {
        None => {
            let n = g.n() as i64;
            double_cover_min_cut(g, vec![1i64; g.n()], 2 * n + 1)
        }
        Some(w) => {
            let total: Rational = w.iter().sum();
            double_cover_min_cut(g, w.to_vec(), total + rational::from_int(1))
        }
    };
    HalfCover::from_values(g, values)
}

/// Min vertex cover of the bipartite double cover, folded back to `g`.
///
/// Node layout: source 0, sink 1, `v+` at `2 + v`, `v-` at `2 + n + v`.
fn double_cover_min_cut<C: Capacity>(g: &FiniteGraph, weights: Vec<C>, infinity: C) -> Vec<Half> {
    let n = g.n();
    let plus = |v: usize| 2 + v;
    let minus = |v: usize| 2 + n + v;
    let mut net = FlowNetwork::new(2 + 2 * n);
    for (v, w) in weights.into_iter().enumerate() {
        if !w.is_zero() {
            net.add_arc(0, plus(v), w.clone());
            net.add_arc(minus(v), 1, w);
        }
        if g.has_loop(v) {
            net.add_arc(plus(v), minus(v), infinity.clone());
        }
    }
    for &(u, v) in g.edges() {
        net.add_arc(plus(u), minus(v), infinity.clone());
        net.add_arc(plus(v), minus(u), infinity.clone());
    }
    net.max_flow(0, 1, infinity);
    let reach = net.residual_reachable(0);
    (0..n)
        .map(|v| {
            let x_plus = !reach[plus(v)] as u8;
            let x_minus = reach[minus(v)] as u8;
            Half::from_halves(x_plus + x_minus)
        })
        .collect()
}

/// `fmn(G) = fvcn(G)` computed along the two independent routes.
pub fn check_duality(g: &FiniteGraph) -> Result<bool> {
    Ok(fmn_half(g)?.weight == fvcn_half(g).weight)
}

/// Proper 2-colouring if one exists.
pub fn two_coloring(g: &FiniteGraph) -> Option<Vec<bool>> {
    let n = g.n();
    let mut color: Vec<Option<bool>> = vec![None; n];
    for s in 0..n {
        if color[s].is_some() {
            continue;
        }
        if g.has_loop(s) {
            return None;
        }
        color[s] = Some(false);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            let c = color[v].unwrap();
            if g.has_loop(v) {
                return None;
            }
            for &u in g.neighbors(v) {
                match color[u] {
                    None => {
                        color[u] = Some(!c);
                        stack.push(u);
                    }
                    Some(cu) if cu == c => return None,
                    _ => {}
                }
            }
        }
    }
    Some(color.into_iter().map(Option::unwrap).collect())
}

pub fn is_bipartite(g: &FiniteGraph) -> bool {
    two_coloring(g).is_some()
}

/// Non-bipartiteness, the first consequence of being uniquely half-covered.
pub fn non_bipartite_if_uhc(g: &FiniteGraph) -> bool {
    !is_bipartite(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;
    use crate::rational::ratio;
    use num_traits::Zero;

    /// Exhaustive minimum over all {0, 1/2, 1} covers, in halves.
    fn brute_fvcn_halves(g: &FiniteGraph) -> u32 {
        let n = g.n();
        let mut best = u32::MAX;
        let mut vals = vec![0u8; n];
        loop {
            if g.edges().iter().all(|&(u, v)| vals[u] + vals[v] >= 2) {
                best = best.min(vals.iter().map(|&x| x as u32).sum());
            }
            let mut i = 0;
            while i < n && vals[i] == 2 {
                vals[i] = 0;
                i += 1;
            }
            if i == n {
                return best;
            }
            vals[i] += 1;
        }
    }

    #[test]
    fn five_cycle_cover_is_constant_half() {
        let g = named::cycle(5);
        let c = fvcn_half(&g);
        c.validate(&g).unwrap();
        assert_eq!(c.weight, ratio(5, 2));
        assert!(c.is_constant_half());
        assert_eq!(brute_fvcn_halves(&g), 5);
    }

    #[test]
    fn star_cover_takes_center() {
        let g = named::star(3);
        let c = fvcn_half(&g);
        assert_eq!(c.weight, ratio(1, 1));
        assert_eq!(c.values[0], Half::One);
        assert_eq!(brute_fvcn_halves(&g), 2);
    }

    #[test]
    fn empty_graph_cover_is_zero() {
        let c = fvcn_half(&named::empty(4));
        assert!(c.weight.is_zero());
        assert!(c.values.iter().all(|&v| v == Half::Zero));
    }

    #[test]
    fn weighted_loops_force_half() {
        let g = FiniteGraph::weighted(
            2,
            [(0, 1)],
            vec![false, true],
            vec![ratio(1, 3), ratio(2, 3)],
        )
        .unwrap();
        let c = fvcn_half(&g);
        c.validate(&g).unwrap();
        // f(1) >= 1/2 from the loop; f(0) + f(1) >= 1. Best: f(0)=1/2, f(1)=1/2 (1/2)
        // vs f(0)=0, f(1)=1 (2/3) vs f(0)=1, f(1)=1/2 (2/3).
        assert_eq!(c.weight, ratio(1, 2));
    }

    #[test]
    fn unit_weights_match_unweighted() {
        let g = named::petersen();
        let w = FiniteGraph::weighted(
            10,
            g.edges().iter().copied(),
            vec![false; 10],
            vec![ratio(1, 1); 10],
        )
        .unwrap();
        assert_eq!(fvcn_half(&g).weight, fvcn_half(&w).weight);
    }

    #[test]
    fn duality_examples() {
        assert!(check_duality(&named::complete(3)).unwrap());
        assert_eq!(fvcn_half(&named::complete(3)).weight, ratio(3, 2));
        let k34 = named::complete_bipartite(3, 4);
        assert!(check_duality(&k34).unwrap());
        assert_eq!(fmn_half(&k34).unwrap().weight, ratio(3, 1));
        assert!(check_duality(&named::empty(3)).unwrap());
    }

    #[test]
    fn bipartiteness() {
        assert!(non_bipartite_if_uhc(&named::cycle(5)));
        assert!(!non_bipartite_if_uhc(&named::complete_bipartite(3, 3)));
        assert!(is_bipartite(&named::empty(3)));
    }

    #[test]
    fn cover_validation_catches_tampering() {
        let g = named::cycle(5);
        let mut c = fvcn_half(&g);
        c.values[0] = Half::Zero;
        assert!(c.validate(&g).is_err());
    }
}
