use serde::{Deserialize, Serialize};

use super::{fvcn_half, Half, HalfCover};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::FiniteGraph;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeninsulaKind {
    Peninsula,
    Narrow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UhcVerdict {
    pub uniquely_half_covered: bool,
    /// A non-constant half-integral cover of weight at most half the total.
    pub witness: Option<HalfCover>,
}

/// Finite peninsula: `A = f^-1(0)`, `B = f^-1(1/2)` of the witness cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphPeninsula {
    pub kind: PeninsulaKind,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub cover: HalfCover,
}

impl GraphPeninsula {
    /// No edge inside `A` or between `A` and `B`, and `2|A| >= n - |B|`
    /// (strictly for the narrow kind).
    pub fn validate(&self, g: &FiniteGraph) -> Result<()> {
        let n = g.n();
        let mut label = vec![2u8; n];
        for &v in &self.a {
            label[v] = 0;
        }
        for &v in &self.b {
            if label[v] == 0 {
                return Err(Error::InvalidCertificate(format!("{v} is in both A and B")));
            }
            label[v] = 1;
        }
        if self.a.is_empty() {
            return Err(Error::InvalidCertificate("A is empty".into()));
        }
        for &(u, v) in g.edges() {
            let (lu, lv) = (label[u], label[v]);
            if (lu == 0 && lv <= 1) || (lv == 0 && lu <= 1) {
                return Err(Error::InvalidCertificate(format!(
                    "edge ({u}, {v}) touches A inside A or B"
                )));
            }
        }
        let lhs = 2 * self.a.len();
        let rhs = n - self.b.len();
        let ok = match self.kind {
            PeninsulaKind::Narrow => lhs > rhs,
            PeninsulaKind::Peninsula => lhs >= rhs,
        };
        if !ok {
            return Err(Error::InvalidCertificate(format!(
                "|A| = {} too small for |B| = {} and n = {n}",
                self.a.len(),
                self.b.len()
            )));
        }
        self.cover.validate(g)
    }
}

/// A half-integral cover that is not constant-1/2 and weighs at most half
/// the total weight, if any. Works in weighted mode (loops allowed).
///
/// Setting `f(v) = 0` forces `f = 1` on `N(v)`; the rest is an independent
/// optimisation on `G - v - N(v)`, so each vertex costs one min-cut.
pub fn non_constant_cover(g: &FiniteGraph, exec: Exec) -> Option<HalfCover> {
    let half_total = g.total_weight() * rational::half();
    let best = fvcn_half(g);
    if best.weight < half_total || (best.weight == half_total && !best.is_constant_half()) {
        return Some(best);
    }
    let candidates = exec.map_range(g.n(), |v| cover_with_zero_at(g, v, &half_total));
    candidates.into_iter().flatten().next()
}

fn cover_with_zero_at(g: &FiniteGraph, v: usize, half_total: &Rational) -> Option<HalfCover> {
    if g.has_loop(v) {
        return None;
    }
    let mut keep = vec![true; g.n()];
    keep[v] = false;
    let mut forced: Rational = Rational::from_integer(0.into());
    for &u in g.neighbors(v) {
        keep[u] = false;
        forced += g.weight(u);
    }
    if &forced > half_total {
        return None;
    }
    let (sub, map) = g.induced(&keep);
    let rest = fvcn_half(&sub);
    if &(forced + &rest.weight) > half_total {
        return None;
    }
    let mut values = vec![Half::One; g.n()];
    values[v] = Half::Zero;
    for (i, &old) in map.iter().enumerate() {
        values[old] = rest.values[i];
    }
    Some(HalfCover::from_values(g, values))
}

/// Whether the constant-1/2 function is the only half-integral cover of
/// weight at most `n/2`.
pub fn uniquely_half_covered(g: &FiniteGraph, exec: Exec) -> Result<UhcVerdict> {
    g.require_simple()?;
    let witness = non_constant_cover(g, exec);
    Ok(UhcVerdict {
        uniquely_half_covered: witness.is_none(),
        witness,
    })
}

/// Graph peninsula certificate, narrow when `fvcn < n/2`.
pub fn graph_peninsula(g: &FiniteGraph, exec: Exec) -> Result<Option<GraphPeninsula>> {
    g.require_simple()?;
    let half_n = rational::ratio(g.n() as i64, 2);
    let Some(cover) = non_constant_cover(g, exec) else {
        return Ok(None);
    };
    let kind = if cover.weight < half_n {
        PeninsulaKind::Narrow
    } else {
        PeninsulaKind::Peninsula
    };
    let cert = GraphPeninsula {
        kind,
        a: cover.vertices_with(Half::Zero),
        b: cover.vertices_with(Half::Half),
        cover,
    };
    debug_assert!(cert.validate(g).is_ok());
    Ok(Some(cert))
}
