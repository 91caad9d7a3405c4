//! Exact verdicts on graphon conditions.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Graphon, StepGraphon};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fracmatch::{fvcn_half, non_constant_cover, Half, PeninsulaKind};
use crate::graph::FiniteGraph;
use crate::rational::{self, Rational};

/// Blocks beyond this count make the exact subset searches refuse to run.
pub const ENUMERATION_CAP: usize = 24;

fn check_cap(g: &StepGraphon) -> Result<()> {
    if g.blocks() > ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            blocks: g.blocks(),
            cap: ENUMERATION_CAP,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connectivity {
    pub connected: bool,
    /// For a disconnected graphon: blocks `s` and `t` with zero cross-density.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
}

/// Connectivity of the block positivity graph (loops ignored).
pub fn check_connected(g: &StepGraphon) -> Connectivity {
    let k = g.blocks();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..k {
        for j in i + 1..k {
            if g.positive(i, j) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let root = find(&mut parent, 0);
    let (s, t): (Vec<usize>, Vec<usize>) = (0..k).partition(|&i| find(&mut parent, i) == root);
    if t.is_empty() {
        Connectivity {
            connected: true,
            witness: None,
        }
    } else {
        Connectivity {
            connected: false,
            witness: Some((s, t)),
        }
    }
}

/// `mu(D_W(alpha)) / alpha`.
///
/// Exact for step graphons. For the power family the closed form
/// `min(1, ((beta + 1) alpha)^(1/beta)) / alpha` is evaluated in double
/// precision and returned as the exact value of that double (relative error
/// about `1e-15`).
pub fn degree_tail_ratio(g: &Graphon, alpha: &Rational) -> Result<Rational> {
    if *alpha <= Rational::zero() || *alpha > Rational::one() {
        return Err(Error::InvalidArgument(format!(
            "alpha = {} is not in (0, 1]",
            rational::format(alpha)
        )));
    }
    match g {
        Graphon::Step(s) => {
            let low: Rational = s
                .degrees()
                .iter()
                .zip(s.masses())
                .filter(|(d, _)| *d <= alpha)
                .map(|(_, m)| m.clone())
                .sum();
            Ok(low / alpha)
        }
        Graphon::Power(p) => {
            let b = p.beta_f64();
            let scaled = rational::to_f64(&((p.beta() + Rational::one()) * alpha));
            let measure = scaled.powf(1.0 / b).min(1.0);
            let measure = Rational::from_float(measure).expect("finite measure");
            Ok(measure / alpha)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailVerdict {
    /// `mu(D(alpha)) / alpha -> 0`.
    Holds,
    /// `liminf mu(D(alpha)) / alpha > 0` but finite.
    FailsLiminfPositive,
    /// `mu(D(alpha)) / alpha -> infinity`.
    FailsLimitInfinite,
}

pub fn check_degree_tail(g: &Graphon) -> TailVerdict {
    match g {
        // Finitely many degree values: below the least positive one the
        // measure is the mass of zero-degree blocks.
        Graphon::Step(s) => {
            if s.degrees().iter().any(Zero::is_zero) {
                TailVerdict::FailsLimitInfinite
            } else {
                TailVerdict::Holds
            }
        }
        // ratio = alpha^((1 - beta)/beta) (beta + 1)^(1/beta) for small alpha
        Graphon::Power(p) => match p.beta().cmp(&Rational::one()) {
            std::cmp::Ordering::Less => TailVerdict::Holds,
            std::cmp::Ordering::Equal => TailVerdict::FailsLiminfPositive,
            std::cmp::Ordering::Greater => TailVerdict::FailsLimitInfinite,
        },
    }
}

/// Witness `(a, A, B)` of a (narrow) peninsula, as per-block masses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeninsulaCertificate {
    pub kind: PeninsulaKind,
    #[serde(with = "rational::serde_str")]
    pub a: Rational,
    #[serde(with = "rational::serde_vec")]
    pub a_fractions: Vec<Rational>,
    #[serde(with = "rational::serde_vec")]
    pub b_fractions: Vec<Rational>,
}

impl PeninsulaCertificate {
    pub fn a_mass(&self) -> Rational {
        self.a_fractions.iter().sum()
    }

    pub fn b_mass(&self) -> Rational {
        self.b_fractions.iter().sum()
    }

    /// Re-checks every defining property against the graphon.
    pub fn validate(&self, g: &StepGraphon) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidCertificate(m));
        let k = g.blocks();
        if self.a_fractions.len() != k || self.b_fractions.len() != k {
            return bad("fraction vectors have the wrong length".into());
        }
        let zero = Rational::zero();
        if self.a <= zero || self.a > rational::half() {
            return bad(format!("a = {} outside (0, 1/2]", rational::format(&self.a)));
        }
        for i in 0..k {
            let (ai, bi) = (&self.a_fractions[i], &self.b_fractions[i]);
            if *ai < zero || *bi < zero {
                return bad(format!("negative fraction in block {i}"));
            }
            if ai + bi > *g.mass(i) {
                return bad(format!("block {i} is over-assigned"));
            }
        }
        let one = Rational::one();
        if self.b_mass() != &one - &self.a * rational::from_int(2) {
            return bad("mu(B) != 1 - 2a".into());
        }
        let a_mass = self.a_mass();
        let ok = match self.kind {
            PeninsulaKind::Peninsula => a_mass == self.a,
            PeninsulaKind::Narrow => a_mass > self.a,
        };
        if !ok {
            return bad("mu(A) does not match the kind".into());
        }
        for i in 0..k {
            if self.a_fractions[i].is_zero() {
                continue;
            }
            for j in 0..k {
                let touches = !self.a_fractions[j].is_zero() || !self.b_fractions[j].is_zero();
                if touches && g.positive(i, j) {
                    return bad(format!("W is positive on A x (A u B) at blocks ({i}, {j})"));
                }
            }
        }
        Ok(())
    }

    /// Shrinks `A` pro rata to mass exactly `a`, turning a narrow witness into
    /// a plain peninsula with the same `a` and `B`.
    pub fn shrink_to_peninsula(&self) -> PeninsulaCertificate {
        let scale = &self.a / self.a_mass();
        PeninsulaCertificate {
            kind: PeninsulaKind::Peninsula,
            a: self.a.clone(),
            a_fractions: self.a_fractions.iter().map(|x| x * &scale).collect(),
            b_fractions: self.b_fractions.clone(),
        }
    }
}

/// Validates a candidate `Z` (nonempty, independent, loop-free) and returns
/// membership flags for `Z` and `N(Z)` with their masses.
fn z_and_neighbourhood(
    g: &StepGraphon,
    z: &[usize],
) -> Result<(Vec<bool>, Vec<bool>, Rational, Rational)> {
    let k = g.blocks();
    if z.is_empty() {
        return Err(Error::InvalidArgument("Z is empty".into()));
    }
    let mut in_z = vec![false; k];
    for &i in z {
        if i >= k {
            return Err(Error::InvalidArgument(format!("block {i} out of range")));
        }
        in_z[i] = true;
    }
    let mut in_n = vec![false; k];
    for &i in z {
        for j in 0..k {
            if g.positive(i, j) {
                if in_z[j] {
                    return Err(Error::InvalidArgument(format!(
                        "Z is not independent: density at ({i}, {j}) is positive"
                    )));
                }
                in_n[j] = true;
            }
        }
    }
    let mass = |flags: &[bool]| -> Rational {
        (0..k)
            .filter(|&i| flags[i])
            .map(|i| g.mass(i).clone())
            .sum()
    };
    let (mz, mn) = (mass(&in_z), mass(&in_n));
    Ok((in_z, in_n, mz, mn))
}

/// Narrow witness from `Z` with `mass(N(Z)) < mass(Z)`: `A` is all of `Z`,
/// `C = N(Z)`, `B` is the rest and `a = (mass(Z) + mass(N(Z))) / 2`.
pub fn narrow_certificate(g: &StepGraphon, z: &[usize]) -> Result<PeninsulaCertificate> {
    let (in_z, in_n, mz, mn) = z_and_neighbourhood(g, z)?;
    if mn >= mz {
        return Err(Error::InvalidArgument("mass(N(Z)) >= mass(Z)".into()));
    }
    let k = g.blocks();
    let a = (&mz + &mn) * rational::half();
    let a_fractions = (0..k)
        .map(|i| if in_z[i] { g.mass(i).clone() } else { Rational::zero() })
        .collect();
    let b_fractions = (0..k)
        .map(|i| {
            if in_z[i] || in_n[i] {
                Rational::zero()
            } else {
                g.mass(i).clone()
            }
        })
        .collect();
    Ok(PeninsulaCertificate {
        kind: PeninsulaKind::Narrow,
        a,
        a_fractions,
        b_fractions,
    })
}

/// Peninsula witness from `Z` with `mass(N(Z)) <= mass(Z)`.
///
/// `a = min(mass(Z), max(mass(N(Z)), eps))` with
/// `eps = min(mass(Z), mass(rest))/2` (or `mass(Z)/2` when `Z` is everything).
/// `A` takes `a` pro rata from `Z`, `C` is `N(Z)` plus padding, and `B` takes
/// a pro rata share of what is left.
pub fn peninsula_certificate(g: &StepGraphon, z: &[usize]) -> Result<PeninsulaCertificate> {
    let (in_z, in_n, mz, mn) = z_and_neighbourhood(g, z)?;
    if mn > mz {
        return Err(Error::InvalidArgument("mass(N(Z)) > mass(Z)".into()));
    }
    let k = g.blocks();
    let one = Rational::one();
    let half = rational::half();
    let mut eps = std::cmp::min(mz.clone(), &one - &mz) * &half;
    if eps.is_zero() {
        eps = &mz * &half;
    }
    let a = std::cmp::min(mz.clone(), std::cmp::max(mn.clone(), eps));
    let scale = &a / &mz;
    let a_fractions: Vec<Rational> = (0..k)
        .map(|i| {
            if in_z[i] {
                g.mass(i) * &scale
            } else {
                Rational::zero()
            }
        })
        .collect();
    let available: Vec<Rational> = (0..k)
        .map(|i| {
            if in_n[i] {
                Rational::zero()
            } else {
                g.mass(i) - &a_fractions[i]
            }
        })
        .collect();
    let avail_total = &one - &a - &mn;
    let b_total = &one - &a * rational::from_int(2);
    let b_fractions = if avail_total.is_zero() {
        vec![Rational::zero(); k]
    } else {
        let share = &b_total / &avail_total;
        available.iter().map(|x| x * &share).collect()
    };
    Ok(PeninsulaCertificate {
        kind: PeninsulaKind::Peninsula,
        a,
        a_fractions,
        b_fractions,
    })
}

/// Weighted block positivity graph: masses as weights, a loop where the
/// diagonal density is positive.
pub(crate) fn block_graph(g: &StepGraphon) -> FiniteGraph {
    let k = g.blocks();
    let edges = (0..k).flat_map(|i| (i..k).map(move |j| (i, j)));
    let edges: Vec<_> = edges.filter(|&(i, j)| g.positive(i, j)).collect();
    FiniteGraph::weighted(k, edges, vec![false; k], g.masses().to_vec())
        .expect("block graph is well formed")
}

/// Finds a peninsula certificate, narrow whenever one exists.
///
/// Block-level covers decide the question: a narrow peninsula exists iff the
/// minimum weighted half-integral cover of the block graph weighs less than
/// 1/2; a peninsula exists iff some non-constant cover weighs at most 1/2.
/// `Z` is the zero set of that cover.
pub fn find_peninsula(g: &StepGraphon) -> Result<Option<PeninsulaCertificate>> {
    check_cap(g)?;
    let h = block_graph(g);
    let best = fvcn_half(&h);
    if best.weight < rational::half() {
        let z = best.vertices_with(Half::Zero);
        return narrow_certificate(g, &z).map(Some);
    }
    match non_constant_cover(&h, Exec::Sequential) {
        Some(cover) => peninsula_certificate(g, &cover.vertices_with(Half::Zero)).map(Some),
        None => Ok(None),
    }
}

/// Witness for an exact half/half bipartite split: `s_mass[i]` is the part
/// of block `i` placed in `S`, the remainder goes to `T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteSplit {
    #[serde(with = "rational::serde_vec")]
    pub s_mass: Vec<Rational>,
}

impl BipartiteSplit {
    pub fn validate(&self, g: &StepGraphon) -> Result<()> {
        let k = g.blocks();
        let bad = |m: &str| Err(Error::InvalidCertificate(m.into()));
        if self.s_mass.len() != k {
            return bad("wrong length");
        }
        let total: Rational = self.s_mass.iter().sum();
        if total != rational::half() {
            return bad("mu(S) != 1/2");
        }
        let t_mass: Vec<Rational> = (0..k).map(|i| g.mass(i) - &self.s_mass[i]).collect();
        if (0..k).any(|i| self.s_mass[i] < Rational::zero() || t_mass[i] < Rational::zero()) {
            return bad("split outside block");
        }
        for i in 0..k {
            for j in 0..k {
                if !g.positive(i, j) {
                    continue;
                }
                let both_s = !self.s_mass[i].is_zero() && !self.s_mass[j].is_zero();
                let both_t = !t_mass[i].is_zero() && !t_mass[j].is_zero();
                if both_s || both_t {
                    return bad("W is positive inside one side");
                }
            }
        }
        Ok(())
    }
}

/// Whether `Omega = S u T` with `mu(S) = mu(T) = 1/2` and `W = 0` on
/// `S x S` and `T x T`.
///
/// A block may straddle both sides only if its whole row is zero; those
/// blocks absorb any mass imbalance. The others must 2-colour the positivity
/// graph, and each component's colouring can be flipped, so the search runs
/// over component orientations.
pub fn check_exact_bipartite_split(g: &StepGraphon) -> Result<Option<BipartiteSplit>> {
    check_cap(g)?;
    let k = g.blocks();
    let free: Vec<bool> = (0..k).map(|i| (0..k).all(|j| !g.positive(i, j))).collect();
    let mut colour: Vec<Option<(usize, bool)>> = vec![None; k];
    let mut components = 0;
    for s in 0..k {
        if free[s] || colour[s].is_some() {
            continue;
        }
        colour[s] = Some((components, false));
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            let (_, c) = colour[v].unwrap();
            if g.positive(v, v) {
                return Ok(None);
            }
            for u in 0..k {
                if u == v || !g.positive(v, u) {
                    continue;
                }
                match colour[u] {
                    None => {
                        colour[u] = Some((components, !c));
                        stack.push(u);
                    }
                    Some((_, cu)) if cu == c => return Ok(None),
                    _ => {}
                }
            }
        }
        components += 1;
    }
    let half = rational::half();
    for orientation in 0u64..(1u64 << components) {
        let side_s = |i: usize| {
            let (comp, c) = colour[i].unwrap();
            c ^ (orientation >> comp & 1 == 1)
        };
        let mut ms = Rational::zero();
        let mut mt = Rational::zero();
        for i in (0..k).filter(|&i| !free[i]) {
            if side_s(i) {
                ms += g.mass(i);
            } else {
                mt += g.mass(i);
            }
        }
        if ms > half || mt > half {
            continue;
        }
        let mut need = &half - &ms;
        let s_mass = (0..k)
            .map(|i| {
                if free[i] {
                    let take = std::cmp::min(need.clone(), g.mass(i).clone());
                    need -= &take;
                    take
                } else if side_s(i) {
                    g.mass(i).clone()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        return Ok(Some(BipartiteSplit { s_mass }));
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    AasHamiltonian,
    ProbabilityBoundedHalf,
    AasNotHamiltonian,
    Indeterminate,
}

/// The three sufficient conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonConditions {
    pub connected: bool,
    pub light_degree_tail: bool,
    pub no_peninsula: bool,
}

/// The four strongly negative conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StronglyNegative {
    pub disconnected: bool,
    pub tail_ratio_infinite: bool,
    pub narrow_peninsula: bool,
    pub exact_bipartite_split: bool,
}

impl StronglyNegative {
    pub fn any(&self) -> bool {
        self.disconnected
            || self.tail_ratio_infinite
            || self.narrow_peninsula
            || self.exact_bipartite_split
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub connectivity: Connectivity,
    pub degree_tail: TailVerdict,
    pub peninsula: Option<PeninsulaCertificate>,
    pub bipartite_split: Option<BipartiteSplit>,
    pub conditions: HamiltonConditions,
    pub strongly_negative: StronglyNegative,
    pub regime: Regime,
}

pub fn analyze(g: &Graphon) -> Result<ConditionReport> {
    let degree_tail = check_degree_tail(g);
    let (connectivity, peninsula, bipartite_split) = match g {
        Graphon::Step(s) => (
            check_connected(s),
            find_peninsula(s)?,
            check_exact_bipartite_split(s)?,
        ),
        // (xy)^beta > 0 almost everywhere.
        Graphon::Power(_) => (
            Connectivity {
                connected: true,
                witness: None,
            },
            None,
            None,
        ),
    };
    let conditions = HamiltonConditions {
        connected: connectivity.connected,
        light_degree_tail: degree_tail == TailVerdict::Holds,
        no_peninsula: peninsula.is_none(),
    };
    let strongly_negative = StronglyNegative {
        disconnected: !connectivity.connected,
        tail_ratio_infinite: degree_tail == TailVerdict::FailsLimitInfinite,
        narrow_peninsula: peninsula
            .as_ref()
            .is_some_and(|p| p.kind == PeninsulaKind::Narrow),
        exact_bipartite_split: bipartite_split.is_some(),
    };
    let regime = if strongly_negative.any() {
        Regime::AasNotHamiltonian
    } else if conditions.connected && conditions.light_degree_tail && conditions.no_peninsula {
        Regime::AasHamiltonian
    } else if peninsula.is_some() {
        Regime::ProbabilityBoundedHalf
    } else {
        Regime::Indeterminate
    };
    Ok(ConditionReport {
        connectivity,
        degree_tail,
        peninsula,
        bipartite_split,
        conditions,
        strongly_negative,
        regime,
    })
}
