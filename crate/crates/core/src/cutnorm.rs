//! Cut norms of signed step functions and the type-aligned cut distance
//! between a sampled graph and its step graphon.

use std::ops::{AddAssign, SubAssign};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graphon::{StepGraphon, ENUMERATION_CAP};
use crate::rational::{self, Rational};
use crate::sampler::{self, SampledGraph, VertexType};

/// Symmetric step function with values in `[-1, 1]` on blocks of the given
/// masses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFunction {
    masses: Vec<Rational>,
    values: Vec<Vec<Rational>>,
}

impl StepFunction {
    pub fn new(masses: Vec<Rational>, values: Vec<Vec<Rational>>) -> Result<Self> {
        let k = masses.len();
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if k == 0 || masses.iter().any(|m| *m <= Rational::zero()) {
            return bad("masses must be positive and nonempty".into());
        }
        if masses.iter().sum::<Rational>() != rational::from_int(1) {
            return bad("masses must sum to 1".into());
        }
        if values.len() != k || values.iter().any(|r| r.len() != k) {
            return bad(format!("values must be a {k}x{k} matrix"));
        }
        let one = rational::from_int(1);
        for i in 0..k {
            for j in 0..k {
                if values[i][j].abs() > one {
                    return bad(format!("value at ({i}, {j}) outside [-1, 1]"));
                }
                if values[i][j] != values[j][i] {
                    return bad(format!("values not symmetric at ({i}, {j})"));
                }
            }
        }
        Ok(StepFunction { masses, values })
    }

    pub fn zero(k: usize) -> Self {
        let m = rational::ratio(1, k as i64);
        StepFunction {
            masses: vec![m; k],
            values: vec![vec![Rational::zero(); k]; k],
        }
    }

    pub fn blocks(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    pub fn values(&self) -> &[Vec<Rational>] {
        &self.values
    }

    /// `m_i m_j f_ij`.
    fn weighted(&self) -> Vec<Vec<Rational>> {
        let k = self.blocks();
        (0..k)
            .map(|i| (0..k).map(|j| &self.masses[i] * &self.masses[j] * &self.values[i][j]).collect())
            .collect()
    }

    /// `|sum over S x T of m_i m_j f_ij|`.
    pub fn score(&self, s: &[usize], t: &[usize]) -> Rational {
        let mut acc = Rational::zero();
        for &i in s {
            for &j in t {
                acc += &self.masses[i] * &self.masses[j] * &self.values[i][j];
            }
        }
        acc.abs()
    }

    /// `sum m_i m_j |f_ij|`, an upper bound on the cut norm.
    pub fn l1_norm(&self) -> Rational {
        self.weighted().iter().flatten().map(Signed::abs).sum()
    }
}

/// A cut norm value with the block sets that attain it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutWitness {
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
}

fn mask_to_vec(mask: u64, k: usize) -> Vec<usize> {
    (0..k).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Exact cut norm. The bilinear form is maximised at 0/1 points, so it
/// suffices to walk all `S` in Gray-code order and take the best `T` for
/// each sign.
pub fn cut_norm_exact(f: &StepFunction) -> Result<CutWitness> {
    let k = f.blocks();
    if k > ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            blocks: k,
            cap: ENUMERATION_CAP,
        });
    }
    let weighted = f.weighted();
    let denom = rational::common_denominator(weighted.iter().flatten());
    let scaled: Vec<Vec<BigInt>> = weighted
        .iter()
        .map(|row| row.iter().map(|x| (x * &denom).to_integer()).collect())
        .collect();
    let total: BigInt = scaled.iter().flatten().map(Signed::abs).sum();
    let (value, s, positive) = if total.bits() < 120 {
        let small: Vec<Vec<i128>> = scaled
            .iter()
            .map(|r| r.iter().map(|x| x.to_i128().unwrap()).collect())
            .collect();
        let (v, s, p) = gray_search(&small);
        (BigInt::from(v), s, p)
    } else {
        gray_search(&scaled)
    };
    let s_vec = mask_to_vec(s, k);
    let col = |j: usize| -> Rational { s_vec.iter().map(|&i| weighted[i][j].clone()).sum() };
    let t: Vec<usize> = (0..k)
        .filter(|&j| {
            let c = col(j);
            if positive {
                c.is_positive()
            } else {
                c.is_negative()
            }
        })
        .collect();
    Ok(CutWitness {
        value: Rational::new(value, denom),
        s: if t.is_empty() { Vec::new() } else { s_vec },
        t,
    })
}

/// Best `(value, S mask, sign)`; the first maximiser in Gray order wins.
fn gray_search<T>(m: &[Vec<T>]) -> (T, u64, bool)
where
    T: Signed + Clone + Ord + for<'a> AddAssign<&'a T> + for<'a> SubAssign<&'a T>,
{
    let k = m.len();
    let mut col = vec![T::zero(); k];
    let mut mask = 0u64;
    let mut best = (T::zero(), 0u64, true);
    for step in 1u64..(1u64 << k) {
        let i = step.trailing_zeros() as usize;
        mask ^= 1 << i;
        let adding = mask >> i & 1 == 1;
        for (c, x) in col.iter_mut().zip(&m[i]) {
            if adding {
                *c += x;
            } else {
                *c -= x;
            }
        }
        let (mut pos, mut neg) = (T::zero(), T::zero());
        for c in &col {
            if c.is_positive() {
                pos += c;
            } else {
                neg -= c;
            }
        }
        if pos > best.0 {
            best = (pos.clone(), mask, true);
        }
        if neg > best.0 {
            best = (neg, mask, false);
        }
    }
    best
}

/// Alternating maximisation from `restarts` starting sets: restart 0 starts
/// from `S = Omega`, the others from random halves. Each round takes the
/// sign-optimal `T` for `S`, then the sign-optimal `S` for `T`, for both
/// signs. Every candidate is re-scored exactly, so the result is a certified
/// lower bound.
pub fn cut_norm_heuristic(f: &StepFunction, restarts: usize, seed: u64) -> CutWitness {
    cut_norm_heuristic_with(f, restarts, seed, Exec::default())
}

pub fn cut_norm_heuristic_with(f: &StepFunction, restarts: usize, seed: u64, exec: Exec) -> CutWitness {
    let k = f.blocks();
    let m: Vec<Vec<f64>> = f
        .weighted()
        .iter()
        .map(|r| r.iter().map(rational::to_f64).collect())
        .collect();
    let candidates = exec.map_range(restarts.max(1), |r| {
        let start: Vec<bool> = if r == 0 {
            vec![true; k]
        } else {
            let mut rng = sampler::stream(seed, r as u64, 0);
            (0..k).map(|_| rng.gen_bool(0.5)).collect()
        };
        let mut local: Option<CutWitness> = None;
        for sign in [1.0, -1.0] {
            let (s, t) = alternate(&m, start.clone(), sign);
            let w = CutWitness {
                value: f.score(&s, &t),
                s,
                t,
            };
            local = Some(better(local, w));
        }
        local.unwrap()
    });
    candidates
        .into_iter()
        .fold(None, |acc, w| Some(better(acc, w)))
        .unwrap()
}

/// Larger value wins; ties go to the lexicographically smaller witness.
fn better(current: Option<CutWitness>, candidate: CutWitness) -> CutWitness {
    match current {
        None => candidate,
        Some(c) => {
            let key = |w: &CutWitness| (w.s.clone(), w.t.clone());
            if candidate.value > c.value || (candidate.value == c.value && key(&candidate) < key(&c)) {
                candidate
            } else {
                c
            }
        }
    }
}

fn alternate(m: &[Vec<f64>], mut s: Vec<bool>, sign: f64) -> (Vec<usize>, Vec<usize>) {
    let k = m.len();
    let best_side = |from: &[bool]| -> Vec<bool> {
        (0..k)
            .map(|j| sign * (0..k).filter(|&i| from[i]).map(|i| m[i][j]).sum::<f64>() > 0.0)
            .collect()
    };
    let value = |s: &[bool], t: &[bool]| -> f64 {
        let mut acc = 0.0;
        for i in (0..k).filter(|&i| s[i]) {
            for j in (0..k).filter(|&j| t[j]) {
                acc += m[i][j];
            }
        }
        sign * acc
    };
    let mut t = best_side(&s);
    let mut current = value(&s, &t);
    for _ in 0..100 {
        let s2 = best_side(&t);
        let t2 = best_side(&s2);
        let next = value(&s2, &t2);
        if next <= current {
            break;
        }
        (s, t, current) = (s2, t2, next);
    }
    let idx = |v: &[bool]| (0..k).filter(|&i| v[i]).collect::<Vec<_>>();
    let (s, t) = (idx(&s), idx(&t));
    if s.is_empty() || t.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        (s, t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleDistance {
    /// Certified lower bound on the cut norm of `W_G - W`.
    pub lower: CutWitness,
    /// `sum m_p m_q |W_G - W|` over the common refinement.
    #[serde(with = "rational::serde_str")]
    pub upper: Rational,
    /// Number of pieces in the common refinement.
    pub pieces: usize,
}

/// Cut distance estimate between a sample and `g`, with the identity
/// alignment: type class `b` of the sample sits at the same place as block
/// `b` of `g`. The sample's step function has class masses `c_b / n` and
/// empirical densities `e_ab / (c_a c_b)` (`2 e_aa / c_a^2` inside a class);
/// both are laid out on the common refinement of the two interval
/// partitions of `[0, 1)`.
pub fn sample_distance(s: &SampledGraph, g: &StepGraphon, restarts: usize) -> Result<SampleDistance> {
    let k = g.blocks();
    let n = s.n();
    if s.types.len() != n || n == 0 {
        return Err(Error::TypesMissing);
    }
    let mut class = Vec::with_capacity(n);
    for t in &s.types {
        match t {
            VertexType::Block { index, .. } if *index < k => class.push(*index),
            _ => return Err(Error::TypesMissing),
        }
    }
    let mut counts = vec![0i64; k];
    for &b in &class {
        counts[b] += 1;
    }
    let mut edges = vec![vec![0i64; k]; k];
    for &(u, v) in s.graph.edges() {
        let (a, b) = (class[u], class[v]);
        edges[a][b] += 1;
        if a != b {
            edges[b][a] += 1;
        }
    }
    let empirical = |a: usize, b: usize| -> Rational {
        let pairs = counts[a] * counts[b];
        if pairs == 0 {
            Rational::zero()
        } else if a == b {
            rational::ratio(2 * edges[a][a], pairs)
        } else {
            rational::ratio(edges[a][b], pairs)
        }
    };

    // merge the breakpoints of both partitions
    let mut pieces: Vec<(Rational, usize, usize)> = Vec::new();
    let (mut gi, mut ei) = (0usize, 0usize);
    let (mut g_end, mut e_end) = (g.mass(0).clone(), rational::ratio(counts[0], n as i64));
    let mut pos = Rational::zero();
    while gi < k && ei < k {
        let end = std::cmp::min(&g_end, &e_end).clone();
        if end > pos {
            pieces.push((&end - &pos, gi, ei));
            pos = end.clone();
        }
        if g_end == end {
            gi += 1;
            if gi < k {
                g_end += g.mass(gi);
            }
        }
        if e_end == end {
            ei += 1;
            if ei < k {
                e_end += rational::ratio(counts[ei], n as i64);
            }
        }
    }
    let masses: Vec<Rational> = pieces.iter().map(|p| p.0.clone()).collect();
    let values: Vec<Vec<Rational>> = pieces
        .iter()
        .map(|&(_, gp, ep)| {
            pieces
                .iter()
                .map(|&(_, gq, eq)| empirical(ep, eq) - g.density(gp, gq))
                .collect()
        })
        .collect();
    let diff = StepFunction::new(masses, values)?;
    Ok(SampleDistance {
        lower: cut_norm_heuristic(&diff, restarts, s.seed ^ s.trial_index.rotate_left(32)),
        upper: diff.l1_norm(),
        pieces: diff.blocks(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphon::Graphon;
    use crate::rational::ratio;

    fn sf(masses: &[(i64, i64)], values: &[&[(i64, i64)]]) -> StepFunction {
        StepFunction::new(
            masses.iter().map(|&(p, q)| ratio(p, q)).collect(),
            values
                .iter()
                .map(|r| r.iter().map(|&(p, q)| ratio(p, q)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn exact_examples() {
        assert!(cut_norm_exact(&StepFunction::zero(3)).unwrap().value.is_zero());
        let single = sf(&[(1, 1)], &[&[(-3, 4)]]);
        assert_eq!(cut_norm_exact(&single).unwrap().value, ratio(3, 4));
        let off = sf(&[(1, 2), (1, 2)], &[&[(0, 1), (3, 5)], &[(3, 5), (0, 1)]]);
        let w = cut_norm_exact(&off).unwrap();
        // S = {0}, T = {1} gives c/4; S = T = Omega gives c/2
        assert_eq!(w.value, ratio(3, 10));
        assert_eq!(off.score(&w.s, &w.t), w.value);
    }

    #[test]
    fn heuristic_examples() {
        let h = cut_norm_heuristic(&StepFunction::zero(4), 5, 1);
        assert!(h.value.is_zero());
        let rank_one = sf(
            &[(1, 3), (1, 3), (1, 3)],
            &[&[(1, 4), (1, 2), (1, 8)], &[(1, 2), (1, 1), (1, 4)], &[(1, 8), (1, 4), (1, 16)]],
        );
        let h = cut_norm_heuristic(&rank_one, 1, 0);
        assert_eq!(h.s, vec![0, 1, 2]);
        assert_eq!(h.value, cut_norm_exact(&rank_one).unwrap().value);
    }

    #[test]
    fn invalid_step_functions_rejected() {
        let m = vec![ratio(1, 2), ratio(1, 2)];
        let asym = vec![vec![ratio(0, 1), ratio(1, 2)], vec![ratio(1, 3), ratio(0, 1)]];
        assert!(StepFunction::new(m.clone(), asym).is_err());
        let big = vec![vec![ratio(2, 1), ratio(0, 1)], vec![ratio(0, 1), ratio(0, 1)]];
        assert!(StepFunction::new(m, big).is_err());
    }

    #[test]
    fn complete_sample_distance_is_one_over_n() {
        let one = StepGraphon::constant(ratio(1, 1)).unwrap();
        let s = sampler::sample_graph(&Graphon::Step(one.clone()), 50, 0, 0).unwrap();
        let d = sample_distance(&s, &one, 4).unwrap();
        assert_eq!(d.upper, ratio(1, 50));
        assert_eq!(d.lower.value, ratio(1, 50));
        let zero = StepGraphon::constant(ratio(0, 1)).unwrap();
        let d = sample_distance(&s, &zero, 4).unwrap();
        assert!(rational::to_f64(&d.lower.value) >= 0.9);
    }

    #[test]
    fn refinement_handles_unequal_class_masses() {
        let g = StepGraphon::new(
            vec![ratio(1, 3), ratio(2, 3)],
            vec![vec![ratio(1, 2), ratio(1, 4)], vec![ratio(1, 4), ratio(3, 4)]],
        )
        .unwrap();
        let s = sampler::sample_graph(&Graphon::Step(g.clone()), 90, 5, 1).unwrap();
        let d = sample_distance(&s, &g, 8).unwrap();
        assert!(d.pieces >= 2 && d.pieces <= 3);
        assert!(d.lower.value <= d.upper);
    }
}
