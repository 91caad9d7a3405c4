//! Random instances and brute-force oracles shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::VecDeque;

use hamgraph::cutnorm::StepFunction;
use hamgraph::graphon::StepGraphon;
use hamgraph::rational::{ratio, Rational};
use hamgraph::FiniteGraph;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const PS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

pub fn gnp(rng: &mut impl Rng, n: usize, p: f64) -> FiniteGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    FiniteGraph::new(n, edges).unwrap()
}

/// Random bipartite graph with sides `0..a` and `a..n`.
pub fn random_bipartite(rng: &mut impl Rng, n: usize, p: f64) -> FiniteGraph {
    let a = rng.gen_range(0..=n);
    let mut edges = Vec::new();
    for u in 0..a {
        for v in a..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    FiniteGraph::new(n, edges).unwrap()
}

/// Mix of `G(n, p)` and bipartite graphs, so both outcomes of most
/// predicates occur.
pub fn mixed_graph(rng: &mut impl Rng, max_n: usize) -> FiniteGraph {
    let n = rng.gen_range(1..=max_n);
    let p = PS[rng.gen_range(0..PS.len())];
    if rng.gen_bool(0.3) {
        random_bipartite(rng, n, p)
    } else {
        gnp(rng, n, p)
    }
}

/// Optimum of `sum f(v)` over all `{0, 1/2, 1}` covers, in halves.
pub fn brute_fvcn_halves(g: &FiniteGraph) -> u64 {
    let n = g.n();
    let mut f = vec![0u8; n];
    let mut best = u64::MAX;
    loop {
        if g.edges().iter().all(|&(u, v)| f[u] + f[v] >= 2) {
            best = best.min(f.iter().map(|&x| x as u64).sum());
        }
        if !next_ternary(&mut f) {
            return best;
        }
    }
}

/// Optimum of `sum m(e)` over all `{0, 1/2, 1}` matchings, in halves.
///
/// Every assignment is explored, edge by edge; assignments that leave the
/// same residual capacity at every vertex are merged, so the state space is
/// `3^n` rather than `3^m`.
pub fn brute_fmn_halves(g: &FiniteGraph) -> u64 {
    let n = g.n();
    assert!(n <= 12);
    let pow: Vec<usize> = (0..=n).map(|i| 3usize.pow(i as u32)).collect();
    let cap = |state: usize, v: usize| (state / pow[v]) % 3;
    // best[state]: most halves placed so far with residual capacities `state`
    let mut best = vec![None::<u64>; pow[n]];
    best[pow[n] - 1] = Some(0);
    for &(u, v) in g.edges() {
        let mut next = best.clone();
        for (state, val) in best.iter().enumerate() {
            let Some(val) = *val else { continue };
            for x in 1..=cap(state, u).min(cap(state, v)) {
                let to = state - x * (pow[u] + pow[v]);
                let cand = val + x as u64;
                if next[to].is_none_or(|b| b < cand) {
                    next[to] = Some(cand);
                }
            }
        }
        best = next;
    }
    best.into_iter().flatten().max().unwrap()
}

fn next_ternary(digits: &mut [u8]) -> bool {
    for d in digits.iter_mut() {
        if *d < 2 {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

/// `(peninsula, narrow)` by enumerating every disjoint pair `(A, B)`: no
/// edge inside `A` or between `A` and `B`, `|B| < n`, and
/// `2|A| >= n - |B|` (strictly for narrow).
pub fn brute_graph_peninsula(g: &FiniteGraph) -> (bool, bool) {
    let n = g.n();
    assert!(n <= 16);
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0, |m, &u| m | 1 << u))
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let (mut pen, mut narrow) = (false, false);
    for a in 0..=full {
        let na = (0..n).filter(|&v| a >> v & 1 == 1).fold(0, |m, v| m | nbr[v]);
        let rest = full & !a;
        // every B within the complement of A, including the empty set
        let mut b = rest;
        loop {
            let (ca, cb) = (a.count_ones() as usize, b.count_ones() as usize);
            if na & (a | b) == 0 && cb < n {
                if 2 * ca >= n - cb {
                    pen = true;
                }
                if 2 * ca > n - cb {
                    narrow = true;
                }
            }
            if b == 0 {
                break;
            }
            b = (b - 1) & rest;
        }
        if narrow {
            return (true, true);
        }
    }
    (pen, narrow)
}

/// Random step graphon with `k` blocks: integer mass weights, about half the
/// densities zero.
pub fn random_step(rng: &mut impl Rng, k: usize) -> StepGraphon {
    let w: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = w.iter().sum();
    let masses = w.iter().map(|&x| ratio(x, total)).collect();
    let mut d = vec![vec![Rational::zero(); k]; k];
    for i in 0..k {
        for j in i..k {
            if rng.gen_bool(0.45) {
                let v = ratio(rng.gen_range(1..=4), 4);
                d[i][j] = v.clone();
                d[j][i] = v;
            }
        }
    }
    StepGraphon::new(masses, d).unwrap()
}

/// `(peninsula, narrow)` by enumerating block sets `Z` that are independent
/// and loop-free, comparing `mass(Z)` with `mass(N(Z))`.
pub fn z_enumeration(g: &StepGraphon) -> (bool, bool) {
    let k = g.blocks();
    let (mut pen, mut narrow) = (false, false);
    for z in 1u32..(1 << k) {
        let inz = |i: usize| z >> i & 1 == 1;
        let mut n_mask = 0u32;
        let mut ok = true;
        for i in (0..k).filter(|&i| inz(i)) {
            for j in 0..k {
                if g.positive(i, j) {
                    if inz(j) {
                        ok = false;
                    }
                    n_mask |= 1 << j;
                }
            }
        }
        if !ok {
            continue;
        }
        let mass = |m: u32| -> Rational {
            (0..k).filter(|&i| m >> i & 1 == 1).map(|i| g.mass(i).clone()).sum()
        };
        let (mz, mn) = (mass(z), mass(n_mask));
        pen |= mz >= mn;
        narrow |= mz > mn;
    }
    (pen, narrow)
}

/// `(peninsula, narrow)` by a per-block `A/B/C` fraction search on the grid
/// `{0, 1/16, ..., 1}`. For a fixed support pattern the zero-density
/// constraints are fixed and `2 mu(A) + mu(B)` is maximised block by block;
/// a peninsula needs `mu(B) < 1` and `2 mu(A) + mu(B) >= 1`.
pub fn fraction_grid(g: &StepGraphon) -> (bool, bool) {
    let k = g.blocks();
    let res = 16i64;
    let one = ratio(1, 1);
    let (mut pen, mut narrow) = (false, false);
    for pattern in 0u32..(1 << (2 * k)) {
        let has_a = |i: usize| pattern >> (2 * i) & 1 == 1;
        let has_b = |i: usize| pattern >> (2 * i + 1) & 1 == 1;
        if !(0..k).any(has_a) {
            continue;
        }
        let violates = (0..k).any(|i| {
            has_a(i) && (0..k).any(|j| (has_a(j) || has_b(j)) && g.positive(i, j))
        });
        if violates {
            continue;
        }
        let mut score = Rational::zero();
        let mut b_total = Rational::zero();
        for i in 0..k {
            let mut best: Option<(i64, i64)> = None;
            for a in 0..=res {
                for b in 0..=res - a {
                    if (a > 0) != has_a(i) || (b > 0) != has_b(i) {
                        continue;
                    }
                    if best.is_none_or(|(ba, bb)| 2 * a + b > 2 * ba + bb) {
                        best = Some((a, b));
                    }
                }
            }
            let (a, b) = best.unwrap();
            score += g.mass(i) * ratio(2 * a + b, res);
            b_total += g.mass(i) * ratio(b, res);
        }
        if b_total < one {
            pen |= score >= one;
            narrow |= score > one;
        }
    }
    (pen, narrow)
}

/// Exact half/half split by assigning each block to `S`, `T` or both.
pub fn brute_bipartite_split(g: &StepGraphon) -> bool {
    let k = g.blocks();
    let half = ratio(1, 2);
    let mut label = vec![0u8; k];
    loop {
        // 0: S, 1: T, 2: split across both
        let sides = |i: usize| match label[i] {
            0 => (true, false),
            1 => (false, true),
            _ => (true, true),
        };
        let ok = (0..k).all(|i| {
            (0..k).all(|j| {
                let (si, ti) = sides(i);
                let (sj, tj) = sides(j);
                !((si && sj) || (ti && tj)) || !g.positive(i, j)
            })
        });
        if ok {
            let mass = |l: u8| -> Rational {
                (0..k).filter(|&i| label[i] == l).map(|i| g.mass(i).clone()).sum()
            };
            // the straddling blocks absorb whatever mass is left on each side
            if mass(0) <= half && mass(1) <= half {
                return true;
            }
        }
        if !next_ternary(&mut label) {
            return false;
        }
    }
}

pub fn random_step_upto(rng: &mut impl Rng, max_k: usize) -> StepGraphon {
    let k = rng.gen_range(1..=max_k);
    random_step(rng, k)
}

/// `P[X > k]` for `X ~ Bin(n, p)`, summing the pmf in log space.
pub fn binomial_upper_tail(n: usize, p: f64, k: i64) -> f64 {
    let mut ln_fact = vec![0.0f64; n + 1];
    for i in 1..=n {
        ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
    }
    ((k + 1).max(0) as usize..=n)
        .map(|x| {
            let ln_c = ln_fact[n] - ln_fact[x] - ln_fact[n - x];
            (ln_c + x as f64 * p.ln() + (n - x) as f64 * (1.0 - p).ln()).exp()
        })
        .sum()
}

/// Random symmetric step function with values on the grid `j/8` in `[-1, 1]`.
pub fn random_function(rng: &mut impl Rng, k: usize) -> StepFunction {
    let w: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=5)).collect();
    let total: i64 = w.iter().sum();
    let mut v = vec![vec![Rational::zero(); k]; k];
    for i in 0..k {
        for j in i..k {
            let x = ratio(rng.gen_range(-8..=8), 8);
            v[i][j] = x.clone();
            v[j][i] = x;
        }
    }
    StepFunction::new(w.iter().map(|&x| ratio(x, total)).collect(), v).unwrap()
}

/// Minimal odd walk length, BFS over `(vertex, parity)`.
pub fn odd_distance(g: &FiniteGraph, i: usize, j: usize) -> Option<usize> {
    let mut seen = vec![[None; 2]; g.n()];
    seen[i][0] = Some(0);
    let mut q = VecDeque::from([(i, 0)]);
    while let Some((v, par)) = q.pop_front() {
        let d = seen[v][par].unwrap();
        for &u in g.neighbors(v) {
            if seen[u][1 - par].is_none() {
                seen[u][1 - par] = Some(d + 1);
                q.push_back((u, 1 - par));
            }
        }
    }
    seen[j][1]
}
