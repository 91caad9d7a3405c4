//! Path constructions: odd walks, binary-tree path decompositions and a
//! vertex-disjoint path system covering every low-degree vertex.

use std::collections::VecDeque;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSystem {
    pub paths: Vec<Vec<usize>>,
}

impl PathSystem {
    pub fn vertex_count(&self) -> usize {
        self.paths.iter().map(Vec::len).sum()
    }

    pub fn endpoints(&self) -> impl Iterator<Item = usize> + '_ {
        self.paths.iter().flat_map(|p| {
            let last = if p.len() > 1 { p.last().copied() } else { None };
            p.first().copied().into_iter().chain(last)
        })
    }

    /// Paths are nonempty, vertex-disjoint and follow edges of `g`.
    pub fn validate(&self, g: &FiniteGraph) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidCertificate(m));
        let mut used = vec![false; g.n()];
        for (k, p) in self.paths.iter().enumerate() {
            if p.is_empty() {
                return bad(format!("path {k} is empty"));
            }
            for &v in p {
                if v >= g.n() || std::mem::replace(&mut used[v], true) {
                    return bad(format!("vertex {v} repeated or out of range"));
                }
            }
            for w in p.windows(2) {
                if !g.has_edge(w[0], w[1]) {
                    return bad(format!("path {k}: ({}, {}) is not an edge", w[0], w[1]));
                }
            }
        }
        Ok(())
    }
}

/// A walk from `i` to `j` with an odd number of edges, at most `2 |V| - 1`.
///
/// Uses a BFS tree and one non-tree edge `ab` between vertices of equal depth
/// parity: if the tree path has even length, detour `i -> a, ab, b -> j`.
pub fn odd_walk(h: &FiniteGraph, i: usize, j: usize) -> Result<Vec<usize>> {
    h.require_simple()?;
    let n = h.n();
    if i >= n || j >= n {
        return Err(Error::InvalidArgument(format!("endpoint out of range for n = {n}")));
    }
    if !h.is_connected() {
        return Err(Error::BipartiteOrDisconnected);
    }
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    depth[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &u in h.neighbors(v) {
            if depth[u] == usize::MAX {
                depth[u] = depth[v] + 1;
                parent[u] = v;
                queue.push_back(u);
            }
        }
    }
    let tree_path = |mut a: usize, mut b: usize| -> Vec<usize> {
        let (mut up, mut down) = (Vec::new(), Vec::new());
        while depth[a] > depth[b] {
            up.push(a);
            a = parent[a];
        }
        while depth[b] > depth[a] {
            down.push(b);
            b = parent[b];
        }
        while a != b {
            up.push(a);
            down.push(b);
            a = parent[a];
            b = parent[b];
        }
        up.push(a);
        up.extend(down.into_iter().rev());
        up
    };
    let (a, b) = h
        .edges()
        .iter()
        .copied()
        .find(|&(a, b)| depth[a] % 2 == depth[b] % 2)
        .ok_or(Error::BipartiteOrDisconnected)?;
    if (depth[i] + depth[j]) % 2 == 1 {
        return Ok(tree_path(i, j));
    }
    let mut walk = tree_path(i, a);
    walk.extend(tree_path(b, j));
    Ok(walk)
}

/// Splits a rooted forest into paths. Each vertex with two children lies on
/// a path that descends through first children to a leaf on both sides;
/// every child left off a path starts a new one.
fn decompose_rooted(children: &[Vec<usize>], roots: &[usize]) -> Vec<Vec<usize>> {
    let descend = |mut v: usize| {
        let mut chain = vec![v];
        while let Some(&c) = children[v].first() {
            chain.push(c);
            v = c;
        }
        chain
    };
    let mut paths = Vec::new();
    let mut pending: Vec<usize> = roots.to_vec();
    while let Some(top) = pending.pop() {
        let path: Vec<usize> = match children[top].as_slice() {
            [] => vec![top],
            [left, right] => {
                let mut p = descend(*left);
                p.reverse();
                p.push(top);
                p.extend(descend(*right));
                p
            }
            _ => unreachable!("every internal vertex has two children"),
        };
        for &v in &path {
            if v != top {
                pending.extend(children[v].iter().skip(1));
            }
        }
        paths.push(path);
    }
    paths
}

/// Path decomposition of a binary tree (a degree-2 root, internal vertices of
/// degree 3, leaves of degree 1). The paths partition the vertices and their
/// endpoints are exactly the leaves.
pub fn decompose_binary_tree(t: &FiniteGraph) -> Result<PathSystem> {
    t.require_simple()?;
    let n = t.n();
    let not_tree = |m: &str| Err(Error::NotBinaryTree(m.into()));
    if n < 3 || t.edge_count() != n - 1 || !t.is_connected() {
        return not_tree("not a tree with at least 3 vertices");
    }
    let roots: Vec<usize> = (0..n).filter(|&v| t.degree(v) == 2).collect();
    if roots.len() != 1 {
        return not_tree("needs exactly one vertex of degree 2");
    }
    if let Some(v) = (0..n).find(|&v| t.degree(v) > 3) {
        return not_tree(&format!("vertex {v} has degree {}", t.degree(v)));
    }
    let mut children = vec![Vec::new(); n];
    let mut stack = vec![(roots[0], usize::MAX)];
    while let Some((v, p)) = stack.pop() {
        for &u in t.neighbors(v) {
            if u != p {
                children[v].push(u);
                stack.push((u, v));
            }
        }
    }
    Ok(PathSystem {
        paths: decompose_rooted(&children, &roots),
    })
}

/// Outcome of the (a)-(e) checks for a low-degree path system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowDegreeProperties {
    /// (a) every path has at least 3 vertices.
    pub at_least_three: bool,
    /// (b) every vertex of degree below the threshold is covered.
    pub covers_low: bool,
    /// (c) endpoints have degree at least the threshold.
    pub high_degree_ends: bool,
    /// (d) reported rather than checked: `|V(P)|`.
    pub vertex_count: usize,
    /// (e) `|P| < 2 / alpha`.
    pub few_paths: bool,
}

impl LowDegreeProperties {
    pub fn passes(&self) -> bool {
        self.at_least_three && self.covers_low && self.high_degree_ends && self.few_paths
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowDegreeReport {
    pub system: PathSystem,
    /// `ceil(alpha n)`.
    pub threshold: usize,
    pub low_vertices: usize,
    /// Size of the unmerged system: paths and vertices.
    pub initial_paths: usize,
    pub initial_vertices: usize,
    pub merges: usize,
    pub properties: LowDegreeProperties,
}

fn threshold(alpha: &Rational, n: usize) -> usize {
    (alpha * rational::from_int(n as i64))
        .ceil()
        .to_integer()
        .to_usize()
        .expect("threshold fits in usize")
}

/// Checks (a), (b), (c), (e) and reports (d) for `system` on `g`.
pub fn check_low_degree_properties(
    g: &FiniteGraph,
    system: &PathSystem,
    alpha: &Rational,
) -> LowDegreeProperties {
    let th = threshold(alpha, g.n());
    let mut covered = vec![false; g.n()];
    for &v in system.paths.iter().flatten() {
        covered[v] = true;
    }
    let paths = rational::from_int(system.paths.len() as i64);
    LowDegreeProperties {
        at_least_three: system.paths.iter().all(|p| p.len() >= 3),
        covers_low: (0..g.n()).all(|v| g.degree(v) >= th || covered[v]),
        high_degree_ends: system.endpoints().all(|v| g.degree(v) >= th),
        vertex_count: system.vertex_count(),
        few_paths: paths * alpha < rational::from_int(2),
    }
}

/// Covers every vertex of degree below `ceil(alpha n)` by vertex-disjoint
/// paths with high-degree ends.
///
/// Low vertices, by ascending degree, each take their two lowest-index
/// neighbours not yet used as children or processed; the resulting binary
/// forest is decomposed into paths and single-vertex pieces are dropped.
/// Paths are then merged first-fit through an unused common neighbour of
/// two endpoints. Each merge adds one vertex and removes one path, so
/// `|V(P)| <= |V(F)| + |F| - |P|` holds throughout.
pub fn low_degree_path_system(g: &FiniteGraph, alpha: &Rational) -> Result<LowDegreeReport> {
    g.require_simple()?;
    let n = g.n();
    if *alpha <= Rational::zero() || *alpha >= rational::half() {
        return Err(Error::InvalidArgument("alpha must lie in (0, 1/2)".into()));
    }
    if n < 3 {
        return Err(Error::InvalidArgument("need at least 3 vertices".into()));
    }
    let th = threshold(alpha, n);
    let mut low: Vec<usize> = (0..n).filter(|&v| g.degree(v) < th).collect();
    low.sort_by_key(|&v| (g.degree(v), v));

    // taken: already a child or an earlier low vertex
    let mut taken = vec![false; n];
    let mut is_child = vec![false; n];
    let mut children = vec![Vec::new(); n];
    for &v in &low {
        let fresh: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| !taken[u])
            .take(2)
            .collect();
        if fresh.len() < 2 {
            return Err(Error::GreedyStuck { vertex: v });
        }
        for &u in &fresh {
            taken[u] = true;
            is_child[u] = true;
        }
        taken[v] = true;
        children[v] = fresh;
    }
    let roots: Vec<usize> = low.iter().copied().filter(|&v| !is_child[v]).collect();
    let mut paths: Vec<Vec<usize>> = decompose_rooted(&children, &roots)
        .into_iter()
        .filter(|p| p.len() > 1)
        .collect();
    paths.sort();
    let initial = PathSystem {
        paths: paths.clone(),
    };

    let mut used = vec![false; n];
    for &v in paths.iter().flatten() {
        used[v] = true;
    }
    let mut merges = 0;
    while let Some((p, q, joined)) = find_merge(g, &paths, &used, th) {
        for &v in &joined {
            used[v] = true;
        }
        let (hi, lo) = (p.max(q), p.min(q));
        paths.swap_remove(hi);
        paths.swap_remove(lo);
        paths.push(joined);
        merges += 1;
        debug_assert!(PathSystem { paths: paths.clone() }.validate(g).is_ok());
    }
    let system = PathSystem { paths };
    let properties = check_low_degree_properties(g, &system, alpha);
    Ok(LowDegreeReport {
        initial_paths: initial.paths.len(),
        initial_vertices: initial.vertex_count(),
        system,
        threshold: th,
        low_vertices: low.len(),
        merges,
        properties,
    })
}

/// First mergeable pair in order of combined length: endpoints `u` of `p`
/// and `v` of `q` with an unused common neighbour `w` of degree at least
/// `th`. Returns `p`, `q` and the joined path `..u w v..`.
fn find_merge(
    g: &FiniteGraph,
    paths: &[Vec<usize>],
    used: &[bool],
    th: usize,
) -> Option<(usize, usize, Vec<usize>)> {
    let mut pairs: Vec<(usize, usize)> = (0..paths.len())
        .flat_map(|p| (p + 1..paths.len()).map(move |q| (p, q)))
        .collect();
    pairs.sort_by_key(|&(p, q)| (paths[p].len() + paths[q].len(), p, q));
    for (p, q) in pairs {
        let (a, b) = (&paths[p], &paths[q]);
        let ends = |x: &Vec<usize>| [(x[x.len() - 1], false), (x[0], true)];
        for (u, flip_a) in ends(a) {
            for (v, flip_b) in ends(b) {
                let common = g
                    .neighbors(u)
                    .iter()
                    .copied()
                    .find(|&w| !used[w] && g.degree(w) >= th && g.has_edge(v, w));
                if let Some(w) = common {
                    // orient a to end in u and b to start at v
                    let mut joined = a.clone();
                    if flip_a {
                        joined.reverse();
                    }
                    joined.push(w);
                    let mut tail = b.clone();
                    if !flip_b {
                        tail.reverse();
                    }
                    joined.extend(tail);
                    return Some((p, q, joined));
                }
            }
        }
    }
    None
}

/// Length of a shortest odd walk between `i` and `j`, by BFS over
/// `(vertex, parity)` states.
pub fn shortest_odd_walk_length(h: &FiniteGraph, i: usize, j: usize) -> Option<usize> {
    let n = h.n();
    let mut dist = vec![usize::MAX; 2 * n];
    dist[2 * i] = 0;
    let mut queue = VecDeque::from([(i, 0usize)]);
    while let Some((v, par)) = queue.pop_front() {
        let d = dist[2 * v + par];
        for &u in h.neighbors(v) {
            let s = 2 * u + (1 - par);
            if dist[s] == usize::MAX {
                dist[s] = d + 1;
                queue.push_back((u, 1 - par));
            }
        }
    }
    let d = dist[2 * j + 1];
    (d != usize::MAX && d.is_odd()).then_some(d)
}
