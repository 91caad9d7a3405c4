mod common;

use common::*;
use hamgraph::fracmatch::is_bipartite;
use hamgraph::graph::named;
use hamgraph::harness::preset;
use hamgraph::pathsys::{
    check_low_degree_properties, decompose_binary_tree, low_degree_path_system, odd_walk,
    shortest_odd_walk_length,
};
use hamgraph::rational::ratio;
use hamgraph::sampler::sample_graph;
use hamgraph::{Error, FiniteGraph};
use rand::Rng;

#[test]
fn odd_walks_on_connected_non_bipartite_graphs() {
    let mut rng = rng(31);
    let mut done = 0;
    while done < 200 {
        let p = PS[rng.gen_range(1..6)];
        let g = gnp(&mut rng, 12, p);
        if !g.is_connected() || is_bipartite(&g) {
            continue;
        }
        let (i, j) = (rng.gen_range(0..12), rng.gen_range(0..12));
        let w = odd_walk(&g, i, j).unwrap();
        let len = w.len() - 1;
        assert_eq!((w[0], w[len]), (i, j));
        assert!(w.windows(2).all(|e| g.has_edge(e[0], e[1])));
        assert_eq!(len % 2, 1);
        assert!(len <= 23);
        let best = odd_distance(&g, i, j).unwrap();
        assert!(best <= len);
        assert_eq!(shortest_odd_walk_length(&g, i, j), Some(best));
        done += 1;
    }
}

#[test]
fn odd_walk_rejects_bipartite_and_disconnected() {
    for g in [named::cycle(6), named::complete_bipartite(2, 3)] {
        assert!(matches!(odd_walk(&g, 0, 1), Err(Error::BipartiteOrDisconnected)));
    }
    let g = named::disjoint_union(&named::cycle(3), &named::cycle(5));
    assert!(odd_walk(&g, 0, 4).is_err());
}

fn random_binary_tree(rng: &mut impl Rng, internal: usize) -> FiniteGraph {
    let mut edges = vec![(0, 1), (0, 2)];
    let mut leaves = vec![1, 2];
    let mut n = 3;
    for _ in 0..internal {
        let v = leaves.swap_remove(rng.gen_range(0..leaves.len()));
        edges.extend([(v, n), (v, n + 1)]);
        leaves.extend([n, n + 1]);
        n += 2;
    }
    FiniteGraph::new(n, edges).unwrap()
}

#[test]
fn binary_tree_paths_end_at_leaves() {
    let mut rng = rng(32);
    for _ in 0..200 {
        let internal = rng.gen_range(0..30);
        let t = random_binary_tree(&mut rng, internal);
        let sys = decompose_binary_tree(&t).unwrap();
        sys.validate(&t).unwrap();
        assert_eq!(sys.vertex_count(), t.n());
        let mut ends: Vec<usize> = sys.endpoints().collect();
        ends.sort();
        let leaves: Vec<usize> = (0..t.n()).filter(|&v| t.degree(v) == 1).collect();
        assert_eq!(ends, leaves);
    }
}

#[test]
fn non_binary_trees_are_rejected() {
    assert!(decompose_binary_tree(&named::star(3)).is_err());
    assert!(decompose_binary_tree(&named::cycle(5)).is_err());
}

/// `K_20` plus vertex 20 joined to the first `attach` clique vertices.
fn k20_with_pendant(attach: usize) -> FiniteGraph {
    let mut edges: Vec<(usize, usize)> = named::complete(20).edges().to_vec();
    edges.extend((0..attach).map(|v| (v, 20)));
    FiniteGraph::new(21, edges).unwrap()
}

#[test]
fn degree_one_pendant_is_reported_stuck() {
    let r = low_degree_path_system(&k20_with_pendant(1), &ratio(1, 10));
    assert!(matches!(r, Err(Error::GreedyStuck { vertex: 20 })));
}

#[test]
fn pendant_vertex_lies_inside_a_path() {
    let g = k20_with_pendant(2);
    let r = low_degree_path_system(&g, &ratio(1, 10)).unwrap();
    r.system.validate(&g).unwrap();
    assert!(r.properties.passes(), "{r:?}");
    assert_eq!(r.system.paths, vec![vec![0, 20, 1]]);
}

#[test]
fn leaf_with_one_neighbour_gets_stuck() {
    // threshold ceil(0.49 * 3) = 2; the end vertices have a single neighbour
    let r = low_degree_path_system(&named::path(3), &ratio(49, 100));
    assert!(matches!(r, Err(Error::GreedyStuck { .. })));
}

#[test]
fn low_degree_systems_on_samples() {
    let g = preset("power-0.5").unwrap();
    let alpha = ratio(1, 20);
    let mut passed = 0;
    for trial in 0..20 {
        let s = sample_graph(&g, 300, 5, trial).unwrap();
        let Ok(r) = low_degree_path_system(&s.graph, &alpha) else { continue };
        r.system.validate(&s.graph).unwrap();
        assert_eq!(r.properties, check_low_degree_properties(&s.graph, &r.system, &alpha));
        // each merge adds one vertex and removes one path
        assert_eq!(r.system.vertex_count(), r.initial_vertices + r.merges);
        assert_eq!(r.system.paths.len() + r.merges, r.initial_paths);
        passed += r.properties.passes() as usize;
    }
    assert!(passed >= 15, "{passed}");
}

#[test]
fn threshold_is_ceiling() {
    let g = named::complete(10);
    let r = low_degree_path_system(&g, &ratio(1, 4)).unwrap();
    assert_eq!(r.threshold, 3);
    assert!(r.system.paths.is_empty());
    assert!(r.properties.passes());
}
