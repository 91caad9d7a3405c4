mod common;

use common::*;
use hamgraph::cutnorm::{
    cut_norm_exact, cut_norm_heuristic, cut_norm_heuristic_with, sample_distance, StepFunction,
};
use hamgraph::graphon::{Graphon, StepGraphon};
use hamgraph::rational::{common_denominator, ratio, to_f64};
use hamgraph::sampler::sample_graph;
use hamgraph::{Exec, Rational};
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

/// `m_i m_j f_ij` scaled to integers, with the scale.
fn scaled(f: &StepFunction) -> (Vec<Vec<i128>>, i128) {
    let k = f.blocks();
    let w: Vec<Vec<Rational>> = (0..k)
        .map(|i| (0..k).map(|j| &f.masses()[i] * &f.masses()[j] * &f.values()[i][j]).collect())
        .collect();
    let d = common_denominator(w.iter().flatten()).to_i128().unwrap();
    let ints = w
        .iter()
        .map(|r| r.iter().map(|x| (x * ratio(d as i64, 1)).to_integer().to_i128().unwrap()).collect())
        .collect();
    (ints, d)
}

/// `max |sum_{S x T} m_i m_j f_ij|` over every pair of block sets.
fn brute_cut_norm(f: &StepFunction) -> Rational {
    let k = f.blocks();
    let (m, d) = scaled(f);
    let mut best = 0i128;
    for s in 0u32..(1 << k) {
        for t in 0u32..(1 << k) {
            let mut acc = 0i128;
            for i in (0..k).filter(|&i| s >> i & 1 == 1) {
                for j in (0..k).filter(|&j| t >> j & 1 == 1) {
                    acc += m[i][j];
                }
            }
            best = best.max(acc.abs());
        }
    }
    ratio(best as i64, d as i64)
}

#[test]
fn exact_matches_subset_pair_enumeration() {
    let mut rng = rng(41);
    for _ in 0..200 {
        let k = rng.gen_range(1..=7);
        let f = random_function(&mut rng, k);
        let w = cut_norm_exact(&f).unwrap();
        assert_eq!(w.value, brute_cut_norm(&f));
        assert_eq!(f.score(&w.s, &w.t), w.value);
    }
}

#[test]
fn heuristic_is_a_certified_lower_bound() {
    let mut rng = rng(42);
    let mut equal = 0;
    let mut worst = 1.0f64;
    for seed in 0..200 {
        let k = rng.gen_range(1..=12);
        let f = random_function(&mut rng, k);
        let exact = cut_norm_exact(&f).unwrap().value;
        let h = cut_norm_heuristic(&f, 64, seed);
        assert_eq!(f.score(&h.s, &h.t), h.value);
        assert!(h.value <= exact);
        equal += (h.value == exact) as usize;
        if !exact.is_zero() {
            worst = worst.min(to_f64(&(&h.value / &exact)));
        }
    }
    assert!(equal >= 190, "{equal}");
    assert!(worst >= 0.99, "{worst}");
}

#[test]
fn heuristic_is_deterministic_across_executors() {
    let mut rng = rng(43);
    for seed in 0..50 {
        let f = random_function(&mut rng, 10);
        assert_eq!(
            cut_norm_heuristic_with(&f, 8, seed, Exec::Sequential),
            cut_norm_heuristic_with(&f, 8, seed, Exec::Parallel)
        );
    }
}

#[test]
fn fractional_sets_never_beat_the_vertex_optimum() {
    // the bilinear form over [0,1]^k x [0,1]^k peaks at a vertex
    let mut rng = rng(44);
    for _ in 0..5 {
        let f = random_function(&mut rng, 2);
        let (m, d) = scaled(&f);
        let grid = 32i128;
        // |sum m_ij s_i t_j| <= exact, everything multiplied by d * grid^2
        let bound = (cut_norm_exact(&f).unwrap().value * ratio((d * grid * grid) as i64, 1))
            .to_integer()
            .to_i128()
            .unwrap();
        for s0 in 0..=grid {
            for s1 in 0..=grid {
                for t0 in 0..=grid {
                    for t1 in 0..=grid {
                        let (s, t) = ([s0, s1], [t0, t1]);
                        let mut acc = 0i128;
                        for i in 0..2 {
                            for j in 0..2 {
                                acc += m[i][j] * s[i] * t[j];
                            }
                        }
                        assert!(acc.abs() <= bound);
                    }
                }
            }
        }
    }
}

#[test]
fn rank_one_positive_optimum_on_first_restart() {
    let f = StepFunction::new(
        vec![ratio(1, 4), ratio(3, 4)],
        vec![vec![ratio(1, 4), ratio(1, 2)], vec![ratio(1, 2), ratio(1, 1)]],
    )
    .unwrap();
    let h = cut_norm_heuristic(&f, 1, 0);
    assert_eq!(h.s, vec![0, 1]);
    assert_eq!(h.t, vec![0, 1]);
    assert_eq!(h.value, cut_norm_exact(&f).unwrap().value);
    assert_eq!(h.value, f.l1_norm());
}

#[test]
fn complete_sample_is_close_to_constant_one() {
    let g = StepGraphon::constant(ratio(1, 1)).unwrap();
    for n in [10, 50, 200] {
        let s = sample_graph(&Graphon::Step(g.clone()), n, 1, 0).unwrap();
        let d = sample_distance(&s, &g, 8).unwrap();
        assert!(d.lower.value <= d.upper);
        assert!(d.upper <= ratio(2, n as i64), "n = {n}: {}", d.upper);
    }
}

#[test]
fn mismatched_graphon_is_far() {
    let full = Graphon::Step(StepGraphon::constant(ratio(1, 1)).unwrap());
    let empty = StepGraphon::constant(Rational::zero()).unwrap();
    let s = sample_graph(&full, 100, 0, 0).unwrap();
    let d = sample_distance(&s, &empty, 4).unwrap();
    assert!(d.lower.value >= ratio(9, 10), "{}", d.lower.value);
}

#[test]
fn zero_function_has_zero_norm() {
    let f = StepFunction::zero(5);
    assert!(cut_norm_exact(&f).unwrap().value.is_zero());
    assert!(cut_norm_heuristic(&f, 4, 0).value.is_zero());
}

#[test]
fn sample_distance_bounds_are_ordered() {
    let mut rng = rng(45);
    for trial in 0..30 {
        let g = random_step_upto(&mut rng, 4);
        let s = sample_graph(&Graphon::Step(g.clone()), 80, 2, trial).unwrap();
        let d = sample_distance(&s, &g, 8).unwrap();
        assert!(d.lower.value <= d.upper);
        assert!(d.pieces >= g.blocks());
        assert!(d.pieces <= 2 * g.blocks());
    }
}

#[test]
fn invalid_functions_are_rejected() {
    let half = ratio(1, 2);
    let asym = vec![vec![Rational::zero(), half.clone()], vec![Rational::zero(); 2]];
    assert!(StepFunction::new(vec![half.clone(), half.clone()], asym).is_err());
    assert!(StepFunction::new(vec![half.clone()], vec![vec![half]]).is_err());
    assert!(cut_norm_exact(&StepFunction::zero(25)).is_err());
    assert!(cut_norm_exact(&StepFunction::zero(24)).unwrap().value.is_zero());
}
