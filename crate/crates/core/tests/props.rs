//! Cross-cutting invariants on seeded random inputs: order-theoretic axioms,
//! relabeling invariance, an independent re-reading of the uniformity
//! definition, and the algebra of truncated series.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ordhom::generators::{boolean_graph, cassidy_shelton, random_uniform};
use ordhom::oracle::b_graded_dims;
use ordhom::series::{series_inverse, series_mul, substitute_neg};
use ordhom::{
    mobius, reduced_cohomology_dims, FieldSpec, HilbertEngine, LayeredGraph, TruncatedSeries,
    Vertex,
};

fn seeded_graphs() -> Vec<LayeredGraph> {
    let mut out = vec![cassidy_shelton(false), boolean_graph(3).unwrap()];
    for seed in 0..12u64 {
        let shape: &[u32] = match seed % 3 {
            0 => &[1, 3, 2, 1],
            1 => &[2, 3, 3, 1],
            _ => &[1, 2, 2, 2, 1],
        };
        out.push(random_uniform(seed, shape).unwrap());
    }
    out
}

/// Drop one edge, keeping the graph layered but often breaking uniformity.
fn with_dropped_edge(g: &LayeredGraph, k: usize) -> LayeredGraph {
    let vertices: Vec<(String, u32)> =
        g.vertices().map(|v| (g.id(v).to_string(), g.level(v))).collect();
    let mut edges: Vec<(String, String)> =
        g.edges().map(|(t, h)| (g.id(t).to_string(), g.id(h).to_string())).collect();
    edges.remove(k % edges.len());
    LayeredGraph::new(vertices, edges).unwrap()
}

/// Uniformity read straight off the definition: every two heads of edges
/// with a common tail must be joined by a chain of same-level vertices below
/// that tail, consecutive ones covering a common vertex. Written against the
/// raw edge list on purpose.
fn uniform_by_definition(g: &LayeredGraph) -> bool {
    let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    let heads_of = |t: Vertex| -> Vec<Vertex> {
        edges.iter().filter(|&&(a, _)| a == t).map(|&(_, h)| h).collect()
    };
    for t in g.vertices() {
        let heads = heads_of(t);
        if heads.len() < 2 {
            continue;
        }
        let share_cover = |x: Vertex, y: Vertex| -> bool {
            edges
                .iter()
                .any(|&(a, u)| a == x && edges.iter().any(|&(b, w)| b == y && w == u))
        };
        let mut linked = vec![false; heads.len()];
        linked[0] = true;
        let mut frontier = vec![heads[0]];
        while let Some(x) = frontier.pop() {
            for (j, &y) in heads.iter().enumerate() {
                if !linked[j] && share_cover(x, y) {
                    linked[j] = true;
                    frontier.push(y);
                }
            }
        }
        if !linked.iter().all(|&b| b) {
            return false;
        }
    }
    true
}

#[test]
fn uniformity_matches_the_literal_definition() {
    for (n, g) in seeded_graphs().iter().enumerate() {
        assert_eq!(g.is_uniform().uniform, uniform_by_definition(g), "graph {n}");
        for k in 0..4 {
            let mutated = with_dropped_edge(g, n * 7 + k * 3);
            assert_eq!(
                mutated.is_uniform().uniform,
                uniform_by_definition(&mutated),
                "graph {n}, dropped edge {k}"
            );
        }
    }
}

#[test]
fn order_relation_is_a_strict_partial_order() {
    for g in seeded_graphs() {
        let vs: Vec<Vertex> = g.vertices().collect();
        for &u in &vs {
            assert!(!g.less_than(u, u));
            for &v in &vs {
                if g.less_than(u, v) {
                    assert!(!g.less_than(v, u), "antisymmetry");
                    assert!(g.level(u) > g.level(v), "paths only descend");
                }
                // An edge is exactly a comparability dropping one level.
                assert_eq!(
                    g.covers(u, v),
                    g.less_than(u, v) && g.level(u) == g.level(v) + 1,
                );
                for &w in &vs {
                    if g.less_than(u, v) && g.less_than(v, w) {
                        assert!(g.less_than(u, w), "transitivity");
                    }
                }
            }
        }
    }
}

#[test]
fn windows_grow_with_i_and_stabilize() {
    for g in seeded_graphs() {
        for a in g.vertices() {
            let mut previous: Option<Vec<Vertex>> = None;
            for i in 1..=g.level(a) + 2 {
                let w = g.level_window_subgraph(a, i);
                let members: Vec<Vertex> = w.vertices().collect();
                if let Some(prev) = previous {
                    assert!(prev.iter().all(|v| members.contains(v)), "windows nest");
                }
                previous = Some(members);
            }
            let all = g.level_window_subgraph(a, g.level(a) + 1);
            let beyond = g.level_window_subgraph(a, g.level(a) + 9);
            assert_eq!(
                all.vertices().collect::<Vec<_>>(),
                beyond.vertices().collect::<Vec<_>>(),
                "window saturates once it reaches the bottom level"
            );
            assert!(g.level_window_subgraph(a, 1).is_empty());
            let mut successors = g.successor_set(a);
            successors.sort();
            assert_eq!(
                g.level_window_subgraph(a, 2).vertices().collect::<Vec<_>>(),
                successors,
            );
        }
    }
}

/// Rename every vertex, shuffling which names sort first, and rebuild.
fn relabeled(g: &LayeredGraph, seed: u64) -> LayeredGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fresh: Vec<String> =
        (0..g.vertex_count()).map(|k| format!("z{k:03}")).collect();
    fresh.shuffle(&mut rng);
    let rename = |v: Vertex| fresh[v.index()].clone();
    LayeredGraph::new(
        g.vertices().map(|v| (rename(v), g.level(v))).collect(),
        g.edges().map(|(t, h)| (rename(t), rename(h))).collect(),
    )
    .unwrap()
}

#[test]
fn nothing_depends_on_vertex_names() {
    for (n, g) in seeded_graphs().iter().enumerate() {
        let other = relabeled(g, n as u64 + 400);
        assert_eq!(g.is_uniform().uniform, other.is_uniform().uniform);
        assert_eq!(mobius(&g.poset()), mobius(&other.poset()));
        let before = reduced_cohomology_dims(&g.poset(), FieldSpec::Rationals);
        let after = reduced_cohomology_dims(&other.poset(), FieldSpec::Rationals);
        assert_eq!(before.entries().collect::<Vec<_>>(), after.entries().collect::<Vec<_>>());
        let h_before = HilbertEngine::new(g, FieldSpec::Rationals).unwrap().hilbert_b();
        let h_after = HilbertEngine::new(&other, FieldSpec::Rationals).unwrap().hilbert_b();
        assert_eq!(h_before, h_after, "graph {n}");
        assert_eq!(
            b_graded_dims(g, 3, FieldSpec::Rationals),
            b_graded_dims(&other, 3, FieldSpec::Rationals),
            "graph {n}"
        );
    }
}

#[test]
fn random_graph_edges_stay_within_budget() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..20 {
        let height = rng.random_range(1..=4usize);
        let mut shape = vec![1u32];
        for _ in 0..height {
            shape.push(rng.random_range(1..=3));
        }
        shape.reverse();
        let g = random_uniform(rng.random(), &shape).unwrap();
        assert!(g.is_uniform().uniform);
        let max_edges: usize = shape
            .windows(2)
            .map(|w| w[0] as usize * w[1] as usize)
            .sum();
        assert!(g.edge_count() <= max_edges, "repair never overshoots the complete graph");
    }
}

fn same_length_vecs(max_len: usize) -> impl Strategy<Value = (Vec<i128>, Vec<i128>)> {
    (1..=max_len).prop_flat_map(|l| {
        let v = prop::collection::vec(-9i128..=9, l..=l);
        (v.clone(), v)
    })
}

proptest! {
    #[test]
    fn series_multiplication_commutes(pair in same_length_vecs(7)) {
        let a = TruncatedSeries::new(pair.0);
        let b = TruncatedSeries::new(pair.1);
        prop_assert_eq!(series_mul(&a, &b).unwrap(), series_mul(&b, &a).unwrap());
    }

    #[test]
    fn series_multiplication_associates(
        pair in same_length_vecs(6),
        extra in prop::collection::vec(-9i128..=9, 6),
    ) {
        let l = pair.0.len();
        let a = TruncatedSeries::new(pair.0);
        let b = TruncatedSeries::new(pair.1);
        let c = TruncatedSeries::new(extra[..l].to_vec());
        let left = series_mul(&series_mul(&a, &b).unwrap(), &c).unwrap();
        let right = series_mul(&a, &series_mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverses_round_trip(mut coeffs in prop::collection::vec(-9i128..=9, 1..7), flip in any::<bool>()) {
        coeffs[0] = if flip { -1 } else { 1 };
        let a = TruncatedSeries::new(coeffs);
        let inv = series_inverse(&a).unwrap();
        prop_assert!(series_mul(&a, &inv).unwrap().is_one());
        prop_assert_eq!(series_inverse(&inv).unwrap(), a);
    }

    #[test]
    fn negating_the_variable_is_a_ring_map(pair in same_length_vecs(7)) {
        let a = TruncatedSeries::new(pair.0);
        let b = TruncatedSeries::new(pair.1);
        let lhs = substitute_neg(&series_mul(&a, &b).unwrap());
        let rhs = series_mul(&substitute_neg(&a), &substitute_neg(&b)).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(substitute_neg(&substitute_neg(&a)), a);
    }

    #[test]
    fn rendering_never_panics_and_is_nonempty(coeffs in prop::collection::vec(-99i128..=99, 1..9)) {
        let text = TruncatedSeries::new(coeffs).to_string();
        prop_assert!(!text.is_empty());
    }
}
