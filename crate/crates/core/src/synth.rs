//! Graph fixtures, exhaustive enumeration of small graphs up to
//! isomorphism, and seeded random graphs under a cycle bound.
//!
//! The fixtures transcribe the standard counterexample drawings used
//! throughout the test suite; their structural claims (vertex counts,
//! degree sequences, circumference, separability, WL behavior) are
//! pinned by tests so a transcription slip surfaces immediately.

use crate::canonical::canonical_key;
use crate::error::{Error, Result};
use crate::graph::FeaturedGraph;
use crate::structure::longest_cycle_scratch;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// Default enumeration limit with uniform features.
pub const DEFAULT_ENUM_LIMIT: usize = 8;
/// Default enumeration limit once feature classes multiply the space.
pub const DEFAULT_ENUM_LIMIT_FEATURED: usize = 7;

/// Sampling budget for [`random_bounded_graph`].
const SAMPLING_BUDGET: u64 = 100_000;

/// A named set of fixture graphs with a stable vertex labeling.
#[derive(Debug, Clone)]
pub struct FixtureSet {
    pub name: &'static str,
    pub graphs: Vec<FeaturedGraph>,
    pub provenance: &'static str,
}

/// Names accepted by [`fixture`].
pub const FIXTURE_NAMES: [&str; 3] = ["fig1_pair", "fig3_pair", "fig4_pair"];

/// Returns the named fixture pair.
///
/// `fig1_pair`: two disjoint 4-cycles vs one 8-cycle on eight vertices
/// with alternating two-class features. `fig3_pair`: two 14-vertex
/// graphs over seven feature classes (twin triangles joined by an edge
/// vs a chorded 6-cycle, each with two pendant paths). `fig4_pair`:
/// K3,3 vs the triangular prism, uniform features.
pub fn fixture(name: &str) -> Result<FixtureSet> {
    match name {
        "fig1_pair" => {
            let features: Vec<Vec<f64>> = (0..8).map(|i| vec![(i % 2) as f64]).collect();
            let left = FeaturedGraph::new(
                8,
                vec![
                    (0, 1),
                    (1, 2),
                    (2, 3),
                    (0, 3),
                    (4, 5),
                    (5, 6),
                    (6, 7),
                    (4, 7),
                ],
                features.clone(),
            )?;
            let right = FeaturedGraph::new(
                8,
                vec![
                    (0, 1),
                    (1, 2),
                    (2, 3),
                    (3, 4),
                    (4, 5),
                    (5, 6),
                    (6, 7),
                    (0, 7),
                ],
                features,
            )?;
            Ok(FixtureSet {
                name: "fig1_pair",
                graphs: vec![left, right],
                provenance: "two disjoint 4-cycles vs one 8-cycle, alternating two-class features",
            })
        }
        "fig3_pair" => {
            let features: Vec<Vec<f64>> = (0..14).map(|i| vec![(i / 2) as f64]).collect();
            let left = FeaturedGraph::new(
                14,
                vec![
                    (0, 1),
                    (0, 2),
                    (1, 3),
                    (0, 4),
                    (1, 5),
                    (2, 4),
                    (3, 5),
                    (4, 6),
                    (5, 7),
                    (6, 8),
                    (7, 9),
                    (8, 10),
                    (9, 11),
                    (10, 12),
                    (11, 13),
                ],
                features.clone(),
            )?;
            let right = FeaturedGraph::new(
                14,
                vec![
                    (0, 1),
                    (0, 2),
                    (1, 3),
                    (0, 5),
                    (1, 4),
                    (2, 4),
                    (3, 5),
                    (4, 6),
                    (5, 7),
                    (6, 8),
                    (7, 9),
                    (8, 10),
                    (9, 11),
                    (10, 12),
                    (11, 13),
                ],
                features,
            )?;
            Ok(FixtureSet {
                name: "fig3_pair",
                graphs: vec![left, right],
                provenance:
                    "14-vertex pair over 7 feature classes: twin triangles vs a chorded 6-cycle, with pendant paths",
            })
        }
        "fig4_pair" => {
            let k33 = FeaturedGraph::with_uniform_features(
                6,
                vec![
                    (0, 1),
                    (1, 2),
                    (2, 3),
                    (3, 4),
                    (4, 5),
                    (0, 5),
                    (0, 3),
                    (1, 4),
                    (2, 5),
                ],
                vec![0.0],
            )?;
            let prism = FeaturedGraph::with_uniform_features(
                6,
                vec![
                    (0, 4),
                    (1, 5),
                    (0, 2),
                    (1, 3),
                    (2, 4),
                    (3, 5),
                    (0, 3),
                    (1, 4),
                    (2, 5),
                ],
                vec![0.0],
            )?;
            Ok(FixtureSet {
                name: "fig4_pair",
                graphs: vec![k33, prism],
                provenance: "complete bipartite K3,3 vs the triangular prism, uniform features",
            })
        }
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}

/// The parametric counterexample family: two disjoint (2k+2)-cycles vs
/// one (4k+4)-cycle, uniform features. Both graphs have 4k+4 vertices.
pub fn cycle_pair(k: usize) -> (FeaturedGraph, FeaturedGraph) {
    assert!(k >= 1, "cycle_pair requires k >= 1");
    let half = 2 * k + 2;
    let n = 2 * half;
    let mut two = Vec::new();
    for i in 0..half {
        two.push((i, (i + 1) % half));
        two.push((half + i, half + (i + 1) % half));
    }
    let one: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    (
        FeaturedGraph::with_uniform_features(n, two, vec![0.0]).unwrap(),
        FeaturedGraph::with_uniform_features(n, one, vec![0.0]).unwrap(),
    )
}

/// Enumerates exactly one representative per isomorphism class of
/// connected featured graphs on `n` vertices with circumference at most
/// `max_circumference` and features drawn from `feature_classes`
/// distinct values (`[0.0]`, `[1.0]`, ...), deduplicated up to the
/// joint graph-plus-coloring isomorphism.
pub fn enumerate_connected(
    n: usize,
    max_circumference: usize,
    feature_classes: usize,
) -> Result<Vec<FeaturedGraph>> {
    let limit = if feature_classes <= 1 {
        DEFAULT_ENUM_LIMIT
    } else {
        DEFAULT_ENUM_LIMIT_FEATURED
    };
    enumerate_connected_with_limit(n, max_circumference, feature_classes, limit)
}

pub fn enumerate_connected_with_limit(
    n: usize,
    max_circumference: usize,
    feature_classes: usize,
    limit: usize,
) -> Result<Vec<FeaturedGraph>> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if feature_classes == 0 {
        return Err(Error::InvalidArgument(
            "feature_classes must be at least 1".into(),
        ));
    }
    if n > limit || n > 11 {
        return Err(Error::Capacity {
            what: "connected-graph enumeration",
            size: n,
            limit: limit.min(11),
        });
    }
    let assignments = (feature_classes as u64).checked_pow(n as u32);
    if assignments.is_none() || assignments.unwrap() > 2_000_000 {
        return Err(Error::Capacity {
            what: "feature-class assignment enumeration",
            size: feature_classes,
            limit: 2_000_000usize.pow((1.0 / n as f64) as u32).max(1),
        });
    }

    // Pair index i < j in lexicographic order.
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            pairs.push((a, b));
        }
    }

    // Stage 1: structural representatives via labeled scan + canonical
    // dedup. Cheap filters first, canonicalization only on survivors.
    let mut structural: Vec<Vec<u32>> = Vec::new();
    let mut seen_structural: HashSet<Vec<u8>> = HashSet::new();
    let uniform = vec![0u64; n];
    let mut cycle_scratch: Vec<u32> = Vec::new();
    let total: u64 = 1u64 << pairs.len();
    let mut rows = vec![0u32; n];
    for mask in 0..total {
        if (mask.count_ones() as usize) + 1 < n {
            continue;
        }
        rows.iter_mut().for_each(|r| *r = 0);
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (a, b) = pairs[i];
            rows[a] |= 1 << b;
            rows[b] |= 1 << a;
        }
        if !rows_connected(&rows, n) {
            continue;
        }
        if max_circumference < 3 {
            // Only acyclic graphs qualify; connected + n-1 edges = tree.
            if mask.count_ones() as usize != n - 1 {
                continue;
            }
        } else if max_circumference < n {
            let (_, witness) =
                longest_cycle_scratch(&rows, n, Some(max_circumference), &mut cycle_scratch);
            if witness.is_some() {
                continue;
            }
        }
        if seen_structural.insert(canonical_key(n, &uniform, &rows)) {
            structural.push(rows.clone());
        }
    }

    // Stage 2: feature assignments per structural representative,
    // deduplicated by the joint canonical key.
    let mut out = Vec::new();
    let mut seen_featured: HashSet<Vec<u8>> = HashSet::new();
    let mut colors = vec![0u64; n];
    for rows in &structural {
        let edges = rows_to_edges(rows, n);
        loop {
            if feature_classes == 1 || seen_featured.insert(canonical_key(n, &colors, rows)) {
                let features = colors.iter().map(|&c| vec![c as f64]).collect();
                out.push(FeaturedGraph::new(n, edges.clone(), features)?);
            }
            // Odometer over class assignments.
            let mut i = 0;
            loop {
                if i == n {
                    break;
                }
                colors[i] += 1;
                if colors[i] < feature_classes as u64 {
                    break;
                }
                colors[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    Ok(out)
}

fn rows_connected(rows: &[u32], n: usize) -> bool {
    let mut reach = 1u32;
    let mut frontier = 1u32;
    while frontier != 0 {
        let mut next = 0u32;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= rows[v];
        }
        frontier = next & !reach;
        reach |= next;
    }
    reach.count_ones() as usize == n
}

fn rows_to_edges(rows: &[u32], n: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rows[a] >> b & 1 == 1 {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Rejection-sampled connected graph satisfying the cycle bound,
/// deterministic under `seed`: a uniform random labeled tree plus a few
/// extra edges, retried until the bound holds. The extra-edge budget
/// decays toward zero across the attempt budget, so tree-dense bounds
/// still terminate.
pub fn random_bounded_graph(
    n: usize,
    max_circumference: usize,
    feature_classes: usize,
    seed: u64,
) -> Result<FeaturedGraph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if feature_classes == 0 {
        return Err(Error::InvalidArgument(
            "feature_classes must be at least 1".into(),
        ));
    }
    if n > crate::structure::DEFAULT_CYCLE_LIMIT {
        return Err(Error::Capacity {
            what: "random bounded-cycle sampling",
            size: n,
            limit: crate::structure::DEFAULT_CYCLE_LIMIT,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_extra = if max_circumference < 3 { 0 } else { n / 2 };
    for draw in 0..SAMPLING_BUDGET {
        let cap = (max_extra as u64 * (SAMPLING_BUDGET - draw) / SAMPLING_BUDGET) as usize;
        let extras = if cap == 0 { 0 } else { rng.gen_range(0..=cap) };
        let mut edges = random_tree_edges(n, &mut rng);
        let mut have: HashSet<(usize, usize)> = edges.iter().copied().collect();
        for _ in 0..extras {
            for _attempt in 0..16 {
                if n < 2 {
                    break;
                }
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                if a == b {
                    continue;
                }
                let e = (a.min(b), a.max(b));
                if have.insert(e) {
                    edges.push(e);
                    break;
                }
            }
        }
        let features = (0..n)
            .map(|_| vec![rng.gen_range(0..feature_classes) as f64])
            .collect();
        let g = FeaturedGraph::new(n, edges, features)?;
        if crate::structure::check_cycle_bound(&g, max_circumference)?.satisfied {
            return Ok(g);
        }
    }
    Err(Error::SamplingBudgetExhausted {
        budget: SAMPLING_BUDGET,
    })
}

/// Uniform random labeled tree from a random Pruefer sequence.
fn random_tree_edges(n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    match n {
        1 => return vec![],
        2 => return vec![(0, 1)],
        _ => {}
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &v in &seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut leaf_heap: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&v| degree[v] == 1)
        .map(std::cmp::Reverse)
        .collect();
    for &v in &seq {
        let std::cmp::Reverse(leaf) = leaf_heap.pop().expect("tree decoding invariant");
        edges.push((leaf.min(v), leaf.max(v)));
        degree[leaf] -= 1;
        degree[v] -= 1;
        if degree[v] == 1 {
            leaf_heap.push(std::cmp::Reverse(v));
        }
    }
    let std::cmp::Reverse(a) = leaf_heap.pop().unwrap();
    let std::cmp::Reverse(b) = leaf_heap.pop().unwrap();
    edges.push((a.min(b), a.max(b)));
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::are_isomorphic;
    use crate::structure::{check_cycle_bound, circumference};

    #[test]
    fn fig1_counts_and_degrees() {
        let fx = fixture("fig1_pair").unwrap();
        for g in &fx.graphs {
            assert_eq!(g.vertex_count(), 8);
            assert_eq!(g.edge_count(), 8);
            assert!((0..8).all(|v| g.degree(v) == 2));
        }
        // Alternating classes along every edge.
        for g in &fx.graphs {
            for &(a, b) in g.edges() {
                assert_ne!(g.feature(a), g.feature(b));
            }
        }
    }

    #[test]
    fn fig4_graphs_are_cubic_on_six_vertices() {
        let fx = fixture("fig4_pair").unwrap();
        for g in &fx.graphs {
            assert_eq!(g.vertex_count(), 6);
            assert_eq!(g.edge_count(), 9);
            assert!((0..6).all(|v| g.degree(v) == 3));
        }
        // K3,3 is triangle-free; the prism is not.
        assert_eq!(count_triangles(&fx.graphs[0]), 0);
        assert_eq!(count_triangles(&fx.graphs[1]), 2);
        assert!(are_isomorphic(&fx.graphs[0], &fx.graphs[1]).is_none());
    }

    fn count_triangles(g: &FeaturedGraph) -> usize {
        let n = g.vertex_count();
        let mut count = 0;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c) {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn fig3_counts_and_cycle_bound() {
        let fx = fixture("fig3_pair").unwrap();
        for g in &fx.graphs {
            assert_eq!(g.vertex_count(), 14);
            assert_eq!(g.edge_count(), 15);
            assert!(check_cycle_bound(g, 7).unwrap().satisfied);
        }
        assert!(are_isomorphic(&fx.graphs[0], &fx.graphs[1]).is_none());
    }

    #[test]
    fn unknown_fixture_is_an_error() {
        assert!(matches!(
            fixture("fig2_pair"),
            Err(Error::UnknownFixture(_))
        ));
    }

    #[test]
    fn cycle_pair_structure() {
        let (two, one) = cycle_pair(1);
        assert_eq!(two.vertex_count(), 8);
        assert_eq!(one.vertex_count(), 8);
        assert_eq!(circumference(&two).unwrap().circumference, 4);
        assert_eq!(circumference(&one).unwrap().circumference, 8);

        let (two, one) = cycle_pair(2);
        assert_eq!(two.vertex_count(), 12);
        assert_eq!(circumference(&two).unwrap().circumference, 6);
        assert_eq!(circumference(&one).unwrap().circumference, 12);
    }

    #[test]
    fn enumerate_three_vertices() {
        // Connected graphs on 3 vertices: the path and the triangle.
        let pool = enumerate_connected(3, 3, 1).unwrap();
        assert_eq!(pool.len(), 2);
    }

    #[test]
    fn enumerate_trees_on_four_vertices() {
        // Bound 0 keeps only acyclic graphs: the path and the star.
        let pool = enumerate_connected(4, 0, 1).unwrap();
        assert_eq!(pool.len(), 2);
        assert!(pool
            .iter()
            .all(|g| circumference(g).unwrap().circumference == 0));
    }

    #[test]
    fn enumerate_matches_connected_graph_counts() {
        // Unlabeled connected graph counts for n = 1..6.
        let expected = [1usize, 1, 2, 6, 21, 112];
        for (i, &want) in expected.iter().enumerate() {
            let n = i + 1;
            let pool = enumerate_connected(n, n, 1).unwrap();
            assert_eq!(pool.len(), want, "n = {n}");
        }
    }

    #[test]
    fn enumerate_agrees_with_oracle_dedup() {
        // Independent count: scan every labeled connected graph and
        // deduplicate with the backtracking oracle instead of codes.
        for n in 1..=5usize {
            let mut pairs = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    pairs.push((a, b));
                }
            }
            let mut reps: Vec<FeaturedGraph> = Vec::new();
            for mask in 0..(1u64 << pairs.len()) {
                let edges: Vec<(usize, usize)> = (0..pairs.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| pairs[i])
                    .collect();
                let g = FeaturedGraph::with_uniform_features(n, edges, vec![0.0]).unwrap();
                if !crate::structure::is_connected(&g) {
                    continue;
                }
                if !reps.iter().any(|r| are_isomorphic(r, &g).is_some()) {
                    reps.push(g);
                }
            }
            let pool = enumerate_connected(n, n, 1).unwrap();
            assert_eq!(pool.len(), reps.len(), "n = {n}");
            // Completeness: each labeled class maps to exactly one rep.
            for r in &reps {
                let hits = pool
                    .iter()
                    .filter(|g| are_isomorphic(r, g).is_some())
                    .count();
                assert_eq!(hits, 1);
            }
        }
    }

    #[test]
    fn enumerate_feature_assignments_up_to_symmetry() {
        // A single edge with two classes: both-0, both-1, and mixed.
        assert_eq!(enumerate_connected(2, 2, 2).unwrap().len(), 3);
        // A 3-path with two classes: 8 assignments fold into 6 under the
        // end-swapping symmetry.
        assert_eq!(enumerate_connected(3, 0, 2).unwrap().len(), 6);
    }

    #[test]
    fn enumeration_respects_limits() {
        assert!(enumerate_connected(9, 3, 1).unwrap_err().is_capacity());
        assert!(enumerate_connected(8, 3, 2).unwrap_err().is_capacity());
    }

    #[test]
    fn random_graph_is_deterministic_and_bounded() {
        let a = random_bounded_graph(12, 5, 2, 42).unwrap();
        let b = random_bounded_graph(12, 5, 2, 42).unwrap();
        assert_eq!(a, b);
        assert!(check_cycle_bound(&a, 5).unwrap().satisfied);
        assert!(crate::structure::is_connected(&a));
        for v in 0..12 {
            let f = a.feature(v)[0];
            assert!(f == 0.0 || f == 1.0);
        }
        let c = random_bounded_graph(12, 5, 2, 43).unwrap();
        assert!(a != c || a.edges() == c.edges());
    }

    #[test]
    fn random_trees_under_tight_bounds() {
        for seed in 0..20 {
            let g = random_bounded_graph(10, 0, 1, seed).unwrap();
            assert_eq!(g.edge_count(), 9);
            assert!(crate::structure::is_connected(&g));
        }
    }
}
