//! Property tests: permutation equivariance, canonical-code invariance,
//! refinement monotonicity, and the refinement hierarchy between the WL
//! variants, over randomly generated small graphs.

use proptest::prelude::*;
use wllab_core::{
    all_pairs_distances, are_isomorphic, canonical_code_featured, classic_wl, indistinguishable,
    k_hop_neighborhood, khop_subgraph_wl, khop_wl, validate_isomorphism, ColorInterner,
    FeaturedGraph,
};

#[derive(Debug, Clone)]
struct SmallGraph {
    graph: FeaturedGraph,
    perm: Vec<usize>,
}

fn small_graph(max_n: usize, classes: u8) -> impl Strategy<Value = SmallGraph> {
    (1..=max_n)
        .prop_flat_map(move |n| {
            let bits = n * (n - 1) / 2;
            (
                Just(n),
                proptest::collection::vec(any::<bool>(), bits),
                proptest::collection::vec(0..classes, n),
                Just(()).prop_perturb(move |_, mut rng| {
                    let mut perm: Vec<usize> = (0..n).collect();
                    for i in (1..n).rev() {
                        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
                        perm.swap(i, j);
                    }
                    perm
                }),
            )
        })
        .prop_map(|(n, edge_bits, feature_classes, perm)| {
            let mut edges = Vec::new();
            let mut idx = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if edge_bits[idx] {
                        edges.push((a, b));
                    }
                    idx += 1;
                }
            }
            let features = feature_classes.iter().map(|&c| vec![c as f64]).collect();
            SmallGraph {
                graph: FeaturedGraph::new(n, edges, features).unwrap(),
                perm,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Distances and k-hop neighborhoods of a relabeled graph are the
    /// relabeled distances and neighborhoods.
    #[test]
    fn distances_and_neighborhoods_are_equivariant(sg in small_graph(7, 2)) {
        let g = &sg.graph;
        let n = g.vertex_count();
        let h = g.permuted(&sg.perm).unwrap();
        let dg = all_pairs_distances(g);
        let dh = all_pairs_distances(&h);
        for u in 0..n {
            for v in 0..n {
                prop_assert_eq!(dg.get(u, v), dh.get(sg.perm[u], sg.perm[v]));
            }
        }
        for v in 0..n {
            for k in 1..=3 {
                let mut mapped: Vec<usize> = k_hop_neighborhood(&dg, v, k)
                    .unwrap()
                    .into_iter()
                    .map(|u| sg.perm[u])
                    .collect();
                mapped.sort_unstable();
                prop_assert_eq!(mapped, k_hop_neighborhood(&dh, sg.perm[v], k).unwrap());
            }
        }
    }

    /// The featured canonical code never changes under relabeling.
    #[test]
    fn canonical_code_is_relabeling_invariant(sg in small_graph(7, 3)) {
        let h = sg.graph.permuted(&sg.perm).unwrap();
        prop_assert_eq!(
            canonical_code_featured(&sg.graph).unwrap(),
            canonical_code_featured(&h).unwrap()
        );
    }

    /// The oracle always finds a valid witness between a graph and its
    /// relabeling.
    #[test]
    fn oracle_witnesses_validate(sg in small_graph(7, 2)) {
        let h = sg.graph.permuted(&sg.perm).unwrap();
        let witness = are_isomorphic(&sg.graph, &h);
        prop_assert!(witness.is_some());
        prop_assert!(validate_isomorphism(&sg.graph, &h, &witness.unwrap()));
    }

    /// Every WL variant is equivariant: colors of the relabeled graph
    /// are the relabeled colors, at every iteration.
    #[test]
    fn refinement_is_equivariant(sg in small_graph(6, 2), k in 1usize..=2) {
        let g = &sg.graph;
        let h = g.permuted(&sg.perm).unwrap();
        let mut interner = ColorInterner::new();
        for (ra, rb) in [
            (classic_wl(g, &mut interner), classic_wl(&h, &mut interner)),
            (khop_wl(g, k, &mut interner), khop_wl(&h, k, &mut interner)),
            (
                khop_subgraph_wl(g, k, &mut interner).unwrap(),
                khop_subgraph_wl(&h, k, &mut interner).unwrap(),
            ),
        ] {
            prop_assert_eq!(ra.history().len(), rb.history().len());
            for (ca, cb) in ra.history().iter().zip(rb.history()) {
                for v in 0..g.vertex_count() {
                    prop_assert_eq!(ca.colors()[v], cb.colors()[sg.perm[v]]);
                }
            }
            prop_assert!(indistinguishable(&ra, &rb).unwrap());
        }
    }

    /// Refinement never coarsens: same class at iteration l implies
    /// same class at iteration l-1.
    #[test]
    fn refinement_is_monotone(sg in small_graph(6, 2)) {
        let mut interner = ColorInterner::new();
        let run = khop_subgraph_wl(&sg.graph, 2, &mut interner).unwrap();
        let n = sg.graph.vertex_count();
        prop_assert!(run.stabilized_at() <= n);
        for w in run.history().windows(2) {
            let prev = w[0].normalized_partition();
            let next = w[1].normalized_partition();
            for i in 0..n {
                for j in 0..n {
                    if next[i] == next[j] {
                        prop_assert_eq!(prev[i], prev[j]);
                    }
                }
            }
        }
    }

    /// Hierarchy containment: a pair the k-hop subgraph test cannot
    /// split is also unsplittable for the k-hop test and for classic
    /// WL (the subgraph code determines the distance-tagged multiset).
    #[test]
    fn subgraph_blindness_implies_khop_blindness(
        a in small_graph(6, 2),
        b in small_graph(6, 2),
        k in 1usize..=2,
    ) {
        prop_assume!(a.graph.vertex_count() == b.graph.vertex_count());
        let mut interner = ColorInterner::new();
        let sa = khop_subgraph_wl(&a.graph, k, &mut interner).unwrap();
        let sb = khop_subgraph_wl(&b.graph, k, &mut interner).unwrap();
        if indistinguishable(&sa, &sb).unwrap() {
            let ka = khop_wl(&a.graph, k, &mut interner);
            let kb = khop_wl(&b.graph, k, &mut interner);
            prop_assert!(indistinguishable(&ka, &kb).unwrap());
            let ca = classic_wl(&a.graph, &mut interner);
            let cb = classic_wl(&b.graph, &mut interner);
            prop_assert!(indistinguishable(&ca, &cb).unwrap());
        }
    }

    /// Early-stop consistency: equal final multisets imply equal
    /// multisets at every earlier iteration.
    #[test]
    fn final_multiset_equality_extends_backwards(
        a in small_graph(6, 2),
        b in small_graph(6, 2),
    ) {
        prop_assume!(a.graph.vertex_count() == b.graph.vertex_count());
        let mut interner = ColorInterner::new();
        let ra = classic_wl(&a.graph, &mut interner);
        let rb = classic_wl(&b.graph, &mut interner);
        if indistinguishable(&ra, &rb).unwrap() {
            prop_assert_eq!(ra.history().len(), rb.history().len());
            for (ca, cb) in ra.history().iter().zip(rb.history()) {
                let mut ma: Vec<_> = ca.colors().to_vec();
                let mut mb: Vec<_> = cb.colors().to_vec();
                ma.sort_unstable();
                mb.sort_unstable();
                prop_assert_eq!(ma, mb);
            }
        }
    }
}
