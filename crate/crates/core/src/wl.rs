//! The three color-refinement procedures — classic WL, k-hop WL, and
//! k-hop subgraph WL — plus stabilization detection and the
//! indistinguishability relations over stabilized colorings.
//!
//! All variants share one driver: intern the initial feature encoding of
//! every vertex, then repeatedly intern a per-vertex refinement record
//! until the induced partition stops changing. Records embed the
//! previous color identifier, so a partition at iteration `l` always
//! refines the partition at iteration `l-1`.
//!
//! Cross-graph comparison requires both runs to have interleaved through
//! one shared [`ColorInterner`]; the runs carry the interner's tag and
//! comparisons across different interners are rejected.

use crate::canonical::{canonical_code_with_limit, ColorId, ColorInterner, InternerTag,
    DEFAULT_CANON_LIMIT};
use crate::encode::{push_bytes, push_varint};
use crate::error::{Error, Result};
use crate::graph::{all_pairs_distances, extract_rooted_subgraph, DistanceMatrix, FeaturedGraph};

const TAG_INITIAL: u8 = 0x10;
const TAG_CLASSIC: u8 = 0x11;
const TAG_KHOP: u8 = 0x12;
const TAG_SUBGRAPH: u8 = 0x13;

/// Which refinement rule a run used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WlVariant {
    Classic,
    KHop(usize),
    KHopSubgraph(usize),
}

impl std::fmt::Display for WlVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WlVariant::Classic => write!(f, "classic"),
            WlVariant::KHop(k) => write!(f, "{k}-hop"),
            WlVariant::KHopSubgraph(k) => write!(f, "{k}-hop subgraph"),
        }
    }
}

/// Per-vertex colors at one refinement iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    iteration: usize,
    colors: Vec<ColorId>,
    interner_tag: InternerTag,
}

impl Coloring {
    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn colors(&self) -> &[ColorId] {
        &self.colors
    }

    pub fn interner_tag(&self) -> InternerTag {
        self.interner_tag
    }

    /// Number of color classes.
    pub fn class_count(&self) -> usize {
        let mut sorted: Vec<ColorId> = self.colors.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len()
    }

    /// Partition normalized to dense first-occurrence indices; equal
    /// vectors mean equal partitions regardless of the color values.
    pub fn normalized_partition(&self) -> Vec<u32> {
        let mut next = 0u32;
        let mut seen: std::collections::HashMap<ColorId, u32> = std::collections::HashMap::new();
        self.colors
            .iter()
            .map(|&c| {
                *seen.entry(c).or_insert_with(|| {
                    let id = next;
                    next += 1;
                    id
                })
            })
            .collect()
    }
}

/// A full refinement run: the colorings from iteration 0 up to and
/// including the iteration that confirmed stabilization.
///
/// `stabilized_at` is the first iteration whose partition equals the
/// next one; it is at most `n`.
#[derive(Debug, Clone)]
pub struct WlRun {
    variant: WlVariant,
    history: Vec<Coloring>,
    stabilized_at: usize,
    interner_tag: InternerTag,
}

impl WlRun {
    pub fn variant(&self) -> WlVariant {
        self.variant
    }

    pub fn history(&self) -> &[Coloring] {
        &self.history
    }

    pub fn stabilized_at(&self) -> usize {
        self.stabilized_at
    }

    /// The stabilized coloring: the final history entry, i.e. the
    /// iteration that confirmed stabilization.
    ///
    /// Within one graph it induces the same partition as iteration
    /// `stabilized_at`; across graphs only this one is comparable,
    /// because its identifiers have a full round of structural hashing
    /// baked in even when the partition never refined.
    pub fn stabilized(&self) -> &Coloring {
        self.history.last().unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.history[0].colors.len()
    }

    pub fn interner_tag(&self) -> InternerTag {
        self.interner_tag
    }

    /// Final color multiset, sorted.
    pub fn final_multiset(&self) -> Vec<ColorId> {
        let mut m = self.stabilized().colors.clone();
        m.sort_unstable();
        m
    }
}

/// Classic WL refinement: each vertex hashes its previous color and the
/// multiset of its neighbors' previous colors, until stabilization.
pub fn classic_wl(g: &FeaturedGraph, interner: &mut ColorInterner) -> WlRun {
    run_refinement(g, interner, WlVariant::Classic, DEFAULT_CANON_LIMIT)
        .expect("classic refinement has no failure modes")
}

/// k-hop WL refinement: each vertex hashes its previous color and the
/// multiset of (color, distance) pairs over its k-hop neighborhood.
/// The vertex itself participates at distance 0.
pub fn khop_wl(g: &FeaturedGraph, k: usize, interner: &mut ColorInterner) -> WlRun {
    assert!(k >= 1, "k-hop WL requires k >= 1");
    run_refinement(g, interner, WlVariant::KHop(k), DEFAULT_CANON_LIMIT)
        .expect("k-hop refinement has no failure modes")
}

/// k-hop subgraph WL refinement: each vertex hashes its previous color
/// and the canonical code of its rooted k-hop subgraph colored by the
/// previous coloring.
pub fn khop_subgraph_wl(
    g: &FeaturedGraph,
    k: usize,
    interner: &mut ColorInterner,
) -> Result<WlRun> {
    khop_subgraph_wl_with_limit(g, k, interner, DEFAULT_CANON_LIMIT)
}

/// As [`khop_subgraph_wl`] with an explicit canonicalization limit for
/// neighborhoods larger than the default.
pub fn khop_subgraph_wl_with_limit(
    g: &FeaturedGraph,
    k: usize,
    interner: &mut ColorInterner,
    limit: usize,
) -> Result<WlRun> {
    assert!(k >= 1, "k-hop subgraph WL requires k >= 1");
    run_refinement(g, interner, WlVariant::KHopSubgraph(k), limit)
}

fn run_refinement(
    g: &FeaturedGraph,
    interner: &mut ColorInterner,
    variant: WlVariant,
    limit: usize,
) -> Result<WlRun> {
    let n = g.vertex_count();
    let dm: Option<DistanceMatrix> = match variant {
        WlVariant::Classic => None,
        _ => Some(all_pairs_distances(g)),
    };

    let mut initial = Vec::with_capacity(n);
    for v in 0..n {
        let mut rec = vec![TAG_INITIAL];
        rec.extend_from_slice(&g.feature_bytes(v));
        initial.push(interner.intern_bytes(&rec));
    }
    let mut history = vec![Coloring {
        iteration: 0,
        colors: initial,
        interner_tag: interner.tag(),
    }];

    loop {
        let prev = history.last().unwrap();
        let mut colors = Vec::with_capacity(n);
        for v in 0..n {
            let record = match variant {
                WlVariant::Classic => classic_record(g, prev, v),
                WlVariant::KHop(k) => khop_record(dm.as_ref().unwrap(), prev, v, k),
                WlVariant::KHopSubgraph(k) => {
                    subgraph_record(g, dm.as_ref().unwrap(), prev, v, k, limit)?
                }
            };
            colors.push(interner.intern_bytes(&record));
        }
        let next = Coloring {
            iteration: history.len(),
            colors,
            interner_tag: interner.tag(),
        };
        let stable = prev.normalized_partition() == next.normalized_partition();
        history.push(next);
        if stable {
            break;
        }
        // Each non-final iteration strictly refines the partition, so
        // stabilization must arrive within n iterations.
        assert!(
            history.len() <= n,
            "color refinement failed to stabilize within {n} iterations"
        );
    }

    Ok(WlRun {
        variant,
        stabilized_at: history.len() - 2,
        history,
        interner_tag: interner.tag(),
    })
}

fn classic_record(g: &FeaturedGraph, prev: &Coloring, v: usize) -> Vec<u8> {
    let mut neighbor_colors: Vec<u64> =
        g.neighbors(v).iter().map(|&u| prev.colors[u].0).collect();
    neighbor_colors.sort_unstable();
    let mut rec = vec![TAG_CLASSIC];
    push_varint(&mut rec, prev.colors[v].0);
    push_varint(&mut rec, neighbor_colors.len() as u64);
    for c in neighbor_colors {
        push_varint(&mut rec, c);
    }
    rec
}

fn khop_record(dm: &DistanceMatrix, prev: &Coloring, v: usize, k: usize) -> Vec<u8> {
    let n = prev.colors.len();
    let mut pairs: Vec<(u64, u64)> = (0..n)
        .filter(|&u| dm.get(v, u) <= k as u32)
        .map(|u| (prev.colors[u].0, dm.get(v, u) as u64))
        .collect();
    pairs.sort_unstable();
    let mut rec = vec![TAG_KHOP];
    push_varint(&mut rec, prev.colors[v].0);
    push_varint(&mut rec, pairs.len() as u64);
    for (color, dist) in pairs {
        push_varint(&mut rec, color);
        push_varint(&mut rec, dist);
    }
    rec
}

fn subgraph_record(
    g: &FeaturedGraph,
    dm: &DistanceMatrix,
    prev: &Coloring,
    v: usize,
    k: usize,
    limit: usize,
) -> Result<Vec<u8>> {
    let rg = extract_rooted_subgraph(g, &prev.colors, dm, v, k)?;
    let code = canonical_code_with_limit(&rg, limit)?;
    let mut rec = vec![TAG_SUBGRAPH];
    push_varint(&mut rec, prev.colors[v].0);
    push_bytes(&mut rec, code.as_bytes());
    Ok(rec)
}

fn check_comparable(a: &WlRun, b: &WlRun) -> Result<()> {
    if a.variant != b.variant {
        return Err(Error::RunMismatch(format!(
            "variants differ ({} vs {})",
            a.variant, b.variant
        )));
    }
    if a.interner_tag != b.interner_tag {
        return Err(Error::InternerMismatch);
    }
    if a.vertex_count() != b.vertex_count() {
        return Err(Error::RunMismatch(format!(
            "vertex counts differ ({} vs {})",
            a.vertex_count(),
            b.vertex_count()
        )));
    }
    Ok(())
}

/// Final stabilized color multisets are equal. With a collision-free
/// interner this decides the indistinguishability relation: equality at
/// stabilization implies equality at every iteration.
pub fn indistinguishable(a: &WlRun, b: &WlRun) -> Result<bool> {
    check_comparable(a, b)?;
    Ok(a.final_multiset() == b.final_multiset())
}

/// Positionwise variant: stabilized color sequences are equal index by
/// index.
pub fn vertexwise_indistinguishable(a: &WlRun, b: &WlRun) -> Result<bool> {
    check_comparable(a, b)?;
    Ok(a.stabilized().colors == b.stabilized().colors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{cycle_pair, fixture};

    fn uniform(n: usize, edges: Vec<(usize, usize)>) -> FeaturedGraph {
        FeaturedGraph::with_uniform_features(n, edges, vec![0.0]).unwrap()
    }

    #[test]
    fn classic_cannot_split_fig1() {
        let fx = fixture("fig1_pair").unwrap();
        let mut interner = ColorInterner::new();
        let a = classic_wl(&fx.graphs[0], &mut interner);
        let b = classic_wl(&fx.graphs[1], &mut interner);
        assert!(indistinguishable(&a, &b).unwrap());
        // Vertex labels are aligned in the fixture, so the positional
        // relation holds as well.
        assert!(vertexwise_indistinguishable(&a, &b).unwrap());
    }

    #[test]
    fn classic_stabilizes_immediately_on_fig3() {
        let fx = fixture("fig3_pair").unwrap();
        let mut interner = ColorInterner::new();
        let a = classic_wl(&fx.graphs[0], &mut interner);
        let b = classic_wl(&fx.graphs[1], &mut interner);
        assert_eq!(a.stabilized_at(), 0);
        assert_eq!(b.stabilized_at(), 0);
        assert!(indistinguishable(&a, &b).unwrap());
    }

    #[test]
    fn classic_splits_a_path_into_ends_and_middle() {
        let g = uniform(3, vec![(0, 1), (1, 2)]);
        let mut interner = ColorInterner::new();
        let run = classic_wl(&g, &mut interner);
        let colors = run.stabilized().colors();
        assert_eq!(colors[0], colors[2]);
        assert_ne!(colors[0], colors[1]);
        assert_eq!(run.stabilized_at(), 1);
    }

    #[test]
    fn khop_cannot_split_fig4_for_any_k() {
        let fx = fixture("fig4_pair").unwrap();
        for k in 1..=5 {
            let mut interner = ColorInterner::new();
            let a = khop_wl(&fx.graphs[0], k, &mut interner);
            let b = khop_wl(&fx.graphs[1], k, &mut interner);
            assert!(indistinguishable(&a, &b).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn khop_on_single_vertex_stabilizes_at_zero() {
        let g = uniform(1, vec![]);
        let mut interner = ColorInterner::new();
        let run = khop_wl(&g, 3, &mut interner);
        assert_eq!(run.stabilized_at(), 0);
        assert_eq!(run.stabilized().class_count(), 1);
    }

    #[test]
    fn khop_distinguishes_six_cycle_from_two_triangles() {
        let six = uniform(6, (0..6).map(|i| (i, (i + 1) % 6)).collect());
        let triangles = uniform(6, vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        let mut interner = ColorInterner::new();
        let a = khop_wl(&six, 2, &mut interner);
        let b = khop_wl(&triangles, 2, &mut interner);
        assert!(!indistinguishable(&a, &b).unwrap());
        // Classic WL cannot tell these 2-regular graphs apart.
        let mut interner = ColorInterner::new();
        let a = classic_wl(&six, &mut interner);
        let b = classic_wl(&triangles, &mut interner);
        assert!(indistinguishable(&a, &b).unwrap());
    }

    #[test]
    fn subgraph_wl_splits_fig1_at_the_first_iteration() {
        let fx = fixture("fig1_pair").unwrap();
        let mut interner = ColorInterner::new();
        let a = khop_subgraph_wl(&fx.graphs[0], 2, &mut interner).unwrap();
        let b = khop_subgraph_wl(&fx.graphs[1], 2, &mut interner).unwrap();
        // v1's color diverges after one refinement step.
        assert_ne!(a.history()[1].colors()[0], b.history()[1].colors()[0]);
        assert!(!indistinguishable(&a, &b).unwrap());
    }

    #[test]
    fn subgraph_wl_splits_fig3_at_k3() {
        let fx = fixture("fig3_pair").unwrap();
        let mut interner = ColorInterner::new();
        let a = khop_subgraph_wl(&fx.graphs[0], 3, &mut interner).unwrap();
        let b = khop_subgraph_wl(&fx.graphs[1], 3, &mut interner).unwrap();
        assert!(!indistinguishable(&a, &b).unwrap());
    }

    #[test]
    fn subgraph_wl_fails_on_the_cycle_pair_family() {
        for k in 1..=2 {
            let (two, one) = cycle_pair(k);
            let mut interner = ColorInterner::new();
            let a = khop_subgraph_wl(&two, k, &mut interner).unwrap();
            let b = khop_subgraph_wl(&one, k, &mut interner).unwrap();
            assert!(indistinguishable(&a, &b).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn one_hop_wl_matches_classic_partition_history() {
        // The 1-hop rule adds only the vertex's own (color, 0) entry, so
        // its partitions must coincide with classic WL's at every
        // iteration; this keeps the separate code path honest.
        let graphs = vec![
            fixture("fig1_pair").unwrap().graphs[0].clone(),
            fixture("fig1_pair").unwrap().graphs[1].clone(),
            fixture("fig3_pair").unwrap().graphs[0].clone(),
            fixture("fig4_pair").unwrap().graphs[0].clone(),
            uniform(5, vec![(0, 1), (1, 2), (1, 3), (3, 4)]),
        ];
        for g in &graphs {
            let mut i1 = ColorInterner::new();
            let mut i2 = ColorInterner::new();
            let classic = classic_wl(g, &mut i1);
            let one_hop = khop_wl(g, 1, &mut i2);
            assert_eq!(classic.stabilized_at(), one_hop.stabilized_at());
            for (a, b) in classic.history().iter().zip(one_hop.history()) {
                assert_eq!(a.normalized_partition(), b.normalized_partition());
            }
        }
    }

    #[test]
    fn vertexwise_relation_is_reflexive_and_label_sensitive() {
        let g = uniform(5, vec![(0, 1), (1, 2), (2, 3), (1, 4)]);
        let mut interner = ColorInterner::new();
        let a = classic_wl(&g, &mut interner);
        let b = classic_wl(&g, &mut interner);
        assert!(vertexwise_indistinguishable(&a, &b).unwrap());

        // Swapping vertices from different stabilized classes breaks the
        // positional relation but not the multiset one.
        let sigma = [0, 1, 3, 2, 4];
        let h = g.permuted(&sigma).unwrap();
        let c = classic_wl(&h, &mut interner);
        assert!(indistinguishable(&a, &c).unwrap());
        assert!(!vertexwise_indistinguishable(&a, &c).unwrap());
    }

    #[test]
    fn relabeling_never_changes_the_multiset_verdict() {
        let g = uniform(6, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]);
        let sigma = [4, 2, 0, 5, 1, 3];
        let h = g.permuted(&sigma).unwrap();
        let mut interner = ColorInterner::new();
        let a = classic_wl(&g, &mut interner);
        let b = classic_wl(&h, &mut interner);
        assert!(indistinguishable(&a, &b).unwrap());
        // Equivariance at every iteration.
        for (ca, cb) in a.history().iter().zip(b.history()) {
            for v in 0..6 {
                assert_eq!(ca.colors()[v], cb.colors()[sigma[v]]);
            }
        }
    }

    #[test]
    fn refinement_never_coarsens() {
        let fx = fixture("fig3_pair").unwrap();
        for g in &fx.graphs {
            let mut interner = ColorInterner::new();
            let run = khop_subgraph_wl(g, 3, &mut interner).unwrap();
            for w in run.history().windows(2) {
                let prev = w[0].normalized_partition();
                let next = w[1].normalized_partition();
                // Same class at l implies same class at l-1.
                let n = prev.len();
                for i in 0..n {
                    for j in 0..n {
                        if next[i] == next[j] {
                            assert_eq!(prev[i], prev[j]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn comparisons_reject_mismatched_runs() {
        let g = uniform(3, vec![(0, 1), (1, 2)]);
        let mut i1 = ColorInterner::new();
        let mut i2 = ColorInterner::new();
        let a = classic_wl(&g, &mut i1);
        let b = classic_wl(&g, &mut i2);
        assert!(matches!(
            indistinguishable(&a, &b),
            Err(Error::InternerMismatch)
        ));
        let c = khop_wl(&g, 1, &mut i1);
        assert!(matches!(
            indistinguishable(&a, &c),
            Err(Error::RunMismatch(_))
        ));
        let h = uniform(2, vec![(0, 1)]);
        let d = classic_wl(&h, &mut i1);
        assert!(matches!(
            indistinguishable(&a, &d),
            Err(Error::RunMismatch(_))
        ));
    }

    #[test]
    fn early_stop_consistency_on_fig1() {
        // Equal final multisets imply equal multisets at every earlier
        // iteration.
        let fx = fixture("fig1_pair").unwrap();
        let mut interner = ColorInterner::new();
        let a = classic_wl(&fx.graphs[0], &mut interner);
        let b = classic_wl(&fx.graphs[1], &mut interner);
        assert!(indistinguishable(&a, &b).unwrap());
        for (ca, cb) in a.history().iter().zip(b.history()) {
            let mut ma: Vec<ColorId> = ca.colors().to_vec();
            let mut mb: Vec<ColorId> = cb.colors().to_vec();
            ma.sort_unstable();
            mb.sort_unstable();
            assert_eq!(ma, mb);
        }
    }
}
