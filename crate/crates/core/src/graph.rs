//! Graph representation, BFS distances, k-hop neighborhoods, and rooted
//! subgraph extraction.
//!
//! A [`FeaturedGraph`] is an undirected unweighted graph with a feature
//! vector per vertex. Features are exact values: two features are equal
//! iff their `f64` bit patterns are equal, and everything downstream
//! (colors, canonical codes, isomorphism) compares them that way. All
//! types here are immutable after construction and all operations are
//! pure functions.

use crate::canonical::ColorId;
use crate::encode::{push_f64_bits, push_varint};
use crate::error::{Error, Result};
use serde::ser::{Serialize, SerializeStruct, Serializer};
use std::collections::VecDeque;

/// Sentinel distance for vertex pairs in different components.
pub const UNREACHABLE: u32 = u32::MAX;

/// Undirected unweighted graph with per-vertex feature vectors.
///
/// Vertices are dense 0-based indices. Edges are stored normalized
/// (`i < j`, sorted, no duplicates); adjacency lists are precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct FeaturedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    features: Vec<Vec<f64>>,
    adj: Vec<Vec<usize>>,
}

impl FeaturedGraph {
    /// Validates and normalizes a vertex count, edge list, and feature list.
    pub fn new(
        n: usize,
        edges: Vec<(usize, usize)>,
        features: Vec<Vec<f64>>,
    ) -> Result<FeaturedGraph> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if features.len() != n {
            return Err(Error::FeatureCountMismatch {
                got: features.len(),
                expected: n,
            });
        }
        let dim = features[0].len();
        for (vertex, f) in features.iter().enumerate() {
            if f.len() != dim {
                return Err(Error::FeatureDimMismatch {
                    vertex,
                    got: f.len(),
                    expected: dim,
                });
            }
        }
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(Error::EdgeOutOfRange(a, b, n));
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        for w in norm.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &norm {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(FeaturedGraph {
            n,
            edges: norm,
            features,
            adj,
        })
    }

    /// Builds a graph where every vertex carries the same feature vector.
    pub fn with_uniform_features(
        n: usize,
        edges: Vec<(usize, usize)>,
        feature: Vec<f64>,
    ) -> Result<FeaturedGraph> {
        let features = vec![feature; n];
        FeaturedGraph::new(n, edges, features)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn feature_dim(&self) -> usize {
        self.features[0].len()
    }

    /// Normalized edge list: `i < j`, ascending.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn feature(&self, v: usize) -> &[f64] {
        &self.features[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Sorted degree sequence, a cheap isomorphism invariant.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    /// Bit-exact encoding of vertex `v`'s feature vector: dimension
    /// prefix followed by the raw `f64` bit patterns.
    pub fn feature_bytes(&self, v: usize) -> Vec<u8> {
        let f = &self.features[v];
        let mut buf = Vec::with_capacity(1 + 8 * f.len());
        push_varint(&mut buf, f.len() as u64);
        for &x in f {
            push_f64_bits(&mut buf, x);
        }
        buf
    }

    /// Relabels vertices: vertex `i` of `self` becomes vertex `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<FeaturedGraph> {
        if perm.len() != self.n {
            return Err(Error::InvalidPermutation(self.n));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || seen[p] {
                return Err(Error::InvalidPermutation(self.n));
            }
            seen[p] = true;
        }
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (perm[a], perm[b]))
            .collect();
        let mut features = vec![Vec::new(); self.n];
        for (i, f) in self.features.iter().enumerate() {
            features[perm[i]] = f.clone();
        }
        FeaturedGraph::new(self.n, edges, features)
    }
}

impl Serialize for FeaturedGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("FeaturedGraph", 4)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("m", &self.feature_dim())?;
        s.serialize_field("features", &self.features)?;
        let edges: Vec<[usize; 2]> = self.edges.iter().map(|&(a, b)| [a, b]).collect();
        s.serialize_field("edges", &edges)?;
        s.end()
    }
}

/// All-pairs shortest-path lengths of a [`FeaturedGraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Shortest-path distance, [`UNREACHABLE`] across components.
    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.d[u * self.n + v]
    }

    pub fn is_reachable(&self, u: usize, v: usize) -> bool {
        self.get(u, v) != UNREACHABLE
    }

    /// Largest finite distance in the matrix.
    pub fn diameter(&self) -> u32 {
        self.d
            .iter()
            .copied()
            .filter(|&x| x != UNREACHABLE)
            .max()
            .unwrap_or(0)
    }
}

/// Exact unweighted shortest paths via one BFS per vertex.
pub fn all_pairs_distances(g: &FeaturedGraph) -> DistanceMatrix {
    let n = g.vertex_count();
    let mut d = vec![UNREACHABLE; n * n];
    let mut queue = VecDeque::new();
    for start in 0..n {
        let row = &mut d[start * n..(start + 1) * n];
        row[start] = 0;
        queue.clear();
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            let du = row[u];
            for &w in g.neighbors(u) {
                if row[w] == UNREACHABLE {
                    row[w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    DistanceMatrix { n, d }
}

/// The set `{u : d(u, v) <= k}`, sorted ascending. Always contains `v`.
pub fn k_hop_neighborhood(dm: &DistanceMatrix, v: usize, k: usize) -> Result<Vec<usize>> {
    let n = dm.vertex_count();
    if v >= n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    assert!(k >= 1, "k-hop neighborhood requires k >= 1");
    Ok((0..n).filter(|&u| dm.get(v, u) <= k as u32).collect())
}

/// Induced subgraph on a k-hop neighborhood with a distinguished root
/// and per-vertex colors restricted from the parent coloring.
///
/// `vertex_ids` records the original indices so witnesses found on the
/// subgraph can be traced back to the parent graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedColoredGraph {
    vertex_ids: Vec<usize>,
    root: usize,
    edges: Vec<(usize, usize)>,
    colors: Vec<ColorId>,
}

impl RootedColoredGraph {
    /// Assembles a rooted colored graph from parts, validating local
    /// index ranges, the root position, and the color count.
    pub fn new(
        vertex_ids: Vec<usize>,
        root: usize,
        edges: Vec<(usize, usize)>,
        colors: Vec<ColorId>,
    ) -> Result<RootedColoredGraph> {
        let n = vertex_ids.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if root >= n {
            return Err(Error::VertexOutOfRange { vertex: root, n });
        }
        if colors.len() != n {
            return Err(Error::ColoringLengthMismatch {
                got: colors.len(),
                expected: n,
            });
        }
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(Error::EdgeOutOfRange(a, b, n));
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        for w in norm.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        Ok(RootedColoredGraph {
            vertex_ids,
            root,
            edges: norm,
            colors,
        })
    }

    pub fn local_vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    /// Original parent-graph indices, in local-index order.
    pub fn vertex_ids(&self) -> &[usize] {
        &self.vertex_ids
    }

    /// Local position of the root.
    pub fn root(&self) -> usize {
        self.root
    }

    /// Induced edges in local indices, normalized.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn colors(&self) -> &[ColorId] {
        &self.colors
    }

    /// Adjacency bit rows over local indices.
    pub(crate) fn adjacency_rows(&self) -> Vec<u32> {
        let mut rows = vec![0u32; self.vertex_ids.len()];
        for &(a, b) in &self.edges {
            rows[a] |= 1 << b;
            rows[b] |= 1 << a;
        }
        rows
    }
}

/// Extracts the rooted subgraph `(G, colors)` restricted to the k-hop
/// neighborhood of `v`, with colors taken from the parent coloring.
pub fn extract_rooted_subgraph(
    g: &FeaturedGraph,
    colors: &[ColorId],
    dm: &DistanceMatrix,
    v: usize,
    k: usize,
) -> Result<RootedColoredGraph> {
    let n = g.vertex_count();
    if colors.len() != n {
        return Err(Error::ColoringLengthMismatch {
            got: colors.len(),
            expected: n,
        });
    }
    let vertex_ids = k_hop_neighborhood(dm, v, k)?;
    let mut local = vec![usize::MAX; n];
    for (i, &u) in vertex_ids.iter().enumerate() {
        local[u] = i;
    }
    let root = local[v];
    let mut edges = Vec::new();
    for &(a, b) in g.edges() {
        if local[a] != usize::MAX && local[b] != usize::MAX {
            edges.push((local[a], local[b]));
        }
    }
    let sub_colors = vertex_ids.iter().map(|&u| colors[u]).collect();
    RootedColoredGraph::new(vertex_ids, root, edges, sub_colors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::fixture;

    fn path(n: usize) -> FeaturedGraph {
        let edges = (0..n - 1).map(|i| (i, i + 1)).collect();
        FeaturedGraph::with_uniform_features(n, edges, vec![0.0]).unwrap()
    }

    fn cycle(n: usize) -> FeaturedGraph {
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        FeaturedGraph::with_uniform_features(n, edges, vec![0.0]).unwrap()
    }

    fn uniform_colors(n: usize) -> Vec<ColorId> {
        vec![ColorId(0); n]
    }

    #[test]
    fn validation_rejects_bad_input() {
        assert!(matches!(
            FeaturedGraph::new(0, vec![], vec![]),
            Err(Error::EmptyGraph)
        ));
        assert!(matches!(
            FeaturedGraph::with_uniform_features(2, vec![(0, 2)], vec![]),
            Err(Error::EdgeOutOfRange(0, 2, 2))
        ));
        assert!(matches!(
            FeaturedGraph::with_uniform_features(2, vec![(1, 1)], vec![]),
            Err(Error::SelfLoop(1))
        ));
        assert!(matches!(
            FeaturedGraph::with_uniform_features(3, vec![(0, 1), (1, 0)], vec![]),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            FeaturedGraph::new(2, vec![], vec![vec![0.0], vec![0.0, 1.0]]),
            Err(Error::FeatureDimMismatch { vertex: 1, .. })
        ));
    }

    #[test]
    fn single_vertex_distance_matrix() {
        let g = FeaturedGraph::with_uniform_features(1, vec![], vec![]).unwrap();
        let dm = all_pairs_distances(&g);
        assert_eq!(dm.get(0, 0), 0);
    }

    #[test]
    fn path_distances() {
        let g = path(3);
        let dm = all_pairs_distances(&g);
        assert_eq!(dm.get(0, 2), 2);
        assert_eq!(dm.get(2, 0), 2);
        assert_eq!(dm.get(0, 1), 1);
    }

    #[test]
    fn disjoint_cycles_are_unreachable() {
        // fig1's left graph is two disjoint 4-cycles; v1 and v5 sit in
        // different components.
        let left = &fixture("fig1_pair").unwrap().graphs[0];
        let dm = all_pairs_distances(left);
        assert_eq!(dm.get(0, 4), UNREACHABLE);
        assert!(!dm.is_reachable(0, 4));
    }

    #[test]
    fn k_hop_of_isolated_vertex() {
        let g = FeaturedGraph::with_uniform_features(3, vec![(1, 2)], vec![0.0]).unwrap();
        let dm = all_pairs_distances(&g);
        for k in 1..5 {
            assert_eq!(k_hop_neighborhood(&dm, 0, k).unwrap(), vec![0]);
        }
    }

    #[test]
    fn k_hop_on_eight_cycle() {
        let right = &fixture("fig1_pair").unwrap().graphs[1];
        let dm = all_pairs_distances(right);
        // v1 = vertex 0; its 2-hop neighborhood is {v1, v2, v3, v7, v8}.
        assert_eq!(k_hop_neighborhood(&dm, 0, 2).unwrap(), vec![0, 1, 2, 6, 7]);
    }

    #[test]
    fn k_hop_saturates_on_four_cycle() {
        let g = cycle(4);
        let dm = all_pairs_distances(&g);
        for v in 0..4 {
            assert_eq!(k_hop_neighborhood(&dm, v, 2).unwrap(), vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn k_hop_rejects_out_of_range_vertex() {
        let g = path(3);
        let dm = all_pairs_distances(&g);
        assert!(matches!(
            k_hop_neighborhood(&dm, 5, 1),
            Err(Error::VertexOutOfRange { vertex: 5, n: 3 })
        ));
    }

    #[test]
    fn extract_saturated_neighborhood_is_whole_component() {
        let g = path(4);
        let dm = all_pairs_distances(&g);
        let rg = extract_rooted_subgraph(&g, &uniform_colors(4), &dm, 1, 10).unwrap();
        assert_eq!(rg.vertex_ids(), &[0, 1, 2, 3]);
        assert_eq!(rg.root(), 1);
        assert_eq!(rg.edges(), &[(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn extract_two_hop_subgraphs_of_fig1() {
        let fx = fixture("fig1_pair").unwrap();
        let left = &fx.graphs[0];
        let right = &fx.graphs[1];

        // Left: the full 4-cycle rooted at v1.
        let dm = all_pairs_distances(left);
        let rg = extract_rooted_subgraph(left, &uniform_colors(8), &dm, 0, 2).unwrap();
        assert_eq!(rg.vertex_ids(), &[0, 1, 2, 3]);
        assert_eq!(rg.edges().len(), 4);
        assert_eq!(rg.root(), 0);

        // Right: the 5-vertex path v7-v8-v1-v2-v3 rooted at v1.
        let dm = all_pairs_distances(right);
        let rg = extract_rooted_subgraph(right, &uniform_colors(8), &dm, 0, 2).unwrap();
        assert_eq!(rg.vertex_ids(), &[0, 1, 2, 6, 7]);
        assert_eq!(rg.edges().len(), 4);
        // Degrees 1,1,2,2,2: a path.
        let rows = rg.adjacency_rows();
        let mut degs: Vec<u32> = rows.iter().map(|r| r.count_ones()).collect();
        degs.sort_unstable();
        assert_eq!(degs, vec![1, 1, 2, 2, 2]);
    }

    #[test]
    fn extract_rejects_wrong_coloring_length() {
        let g = path(3);
        let dm = all_pairs_distances(&g);
        assert!(matches!(
            extract_rooted_subgraph(&g, &uniform_colors(2), &dm, 0, 1),
            Err(Error::ColoringLengthMismatch { got: 2, expected: 3 })
        ));
    }

    #[test]
    fn neighborhood_monotone_in_k_and_matches_extraction() {
        let g = cycle(7);
        let dm = all_pairs_distances(&g);
        let mut prev: Vec<usize> = vec![];
        for k in 1..8 {
            let nk = k_hop_neighborhood(&dm, 3, k).unwrap();
            assert!(prev.iter().all(|v| nk.contains(v)));
            let rg = extract_rooted_subgraph(&g, &uniform_colors(7), &dm, 3, k).unwrap();
            assert_eq!(rg.vertex_ids(), nk.as_slice());
            prev = nk;
        }
        assert_eq!(prev.len(), 7);
    }

    #[test]
    fn permuted_relabels_edges_and_features() {
        let g = FeaturedGraph::new(
            3,
            vec![(0, 1)],
            vec![vec![1.0], vec![2.0], vec![3.0]],
        )
        .unwrap();
        let h = g.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(h.edges(), &[(0, 2)]);
        assert_eq!(h.feature(2), &[1.0]);
        assert_eq!(h.feature(0), &[2.0]);
        assert!(g.permuted(&[0, 0, 1]).is_err());
    }
}
