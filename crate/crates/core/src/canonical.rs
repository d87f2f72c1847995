//! Canonical coding of (rooted) colored graphs, the color interner, and a
//! brute-force isomorphism oracle.
//!
//! A [`CanonicalCode`] is a byte string that is equal between two rooted
//! colored graphs iff they are isomorphic as rooted colored graphs (root
//! maps to root, colors preserved, edges preserved in both directions).
//! Together with a [`ColorInterner`] this realizes a collision-free HASH:
//! distinct codes always receive distinct color identifiers.
//!
//! Canonicalization is exact: a color-refinement pre-partition followed by
//! branch-and-bound over vertex orderings, taking the lexicographically
//! minimal serialization. Worst-case cost is factorial in the size of a
//! refinement cell, which is why callers face a configurable vertex-count
//! limit rather than a silent slowdown.
//!
//! The backtracking oracle ([`are_isomorphic`]) is deliberately independent
//! of the canonical-code path so each can cross-check the other.

use crate::encode::{push_bytes, push_varint};
use crate::error::{Error, Result};
use crate::graph::{FeaturedGraph, RootedColoredGraph};
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

/// Default vertex-count limit for canonicalization.
pub const DEFAULT_CANON_LIMIT: usize = 24;

/// Hard ceiling imposed by the 32-bit adjacency rows of the search.
const CANON_HARD_MAX: usize = 32;

/// Opaque color identifier issued by a [`ColorInterner`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColorId(pub u64);

/// Identifies which interner issued a set of colors. Colors from
/// different interners are never comparable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InternerTag(u64);

static INTERNER_COUNTER: AtomicU64 = AtomicU64::new(0);

/// Injective table from byte strings (canonical codes, initial-feature
/// encodings, refinement records) to dense color identifiers.
///
/// The table is the single point of mutation in the crate; concurrent
/// refinement runs must either own their interner or serialize access.
#[derive(Debug)]
pub struct ColorInterner {
    tag: InternerTag,
    table: HashMap<Vec<u8>, ColorId>,
}

impl ColorInterner {
    pub fn new() -> ColorInterner {
        ColorInterner {
            tag: InternerTag(INTERNER_COUNTER.fetch_add(1, AtomicOrdering::Relaxed)),
            table: HashMap::new(),
        }
    }

    pub fn tag(&self) -> InternerTag {
        self.tag
    }

    /// Number of distinct identifiers issued so far.
    pub fn distinct_colors(&self) -> usize {
        self.table.len()
    }

    /// Same code in, same identifier out; distinct codes get distinct
    /// identifiers for the lifetime of the interner.
    pub fn intern(&mut self, code: &CanonicalCode) -> ColorId {
        self.intern_bytes(code.as_bytes())
    }

    pub(crate) fn intern_bytes(&mut self, bytes: &[u8]) -> ColorId {
        if let Some(&id) = self.table.get(bytes) {
            return id;
        }
        let id = ColorId(self.table.len() as u64);
        self.table.insert(bytes.to_vec(), id);
        id
    }
}

impl Default for ColorInterner {
    fn default() -> Self {
        ColorInterner::new()
    }
}

/// Canonical serialization of a (rooted) colored graph.
///
/// Layout: kind byte, vertex count, root position (rooted codes only,
/// always 0 in canonical order), one varint per position color, then the
/// row-major upper-triangular adjacency bits padded to a byte. Codes are
/// stable across runs and platforms for fixed color values; interner ids
/// are per-run, so persisted artifacts should use feature-grounded codes
/// ([`canonical_code_featured`]).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode {
    bytes: Vec<u8>,
}

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(self.bytes.len() * 2);
        for b in &self.bytes {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }
}

const KIND_UNROOTED: u8 = 0x00;
const KIND_ROOTED: u8 = 0x01;
const KIND_FEATURED: u8 = 0x02;

/// Canonical code of a rooted colored graph, default limit.
pub fn canonical_code(rg: &RootedColoredGraph) -> Result<CanonicalCode> {
    canonical_code_with_limit(rg, DEFAULT_CANON_LIMIT)
}

pub fn canonical_code_with_limit(rg: &RootedColoredGraph, limit: usize) -> Result<CanonicalCode> {
    let n = rg.local_vertex_count();
    check_canon_size(n, limit)?;
    let colors: Vec<u64> = rg.colors().iter().map(|c| c.0).collect();
    let rows = rg.adjacency_rows();
    let order = canonical_order(n, &colors, &rows, Some(rg.root()));
    Ok(emit(KIND_ROOTED, n, &colors, &rows, &order, true, None))
}

/// Canonical code of a colored graph with no distinguished root.
pub fn canonical_code_unrooted(g: &FeaturedGraph, colors: &[ColorId]) -> Result<CanonicalCode> {
    canonical_code_unrooted_with_limit(g, colors, DEFAULT_CANON_LIMIT)
}

pub fn canonical_code_unrooted_with_limit(
    g: &FeaturedGraph,
    colors: &[ColorId],
    limit: usize,
) -> Result<CanonicalCode> {
    let n = g.vertex_count();
    if colors.len() != n {
        return Err(Error::ColoringLengthMismatch {
            got: colors.len(),
            expected: n,
        });
    }
    check_canon_size(n, limit)?;
    let colors: Vec<u64> = colors.iter().map(|c| c.0).collect();
    let rows = bit_rows(g);
    let order = canonical_order(n, &colors, &rows, None);
    Ok(emit(KIND_UNROOTED, n, &colors, &rows, &order, false, None))
}

/// Canonical code of a featured graph, grounding colors in the feature
/// bytes themselves. Stable across runs; used for whole-graph dedup.
pub fn canonical_code_featured(g: &FeaturedGraph) -> Result<CanonicalCode> {
    canonical_code_featured_with_limit(g, DEFAULT_CANON_LIMIT)
}

pub fn canonical_code_featured_with_limit(
    g: &FeaturedGraph,
    limit: usize,
) -> Result<CanonicalCode> {
    let n = g.vertex_count();
    check_canon_size(n, limit)?;
    let (classes, table) = feature_classes(g);
    let rows = bit_rows(g);
    let order = canonical_order(n, &classes, &rows, None);
    Ok(emit(KIND_FEATURED, n, &classes, &rows, &order, false, Some(&table)))
}

/// Canonical byte key for a colored graph given as adjacency bit rows;
/// the dedup primitive behind graph enumeration. Callers guarantee
/// `n <= 32`.
pub(crate) fn canonical_key(n: usize, colors: &[u64], rows: &[u32]) -> Vec<u8> {
    let order = canonical_order(n, colors, rows, None);
    emit(KIND_UNROOTED, n, colors, rows, &order, false, None).bytes
}

fn check_canon_size(n: usize, limit: usize) -> Result<()> {
    let effective = limit.min(CANON_HARD_MAX);
    if n > effective {
        return Err(Error::Capacity {
            what: "canonicalization",
            size: n,
            limit: effective,
        });
    }
    Ok(())
}

fn bit_rows(g: &FeaturedGraph) -> Vec<u32> {
    let mut rows = vec![0u32; g.vertex_count()];
    for &(a, b) in g.edges() {
        rows[a] |= 1 << b;
        rows[b] |= 1 << a;
    }
    rows
}

/// Dense feature-class ids ordered by the sorted distinct feature byte
/// strings, plus the table itself. Independent of vertex labeling.
fn feature_classes(g: &FeaturedGraph) -> (Vec<u64>, Vec<Vec<u8>>) {
    let mut table: Vec<Vec<u8>> = (0..g.vertex_count()).map(|v| g.feature_bytes(v)).collect();
    table.sort_unstable();
    table.dedup();
    let classes = (0..g.vertex_count())
        .map(|v| table.binary_search(&g.feature_bytes(v)).unwrap() as u64)
        .collect();
    (classes, table)
}

/// Iterated equitable refinement producing isomorphism-invariant cell
/// ranks: two vertices get the same rank iff color refinement from the
/// input colors (root individualized) cannot tell them apart.
fn refined_ranks(n: usize, colors: &[u64], rows: &[u32], root: Option<usize>) -> Vec<usize> {
    let initial: Vec<(u64, u64)> = (0..n)
        .map(|v| ((root == Some(v)) as u64, colors[v]))
        .collect();
    let mut cur = rank_dense(&initial);
    let mut cells = distinct_count(&cur);
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = (0..n)
                    .filter(|&u| rows[v] >> u & 1 == 1)
                    .map(|u| cur[u])
                    .collect();
                nb.sort_unstable();
                (cur[v], nb)
            })
            .collect();
        let next = rank_dense(&sigs);
        let next_cells = distinct_count(&next);
        if next_cells == cells {
            return next;
        }
        cells = next_cells;
        cur = next;
    }
}

fn rank_dense<T: Ord + Clone>(items: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = items.to_vec();
    sorted.sort();
    sorted.dedup();
    items
        .iter()
        .map(|x| sorted.binary_search(x).unwrap())
        .collect()
}

fn distinct_count(ranks: &[usize]) -> usize {
    ranks.iter().max().map_or(0, |&m| m + 1)
}

struct CanonSearch<'a> {
    n: usize,
    rows: &'a [u32],
    cell_of_pos: Vec<usize>,
    cells: Vec<Vec<usize>>,
    twins: Vec<u32>,
    order: Vec<usize>,
    cols: Vec<u64>,
    used: u32,
    best_cols: Vec<u64>,
    best_order: Vec<usize>,
    have_best: bool,
}

/// Finds a canonical vertex ordering: root pinned first (if any), the
/// rest grouped by (input color, refined rank) ascending, and within
/// those constraints the ordering minimizing the adjacency bit string.
fn canonical_order(n: usize, colors: &[u64], rows: &[u32], root: Option<usize>) -> Vec<usize> {
    let refined = refined_ranks(n, colors, rows, root);

    // Cells in emission order; members of one cell share an input color,
    // so the color sequence of any candidate ordering is the same.
    let mut keyed: Vec<(u64, usize, usize)> = (0..n)
        .filter(|&v| root != Some(v))
        .map(|v| (colors[v], refined[v], v))
        .collect();
    keyed.sort_unstable();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    if let Some(r) = root {
        cells.push(vec![r]);
    }
    for (color, rank, v) in keyed {
        match cells.last_mut() {
            Some(cell)
                if root != Some(cell[0])
                    && colors[cell[0]] == color
                    && refined[cell[0]] == rank =>
            {
                cell.push(v)
            }
            _ => cells.push(vec![v]),
        }
    }
    let mut cell_of_pos = Vec::with_capacity(n);
    for (i, cell) in cells.iter().enumerate() {
        cell_of_pos.extend(std::iter::repeat(i).take(cell.len()));
    }

    // Twin vertices (identical adjacency outside the pair, same cell) are
    // interchangeable by a transposition automorphism; exploring one of
    // them per branch point is enough.
    let mut twins = vec![0u32; n];
    for u in 0..n {
        for w in u + 1..n {
            if colors[u] == colors[w]
                && refined[u] == refined[w]
                && root != Some(u)
                && root != Some(w)
            {
                let excl = !((1u32 << u) | (1u32 << w));
                if rows[u] & excl == rows[w] & excl {
                    twins[u] |= 1 << w;
                    twins[w] |= 1 << u;
                }
            }
        }
    }

    let mut search = CanonSearch {
        n,
        rows,
        cell_of_pos,
        cells,
        twins,
        order: Vec::with_capacity(n),
        cols: Vec::with_capacity(n),
        used: 0,
        best_cols: Vec::new(),
        best_order: Vec::new(),
        have_best: false,
    };
    search.place(std::cmp::Ordering::Equal);
    search.best_order
}

impl CanonSearch<'_> {
    /// `prefix` is the ordering of the current column prefix against the
    /// best known one at the time each ancestor was expanded; it may be
    /// stale after `best` improves, which only costs extra exploration.
    /// The leaf comparison is authoritative.
    fn place(&mut self, prefix: std::cmp::Ordering) {
        use std::cmp::Ordering::*;
        let pos = self.order.len();
        if pos == self.n {
            if !self.have_best || self.cols < self.best_cols {
                self.best_cols = self.cols.clone();
                self.best_order = self.order.clone();
                self.have_best = true;
            }
            return;
        }
        let cell = self.cell_of_pos[pos];
        let mut candidates: Vec<(u64, usize)> = Vec::new();
        let unused_mask: u32 = {
            let mut m = 0u32;
            for &v in &self.cells[cell] {
                if self.used >> v & 1 == 0 {
                    m |= 1 << v;
                }
            }
            m
        };
        for &v in &self.cells[cell] {
            if self.used >> v & 1 == 1 {
                continue;
            }
            // Skip if a smaller unused twin covers this branch.
            if self.twins[v] & unused_mask & ((1u32 << v) - 1) != 0 {
                continue;
            }
            let mut col = 0u64;
            for (i, &u) in self.order.iter().enumerate() {
                if self.rows[v] >> u & 1 == 1 {
                    col |= 1 << (63 - i);
                }
            }
            candidates.push((col, v));
        }
        candidates.sort_unstable();
        for (col, v) in candidates {
            let child = if self.have_best {
                match prefix {
                    Greater => continue,
                    Less => Less,
                    Equal => match col.cmp(&self.best_cols[pos]) {
                        Greater => continue,
                        other => other,
                    },
                }
            } else {
                Equal
            };
            self.order.push(v);
            self.cols.push(col);
            self.used |= 1 << v;
            self.place(child);
            self.used &= !(1u32 << v);
            self.cols.pop();
            self.order.pop();
        }
    }
}

/// Serializes the canonical form found by the search in the fixed layout.
fn emit(
    kind: u8,
    n: usize,
    colors: &[u64],
    rows: &[u32],
    order: &[usize],
    rooted: bool,
    feature_table: Option<&[Vec<u8>]>,
) -> CanonicalCode {
    let mut bytes = Vec::new();
    bytes.push(kind);
    push_varint(&mut bytes, n as u64);
    if let Some(table) = feature_table {
        push_varint(&mut bytes, table.len() as u64);
        for entry in table {
            push_bytes(&mut bytes, entry);
        }
    }
    if rooted {
        // Root position: the search pins the root at position 0.
        push_varint(&mut bytes, 0);
    }
    for &v in order {
        push_varint(&mut bytes, colors[v]);
    }
    let mut acc = 0u8;
    let mut filled = 0u8;
    for i in 0..n {
        for j in i + 1..n {
            let bit = (rows[order[i]] >> order[j] & 1) as u8;
            acc = (acc << 1) | bit;
            filled += 1;
            if filled == 8 {
                bytes.push(acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        bytes.push(acc << (8 - filled));
    }
    CanonicalCode { bytes }
}

/// Backtracking search for a feature- and edge-preserving vertex
/// bijection. Returns a witness mapping vertex `i` of `a` to `w[i]` of
/// `b`, or `None` if the graphs are not isomorphic.
///
/// Independent of [`canonical_code`] so the two paths can cross-check.
pub fn are_isomorphic(a: &FeaturedGraph, b: &FeaturedGraph) -> Option<Vec<usize>> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    let n = a.vertex_count();
    // Shared dense feature classes over both graphs.
    let mut all: Vec<Vec<u8>> = (0..n).map(|v| a.feature_bytes(v)).collect();
    all.extend((0..n).map(|v| b.feature_bytes(v)));
    all.sort_unstable();
    all.dedup();
    let class_a: Vec<u64> = (0..n)
        .map(|v| all.binary_search(&a.feature_bytes(v)).unwrap() as u64)
        .collect();
    let class_b: Vec<u64> = (0..n)
        .map(|v| all.binary_search(&b.feature_bytes(v)).unwrap() as u64)
        .collect();
    let rows_a = bit_rows64(a.vertex_count(), a.edges());
    let rows_b = bit_rows64(b.vertex_count(), b.edges());
    colored_iso(n, &rows_a, &class_a, &rows_b, &class_b, None)
}

/// Root-pinning, color-respecting variant of the oracle for rooted
/// colored graphs. Colors are compared as exact values, so both inputs
/// must use one color id space.
pub fn are_isomorphic_rooted(
    a: &RootedColoredGraph,
    b: &RootedColoredGraph,
) -> Option<Vec<usize>> {
    let n = a.local_vertex_count();
    if n != b.local_vertex_count() || a.edges().len() != b.edges().len() {
        return None;
    }
    let class_a: Vec<u64> = a.colors().iter().map(|c| c.0).collect();
    let class_b: Vec<u64> = b.colors().iter().map(|c| c.0).collect();
    let rows_a = bit_rows64(n, a.edges());
    let rows_b = bit_rows64(n, b.edges());
    colored_iso(
        n,
        &rows_a,
        &class_a,
        &rows_b,
        &class_b,
        Some((a.root(), b.root())),
    )
}

fn bit_rows64(n: usize, edges: &[(usize, usize)]) -> Vec<u64> {
    assert!(n <= 64, "isomorphism oracle supports at most 64 vertices");
    let mut rows = vec![0u64; n];
    for &(x, y) in edges {
        rows[x] |= 1 << y;
        rows[y] |= 1 << x;
    }
    rows
}

/// Exhaustive backtracking over class- and degree-compatible assignments
/// with full adjacency consistency against all placed vertices.
pub(crate) fn colored_iso(
    n: usize,
    rows_a: &[u64],
    class_a: &[u64],
    rows_b: &[u64],
    class_b: &[u64],
    pinned: Option<(usize, usize)>,
) -> Option<Vec<usize>> {
    let mut profile_a: Vec<(u64, u32)> = (0..n)
        .map(|v| (class_a[v], rows_a[v].count_ones()))
        .collect();
    let mut profile_b: Vec<(u64, u32)> = (0..n)
        .map(|v| (class_b[v], rows_b[v].count_ones()))
        .collect();
    profile_a.sort_unstable();
    profile_b.sort_unstable();
    if profile_a != profile_b {
        return None;
    }
    if let Some((pa, pb)) = pinned {
        if class_a[pa] != class_b[pb] || rows_a[pa].count_ones() != rows_b[pb].count_ones() {
            return None;
        }
    }

    // Static search order: most-placed-neighbors first keeps the partial
    // map connected and prunes early.
    let mut order = Vec::with_capacity(n);
    let mut picked = vec![false; n];
    if let Some((pa, _)) = pinned {
        order.push(pa);
        picked[pa] = true;
    }
    while order.len() < n {
        let mut best = usize::MAX;
        let mut best_key = (0usize, 0u32);
        for v in 0..n {
            if picked[v] {
                continue;
            }
            let placed_neighbors = order
                .iter()
                .filter(|&&u| rows_a[v] >> u & 1 == 1)
                .count();
            let key = (placed_neighbors, rows_a[v].count_ones());
            if best == usize::MAX || key > best_key {
                best = v;
                best_key = key;
            }
        }
        order.push(best);
        picked[best] = true;
    }

    let mut map = vec![usize::MAX; n];
    let mut used_b = vec![false; n];
    fn backtrack(
        pos: usize,
        order: &[usize],
        rows_a: &[u64],
        class_a: &[u64],
        rows_b: &[u64],
        class_b: &[u64],
        pinned: Option<(usize, usize)>,
        map: &mut Vec<usize>,
        used_b: &mut Vec<bool>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let u = order[pos];
        for w in 0..rows_b.len() {
            if used_b[w] || class_b[w] != class_a[u] {
                continue;
            }
            if rows_b[w].count_ones() != rows_a[u].count_ones() {
                continue;
            }
            if let Some((pa, pb)) = pinned {
                if (u == pa) != (w == pb) {
                    continue;
                }
            }
            let consistent = order[..pos].iter().all(|&p| {
                let edge_a = rows_a[u] >> p & 1 == 1;
                let edge_b = rows_b[w] >> map[p] & 1 == 1;
                edge_a == edge_b
            });
            if !consistent {
                continue;
            }
            map[u] = w;
            used_b[w] = true;
            if backtrack(
                pos + 1,
                order,
                rows_a,
                class_a,
                rows_b,
                class_b,
                pinned,
                map,
                used_b,
            ) {
                return true;
            }
            used_b[w] = false;
            map[u] = usize::MAX;
        }
        false
    }

    if backtrack(
        0, &order, rows_a, class_a, rows_b, class_b, pinned, &mut map, &mut used_b,
    ) {
        Some(map)
    } else {
        None
    }
}

/// Checks that `map` is a feature- and edge-preserving bijection from
/// `a` to `b`. Used by tests and the verification harness to revalidate
/// every witness independently.
pub fn validate_isomorphism(a: &FeaturedGraph, b: &FeaturedGraph, map: &[usize]) -> bool {
    let n = a.vertex_count();
    if b.vertex_count() != n || map.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &w in map {
        if w >= n || seen[w] {
            return false;
        }
        seen[w] = true;
    }
    for v in 0..n {
        if a.feature_bytes(v) != b.feature_bytes(map[v]) {
            return false;
        }
    }
    if a.edge_count() != b.edge_count() {
        return false;
    }
    a.edges()
        .iter()
        .all(|&(x, y)| b.has_edge(map[x], map[y]))
}
