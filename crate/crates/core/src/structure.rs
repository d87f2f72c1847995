//! Structural predicates appearing in theorem hypotheses: connectivity,
//! bounded cycle length, k-separability, k-strong separability, and the
//! frontier edge-exclusion property used by the constructive proofs.
//!
//! Circumference is computed exactly by dynamic programming over
//! (vertex subset, endpoint) path states; a naive all-simple-cycles
//! enumerator cross-checks it in the tests.

use crate::canonical::ColorInterner;
use crate::error::{Error, Hypothesis, Result};
use crate::graph::{all_pairs_distances, FeaturedGraph};
use crate::wl::{khop_subgraph_wl_with_limit, khop_wl};
use serde::Serialize;

/// Default vertex-count limit for the exact cycle search.
pub const DEFAULT_CYCLE_LIMIT: usize = 20;

/// Outcome of a cycle-length query.
///
/// `circumference` is exact whenever `satisfied` is true (and always in
/// unbounded mode); when a bound is violated the search stops at the
/// first witnessing cycle, so the value is only a lower bound then.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleBoundReport {
    pub circumference: usize,
    pub bound: Option<usize>,
    pub satisfied: bool,
    pub witness_cycle: Option<Vec<usize>>,
}

/// Single-BFS reachability check.
pub fn is_connected(g: &FeaturedGraph) -> bool {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

/// Length of the longest simple cycle (0 for acyclic graphs), exact.
pub fn circumference(g: &FeaturedGraph) -> Result<CycleBoundReport> {
    circumference_with_limit(g, DEFAULT_CYCLE_LIMIT)
}

pub fn circumference_with_limit(g: &FeaturedGraph, limit: usize) -> Result<CycleBoundReport> {
    let (len, _) = longest_cycle(g, None, limit)?;
    Ok(CycleBoundReport {
        circumference: len,
        bound: None,
        satisfied: true,
        witness_cycle: None,
    })
}

/// Checks that no simple cycle is longer than `bound`, exiting early
/// with a witness cycle as soon as one exceeds it.
pub fn check_cycle_bound(g: &FeaturedGraph, bound: usize) -> Result<CycleBoundReport> {
    check_cycle_bound_with_limit(g, bound, DEFAULT_CYCLE_LIMIT)
}

pub fn check_cycle_bound_with_limit(
    g: &FeaturedGraph,
    bound: usize,
    limit: usize,
) -> Result<CycleBoundReport> {
    let (len, witness) = longest_cycle(g, Some(bound), limit)?;
    Ok(CycleBoundReport {
        circumference: len,
        bound: Some(bound),
        satisfied: witness.is_none(),
        witness_cycle: witness,
    })
}

/// Subset DP over (mask, endpoint) path states anchored at the minimum
/// vertex of the mask. Returns the longest cycle length found and, when
/// `stop_above` is given, a witness cycle longer than it (the search
/// stops at the first one).
fn longest_cycle(
    g: &FeaturedGraph,
    stop_above: Option<usize>,
    limit: usize,
) -> Result<(usize, Option<Vec<usize>>)> {
    let n = g.vertex_count();
    // 2^n u32 DP states; 24 vertices already cost 64 MiB.
    let effective = limit.min(24);
    if n > effective {
        return Err(Error::Capacity {
            what: "exact cycle search",
            size: n,
            limit: effective,
        });
    }
    let mut rows = vec![0u32; n];
    for &(a, b) in g.edges() {
        rows[a] |= 1 << b;
        rows[b] |= 1 << a;
    }
    let mut ends = Vec::new();
    Ok(longest_cycle_scratch(&rows, n, stop_above, &mut ends))
}

/// DP core on adjacency bit rows with a reusable state buffer, so bulk
/// callers (graph enumeration) avoid per-graph allocation.
pub(crate) fn longest_cycle_scratch(
    rows: &[u32],
    n: usize,
    stop_above: Option<usize>,
    ends: &mut Vec<u32>,
) -> (usize, Option<Vec<usize>>) {
    ends.clear();
    ends.resize(1 << n, 0);
    for v in 0..n {
        ends[1 << v] = 1 << v;
    }
    let mut best = 0usize;
    for mask in 1u32..(1 << n) {
        let reach = ends[mask as usize];
        if reach == 0 {
            continue;
        }
        let anchor = mask.trailing_zeros() as usize;
        let size = mask.count_ones() as usize;
        let mut endpoints = reach;
        while endpoints != 0 {
            let v = endpoints.trailing_zeros() as usize;
            endpoints &= endpoints - 1;
            // Close the cycle back to the anchor.
            if size >= 3 && rows[v] >> anchor & 1 == 1 && size > best {
                best = size;
                if let Some(b) = stop_above {
                    if best > b {
                        let witness = reconstruct_cycle(rows, ends, mask, v);
                        return (best, Some(witness));
                    }
                }
            }
            // Extend the path; candidates above the anchor keep it the
            // minimum of the mask.
            let mut ext = rows[v] & !mask & (!0u32 << anchor);
            while ext != 0 {
                let u = ext.trailing_zeros() as usize;
                ext &= ext - 1;
                ends[(mask | 1 << u) as usize] |= 1 << u;
            }
        }
    }
    (best, None)
}

/// Walks a (mask, endpoint) state back to the anchor to materialize the
/// cycle's vertex sequence.
fn reconstruct_cycle(rows: &[u32], ends: &[u32], mask: u32, endpoint: usize) -> Vec<usize> {
    let anchor = mask.trailing_zeros() as usize;
    let mut path = vec![endpoint];
    let mut cur_mask = mask;
    let mut cur = endpoint;
    while cur != anchor {
        let prev_mask = cur_mask & !(1u32 << cur);
        let preds = ends[prev_mask as usize] & rows[cur];
        debug_assert!(preds != 0, "DP state has no predecessor");
        let p = preds.trailing_zeros() as usize;
        path.push(p);
        cur_mask = prev_mask;
        cur = p;
    }
    path.reverse();
    path
}

/// Verdict of the k-separability predicate with an optional violating
/// triple `(u, v1, v2)`: two distinct vertices at distance exactly `k`
/// from `u` that ended up with the same stabilized color.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KSeparability {
    pub separable: bool,
    pub violation: Option<(usize, usize, usize)>,
}

/// A graph is k-separable if, after the k-hop subgraph WL test
/// stabilizes under collision-free hashing, any two distinct vertices
/// at distance exactly `k` from a common vertex have distinct colors.
pub fn is_k_separable(g: &FeaturedGraph, k: usize) -> Result<KSeparability> {
    is_k_separable_with_limit(g, k, crate::canonical::DEFAULT_CANON_LIMIT)
}

pub fn is_k_separable_with_limit(
    g: &FeaturedGraph,
    k: usize,
    limit: usize,
) -> Result<KSeparability> {
    let mut interner = ColorInterner::new();
    let run = khop_subgraph_wl_with_limit(g, k, &mut interner, limit)?;
    let colors = run.stabilized().colors();
    let dm = all_pairs_distances(g);
    let n = g.vertex_count();
    for u in 0..n {
        let ring: Vec<usize> = (0..n).filter(|&v| dm.get(u, v) == k as u32).collect();
        for (i, &v1) in ring.iter().enumerate() {
            for &v2 in &ring[i + 1..] {
                if colors[v1] == colors[v2] {
                    return Ok(KSeparability {
                        separable: false,
                        violation: Some((u, v1, v2)),
                    });
                }
            }
        }
    }
    Ok(KSeparability {
        separable: true,
        violation: None,
    })
}

/// Verdict of the k-strong separability predicate with an optional
/// violating pair at distance at most `2k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KStrongSeparability {
    pub separable: bool,
    pub violation: Option<(usize, usize)>,
}

/// A graph is k-strongly separable if, after the k-hop WL test
/// stabilizes under collision-free hashing, any two distinct vertices
/// within distance `2k` have distinct colors.
pub fn is_k_strongly_separable(g: &FeaturedGraph, k: usize) -> Result<KStrongSeparability> {
    let mut interner = ColorInterner::new();
    let run = khop_wl(g, k, &mut interner);
    let colors = run.stabilized().colors();
    let dm = all_pairs_distances(g);
    let n = g.vertex_count();
    for v1 in 0..n {
        for v2 in v1 + 1..n {
            if dm.get(v1, v2) <= 2 * k as u32 && colors[v1] == colors[v2] {
                return Ok(KStrongSeparability {
                    separable: false,
                    violation: Some((v1, v2)),
                });
            }
        }
    }
    Ok(KStrongSeparability {
        separable: true,
        violation: None,
    })
}

/// Frontier edge-exclusion property: with `S` a connected subset of a
/// connected graph whose circumference is at most `2k+1`, and `u1` a
/// vertex outside `S` adjacent to it, no vertex of
/// `N_k(u1) \ N_k(S)` may neighbor a vertex of `N_k(S) \ N_k(u1)`.
///
/// The hypotheses are checked first and violations are reported as
/// errors naming the failed hypothesis; under the hypotheses the
/// property must always hold, which is exactly what the harness tests.
pub fn check_lemma_c1(g: &FeaturedGraph, s: &[usize], u1: usize, k: usize) -> Result<bool> {
    check_lemma_c1_with_limit(g, s, u1, k, DEFAULT_CYCLE_LIMIT)
}

pub fn check_lemma_c1_with_limit(
    g: &FeaturedGraph,
    s: &[usize],
    u1: usize,
    k: usize,
    limit: usize,
) -> Result<bool> {
    let n = g.vertex_count();
    if k < 2 {
        return Err(Error::InvalidArgument(
            "the edge-exclusion lemma requires k >= 2".into(),
        ));
    }
    if s.is_empty() {
        return Err(Error::HypothesisFailed {
            what: Hypothesis::SubsetConnected,
            detail: "subset is empty".into(),
        });
    }
    let mut in_s = vec![false; n];
    for &v in s {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        in_s[v] = true;
    }
    if u1 >= n {
        return Err(Error::VertexOutOfRange { vertex: u1, n });
    }
    // Connectivity of the induced subgraph on S.
    let mut seen = vec![false; n];
    let mut stack = vec![s[0]];
    seen[s[0]] = true;
    let mut reached = 1;
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if in_s[w] && !seen[w] {
                seen[w] = true;
                reached += 1;
                stack.push(w);
            }
        }
    }
    let s_size = in_s.iter().filter(|&&x| x).count();
    if reached != s_size {
        return Err(Error::HypothesisFailed {
            what: Hypothesis::SubsetConnected,
            detail: "subset does not induce a connected subgraph".into(),
        });
    }
    if in_s[u1] || !g.neighbors(u1).iter().any(|&w| in_s[w]) {
        return Err(Error::HypothesisFailed {
            what: Hypothesis::PivotAdjacency,
            detail: format!("vertex {u1} must lie outside the subset and neighbor it"),
        });
    }
    if !is_connected(g) {
        return Err(Error::HypothesisFailed {
            what: Hypothesis::Connected,
            detail: "graph is disconnected".into(),
        });
    }
    let report = check_cycle_bound_with_limit(g, 2 * k + 1, limit)?;
    if !report.satisfied {
        return Err(Error::HypothesisFailed {
            what: Hypothesis::CycleBound,
            detail: format!(
                "a cycle of length {} exceeds the bound {}",
                report.witness_cycle.as_ref().map_or(0, Vec::len),
                2 * k + 1
            ),
        });
    }

    let dm = all_pairs_distances(g);
    Ok(lemma_c1_property(g, &dm, s, u1, k))
}

/// The bare edge-exclusion property, hypothesis checks and distance
/// computation factored out so the exhaustive harness can sweep all
/// (subset, pivot) choices off one distance matrix.
pub(crate) fn lemma_c1_property(
    g: &FeaturedGraph,
    dm: &crate::graph::DistanceMatrix,
    s: &[usize],
    u1: usize,
    k: usize,
) -> bool {
    let n = g.vertex_count();
    let near_u1 = |v: usize| dm.get(u1, v) <= k as u32;
    let near_s = |v: usize| s.iter().any(|&x| dm.get(x, v) <= k as u32);
    let t: Vec<usize> = (0..n).filter(|&v| near_u1(v) && !near_s(v)).collect();
    let other: Vec<usize> = (0..n).filter(|&v| near_s(v) && !near_u1(v)).collect();
    t.iter()
        .all(|&a| other.iter().all(|&b| !g.has_edge(a, b)))
}
