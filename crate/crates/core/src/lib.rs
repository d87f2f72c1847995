//! Weisfeiler-Lehman laboratory: classic, k-hop, and k-hop subgraph
//! color refinement with provably collision-free hashing, plus the
//! structural predicates (bounded circumference, k-separability,
//! k-strong separability) and a verification harness that certifies the
//! separation theorems by exhaustive comparison against a brute-force
//! isomorphism oracle on small graphs.
//!
//! The crate is organized around three guarantees:
//!
//! * hashing is collision-free: colors are interned canonical codes, so
//!   two vertices share a color iff their hashed objects are equal;
//! * every verdict has an independent cross-check: canonical codes
//!   against a backtracking oracle, the subset-DP circumference against
//!   a cycle enumerator, WL verdicts against explicit isomorphisms;
//! * every counterexample carries a witness that revalidates.

pub mod canonical;
mod encode;
pub mod error;
pub mod graph;
pub mod structure;
pub mod synth;
pub mod verify;
pub mod wl;

pub use canonical::{
    are_isomorphic, are_isomorphic_rooted, canonical_code, canonical_code_featured,
    canonical_code_unrooted, validate_isomorphism, CanonicalCode, ColorId, ColorInterner,
    InternerTag, DEFAULT_CANON_LIMIT,
};
pub use error::{Error, Hypothesis, Result};
pub use graph::{
    all_pairs_distances, extract_rooted_subgraph, k_hop_neighborhood, DistanceMatrix,
    FeaturedGraph, RootedColoredGraph, UNREACHABLE,
};
pub use structure::{
    check_cycle_bound, circumference, check_lemma_c1, is_connected, is_k_separable,
    is_k_strongly_separable, CycleBoundReport, KSeparability, KStrongSeparability,
    DEFAULT_CYCLE_LIMIT,
};
pub use synth::{
    cycle_pair, enumerate_connected, fixture, random_bounded_graph, FixtureSet, FIXTURE_NAMES,
};
pub use verify::{
    construct_isomorphism, hypothesis_failures, verify_fixtures, verify_hierarchy,
    verify_lemma_c1, verify_theorem_1hop, verify_theorem_khop, verify_theorem_khop_subgraph,
    TheoremId, VerificationReport, VerifyParams, Violation,
};
pub use wl::{
    classic_wl, indistinguishable, khop_subgraph_wl, khop_subgraph_wl_with_limit, khop_wl,
    vertexwise_indistinguishable, Coloring, WlRun, WlVariant,
};
