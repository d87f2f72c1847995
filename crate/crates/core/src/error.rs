//! Error types shared across the crate.

use thiserror::Error;

/// Hypothesis gates checked by [`crate::structure::check_lemma_c1`] and
/// [`crate::verify::construct_isomorphism`] before doing any work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// The graph (or both graphs) must be connected.
    Connected,
    /// The circumference bound (no cycle longer than the stated limit).
    CycleBound,
    /// Both graphs must be k-separable.
    KSeparable,
    /// Both graphs must be k-strongly separable.
    KStronglySeparable,
    /// The WL runs must declare the pair indistinguishable.
    Indistinguishable,
    /// The vertex subset must be nonempty and induce a connected subgraph.
    SubsetConnected,
    /// The pivot vertex must lie outside the subset and be adjacent to it.
    PivotAdjacency,
    /// Both graphs must have the same number of vertices.
    SameOrder,
}

impl std::fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Hypothesis::Connected => "graph connectivity",
            Hypothesis::CycleBound => "circumference bound",
            Hypothesis::KSeparable => "k-separability",
            Hypothesis::KStronglySeparable => "k-strong separability",
            Hypothesis::Indistinguishable => "WL indistinguishability",
            Hypothesis::SubsetConnected => "connected nonempty vertex subset",
            Hypothesis::PivotAdjacency => "pivot outside the subset and adjacent to it",
            Hypothesis::SameOrder => "equal vertex counts",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    EmptyGraph,

    #[error("edge ({0}, {1}) has an endpoint outside 0..{2}")]
    EdgeOutOfRange(usize, usize, usize),

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("feature list has {got} entries, expected {expected}")]
    FeatureCountMismatch { got: usize, expected: usize },

    #[error("feature vector of vertex {vertex} has dimension {got}, expected {expected}")]
    FeatureDimMismatch {
        vertex: usize,
        got: usize,
        expected: usize,
    },

    #[error("vertex {vertex} out of range 0..{n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("coloring has {got} entries, expected {expected}")]
    ColoringLengthMismatch { got: usize, expected: usize },

    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),

    #[error("colorings were issued by different interners and are not comparable")]
    InternerMismatch,

    #[error("runs are not comparable: {0}")]
    RunMismatch(String),

    #[error("unknown fixture name `{0}`")]
    UnknownFixture(String),

    #[error("{what} on {size} vertices exceeds the limit of {limit}; raise the limit explicitly")]
    Capacity {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("hypothesis not satisfied ({what}): {detail}")]
    HypothesisFailed { what: Hypothesis, detail: String },

    #[error("sampling budget of {budget} draws exhausted without an accepted graph")]
    SamplingBudgetExhausted { budget: u64 },

    #[error("isomorphism construction stuck after mapping {} vertices: {detail}", partial.len())]
    ConstructionStuck {
        partial: Vec<(usize, usize)>,
        detail: String,
    },
}

impl Error {
    /// True for errors that report a size above a configured limit.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
