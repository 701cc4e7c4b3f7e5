//! Glauber dynamics over edge and vertex subsets of simple graphs, weighted
//! by subset-expansion graph polynomials.
//!
//! The library has three layers:
//!
//! * graph kernels: component counts, size profiles, GF(2) incidence and
//!   adjacency ranks ([`graph`], [`gf2`]);
//! * weight models and chains: the six weight families in log domain, exact
//!   partition sums, and the seeded single-flip Metropolis chains
//!   ([`model`], [`dynamics`]);
//! * verification: linear-width / vertex-separation orderings, canonical
//!   paths, exact congestion, cut multiplicativity sweeps, and exact mixing
//!   times checked against the Sinclair congestion bound on small state
//!   spaces ([`width`], [`verify`], [`corpus`]).

#![forbid(unsafe_code)]

pub mod bits;
pub mod corpus;
pub mod dynamics;
pub mod gf2;
pub mod graph;
pub mod model;
pub mod verify;
pub mod width;

/// Enumeration caps shared across the crate.
pub mod caps {
    /// Largest log2 state space for exact partition sums.
    pub const PARTITION_LOG2: usize = 24;
    /// Largest log2 state space for full distribution vectors.
    pub const DISTRIBUTION_LOG2: usize = 20;
    /// Largest log2 state space for transition-matrix work (congestion,
    /// mixing, balance checks).
    pub const MATRIX_LOG2: usize = 10;
    /// Largest ground set for the exact width search.
    pub const WIDTH_EXACT: usize = 16;
    /// Largest vertex count for multiplicativity sweeps.
    pub const MULT_N: usize = 12;
    /// Largest edge count enumerated per multiplicativity sweep.
    pub const MULT_SUBSETS_LOG2: usize = 16;
}

pub use bits::{Bits, HexError, Subset, SubsetKind};
pub use corpus::{default_corpus, edge_model_matrix, vertex_model_matrix, CorpusEntry,
    ManifestEntry};
pub use dynamics::{
    empirical_distribution, run, step, transition_probability, ChainConfig, DynamicsError,
    SplitMix64, Trace,
};
pub use gf2::{adjacency_rank_edges, adjacency_rank_induced, incidence_rank};
pub use graph::{
    component_size_profile, components_count, induced_subgraph, Graph, GraphError, ParseError,
    Separation,
};
pub use model::{ModelError, WeightModel};
pub use verify::{
    canonical_path, check_balance, check_edge_multiplicativity, check_vertex_multiplicativity,
    congestion, exact_mixing_time, path_weight_ratio_max, stationary_distribution,
    transition_matrix, tv_decay_curve, tv_distance, BalanceReport, CanonicalPath,
    CongestionReport, MixingReport, MultReport, MultWitness, TransitionMatrix, VerifyError,
    LOG_SLACK,
};
pub use width::{
    greedy_ordering, linear_width_of_ordering, optimal_edge_ordering, optimal_vertex_ordering,
    vertex_separation_of_ordering, Ordering, WidthError,
};
