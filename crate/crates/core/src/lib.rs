//! Exact enumeration and bijective machinery for acyclic arc subsets of
//! directed multigraphs.
//!
//! The central quantity is γ_k(s): the number of acyclic k-arc subsets under
//! which every vertex can reach the vertex `s`. On balanced digraphs this
//! count is the same for every `s`; this crate computes the tables exactly,
//! cross-checks them against independent oracles (a power-set filter, a
//! Matrix-Tree determinant, orientation counting on bidirected graphs), and
//! constructs the explicit bijections behind the equality — circuit
//! decompositions, the crossing-arc pairing β, the strip/refill maps, and the
//! involution map ψ between convergence families.

pub mod bijection;
pub mod bitset;
pub mod crosscheck;
pub mod digraph;
pub mod enumerate;
pub mod generate;
pub mod verify;

pub use bijection::{
    circuit_decomposition, crossing_bijection, BijectionContext, BijectionError,
    CircuitDecomposition, CrossingBijection, InvolutionTrace, TraceStep,
};
pub use bitset::{ArcSubset, VertexSet};
pub use crosscheck::{
    count_unique_sink_orientations, matrix_tree_to_root, naive_gamma, CrosscheckError, Orientation,
    UndirectedMultigraph,
};
pub use digraph::{Arc, GraphError, Multidigraph, ParseError, Partition};
pub use enumerate::{
    acyclic_count, classify_all_sizes, classify_uk, enumerate_acyclic, gamma_table,
    list_convergences, max_acyclic, max_convergence_size, BasinClassification, EnumError,
    EnumOptions, GammaTable,
};
pub use generate::{balanced_digraph, balanced_digraph_text, GenError, GenParams, SplitMix64};
pub use verify::{CheckResult, CheckStatus, VerifyOptions};
