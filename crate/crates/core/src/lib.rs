//! Maximum packings of odd T-walks and odd T-trails in capacitated networks,
//! with barrier and proper-partition certificates.
//!
//! All arithmetic is exact. Solvers are generic over [`Scalar`]; the crate
//! root fixes [`Rational`] as the default arbitrary-precision choice.

pub mod barrier;
pub mod cover;
pub mod error;
pub mod fixtures;
pub mod flow;
pub mod graph;
pub mod io;
pub mod multiflow;
pub mod oracle;
pub mod pipeline;
pub mod scalar;
mod splitting;
pub mod valence;

pub use barrier::{
    barrier_capacity, barrier_check, barrier_to_partition, max_odd_walk_packing, partition_to_barrier, slice,
    value_parity_check, Barrier, Slice,
};
pub use cover::{build_commodity_graph, build_double_cover, DoubleCover};
pub use error::{Error, Result};
pub use graph::{
    classify_walk, is_inner_eulerian, validate_packing, walk_parity, Edge, EdgeId, Multigraph, Network, Packing,
    PackingItem, Parity, Step, VertexId, Walk,
};
pub use multiflow::{
    lc_trail_packing, max_multiflow_fractional, max_multiflow_integer, min_proper_partition, MultiflowResult,
    ProperPartition,
};
pub use oracle::{
    certify, max_multiflow_exhaustive, max_trail_packing_exhaustive, min_barrier_exhaustive, OracleBudget,
    ParityFilter, TrailFamily,
};
pub use pipeline::{run_pipeline as odd_trail_packing, PipelineOutput, PipelineTrace};
pub use scalar::Scalar;
pub use valence::{alternating_packing, bidirected_trail_packing, SignedValenceNetwork};

/// Arbitrary-precision exact rational.
pub type Rational = num_rational::BigRational;
/// Exact rational with 64-bit numerator and denominator.
pub type Rational64 = num_rational::Ratio<i64>;
