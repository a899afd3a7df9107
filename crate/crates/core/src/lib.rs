//! Twin-width toolkit: contraction sequences, grid and mixed minors of 0/1
//! matrices, corner matrices and corner-profiles, neighborhood complexity,
//! decodable neighborhood cells, and verified cutting and 0-1 regularity
//! partitions.

pub mod cells;
pub mod cli;
pub mod constants;
pub mod distal;
pub mod error;
pub mod generate;
pub mod graph;
pub mod matrix;
pub mod minors;
pub mod neighborhoods;
pub mod suite;
pub mod trigraph;
pub mod twinwidth;

pub use cells::{
    cell_partition, corner_profile, decode_cell, define_vertex, oracle_partition, sweep_blocks,
    BoundRef, Cell, CellDescriptor, CellKind, CellPartition, CornerProfile, DefinedVertex, Locator,
    ReducedMatrix, SweepBlock,
};
pub use constants::{mt_constant, PatternConstants, Pow2, Variant};
pub use distal::{
    cutting, cutting_with, regularity, regularity_with, verify_cutting, verify_regularity,
    CuttingCheck, CuttingPartition, RegularityCheck, RegularityPartition, SamplingConfig,
};
pub use error::{Error, Result};
pub use generate::{gen_certified, CertifiedInstance};
pub use graph::{adjacency_matrix, gen_matching, Graph, VertexOrder};
pub use matrix::{classify_submatrix, corner_matrix, corner_row_pairs, BitMatrix, Division};
pub use minors::{find_minor, max_grid_minor, max_minor, max_mixed_minor, MinorKind, MinorSearch};
pub use neighborhoods::{
    distinct_neighborhoods, neighborhoods_in, representative_set, shatter_function,
    shatter_profile, vc_dimension, NeighborhoodFamily,
};
pub use trigraph::{
    order_from_sequence, verify_sequence, ContractionSequence, SequenceCheck, Trigraph,
};
pub use twinwidth::{exact_twinwidth, ExactTwinWidth};
