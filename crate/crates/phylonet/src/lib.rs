//! Support-network analysis for rooted binary phylogenetic networks.
//!
//! The library decomposes a network into its unique maximal zig-zag trails
//! and builds everything else on top of that structure:
//!
//! * counting and linear-delay enumeration of the families of all, minimal,
//!   and minimum support networks and of support trees ([`families`]);
//! * linear-time reticulation (tier) minimization and exponential exact and
//!   heuristic level minimization ([`optimize`]);
//! * an independent brute-force oracle for differential testing on small
//!   instances ([`oracle`]);
//! * seeded random generation of valid networks ([`randgen`]) and a text
//!   format plus DOT export ([`formats`]).

pub mod families;
pub mod formats;
pub mod network;
pub mod optimize;
pub mod oracle;
pub mod randgen;
pub mod subgraph;
pub mod zigzag;

pub use families::{
    count_family, enumerate_family, is_admissible, is_tree_based, sequence_value, FamilyCount,
    FamilyKind, SequenceKind,
};
pub use network::{
    validate_network, PhyloNetwork, RawGraph, ValidationMode, ValidationReport, VertexId,
    VertexKind,
};
pub use optimize::{blocks, level, min_level_exact, min_level_heuristic, min_tier, SearchLimit};
pub use subgraph::{smooth, tier, EdgeSelection};
pub use zigzag::{decompose, TrailDecomposition, TrailType};
