//! Radial feeder topologies, sensor costs and their file format.

mod costs;
mod document;
mod dot;
mod generate;
mod tree;

pub use costs::CostModel;
pub use document::{
    parse_feeder, serialize_feeder, validate, CostSite, EdgeEntry, Feeder, FeederDocument, FeederError, NodeEntry,
    ValidationReport, Violation,
};
pub use dot::export_dot;
pub use generate::{random_costs, random_radial_tree, GenerateError};
pub use tree::{Edge, NodeId, RadialTree, TreeError};
