//! Independent checks on placements: outage hypotheses, symbolic
//! measurement signatures, pairwise distinguishability and an exhaustive
//! minimum-cost search.
//!
//! Flows are modeled as symbolic sums of downstream loads (lossless,
//! linearized power flow), voltages as an energized flag. Sensors inside a
//! de-energized island read zero.

mod closure;
pub mod compact;
mod exhaustive;
mod hypotheses;
mod identify;
pub mod lp;
mod measure;
mod signature;

pub use closure::flow_closure;
pub use exhaustive::{
    exhaustive_min_cost, exhaustive_min_cost_capped, Feasibility, DEFAULT_BRUTE_FORCE_CAP, MAX_BRUTE_FORCE_NODES,
};
pub use hypotheses::{
    enumerate_hypotheses, enumerate_hypotheses_capped, outage_forest, OutageForest, OutageHypothesis,
    DEFAULT_HYPOTHESIS_CAP,
};
pub use identify::{
    is_outage_identifiable, is_outage_identifiable_capped, Identifiability, Mode, Witness, DEFAULT_MAX_OUTAGES,
};
pub use measure::{measured_sets, MeasuredSets};
pub use signature::{
    distinguishable_generic, distinguishable_worst_case, load_nodes, signature, worst_case_loads, MeasurementSignature,
};

use crate::placement::PlacementError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("hypothesis count exceeds the cap of {cap}")]
    CombinatorialLimit { cap: usize },
    #[error("signatures cover different measurement sites")]
    MismatchedMeasuredSets,
    #[error("instance has {nodes} nodes; the limit is {cap}")]
    InstanceTooLarge { nodes: usize, cap: usize },
    #[error("scaled costs do not fit in 128 bits")]
    CostOverflow,
    #[error(transparent)]
    Placement(#[from] PlacementError),
}
