//! The placement problem: constraints, costs and the DP solver.

mod constraints;
mod dp;
mod types;

pub use constraints::{check_constraints, is_subset_placement, placement_cost, ConstraintReport};
pub use dp::{
    critical_set, dp_place, find_max, no_sensor_child, placement_step, tie_cost, Branch, DpTrace, StepOutcome,
    TraceIteration, TraceStep,
};
pub use types::{Placement, PlacementError, Sensor};
