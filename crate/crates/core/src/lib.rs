//! Minimum-cost sensor placement for outage identifiability on radial
//! distribution feeders.
//!
//! * [`feeder`]: topologies, costs, the TOML feeder format, random instances.
//! * [`placement`]: the placement constraints and the bottom-up DP solver.
//! * [`oracle`]: brute-force and linear-feasibility checks of both.
//! * [`corpus`]: bundled feeders.
//!
//! ```
//! use feedersense::{corpus, placement::dp_place};
//!
//! let f = corpus::nine_bus();
//! let (placement, _trace) = dp_place(&f.tree, &f.costs);
//! assert_eq!(placement.to_string(), "V_P = {1}, E_P = {(3,6),(3,7)}");
//! ```

pub mod corpus;
pub mod cost;
pub mod feeder;
pub mod oracle;
pub mod placement;

pub use cost::Cost;
pub use feeder::{CostModel, Edge, Feeder, NodeId, RadialTree};
pub use placement::{dp_place, Placement};
