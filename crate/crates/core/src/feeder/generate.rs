use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::costs::CostModel;
use super::tree::{NodeId, RadialTree};
use crate::cost::Cost;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenerateError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// A seeded random radial feeder on nodes `1..=n`, rooted at 1.
///
/// Each node `i >= 2` attaches to a uniformly chosen earlier node that still
/// has fewer than `max_children` children, so the result is deterministic
/// for a given seed. Exactly `floor(z_fraction * (n - 1))` non-root nodes are
/// marked zero-injection.
pub fn random_radial_tree(n: usize, seed: u64, max_children: usize, z_fraction: f64) -> Result<RadialTree, GenerateError> {
    if n == 0 {
        return Err(GenerateError::InvalidParameter("n must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&z_fraction) {
        return Err(GenerateError::InvalidParameter(format!("z_fraction {z_fraction} outside [0, 1)")));
    }
    if max_children == 0 && n > 1 {
        return Err(GenerateError::InvalidParameter("max_children must be positive".into()));
    }
    if n > u32::MAX as usize {
        return Err(GenerateError::InvalidParameter("n too large".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut open: Vec<u32> = vec![1];
    let mut child_count = vec![0usize; n + 1];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for i in 2..=n as u32 {
        let slot = rng.random_range(0..open.len());
        let p = open[slot];
        edges.push((NodeId(p), NodeId(i)));
        child_count[p as usize] += 1;
        if child_count[p as usize] >= max_children {
            open.swap_remove(slot);
        }
        open.push(i);
    }
    let z_count = (z_fraction * (n - 1) as f64).floor() as usize;
    let mut candidates: Vec<u32> = (2..=n as u32).collect();
    candidates.shuffle(&mut rng);
    let zero: Vec<NodeId> = candidates.into_iter().take(z_count).map(NodeId).collect();
    RadialTree::new(NodeId(1), (1..=n as u32).map(NodeId), edges, zero)
        .map_err(|e| GenerateError::InvalidParameter(e.to_string()))
}

/// Seeded heterogeneous costs: every entry is `k / denom` with `k` drawn
/// uniformly from `1..=max_numer`.
pub fn random_costs(tree: &RadialTree, seed: u64, max_numer: i64, denom: i64) -> CostModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut costs = CostModel::new();
    for id in tree.nodes() {
        costs.set_node(id, Cost::from_ratio(rng.random_range(1..=max_numer), denom));
    }
    for e in tree.edges() {
        costs.set_line(e, Cost::from_ratio(rng.random_range(1..=max_numer), denom));
    }
    costs
}
