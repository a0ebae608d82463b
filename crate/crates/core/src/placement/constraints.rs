use std::collections::BTreeSet;
use std::fmt;

use super::types::{Placement, PlacementError};
use crate::cost::Cost;
use crate::feeder::{CostModel, Edge, NodeId, RadialTree};
use crate::oracle::measured_sets;

/// Which placement constraints fail.
///
/// * root: every child edge of the root is monitored;
/// * branch: a non-root node of degree `d >= 3` has at least `d - 2` of its
///   child edges monitored;
/// * zero-injection: a zero-injection node carries a node sensor or its
///   parent edge carries a line sensor.
///
/// A child edge `(k, j)` counts as monitored when `k` or `j` has a node
/// sensor or the edge has a line sensor. Each child edge counts once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintReport {
    pub root_ok: bool,
    pub branch_violations: BTreeSet<NodeId>,
    pub zero_injection_violations: BTreeSet<NodeId>,
}

impl ConstraintReport {
    /// True iff the placement is feasible.
    pub fn is_empty(&self) -> bool {
        self.root_ok && self.branch_violations.is_empty() && self.zero_injection_violations.is_empty()
    }
}

impl fmt::Display for ConstraintReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return writeln!(f, "feasible: all constraints hold");
        }
        if !self.root_ok {
            writeln!(f, "root constraint violated: not every child edge of the root is monitored")?;
        }
        for k in &self.branch_violations {
            writeln!(f, "branch constraint violated at node {k}")?;
        }
        for k in &self.zero_injection_violations {
            writeln!(f, "zero-injection constraint violated at node {k}")?;
        }
        Ok(())
    }
}

fn monitored_children(tree: &RadialTree, placement: &Placement, k: NodeId) -> usize {
    tree.children(k)
        .filter(|&j| placement.has_node(j) || placement.has_line(Edge { parent: k, child: j }))
        .count()
}

/// Evaluates every constraint of the placement problem.
pub fn check_constraints(tree: &RadialTree, placement: &Placement) -> ConstraintReport {
    let root = tree.root();
    let root_ok = placement.has_node(root) || monitored_children(tree, placement, root) >= tree.child_count(root);

    let branch_violations = tree
        .nodes()
        .filter(|&k| k != root && tree.degree(k) >= 3 && !placement.has_node(k))
        .filter(|&k| monitored_children(tree, placement, k) < tree.degree(k) - 2)
        .collect();

    let zero_injection_violations = tree
        .zero_injection()
        .filter(|&k| {
            let parent_line = tree.parent_edge(k).is_some_and(|e| placement.has_line(e));
            !(placement.has_node(k) || parent_line)
        })
        .collect();

    ConstraintReport { root_ok, branch_violations, zero_injection_violations }
}

/// Total cost `sum a_i over V_P + sum b_(i,j) over E_P`.
pub fn placement_cost(placement: &Placement, costs: &CostModel) -> Result<Cost, PlacementError> {
    let mut total = Cost::zero();
    for &n in &placement.node_sensors {
        total += costs.node(n).ok_or(PlacementError::UnknownNode(n))?;
    }
    for &e in &placement.line_sensors {
        total += costs.line(e).ok_or(PlacementError::UnknownEdge(e))?;
    }
    Ok(total)
}

/// Subset relation between placements, judged on what they measure: every
/// measured flow and every measured voltage of `p1` is also measured by `p2`.
pub fn is_subset_placement(p1: &Placement, p2: &Placement, tree: &RadialTree) -> bool {
    let m1 = measured_sets(tree, p1);
    let m2 = measured_sets(tree, p2);
    m1.flow_edges.is_subset(&m2.flow_edges) && m1.voltage_nodes.is_subset(&m2.voltage_nodes)
}
