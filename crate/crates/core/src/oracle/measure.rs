use std::collections::BTreeSet;

use crate::feeder::{Edge, NodeId, RadialTree};
use crate::placement::Placement;

/// What a placement observes: edge flows `S_P` and node voltages `M_P`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MeasuredSets {
    pub flow_edges: BTreeSet<Edge>,
    pub voltage_nodes: BTreeSet<NodeId>,
}

/// A node sensor at `i` reads the flow on every line incident to `i` and the
/// voltage at `i`. A line sensor on `(i, j)` sits at the `j` end of the line
/// and reads its flow and the voltage at `j`. Sensors that do not refer to
/// the tree are ignored.
pub fn measured_sets(tree: &RadialTree, placement: &Placement) -> MeasuredSets {
    let mut m = MeasuredSets::default();
    for &i in placement.node_sensors.iter().filter(|&&i| tree.contains(i)) {
        m.voltage_nodes.insert(i);
        m.flow_edges.extend(tree.parent_edge(i));
        m.flow_edges.extend(tree.children(i).map(|c| Edge { parent: i, child: c }));
    }
    for &e in placement.line_sensors.iter().filter(|&&e| tree.has_edge(e)) {
        m.flow_edges.insert(e);
        m.voltage_nodes.insert(e.child);
    }
    m
}
