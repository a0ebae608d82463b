use std::collections::BTreeMap;

use super::tree::{Edge, NodeId, RadialTree};
use crate::cost::Cost;

/// Node-sensor costs `a_i` and line-sensor costs `b_(i,j)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CostModel {
    node_cost: BTreeMap<NodeId, Cost>,
    line_cost: BTreeMap<Edge, Cost>,
}

impl CostModel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every node costs `a`, every internal edge costs `b`.
    pub fn uniform(tree: &RadialTree, a: Cost, b: Cost) -> Self {
        CostModel {
            node_cost: tree.nodes().map(|id| (id, a.clone())).collect(),
            line_cost: tree.edges().into_iter().map(|e| (e, b.clone())).collect(),
        }
    }

    pub fn set_node(&mut self, id: NodeId, cost: Cost) -> &mut Self {
        self.node_cost.insert(id, cost);
        self
    }

    pub fn set_line(&mut self, edge: Edge, cost: Cost) -> &mut Self {
        self.line_cost.insert(edge, cost);
        self
    }

    pub fn node(&self, id: NodeId) -> Option<&Cost> {
        self.node_cost.get(&id)
    }

    pub fn line(&self, edge: Edge) -> Option<&Cost> {
        self.line_cost.get(&edge)
    }

    pub fn node_costs(&self) -> &BTreeMap<NodeId, Cost> {
        &self.node_cost
    }

    pub fn line_costs(&self) -> &BTreeMap<Edge, Cost> {
        &self.line_cost
    }

    /// Multiplies every entry by `factor`.
    pub fn scaled(&self, factor: &Cost) -> Self {
        CostModel {
            node_cost: self.node_cost.iter().map(|(k, v)| (*k, v * factor)).collect(),
            line_cost: self.line_cost.iter().map(|(k, v)| (*k, v * factor)).collect(),
        }
    }

    /// Node cost lookup for algorithms that run on validated instances.
    ///
    /// # Panics
    /// If `id` has no entry; [`crate::validate`] reports this as `MissingCost`.
    pub(crate) fn a(&self, id: NodeId) -> &Cost {
        self.node_cost.get(&id).unwrap_or_else(|| panic!("no node cost for {id}"))
    }

    /// # Panics
    /// If `edge` has no entry.
    pub(crate) fn b(&self, edge: Edge) -> &Cost {
        self.line_cost.get(&edge).unwrap_or_else(|| panic!("no line cost for {edge}"))
    }
}
