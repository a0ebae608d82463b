use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::feeder::{Edge, NodeId, RadialTree};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlacementError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("unknown edge {0}")]
    UnknownEdge(Edge),
    #[error("node {0} is not in the critical set")]
    NodeNotCritical(NodeId),
    #[error("node {0} is the root and has no parent edge")]
    RootHasNoParentEdge(NodeId),
    #[error("cannot pick a maximum from an empty list")]
    EmptyList,
    #[error("placement document is malformed: {0}")]
    Syntax(String),
}

/// A single sensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sensor {
    Node(NodeId),
    Line(Edge),
}

impl fmt::Display for Sensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sensor::Node(n) => write!(f, "node sensor at {n}"),
            Sensor::Line(e) => write!(f, "line sensor on {e}"),
        }
    }
}

/// Node sensors `V_P` and line sensors `E_P`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Placement {
    pub node_sensors: BTreeSet<NodeId>,
    pub line_sensors: BTreeSet<Edge>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
struct PlacementDocument {
    #[serde(default)]
    node_sensors: Vec<u32>,
    #[serde(default)]
    line_sensors: Vec<[u32; 2]>,
}

impl Placement {
    pub fn new(nodes: impl IntoIterator<Item = NodeId>, lines: impl IntoIterator<Item = Edge>) -> Self {
        Placement { node_sensors: nodes.into_iter().collect(), line_sensors: lines.into_iter().collect() }
    }

    /// Node sensors at every node.
    pub fn all_nodes(tree: &RadialTree) -> Self {
        Placement::new(tree.nodes(), [])
    }

    /// Every node and every line sensored.
    pub fn everything(tree: &RadialTree) -> Self {
        Placement::new(tree.nodes(), tree.edges())
    }

    pub fn is_empty(&self) -> bool {
        self.node_sensors.is_empty() && self.line_sensors.is_empty()
    }

    pub fn sensor_count(&self) -> usize {
        self.node_sensors.len() + self.line_sensors.len()
    }

    pub fn has_node(&self, id: NodeId) -> bool {
        self.node_sensors.contains(&id)
    }

    pub fn has_line(&self, edge: Edge) -> bool {
        self.line_sensors.contains(&edge)
    }

    /// Returns true if the sensor was not already present.
    pub fn add(&mut self, sensor: Sensor) -> bool {
        match sensor {
            Sensor::Node(n) => self.node_sensors.insert(n),
            Sensor::Line(e) => self.line_sensors.insert(e),
        }
    }

    pub fn sensors(&self) -> impl Iterator<Item = Sensor> + '_ {
        self.node_sensors.iter().map(|&n| Sensor::Node(n)).chain(self.line_sensors.iter().map(|&e| Sensor::Line(e)))
    }

    /// Verifies every sensor refers to a node or edge of `tree`.
    pub fn check_against(&self, tree: &RadialTree) -> Result<(), PlacementError> {
        if let Some(&n) = self.node_sensors.iter().find(|n| !tree.contains(**n)) {
            return Err(PlacementError::UnknownNode(n));
        }
        if let Some(&e) = self.line_sensors.iter().find(|e| !tree.has_edge(**e)) {
            return Err(PlacementError::UnknownEdge(e));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        let doc = PlacementDocument {
            node_sensors: self.node_sensors.iter().map(|n| n.0).collect(),
            line_sensors: self.line_sensors.iter().map(|e| [e.parent.0, e.child.0]).collect(),
        };
        toml::to_string(&doc).expect("placement documents always serialize")
    }

    pub fn from_toml(text: &str) -> Result<Self, PlacementError> {
        let doc: PlacementDocument = toml::from_str(text).map_err(|e| PlacementError::Syntax(e.to_string()))?;
        Ok(Placement::new(
            doc.node_sensors.into_iter().map(NodeId),
            doc.line_sensors.into_iter().map(|[p, c]| Edge::new(p, c)),
        ))
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nodes: Vec<String> = self.node_sensors.iter().map(|n| n.to_string()).collect();
        let lines: Vec<String> = self.line_sensors.iter().map(|e| e.to_string()).collect();
        write!(f, "V_P = {{{}}}, E_P = {{{}}}", nodes.join(","), lines.join(","))
    }
}
