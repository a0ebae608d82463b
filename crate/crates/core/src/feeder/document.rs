//! The feeder file format.
//!
//! A feeder is a TOML document:
//!
//! ```toml
//! name = "example"
//! root = 1
//!
//! [[nodes]]
//! id = 1
//! node_cost = 2
//!
//! [[nodes]]
//! id = 2
//! zero_injection = true
//! node_cost = "2.5"
//!
//! [[edges]]
//! from = 1
//! to = 2
//! line_cost = 0.3
//! ```
//!
//! Costs may be written as integers, decimals or quoted `p/q` fractions and
//! are read exactly. Edges may be listed in either orientation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::costs::CostModel;
use super::tree::{Edge, NodeId, RadialTree, TreeError};
use crate::cost::Cost;

fn default_root() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeederDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default = "default_root")]
    pub root: u32,
    #[serde(default)]
    pub nodes: Vec<NodeEntry>,
    #[serde(default)]
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeEntry {
    pub id: u32,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub zero_injection: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_cost: Option<Cost>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub from: u32,
    pub to: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line_cost: Option<Cost>,
}

/// Where a cost entry lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CostSite {
    Node(NodeId),
    Line(Edge),
}

impl fmt::Display for CostSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostSite::Node(n) => write!(f, "node {n}"),
            CostSite::Line(e) => write!(f, "line {e}"),
        }
    }
}

/// One broken invariant of a feeder instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateId(NodeId),
    DanglingEdge(NodeId, NodeId),
    UnknownRoot(NodeId),
    NotATree(String),
    RootHasZeroInjection(NodeId),
    NegativeCost(CostSite),
    MissingCost(CostSite),
    UnknownCostSite(CostSite),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateId(id) => write!(f, "DuplicateId: node {id} declared more than once"),
            Violation::DanglingEdge(a, b) => write!(f, "DanglingEdge: edge ({a},{b}) references an undeclared node"),
            Violation::UnknownRoot(id) => write!(f, "UnknownRoot: root {id} is not a declared node"),
            Violation::NotATree(why) => write!(f, "NotATree: {why}"),
            Violation::RootHasZeroInjection(id) => write!(f, "RootHasZeroInjection: root {id} is marked zero-injection"),
            Violation::NegativeCost(site) => write!(f, "NegativeCost: {site}"),
            Violation::MissingCost(site) => write!(f, "MissingCost: {site}"),
            Violation::UnknownCostSite(site) => write!(f, "UnknownCostSite: {site} is not part of the tree"),
        }
    }
}

impl From<TreeError> for Violation {
    fn from(e: TreeError) -> Self {
        match e {
            TreeError::DuplicateId(id) => Violation::DuplicateId(id),
            TreeError::DanglingEdge(a, b) => Violation::DanglingEdge(a, b),
            TreeError::UnknownRoot(id) => Violation::UnknownRoot(id),
            TreeError::NotATree(s) => Violation::NotATree(s),
            TreeError::RootHasZeroInjection(id) => Violation::RootHasZeroInjection(id),
            TreeError::UnknownNode(id) => Violation::UnknownCostSite(CostSite::Node(id)),
        }
    }
}

/// Every violated invariant of an instance; empty iff valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, pred: impl Fn(&Violation) -> bool) -> bool {
        self.violations.iter().any(pred)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FeederError {
    #[error("feeder document is malformed: {0}")]
    Syntax(String),
    #[error("feeder failed validation:\n{0}")]
    Invalid(ValidationReport),
}

/// A parsed, validated feeder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feeder {
    pub name: Option<String>,
    pub tree: RadialTree,
    pub costs: CostModel,
}

impl FeederDocument {
    pub fn from_toml(text: &str) -> Result<Self, FeederError> {
        toml::from_str(text).map_err(|e| FeederError::Syntax(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("feeder documents always serialize")
    }

    /// Reports every violation of the document, including those that would
    /// stop a tree from being built at all.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut declared = BTreeSet::new();
        for n in &self.nodes {
            if !declared.insert(n.id) {
                report.violations.push(Violation::DuplicateId(NodeId(n.id)));
            }
        }
        let root = NodeId(self.root);
        if !declared.contains(&self.root) {
            report.violations.push(Violation::UnknownRoot(root));
        }
        for n in &self.nodes {
            if n.zero_injection && n.id == self.root {
                report.violations.push(Violation::RootHasZeroInjection(root));
            }
            match &n.node_cost {
                None => report.violations.push(Violation::MissingCost(CostSite::Node(NodeId(n.id)))),
                Some(c) if c.is_negative() => report.violations.push(Violation::NegativeCost(CostSite::Node(NodeId(n.id)))),
                Some(_) => {}
            }
        }
        let mut dangling = false;
        for e in &self.edges {
            if !declared.contains(&e.from) || !declared.contains(&e.to) {
                report.violations.push(Violation::DanglingEdge(NodeId(e.from), NodeId(e.to)));
                dangling = true;
            }
        }
        // Structural checks only make sense once ids and edges resolve.
        if !dangling && report.violations.iter().all(|v| !matches!(v, Violation::DuplicateId(_) | Violation::UnknownRoot(_))) {
            match self.build_tree_ignoring_zero_injection() {
                Ok(tree) => {
                    for e in &self.edges {
                        let edge = orient(&tree, e);
                        match &e.line_cost {
                            None => report.violations.push(Violation::MissingCost(CostSite::Line(edge))),
                            Some(c) if c.is_negative() => report.violations.push(Violation::NegativeCost(CostSite::Line(edge))),
                            Some(_) => {}
                        }
                    }
                }
                Err(e) => report.violations.push(e.into()),
            }
        }
        report
    }

    fn build_tree_ignoring_zero_injection(&self) -> Result<RadialTree, TreeError> {
        RadialTree::new(
            NodeId(self.root),
            self.nodes.iter().map(|n| NodeId(n.id)),
            self.edges.iter().map(|e| (NodeId(e.from), NodeId(e.to))),
            std::iter::empty(),
        )
    }

    /// Validates and converts into a tree plus cost model.
    pub fn into_feeder(self) -> Result<Feeder, FeederError> {
        let report = self.validate();
        if !report.is_empty() {
            return Err(FeederError::Invalid(report));
        }
        let tree = RadialTree::new(
            NodeId(self.root),
            self.nodes.iter().map(|n| NodeId(n.id)),
            self.edges.iter().map(|e| (NodeId(e.from), NodeId(e.to))),
            self.nodes.iter().filter(|n| n.zero_injection).map(|n| NodeId(n.id)),
        )
        .map_err(|e| FeederError::Invalid(ValidationReport { violations: vec![e.into()] }))?;
        let mut costs = CostModel::new();
        for n in &self.nodes {
            costs.set_node(NodeId(n.id), n.node_cost.clone().expect("validated"));
        }
        for e in &self.edges {
            costs.set_line(orient(&tree, e), e.line_cost.clone().expect("validated"));
        }
        Ok(Feeder { name: self.name, tree, costs })
    }

    /// The canonical document for a tree and its costs: nodes ascending,
    /// edges ascending by `(parent, child)` and oriented parent to child.
    pub fn from_parts(name: Option<String>, tree: &RadialTree, costs: &CostModel) -> Self {
        FeederDocument {
            name,
            root: tree.root().0,
            nodes: tree
                .nodes()
                .map(|id| NodeEntry { id: id.0, zero_injection: tree.is_zero_injection(id), node_cost: costs.node(id).cloned() })
                .collect(),
            edges: tree
                .edges()
                .into_iter()
                .map(|e| EdgeEntry { from: e.parent.0, to: e.child.0, line_cost: costs.line(e).cloned() })
                .collect(),
        }
    }
}

fn orient(tree: &RadialTree, e: &EdgeEntry) -> Edge {
    let fwd = Edge::new(e.from, e.to);
    if tree.has_edge(fwd) {
        fwd
    } else {
        Edge::new(e.to, e.from)
    }
}

/// Parses and validates a feeder document.
pub fn parse_feeder(text: &str) -> Result<Feeder, FeederError> {
    FeederDocument::from_toml(text)?.into_feeder()
}

/// Serializes a tree and its costs; `parse_feeder` inverts this exactly.
pub fn serialize_feeder(name: Option<&str>, tree: &RadialTree, costs: &CostModel) -> String {
    FeederDocument::from_parts(name.map(str::to_string), tree, costs).to_toml()
}

/// Checks a cost model against a tree.
///
/// Covers cost completeness and sign, entries that name no node or edge of the
/// tree, and the root's zero-injection flag.
pub fn validate(tree: &RadialTree, costs: &CostModel) -> ValidationReport {
    let mut report = ValidationReport::default();
    if tree.is_zero_injection(tree.root()) {
        report.violations.push(Violation::RootHasZeroInjection(tree.root()));
    }
    for id in tree.nodes() {
        match costs.node(id) {
            None => report.violations.push(Violation::MissingCost(CostSite::Node(id))),
            Some(c) if c.is_negative() => report.violations.push(Violation::NegativeCost(CostSite::Node(id))),
            Some(_) => {}
        }
    }
    for e in tree.edges() {
        match costs.line(e) {
            None => report.violations.push(Violation::MissingCost(CostSite::Line(e))),
            Some(c) if c.is_negative() => report.violations.push(Violation::NegativeCost(CostSite::Line(e))),
            Some(_) => {}
        }
    }
    let extra_nodes: BTreeMap<_, _> = costs.node_costs().iter().filter(|(id, _)| !tree.contains(**id)).collect();
    for id in extra_nodes.keys() {
        report.violations.push(Violation::UnknownCostSite(CostSite::Node(**id)));
    }
    for e in costs.line_costs().keys().filter(|e| !tree.has_edge(**e)) {
        report.violations.push(Violation::UnknownCostSite(CostSite::Line(*e)));
    }
    report
}
