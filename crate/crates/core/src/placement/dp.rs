//! Bottom-up dynamic-programming placement.
//!
//! The sweep visits the critical nodes (root, branching nodes and
//! zero-injection nodes) one depth level at a time, deepest first. At each
//! critical node `q` the sub-problem "cheapest sensors that satisfy the
//! constraints at `q`, given everything already placed below" has two
//! competing answers: a node sensor at `q`, or sensors on the unmonitored
//! children of `q`. The shared [`Placement`] accumulator carries the solved
//! sub-problems upward, so each step only inspects the direct children of
//! `q`.
//!
//! Child sensors are priced by the tie cost `m_i = min(a_i, b_(p_i,i))`, the
//! cheaper way of monitoring the edge into child `i`.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::types::{Placement, PlacementError, Sensor};
use crate::cost::Cost;
use crate::feeder::{CostModel, Edge, NodeId, RadialTree};

/// Root, nodes of degree at least 3, and zero-injection nodes.
pub fn critical_set(tree: &RadialTree) -> BTreeSet<NodeId> {
    let root = tree.root();
    tree.nodes()
        .filter(|&i| i == root || tree.degree(i) >= 3 || tree.is_zero_injection(i))
        .collect()
}

/// `m_i = min(a_i, b_(p_i, i))`.
pub fn tie_cost(tree: &RadialTree, costs: &CostModel, i: NodeId) -> Result<Cost, PlacementError> {
    if !tree.contains(i) {
        return Err(PlacementError::UnknownNode(i));
    }
    let edge = tree.parent_edge(i).ok_or(PlacementError::RootHasNoParentEdge(i))?;
    let a = costs.node(i).ok_or(PlacementError::UnknownNode(i))?;
    let b = costs.line(edge).ok_or(PlacementError::UnknownEdge(edge))?;
    Ok(a.min(b).clone())
}

/// Children of `q` with neither a node sensor nor a line sensor on their
/// parent edge, ascending by id.
pub fn no_sensor_child(tree: &RadialTree, placement: &Placement, q: NodeId) -> Vec<NodeId> {
    tree.children(q)
        .filter(|&i| !placement.has_node(i) && !placement.has_line(Edge { parent: q, child: i }))
        .collect()
}

/// Picks the child with the largest tie cost (ties: least degree, then least
/// id) and returns it together with the rest of the list.
pub fn find_max(list: &[NodeId], tree: &RadialTree, costs: &CostModel) -> Result<(NodeId, Vec<NodeId>), PlacementError> {
    let mut best: Option<(NodeId, Cost)> = None;
    for &i in list {
        let m = tie_cost(tree, costs, i)?;
        let better = match &best {
            None => true,
            Some((j, mj)) => match m.cmp(mj) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => (tree.degree(i), i) < (tree.degree(*j), *j),
            },
        };
        if better {
            best = Some((i, m));
        }
    }
    let (maxnode, _) = best.ok_or(PlacementError::EmptyList)?;
    Ok((maxnode, list.iter().copied().filter(|&i| i != maxnode).collect()))
}

/// The branch of the placement step that fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Root: one node sensor is no dearer than covering its open children.
    RootNodeSensor,
    /// Root: cover each open child edge with its cheaper sensor.
    RootChildren,
    /// Zero-injection node with at most one open child: node sensor at `q`.
    ZeroInjectionNodeSensor,
    /// Zero-injection node with at most one open child: line on its parent edge.
    ZeroInjectionParentLine,
    /// Node sensor at `q` beats covering all but one open child.
    NodeSensor,
    /// Cover all but the dearest open child (plus the parent edge of a
    /// zero-injection `q`).
    ChildSensors,
    /// Constraints at `q` already hold; nothing added.
    Satisfied,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub branch: Branch,
    pub added: Vec<Sensor>,
}

fn cheaper_child_sensor(tree: &RadialTree, costs: &CostModel, q: NodeId, i: NodeId) -> Sensor {
    // Prefer the node sensor when both cost the same.
    let edge = Edge { parent: q, child: i };
    debug_assert!(tree.has_edge(edge));
    if costs.a(i) <= costs.b(edge) {
        Sensor::Node(i)
    } else {
        Sensor::Line(edge)
    }
}

fn sum_tie_costs(tree: &RadialTree, costs: &CostModel, list: &[NodeId]) -> Result<Cost, PlacementError> {
    list.iter().map(|&i| tie_cost(tree, costs, i)).sum()
}

/// Solves the sub-problem at critical node `q`, adding sensors to `placement`
/// (never removing any). Every critical node strictly deeper than `q` must
/// already have been processed.
///
/// # Panics
/// If `costs` lacks an entry the step needs; validate the instance first.
pub fn placement_step(
    tree: &RadialTree,
    costs: &CostModel,
    placement: &mut Placement,
    q: NodeId,
) -> Result<StepOutcome, PlacementError> {
    if !tree.contains(q) {
        return Err(PlacementError::UnknownNode(q));
    }
    let root = tree.root();
    let is_zero = tree.is_zero_injection(q);
    if !(q == root || is_zero || tree.degree(q) >= 3) {
        return Err(PlacementError::NodeNotCritical(q));
    }

    let list = no_sensor_child(tree, placement, q);
    let mut added = Vec::new();
    let mut place = |placement: &mut Placement, s: Sensor| {
        if placement.add(s) {
            added.push(s);
        }
    };

    let branch = if q == root {
        if !list.is_empty() && costs.a(q) <= &sum_tie_costs(tree, costs, &list)? {
            place(placement, Sensor::Node(q));
            Branch::RootNodeSensor
        } else {
            for &i in &list {
                place(placement, cheaper_child_sensor(tree, costs, q, i));
            }
            Branch::RootChildren
        }
    } else if is_zero && list.len() <= 1 {
        let parent_edge = tree.parent_edge(q).expect("non-root");
        if costs.a(q) <= costs.b(parent_edge) {
            place(placement, Sensor::Node(q));
            Branch::ZeroInjectionNodeSensor
        } else {
            place(placement, Sensor::Line(parent_edge));
            Branch::ZeroInjectionParentLine
        }
    } else if list.is_empty() {
        Branch::Satisfied
    } else {
        let (_, list2) = find_max(&list, tree, costs)?;
        let children_cost = sum_tie_costs(tree, costs, &list2)?;
        let parent_edge = tree.parent_edge(q).expect("non-root");
        let competing = if is_zero { children_cost + costs.b(parent_edge) } else { children_cost };
        if costs.a(q) <= &competing {
            place(placement, Sensor::Node(q));
            Branch::NodeSensor
        } else {
            for &i in &list2 {
                place(placement, cheaper_child_sensor(tree, costs, q, i));
            }
            // The node-sensor alternative lost above, so the zero-injection
            // constraint at q is met by the parent line.
            if is_zero {
                place(placement, Sensor::Line(parent_edge));
            }
            Branch::ChildSensors
        }
    };
    Ok(StepOutcome { branch, added })
}

/// One processed critical node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub node: NodeId,
    pub branch: Branch,
    #[serde(default)]
    pub added_nodes: Vec<NodeId>,
    #[serde(default)]
    pub added_lines: Vec<[u32; 2]>,
}

/// One depth level of the sweep: iteration `k` searches depth `f_max - k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceIteration {
    pub iteration: usize,
    pub depth: usize,
    #[serde(default)]
    pub steps: Vec<TraceStep>,
}

impl TraceIteration {
    /// The critical nodes processed at this depth (`Q_k`).
    pub fn queue(&self) -> Vec<NodeId> {
        self.steps.iter().map(|s| s.node).collect()
    }
}

/// Audit record of a placement sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DpTrace {
    #[serde(default)]
    pub iterations: Vec<TraceIteration>,
}

impl DpTrace {
    pub fn depths(&self) -> Vec<usize> {
        self.iterations.iter().map(|it| it.depth).collect()
    }

    pub fn step_count(&self) -> usize {
        self.iterations.iter().map(|it| it.steps.len()).sum()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("traces always serialize")
    }

    pub fn from_toml(text: &str) -> Result<Self, PlacementError> {
        toml::from_str(text).map_err(|e| PlacementError::Syntax(e.to_string()))
    }
}

/// Runs the bottom-up sweep and returns the placement with its trace.
///
/// Depths `f_max - 1` down to `0` are searched, ascending node id within a
/// depth. Nodes at depth `f_max` are leaves, so the only critical nodes that
/// can sit there are zero-injection leaves; when any exist, depth `f_max` is
/// searched first as iteration 0.
///
/// # Panics
/// If `costs` does not cover the tree; see [`crate::feeder::validate`].
pub fn dp_place(tree: &RadialTree, costs: &CostModel) -> (Placement, DpTrace) {
    let f_max = tree.max_depth();
    let mut by_depth: Vec<Vec<NodeId>> = vec![Vec::new(); f_max + 1];
    for &i in tree.bfs_order() {
        let id = tree.id_at(i);
        if i == tree.root_idx() || tree.zero_idx(i) || tree.children_idx(i).len() >= 2 {
            by_depth[tree.depth_idx(i)].push(id);
        }
    }
    for level in &mut by_depth {
        level.sort_unstable();
    }

    let first_k = if f_max > 0 && !by_depth[f_max].is_empty() { 0 } else { 1 };
    let mut placement = Placement::default();
    let mut trace = DpTrace::default();
    for k in first_k..=f_max {
        let depth = f_max - k;
        let mut iteration = TraceIteration { iteration: k, depth, steps: Vec::new() };
        for &q in &by_depth[depth] {
            let outcome = placement_step(tree, costs, &mut placement, q).expect("critical node on a validated instance");
            let mut step = TraceStep { node: q, branch: outcome.branch, added_nodes: Vec::new(), added_lines: Vec::new() };
            for s in outcome.added {
                match s {
                    Sensor::Node(n) => step.added_nodes.push(n),
                    Sensor::Line(e) => step.added_lines.push([e.parent.0, e.child.0]),
                }
            }
            iteration.steps.push(step);
        }
        trace.iterations.push(iteration);
    }
    (placement, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::placement::{check_constraints, placement_cost};

    fn path(n: u32) -> RadialTree {
        RadialTree::new(NodeId(1), (1..=n).map(NodeId), (2..=n).map(|i| (NodeId(i - 1), NodeId(i))), []).unwrap()
    }

    #[test]
    fn critical_sets() {
        let f = corpus::nine_bus();
        assert_eq!(critical_set(&f.tree), BTreeSet::from([NodeId(1), NodeId(3)]));
        assert_eq!(critical_set(&path(5)), BTreeSet::from([NodeId(1)]));
        let z = f.tree.with_zero_injection([NodeId(9)]).unwrap();
        assert_eq!(critical_set(&z), BTreeSet::from([NodeId(1), NodeId(3), NodeId(9)]));
    }

    #[test]
    fn tie_costs() {
        let f = corpus::nine_bus();
        assert_eq!(tie_cost(&f.tree, &f.costs, NodeId(6)).unwrap(), Cost::from_ratio(3, 10));
        assert_eq!(tie_cost(&f.tree, &f.costs, NodeId(5)).unwrap(), Cost::from_integer(1));
        assert_eq!(tie_cost(&f.tree, &f.costs, NodeId(1)), Err(PlacementError::RootHasNoParentEdge(NodeId(1))));
        let mut c = f.costs.clone();
        c.set_line(Edge::new(3, 5), Cost::from_integer(2));
        assert_eq!(tie_cost(&f.tree, &c, NodeId(5)).unwrap(), Cost::from_integer(2));
        c.set_line(Edge::new(3, 5), Cost::zero());
        assert_eq!(tie_cost(&f.tree, &c, NodeId(5)).unwrap(), Cost::zero());
    }

    #[test]
    fn no_sensor_children() {
        let f = corpus::nine_bus();
        let t = &f.tree;
        assert_eq!(no_sensor_child(t, &Placement::default(), NodeId(3)), vec![NodeId(5), NodeId(6), NodeId(7)]);
        let p = Placement::new([], [Edge::new(3, 6), Edge::new(3, 7)]);
        assert_eq!(no_sensor_child(t, &p, NodeId(1)), vec![NodeId(2), NodeId(3)]);
        let all = Placement::new([NodeId(5), NodeId(6), NodeId(7)], []);
        assert!(no_sensor_child(t, &all, NodeId(3)).is_empty());
    }

    #[test]
    fn find_max_cases() {
        let f = corpus::nine_bus();
        let t = &f.tree;
        let (m, rest) = find_max(&[NodeId(5), NodeId(6), NodeId(7)], t, &f.costs).unwrap();
        assert_eq!((m, rest), (NodeId(5), vec![NodeId(6), NodeId(7)]));
        // Equal tie costs: node 7 (leaf, degree 1) beats node 6 (degree 2).
        let uniform = CostModel::uniform(t, Cost::from_integer(2), Cost::from_integer(1));
        let (m, rest) = find_max(&[NodeId(6), NodeId(7)], t, &uniform).unwrap();
        assert_eq!((m, rest), (NodeId(7), vec![NodeId(6)]));
        let (m, rest) = find_max(&[NodeId(4)], t, &uniform).unwrap();
        assert_eq!((m, rest), (NodeId(4), vec![]));
        assert_eq!(find_max(&[], t, &uniform), Err(PlacementError::EmptyList));
    }

    #[test]
    fn nine_bus_steps() {
        let f = corpus::nine_bus();
        let t = &f.tree;
        let mut p = Placement::default();
        let s = placement_step(t, &f.costs, &mut p, NodeId(3)).unwrap();
        assert_eq!(s.branch, Branch::ChildSensors);
        assert_eq!(p, Placement::new([], [Edge::new(3, 6), Edge::new(3, 7)]));
        // a_1 = 2 equals b_(1,2) + b_(1,3): the node sensor wins the tie.
        let s = placement_step(t, &f.costs, &mut p, NodeId(1)).unwrap();
        assert_eq!(s.branch, Branch::RootNodeSensor);
        assert_eq!(p, Placement::new([NodeId(1)], [Edge::new(3, 6), Edge::new(3, 7)]));
        assert_eq!(placement_step(t, &f.costs, &mut p, NodeId(2)), Err(PlacementError::NodeNotCritical(NodeId(2))));
    }

    #[test]
    fn zero_injection_leaf_prefers_cheaper_parent_line() {
        let f = corpus::nine_bus();
        let t = f.tree.with_zero_injection([NodeId(9)]).unwrap();
        let mut p = Placement::default();
        let s = placement_step(&t, &f.costs, &mut p, NodeId(9)).unwrap();
        assert_eq!(s.branch, Branch::ZeroInjectionParentLine);
        assert_eq!(s.added, vec![Sensor::Line(Edge::new(6, 9))]);
    }

    #[test]
    fn zero_injection_branching_node_gets_parent_line_on_child_branch() {
        // Node 3 is zero-injection with three open children; a node sensor
        // (10) loses to two child lines plus its parent line (3).
        let f = corpus::nine_bus();
        let t = f.tree.with_zero_injection([NodeId(3)]).unwrap();
        let mut c = CostModel::uniform(&t, Cost::from_integer(10), Cost::from_integer(1));
        c.set_node(NodeId(1), Cost::from_integer(2));
        let (p, _) = dp_place(&t, &c);
        assert!(check_constraints(&t, &p).is_empty(), "{p}");
        assert!(p.has_line(Edge::new(1, 3)));
    }

    #[test]
    fn nine_bus_walkthrough() {
        let f = corpus::nine_bus();
        let (p, trace) = dp_place(&f.tree, &f.costs);
        assert_eq!(p, Placement::new([NodeId(1)], [Edge::new(3, 6), Edge::new(3, 7)]));
        assert_eq!(placement_cost(&p, &f.costs).unwrap(), Cost::from_ratio(26, 10));
        assert_eq!(trace.depths(), vec![2, 1, 0]);
        assert_eq!(trace.iterations[1].queue(), vec![NodeId(3)]);
        assert_eq!(trace.iterations[2].queue(), vec![NodeId(1)]);
        assert_eq!(trace.iterations.iter().map(|i| i.iteration).collect::<Vec<_>>(), vec![1, 2, 3]);
        let back = DpTrace::from_toml(&trace.to_toml()).unwrap();
        assert_eq!(back, trace);
    }

    #[test]
    fn three_node_path() {
        let t = path(3);
        let c = CostModel::uniform(&t, Cost::from_integer(2), Cost::from_integer(1));
        let (p, _) = dp_place(&t, &c);
        assert_eq!(p, Placement::new([], [Edge::new(1, 2)]));
        assert_eq!(placement_cost(&p, &c).unwrap(), Cost::from_integer(1));
    }

    #[test]
    fn single_node_needs_nothing() {
        let t = path(1);
        let c = CostModel::uniform(&t, Cost::from_integer(2), Cost::from_integer(1));
        let (p, trace) = dp_place(&t, &c);
        assert!(p.is_empty());
        assert!(trace.iterations.is_empty());
    }

    #[test]
    fn zero_injection_leaf_at_max_depth_is_covered() {
        let t = path(3).with_zero_injection([NodeId(3)]).unwrap();
        let c = CostModel::uniform(&t, Cost::from_integer(2), Cost::from_integer(1));
        let (p, trace) = dp_place(&t, &c);
        assert!(check_constraints(&t, &p).is_empty(), "{p}");
        assert_eq!(trace.depths(), vec![2, 1, 0]);
        assert_eq!(trace.iterations[0].iteration, 0);
    }
}
