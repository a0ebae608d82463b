use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::OracleError;
use crate::feeder::{Edge, NodeId, RadialTree};

/// Hypothesis lists larger than this are refused unless a caller raises the cap.
pub const DEFAULT_HYPOTHESIS_CAP: usize = 200_000;

/// A set of lines in outage.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct OutageHypothesis {
    pub outaged_edges: BTreeSet<Edge>,
}

impl OutageHypothesis {
    pub fn new(edges: impl IntoIterator<Item = Edge>) -> Self {
        OutageHypothesis { outaged_edges: edges.into_iter().collect() }
    }

    pub fn len(&self) -> usize {
        self.outaged_edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outaged_edges.is_empty()
    }

    /// No outaged edge lies downstream of another.
    pub fn is_antichain(&self, tree: &RadialTree) -> bool {
        self.outaged_edges
            .iter()
            .all(|&lower| !self.outaged_edges.iter().any(|&upper| tree.is_upstream(upper, lower)))
    }

    /// Drops every outaged edge that already sits in a de-energized island.
    pub fn antichain_reduction(&self, tree: &RadialTree) -> OutageHypothesis {
        OutageHypothesis::new(
            self.outaged_edges
                .iter()
                .copied()
                .filter(|&lower| !self.outaged_edges.iter().any(|&upper| tree.is_upstream(upper, lower))),
        )
    }

    fn order_key(&self) -> (usize, Vec<Edge>) {
        (self.len(), self.outaged_edges.iter().copied().collect())
    }
}

impl PartialOrd for OutageHypothesis {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Smaller hypotheses first, then lexicographic on the sorted edge list.
impl Ord for OutageHypothesis {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl fmt::Display for OutageHypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self.outaged_edges.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", edges.join(","))
    }
}

/// Every antichain of outaged lines with at most `max_outages` members
/// (unbounded when `None`), the empty hypothesis included, in the order of
/// [`OutageHypothesis`]'s `Ord`.
pub fn enumerate_hypotheses(tree: &RadialTree, max_outages: Option<usize>) -> Result<Vec<OutageHypothesis>, OracleError> {
    enumerate_hypotheses_capped(tree, max_outages, DEFAULT_HYPOTHESIS_CAP)
}

pub fn enumerate_hypotheses_capped(
    tree: &RadialTree,
    max_outages: Option<usize>,
    cap: usize,
) -> Result<Vec<OutageHypothesis>, OracleError> {
    // Preorder over dense indices; the edge into node v is identified by v.
    let mut preorder = Vec::with_capacity(tree.len());
    let mut stack = vec![tree.root_idx()];
    while let Some(v) = stack.pop() {
        preorder.push(v);
        stack.extend(tree.children_idx(v).iter().rev());
    }
    let mut span = vec![0usize; tree.len()];
    for &v in preorder.iter().rev() {
        span[v] = 1 + tree.children_idx(v).iter().map(|&c| span[c]).sum::<usize>();
    }
    let limit = max_outages.unwrap_or(usize::MAX);

    struct Walk<'a> {
        tree: &'a RadialTree,
        preorder: &'a [usize],
        span: &'a [usize],
        limit: usize,
        cap: usize,
        chosen: Vec<usize>,
        out: Vec<OutageHypothesis>,
    }
    impl Walk<'_> {
        fn go(&mut self, from: usize) -> Result<(), OracleError> {
            if self.out.len() >= self.cap {
                return Err(OracleError::CombinatorialLimit { cap: self.cap });
            }
            self.out.push(OutageHypothesis::new(self.chosen.iter().map(|&v| {
                let p = self.tree.parent_idx(v).expect("non-root");
                Edge { parent: self.tree.id_at(p), child: self.tree.id_at(v) }
            })));
            if self.chosen.len() == self.limit {
                return Ok(());
            }
            let mut pos = from;
            while pos < self.preorder.len() {
                let v = self.preorder[pos];
                self.chosen.push(v);
                self.go(pos + self.span[v])?;
                self.chosen.pop();
                pos += 1;
            }
            Ok(())
        }
    }

    // Position 0 is the root, which has no parent edge.
    let mut walk = Walk { tree, preorder: &preorder, span: &span, limit, cap, chosen: Vec::new(), out: Vec::new() };
    walk.go(1)?;
    let mut out = walk.out;
    out.sort();
    Ok(out)
}

/// The energized component and the de-energized islands left by an outage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutageForest {
    pub energized_nodes: BTreeSet<NodeId>,
    /// De-energized node to island number; island `k` (from 1) hangs below
    /// the `k`-th outaged edge in ascending order.
    pub island_assignments: BTreeMap<NodeId, usize>,
}

impl OutageForest {
    pub fn island_count(&self) -> usize {
        self.island_assignments.values().copied().max().unwrap_or(0)
    }

    pub fn island(&self, k: usize) -> BTreeSet<NodeId> {
        self.island_assignments.iter().filter(|(_, &i)| i == k).map(|(&n, _)| n).collect()
    }
}

/// Splits the tree along the outaged lines. Lines not in the tree are ignored.
pub fn outage_forest(tree: &RadialTree, h: &OutageHypothesis) -> OutageForest {
    let cut: BTreeSet<Edge> = h.outaged_edges.iter().copied().filter(|&e| tree.has_edge(e)).collect();
    let component = |start: NodeId| -> Vec<NodeId> {
        let mut out = vec![start];
        let mut k = 0;
        while k < out.len() {
            let v = out[k];
            out.extend(tree.children(v).filter(|&c| !cut.contains(&Edge { parent: v, child: c })));
            k += 1;
        }
        out
    };
    let energized_nodes = component(tree.root()).into_iter().collect();
    let mut island_assignments = BTreeMap::new();
    for (k, e) in cut.iter().enumerate() {
        for n in component(e.child) {
            island_assignments.insert(n, k + 1);
        }
    }
    OutageForest { energized_nodes, island_assignments }
}
