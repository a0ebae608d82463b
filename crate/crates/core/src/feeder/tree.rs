use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of a feeder bus, kept verbatim from the input document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for NodeId {
    fn from(v: u32) -> Self {
        NodeId(v)
    }
}

/// A directed feeder line `(parent, child)`; power flows parent to child.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub parent: NodeId,
    pub child: NodeId,
}

impl Edge {
    pub fn new(parent: impl Into<NodeId>, child: impl Into<NodeId>) -> Self {
        Edge { parent: parent.into(), child: child.into() }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.parent, self.child)
    }
}

impl From<(u32, u32)> for Edge {
    fn from((p, c): (u32, u32)) -> Self {
        Edge::new(p, c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("duplicate node id {0}")]
    DuplicateId(NodeId),
    #[error("edge ({0},{1}) references an undeclared node")]
    DanglingEdge(NodeId, NodeId),
    #[error("root {0} is not a declared node")]
    UnknownRoot(NodeId),
    #[error("graph is not a radial tree: {0}")]
    NotATree(String),
    #[error("root {0} cannot be a zero-injection node")]
    RootHasZeroInjection(NodeId),
    #[error("zero-injection node {0} is not in the tree")]
    UnknownNode(NodeId),
}

/// A radial feeder rooted at the point of common coupling.
///
/// Nodes are stored densely, indexed in ascending id order; children lists
/// are kept sorted by id. The structure is immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadialTree {
    ids: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    zero_injection: Vec<bool>,
    max_depth: usize,
    bfs: Vec<usize>,
}

impl RadialTree {
    /// Builds a tree from an undirected edge list, orienting every edge away
    /// from `root`.
    pub fn new(
        root: NodeId,
        nodes: impl IntoIterator<Item = NodeId>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
        zero_injection: impl IntoIterator<Item = NodeId>,
    ) -> Result<Self, TreeError> {
        let mut ids: Vec<NodeId> = nodes.into_iter().collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(TreeError::DuplicateId(w[0]));
        }
        let index: HashMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let root_idx = *index.get(&root).ok_or(TreeError::UnknownRoot(root))?;

        let n = ids.len();
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut edge_count = 0usize;
        let mut seen = BTreeSet::new();
        for (a, b) in edges {
            let (ia, ib) = match (index.get(&a), index.get(&b)) {
                (Some(&ia), Some(&ib)) => (ia, ib),
                _ => return Err(TreeError::DanglingEdge(a, b)),
            };
            if ia == ib {
                return Err(TreeError::NotATree(format!("self-loop at node {a}")));
            }
            if !seen.insert((ia.min(ib), ia.max(ib))) {
                return Err(TreeError::NotATree(format!("parallel edge between {a} and {b}")));
            }
            adjacency[ia].push(ib);
            adjacency[ib].push(ia);
            edge_count += 1;
        }
        if edge_count + 1 != n {
            return Err(TreeError::NotATree(format!("{n} nodes but {edge_count} edges")));
        }

        let mut parent = vec![None; n];
        let mut depth = vec![0usize; n];
        let mut visited = vec![false; n];
        let mut bfs = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root_idx]);
        visited[root_idx] = true;
        while let Some(u) = queue.pop_front() {
            bfs.push(u);
            adjacency[u].sort_unstable();
            for &v in &adjacency[u] {
                if !visited[v] {
                    visited[v] = true;
                    parent[v] = Some(u);
                    depth[v] = depth[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if bfs.len() != n {
            // n - 1 edges but not connected implies a cycle somewhere.
            let stray = ids[visited.iter().position(|v| !v).unwrap_or(0)];
            return Err(TreeError::NotATree(format!("node {stray} is not reachable from the root (cycle or disconnected part)")));
        }

        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(v);
            }
        }
        let max_depth = depth.iter().copied().max().unwrap_or(0);

        let mut tree = RadialTree {
            ids,
            index,
            root: root_idx,
            parent,
            children,
            depth,
            zero_injection: vec![false; n],
            max_depth,
            bfs,
        };
        tree.set_zero_injection(zero_injection)?;
        Ok(tree)
    }

    /// Same topology with a different zero-injection set.
    pub fn with_zero_injection(&self, zero_injection: impl IntoIterator<Item = NodeId>) -> Result<Self, TreeError> {
        let mut t = self.clone();
        t.set_zero_injection(zero_injection)?;
        Ok(t)
    }

    fn set_zero_injection(&mut self, zero_injection: impl IntoIterator<Item = NodeId>) -> Result<(), TreeError> {
        let mut flags = vec![false; self.ids.len()];
        for id in zero_injection {
            let i = *self.index.get(&id).ok_or(TreeError::UnknownNode(id))?;
            if i == self.root {
                return Err(TreeError::RootHasZeroInjection(id));
            }
            flags[i] = true;
        }
        self.zero_injection = flags;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.ids[self.root]
    }

    /// All node ids, ascending.
    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        self.ids.iter().copied()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index.contains_key(&id)
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.index.get(&id).and_then(|&i| self.parent[i]).map(|p| self.ids[p])
    }

    pub fn parent_edge(&self, id: NodeId) -> Option<Edge> {
        self.parent(id).map(|p| Edge { parent: p, child: id })
    }

    /// Children of `id` in ascending id order; empty for unknown ids.
    pub fn children(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let slice: &[usize] = self.index.get(&id).map(|&i| self.children[i].as_slice()).unwrap_or(&[]);
        slice.iter().map(move |&c| self.ids[c])
    }

    pub fn child_count(&self, id: NodeId) -> usize {
        self.index.get(&id).map_or(0, |&i| self.children[i].len())
    }

    /// Degree `|C_i| + 1`. The root's extra edge is its grid connection.
    pub fn degree(&self, id: NodeId) -> usize {
        self.child_count(id) + 1
    }

    pub fn depth(&self, id: NodeId) -> usize {
        self.index.get(&id).map_or(0, |&i| self.depth[i])
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn is_zero_injection(&self, id: NodeId) -> bool {
        self.index.get(&id).is_some_and(|&i| self.zero_injection[i])
    }

    pub fn zero_injection(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.ids.iter().zip(&self.zero_injection).filter(|(_, &z)| z).map(|(&id, _)| id)
    }

    /// Internal edges, ascending by `(parent, child)`.
    pub fn edges(&self) -> Vec<Edge> {
        let mut edges: Vec<Edge> = (0..self.ids.len())
            .filter_map(|v| self.parent[v].map(|p| Edge { parent: self.ids[p], child: self.ids[v] }))
            .collect();
        edges.sort_unstable();
        edges
    }

    pub fn edge_count(&self) -> usize {
        self.ids.len().saturating_sub(1)
    }

    pub fn has_edge(&self, edge: Edge) -> bool {
        self.parent(edge.child) == Some(edge.parent)
    }

    /// Nodes of the subtree rooted at `id` (including `id`), in BFS order.
    pub fn subtree(&self, id: NodeId) -> Vec<NodeId> {
        let Some(&start) = self.index.get(&id) else { return Vec::new() };
        let mut out = vec![start];
        let mut k = 0;
        while k < out.len() {
            out.extend_from_slice(&self.children[out[k]]);
            k += 1;
        }
        out.into_iter().map(|i| self.ids[i]).collect()
    }

    /// True when `upper` lies on the path from `lower` to the root
    /// (an edge is not upstream of itself).
    pub fn is_upstream(&self, upper: Edge, lower: Edge) -> bool {
        if upper == lower || !self.has_edge(upper) || !self.has_edge(lower) {
            return false;
        }
        let mut cur = lower.parent;
        loop {
            if cur == upper.child {
                return true;
            }
            match self.parent(cur) {
                Some(p) => cur = p,
                None => return false,
            }
        }
    }

    // Dense-index accessors used by the algorithms in this crate.

    pub(crate) fn idx(&self, id: NodeId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub(crate) fn id_at(&self, i: usize) -> NodeId {
        self.ids[i]
    }

    pub(crate) fn root_idx(&self) -> usize {
        self.root
    }

    pub(crate) fn parent_idx(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub(crate) fn children_idx(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub(crate) fn depth_idx(&self, i: usize) -> usize {
        self.depth[i]
    }

    pub(crate) fn zero_idx(&self, i: usize) -> bool {
        self.zero_injection[i]
    }

    /// Node indices in breadth-first order from the root.
    pub(crate) fn bfs_order(&self) -> &[usize] {
        &self.bfs
    }
}
