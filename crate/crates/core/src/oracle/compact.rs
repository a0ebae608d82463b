//! Bitmask engine for the pairwise sweeps.
//!
//! Nodes are addressed by dense index (ascending id) and a line by the dense
//! index of its child, so node sets and line sets are both `u128` masks.
//! Trees above [`MAX_COMPACT_NODES`] nodes are rejected.

use std::collections::HashMap;

use num_rational::BigRational;

use super::hypotheses::OutageHypothesis;
use super::lp::positive_kernel_point;
use super::{Mode, OracleError};
use crate::feeder::{Edge, NodeId, RadialTree};
use crate::placement::Placement;

pub type Mask = u128;
pub const MAX_COMPACT_NODES: usize = 128;

fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            b
        })
    })
}

#[derive(Debug, Clone)]
pub struct CompactTree {
    n: usize,
    root: usize,
    parent: Vec<Option<usize>>,
    child_mask: Vec<Mask>,
    sub: Vec<Mask>,
    zero: Mask,
    load: Mask,
    /// `(node, child mask, children needed)` for non-root nodes of degree >= 3.
    branching: Vec<(usize, Mask, u32)>,
    ids: Vec<NodeId>,
}

/// Node sensors and line sensors (by child index) as masks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct CompactPlacement {
    pub nodes: Mask,
    pub lines: Mask,
}

/// Measured flows (by child index) and voltages as masks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct CompactMeasured {
    pub flows: Mask,
    pub volts: Mask,
}

impl CompactTree {
    pub fn new(tree: &RadialTree) -> Result<Self, OracleError> {
        let n = tree.len();
        if n > MAX_COMPACT_NODES {
            return Err(OracleError::InstanceTooLarge { nodes: n, cap: MAX_COMPACT_NODES });
        }
        let parent: Vec<Option<usize>> = (0..n).map(|i| tree.parent_idx(i)).collect();
        let child_mask: Vec<Mask> = (0..n).map(|i| tree.children_idx(i).iter().fold(0, |m, &c| m | 1 << c)).collect();
        let mut sub = vec![0 as Mask; n];
        for &v in tree.bfs_order().iter().rev() {
            sub[v] = 1 << v;
            for &c in tree.children_idx(v) {
                sub[v] |= sub[c];
            }
        }
        let root = tree.root_idx();
        let zero = (0..n).filter(|&i| tree.zero_idx(i)).fold(0, |m, i| m | 1 << i);
        let all: Mask = if n == 128 { Mask::MAX } else { (1 << n) - 1 };
        let load = all & !zero & !(1 << root);
        let branching = (0..n)
            .filter(|&i| i != root && tree.children_idx(i).len() >= 2)
            .map(|i| (i, child_mask[i], tree.children_idx(i).len() as u32 - 1))
            .collect();
        let ids = (0..n).map(|i| tree.id_at(i)).collect();
        Ok(CompactTree { n, root, parent, child_mask, sub, zero, load, branching, ids })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn all_nodes(&self) -> Mask {
        if self.n == 128 {
            Mask::MAX
        } else {
            (1 << self.n) - 1
        }
    }

    /// Child indices of every line.
    pub fn all_lines(&self) -> Mask {
        self.all_nodes() & !(1 << self.root)
    }

    pub fn placement(&self, tree: &RadialTree, p: &Placement) -> CompactPlacement {
        let mut c = CompactPlacement::default();
        for &n in &p.node_sensors {
            if let Some(i) = tree.idx(n) {
                c.nodes |= 1 << i;
            }
        }
        for &e in p.line_sensors.iter().filter(|&&e| tree.has_edge(e)) {
            c.lines |= 1 << tree.idx(e.child).expect("edge of the tree");
        }
        c
    }

    pub fn expand(&self, c: CompactPlacement) -> Placement {
        Placement::new(bits(c.nodes).map(|i| self.ids[i]), bits(c.lines).map(|i| self.edge(i)))
    }

    pub fn edge(&self, child: usize) -> Edge {
        Edge { parent: self.ids[self.parent[child].expect("non-root")], child: self.ids[child] }
    }

    pub fn hypothesis(&self, lines: Mask) -> OutageHypothesis {
        OutageHypothesis::new(bits(lines).map(|c| self.edge(c)))
    }

    pub fn measured(&self, p: CompactPlacement) -> CompactMeasured {
        let mut flows = p.lines | (p.nodes & !(1 << self.root));
        for i in bits(p.nodes) {
            flows |= self.child_mask[i];
        }
        CompactMeasured { flows, volts: p.nodes | p.lines }
    }

    /// Same verdict as an empty constraint report, on masks.
    pub fn feasible(&self, p: CompactPlacement) -> bool {
        let mut monitored = p.lines | p.nodes;
        for i in bits(p.nodes) {
            monitored |= self.child_mask[i];
        }
        let root_bit = 1 << self.root;
        if p.nodes & root_bit == 0 && self.child_mask[self.root] & !monitored != 0 {
            return false;
        }
        for &(k, children, need) in &self.branching {
            if p.nodes & (1 << k) == 0 && (children & monitored).count_ones() < need {
                return false;
            }
        }
        self.zero & !(p.nodes | p.lines) == 0
    }

    /// Energized nodes once the lines in `lines` are out.
    pub fn energized(&self, lines: Mask) -> Mask {
        bits(lines).fold(self.all_nodes(), |m, c| m & !self.sub[c])
    }
}

/// The hypotheses of a sweep with their energized masks, in sweep order.
#[derive(Debug, Clone)]
pub struct CompactHypotheses {
    pub lines: Vec<Mask>,
    pub energized: Vec<Mask>,
    pub sizes: Vec<u32>,
}

impl CompactHypotheses {
    pub fn new(ct: &CompactTree, tree: &RadialTree, hs: &[OutageHypothesis]) -> Self {
        let lines: Vec<Mask> = hs
            .iter()
            .map(|h| h.outaged_edges.iter().filter_map(|e| tree.idx(e.child)).fold(0, |m, c| m | 1 << c))
            .collect();
        let energized = lines.iter().map(|&l| ct.energized(l)).collect();
        let sizes = lines.iter().map(|l| l.count_ones()).collect();
        CompactHypotheses { lines, energized, sizes }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

/// The lowest-ranked confusable pair of a sweep: smallest `|H1| + |H2|`,
/// then enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactWitness {
    pub first: usize,
    pub second: usize,
    /// Worst-case mode: one load per load node (dense index order).
    pub loads: Option<Vec<(usize, BigRational)>>,
}

/// Result of comparing two hypotheses in worst-case mode.
enum PairOutcome {
    Distinct,
    Confusable(Vec<(usize, BigRational)>),
}

fn worst_case_pair(ct: &CompactTree, m: CompactMeasured, e1: Mask, e2: Mask) -> PairOutcome {
    if (e1 ^ e2) & m.volts != 0 {
        return PairOutcome::Distinct;
    }
    let d1 = e1 & !e2 & ct.load;
    let d2 = e2 & !e1 & ct.load;
    let mut rows: Vec<(Mask, Mask)> = Vec::new();
    for c in bits(m.flows) {
        let a = ct.sub[c] & d1;
        let b = ct.sub[c] & d2;
        match (a == 0, b == 0) {
            (true, true) => {}
            (false, false) => {
                if !rows.contains(&(a, b)) {
                    rows.push((a, b));
                }
            }
            _ => return PairOutcome::Distinct,
        }
    }
    let vars_mask = rows.iter().fold(0, |acc, &(a, b)| acc | a | b);
    let vars: Vec<usize> = bits(vars_mask).collect();
    let mut loads: Vec<(usize, BigRational)> = bits(ct.load).map(|i| (i, BigRational::from_integer(1.into()))).collect();
    if rows.is_empty() {
        return PairOutcome::Confusable(loads);
    }
    let matrix: Vec<Vec<i64>> = rows
        .iter()
        .map(|&(a, b)| vars.iter().map(|&v| (a >> v & 1) as i64 - (b >> v & 1) as i64).collect())
        .collect();
    match positive_kernel_point(&matrix, vars.len()) {
        None => PairOutcome::Distinct,
        Some(l) => {
            for (v, x) in vars.iter().zip(l) {
                let slot = loads.iter_mut().find(|(i, _)| i == v).expect("variables are load nodes");
                slot.1 = x;
            }
            PairOutcome::Confusable(loads)
        }
    }
}

/// Looks for a confusable pair among `hs` under the measurement masks `m`.
///
/// Hypotheses are bucketed by their voltage readings first, since flags
/// that differ separate a pair in both modes.
pub fn sweep(ct: &CompactTree, hs: &CompactHypotheses, m: CompactMeasured, mode: Mode) -> Option<CompactWitness> {
    let mut groups: HashMap<Mask, Vec<usize>> = HashMap::new();
    for (i, &e) in hs.energized.iter().enumerate() {
        groups.entry(e & m.volts).or_default().push(i);
    }
    let rank = |i: usize, j: usize| (hs.sizes[i] + hs.sizes[j], i, j);
    let mut best: Option<CompactWitness> = None;
    let mut best_rank = (u32::MAX, usize::MAX, usize::MAX);

    for members in groups.values().filter(|g| g.len() > 1) {
        match mode {
            Mode::Generic => {
                // Confusability is an equivalence here: split by full signature.
                let mut classes: HashMap<Vec<Mask>, Vec<usize>> = HashMap::new();
                for &i in members {
                    let e = hs.energized[i] & ct.load;
                    classes.entry(bits(m.flows).map(|c| ct.sub[c] & e).collect()).or_default().push(i);
                }
                for class in classes.values().filter(|c| c.len() > 1) {
                    // Members are in sweep order, which is nondecreasing in size.
                    let r = rank(class[0], class[1]);
                    if r < best_rank {
                        best_rank = r;
                        best = Some(CompactWitness { first: class[0], second: class[1], loads: None });
                    }
                }
            }
            Mode::WorstCase => {
                for (a, &i) in members.iter().enumerate() {
                    for &j in &members[a + 1..] {
                        if rank(i, j) >= best_rank {
                            continue;
                        }
                        if let PairOutcome::Confusable(loads) = worst_case_pair(ct, m, hs.energized[i], hs.energized[j]) {
                            best_rank = rank(i, j);
                            best = Some(CompactWitness { first: i, second: j, loads: Some(loads) });
                        }
                    }
                }
            }
        }
    }
    best
}

impl CompactTree {
    pub fn id(&self, i: usize) -> NodeId {
        self.ids[i]
    }
}
