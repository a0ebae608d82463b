use std::collections::BTreeSet;

use crate::feeder::{Edge, RadialTree};

/// Lines whose flow follows from the measured ones by conservation.
///
/// At a non-root node with known load, the flow on any incident line is
/// fixed once every other incident line is known. The root is skipped: its
/// grid connection is never measured. A leaf is skipped too, since it has
/// no second line to subtract.
pub fn flow_closure(tree: &RadialTree, s_p: &BTreeSet<Edge>) -> BTreeSet<Edge> {
    let mut known: BTreeSet<Edge> = s_p.iter().copied().filter(|&e| tree.has_edge(e)).collect();
    loop {
        let mut grew = false;
        for v in tree.nodes().filter(|&v| v != tree.root()) {
            let incident: Vec<Edge> =
                tree.parent_edge(v).into_iter().chain(tree.children(v).map(|c| Edge { parent: v, child: c })).collect();
            if incident.len() < 2 {
                continue;
            }
            let unknown: Vec<Edge> = incident.into_iter().filter(|e| !known.contains(e)).collect();
            if let [only] = unknown[..] {
                known.insert(only);
                grew = true;
            }
        }
        if !grew {
            return known;
        }
    }
}
