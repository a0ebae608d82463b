use std::fmt::Write;

use super::tree::RadialTree;
use crate::placement::{Placement, PlacementError};

/// Renders the feeder as a Graphviz digraph. Nodes carrying a node sensor are
/// drawn red; lines carrying a line sensor are drawn green.
pub fn export_dot(tree: &RadialTree, placement: &Placement) -> Result<String, PlacementError> {
    placement.check_against(tree)?;
    let mut out = String::new();
    out.push_str("digraph feeder {\n");
    let _ = writeln!(out, "  // root {}", tree.root());
    for id in tree.nodes() {
        let mut attrs = Vec::new();
        if placement.node_sensors.contains(&id) {
            attrs.push("color=red".to_string());
            attrs.push("penwidth=2".to_string());
        }
        if tree.is_zero_injection(id) {
            attrs.push("shape=box".to_string());
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  {id};");
        } else {
            let _ = writeln!(out, "  {id} [{}];", attrs.join(", "));
        }
    }
    for e in tree.edges() {
        if placement.line_sensors.contains(&e) {
            let _ = writeln!(out, "  {} -> {} [color=green, penwidth=2];", e.parent, e.child);
        } else {
            let _ = writeln!(out, "  {} -> {};", e.parent, e.child);
        }
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::feeder::{Edge, NodeId};

    #[test]
    fn reference_placement_styling() {
        let f = corpus::nine_bus();
        let p = Placement::new([NodeId(1)], [Edge::new(3, 6), Edge::new(3, 7)]);
        let dot = export_dot(&f.tree, &p).unwrap();
        assert!(dot.starts_with("digraph feeder {"));
        assert!(dot.contains("  1 [color=red, penwidth=2];"));
        assert!(dot.contains("  3 -> 6 [color=green, penwidth=2];"));
        assert!(dot.contains("  3 -> 7 [color=green, penwidth=2];"));
        assert_eq!(dot.matches("color=green").count(), 2);
        assert_eq!(dot.matches("color=red").count(), 1);
    }

    #[test]
    fn empty_placement_has_no_styling() {
        let f = corpus::nine_bus();
        let dot = export_dot(&f.tree, &Placement::default()).unwrap();
        assert!(!dot.contains("color="));
        assert_eq!(dot.matches("->").count(), 8);
    }

    #[test]
    fn wrong_orientation_is_unknown_edge() {
        let f = corpus::nine_bus();
        let p = Placement::new([], [Edge::new(9, 6)]);
        assert_eq!(export_dot(&f.tree, &p), Err(PlacementError::UnknownEdge(Edge::new(9, 6))));
        let q = Placement::new([NodeId(42)], []);
        assert_eq!(export_dot(&f.tree, &q), Err(PlacementError::UnknownNode(NodeId(42))));
    }
}
