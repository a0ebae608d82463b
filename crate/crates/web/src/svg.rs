use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use feedersense::{Edge, NodeId, Placement, RadialTree};

const DX: f64 = 34.0;
const DY: f64 = 56.0;
const PAD: f64 = 24.0;
const R: f64 = 9.0;

/// Leaves take consecutive columns; a parent sits over the mean of its children.
fn layout(tree: &RadialTree) -> BTreeMap<NodeId, (f64, f64)> {
    let mut order = Vec::with_capacity(tree.len());
    let mut stack = vec![tree.root()];
    while let Some(v) = stack.pop() {
        order.push(v);
        let kids: Vec<NodeId> = tree.children(v).collect();
        stack.extend(kids.into_iter().rev());
    }
    let mut x: BTreeMap<NodeId, f64> = BTreeMap::new();
    let mut next = 0.0;
    for &v in &order {
        if tree.child_count(v) == 0 {
            x.insert(v, next);
            next += 1.0;
        }
    }
    for &v in order.iter().rev() {
        if tree.child_count(v) > 0 {
            let xs: Vec<f64> = tree.children(v).map(|c| x[&c]).collect();
            x.insert(v, xs.iter().sum::<f64>() / xs.len() as f64);
        }
    }
    x.into_iter().map(|(v, col)| (v, (PAD + col * DX, PAD + tree.depth(v) as f64 * DY))).collect()
}

/// Draws the tree with its sensors. Edges in `marked` are drawn as outaged.
pub fn render_svg(tree: &RadialTree, placement: &Placement, marked: &BTreeSet<Edge>) -> String {
    let pos = layout(tree);
    let width = pos.values().map(|p| p.0).fold(0.0, f64::max) + 2.0 * PAD;
    let height = tree.max_depth() as f64 * DY + 2.0 * PAD;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="9">"#
    );
    for e in tree.edges() {
        let (x1, y1) = pos[&e.parent];
        let (x2, y2) = pos[&e.child];
        let class = match (placement.has_line(e), marked.contains(&e)) {
            (_, true) => r##"stroke="#c0392b" stroke-width="2.5" stroke-dasharray="5 3" class="outage""##,
            (true, false) => r##"stroke="#1f77b4" stroke-width="4""##,
            (false, false) => r##"stroke="#888" stroke-width="1.2""##,
        };
        let _ = writeln!(s, r#"<line x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}" {class}><title>line {e}</title></line>"#);
    }
    for (&v, &(x, y)) in &pos {
        let fill = if placement.has_node(v) { "#1f77b4" } else { "#fff" };
        let text = if placement.has_node(v) { "#fff" } else { "#222" };
        let stroke = if v == tree.root() { r##"stroke="#000" stroke-width="2.5""## } else { r##"stroke="#444" stroke-width="1""## };
        if tree.is_zero_injection(v) {
            let _ = writeln!(
                s,
                r#"<rect x="{:.1}" y="{:.1}" width="{}" height="{}" fill="{fill}" {stroke} stroke-dasharray="2 2"><title>node {v} (zero injection)</title></rect>"#,
                x - R,
                y - R,
                2.0 * R,
                2.0 * R
            );
        } else {
            let _ = writeln!(s, r#"<circle cx="{x:.1}" cy="{y:.1}" r="{R}" fill="{fill}" {stroke}><title>node {v}</title></circle>"#);
        }
        let _ = writeln!(s, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle" fill="{text}">{v}</text>"#, y + 3.0);
    }
    s.push_str("</svg>\n");
    s
}
