//! Browser bindings: generate a feeder, place sensors, check identifiability.
//!
//! The plain functions carry the logic and are tested natively. The
//! `#[wasm_bindgen]` wrappers only convert errors.

mod svg;

use std::collections::BTreeSet;

use feedersense::feeder::{parse_feeder, random_costs, random_radial_tree, serialize_feeder, Feeder};
use feedersense::oracle::{is_outage_identifiable_capped, Mode, DEFAULT_HYPOTHESIS_CAP};
use feedersense::placement::{check_constraints, critical_set, placement_cost};
use feedersense::{corpus, dp_place, Cost, Edge, Placement};
use wasm_bindgen::prelude::*;

pub use svg::render_svg;

/// Largest tree the page will sweep for identifiability.
pub const MAX_SWEEP_NODES: usize = 128;

#[wasm_bindgen]
pub struct PlaceView {
    svg: String,
    summary: String,
    placement: String,
}

#[wasm_bindgen]
impl PlaceView {
    #[wasm_bindgen(getter)]
    pub fn svg(&self) -> String {
        self.svg.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn summary(&self) -> String {
        self.summary.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn placement(&self) -> String {
        self.placement.clone()
    }
}

#[wasm_bindgen]
pub struct IdentifyView {
    svg: String,
    verdict: String,
}

#[wasm_bindgen]
impl IdentifyView {
    #[wasm_bindgen(getter)]
    pub fn svg(&self) -> String {
        self.svg.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn verdict(&self) -> String {
        self.verdict.clone()
    }
}

fn optional_cost(s: &str) -> Result<Option<Cost>, String> {
    if s.trim().is_empty() {
        return Ok(None);
    }
    let c: Cost = s.parse().map_err(|e| format!("{e}"))?;
    if c.is_negative() {
        return Err(format!("cost {s} is negative"));
    }
    Ok(Some(c))
}

fn with_overrides(feeder: &str, a: &str, b: &str) -> Result<Feeder, String> {
    let mut f = parse_feeder(feeder).map_err(|e| e.to_string())?;
    if let Some(a) = optional_cost(a)? {
        for id in f.tree.nodes() {
            f.costs.set_node(id, a.clone());
        }
    }
    if let Some(b) = optional_cost(b)? {
        for e in f.tree.edges() {
            f.costs.set_line(e, b.clone());
        }
    }
    Ok(f)
}

/// A bundled feeder document, or a generated one when `name` is `random`.
pub fn feeder_text(name: &str, nodes: usize, seed: u64, z_fraction: f64) -> Result<String, String> {
    if let Some(doc) = corpus::by_name(name) {
        return Ok(doc.to_string());
    }
    if name != "random" {
        return Err(format!("unknown feeder {name}"));
    }
    let tree = random_radial_tree(nodes, seed, 3, z_fraction).map_err(|e| e.to_string())?;
    let costs = random_costs(&tree, seed, 12, 4);
    Ok(serialize_feeder(Some(&format!("random-{nodes}-{seed}")), &tree, &costs))
}

pub fn place_text(feeder: &str, a: &str, b: &str) -> Result<(String, String, String), String> {
    let f = with_overrides(feeder, a, b)?;
    let (p, trace) = dp_place(&f.tree, &f.costs);
    let cost = placement_cost(&p, &f.costs).map_err(|e| e.to_string())?;
    let feasible = check_constraints(&f.tree, &p).is_empty();
    let summary = format!(
        "{} nodes, {} critical below the root, depth {}\n{} node sensors, {} line sensors, cost {}\n{} DP iterations, {} steps, constraints {}",
        f.tree.len(),
        critical_set(&f.tree).len() - 1,
        f.tree.max_depth(),
        p.node_sensors.len(),
        p.line_sensors.len(),
        cost.to_literal(),
        trace.iterations.len(),
        trace.step_count(),
        if feasible { "hold" } else { "VIOLATED" },
    );
    let svg = render_svg(&f.tree, &p, &BTreeSet::new());
    Ok((svg, summary, p.to_toml()))
}

pub fn identify_text(feeder: &str, placement: &str, mode: &str, max_outages: u32) -> Result<(String, String), String> {
    let f = parse_feeder(feeder).map_err(|e| e.to_string())?;
    if f.tree.len() > MAX_SWEEP_NODES {
        return Err(format!("the sweep handles at most {MAX_SWEEP_NODES} nodes"));
    }
    let p = Placement::from_toml(placement).map_err(|e| e.to_string())?;
    let mode: Mode = mode.parse()?;
    let r = is_outage_identifiable_capped(&f.tree, &p, mode, Some(max_outages as usize), DEFAULT_HYPOTHESIS_CAP)
        .map_err(|e| e.to_string())?;
    let (verdict, marked) = match &r.witness {
        None => (
            format!("identifiable: {} hypotheses of up to {max_outages} outaged lines are pairwise distinguishable ({mode} mode)", r.hypotheses),
            BTreeSet::new(),
        ),
        Some(w) => {
            let marked: BTreeSet<Edge> =
                w.first.outaged_edges.iter().chain(&w.second.outaged_edges).copied().collect();
            (format!("not identifiable ({mode} mode): {} and {} read identically\n\n{}", w.first, w.second, w.to_report()), marked)
        }
    };
    Ok((render_svg(&f.tree, &p, &marked), verdict))
}

fn js(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen]
pub fn feeder(name: &str, nodes: usize, seed: u32, z_fraction: f64) -> Result<String, JsError> {
    feeder_text(name, nodes, seed as u64, z_fraction).map_err(js)
}

#[wasm_bindgen]
pub fn place(feeder: &str, node_cost: &str, line_cost: &str) -> Result<PlaceView, JsError> {
    let (svg, summary, placement) = place_text(feeder, node_cost, line_cost).map_err(js)?;
    Ok(PlaceView { svg, summary, placement })
}

#[wasm_bindgen]
pub fn identify(feeder: &str, placement: &str, mode: &str, max_outages: u32) -> Result<IdentifyView, JsError> {
    let (svg, verdict) = identify_text(feeder, placement, mode, max_outages).map_err(js)?;
    Ok(IdentifyView { svg, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_bus_flow() {
        let doc = feeder_text("nine_bus", 0, 0, 0.0).unwrap();
        let (svg, summary, placement) = place_text(&doc, "", "").unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(summary.contains("cost 2.6"), "{summary}");
        let (_, verdict) = identify_text(&doc, &placement, "worst_case", 3).unwrap();
        assert!(verdict.starts_with("identifiable"), "{verdict}");
        let (svg, verdict) = identify_text(&doc, "", "generic", 2).unwrap();
        assert!(verdict.starts_with("not identifiable"), "{verdict}");
        assert!(svg.contains("outage"));
    }

    #[test]
    fn overrides_and_errors() {
        let doc = feeder_text("nine_bus", 0, 0, 0.0).unwrap();
        let (_, summary, _) = place_text(&doc, "1", "1").unwrap();
        assert!(summary.contains("2 node sensors, 0 line sensors, cost 2\n"), "{summary}");
        assert!(place_text(&doc, "-1", "").is_err());
        assert!(place_text("nodes = 3", "", "").is_err());
        assert!(feeder_text("nope", 5, 0, 0.0).is_err());
        let big = feeder_text("random", 300, 1, 0.1).unwrap();
        assert!(place_text(&big, "", "").is_ok());
        assert!(identify_text(&big, "", "generic", 1).is_err());
    }
}
