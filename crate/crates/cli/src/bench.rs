use std::time::Instant;

use feedersense::feeder::Feeder;
use feedersense::placement::{critical_set, dp_place, placement_cost};
use serde::Serialize;

use crate::args::Format;

/// One timed feeder. `v_eval` counts critical nodes below the root.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub feeder: String,
    pub nodes: usize,
    pub v_eval: usize,
    pub node_sensors: usize,
    pub line_sensors: usize,
    pub cost: String,
    pub seconds: f64,
}

#[derive(Serialize)]
struct BenchDocument {
    records: Vec<BenchRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r_squared: Option<f64>,
}

pub fn record(name: &str, f: &Feeder, runs: usize) -> BenchRecord {
    let (p, _) = dp_place(&f.tree, &f.costs);
    let mut times: Vec<f64> = (0..runs)
        .map(|_| {
            let t = Instant::now();
            std::hint::black_box(dp_place(&f.tree, &f.costs));
            t.elapsed().as_secs_f64()
        })
        .collect();
    times.sort_by(f64::total_cmp);
    BenchRecord {
        feeder: name.to_string(),
        nodes: f.tree.len(),
        v_eval: critical_set(&f.tree).len() - 1,
        node_sensors: p.node_sensors.len(),
        line_sensors: p.line_sensors.len(),
        cost: placement_cost(&p, &f.costs).expect("placement over the feeder").to_literal(),
        seconds: times[runs / 2],
    }
}

/// Coefficient of determination of the least-squares line through the points.
pub fn r_squared(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let syy: f64 = points.iter().map(|(_, y)| (y - my).powi(2)).sum();
    sxy * sxy / (sxx * syy)
}

pub fn run(instances: &[(String, Feeder)], runs: usize, format: Format, fit: bool) -> String {
    let records: Vec<BenchRecord> = instances.iter().map(|(name, f)| record(name, f, runs)).collect();
    let r_squared = fit.then(|| {
        let points: Vec<(f64, f64)> = records
            .iter()
            .filter(|r| r.feeder.starts_with("family-"))
            .map(|r| (r.v_eval as f64 + 1.0, r.seconds))
            .collect();
        r_squared(&points)
    });
    match format {
        Format::Toml => toml::to_string(&BenchDocument { records, r_squared }).expect("records serialize"),
        Format::Csv => {
            let mut out = String::from("feeder,nodes,v_eval,node_sensors,line_sensors,cost,seconds\n");
            for r in &records {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{:.3e}\n",
                    r.feeder, r.nodes, r.v_eval, r.node_sensors, r.line_sensors, r.cost, r.seconds
                ));
            }
            if let Some(r2) = r_squared {
                out.push_str(&format!("# family time vs |V_eval|: R^2 = {r2:.4}\n"));
            }
            out
        }
    }
}
