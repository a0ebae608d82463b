use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Serialize;

use super::compact::{sweep, CompactHypotheses, CompactTree};
use super::hypotheses::{enumerate_hypotheses_capped, OutageHypothesis, DEFAULT_HYPOTHESIS_CAP};
use super::measure::{measured_sets, MeasuredSets};
use super::signature::{signature, MeasurementSignature};
use super::OracleError;
use crate::cost::Cost;
use crate::feeder::{NodeId, RadialTree};
use crate::placement::Placement;

/// Outage counts above this are only swept on explicit request.
pub const DEFAULT_MAX_OUTAGES: usize = 3;

/// How loads are treated when comparing readings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Distinct symbolic load sums never coincide.
    Generic,
    /// An adversary picks any strictly positive loads.
    WorstCase,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "generic" => Ok(Mode::Generic),
            "worst_case" | "worst-case" => Ok(Mode::WorstCase),
            other => Err(format!("unknown oracle mode `{other}` (expected generic or worst_case)")),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Generic => "generic",
            Mode::WorstCase => "worst_case",
        })
    }
}

/// Two hypotheses the placement cannot tell apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub first: OutageHypothesis,
    pub second: OutageHypothesis,
    pub measured: MeasuredSets,
    pub first_signature: MeasurementSignature,
    pub second_signature: MeasurementSignature,
    /// Worst-case mode: a positive load vector under which every reading agrees.
    pub loads: Option<BTreeMap<NodeId, BigRational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identifiability {
    pub identifiable: bool,
    pub mode: Mode,
    pub max_outages: Option<usize>,
    pub hypotheses: usize,
    pub witness: Option<Witness>,
}

/// Sweeps every pair of antichain hypotheses with at most `max_outages`
/// outaged lines (unbounded when `None`) plus the no-outage baseline.
pub fn is_outage_identifiable(
    tree: &RadialTree,
    placement: &Placement,
    mode: Mode,
    max_outages: Option<usize>,
) -> Result<Identifiability, OracleError> {
    is_outage_identifiable_capped(tree, placement, mode, max_outages, DEFAULT_HYPOTHESIS_CAP)
}

pub fn is_outage_identifiable_capped(
    tree: &RadialTree,
    placement: &Placement,
    mode: Mode,
    max_outages: Option<usize>,
    hypothesis_cap: usize,
) -> Result<Identifiability, OracleError> {
    placement.check_against(tree)?;
    let ct = CompactTree::new(tree)?;
    let hs = enumerate_hypotheses_capped(tree, max_outages, hypothesis_cap)?;
    let compact = CompactHypotheses::new(&ct, tree, &hs);
    let m = ct.measured(ct.placement(tree, placement));
    let found = sweep(&ct, &compact, m, mode);
    let witness = found.map(|w| {
        let first = hs[w.first].clone();
        let second = hs[w.second].clone();
        Witness {
            measured: measured_sets(tree, placement),
            first_signature: signature(tree, placement, &first),
            second_signature: signature(tree, placement, &second),
            loads: w.loads.map(|l| l.into_iter().map(|(i, x)| (ct.id(i), x)).collect()),
            first,
            second,
        }
    });
    Ok(Identifiability { identifiable: witness.is_none(), mode, max_outages, hypotheses: hs.len(), witness })
}

#[derive(Serialize)]
struct Reading {
    site: String,
    first: String,
    second: String,
    equal: bool,
}

#[derive(Serialize)]
struct WitnessDocument {
    first: Vec<[u32; 2]>,
    second: Vec<[u32; 2]>,
    flow_edges: Vec<[u32; 2]>,
    voltage_nodes: Vec<u32>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    loads: BTreeMap<String, String>,
    readings: Vec<Reading>,
}

fn sum_text(nodes: &std::collections::BTreeSet<NodeId>) -> String {
    if nodes.is_empty() {
        "0".to_string()
    } else {
        nodes.iter().map(|n| format!("l{n}")).collect::<Vec<_>>().join(" + ")
    }
}

impl Witness {
    /// Structured text report: both hypotheses, the measured sets, every
    /// reading side by side and, in worst-case mode, the confusing loads.
    pub fn to_report(&self) -> String {
        let pairs = |h: &OutageHypothesis| h.outaged_edges.iter().map(|e| [e.parent.0, e.child.0]).collect();
        let mut readings = Vec::new();
        for (e, s1) in &self.first_signature.flow_sig {
            let s2 = &self.second_signature.flow_sig[e];
            readings.push(Reading { site: format!("flow {e}"), first: sum_text(s1), second: sum_text(s2), equal: s1 == s2 });
        }
        for (n, v1) in &self.first_signature.volt_sig {
            let v2 = self.second_signature.volt_sig[n];
            let flag = |v: bool| if v { "energized" } else { "de-energized" }.to_string();
            readings.push(Reading { site: format!("voltage {n}"), first: flag(*v1), second: flag(v2), equal: *v1 == v2 });
        }
        let doc = WitnessDocument {
            first: pairs(&self.first),
            second: pairs(&self.second),
            flow_edges: self.measured.flow_edges.iter().map(|e| [e.parent.0, e.child.0]).collect(),
            voltage_nodes: self.measured.voltage_nodes.iter().map(|n| n.0).collect(),
            loads: self
                .loads
                .iter()
                .flatten()
                .map(|(n, x)| (n.to_string(), Cost::from_rational(x.clone()).to_literal()))
                .collect(),
            readings,
        };
        toml::to_string(&doc).expect("witness reports always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::feeder::Edge;

    fn h(edges: &[(u32, u32)]) -> OutageHypothesis {
        OutageHypothesis::new(edges.iter().map(|&e| Edge::from(e)))
    }

    fn reference_placement() -> Placement {
        Placement::new([NodeId(1)], [Edge::new(3, 6), Edge::new(3, 7)])
    }

    #[test]
    fn reference_placement_identifiable() {
        let t = corpus::nine_bus().tree;
        for mode in [Mode::Generic, Mode::WorstCase] {
            let r = is_outage_identifiable(&t, &reference_placement(), mode, None).unwrap();
            assert!(r.identifiable, "{mode}");
            assert!(r.witness.is_none());
        }
    }

    #[test]
    fn maximal_placement_identifiable() {
        let t = corpus::nine_bus().tree;
        let r = is_outage_identifiable(&t, &Placement::all_nodes(&t), Mode::WorstCase, None).unwrap();
        assert!(r.identifiable);
    }

    #[test]
    fn zero_injection_witness() {
        let t = corpus::nine_bus().tree.with_zero_injection([NodeId(3)]).unwrap();
        for mode in [Mode::Generic, Mode::WorstCase] {
            let r = is_outage_identifiable(&t, &reference_placement(), mode, None).unwrap();
            let w = r.witness.expect("not identifiable");
            assert_eq!((w.first, w.second), (h(&[(1, 3)]), h(&[(3, 5), (3, 6), (3, 7)])));
            assert_eq!(w.loads.is_some(), mode == Mode::WorstCase);
        }
    }

    #[test]
    fn report_lists_readings_and_loads() {
        let t = corpus::nine_bus().tree.with_zero_injection([NodeId(3)]).unwrap();
        let r = is_outage_identifiable(&t, &reference_placement(), Mode::WorstCase, None).unwrap();
        let text = r.witness.unwrap().to_report();
        assert!(text.contains("first = [[1, 3]]"), "{text}");
        assert!(text.contains("site = \"flow (1,3)\""), "{text}");
        assert!(text.contains("[loads]"), "{text}");
    }

    #[test]
    fn invalid_placement_is_rejected() {
        let t = corpus::nine_bus().tree;
        let p = Placement::new([NodeId(42)], []);
        assert!(matches!(is_outage_identifiable(&t, &p, Mode::Generic, None), Err(OracleError::Placement(_))));
    }

    #[test]
    fn modes_parse() {
        assert_eq!("worst_case".parse::<Mode>().unwrap(), Mode::WorstCase);
        assert_eq!("generic".parse::<Mode>().unwrap(), Mode::Generic);
        assert!("typical".parse::<Mode>().is_err());
    }
}
