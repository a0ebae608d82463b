use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;

use super::hypotheses::{outage_forest, OutageHypothesis};
use super::lp::positive_kernel_point;
use super::measure::measured_sets;
use super::OracleError;
use crate::feeder::{Edge, NodeId, RadialTree};
use crate::placement::Placement;

/// Noise-free readings under an outage hypothesis, in symbolic form.
///
/// A flow reading is the set of loads summed into it: the energized,
/// load-carrying nodes below the line. Voltages are recorded as
/// energized / de-energized only.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MeasurementSignature {
    pub flow_sig: BTreeMap<Edge, BTreeSet<NodeId>>,
    pub volt_sig: BTreeMap<NodeId, bool>,
}

/// Nodes carrying a load: everything except the root and zero-injection nodes.
pub fn load_nodes(tree: &RadialTree) -> BTreeSet<NodeId> {
    tree.nodes().filter(|&n| n != tree.root() && !tree.is_zero_injection(n)).collect()
}

pub fn signature(tree: &RadialTree, placement: &Placement, h: &OutageHypothesis) -> MeasurementSignature {
    let measured = measured_sets(tree, placement);
    let forest = outage_forest(tree, h);
    let energized = &forest.energized_nodes;
    let mut sig = MeasurementSignature::default();
    for &e in &measured.flow_edges {
        let live = energized.contains(&e.child) && !h.outaged_edges.contains(&e);
        let loads = if live {
            tree.subtree(e.child)
                .into_iter()
                .filter(|n| energized.contains(n) && !tree.is_zero_injection(*n))
                .collect()
        } else {
            BTreeSet::new()
        };
        sig.flow_sig.insert(e, loads);
    }
    for &n in &measured.voltage_nodes {
        sig.volt_sig.insert(n, energized.contains(&n));
    }
    sig
}

fn same_sites(a: &MeasurementSignature, b: &MeasurementSignature) -> Result<(), OracleError> {
    if a.flow_sig.keys().eq(b.flow_sig.keys()) && a.volt_sig.keys().eq(b.volt_sig.keys()) {
        Ok(())
    } else {
        Err(OracleError::MismatchedMeasuredSets)
    }
}

/// Distinct symbolic readings differ for generic loads.
pub fn distinguishable_generic(a: &MeasurementSignature, b: &MeasurementSignature) -> Result<bool, OracleError> {
    same_sites(a, b)?;
    Ok(a != b)
}

/// Two signatures are confusable in the worst case when their voltage flags
/// agree and some strictly positive load vector makes every measured flow
/// read the same under both.
pub fn distinguishable_worst_case(
    a: &MeasurementSignature,
    b: &MeasurementSignature,
    tree: &RadialTree,
) -> Result<bool, OracleError> {
    Ok(worst_case_loads(a, b, tree)?.is_none())
}

/// A positive load vector (over [`load_nodes`]) under which `a` and `b` read
/// identically, or `None` when no such vector exists.
pub fn worst_case_loads(
    a: &MeasurementSignature,
    b: &MeasurementSignature,
    tree: &RadialTree,
) -> Result<Option<BTreeMap<NodeId, BigRational>>, OracleError> {
    same_sites(a, b)?;
    if a.volt_sig != b.volt_sig {
        return Ok(None);
    }
    let vars: Vec<NodeId> = load_nodes(tree).into_iter().collect();
    let pos: BTreeMap<NodeId, usize> = vars.iter().enumerate().map(|(k, &n)| (n, k)).collect();
    let mut rows = Vec::new();
    for (e, s1) in &a.flow_sig {
        let s2 = &b.flow_sig[e];
        let mut row = vec![0i64; vars.len()];
        for n in s1 {
            row[pos[n]] += 1;
        }
        for n in s2 {
            row[pos[n]] -= 1;
        }
        rows.push(row);
    }
    Ok(positive_kernel_point(&rows, vars.len()).map(|l| vars.into_iter().zip(l).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn h(edges: &[(u32, u32)]) -> OutageHypothesis {
        OutageHypothesis::new(edges.iter().map(|&e| Edge::from(e)))
    }

    fn ids(v: &[u32]) -> BTreeSet<NodeId> {
        v.iter().map(|&i| NodeId(i)).collect()
    }

    fn reference_placement() -> Placement {
        Placement::new([NodeId(1)], [Edge::new(3, 6), Edge::new(3, 7)])
    }

    #[test]
    fn baseline_flow_is_downstream_loads() {
        let t = corpus::nine_bus().tree;
        let s = signature(&t, &reference_placement(), &OutageHypothesis::default());
        assert_eq!(s.flow_sig[&Edge::new(3, 6)], ids(&[6, 9]));
        assert_eq!(s.flow_sig[&Edge::new(1, 3)], ids(&[3, 5, 6, 7, 8, 9]));
        assert!(s.volt_sig.values().all(|&v| v));
    }

    #[test]
    fn outaged_line_reads_zero() {
        let t = corpus::nine_bus().tree;
        let s = signature(&t, &reference_placement(), &h(&[(3, 6)]));
        assert!(s.flow_sig[&Edge::new(3, 6)].is_empty());
        assert!(!s.volt_sig[&NodeId(6)]);
    }

    #[test]
    fn zero_injection_hides_node_three() {
        let t = corpus::nine_bus().tree.with_zero_injection([NodeId(3)]).unwrap();
        let a = signature(&t, &reference_placement(), &h(&[(1, 3)]));
        let b = signature(&t, &reference_placement(), &h(&[(3, 5), (3, 6), (3, 7)]));
        assert_eq!(a, b);
        assert!(!distinguishable_generic(&a, &b).unwrap());
        assert!(!distinguishable_worst_case(&a, &b, &t).unwrap());
    }

    #[test]
    fn nested_outage_matches_maximal_placement() {
        let t = corpus::nine_bus().tree;
        let pmax = Placement::all_nodes(&t);
        let a = signature(&t, &pmax, &h(&[(3, 6)]));
        let b = signature(&t, &pmax, &h(&[(3, 6), (6, 9)]));
        assert!(!distinguishable_generic(&a, &b).unwrap());
        assert!(!distinguishable_generic(&a, &a).unwrap());
        let base = signature(&t, &reference_placement(), &OutageHypothesis::default());
        let one = signature(&t, &reference_placement(), &h(&[(3, 6)]));
        assert!(distinguishable_generic(&base, &one).unwrap());
    }

    #[test]
    fn mismatched_sites() {
        let t = corpus::nine_bus().tree;
        let a = signature(&t, &reference_placement(), &OutageHypothesis::default());
        let b = signature(&t, &Placement::all_nodes(&t), &OutageHypothesis::default());
        assert_eq!(distinguishable_generic(&a, &b), Err(OracleError::MismatchedMeasuredSets));
        assert_eq!(distinguishable_worst_case(&a, &b, &t), Err(OracleError::MismatchedMeasuredSets));
    }

    #[test]
    fn aggregated_sums_can_coincide() {
        // Node 3 has degree 4; only (1,3) and (3,7) are measured below the root.
        let t = corpus::nine_bus().tree;
        let p = Placement::new([NodeId(1)], [Edge::new(3, 7)]);
        let a = signature(&t, &p, &h(&[(3, 5)]));
        let b = signature(&t, &p, &h(&[(3, 6)]));
        assert!(distinguishable_generic(&a, &b).unwrap());
        let loads = worst_case_loads(&a, &b, &t).unwrap().expect("l6 + l9 = l5 + l8 is satisfiable");
        let sum = |ns: &[u32]| ns.iter().map(|&n| loads[&NodeId(n)].clone()).sum::<BigRational>();
        assert_eq!(sum(&[6, 9]), sum(&[5, 8]));
    }

    #[test]
    fn strict_subset_readings_are_distinguishable() {
        let t = corpus::nine_bus().tree;
        let p = Placement::new([], [Edge::new(1, 3)]);
        let a = signature(&t, &p, &OutageHypothesis::default());
        let b = signature(&t, &p, &h(&[(5, 8)]));
        assert!(distinguishable_worst_case(&a, &b, &t).unwrap());
        let p = Placement::new([NodeId(6)], []);
        let a = signature(&t, &p, &h(&[(6, 9)]));
        let b = signature(&t, &p, &h(&[(3, 6)]));
        assert!(distinguishable_worst_case(&a, &b, &t).unwrap());
    }
}
