use std::collections::{BTreeMap, BTreeSet};

use feedersense::feeder::{parse_feeder, random_costs, random_radial_tree, serialize_feeder, validate};
use feedersense::oracle::{
    distinguishable_generic, distinguishable_worst_case, enumerate_hypotheses, exhaustive_min_cost, flow_closure,
    is_outage_identifiable, measured_sets, signature, Feasibility, Mode, OutageHypothesis,
};
use feedersense::placement::{check_constraints, critical_set, dp_place, is_subset_placement, placement_cost};
use feedersense::{Cost, CostModel, Edge, NodeId, Placement, RadialTree};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance(n: usize, seed: u64, branching: usize, z: f64) -> (RadialTree, CostModel) {
    let tree = random_radial_tree(n, seed, branching, z).unwrap();
    let costs = random_costs(&tree, seed ^ 0x5eed, 9, 4);
    (tree, costs)
}

fn random_placement(tree: &RadialTree, seed: u64, p: f64) -> Placement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Placement::new(
        tree.nodes().filter(|_| rng.random_bool(p)).collect::<Vec<_>>(),
        tree.edges().into_iter().filter(|_| rng.random_bool(p)).collect::<Vec<_>>(),
    )
}

fn random_lines(tree: &RadialTree, seed: u64, p: f64) -> OutageHypothesis {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    OutageHypothesis::new(tree.edges().into_iter().filter(|_| rng.random_bool(p)))
}

fn tree_params() -> impl Strategy<Value = (usize, u64, usize, f64)> {
    (1usize..40, any::<u64>(), 2usize..5, prop_oneof![Just(0.0), Just(0.2), Just(0.5)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn feeder_documents_round_trip((n, seed, b, z) in tree_params()) {
        let (tree, costs) = instance(n, seed, b, z);
        let back = parse_feeder(&serialize_feeder(Some("t"), &tree, &costs)).unwrap();
        prop_assert_eq!(back.tree, tree);
        prop_assert_eq!(back.costs, costs);
    }

    #[test]
    fn depths_and_child_counts((n, seed, b, z) in tree_params()) {
        let (tree, costs) = instance(n, seed, b, z);
        prop_assert!(validate(&tree, &costs).is_empty());
        for i in tree.nodes() {
            if let Some(p) = tree.parent(i) {
                prop_assert_eq!(tree.depth(i), 1 + tree.depth(p));
            }
        }
        prop_assert_eq!(tree.nodes().map(|i| tree.child_count(i)).sum::<usize>(), tree.len() - 1);
    }

    #[test]
    fn dp_output_is_feasible_and_bounded((n, seed, b, z) in tree_params()) {
        let (tree, costs) = instance(n, seed, b, z);
        let (p, trace) = dp_place(&tree, &costs);
        prop_assert!(check_constraints(&tree, &p).is_empty(), "{}", p);
        let cost = placement_cost(&p, &costs).unwrap();
        prop_assert!(cost <= placement_cost(&Placement::all_nodes(&tree), &costs).unwrap());
        // A lone root has no depth to sweep.
        let expected_steps = if tree.len() == 1 { 0 } else { critical_set(&tree).len() };
        prop_assert_eq!(trace.step_count(), expected_steps);
        let f_max = tree.max_depth();
        let deepest_critical = tree.nodes().any(|i| tree.depth(i) == f_max && tree.is_zero_injection(i)) && f_max > 0;
        prop_assert_eq!(trace.iterations.len(), f_max + usize::from(deepest_critical));
    }

    #[test]
    fn dp_is_scale_invariant((n, seed, b, z) in tree_params(), num in 1i64..50, den in 1i64..50) {
        let (tree, costs) = instance(n, seed, b, z);
        let scaled = costs.scaled(&Cost::from_ratio(num, den));
        prop_assert_eq!(dp_place(&tree, &costs).0, dp_place(&tree, &scaled).0);
    }

    #[test]
    fn outage_signature_ignores_nested_lines(
        (n, seed, b, z) in tree_params(), hs in any::<u64>(), ps in any::<u64>()
    ) {
        let (tree, _) = instance(n.min(20), seed, b, z);
        let h = random_lines(&tree, hs, 0.3);
        let reduced = h.antichain_reduction(&tree);
        prop_assert!(reduced.is_antichain(&tree));
        for p in [random_placement(&tree, ps, 0.3), Placement::all_nodes(&tree)] {
            prop_assert_eq!(signature(&tree, &p, &h), signature(&tree, &p, &reduced));
        }
    }

    #[test]
    fn flows_satisfy_conservation((n, seed, b, z) in tree_params(), hs in any::<u64>()) {
        let (tree, _) = instance(n.min(20), seed, b, z);
        let h = random_lines(&tree, hs, 0.2);
        let sig = signature(&tree, &Placement::all_nodes(&tree), &h);
        for (e, loads) in &sig.flow_sig {
            let live = sig.volt_sig[&e.child] && !h.outaged_edges.contains(e);
            let mut expected = BTreeSet::new();
            if live {
                if !tree.is_zero_injection(e.child) {
                    expected.insert(e.child);
                }
                for c in tree.children(e.child) {
                    expected.extend(sig.flow_sig[&Edge { parent: e.child, child: c }].iter().copied());
                }
            }
            prop_assert_eq!(loads, &expected, "edge {}", e);
        }
    }

    #[test]
    fn flow_closure_is_an_extensive_idempotent_monotone_map(
        (n, seed, b, z) in tree_params(), s1 in any::<u64>(), s2 in any::<u64>()
    ) {
        let (tree, _) = instance(n, seed, b, z);
        let a: BTreeSet<Edge> = measured_sets(&tree, &random_placement(&tree, s1, 0.2)).flow_edges;
        let extra: BTreeSet<Edge> = measured_sets(&tree, &random_placement(&tree, s2, 0.2)).flow_edges;
        let b_set: BTreeSet<Edge> = a.union(&extra).copied().collect();
        let ca = flow_closure(&tree, &a);
        prop_assert!(a.is_subset(&ca));
        prop_assert_eq!(flow_closure(&tree, &ca), ca.clone());
        prop_assert!(ca.is_subset(&flow_closure(&tree, &b_set)));
    }
}

fn brute_force_antichains(tree: &RadialTree) -> BTreeSet<BTreeSet<Edge>> {
    let edges = tree.edges();
    (0u32..1 << edges.len())
        .map(|mask| edges.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect::<BTreeSet<_>>())
        .filter(|set| set.iter().all(|&lo| set.iter().all(|&up| !tree.is_upstream(up, lo))))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn antichains_match_subset_filter((n, seed, b, _z) in tree_params()) {
        let tree = random_radial_tree(1 + n % 9, seed, b, 0.0).unwrap();
        let got: Vec<_> = enumerate_hypotheses(&tree, None).unwrap();
        let set: BTreeSet<BTreeSet<Edge>> = got.iter().map(|h| h.outaged_edges.clone()).collect();
        prop_assert_eq!(set.len(), got.len());
        prop_assert_eq!(set, brute_force_antichains(&tree));
        let capped = enumerate_hypotheses(&tree, Some(2)).unwrap();
        prop_assert!(capped.iter().all(|h| h.len() <= 2));
        prop_assert_eq!(capped.len(), got.iter().filter(|h| h.len() <= 2).count());
    }

    #[test]
    fn worst_case_distinction_implies_generic((n, seed, b, z) in tree_params(), ps in any::<u64>()) {
        let (tree, _) = instance(1 + n % 10, seed, b, z);
        let p = random_placement(&tree, ps, 0.25);
        let hs = enumerate_hypotheses(&tree, Some(2)).unwrap();
        let sigs: Vec<_> = hs.iter().map(|h| signature(&tree, &p, h)).collect();
        for i in 0..sigs.len() {
            for j in i + 1..sigs.len() {
                if distinguishable_worst_case(&sigs[i], &sigs[j], &tree).unwrap() {
                    prop_assert!(distinguishable_generic(&sigs[i], &sigs[j]).unwrap());
                }
            }
        }
    }

    /// The mask sweep and the signature route agree on the verdict and on
    /// the minimal witness.
    #[test]
    fn sweep_matches_pairwise_signatures((n, seed, b, z) in tree_params(), ps in any::<u64>(), density in 0.1f64..0.6) {
        let (tree, _) = instance(1 + n % 9, seed, b, z);
        let p = random_placement(&tree, ps, density);
        let hs = enumerate_hypotheses(&tree, None).unwrap();
        let sigs: Vec<_> = hs.iter().map(|h| signature(&tree, &p, h)).collect();
        for mode in [Mode::Generic, Mode::WorstCase] {
            let mut expected = None;
            'outer: for total in 0..=2 * tree.len() {
                for i in 0..hs.len() {
                    for j in i + 1..hs.len() {
                        if hs[i].len() + hs[j].len() != total {
                            continue;
                        }
                        let distinct = match mode {
                            Mode::Generic => distinguishable_generic(&sigs[i], &sigs[j]).unwrap(),
                            Mode::WorstCase => distinguishable_worst_case(&sigs[i], &sigs[j], &tree).unwrap(),
                        };
                        if !distinct {
                            expected = Some((hs[i].clone(), hs[j].clone()));
                            break 'outer;
                        }
                    }
                }
            }
            let got = is_outage_identifiable(&tree, &p, mode, None).unwrap();
            prop_assert_eq!(got.identifiable, expected.is_none());
            prop_assert_eq!(got.witness.map(|w| (w.first, w.second)), expected);
        }
    }

    #[test]
    fn confusing_loads_really_confuse((n, seed, b, z) in tree_params(), ps in any::<u64>()) {
        let (tree, _) = instance(1 + n % 12, seed, b, z);
        let p = random_placement(&tree, ps, 0.2);
        let r = is_outage_identifiable(&tree, &p, Mode::WorstCase, Some(3)).unwrap();
        if let Some(w) = r.witness {
            let loads = w.loads.expect("worst-case witnesses carry loads");
            prop_assert!(loads.values().all(|l| l > &num_rational::BigRational::from_integer(0.into())));
            prop_assert_eq!(&w.first_signature.volt_sig, &w.second_signature.volt_sig);
            let total = |s: &BTreeSet<NodeId>| s.iter().map(|n| loads[n].clone()).sum::<num_rational::BigRational>();
            for (e, s1) in &w.first_signature.flow_sig {
                prop_assert_eq!(total(s1), total(&w.second_signature.flow_sig[e]));
            }
        }
    }

    #[test]
    fn more_measurements_never_hurt((n, seed, b, z) in tree_params(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let (tree, _) = instance(1 + n % 12, seed, b, z);
        let p1 = random_placement(&tree, s1, 0.3);
        let extra = random_placement(&tree, s2, 0.2);
        let p2 = Placement::new(
            p1.node_sensors.union(&extra.node_sensors).copied(),
            p1.line_sensors.union(&extra.line_sensors).copied(),
        );
        prop_assert!(is_subset_placement(&p1, &p2, &tree));
        for mode in [Mode::Generic, Mode::WorstCase] {
            if is_outage_identifiable(&tree, &p1, mode, Some(2)).unwrap().identifiable {
                prop_assert!(is_outage_identifiable(&tree, &p2, mode, Some(2)).unwrap().identifiable);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dp_placements_are_identifiable((n, seed, b, z) in tree_params()) {
        let (tree, costs) = instance(1 + n % 14, seed, b, z);
        let (p, _) = dp_place(&tree, &costs);
        let r = is_outage_identifiable(&tree, &p, Mode::WorstCase, Some(3)).unwrap();
        prop_assert!(r.identifiable, "{} {:?}", p, r.witness.map(|w| w.to_report()));
    }

    #[test]
    fn exhaustive_search_bounds_dp((n, seed, b, z) in tree_params()) {
        let (tree, costs) = instance(1 + n % 9, seed, b, z);
        let (best, best_cost) = exhaustive_min_cost(&tree, &costs, Feasibility::Constraints).unwrap();
        prop_assert!(check_constraints(&tree, &best).is_empty());
        prop_assert_eq!(placement_cost(&best, &costs).unwrap(), best_cost.clone());
        let (p, _) = dp_place(&tree, &costs);
        prop_assert!(best_cost <= placement_cost(&p, &costs).unwrap());
    }

    #[test]
    fn dp_is_optimal_for_uniform_costs((n, seed, b, z) in tree_params()) {
        let tree = random_radial_tree(1 + n % 10, seed, b, z).unwrap();
        let costs = CostModel::uniform(&tree, Cost::from_integer(2), Cost::from_integer(1));
        let (_, best) = exhaustive_min_cost(&tree, &costs, Feasibility::Constraints).unwrap();
        let (p, _) = dp_place(&tree, &costs);
        prop_assert_eq!(placement_cost(&p, &costs).unwrap(), best);
    }
}

#[test]
fn zero_injection_leaf_at_deepest_level_counts_as_an_iteration() {
    let tree = RadialTree::new(
        NodeId(1),
        (1..=3).map(NodeId),
        [(1, 2), (2, 3)].map(|(a, b)| (NodeId(a), NodeId(b))),
        [NodeId(3)],
    )
    .unwrap();
    let costs = CostModel::uniform(&tree, Cost::from_integer(2), Cost::from_integer(1));
    let (p, trace) = dp_place(&tree, &costs);
    assert_eq!(trace.iterations.len(), 3);
    let by_node: BTreeMap<NodeId, usize> =
        trace.iterations.iter().flat_map(|it| it.steps.iter().map(move |s| (s.node, it.depth))).collect();
    assert_eq!(by_node, BTreeMap::from([(NodeId(1), 0), (NodeId(3), 2)]));
    assert!(check_constraints(&tree, &p).is_empty());
}
