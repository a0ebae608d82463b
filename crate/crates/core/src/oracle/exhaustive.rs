use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::compact::{sweep, CompactHypotheses, CompactMeasured, CompactPlacement, CompactTree};
use super::hypotheses::enumerate_hypotheses;
use super::{Mode, OracleError};
use crate::cost::Cost;
use crate::feeder::{CostModel, RadialTree};
use crate::placement::{Placement, PlacementError};

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 12;
/// Placements are encoded in a `u64`, one bit per node and per line.
pub const MAX_BRUTE_FORCE_NODES: usize = 32;

/// Which placements count as feasible in the exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    /// Empty constraint report.
    Constraints,
    /// Worst-case identifiability over every antichain hypothesis.
    OracleWorstCase,
}

/// Cheapest feasible placement found by trying every sensor subset.
///
/// Ties go to fewer sensors, then to the lexicographically smallest
/// selection vector `(x_1..x_N, y_e1..y_e(N-1))` with nodes ascending by id
/// and lines ascending by `(parent, child)`. Subsets whose running cost
/// already exceeds the incumbent are skipped; costs are nonnegative, so this
/// never discards a candidate.
pub fn exhaustive_min_cost(
    tree: &RadialTree,
    costs: &CostModel,
    feasibility: Feasibility,
) -> Result<(Placement, Cost), OracleError> {
    exhaustive_min_cost_capped(tree, costs, feasibility, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn exhaustive_min_cost_capped(
    tree: &RadialTree,
    costs: &CostModel,
    feasibility: Feasibility,
    cap: usize,
) -> Result<(Placement, Cost), OracleError> {
    let n = tree.len();
    let cap = cap.min(MAX_BRUTE_FORCE_NODES);
    if n > cap {
        return Err(OracleError::InstanceTooLarge { nodes: n, cap });
    }
    let ct = CompactTree::new(tree)?;

    // Variables: nodes (dense order is ascending id), then lines ascending.
    let node_ids: Vec<_> = tree.nodes().collect();
    let lines = tree.edges();
    let mut raw: Vec<&Cost> = Vec::with_capacity(2 * n);
    for &id in &node_ids {
        raw.push(costs.node(id).ok_or(PlacementError::UnknownNode(id))?);
    }
    for &e in &lines {
        raw.push(costs.line(e).ok_or(PlacementError::UnknownEdge(e))?);
    }
    let weights = integer_weights(&raw)?;
    let line_child: Vec<usize> = lines.iter().map(|e| tree.idx(e.child).expect("edge of the tree")).collect();

    let oracle = match feasibility {
        Feasibility::Constraints => None,
        Feasibility::OracleWorstCase => {
            let hs = enumerate_hypotheses(tree, None)?;
            Some(CompactHypotheses::new(&ct, tree, &hs))
        }
    };

    let mut search = Search {
        ct: &ct,
        n,
        weights: &weights,
        line_child: &line_child,
        oracle: oracle.as_ref(),
        cache: HashMap::new(),
        bound: (weights.iter().take(n).sum(), n as u32),
        best: None,
    };
    search.go(0, CompactPlacement::default(), 0, 0);
    let (_, best) = search.best.expect("node sensors everywhere are always feasible");
    let placement = ct.expand(best);
    let cost = crate::placement::placement_cost(&placement, costs)?;
    Ok((placement, cost))
}

/// Scales every cost by the common denominator.
fn integer_weights(costs: &[&Cost]) -> Result<Vec<u128>, OracleError> {
    let lcm = costs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.as_rational().denom()));
    costs
        .iter()
        .map(|c| {
            let r = c.as_rational();
            (r.numer() * (&lcm / r.denom())).to_u128().ok_or(OracleError::CostOverflow)
        })
        .collect::<Result<Vec<_>, _>>()
        .and_then(|w| {
            w.iter().try_fold(0u128, |acc, &x| acc.checked_add(x)).ok_or(OracleError::CostOverflow)?;
            Ok(w)
        })
}

struct Search<'a> {
    ct: &'a CompactTree,
    n: usize,
    weights: &'a [u128],
    line_child: &'a [usize],
    oracle: Option<&'a CompactHypotheses>,
    cache: HashMap<CompactMeasured, bool>,
    /// Largest `(cost, sensors)` still worth exploring.
    bound: (u128, u32),
    best: Option<((u128, u32), CompactPlacement)>,
}

impl Search<'_> {
    fn feasible(&mut self, p: CompactPlacement) -> bool {
        match self.oracle {
            None => self.ct.feasible(p),
            Some(hs) => {
                let m = self.ct.measured(p);
                let ct = self.ct;
                *self.cache.entry(m).or_insert_with(|| sweep(ct, hs, m, Mode::WorstCase).is_none())
            }
        }
    }

    // Zero before one at every variable, so leaves arrive in lexicographic
    // order and the first of several equal keys is kept.
    fn go(&mut self, var: usize, p: CompactPlacement, cost: u128, count: u32) {
        if (cost, count) > self.bound {
            return;
        }
        if var == self.weights.len() {
            if self.best.as_ref().is_none_or(|(k, _)| (cost, count) < *k) && self.feasible(p) {
                self.best = Some(((cost, count), p));
                self.bound = (cost, count);
            }
            return;
        }
        self.go(var + 1, p, cost, count);
        let mut q = p;
        if var < self.n {
            q.nodes |= 1 << var;
        } else {
            q.lines |= 1 << self.line_child[var - self.n];
        }
        self.go(var + 1, q, cost + self.weights[var], count + 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::feeder::{Edge, NodeId};

    fn path(n: u32) -> RadialTree {
        RadialTree::new(NodeId(1), (1..=n).map(NodeId), (2..=n).map(|i| (NodeId(i - 1), NodeId(i))), []).unwrap()
    }

    #[test]
    fn nine_bus_cost() {
        let f = corpus::nine_bus();
        let (p, c) = exhaustive_min_cost(&f.tree, &f.costs, Feasibility::Constraints).unwrap();
        assert_eq!(c, Cost::from_ratio(26, 10));
        assert!(crate::placement::check_constraints(&f.tree, &p).is_empty());
    }

    #[test]
    fn single_node_and_path() {
        let t = path(1);
        let c = CostModel::uniform(&t, Cost::from_integer(2), Cost::from_integer(1));
        let (p, cost) = exhaustive_min_cost(&t, &c, Feasibility::Constraints).unwrap();
        assert!(p.is_empty());
        assert_eq!(cost, Cost::zero());

        let t = path(3);
        let c = CostModel::uniform(&t, Cost::from_integer(2), Cost::from_integer(1));
        let (p, cost) = exhaustive_min_cost(&t, &c, Feasibility::Constraints).unwrap();
        assert_eq!(cost, Cost::from_integer(1));
        assert_eq!(p, Placement::new([], [Edge::new(1, 2)]));
    }

    #[test]
    fn lexicographic_tie_break() {
        // Star with two leaves, all costs 1: V_P = {1} beats E_P = {(1,2),(1,3)}
        // on sensor count; among single node sensors only the root is feasible.
        let t = RadialTree::new(NodeId(1), (1..=3).map(NodeId), [(1, 2), (1, 3)].map(|(a, b)| (NodeId(a), NodeId(b))), [])
            .unwrap();
        let c = CostModel::uniform(&t, Cost::from_integer(1), Cost::from_integer(1));
        let (p, _) = exhaustive_min_cost(&t, &c, Feasibility::Constraints).unwrap();
        assert_eq!(p, Placement::new([NodeId(1)], []));
        // Uniform zero costs: the empty-count winner is the root sensor again,
        // since every feasible placement needs at least one sensor.
        let z = CostModel::uniform(&t, Cost::zero(), Cost::zero());
        let (p, cost) = exhaustive_min_cost(&t, &z, Feasibility::Constraints).unwrap();
        assert_eq!((p, cost), (Placement::new([NodeId(1)], []), Cost::zero()));
    }

    #[test]
    fn oracle_feasibility_on_nine_bus() {
        let f = corpus::nine_bus();
        let (p, c) = exhaustive_min_cost(&f.tree, &f.costs, Feasibility::OracleWorstCase).unwrap();
        let r = crate::oracle::is_outage_identifiable(&f.tree, &p, Mode::WorstCase, None).unwrap();
        assert!(r.identifiable);
        assert!(c <= Cost::from_ratio(26, 10));
    }

    #[test]
    fn too_large() {
        let t = path(13);
        let c = CostModel::uniform(&t, Cost::from_integer(2), Cost::from_integer(1));
        assert_eq!(
            exhaustive_min_cost(&t, &c, Feasibility::Constraints),
            Err(OracleError::InstanceTooLarge { nodes: 13, cap: 12 })
        );
    }

    #[test]
    fn fractional_costs_scale_exactly() {
        let w = integer_weights(&[&Cost::from_ratio(1, 3), &Cost::from_ratio(1, 2), &Cost::from_integer(2)]).unwrap();
        assert_eq!(w, vec![2, 3, 12]);
    }
}
