use std::fs;
use std::path::{Path, PathBuf};

use feedersense::feeder::{export_dot, parse_feeder, random_costs, random_radial_tree, serialize_feeder, Feeder};
use feedersense::oracle::{
    exhaustive_min_cost_capped, is_outage_identifiable_capped, Feasibility, OracleError,
};
use feedersense::placement::{check_constraints, dp_place, placement_cost};
use feedersense::{corpus, Cost, CostModel, Placement, RadialTree};

use crate::args::{Cli, Command, CostOverrides, FeasibilityArg, SweepOptions};
use crate::bench;
use crate::{Failure, Status};

pub const CORPUS_ENV: &str = "FEEDERSENSE_CORPUS";

pub fn run(cli: Cli) -> Result<Status, Failure> {
    match cli.command {
        Command::Place { feeder, costs, output, dot } => place(&feeder, &costs, output, dot),
        Command::Check { feeder, placement } => check(&feeder, &placement),
        Command::Identifiable { feeder, placement, sweep } => identifiable(&feeder, &placement, &sweep),
        Command::Oracle { feeder, random, min_nodes, max_nodes, seed, cap, feasibility, costs } => {
            let feasibility = match feasibility {
                FeasibilityArg::Constraints => Feasibility::Constraints,
                FeasibilityArg::Oracle => Feasibility::OracleWorstCase,
            };
            if cap == 0 {
                return Err(Failure::usage("--cap must be positive"));
            }
            match (feeder, random) {
                (Some(name), None) => oracle_one(&name, &costs, cap, feasibility),
                (None, Some(count)) => oracle_random(count, min_nodes, max_nodes, seed, &costs, cap, feasibility),
                _ => Err(Failure::usage("give a FEEDER or --random COUNT")),
            }
        }
        Command::Bench { feeders, family, runs, format, costs } => {
            let mut instances = Vec::new();
            if feeders.is_empty() {
                for name in ["ieee37", "ieee123"] {
                    instances.push((name.to_string(), load_feeder(name)?));
                }
                instances.push(("generated-906".to_string(), generated(906, &costs)));
            } else {
                for name in &feeders {
                    instances.push((name.clone(), load_feeder(name)?));
                }
            }
            for (_, f) in &mut instances {
                apply_overrides(f, &costs);
            }
            if let Some(k) = family {
                for j in 0..=k {
                    let n = 30usize << j;
                    instances.push((format!("family-{n}"), generated(n, &costs)));
                }
            }
            print!("{}", bench::run(&instances, runs as usize, format, family.is_some()));
            Ok(Status::Ok)
        }
        Command::Gen { nodes, seed, max_children, z_fraction, random_costs: random, costs, output } => {
            let tree = random_radial_tree(nodes, seed, max_children, z_fraction).map_err(|e| Failure::usage(e.to_string()))?;
            let model = if random {
                random_costs(&tree, seed, 12, 4)
            } else {
                uniform(&tree, &costs)
            };
            let name = format!("random-{nodes}-{seed}");
            write_out(output.as_deref(), &serialize_feeder(Some(&name), &tree, &model))?;
            Ok(Status::Ok)
        }
        Command::Export { feeder, placement, costs, output } => {
            let mut f = load_feeder(&feeder)?;
            apply_overrides(&mut f, &costs);
            let p = match placement {
                Some(path) => load_placement(&path, &f.tree)?,
                None => dp_place(&f.tree, &f.costs).0,
            };
            let dot = export_dot(&f.tree, &p).map_err(|e| Failure::usage(e.to_string()))?;
            write_out(output.as_deref(), &dot)?;
            Ok(Status::Ok)
        }
    }
}

/// Resolves FEEDER: an existing path, then `$FEEDERSENSE_CORPUS/<name>.toml`,
/// then a bundled name.
pub fn load_feeder(name: &str) -> Result<Feeder, Failure> {
    let path = Path::new(name);
    let text = if path.is_file() {
        read(path)?
    } else if let Some(file) = std::env::var_os(CORPUS_ENV)
        .map(|dir| PathBuf::from(dir).join(format!("{name}.toml")))
        .filter(|p| p.is_file())
    {
        read(&file)?
    } else if let Some(doc) = corpus::by_name(name) {
        doc.to_string()
    } else {
        return Err(Failure::usage(format!("no feeder file or bundled feeder named `{name}`")));
    };
    parse_feeder(&text).map_err(|e| Failure::usage(format!("{name}: {e}")))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_placement(path: &Path, tree: &RadialTree) -> Result<Placement, Failure> {
    let p = Placement::from_toml(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    p.check_against(tree).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok(p)
}

fn uniform(tree: &RadialTree, costs: &CostOverrides) -> CostModel {
    CostModel::uniform(
        tree,
        costs.node_cost.clone().unwrap_or(Cost::from_integer(2)),
        costs.line_cost.clone().unwrap_or(Cost::from_integer(1)),
    )
}

fn apply_overrides(f: &mut Feeder, costs: &CostOverrides) {
    if let Some(a) = &costs.node_cost {
        for id in f.tree.nodes() {
            f.costs.set_node(id, a.clone());
        }
    }
    if let Some(b) = &costs.line_cost {
        for e in f.tree.edges() {
            f.costs.set_line(e, b.clone());
        }
    }
}

fn generated(n: usize, costs: &CostOverrides) -> Feeder {
    let tree = random_radial_tree(n, 906, 3, 0.0).expect("valid parameters");
    let model = uniform(&tree, costs);
    Feeder { name: Some(format!("generated-{n}")), tree, costs: model }
}

fn place(name: &str, costs: &CostOverrides, output: Option<PathBuf>, dot: Option<PathBuf>) -> Result<Status, Failure> {
    let mut f = load_feeder(name)?;
    apply_overrides(&mut f, costs);
    let (p, trace) = dp_place(&f.tree, &f.costs);
    let cost = placement_cost(&p, &f.costs).expect("placement over the feeder");
    let text = format!("# {p}\n# cost = {}\n{}\n{}", cost.to_literal(), p.to_toml(), trace.to_toml());
    write_out(output.as_deref(), &text)?;
    if let Some(path) = dot {
        write_out(Some(&path), &export_dot(&f.tree, &p).expect("placement over the feeder"))?;
    }
    if output.is_some() {
        println!("{p}");
        println!("cost = {}", cost.to_literal());
    }
    Ok(Status::Ok)
}

fn check(name: &str, placement: &Path) -> Result<Status, Failure> {
    let f = load_feeder(name)?;
    let p = load_placement(placement, &f.tree)?;
    let report = check_constraints(&f.tree, &p);
    print!("{report}");
    Ok(if report.is_empty() { Status::Ok } else { Status::Infeasible })
}

fn cap_failure(e: OracleError) -> Failure {
    match e {
        OracleError::CombinatorialLimit { .. } | OracleError::InstanceTooLarge { .. } => {
            Failure { status: Status::CapExceeded, message: e.to_string() }
        }
        other => Failure::usage(other.to_string()),
    }
}

fn identifiable(name: &str, placement: &Path, sweep: &SweepOptions) -> Result<Status, Failure> {
    let f = load_feeder(name)?;
    let p = load_placement(placement, &f.tree)?;
    let max = if sweep.unlimited { None } else { Some(sweep.max_outages) };
    let cap = usize::try_from(sweep.hypothesis_cap).unwrap_or(usize::MAX);
    let r = is_outage_identifiable_capped(&f.tree, &p, sweep.mode, max, cap).map_err(cap_failure)?;
    let scope = match max {
        Some(k) => format!("up to {k} outaged lines"),
        None => "any number of outaged lines".to_string(),
    };
    match &r.witness {
        None => {
            println!("identifiable ({} mode, {scope}, {} hypotheses)", r.mode, r.hypotheses);
            Ok(Status::Ok)
        }
        Some(w) => {
            println!("not identifiable ({} mode, {scope}, {} hypotheses)", r.mode, r.hypotheses);
            println!("# {} and {} read identically", w.first, w.second);
            print!("{}", w.to_report());
            Ok(Status::NotIdentifiable)
        }
    }
}

fn compare(f: &Feeder, cap: usize, feasibility: Feasibility) -> Result<(Placement, Cost, Placement, Cost), Failure> {
    let (dp, _) = dp_place(&f.tree, &f.costs);
    let dp_cost = placement_cost(&dp, &f.costs).expect("placement over the feeder");
    let (best, best_cost) = exhaustive_min_cost_capped(&f.tree, &f.costs, feasibility, cap).map_err(cap_failure)?;
    Ok((dp, dp_cost, best, best_cost))
}

fn oracle_one(name: &str, costs: &CostOverrides, cap: usize, feasibility: Feasibility) -> Result<Status, Failure> {
    let mut f = load_feeder(name)?;
    apply_overrides(&mut f, costs);
    let (dp, dp_cost, best, best_cost) = compare(&f, cap, feasibility)?;
    let gap = Cost::from_rational(dp_cost.as_rational() - best_cost.as_rational());
    println!("dp cost = {}  # {dp}", dp_cost.to_literal());
    println!("exhaustive cost = {}  # {best}", best_cost.to_literal());
    println!("gap = {}", gap.to_literal());
    Ok(if gap.is_zero() { Status::Ok } else { Status::OracleGap })
}

fn oracle_random(
    count: usize,
    min_nodes: usize,
    max_nodes: usize,
    seed: u64,
    costs: &CostOverrides,
    cap: usize,
    feasibility: Feasibility,
) -> Result<Status, Failure> {
    if min_nodes == 0 || min_nodes > max_nodes {
        return Err(Failure::usage("need 1 <= --min-nodes <= --max-nodes"));
    }
    let mut gaps = 0;
    for k in 0..count as u64 {
        let s = seed + k;
        let n = min_nodes + (s as usize % (max_nodes - min_nodes + 1));
        let z = if k % 2 == 0 { 0.0 } else { 0.2 };
        let tree = random_radial_tree(n, s, 2 + (s % 3) as usize, z).expect("valid parameters");
        let f = Feeder { name: Some(format!("random-{n}-{s}")), costs: uniform(&tree, costs), tree };
        let (dp, dp_cost, best, best_cost) = compare(&f, cap, feasibility)?;
        if dp_cost != best_cost {
            gaps += 1;
            println!("# gap on seed {s}: dp {} [{dp}] vs exhaustive {} [{best}]", dp_cost.to_literal(), best_cost.to_literal());
            print!("{}", serialize_feeder(f.name.as_deref(), &f.tree, &f.costs));
        }
    }
    println!("{count} instances, {gaps} with a nonzero gap");
    Ok(if gaps == 0 { Status::Ok } else { Status::OracleGap })
}
