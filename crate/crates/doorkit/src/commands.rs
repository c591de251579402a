use std::fmt::Write;
use std::path::Path;

use doorkit_core::corpus::{self, ModelReport};
use doorkit_core::level::{check_conservative, emit_tilemap, LevelError, Tilemap};
use doorkit_core::sat::{self, GadgetSet};
use doorkit_core::solver::{
    self, gen_counter_system, verify_witness, SolveResult, Verdict as Replay,
};
use doorkit_core::system::{check_planarity, derived_graph, Planarity, WitnessKind};
use doorkit_core::text::serialize_system;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::files;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Positive,
    Negative,
    Budget,
}

/// What a command printed, in both modes, and how it came out.
#[derive(Debug)]
pub struct Report {
    pub human: String,
    pub machine: Value,
    pub verdict: Verdict,
}

fn positive(human: String, machine: Value) -> Report {
    Report {
        human,
        machine,
        verdict: Verdict::Positive,
    }
}

pub fn solve(path: &Path, max_configs: usize, witness: Option<&Path>) -> Result<Report, CliError> {
    let s = files::read_system(path)?;
    let r = solver::solve(&s, max_configs).map_err(|e| CliError::Failed(e.to_string()))?;
    let mut human = String::new();
    let verdict = match &r {
        SolveResult::Reachable {
            witness: w,
            visited,
        } => {
            let _ = writeln!(
                human,
                "Reachable: {} moves, {visited} configurations explored",
                w.len()
            );
            for m in &w.moves {
                let _ = writeln!(human, "  {m}");
            }
            if verify_witness(&s, w) != Replay::Accept {
                return Err(CliError::Failed("witness failed replay".into()));
            }
            if let Some(p) = witness {
                files::write(p, &w.to_text())?;
            }
            Verdict::Positive
        }
        SolveResult::Unreachable { visited } => {
            let _ = writeln!(human, "Unreachable: {visited} configurations explored");
            Verdict::Negative
        }
        SolveResult::BudgetExceeded { visited } => {
            let _ = writeln!(
                human,
                "BudgetExceeded: stopped after {visited} configurations"
            );
            Verdict::Budget
        }
    };
    let moves: Option<Vec<String>> = r
        .witness()
        .map(|w| w.moves.iter().map(|m| m.to_string()).collect());
    let machine = json!({
        "command": "solve",
        "verdict": r.verdict(),
        "visited": r.visited(),
        "moves": moves.as_ref().map(Vec::len),
        "traversals": r.witness().map(|w| w.traverse_count()),
        "witness": moves,
    });
    Ok(Report {
        human,
        machine,
        verdict,
    })
}

pub fn planar(path: &Path) -> Result<Report, CliError> {
    let s = files::read_system(path)?;
    let p = check_planarity(&s).map_err(|e| CliError::Failed(e.to_string()))?;
    let g = derived_graph(&s);
    let mut human = String::new();
    Ok(match p {
        Planarity::Planar => {
            let _ = writeln!(
                human,
                "planar ({} vertices, {} edges)",
                g.vertex_count(),
                g.edges.len()
            );
            positive(
                human,
                json!({
                    "command": "planar",
                    "verdict": "planar",
                    "vertices": g.vertex_count(),
                    "edges": g.edges.len(),
                }),
            )
        }
        Planarity::NonPlanar(w) => {
            let kind = match w.kind {
                WitnessKind::K5 => "K5",
                WitnessKind::K33 => "K3,3",
                WitnessKind::Unclassified => "unclassified",
            };
            let edges: Vec<[&str; 2]> = w
                .edges
                .iter()
                .map(|&(a, b)| [g.labels[a].as_str(), g.labels[b].as_str()])
                .collect();
            let branch: Vec<&str> = w
                .branch_vertices
                .iter()
                .map(|&v| g.labels[v].as_str())
                .collect();
            let _ = writeln!(
                human,
                "non-planar: {kind} subdivision through {}",
                branch.join(" ")
            );
            for [a, b] in &edges {
                let _ = writeln!(human, "  {a} -- {b}");
            }
            Report {
                human,
                machine: json!({
                    "command": "planar",
                    "verdict": "non-planar",
                    "vertices": g.vertex_count(),
                    "edges": g.edges.len(),
                    "witness": {"kind": kind, "branch": branch, "edges": edges},
                }),
                verdict: Verdict::Negative,
            }
        }
    })
}

#[derive(Serialize)]
struct ModelRow {
    name: String,
    target: String,
    pruning: bool,
    passed: bool,
    configs: usize,
    pruned_configs: usize,
    counterexample: Option<String>,
}

impl From<&ModelReport> for ModelRow {
    fn from(r: &ModelReport) -> ModelRow {
        ModelRow {
            name: r.name.clone(),
            target: r.target.clone(),
            pruning: r.pruning,
            passed: r.passed(),
            configs: r.report.configs,
            pruned_configs: r.report.pruned_configs,
            counterexample: r.report.counterexample.as_ref().map(|c| c.to_string()),
        }
    }
}

pub fn corpus_verify(model: Option<&str>) -> Result<Report, CliError> {
    let names = match model {
        Some(m) => {
            corpus::entry(m).map_err(|e| CliError::Usage(e.to_string()))?;
            vec![m.to_string()]
        }
        None => corpus::corpus_list(),
    };
    let rows: Vec<ModelRow> = names
        .par_iter()
        .map(|n| corpus::verify_model(n).map(|r| ModelRow::from(&r)))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Failed(e.to_string()))?;
    let failed = rows.iter().filter(|r| !r.passed).count();
    let mut human = String::new();
    for r in &rows {
        let mode = if r.pruning { "pruned" } else { "exact" };
        let mark = if r.passed { "pass" } else { "FAIL" };
        let _ = writeln!(
            human,
            "{mark} {} ~ {} ({mode}, {} configs)",
            r.name, r.target, r.pruned_configs
        );
        if let Some(c) = &r.counterexample {
            let _ = writeln!(human, "  {c}");
        }
    }
    let _ = writeln!(
        human,
        "{} of {} models pass",
        rows.len() - failed,
        rows.len()
    );
    Ok(Report {
        human,
        machine: json!({
            "command": "corpus verify",
            "passed": rows.len() - failed,
            "failed": failed,
            "models": rows,
        }),
        verdict: if failed == 0 {
            Verdict::Positive
        } else {
            Verdict::Negative
        },
    })
}

pub fn sat_compile(cnf: &Path, out: &Path, set: GadgetSet) -> Result<Report, CliError> {
    let f = files::read_cnf(cnf)?;
    let c = sat::compile(&f, set).map_err(|e| CliError::Failed(e.to_string()))?;
    files::write(out, &serialize_system(&c.system))?;
    let k = c.counts;
    let human = format!(
        "compiled {} variables, {} clauses ({set}): {} instances, {} crossovers, {} diodes\n",
        f.vars,
        f.clauses.len(),
        k.instances(),
        k.crossovers,
        k.diodes
    );
    Ok(positive(
        human,
        json!({
            "command": "sat compile",
            "set": set.as_str(),
            "vars": f.vars,
            "clauses": f.clauses.len(),
            "instances": k.instances(),
            "crossovers": k.crossovers,
            "diodes": k.diodes,
            "connections": c.system.connections().len(),
        }),
    ))
}

pub fn sat_check(cnf: &Path, sets: &[GadgetSet], max_configs: usize) -> Result<Report, CliError> {
    let f = files::read_cnf(cnf)?;
    let reports: Vec<_> = sets
        .par_iter()
        .map(|&set| sat::verify_reduction(&f, set, max_configs).map(|r| (set, r)))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Failed(e.to_string()))?;
    let mut human = String::new();
    let mut rows = Vec::new();
    let mut verdict = Verdict::Positive;
    for (set, r) in &reports {
        let _ = writeln!(human, "{set}: {}", r.summary());
        if !r.agrees() {
            verdict = match r.result {
                SolveResult::BudgetExceeded { .. } if verdict != Verdict::Negative => {
                    Verdict::Budget
                }
                _ => Verdict::Negative,
            };
        }
        rows.push(json!({
            "set": set.as_str(),
            "satisfiable": r.satisfiable,
            "verdict": r.result.verdict(),
            "agrees": r.agrees(),
            "visited": r.result.visited(),
            "moves": r.result.witness().map(|w| w.len()),
        }));
    }
    Ok(Report {
        human,
        machine: json!({"command": "sat check", "results": rows}),
        verdict,
    })
}

#[derive(Serialize)]
struct Sidecar<'a> {
    width: usize,
    height: usize,
    tunnel_len: usize,
    placements: Vec<PlacementRow<'a>>,
    routes: Vec<RouteRow>,
}

#[derive(Serialize)]
struct PlacementRow<'a> {
    instance: &'a str,
    x: usize,
    y: usize,
    w: usize,
    h: usize,
}

#[derive(Serialize)]
struct RouteRow {
    a: String,
    b: String,
    length: usize,
    tiles: Vec<(usize, usize)>,
}

fn sidecar(map: &Tilemap) -> Sidecar<'_> {
    Sidecar {
        width: map.width,
        height: map.height,
        tunnel_len: map.tunnel_len,
        placements: map
            .placements
            .iter()
            .map(|p| PlacementRow {
                instance: &p.name,
                x: p.x,
                y: p.y,
                w: p.w,
                h: p.h,
            })
            .collect(),
        routes: map
            .routes
            .iter()
            .map(|r| RouteRow {
                a: r.a.to_string(),
                b: r.b.to_string(),
                length: r.len(),
                tiles: r.tiles.clone(),
            })
            .collect(),
    }
}

/// `<level>.json` next to the level file.
pub fn sidecar_path(level: &Path) -> std::path::PathBuf {
    let mut name = level.as_os_str().to_owned();
    name.push(".json");
    name.into()
}

pub fn emit(path: &Path, out: &Path, tunnel_len: usize) -> Result<Report, CliError> {
    let s = files::read_system(path)?;
    let map = match emit_tilemap(&s, tunnel_len) {
        Ok(m) => m,
        Err(LevelError::NonPlanar) => {
            return Ok(Report {
                human: "non-planar: nothing emitted\n".into(),
                machine: json!({"command": "emit", "verdict": "non-planar"}),
                verdict: Verdict::Negative,
            });
        }
        Err(LevelError::ZeroTunnel) => {
            return Err(CliError::Usage(LevelError::ZeroTunnel.to_string()))
        }
        Err(e) => return Err(CliError::Failed(e.to_string())),
    };
    check_conservative(&map, &s)
        .map_err(|ports| CliError::Failed(format!("corridors join unrelated ports: {ports}")))?;
    files::write(out, &map.to_lvl())?;
    let side = serde_json::to_string(&sidecar(&map)).expect("sidecar serializes") + "\n";
    files::write(&sidecar_path(out), &side)?;
    let shortest = map.routes.iter().map(|r| r.len()).min();
    let human = format!(
        "emitted {}x{} level, {} tunnels, shortest {} tiles\n",
        map.width,
        map.height,
        map.routes.len(),
        shortest.unwrap_or(0)
    );
    Ok(positive(
        human,
        json!({
            "command": "emit",
            "verdict": "planar",
            "width": map.width,
            "height": map.height,
            "tunnels": map.routes.len(),
            "shortest_tunnel": shortest,
        }),
    ))
}

pub fn gen_counter(n: usize, out: &Path) -> Result<Report, CliError> {
    if n == 0 {
        return Err(CliError::Usage(
            "counter systems need at least one door".into(),
        ));
    }
    let s = gen_counter_system(n);
    files::write(out, &serialize_system(&s))?;
    Ok(positive(
        format!("counter system with {n} doors\n"),
        json!({
            "command": "gen counter",
            "doors": n,
            "connections": s.connections().len(),
        }),
    ))
}
