//! Independent oracles and seeded generators shared by the doorkit test
//! suites. Nothing here calls the solver, the compiler or the planarity
//! code of `doorkit-core`; only the data types are shared.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use doorkit_core::gadget::{Location, TraversalRule};
use doorkit_core::sat::CnfFormula;
use doorkit_core::text::parse_system;
use doorkit_core::{Endpoint, Gadget, System};
use rand::seq::SliceRandom;
use rand::Rng;

/// Agent position plus every instance's state, by name.
pub type Config = (Endpoint, Vec<String>);

fn initial(s: &System) -> Config {
    let states = s.instances().iter().map(|i| i.initial.clone()).collect();
    (Endpoint::Start, states)
}

/// Every configuration one move away from `c`.
pub fn successors(s: &System, c: &Config) -> Vec<Config> {
    let (agent, states) = c;
    let mut out = Vec::new();
    for conn in s.connections() {
        if let Some(other) = conn.other(agent) {
            out.push((other.clone(), states.clone()));
        }
        if conn.a == conn.b && conn.a == *agent {
            out.push((agent.clone(), states.clone()));
        }
    }
    if let Endpoint::Port { instance, location } = agent {
        let ix = s
            .instances()
            .iter()
            .position(|i| &i.id == instance)
            .unwrap();
        let g = s.gadget_of(instance).unwrap();
        for r in g.rules() {
            if &r.entry == location && r.pre == states[ix] {
                let mut next = states.clone();
                next[ix] = r.post.clone();
                out.push((Endpoint::port(instance.as_str(), r.exit.as_str()), next));
            }
        }
    }
    out
}

/// All configurations reachable from the initial one, by depth-first search.
pub fn reachable_set(s: &System) -> HashSet<Config> {
    let mut seen = HashSet::new();
    let mut stack = vec![initial(s)];
    while let Some(c) = stack.pop() {
        if seen.insert(c.clone()) {
            stack.extend(successors(s, &c).into_iter().filter(|n| !seen.contains(n)));
        }
    }
    seen
}

/// Length of the shortest move sequence reaching the goal, or `None` when
/// the goal is unreachable. Iterative deepening over the exhaustive set.
pub fn dfs_oracle(s: &System) -> Option<usize> {
    let all = reachable_set(s);
    if !all.iter().any(|(a, _)| *a == Endpoint::Goal) {
        return None;
    }
    for limit in 0..=all.len() {
        let mut best: HashMap<Config, usize> = HashMap::new();
        if bounded(s, &initial(s), limit, &mut best) {
            return Some(limit);
        }
    }
    unreachable!("goal is in the reachable set")
}

fn bounded(s: &System, c: &Config, budget: usize, best: &mut HashMap<Config, usize>) -> bool {
    if c.0 == Endpoint::Goal {
        return true;
    }
    if budget == 0 || best.get(c).is_some_and(|&b| b >= budget) {
        return false;
    }
    best.insert(c.clone(), budget);
    successors(s, c)
        .iter()
        .any(|n| bounded(s, n, budget - 1, best))
}

/// Random inline gadget with `locs` locations (the first exposed) and
/// `states` states.
pub fn random_gadget(rng: &mut impl Rng, name: &str, locs: usize, states: usize) -> Gadget {
    let locations: Vec<Location> = (0..locs)
        .map(|i| {
            if i == 0 || rng.gen_bool(0.8) {
                Location::exposed(format!("l{i}"))
            } else {
                Location::internal(format!("l{i}"))
            }
        })
        .collect();
    let state_names: Vec<String> = (0..states).map(|i| format!("s{i}")).collect();
    let mut rules = BTreeSet::new();
    for _ in 0..rng.gen_range(0..=2 * locs + 1) {
        rules.insert(TraversalRule::new(
            locations.choose(rng).unwrap().id.clone(),
            locations.choose(rng).unwrap().id.clone(),
            state_names.choose(rng).unwrap().clone(),
            state_names.choose(rng).unwrap().clone(),
        ));
    }
    Gadget::new(name, locations, state_names, rules.into_iter().collect())
}

/// Random valid system with up to `max_instances` instances of up to
/// `max_states` states each.
pub fn random_system(rng: &mut impl Rng, max_instances: usize, max_states: usize) -> System {
    let n = rng.gen_range(1..=max_instances);
    let mut b = System::builder();
    let mut ports = Vec::new();
    for i in 0..n {
        let (locs, states) = (rng.gen_range(1..=4), rng.gen_range(1..=max_states));
        let g = random_gadget(rng, &format!("t{i}"), locs, states);
        let id = format!("g{i}");
        let init = g.states().choose(rng).unwrap().clone();
        for l in g.exposed_locations() {
            ports.push(Endpoint::port(id.as_str(), l.id.as_str()));
        }
        b = b.inline(g).instance(&id, &format!("t{i}"), &init);
    }
    b = b.connect(Endpoint::Start, ports.choose(rng).unwrap().clone());
    b = b.connect(ports.choose(rng).unwrap().clone(), Endpoint::Goal);
    for _ in 0..rng.gen_range(0..=2 * n + 1) {
        b = b.connect(
            ports.choose(rng).unwrap().clone(),
            ports.choose(rng).unwrap().clone(),
        );
    }
    b.build()
}

/// Random CNF with clauses of exactly `min(3, vars)` distinct variables.
pub fn random_3cnf(rng: &mut impl Rng, vars: usize, clauses: usize) -> CnfFormula {
    let vs: Vec<i32> = (1..=vars as i32).collect();
    let width = vars.min(3);
    let clauses = (0..clauses)
        .map(|_| {
            vs.choose_multiple(rng, width)
                .map(|&v| if rng.gen() { v } else { -v })
                .collect()
        })
        .collect();
    CnfFormula { vars, clauses }
}

/// Every clause over `vars` variables with one to three distinct variables,
/// literals in variable order.
pub fn all_clauses(vars: usize) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << vars) {
        let chosen: Vec<i32> = (0..vars as i32)
            .filter(|v| mask & (1 << v) != 0)
            .map(|v| v + 1)
            .collect();
        if chosen.len() > 3 {
            continue;
        }
        for signs in 0u32..(1 << chosen.len()) {
            out.push(
                chosen
                    .iter()
                    .enumerate()
                    .map(|(k, &v)| if signs & (1 << k) != 0 { -v } else { v })
                    .collect(),
            );
        }
    }
    out
}

fn flip(clauses: &[Vec<i32>], mask: u32) -> Vec<Vec<i32>> {
    let mut out: Vec<Vec<i32>> = clauses
        .iter()
        .map(|c| {
            c.iter()
                .map(|&l| {
                    if mask & (1 << (l.unsigned_abs() - 1)) != 0 {
                        -l
                    } else {
                        l
                    }
                })
                .collect()
        })
        .collect();
    out.sort();
    out
}

/// Formulas with `1..=vars` variables and `1..=max_clauses` distinct
/// clauses, one representative per orbit under flipping variable signs.
/// Every variable occurs in some clause.
pub fn canonical_sweep(vars: usize, max_clauses: usize) -> Vec<CnfFormula> {
    let mut out = Vec::new();
    for n in 1..=vars {
        let pool = all_clauses(n);
        let mut seen = BTreeSet::new();
        let mut pick = Vec::new();
        choose(&pool, 0, max_clauses, &mut pick, &mut |set: &[usize]| {
            let clauses: Vec<Vec<i32>> = set.iter().map(|&i| pool[i].clone()).collect();
            let used: BTreeSet<u32> = clauses.iter().flatten().map(|l| l.unsigned_abs()).collect();
            if used.len() != n {
                return;
            }
            let canon = (0..1u32 << n).map(|m| flip(&clauses, m)).min().unwrap();
            if seen.insert(canon.clone()) {
                out.push(CnfFormula {
                    vars: n,
                    clauses: canon,
                });
            }
        });
    }
    out
}

fn choose(
    pool: &[Vec<i32>],
    from: usize,
    left: usize,
    pick: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if !pick.is_empty() {
        f(pick);
    }
    if left == 0 {
        return;
    }
    for i in from..pool.len() {
        pick.push(i);
        choose(pool, i + 1, left - 1, pick, f);
        pick.pop();
    }
}

/// Exact minimal counter length: one flip of the top door needs the
/// lower doors cycled twice.
pub fn counter_length(n: usize) -> usize {
    (1usize << (n + 1)) - 2
}

/// A fixture system paired with an independently computed verdict.
#[derive(Clone, Debug)]
pub struct PlanarityCase {
    pub planar: bool,
    pub text: String,
    pub system: System,
}

pub const PLANARITY_RANDOM: &str = include_str!("../fixtures/planarity_random.txt");
pub const K5: &str = include_str!("../fixtures/k5.sys");
pub const K33: &str = include_str!("../fixtures/k33.sys");

/// The networkx-labelled random systems followed by K5 and K3,3.
pub fn planarity_cases() -> Vec<PlanarityCase> {
    let mut out = Vec::new();
    for block in PLANARITY_RANDOM.split("=== ").filter(|b| !b.is_empty()) {
        let (label, text) = block.split_once('\n').unwrap();
        out.push(PlanarityCase {
            planar: label == "planar",
            text: text.to_string(),
            system: parse_system(text).unwrap(),
        });
    }
    for text in [K5, K33] {
        out.push(PlanarityCase {
            planar: false,
            text: text.to_string(),
            system: parse_system(text).unwrap(),
        });
    }
    out
}

/// Boundary words of length up to `max_len` legal in a gadget from
/// `initial`, where a word is a list of (entry, exit) pairs.
pub fn gadget_words(g: &Gadget, initial: &str, max_len: usize) -> BTreeSet<Vec<(String, String)>> {
    let mut words = BTreeSet::new();
    let mut frontier: BTreeMap<Vec<(String, String)>, BTreeSet<String>> = BTreeMap::new();
    frontier.insert(Vec::new(), BTreeSet::from([initial.to_string()]));
    for _ in 0..max_len {
        let mut next: BTreeMap<Vec<(String, String)>, BTreeSet<String>> = BTreeMap::new();
        for (w, states) in &frontier {
            for st in states {
                for r in g.rules().iter().filter(|r| &r.pre == st) {
                    let mut w2 = w.clone();
                    w2.push((r.entry.clone(), r.exit.clone()));
                    next.entry(w2).or_default().insert(r.post.clone());
                }
            }
        }
        words.extend(next.keys().cloned());
        frontier = next;
    }
    words
}

pub const CNF_RATIO_426: &str = include_str!("../fixtures/cnf_ratio_426.txt");

/// DIMACS texts of the ratio-4.26 fixtures with their brute-force labels.
pub fn cnf_ratio_cases() -> Vec<(bool, String)> {
    CNF_RATIO_426
        .split("%\n")
        .map(|t| (t.starts_with("c sat"), t.to_string()))
        .collect()
}
