//! Boundary behavior of candidate subsystems, the simulation preorder over
//! their rest configurations, dominated-outcome pruning, and equivalence
//! against a target gadget.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::gadget::Gadget;
use crate::solver::compiled::{Compiled, Store};
use crate::system::{validate_candidate, Endpoint, System};

pub const DEFAULT_MAX_REST_CONFIGS: usize = 4096;

/// A candidate system without terminals plus its boundary endpoints.
/// The initial configuration is given by the instances' initial states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateBoundary {
    pub system: System,
    pub boundary: Vec<Endpoint>,
    /// Boundary entries the environment promises to use at most once; their
    /// post-configurations are never explored and only exits are compared.
    pub once: Vec<Endpoint>,
}

impl CandidateBoundary {
    pub fn new(system: System, boundary: Vec<Endpoint>) -> Self {
        CandidateBoundary {
            system,
            boundary,
            once: Vec::new(),
        }
    }

    /// A single gadget as its own candidate: one instance `g` in `initial`
    /// with every exposed location on the boundary.
    pub fn from_gadget(gadget: &Gadget, initial: &str) -> Self {
        let system = System::builder()
            .inline(gadget.clone())
            .instance("g", gadget.name(), initial)
            .build();
        let boundary = gadget
            .exposed_locations()
            .map(|l| Endpoint::port("g", l.id.as_str()))
            .collect();
        CandidateBoundary::new(system, boundary)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EquivError {
    #[error("invalid candidate: {0}")]
    InvalidCandidate(String),
    #[error("ill-formed port map: {0}")]
    PortMap(String),
    #[error("more than {0} rest configurations")]
    BudgetExceeded(usize),
}

/// `(exit, post configuration)` pairs.
pub type OutcomeSet = BTreeSet<(usize, Option<usize>)>;

/// Achievable boundary outcomes from every rest configuration reachable
/// from the initial one. Configuration 0 is the initial configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Behavior {
    pub instances: Vec<String>,
    pub state_names: Vec<Vec<String>>,
    pub boundary: Vec<Endpoint>,
    pub once: Vec<bool>,
    /// State index per instance for each rest configuration.
    pub configs: Vec<Vec<u32>>,
    /// `outcomes[config][entry]`: `(exit, post)` pairs; `post` is `None` for
    /// once-only entries.
    pub outcomes: Vec<Vec<OutcomeSet>>,
}

impl Behavior {
    /// `inst:state+inst:state` in instance order.
    pub fn config_name(&self, c: usize) -> String {
        let mut out = String::new();
        for (i, &s) in self.configs[c].iter().enumerate() {
            if i > 0 {
                out.push('+');
            }
            out.push_str(&self.instances[i]);
            out.push(':');
            out.push_str(&self.state_names[i][s as usize]);
        }
        out
    }

    pub fn config_index(&self, name: &str) -> Option<usize> {
        (0..self.configs.len()).find(|&c| self.config_name(c) == name)
    }

    /// Every `(entry, exit, pre, post)` quadruple.
    pub fn quadruples(&self) -> BTreeSet<(usize, usize, usize, Option<usize>)> {
        let mut out = BTreeSet::new();
        for (c, per_entry) in self.outcomes.iter().enumerate() {
            for (e, set) in per_entry.iter().enumerate() {
                for &(x, p) in set {
                    out.insert((e, x, c, p));
                }
            }
        }
        out
    }

    /// Configurations reachable from configuration 0 through outcomes.
    pub fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.configs.len()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(c) = queue.pop_front() {
            order.push(c);
            for set in &self.outcomes[c] {
                for &(_, p) in set {
                    if let Some(p) = p {
                        if !seen[p] {
                            seen[p] = true;
                            queue.push_back(p);
                        }
                    }
                }
            }
        }
        order
    }
}

/// Computes the behavior of `c` over at most `max_configs` rest configurations.
pub fn boundary_behavior(
    c: &CandidateBoundary,
    max_configs: usize,
) -> Result<Behavior, EquivError> {
    if let Some(v) = validate_candidate(&c.system).first() {
        return Err(EquivError::InvalidCandidate(v.to_string()));
    }
    let mut seen = BTreeSet::new();
    for e in &c.boundary {
        if e.is_terminal() || !seen.insert(e) {
            return Err(EquivError::InvalidCandidate(alloc::format!(
                "bad boundary endpoint `{e}`"
            )));
        }
        let exposed = e
            .instance()
            .and_then(|i| c.system.gadget_of(i))
            .zip(match e {
                Endpoint::Port { location, .. } => Some(location),
                _ => None,
            })
            .and_then(|(g, l)| g.location(l))
            .is_some_and(|l| l.is_exposed());
        if !exposed {
            return Err(EquivError::InvalidCandidate(alloc::format!(
                "boundary endpoint `{e}` is not exposed"
            )));
        }
    }

    let comp = Compiled::new(&c.system);
    let boundary_pos: Vec<usize> = c
        .boundary
        .iter()
        .map(|e| comp.position(e).unwrap())
        .collect();
    let once: Vec<bool> = c.boundary.iter().map(|e| c.once.contains(e)).collect();
    let exit_index = |pos: usize| boundary_pos.iter().position(|&p| p == pos);

    let mut rest = Store::new(comp.words.max(1));
    let pad = |s: Vec<u64>| if s.is_empty() { vec![0] } else { s };
    rest.insert(&pad(comp.initial_states()));
    let mut outcomes: Vec<Vec<OutcomeSet>> = Vec::new();

    let mut next_rest = 0;
    while next_rest < rest.len() {
        let states: Vec<u64> = rest.get(next_rest).to_vec();
        let mut per_entry = Vec::with_capacity(boundary_pos.len());
        for (ei, &entry) in boundary_pos.iter().enumerate() {
            let mut set = BTreeSet::new();
            for (pos, post) in inner_search(&comp, entry, &states, &boundary_pos) {
                let x = exit_index(pos).unwrap();
                if once[ei] {
                    set.insert((x, None));
                } else {
                    let (id, _) = rest.insert(&post);
                    if rest.len() > max_configs {
                        return Err(EquivError::BudgetExceeded(max_configs));
                    }
                    set.insert((x, Some(id)));
                }
            }
            per_entry.push(set);
        }
        outcomes.push(per_entry);
        next_rest += 1;
    }

    let n_inst = c.system.instances().len();
    let configs = (0..rest.len())
        .map(|id| {
            let s = rest.get(id);
            (0..n_inst).map(|i| comp.get(s, i)).collect()
        })
        .collect();
    Ok(Behavior {
        instances: c.system.instances().iter().map(|i| i.id.clone()).collect(),
        state_names: comp.gadgets.iter().map(|g| g.states().to_vec()).collect(),
        boundary: c.boundary.clone(),
        once,
        configs,
        outcomes,
    })
}

/// Boundary arrivals from `entry` in `states`: `(position, post states)`.
fn inner_search(
    comp: &Compiled<'_>,
    entry: usize,
    states: &[u64],
    boundary: &[usize],
) -> Vec<(usize, Vec<u64>)> {
    let width = states.len();
    let mut store = Store::new(1 + width);
    let mut key = Vec::with_capacity(1 + width);
    key.push(entry as u64);
    key.extend_from_slice(states);
    store.insert(&key);
    let mut queue = VecDeque::from([0usize]);
    let mut out = Vec::new();
    let traversed_bit = 1u64 << 63;

    let visit = |key: &[u64],
                 store: &mut Store,
                 queue: &mut VecDeque<usize>,
                 out: &mut Vec<(usize, Vec<u64>)>| {
        let (id, new) = store.insert(key);
        if !new {
            return;
        }
        let pos = (key[0] & !traversed_bit) as usize;
        let traversed = key[0] & traversed_bit != 0;
        if boundary.contains(&pos) && (pos != entry || traversed) {
            out.push((pos, key[1..].to_vec()));
        } else {
            queue.push_back(id);
        }
    };

    let mut next = key.clone();
    while let Some(id) = queue.pop_front() {
        let cur: Vec<u64> = store.get(id).to_vec();
        let pos = (cur[0] & !traversed_bit) as usize;
        for r in &comp.rules[pos] {
            if comp.get(&cur[1..], r.inst) != r.pre {
                continue;
            }
            next.copy_from_slice(&cur);
            next[0] = r.exit as u64 | traversed_bit;
            comp.set(&mut next[1..], r.inst, r.post);
            visit(&next, &mut store, &mut queue, &mut out);
        }
        for &(to, _) in &comp.walks[pos] {
            next.copy_from_slice(&cur);
            next[0] = to as u64 | (cur[0] & traversed_bit);
            visit(&next, &mut store, &mut queue, &mut out);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// `rel[a][b]` holds when configuration `a` simulates `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preorder {
    rel: Vec<Vec<bool>>,
}

impl Preorder {
    pub fn len(&self) -> usize {
        self.rel.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rel.is_empty()
    }

    pub fn simulates(&self, a: usize, b: usize) -> bool {
        self.rel[a][b]
    }

    /// `a` simulates `b` but not the other way round.
    pub fn strictly_above(&self, a: usize, b: usize) -> bool {
        self.rel[a][b] && !self.rel[b][a]
    }
}

/// Greatest simulation relation over the configurations of `b`.
pub fn simulation_preorder(b: &Behavior) -> Preorder {
    let n = b.configs.len();
    let mut rel = vec![vec![true; n]; n];
    loop {
        let mut changed = false;
        for c1 in 0..n {
            for c2 in 0..n {
                if !rel[c1][c2] {
                    continue;
                }
                let ok = b.outcomes[c2]
                    .iter()
                    .zip(&b.outcomes[c1])
                    .all(|(low, high)| {
                        low.iter().all(|&(x, p2)| {
                            high.iter().any(|&(y, p1)| {
                                y == x
                                    && match (p1, p2) {
                                        (Some(p1), Some(p2)) => rel[p1][p2],
                                        _ => true,
                                    }
                            })
                        })
                    });
                if !ok {
                    rel[c1][c2] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return Preorder { rel };
        }
    }
}

/// Keeps, per configuration, entry and exit, only maximal posts; mutually
/// similar posts collapse to the lexicographically smallest configuration.
pub fn prune_dominated(b: &Behavior, pre: &Preorder) -> Behavior {
    let mut out = b.clone();
    for (c, per_entry) in b.outcomes.iter().enumerate() {
        for (e, set) in per_entry.iter().enumerate() {
            let mut kept = BTreeSet::new();
            for &(x, p) in set {
                let Some(p) = p else {
                    kept.insert((x, None));
                    continue;
                };
                let rivals: Vec<usize> = set
                    .iter()
                    .filter(|o| o.0 == x)
                    .filter_map(|o| o.1)
                    .collect();
                let dominated = rivals.iter().any(|&q| {
                    pre.strictly_above(q, p)
                        || (q != p
                            && pre.simulates(q, p)
                            && pre.simulates(p, q)
                            && (&b.configs[q], q) < (&b.configs[p], p))
                });
                if !dominated {
                    kept.insert((x, Some(p)));
                }
            }
            out.outcomes[c][e] = kept;
        }
    }
    out
}

/// Partial map from candidate configuration names to target states.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AbstractionMap {
    pub map: BTreeMap<String, String>,
}

impl AbstractionMap {
    pub fn new(pairs: impl IntoIterator<Item = (String, String)>) -> Self {
        AbstractionMap {
            map: pairs.into_iter().collect(),
        }
    }

    pub fn get(&self, config: &str) -> Option<&str> {
        self.map.get(config).map(String::as_str)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counterexample {
    /// A pruned-reachable configuration has no abstract state.
    MissingAbstraction { config: String },
    InitialMismatch {
        config: String,
        expected: String,
        found: Option<String>,
    },
    /// Outcomes from `config` entering at `entry` differ from the target;
    /// pairs are `(target exit, target post state)`.
    BehaviorMismatch {
        config: String,
        entry: String,
        missing: Vec<(String, String)>,
        extra: Vec<(String, String)>,
    },
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::MissingAbstraction { config } => {
                write!(
                    f,
                    "configuration `{config}` is reachable but has no abstract state"
                )
            }
            Counterexample::InitialMismatch {
                config,
                expected,
                found,
            } => write!(
                f,
                "initial configuration `{config}` maps to {} instead of `{expected}`",
                found.as_deref().unwrap_or("nothing")
            ),
            Counterexample::BehaviorMismatch {
                config,
                entry,
                missing,
                extra,
            } => {
                write!(f, "from `{config}` entering `{entry}`:")?;
                for (x, s) in missing {
                    write!(f, " missing ({entry},{x},{s})")?;
                }
                for (x, s) in extra {
                    write!(f, " extra ({entry},{x},{s})")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub counterexample: Option<Counterexample>,
    /// Rest configurations reachable without pruning.
    pub configs: usize,
    /// Rest configurations reachable after pruning (equal to `configs`
    /// when pruning is off).
    pub pruned_configs: usize,
}

impl EquivalenceReport {
    pub fn is_equivalent(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks the candidate against `target` started in `target_initial`.
///
/// `ports` maps each target location to a boundary endpoint.
pub fn check_equivalence(
    c: &CandidateBoundary,
    target: &Gadget,
    target_initial: &str,
    alpha: &AbstractionMap,
    ports: &BTreeMap<String, Endpoint>,
    pruning: bool,
) -> Result<EquivalenceReport, EquivError> {
    let target_locs: BTreeSet<&str> = target.locations().iter().map(|l| l.id.as_str()).collect();
    let mapped: BTreeSet<&str> = ports.keys().map(String::as_str).collect();
    if target_locs != mapped {
        return Err(EquivError::PortMap(
            "port map must cover exactly the target locations".into(),
        ));
    }
    let images: BTreeSet<&Endpoint> = ports.values().collect();
    let boundary: BTreeSet<&Endpoint> = c.boundary.iter().collect();
    if images.len() != ports.len() || images != boundary {
        return Err(EquivError::PortMap(
            "port map must be a bijection onto the boundary".into(),
        ));
    }
    if !target.has_state(target_initial) {
        return Err(EquivError::PortMap(alloc::format!(
            "target has no state `{target_initial}`"
        )));
    }

    let b = boundary_behavior(c, DEFAULT_MAX_REST_CONFIGS)?;
    let pb = if pruning {
        prune_dominated(&b, &simulation_preorder(&b))
    } else {
        b.clone()
    };
    let reachable = pb.reachable();
    let mut report = EquivalenceReport {
        counterexample: None,
        configs: b.configs.len(),
        pruned_configs: reachable.len(),
    };

    let target_loc_of = |bi: usize| -> String {
        ports
            .iter()
            .find(|(_, e)| **e == b.boundary[bi])
            .map(|(k, _)| k.clone())
            .unwrap()
    };

    let abs = |cfg: usize| alpha.get(&pb.config_name(cfg));
    for &cfg in &reachable {
        if abs(cfg).is_none() {
            report.counterexample = Some(Counterexample::MissingAbstraction {
                config: pb.config_name(cfg),
            });
            return Ok(report);
        }
    }
    if abs(0) != Some(target_initial) {
        report.counterexample = Some(Counterexample::InitialMismatch {
            config: pb.config_name(0),
            expected: target_initial.to_string(),
            found: abs(0).map(str::to_string),
        });
        return Ok(report);
    }

    for &cfg in &reachable {
        let state = abs(cfg).unwrap();
        for (ei, set) in pb.outcomes[cfg].iter().enumerate() {
            let entry = target_loc_of(ei);
            let once = pb.once[ei];
            let got: BTreeSet<(String, String)> = set
                .iter()
                .map(|&(x, p)| {
                    let post = match p {
                        Some(p) if !once => abs(p).unwrap().to_string(),
                        _ => String::new(),
                    };
                    (target_loc_of(x), post)
                })
                .collect();
            let expected: BTreeSet<(String, String)> = target
                .rules()
                .iter()
                .filter(|r| r.entry == entry && r.pre == state)
                .map(|r| {
                    (
                        r.exit.clone(),
                        if once { String::new() } else { r.post.clone() },
                    )
                })
                .collect();
            if got != expected {
                report.counterexample = Some(Counterexample::BehaviorMismatch {
                    config: pb.config_name(cfg),
                    entry,
                    missing: expected.difference(&got).cloned().collect(),
                    extra: got.difference(&expected).cloned().collect(),
                });
                return Ok(report);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::{canonical_door, DoorKind};

    fn identity(g: &Gadget) -> (AbstractionMap, BTreeMap<String, Endpoint>) {
        let alpha = AbstractionMap::new(
            g.states()
                .iter()
                .map(|s| (alloc::format!("g:{s}"), s.clone())),
        );
        let ports = g
            .locations()
            .iter()
            .map(|l| (l.id.clone(), Endpoint::port("g", l.id.as_str())))
            .collect();
        (alpha, ports)
    }

    #[test]
    fn canonical_door_behavior_is_its_rules() {
        for kind in DoorKind::ALL {
            let g = canonical_door(kind);
            let c = CandidateBoundary::from_gadget(&g, "Open");
            let b = boundary_behavior(&c, 16).unwrap();
            let mut quads = BTreeSet::new();
            for (e, x, pre, post) in b.quadruples() {
                let name = |i: usize| b.boundary[i].to_string()["g.".len()..].to_string();
                let st = |c: usize| b.state_names[0][b.configs[c][0] as usize].clone();
                quads.insert((name(e), name(x), st(pre), st(post.unwrap())));
            }
            let rules: BTreeSet<_> = g
                .rules()
                .iter()
                .map(|r| {
                    (
                        r.entry.clone(),
                        r.exit.clone(),
                        r.pre.clone(),
                        r.post.clone(),
                    )
                })
                .collect();
            assert_eq!(quads, rules, "{kind:?}");
        }
    }

    #[test]
    fn canonical_door_is_equivalent_to_itself() {
        for kind in DoorKind::ALL {
            let g = canonical_door(kind);
            for init in ["Open", "Closed"] {
                let c = CandidateBoundary::from_gadget(&g, init);
                let (alpha, ports) = identity(&g);
                for pruning in [false, true] {
                    let r = check_equivalence(&c, &g, init, &alpha, &ports, pruning).unwrap();
                    assert!(r.is_equivalent(), "{kind:?} {init} {:?}", r.counterexample);
                }
            }
        }
    }

    #[test]
    fn preorder_is_reflexive() {
        let g = canonical_door(DoorKind::OpenClose);
        let b = boundary_behavior(&CandidateBoundary::from_gadget(&g, "Closed"), 16).unwrap();
        let pre = simulation_preorder(&b);
        for c in 0..pre.len() {
            assert!(pre.simulates(c, c));
        }
        // Open can do everything Closed can, and also traverse.
        let open = b.config_index("g:Open").unwrap();
        let closed = b.config_index("g:Closed").unwrap();
        assert!(pre.strictly_above(open, closed));
    }

    #[test]
    fn bad_port_map_is_rejected() {
        let g = canonical_door(DoorKind::SelfClosing);
        let c = CandidateBoundary::from_gadget(&g, "Open");
        let (alpha, mut ports) = identity(&g);
        ports.insert("O".into(), Endpoint::port("g", "T_in"));
        assert!(matches!(
            check_equivalence(&c, &g, "Open", &alpha, &ports, false),
            Err(EquivError::PortMap(_))
        ));
    }
}
