//! Reachability by breadth-first search over configurations.

pub(crate) mod compiled;
mod counter;
mod replay;

pub use counter::gen_counter_system;
pub use replay::{verify_witness, Verdict};

use alloc::collections::VecDeque;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::error::DomainError;
use crate::gadget::TraversalRule;
use crate::system::{validate_system, Endpoint, System};
use compiled::{Compiled, Store};

pub const DEFAULT_MAX_CONFIGS: usize = 10_000_000;

/// A configuration in readable form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub agent: Endpoint,
    /// State id per instance, in instance order.
    pub states: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    /// Walk a connection from `from` to `to`.
    Walk { from: Endpoint, to: Endpoint },
    Traverse {
        instance: String,
        rule: TraversalRule,
    },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Walk { from, to } => write!(f, "walk {from} {to}"),
            Move::Traverse { instance, rule } => write!(
                f,
                "traverse {instance} {}->{} {}->{}",
                rule.entry, rule.exit, rule.pre, rule.post
            ),
        }
    }
}

impl Move {
    pub fn is_traverse(&self) -> bool {
        matches!(self, Move::Traverse { .. })
    }

    /// Parses one line of the witness text format.
    pub fn parse(line: &str) -> Option<Move> {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["walk", a, b] => Some(Move::Walk {
                from: Endpoint::parse(a)?,
                to: Endpoint::parse(b)?,
            }),
            ["traverse", inst, path, states] => {
                let (entry, exit) = path.split_once("->")?;
                let (pre, post) = states.split_once("->")?;
                Some(Move::Traverse {
                    instance: inst.to_string(),
                    rule: TraversalRule::new(entry, exit, pre, post),
                })
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Witness {
    pub moves: Vec<Move>,
}

impl Witness {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn traverse_count(&self) -> usize {
        self.moves.iter().filter(|m| m.is_traverse()).count()
    }

    /// One move per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for m in &self.moves {
            let _ = writeln!(out, "{m}");
        }
        out
    }

    /// Inverse of [`Witness::to_text`]; blank lines are skipped. Returns the
    /// 1-based number of the first bad line on failure.
    pub fn parse(text: &str) -> Result<Witness, usize> {
        let mut moves = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            moves.push(Move::parse(line).ok_or(i + 1)?);
        }
        Ok(Witness { moves })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Reachable { witness: Witness, visited: usize },
    Unreachable { visited: usize },
    BudgetExceeded { visited: usize },
}

impl SolveResult {
    pub fn verdict(&self) -> &'static str {
        match self {
            SolveResult::Reachable { .. } => "reachable",
            SolveResult::Unreachable { .. } => "unreachable",
            SolveResult::BudgetExceeded { .. } => "budget-exceeded",
        }
    }

    pub fn visited(&self) -> usize {
        match self {
            SolveResult::Reachable { visited, .. }
            | SolveResult::Unreachable { visited }
            | SolveResult::BudgetExceeded { visited } => *visited,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SolveResult::Reachable { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn is_reachable(&self) -> bool {
        matches!(self, SolveResult::Reachable { .. })
    }
}

/// Count of reachable configurations, or how many were seen before the
/// budget ran out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConfigCount {
    Complete(usize),
    BudgetExceeded(usize),
}

fn check(s: &System, max_configs: usize) -> Result<(), DomainError> {
    if max_configs == 0 {
        return Err(DomainError::ZeroBudget);
    }
    if let Some(v) = validate_system(s).first() {
        return Err(DomainError::InvalidSystem(v.to_string()));
    }
    Ok(())
}

#[derive(Clone, Copy)]
enum Step {
    Root,
    Walk {
        parent: usize,
        from: usize,
        to: usize,
    },
    Traverse {
        parent: usize,
        inst: usize,
        rule: usize,
    },
}

struct Search<'s> {
    c: Compiled<'s>,
    store: Store,
    steps: Vec<Step>,
}

enum Outcome {
    Goal(usize),
    Exhausted,
    Budget,
}

impl<'s> Search<'s> {
    fn new(s: &'s System) -> Self {
        let c = Compiled::new(s);
        let store = Store::new(1 + c.words);
        Search {
            c,
            store,
            steps: Vec::new(),
        }
    }

    /// BFS from the initial configuration; stops at the first goal
    /// configuration when `stop_at_goal`.
    fn run(&mut self, max_configs: usize, stop_at_goal: bool) -> Outcome {
        let mut key = Vec::with_capacity(1 + self.c.words);
        key.push(self.c.start as u64);
        key.extend(self.c.initial_states());
        self.store.insert(&key);
        self.steps.push(Step::Root);
        let mut queue = VecDeque::from([0usize]);
        let mut next = key.clone();

        let Search { c, store, steps } = self;
        let goal = stop_at_goal.then_some(c.goal);
        while let Some(id) = queue.pop_front() {
            let cur: Vec<u64> = store.get(id).to_vec();
            let pos = cur[0] as usize;
            for r in &c.rules[pos] {
                if c.get(&cur[1..], r.inst) != r.pre {
                    continue;
                }
                next.copy_from_slice(&cur);
                next[0] = r.exit as u64;
                c.set(&mut next[1..], r.inst, r.post);
                let step = Step::Traverse {
                    parent: id,
                    inst: r.inst,
                    rule: r.rule,
                };
                if let Some(o) = push(
                    store,
                    steps,
                    &next,
                    step,
                    r.exit,
                    max_configs,
                    goal,
                    &mut queue,
                ) {
                    return o;
                }
            }
            for &(to, _) in &c.walks[pos] {
                next.copy_from_slice(&cur);
                next[0] = to as u64;
                let step = Step::Walk {
                    parent: id,
                    from: pos,
                    to,
                };
                if let Some(o) = push(store, steps, &next, step, to, max_configs, goal, &mut queue)
                {
                    return o;
                }
            }
        }
        Outcome::Exhausted
    }
}

#[allow(clippy::too_many_arguments)]
fn push(
    store: &mut Store,
    steps: &mut Vec<Step>,
    key: &[u64],
    step: Step,
    pos: usize,
    max_configs: usize,
    goal: Option<usize>,
    queue: &mut VecDeque<usize>,
) -> Option<Outcome> {
    if store.find(key).is_some() {
        return None;
    }
    if store.len() >= max_configs {
        return Some(Outcome::Budget);
    }
    let (id, _) = store.insert(key);
    steps.push(step);
    if goal == Some(pos) {
        return Some(Outcome::Goal(id));
    }
    queue.push_back(id);
    None
}

impl<'s> Search<'s> {
    fn witness(&self, mut id: usize) -> Witness {
        let mut moves = Vec::new();
        loop {
            match self.steps[id] {
                Step::Root => break,
                Step::Walk { parent, from, to } => {
                    moves.push(Move::Walk {
                        from: self.c.endpoint(from),
                        to: self.c.endpoint(to),
                    });
                    id = parent;
                }
                Step::Traverse { parent, inst, rule } => {
                    moves.push(Move::Traverse {
                        instance: self.c.system.instances()[inst].id.clone(),
                        rule: self.c.gadgets[inst].rules()[rule].clone(),
                    });
                    id = parent;
                }
            }
        }
        moves.reverse();
        Witness { moves }
    }
}

/// Shortest witness from `start` to `goal`, if any, exploring at most
/// `max_configs` configurations.
pub fn solve(s: &System, max_configs: usize) -> Result<SolveResult, DomainError> {
    check(s, max_configs)?;
    let mut search = Search::new(s);
    Ok(match search.run(max_configs, true) {
        Outcome::Goal(id) => SolveResult::Reachable {
            witness: search.witness(id),
            visited: search.store.len(),
        },
        Outcome::Exhausted => SolveResult::Unreachable {
            visited: search.store.len(),
        },
        Outcome::Budget => SolveResult::BudgetExceeded {
            visited: search.store.len(),
        },
    })
}

/// Number of configurations reachable from the initial one.
pub fn enumerate_configs(s: &System, max_configs: usize) -> Result<ConfigCount, DomainError> {
    check(s, max_configs)?;
    let mut search = Search::new(s);
    Ok(match search.run(max_configs, false) {
        Outcome::Budget => ConfigCount::BudgetExceeded(search.store.len()),
        _ => ConfigCount::Complete(search.store.len()),
    })
}

/// All configurations reachable from the initial one, in discovery order.
pub fn reachable_configs(
    s: &System,
    max_configs: usize,
) -> Result<Vec<Configuration>, DomainError> {
    check(s, max_configs)?;
    let mut search = Search::new(s);
    if let Outcome::Budget = search.run(max_configs, false) {
        return Err(DomainError::BudgetExceeded(max_configs));
    }
    Ok((0..search.store.len())
        .map(|id| {
            let key = search.store.get(id);
            let states = search
                .c
                .unpack(&key[1..])
                .iter()
                .zip(&search.c.gadgets)
                .map(|(&ix, g)| g.states()[ix as usize].clone())
                .collect();
            Configuration {
                agent: search.c.endpoint(key[0] as usize),
                states,
            }
        })
        .collect())
}
