use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::layout::{Layout, LineKind};
use super::oracle::sat_oracle;
use super::spec::NpGadgetSpec;
use super::{CnfFormula, SatError};
use crate::corpus;
use crate::gadget::Gadget;
use crate::solver::{solve, SolveResult};
use crate::system::{Endpoint, GadgetInstance, GadgetSource, GadgetType, System};

/// Which gadgets realise the variable, clause and crossover roles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GadgetSet {
    Abstract,
    Sml,
    Smr,
}

impl GadgetSet {
    pub const ALL: [GadgetSet; 3] = [GadgetSet::Abstract, GadgetSet::Sml, GadgetSet::Smr];

    pub fn as_str(self) -> &'static str {
        match self {
            GadgetSet::Abstract => "abstract",
            GadgetSet::Sml => "sml",
            GadgetSet::Smr => "smr",
        }
    }
}

impl fmt::Display for GadgetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GadgetSet {
    type Err = SatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GadgetSet::ALL
            .into_iter()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| SatError::UnknownGadgetSet(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GadgetCounts {
    pub vars: usize,
    pub clauses: usize,
    pub crossovers: usize,
    pub diodes: usize,
}

impl GadgetCounts {
    /// Start and finish plus every counted gadget.
    pub fn instances(&self) -> usize {
        2 + self.vars + self.clauses + self.crossovers + self.diodes
    }
}

#[derive(Clone, Debug)]
pub struct Compilation {
    pub system: System,
    pub layout: Layout,
    pub counts: GadgetCounts,
}

struct Role {
    alias: &'static str,
    source: GadgetSource,
    gadget: Gadget,
    initial: String,
}

fn role(alias: &'static str, set: GadgetSet, spec: NpGadgetSpec) -> Role {
    let model = match (set, spec) {
        (GadgetSet::Abstract, _)
        | (_, NpGadgetSpec::Start | NpGadgetSpec::Finish | NpGadgetSpec::Diode) => None,
        (_, NpGadgetSpec::Crossover { mirrored, .. }) => {
            let (g, init) = corpus::np_model(
                set,
                NpGadgetSpec::Crossover {
                    leaky: false,
                    mirrored: false,
                },
            )
            .expect("corpus crossover model");
            Some(if mirrored {
                (g.mirrored(format!("{}_mirrored", g.name())), init)
            } else {
                (g, init)
            })
        }
        (_, spec) => Some(corpus::np_model(set, spec).expect("corpus model")),
    };
    match model {
        None => Role {
            alias,
            source: GadgetSource::Library(spec.library_name().to_string()),
            gadget: spec.gadget(),
            initial: spec.initial().to_string(),
        },
        Some((g, init)) => Role {
            alias,
            source: GadgetSource::Inline,
            gadget: g,
            initial: init,
        },
    }
}

/// Compiles `f` into the standard framework network.
pub fn compile_cnf(f: &CnfFormula, set: GadgetSet) -> Result<System, SatError> {
    compile(f, set).map(|c| c.system)
}

pub fn compile(f: &CnfFormula, set: GadgetSet) -> Result<Compilation, SatError> {
    let layout = Layout::new(f)?;
    let n = f.vars;
    let m = f.clauses.len();

    let mut roles = Vec::from([
        role("start", set, NpGadgetSpec::Start),
        role("finish", set, NpGadgetSpec::Finish),
        role("diode", set, NpGadgetSpec::Diode),
        role("variable", set, NpGadgetSpec::Variable),
        role("clause", set, NpGadgetSpec::Clause),
        role(
            "cross",
            set,
            NpGadgetSpec::Crossover {
                leaky: set == GadgetSet::Sml,
                mirrored: false,
            },
        ),
        role(
            "cross_m",
            set,
            NpGadgetSpec::Crossover {
                leaky: set == GadgetSet::Sml,
                mirrored: true,
            },
        ),
    ]);
    for r in &mut roles {
        if r.source == GadgetSource::Inline {
            r.gadget = r.gadget.renamed(r.alias);
        }
    }
    let initial = |alias: &str| {
        roles
            .iter()
            .find(|r| r.alias == alias)
            .unwrap()
            .initial
            .clone()
    };

    let w = |k: usize| if k < 10 { 1 } else { format!("{k}").len() };
    let (wv, wc) = (w(n), w(m.max(1)));
    let var_id = |i: usize| format!("v{:0wv$}", i + 1);
    let diode_id = |i: usize| format!("d{:0wv$}", i);
    let clause_id = |c: usize| format!("c{:0wc$}", c + 1);
    let wx = w(layout.crossings.len().max(1));
    let cross_id = |k: usize| format!("x{:0wx$}", k);

    let mut instances = Vec::new();
    let inst = |id: String, ty: &str, init: String| GadgetInstance {
        id,
        type_name: ty.to_string(),
        initial: init,
    };
    instances.push(inst("s".into(), "start", initial("start")));
    instances.push(inst("f".into(), "finish", initial("finish")));
    for i in 0..=n {
        instances.push(inst(diode_id(i), "diode", initial("diode")));
    }
    for i in 0..n {
        instances.push(inst(var_id(i), "variable", initial("variable")));
    }
    for c in 0..m {
        instances.push(inst(clause_id(c), "clause", initial("clause")));
    }

    // Crossover instance per crossing, with handedness from the directions.
    let mut cross_of = hashbrown::HashMap::new();
    for (k, cr) in layout.crossings.iter().enumerate() {
        let east = layout.lines[cr.line].eastward();
        let normal = east == cr.up;
        let ty = if normal { "cross" } else { "cross_m" };
        instances.push(inst(cross_id(k), ty, initial(ty)));
        cross_of.insert((cr.line, cr.visit, cr.up), cross_id(k));
    }

    let mut conns: Vec<(Endpoint, Endpoint)> = Vec::new();
    let p = |i: &str, l: &str| Endpoint::port(i, l);
    let mut chain = |from: Endpoint, hops: Vec<(Endpoint, Endpoint)>, to: Endpoint| {
        let mut cur = from;
        for (entry, exit) in hops {
            conns.push((cur, entry));
            cur = exit;
        }
        conns.push((cur, to));
    };

    chain(
        Endpoint::Start,
        Vec::from([(p("s", "p"), p("s", "p"))]),
        p(&diode_id(0), "in"),
    );
    chain(p(&diode_id(0), "out"), Vec::new(), p(&var_id(0), "V_in"));

    for (li, kind) in layout.lines.iter().enumerate() {
        // Features along the line in walking order.
        let mut feats: Vec<(usize, Feature)> = Vec::new();
        for cr in layout.crossings.iter().filter(|c| c.line == li) {
            feats.push((
                cr.x(&layout),
                Feature::Cross(cross_of[&(li, cr.visit, cr.up)].clone()),
            ));
        }
        for (vi, v) in layout.visits.iter().enumerate() {
            if v.line == li {
                feats.push((v.x, Feature::Visit(vi)));
            }
        }
        feats.sort_by_key(|(x, _)| *x);
        if !kind.eastward() {
            feats.reverse();
        }

        let mut hops = Vec::new();
        for (_, feat) in feats {
            match feat {
                Feature::Cross(id) => hops.push((p(&id, "H_in"), p(&id, "H_out"))),
                Feature::Visit(vi) => {
                    let v = layout.visits[vi];
                    for above in (0..li).rev() {
                        let id = &cross_of[&(above, vi, true)];
                        hops.push((p(id, "V_in"), p(id, "V_out")));
                    }
                    let c = clause_id(v.clause);
                    let k = v.port + 1;
                    hops.push((p(&c, &format!("U{k}_in")), p(&c, &format!("U{k}_out"))));
                    for above in 0..li {
                        let id = &cross_of[&(above, vi, false)];
                        hops.push((p(id, "V_in"), p(id, "V_out")));
                    }
                }
            }
        }
        let (from, to) = match *kind {
            LineKind::True(i) => (p(&var_id(i), "V_true_out"), p(&diode_id(i + 1), "in")),
            LineKind::False(i) => (p(&var_id(i), "V_false_out"), p(&diode_id(i + 1), "in")),
            LineKind::Return(i) => (p(&diode_id(i + 1), "out"), p(&var_id(i + 1), "V_in")),
        };
        chain(from, hops, to);
    }

    let check: Vec<_> = (0..m)
        .map(|c| (p(&clause_id(c), "K_in"), p(&clause_id(c), "K_out")))
        .collect();
    let check_from = if n == 0 {
        p(&diode_id(0), "out")
    } else {
        p(&diode_id(n), "out")
    };
    chain(check_from, check, p("f", "p"));
    conns.push((p("f", "p"), Endpoint::Goal));

    let types = roles.into_iter().map(|r| GadgetType {
        alias: r.alias.to_string(),
        source: r.source,
        gadget: r.gadget,
    });
    let system = System::new(
        types,
        instances,
        conns
            .into_iter()
            .map(|(a, b)| crate::system::Connection::new(a, b)),
    );
    let counts = GadgetCounts {
        vars: n,
        clauses: m,
        crossovers: layout.crossings.len(),
        diodes: n + 1,
    };
    Ok(Compilation {
        system,
        layout,
        counts,
    })
}

enum Feature {
    Cross(String),
    Visit(usize),
}

/// Outcome of one compile-solve-compare round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub satisfiable: bool,
    pub result: SolveResult,
}

impl ReductionReport {
    pub fn agrees(&self) -> bool {
        match self.result {
            SolveResult::Reachable { .. } => self.satisfiable,
            SolveResult::Unreachable { .. } => !self.satisfiable,
            SolveResult::BudgetExceeded { .. } => false,
        }
    }

    /// `agree(sat/Reachable)` style summary.
    pub fn summary(&self) -> String {
        let sat = if self.satisfiable { "sat" } else { "unsat" };
        let verdict = match self.result {
            SolveResult::Reachable { .. } => "Reachable",
            SolveResult::Unreachable { .. } => "Unreachable",
            SolveResult::BudgetExceeded { .. } => "BudgetExceeded",
        };
        let head = if self.agrees() { "agree" } else { "disagree" };
        format!("{head}({sat}/{verdict})")
    }
}

/// Compiles, solves and compares against the truth-table oracle.
pub fn verify_reduction(
    f: &CnfFormula,
    set: GadgetSet,
    max_configs: usize,
) -> Result<ReductionReport, SatError> {
    let satisfiable = sat_oracle(f)?;
    let system = compile_cnf(f, set)?;
    let result = solve(&system, max_configs).map_err(SatError::Domain)?;
    Ok(ReductionReport {
        satisfiable,
        result,
    })
}
