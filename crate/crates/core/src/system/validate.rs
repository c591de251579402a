use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{Endpoint, System};
use crate::gadget::{validate_gadget, GadgetViolation};

/// One broken system invariant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SystemViolation {
    Gadget {
        alias: String,
        violation: GadgetViolation,
    },
    DuplicateInstance(String),
    UnknownType {
        instance: String,
        type_name: String,
    },
    InitialNotInGadget {
        instance: String,
        state: String,
    },
    DanglingEndpoint(String),
    InternalEndpoint(String),
    TerminalCount {
        terminal: &'static str,
        count: usize,
    },
}

impl fmt::Display for SystemViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemViolation::Gadget { alias, violation } => {
                write!(f, "gadget `{alias}`: {violation}")
            }
            SystemViolation::DuplicateInstance(id) => write!(f, "duplicate instance `{id}`"),
            SystemViolation::UnknownType {
                instance,
                type_name,
            } => {
                write!(f, "instance `{instance}` has unknown type `{type_name}`")
            }
            SystemViolation::InitialNotInGadget { instance, state } => {
                write!(
                    f,
                    "instance `{instance}` starts in undeclared state `{state}`"
                )
            }
            SystemViolation::DanglingEndpoint(e) => write!(f, "dangling endpoint `{e}`"),
            SystemViolation::InternalEndpoint(e) => write!(f, "internal endpoint `{e}`"),
            SystemViolation::TerminalCount { terminal, count } => {
                write!(
                    f,
                    "expected exactly one `{terminal}` connection, found {count}"
                )
            }
        }
    }
}

/// Every gadget-level and system-level violation of `s`, which must have
/// exactly one `start` and one `goal` connection.
pub fn validate_system(s: &System) -> Vec<SystemViolation> {
    validate(s, true)
}

/// Like [`validate_system`] but for boundary candidates without terminals.
pub fn validate_candidate(s: &System) -> Vec<SystemViolation> {
    validate(s, false)
}

pub(crate) fn validate(s: &System, require_terminals: bool) -> Vec<SystemViolation> {
    let mut out = Vec::new();

    for t in s.types() {
        for violation in validate_gadget(&t.gadget) {
            out.push(SystemViolation::Gadget {
                alias: t.alias.clone(),
                violation,
            });
        }
    }

    let mut seen = BTreeSet::new();
    for inst in s.instances() {
        if !seen.insert(inst.id.as_str()) {
            out.push(SystemViolation::DuplicateInstance(inst.id.clone()));
        }
        match s.gadget_type(&inst.type_name) {
            None => out.push(SystemViolation::UnknownType {
                instance: inst.id.clone(),
                type_name: inst.type_name.clone(),
            }),
            Some(t) if !t.gadget.has_state(&inst.initial) => {
                out.push(SystemViolation::InitialNotInGadget {
                    instance: inst.id.clone(),
                    state: inst.initial.clone(),
                })
            }
            Some(_) => {}
        }
    }

    for c in s.connections() {
        for e in [&c.a, &c.b] {
            if let Endpoint::Port { instance, location } = e {
                match s.gadget_of(instance).and_then(|g| g.location(location)) {
                    None => out.push(SystemViolation::DanglingEndpoint(e.to_string())),
                    Some(loc) if !loc.is_exposed() => {
                        out.push(SystemViolation::InternalEndpoint(e.to_string()))
                    }
                    Some(_) => {}
                }
            }
        }
    }

    let starts = s.degree(&Endpoint::Start);
    let goals = s.degree(&Endpoint::Goal);
    if require_terminals {
        if starts != 1 {
            out.push(SystemViolation::TerminalCount {
                terminal: "start",
                count: starts,
            });
        }
        if goals != 1 {
            out.push(SystemViolation::TerminalCount {
                terminal: "goal",
                count: goals,
            });
        }
    }
    out.sort();
    out.dedup();
    out
}
