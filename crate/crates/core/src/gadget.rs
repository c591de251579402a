//! Gadgets: finite-state pieces of a level with locations and directed
//! traversal rules, plus the three canonical door gadgets.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::DomainError;

/// Whether a location can be wired to other gadgets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exposure {
    Exposed,
    Internal,
}

impl Exposure {
    pub fn as_str(self) -> &'static str {
        match self {
            Exposure::Exposed => "exposed",
            Exposure::Internal => "internal",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Location {
    pub id: String,
    pub exposure: Exposure,
}

impl Location {
    pub fn exposed(id: impl Into<String>) -> Self {
        Location {
            id: id.into(),
            exposure: Exposure::Exposed,
        }
    }

    pub fn internal(id: impl Into<String>) -> Self {
        Location {
            id: id.into(),
            exposure: Exposure::Internal,
        }
    }

    pub fn is_exposed(&self) -> bool {
        self.exposure == Exposure::Exposed
    }
}

/// A directed traversal: enter at `entry` while the gadget is in `pre`,
/// leave at `exit`, and the gadget switches to `post`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TraversalRule {
    pub entry: String,
    pub exit: String,
    pub pre: String,
    pub post: String,
}

impl TraversalRule {
    pub fn new(
        entry: impl Into<String>,
        exit: impl Into<String>,
        pre: impl Into<String>,
        post: impl Into<String>,
    ) -> Self {
        TraversalRule {
            entry: entry.into(),
            exit: exit.into(),
            pre: pre.into(),
            post: post.into(),
        }
    }
}

impl fmt::Display for TraversalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} : {} -> {}",
            self.entry, self.exit, self.pre, self.post
        )
    }
}

/// A gadget type. `locations` is stored in rotation (clockwise) order.
///
/// Values are never mutated after construction; builders return new values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gadget {
    name: String,
    locations: Vec<Location>,
    states: Vec<String>,
    rules: Vec<TraversalRule>,
}

impl Gadget {
    /// Builds a gadget without checking invariants; see [`validate_gadget`].
    pub fn new(
        name: impl Into<String>,
        locations: Vec<Location>,
        states: Vec<String>,
        rules: Vec<TraversalRule>,
    ) -> Self {
        Gadget {
            name: name.into(),
            locations,
            states,
            rules,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn locations(&self) -> &[Location] {
        &self.locations
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn rules(&self) -> &[TraversalRule] {
        &self.rules
    }

    pub fn rule_set(&self) -> BTreeSet<TraversalRule> {
        self.rules.iter().cloned().collect()
    }

    pub fn location(&self, id: &str) -> Option<&Location> {
        self.locations.iter().find(|l| l.id == id)
    }

    pub fn location_index(&self, id: &str) -> Option<usize> {
        self.locations.iter().position(|l| l.id == id)
    }

    pub fn state_index(&self, id: &str) -> Option<usize> {
        self.states.iter().position(|s| s == id)
    }

    pub fn has_state(&self, id: &str) -> bool {
        self.state_index(id).is_some()
    }

    pub fn exposed_locations(&self) -> impl Iterator<Item = &Location> {
        self.locations.iter().filter(|l| l.is_exposed())
    }

    /// Same gadget under another name.
    pub fn renamed(&self, name: impl Into<String>) -> Gadget {
        Gadget {
            name: name.into(),
            ..self.clone()
        }
    }

    /// Mirror image: rotation order reversed, first location kept in place.
    pub fn mirrored(&self, name: impl Into<String>) -> Gadget {
        let mut locations = self.locations.clone();
        if locations.len() > 1 {
            locations[1..].reverse();
        }
        Gadget {
            name: name.into(),
            locations,
            states: self.states.clone(),
            rules: self.rules.clone(),
        }
    }

    /// Copy of the gadget with rule `index` removed.
    pub fn without_rule(&self, index: usize) -> Gadget {
        let mut rules = self.rules.clone();
        rules.remove(index);
        Gadget {
            rules,
            ..self.clone()
        }
    }
}

/// The three canonical door gadgets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DoorKind {
    OpenClose,
    SelfClosing,
    SymmetricSelfClosing,
}

impl DoorKind {
    pub const ALL: [DoorKind; 3] = [
        DoorKind::OpenClose,
        DoorKind::SelfClosing,
        DoorKind::SymmetricSelfClosing,
    ];

    /// Library name used by system files.
    pub fn canonical_name(self) -> &'static str {
        match self {
            DoorKind::OpenClose => "door.open_close",
            DoorKind::SelfClosing => "door.self_closing",
            DoorKind::SymmetricSelfClosing => "door.symmetric_self_closing",
        }
    }

    pub fn from_canonical_name(name: &str) -> Option<DoorKind> {
        DoorKind::ALL
            .into_iter()
            .find(|k| k.canonical_name() == name)
    }
}

pub const OPEN: &str = "Open";
pub const CLOSED: &str = "Closed";

fn two_states() -> Vec<String> {
    alloc::vec![OPEN.to_string(), CLOSED.to_string()]
}

/// Canonical door gadget for `kind`.
///
/// The optional open path is a state-setting self-loop at `O`; not taking
/// it is the agent simply not entering `O`.
pub fn canonical_door(kind: DoorKind) -> Gadget {
    let r = TraversalRule::new;
    match kind {
        DoorKind::OpenClose => Gadget::new(
            kind.canonical_name(),
            alloc::vec![
                Location::exposed("T_in"),
                Location::exposed("T_out"),
                Location::exposed("C_out"),
                Location::exposed("C_in"),
                Location::exposed("O"),
            ],
            two_states(),
            alloc::vec![
                r("T_in", "T_out", OPEN, OPEN),
                r("C_in", "C_out", OPEN, CLOSED),
                r("C_in", "C_out", CLOSED, CLOSED),
                r("O", "O", OPEN, OPEN),
                r("O", "O", CLOSED, OPEN),
            ],
        ),
        DoorKind::SelfClosing => Gadget::new(
            kind.canonical_name(),
            alloc::vec![
                Location::exposed("T_in"),
                Location::exposed("T_out"),
                Location::exposed("O")
            ],
            two_states(),
            alloc::vec![
                r("T_in", "T_out", OPEN, CLOSED),
                r("O", "O", OPEN, OPEN),
                r("O", "O", CLOSED, OPEN),
            ],
        ),
        DoorKind::SymmetricSelfClosing => Gadget::new(
            kind.canonical_name(),
            alloc::vec![
                Location::exposed("A_in"),
                Location::exposed("A_out"),
                Location::exposed("B_out"),
                Location::exposed("B_in"),
            ],
            two_states(),
            alloc::vec![
                r("A_in", "A_out", OPEN, CLOSED),
                r("B_in", "B_out", CLOSED, OPEN)
            ],
        ),
    }
}

/// One broken gadget invariant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GadgetViolation {
    DuplicateLocation(String),
    DuplicateState(String),
    DuplicateRule(TraversalRule),
    NoExposedLocation,
    NoStates,
    UndeclaredLocation { rule: TraversalRule, symbol: String },
    UndeclaredState { rule: TraversalRule, symbol: String },
}

impl fmt::Display for GadgetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GadgetViolation::DuplicateLocation(id) => write!(f, "duplicate location `{id}`"),
            GadgetViolation::DuplicateState(id) => write!(f, "duplicate state `{id}`"),
            GadgetViolation::DuplicateRule(rule) => write!(f, "duplicate rule `{rule}`"),
            GadgetViolation::NoExposedLocation => f.write_str("no exposed location"),
            GadgetViolation::NoStates => f.write_str("no states"),
            GadgetViolation::UndeclaredLocation { rule, symbol } => {
                write!(f, "rule `{rule}` references undeclared location `{symbol}`")
            }
            GadgetViolation::UndeclaredState { rule, symbol } => {
                write!(f, "rule `{rule}` references undeclared state `{symbol}`")
            }
        }
    }
}

/// Lists every invariant violation of `g`; empty for a valid gadget.
pub fn validate_gadget(g: &Gadget) -> Vec<GadgetViolation> {
    let mut out = Vec::new();

    let mut seen = BTreeSet::new();
    for loc in &g.locations {
        if !seen.insert(loc.id.as_str()) {
            out.push(GadgetViolation::DuplicateLocation(loc.id.clone()));
        }
    }
    let mut seen = BTreeSet::new();
    for s in &g.states {
        if !seen.insert(s.as_str()) {
            out.push(GadgetViolation::DuplicateState(s.clone()));
        }
    }
    if g.states.is_empty() {
        out.push(GadgetViolation::NoStates);
    }
    if !g.locations.iter().any(Location::is_exposed) {
        out.push(GadgetViolation::NoExposedLocation);
    }

    let mut seen = BTreeSet::new();
    for rule in &g.rules {
        if !seen.insert(rule) {
            out.push(GadgetViolation::DuplicateRule(rule.clone()));
        }
        for loc in [&rule.entry, &rule.exit] {
            if g.location(loc).is_none() {
                out.push(GadgetViolation::UndeclaredLocation {
                    rule: rule.clone(),
                    symbol: loc.clone(),
                });
            }
        }
        for st in [&rule.pre, &rule.post] {
            if !g.has_state(st) {
                out.push(GadgetViolation::UndeclaredState {
                    rule: rule.clone(),
                    symbol: st.clone(),
                });
            }
        }
    }
    out.dedup();
    out
}

/// Rules of `g` that can fire when entering at `at` in `state`.
pub fn applicable_rules<'g>(
    g: &'g Gadget,
    state: &str,
    at: &str,
) -> Result<Vec<&'g TraversalRule>, DomainError> {
    if !g.has_state(state) {
        return Err(DomainError::UnknownState {
            gadget: g.name.clone(),
            state: state.to_string(),
        });
    }
    if g.location(at).is_none() {
        return Err(DomainError::UnknownLocation {
            gadget: g.name.clone(),
            location: at.to_string(),
        });
    }
    Ok(g.rules
        .iter()
        .filter(|r| r.pre == state && r.entry == at)
        .collect())
}

impl fmt::Display for Gadget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::gadget_block(self))
    }
}
