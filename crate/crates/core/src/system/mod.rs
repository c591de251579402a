//! Systems of gadget instances joined by corridors.

mod planar;
mod validate;

pub use planar::{
    check_planarity, derived_graph, is_planar_graph, kuratowski_witness, DerivedGraph, Planarity,
    Witness, WitnessKind,
};
pub use validate::{validate_candidate, validate_system, SystemViolation};

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::gadget::{canonical_door, DoorKind, Gadget};
use crate::sat::NpGadgetSpec;

/// One side of a connection: a gadget location or a reserved terminal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Start,
    Goal,
    Port { instance: String, location: String },
}

impl Endpoint {
    pub fn port(instance: impl Into<String>, location: impl Into<String>) -> Self {
        Endpoint::Port {
            instance: instance.into(),
            location: location.into(),
        }
    }

    pub fn is_terminal(&self) -> bool {
        !matches!(self, Endpoint::Port { .. })
    }

    pub fn instance(&self) -> Option<&str> {
        match self {
            Endpoint::Port { instance, .. } => Some(instance),
            _ => None,
        }
    }

    /// Parses `start`, `goal` or `<instance>.<location>`.
    pub fn parse(s: &str) -> Option<Endpoint> {
        match s {
            "start" => Some(Endpoint::Start),
            "goal" => Some(Endpoint::Goal),
            _ => {
                let (inst, loc) = s.split_once('.')?;
                if inst.is_empty() || loc.is_empty() || loc.contains('.') {
                    return None;
                }
                Some(Endpoint::port(inst, loc))
            }
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Start => f.write_str("start"),
            Endpoint::Goal => f.write_str("goal"),
            Endpoint::Port { instance, location } => write!(f, "{instance}.{location}"),
        }
    }
}

impl Ord for Endpoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_string().cmp(&other.to_string())
    }
}

impl PartialOrd for Endpoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An agent-bidirectional corridor between two endpoints.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Connection {
    pub a: Endpoint,
    pub b: Endpoint,
}

impl Connection {
    pub fn new(a: Endpoint, b: Endpoint) -> Self {
        Connection { a, b }
    }

    pub fn touches(&self, e: &Endpoint) -> bool {
        &self.a == e || &self.b == e
    }

    /// The far side when walking in from `from`.
    pub fn other(&self, from: &Endpoint) -> Option<&Endpoint> {
        if &self.a == from {
            Some(&self.b)
        } else if &self.b == from {
            Some(&self.a)
        } else {
            None
        }
    }
}

impl fmt::Display for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.a, self.b)
    }
}

/// Where a gadget type comes from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GadgetSource {
    /// `use <library name> as <alias>`
    Library(String),
    /// An inline `gadget ... end` block.
    Inline,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GadgetType {
    pub alias: String,
    pub source: GadgetSource,
    pub gadget: Gadget,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GadgetInstance {
    pub id: String,
    pub type_name: String,
    pub initial: String,
}

/// Looks up a gadget by library name: the canonical doors (`door.*`) and
/// the NP framework specs (`np.*`).
pub fn library_gadget(name: &str) -> Option<Gadget> {
    if let Some(kind) = DoorKind::from_canonical_name(name) {
        return Some(canonical_door(kind));
    }
    NpGadgetSpec::from_library_name(name).map(|spec| spec.gadget())
}

/// Gadget instances plus corridors. Instances are kept sorted by id and
/// connections sorted, so equal systems compare equal structurally.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct System {
    types: BTreeMap<String, GadgetType>,
    instances: Vec<GadgetInstance>,
    connections: Vec<Connection>,
}

impl System {
    pub fn new(
        types: impl IntoIterator<Item = GadgetType>,
        instances: impl IntoIterator<Item = GadgetInstance>,
        connections: impl IntoIterator<Item = Connection>,
    ) -> System {
        let types = types.into_iter().map(|t| (t.alias.clone(), t)).collect();
        let mut instances: Vec<_> = instances.into_iter().collect();
        instances.sort();
        let mut connections: Vec<_> = connections.into_iter().collect();
        connections.sort();
        System {
            types,
            instances,
            connections,
        }
    }

    pub fn builder() -> SystemBuilder {
        SystemBuilder::default()
    }

    pub fn types(&self) -> impl Iterator<Item = &GadgetType> {
        self.types.values()
    }

    pub fn gadget_type(&self, alias: &str) -> Option<&GadgetType> {
        self.types.get(alias)
    }

    pub fn instances(&self) -> &[GadgetInstance] {
        &self.instances
    }

    pub fn connections(&self) -> &[Connection] {
        &self.connections
    }

    pub fn instance(&self, id: &str) -> Option<&GadgetInstance> {
        self.instances
            .binary_search_by(|i| i.id.as_str().cmp(id))
            .ok()
            .map(|ix| &self.instances[ix])
    }

    pub fn instance_index(&self, id: &str) -> Option<usize> {
        self.instances
            .binary_search_by(|i| i.id.as_str().cmp(id))
            .ok()
    }

    /// Gadget of instance `id`, if both resolve.
    pub fn gadget_of(&self, id: &str) -> Option<&Gadget> {
        let inst = self.instance(id)?;
        self.types.get(&inst.type_name).map(|t| &t.gadget)
    }

    /// Copy with one more connection.
    pub fn with_connection(&self, c: Connection) -> System {
        let mut connections = self.connections.clone();
        connections.push(c);
        System::new(
            self.types.values().cloned(),
            self.instances.clone(),
            connections,
        )
    }

    /// Copy with one connection removed.
    pub fn without_connection(&self, index: usize) -> System {
        let mut connections = self.connections.clone();
        connections.remove(index);
        System::new(
            self.types.values().cloned(),
            self.instances.clone(),
            connections,
        )
    }

    /// Copy with the gadget behind `alias` replaced.
    pub fn with_gadget(&self, alias: &str, gadget: Gadget) -> System {
        let mut types = self.types.clone();
        if let Some(t) = types.get_mut(alias) {
            t.gadget = gadget;
        }
        System {
            types,
            instances: self.instances.clone(),
            connections: self.connections.clone(),
        }
    }

    /// Number of connections touching `e`.
    pub fn degree(&self, e: &Endpoint) -> usize {
        self.connections
            .iter()
            .map(|c| usize::from(&c.a == e) + usize::from(&c.b == e))
            .sum()
    }

    pub fn has_terminals(&self) -> bool {
        self.degree(&Endpoint::Start) > 0 || self.degree(&Endpoint::Goal) > 0
    }
}

/// Incremental construction of a [`System`].
#[derive(Clone, Debug, Default)]
pub struct SystemBuilder {
    types: Vec<GadgetType>,
    instances: Vec<GadgetInstance>,
    connections: Vec<Connection>,
}

impl SystemBuilder {
    /// `use <library> as <alias>`. Unknown library names are ignored by the
    /// builder and surface later as dangling type references.
    pub fn use_library(mut self, library: &str, alias: &str) -> Self {
        if let Some(gadget) = library_gadget(library) {
            self.types.push(GadgetType {
                alias: alias.to_string(),
                source: GadgetSource::Library(library.to_string()),
                gadget,
            });
        }
        self
    }

    pub fn inline(mut self, gadget: Gadget) -> Self {
        self.types.push(GadgetType {
            alias: gadget.name().to_string(),
            source: GadgetSource::Inline,
            gadget,
        });
        self
    }

    pub fn instance(mut self, id: &str, type_name: &str, initial: &str) -> Self {
        self.instances.push(GadgetInstance {
            id: id.to_string(),
            type_name: type_name.to_string(),
            initial: initial.to_string(),
        });
        self
    }

    pub fn connect(mut self, a: Endpoint, b: Endpoint) -> Self {
        self.connections.push(Connection::new(a, b));
        self
    }

    /// `connect` with endpoints in text syntax. Panics on malformed input,
    /// so only use it with literals.
    pub fn wire(self, a: &str, b: &str) -> Self {
        let pa = Endpoint::parse(a).unwrap_or_else(|| panic!("bad endpoint `{a}`"));
        let pb = Endpoint::parse(b).unwrap_or_else(|| panic!("bad endpoint `{b}`"));
        self.connect(pa, pb)
    }

    pub fn build(self) -> System {
        System::new(self.types, self.instances, self.connections)
    }
}
