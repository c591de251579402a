//! Door gadgets as finite transition systems.
//!
//! Everything here is pure and allocation-only (`no_std` + `alloc`): gadget
//! and system models, the text format, reachability search, behavioral
//! equivalence against the canonical doors, the game-model corpus, the CNF
//! to gadget-network compiler and the schematic tile emitter. File IO and
//! the command line live in the `doorkit` crate.

#![no_std]

extern crate alloc;

pub mod corpus;
pub mod equiv;
pub mod error;
pub mod gadget;
pub mod level;
pub mod sat;
pub mod solver;
pub mod system;
pub mod text;

pub use error::DomainError;
pub use gadget::{canonical_door, DoorKind, Gadget, Location, TraversalRule};
pub use system::{Connection, Endpoint, System};
