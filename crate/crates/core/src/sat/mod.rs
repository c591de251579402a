//! CNF input and its compilation into start/variable/clause/crossover
//! gadget networks.

mod cnf;
mod compile;
pub mod layout;
mod oracle;
mod spec;

pub use cnf::{parse_dimacs, CnfFormula, DimacsError};
pub use compile::{
    compile, compile_cnf, verify_reduction, Compilation, GadgetCounts, GadgetSet, ReductionReport,
};
pub use layout::Layout;
pub use oracle::{sat_oracle, ORACLE_MAX_VARS};
pub use spec::NpGadgetSpec;

use alloc::string::String;

use crate::error::DomainError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SatError {
    #[error(transparent)]
    Dimacs(#[from] DimacsError),
    #[error("clause with {0} literals; framework clauses take at most 3")]
    ClauseTooLong(usize),
    #[error("literal {0} out of range")]
    LiteralOutOfRange(i32),
    #[error("{0} variables exceed the truth-table oracle limit")]
    TooManyVariables(usize),
    #[error("unknown gadget set `{0}` (expected abstract, sml or smr)")]
    UnknownGadgetSet(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
}
