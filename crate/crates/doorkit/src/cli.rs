use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use doorkit_core::sat::GadgetSet;

#[derive(Debug, Parser)]
#[command(
    name = "doorkit",
    version,
    about = "Door gadget systems: reachability, corpus checks, SAT compilation and level emission"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Exit with status 3 on negative verdicts and 4 on exhausted budgets.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Print one JSON document instead of the human report.
    #[arg(long, global = true)]
    pub machine: bool,
    /// Worker threads for batch commands (0 picks the machine's count).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the goal is reachable from the start.
    Solve {
        system: PathBuf,
        #[arg(long, default_value_t = doorkit_core::solver::DEFAULT_MAX_CONFIGS)]
        max_configs: usize,
        /// Write the witness, one move per line.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Test the derived graph for planarity.
    Planar { system: PathBuf },
    /// Game-model corpus checks.
    #[command(subcommand)]
    Corpus(CorpusCommand),
    /// CNF compilation and reduction checks.
    #[command(subcommand)]
    Sat(SatCommand),
    /// Render a planar system as an ASCII tile level.
    Emit {
        system: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = doorkit_core::level::DEFAULT_TUNNEL_LEN)]
        tunnel_len: usize,
    },
    /// Generate stress systems.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Debug, Subcommand)]
pub enum CorpusCommand {
    /// Check every model, or one, against its canonical door.
    Verify {
        #[arg(long)]
        model: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SatCommand {
    /// Compile a DIMACS formula into a system file.
    Compile {
        cnf: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = SetArg::Abstract)]
        set: SetArg,
    },
    /// Compile, solve and compare with a truth-table oracle. Without
    /// `--set` every gadget set is checked.
    Check {
        cnf: PathBuf,
        #[arg(long, value_enum)]
        set: Option<SetArg>,
        #[arg(long, default_value_t = doorkit_core::solver::DEFAULT_MAX_CONFIGS)]
        max_configs: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Cascade of `n` symmetric self-closing doors.
    Counter {
        n: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SetArg {
    Abstract,
    Sml,
    Smr,
}

impl From<SetArg> for GadgetSet {
    fn from(s: SetArg) -> GadgetSet {
        match s {
            SetArg::Abstract => GadgetSet::Abstract,
            SetArg::Sml => GadgetSet::Sml,
            SetArg::Smr => GadgetSet::Smr,
        }
    }
}
