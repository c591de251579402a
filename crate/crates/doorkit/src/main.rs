mod cli;
mod commands;
mod error;
mod files;

use std::process::ExitCode;

use clap::Parser;
use cli::{Cli, Command, CorpusCommand, GenCommand, SatCommand};
use commands::{Report, Verdict};
use doorkit_core::sat::GadgetSet;
use error::CliError;

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Solve {
            system,
            max_configs,
            witness,
        } => commands::solve(system, *max_configs, witness.as_deref()),
        Command::Planar { system } => commands::planar(system),
        Command::Corpus(CorpusCommand::Verify { model }) => {
            commands::corpus_verify(model.as_deref())
        }
        Command::Sat(SatCommand::Compile { cnf, output, set }) => {
            commands::sat_compile(cnf, output, (*set).into())
        }
        Command::Sat(SatCommand::Check {
            cnf,
            set,
            max_configs,
        }) => {
            let sets = match set {
                Some(s) => vec![GadgetSet::from(*s)],
                None => GadgetSet::ALL.to_vec(),
            };
            commands::sat_check(cnf, &sets, *max_configs)
        }
        Command::Emit {
            system,
            output,
            tunnel_len,
        } => commands::emit(system, output, *tunnel_len),
        Command::Gen(GenCommand::Counter { n, output }) => commands::gen_counter(*n, output),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.jobs)
        .build()
        .expect("thread pool");
    match pool.install(|| run(&cli)) {
        Ok(report) => {
            if cli.global.machine {
                let doc = serde_json::to_string_pretty(&report.machine).expect("report serializes");
                println!("{doc}");
            } else {
                print!("{}", report.human);
            }
            ExitCode::from(match (cli.global.strict, report.verdict) {
                (true, Verdict::Negative) => 3,
                (true, Verdict::Budget) => 4,
                _ => 0,
            })
        }
        Err(e) => {
            eprintln!("doorkit: {e}");
            ExitCode::from(e.status())
        }
    }
}
