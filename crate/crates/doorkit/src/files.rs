use std::fs;
use std::path::Path;

use doorkit_core::sat::{parse_dimacs, CnfFormula};
use doorkit_core::text::parse_system;
use doorkit_core::System;

use crate::error::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_system(path: &Path) -> Result<System, CliError> {
    parse_system(&read(path)?).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })
}

pub fn read_cnf(path: &Path) -> Result<CnfFormula, CliError> {
    parse_dimacs(&read(path)?).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        msg: format!(" {e}"),
    })
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
