use super::{CnfFormula, SatError};

pub const ORACLE_MAX_VARS: usize = 24;

/// Truth-table satisfiability for formulas with at most 24 variables.
pub fn sat_oracle(f: &CnfFormula) -> Result<bool, SatError> {
    if f.vars > ORACLE_MAX_VARS {
        return Err(SatError::TooManyVariables(f.vars));
    }
    let holds = |assignment: u32, lit: i32| {
        let bit = assignment >> (lit.unsigned_abs() - 1) & 1 == 1;
        bit == (lit > 0)
    };
    Ok((0..1u32 << f.vars).any(|a| f.clauses.iter().all(|c| c.iter().any(|&l| holds(a, l)))))
}
