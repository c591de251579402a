//! Row/column arrangement of a compiled formula.
//!
//! Lines run top to bottom as `T1, F1, R1, T2, F2, R2, ..., Tn, Fn`: the
//! true and false wires of each variable head east, and the return row
//! below them heads west to the next variable. Clauses sit above all lines,
//! clause 1 rightmost. Every literal occurrence is a visit: its wire leaves
//! the row going north at `x = 6 * column + 2 * port`, unlocks the port,
//! and comes back south one unit to the east, crossing every line above it
//! once each way.

use alloc::vec::Vec;

use super::{CnfFormula, SatError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LineKind {
    True(usize),
    False(usize),
    Return(usize),
}

impl LineKind {
    /// Whether the line is walked towards increasing `x`.
    pub fn eastward(self) -> bool {
        !matches!(self, LineKind::Return(_))
    }
}

/// One literal occurrence: wire `line` unlocks `port` of `clause`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Visit {
    pub line: usize,
    pub clause: usize,
    pub port: usize,
    pub x: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Crossing {
    pub line: usize,
    pub visit: usize,
    /// Crossing on the way up to the clause (otherwise on the way down).
    pub up: bool,
}

impl Crossing {
    pub fn x(&self, layout: &Layout) -> usize {
        let v = layout.visits[self.visit];
        if self.up {
            v.x
        } else {
            v.x + 1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub vars: usize,
    pub clauses: usize,
    pub lines: Vec<LineKind>,
    pub visits: Vec<Visit>,
    pub crossings: Vec<Crossing>,
}

/// Literals of clause `c` padded to three by repeating the last one.
pub fn padded_clause(clause: &[i32]) -> Result<Vec<i32>, SatError> {
    if clause.len() > 3 {
        return Err(SatError::ClauseTooLong(clause.len()));
    }
    let mut out = clause.to_vec();
    if let Some(&last) = clause.last() {
        while out.len() < 3 {
            out.push(last);
        }
    }
    Ok(out)
}

impl Layout {
    pub fn new(f: &CnfFormula) -> Result<Layout, SatError> {
        let n = f.vars;
        let m = f.clauses.len();
        let mut lines = Vec::new();
        for i in 0..n {
            lines.push(LineKind::True(i));
            lines.push(LineKind::False(i));
            if i + 1 < n {
                lines.push(LineKind::Return(i));
            }
        }
        let line_of = |lit: i32| {
            let var = lit.unsigned_abs() as usize - 1;
            3 * var + usize::from(lit < 0)
        };

        let mut visits = Vec::new();
        for (c, clause) in f.clauses.iter().enumerate() {
            let column = m - 1 - c;
            for (port, &lit) in padded_clause(clause)?.iter().enumerate() {
                if lit == 0 || lit.unsigned_abs() as usize > n {
                    return Err(SatError::LiteralOutOfRange(lit));
                }
                visits.push(Visit {
                    line: line_of(lit),
                    clause: c,
                    port,
                    x: 6 * column + 2 * port,
                });
            }
        }
        visits.sort_by_key(|v| (v.line, v.x));

        let mut crossings = Vec::new();
        for (vi, v) in visits.iter().enumerate() {
            for line in 0..v.line {
                crossings.push(Crossing {
                    line,
                    visit: vi,
                    up: true,
                });
                crossings.push(Crossing {
                    line,
                    visit: vi,
                    up: false,
                });
            }
        }
        Ok(Layout {
            vars: n,
            clauses: m,
            lines,
            visits,
            crossings,
        })
    }

    /// Closed form: every visit crosses each line above its wire twice.
    pub fn expected_crossings(&self) -> usize {
        self.visits.iter().map(|v| 2 * v.line).sum()
    }
}
