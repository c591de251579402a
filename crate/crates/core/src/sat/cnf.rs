use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

/// A CNF formula over variables `1..=vars`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    pub vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DimacsError {
    #[error("line {line}: malformed header, expected `p cnf <vars> <clauses>`")]
    MalformedHeader { line: usize },
    #[error("line {line}: clause data before the header")]
    MissingHeader { line: usize },
    #[error("line {line}: `{token}` is not a literal")]
    BadToken { line: usize, token: String },
    #[error("line {line}: literal {literal} out of range for {vars} variables")]
    LiteralOutOfRange {
        line: usize,
        literal: i64,
        vars: usize,
    },
    #[error("last clause is missing its terminating 0")]
    MissingTerminator,
    #[error("header declares {expected} clauses, found {found}")]
    ClauseCount { expected: usize, found: usize },
}

/// Parses DIMACS CNF: `c` comments, one `p cnf n m` header, clauses
/// terminated by `0` (clauses may span lines; a trailing `%` ends input).
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();

    'lines: for (ix, raw) in text.lines().enumerate() {
        let line_no = ix + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let parsed = match toks.as_slice() {
                ["p", "cnf", n, m] if header.is_none() => n.parse().ok().zip(m.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or(DimacsError::MalformedHeader { line: line_no })?);
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(DimacsError::MissingHeader { line: line_no });
        };
        for tok in line.split_whitespace() {
            if tok == "%" {
                break 'lines;
            }
            let lit: i64 = tok.parse().map_err(|_| DimacsError::BadToken {
                line: line_no,
                token: tok.into(),
            })?;
            if lit == 0 {
                clauses.push(core::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > vars || lit.unsigned_abs() > i32::MAX as u64 {
                return Err(DimacsError::LiteralOutOfRange {
                    line: line_no,
                    literal: lit,
                    vars,
                });
            } else {
                current.push(lit as i32);
            }
        }
    }
    let (vars, expected) = header.ok_or(DimacsError::MalformedHeader { line: 1 })?;
    if !current.is_empty() {
        return Err(DimacsError::MissingTerminator);
    }
    if clauses.len() != expected {
        return Err(DimacsError::ClauseCount {
            expected,
            found: clauses.len(),
        });
    }
    Ok(CnfFormula { vars, clauses })
}

impl CnfFormula {
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p cnf {} {}", self.vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(out, "{l} ");
            }
            out.push_str("0\n");
        }
        out
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            f.write_str("(")?;
            for (j, l) in c.iter().enumerate() {
                if j > 0 {
                    f.write_str(" | ")?;
                }
                if *l < 0 {
                    write!(f, "-x{}", -l)?;
                } else {
                    write!(f, "x{l}")?;
                }
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn two_variable_clause() {
        let f = parse_dimacs("p cnf 2 1\n1 -2 0").unwrap();
        assert_eq!(
            f,
            CnfFormula {
                vars: 2,
                clauses: vec![vec![1, -2]]
            }
        );
    }

    #[test]
    fn contradiction_has_two_clauses() {
        let f = parse_dimacs("c unit clauses\np cnf 1 2\n1 0\n-1 0\n").unwrap();
        assert_eq!(f.clauses.len(), 2);
    }

    #[test]
    fn out_of_range_literal_is_named() {
        let err = parse_dimacs("p cnf 2 1\n1 5 0\n").unwrap_err();
        assert_eq!(
            err,
            DimacsError::LiteralOutOfRange {
                line: 2,
                literal: 5,
                vars: 2
            }
        );
        assert!(err.to_string().contains('5'));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            parse_dimacs("p cnf x 1\n"),
            Err(DimacsError::MalformedHeader { .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n1 2\n"),
            Err(DimacsError::MissingTerminator)
        ));
        assert!(matches!(
            parse_dimacs("1 0\n"),
            Err(DimacsError::MissingHeader { .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 2\n1 0\n"),
            Err(DimacsError::ClauseCount { .. })
        ));
    }

    #[test]
    fn clauses_may_span_lines() {
        let f = parse_dimacs("p cnf 3 2\n1 2\n3 0 -1\n0\n%\n0\n").unwrap();
        assert_eq!(f.clauses, vec![vec![1, 2, 3], vec![-1]]);
        assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }
}
