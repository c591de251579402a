//! The line-oriented system text format.
//!
//! ```text
//! # doorkit system
//! gadget hall
//!   loc a exposed
//!   loc b exposed
//!   state s
//!   rule a -> b : s -> s
//! end
//! use door.open_close as oc
//! instance d1 : oc init Open
//! connect start d1.T_in
//! connect d1.T_out goal
//! ```

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::gadget::{Exposure, Gadget, Location, TraversalRule};
use crate::system::{
    library_gadget, Connection, Endpoint, GadgetInstance, GadgetSource, GadgetType, System,
};

pub const HEADER: &str = "# doorkit system";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownGadget(String),
    DanglingEndpoint(String),
    MissingTerminal(&'static str),
    DuplicateTerminal(&'static str),
    Duplicate(String),
}

/// A parse failure at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::UnknownGadget(name) => write!(f, "unknown gadget `{name}`"),
            ParseErrorKind::DanglingEndpoint(e) => write!(f, "dangling endpoint `{e}`"),
            ParseErrorKind::MissingTerminal(t) => write!(f, "missing `{t}` connection"),
            ParseErrorKind::DuplicateTerminal(t) => write!(f, "more than one `{t}` connection"),
            ParseErrorKind::Duplicate(what) => write!(f, "duplicate {what}"),
        }
    }
}

/// Text block for one gadget, terminated by a newline after `end`.
pub fn gadget_block(g: &Gadget) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "gadget {}", g.name());
    for l in g.locations() {
        let _ = writeln!(out, "  loc {} {}", l.id, l.exposure.as_str());
    }
    for s in g.states() {
        let _ = writeln!(out, "  state {s}");
    }
    for r in g.rules() {
        let _ = writeln!(out, "  rule {r}");
    }
    out.push_str("end\n");
    out
}

/// Canonical text of `s`: header, types by alias, instances by id,
/// connections sorted.
pub fn serialize_system(s: &System) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for t in s.types() {
        match &t.source {
            GadgetSource::Library(lib) => {
                let _ = writeln!(out, "use {lib} as {}", t.alias);
            }
            GadgetSource::Inline => out.push_str(&gadget_block(&t.gadget)),
        }
    }
    for i in s.instances() {
        let _ = writeln!(
            out,
            "instance {} : {} init {}",
            i.id, i.type_name, i.initial
        );
    }
    for c in s.connections() {
        let _ = writeln!(out, "connect {} {}", c.a, c.b);
    }
    out
}

/// Parses a complete system with exactly one `start` and one `goal`.
pub fn parse_system(text: &str) -> Result<System, ParseError> {
    Parser::new(text).run(true)
}

/// Parses a boundary candidate, which may omit `start` and `goal`.
pub fn parse_candidate(text: &str) -> Result<System, ParseError> {
    Parser::new(text).run(false)
}

/// Parses a file holding a single `gadget ... end` block.
pub fn parse_gadget(text: &str) -> Result<Gadget, ParseError> {
    let mut p = Parser::new(text);
    let mut found = None;
    while let Some((line_no, toks)) = p.next_line() {
        match toks[0].1 {
            "gadget" if found.is_none() => found = Some(p.gadget(line_no, &toks)?),
            _ => return Err(syntax(line_no, toks[0].0, "expected a single gadget block")),
        }
    }
    found.ok_or(ParseError {
        line: 1,
        column: 1,
        kind: ParseErrorKind::Syntax("no gadget".into()),
    })
}

fn syntax(line: usize, column: usize, msg: &str) -> ParseError {
    ParseError {
        line,
        column,
        kind: ParseErrorKind::Syntax(msg.to_string()),
    }
}

type Tokens<'a> = Vec<(usize, &'a str)>;

struct Parser<'a> {
    lines: core::iter::Enumerate<core::str::Lines<'a>>,
    last_line: usize,
}

fn tokenize(line: &str) -> Tokens<'_> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &body[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &body[s..]));
    }
    out.into_iter()
        .map(|(s, t)| (body[..s].chars().count() + 1, t))
        .collect()
}

struct PendingConnection {
    line: usize,
    columns: [usize; 2],
    conn: Connection,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            lines: text.lines().enumerate(),
            last_line: 0,
        }
    }

    fn next_line(&mut self) -> Option<(usize, Tokens<'a>)> {
        for (ix, line) in self.lines.by_ref() {
            self.last_line = ix + 1;
            let toks = tokenize(line);
            if !toks.is_empty() {
                return Some((ix + 1, toks));
            }
        }
        None
    }

    fn gadget(&mut self, line_no: usize, head: &Tokens<'a>) -> Result<Gadget, ParseError> {
        if head.len() != 2 {
            return Err(syntax(line_no, head[0].0, "expected `gadget <name>`"));
        }
        let name = head[1].1;
        let mut locations = Vec::new();
        let mut states = Vec::new();
        let mut rules = Vec::new();
        loop {
            let Some((ln, toks)) = self.next_line() else {
                return Err(syntax(self.last_line, 1, "gadget block without `end`"));
            };
            match (toks[0].1, toks.len()) {
                ("end", 1) => break,
                ("loc", 3) => {
                    let exposure = match toks[2].1 {
                        "exposed" => Exposure::Exposed,
                        "internal" => Exposure::Internal,
                        _ => return Err(syntax(ln, toks[2].0, "expected `exposed` or `internal`")),
                    };
                    locations.push(Location {
                        id: toks[1].1.to_string(),
                        exposure,
                    });
                }
                ("state", 2) => states.push(toks[1].1.to_string()),
                ("rule", 8) if toks[2].1 == "->" && toks[4].1 == ":" && toks[6].1 == "->" => {
                    rules.push(TraversalRule::new(
                        toks[1].1, toks[3].1, toks[5].1, toks[7].1,
                    ));
                }
                _ => {
                    return Err(syntax(
                        ln,
                        toks[0].0,
                        "expected `loc`, `state`, `rule a -> b : p -> q` or `end`",
                    ))
                }
            }
        }
        Ok(Gadget::new(name, locations, states, rules))
    }

    fn run(mut self, require_terminals: bool) -> Result<System, ParseError> {
        let mut types: BTreeMap<String, GadgetType> = BTreeMap::new();
        let mut instances: BTreeMap<String, GadgetInstance> = BTreeMap::new();
        let mut pending = Vec::new();

        while let Some((ln, toks)) = self.next_line() {
            let col = toks[0].0;
            match toks[0].1 {
                "gadget" => {
                    let g = self.gadget(ln, &toks)?;
                    let alias = g.name().to_string();
                    if types.contains_key(&alias) {
                        return Err(ParseError {
                            line: ln,
                            column: toks[1].0,
                            kind: ParseErrorKind::Duplicate(alloc::format!(
                                "gadget type `{alias}`"
                            )),
                        });
                    }
                    types.insert(
                        alias.clone(),
                        GadgetType {
                            alias,
                            source: GadgetSource::Inline,
                            gadget: g,
                        },
                    );
                }
                "use" => {
                    if toks.len() != 4 || toks[2].1 != "as" {
                        return Err(syntax(ln, col, "expected `use <gadget> as <alias>`"));
                    }
                    let gadget = library_gadget(toks[1].1).ok_or(ParseError {
                        line: ln,
                        column: toks[1].0,
                        kind: ParseErrorKind::UnknownGadget(toks[1].1.to_string()),
                    })?;
                    let alias = toks[3].1.to_string();
                    if types.contains_key(&alias) {
                        return Err(ParseError {
                            line: ln,
                            column: toks[3].0,
                            kind: ParseErrorKind::Duplicate(alloc::format!(
                                "gadget type `{alias}`"
                            )),
                        });
                    }
                    types.insert(
                        alias.clone(),
                        GadgetType {
                            alias,
                            source: GadgetSource::Library(toks[1].1.to_string()),
                            gadget,
                        },
                    );
                }
                "instance" => {
                    if toks.len() != 6 || toks[2].1 != ":" || toks[4].1 != "init" {
                        return Err(syntax(
                            ln,
                            col,
                            "expected `instance <id> : <type> init <state>`",
                        ));
                    }
                    let id = toks[1].1;
                    if id.contains('.') || id == "start" || id == "goal" {
                        return Err(syntax(
                            ln,
                            toks[1].0,
                            "instance ids may not contain `.` or be reserved",
                        ));
                    }
                    if !types.contains_key(toks[3].1) {
                        return Err(ParseError {
                            line: ln,
                            column: toks[3].0,
                            kind: ParseErrorKind::UnknownGadget(toks[3].1.to_string()),
                        });
                    }
                    if instances.contains_key(id) {
                        return Err(ParseError {
                            line: ln,
                            column: toks[1].0,
                            kind: ParseErrorKind::Duplicate(alloc::format!("instance `{id}`")),
                        });
                    }
                    instances.insert(
                        id.to_string(),
                        GadgetInstance {
                            id: id.to_string(),
                            type_name: toks[3].1.to_string(),
                            initial: toks[5].1.to_string(),
                        },
                    );
                }
                "connect" => {
                    if toks.len() != 3 {
                        return Err(syntax(ln, col, "expected `connect <a> <b>`"));
                    }
                    let mut ends = [Endpoint::Start, Endpoint::Start];
                    for k in 0..2 {
                        ends[k] = Endpoint::parse(toks[k + 1].1)
                            .ok_or_else(|| syntax(ln, toks[k + 1].0, "malformed endpoint"))?;
                    }
                    let [a, b] = ends;
                    pending.push(PendingConnection {
                        line: ln,
                        columns: [toks[1].0, toks[2].0],
                        conn: Connection::new(a, b),
                    });
                }
                _ => return Err(syntax(ln, col, "unknown directive")),
            }
        }

        let mut seen = [None::<(usize, usize)>; 2];
        for p in &pending {
            for (k, e) in [&p.conn.a, &p.conn.b].into_iter().enumerate() {
                let column = p.columns[k];
                match e {
                    Endpoint::Port { instance, location } => {
                        let ok = instances
                            .get(instance)
                            .and_then(|i| types.get(&i.type_name))
                            .is_some_and(|t| t.gadget.location(location).is_some());
                        if !ok {
                            return Err(ParseError {
                                line: p.line,
                                column,
                                kind: ParseErrorKind::DanglingEndpoint(e.to_string()),
                            });
                        }
                    }
                    Endpoint::Start | Endpoint::Goal => {
                        let (slot, name) = if *e == Endpoint::Start {
                            (0, "start")
                        } else {
                            (1, "goal")
                        };
                        if require_terminals && seen[slot].is_some() {
                            return Err(ParseError {
                                line: p.line,
                                column,
                                kind: ParseErrorKind::DuplicateTerminal(name),
                            });
                        }
                        seen[slot] = Some((p.line, column));
                    }
                }
            }
        }
        if require_terminals {
            for (slot, name) in [(0, "start"), (1, "goal")] {
                if seen[slot].is_none() {
                    return Err(ParseError {
                        line: self.last_line.max(1),
                        column: 1,
                        kind: ParseErrorKind::MissingTerminal(name),
                    });
                }
            }
        }

        Ok(System::new(
            types.into_values(),
            instances.into_values(),
            pending.into_iter().map(|p| p.conn),
        ))
    }
}
