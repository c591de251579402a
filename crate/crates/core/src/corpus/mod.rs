//! Hand-written automata for the game door constructions and the NP
//! framework gadgets, each paired with its target and abstraction.
//!
//! A manifest line reads
//!
//! ```text
//! entry <name> file <f> target <library gadget> init <state> pruning on|off
//!   ports <target loc>=<endpoint>,... alpha <config>=<state>,...
//!   [once <target loc>] anchor "<note>"
//! ```
//!
//! (on one line). Configurations are written `inst:state+inst:state` in
//! instance order.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::equiv::{
    check_equivalence, AbstractionMap, CandidateBoundary, EquivError, EquivalenceReport,
};
use crate::gadget::Gadget;
use crate::sat::{GadgetSet, NpGadgetSpec};
use crate::system::{library_gadget, Endpoint};
use crate::text::{parse_candidate, ParseError};

pub const MANIFEST: &str = include_str!("../../corpus/manifest.txt");

const FILES: &[(&str, &str)] = &[
    (
        "lost_levels_door.sys",
        include_str!("../../corpus/lost_levels_door.sys"),
    ),
    ("smb3_door.sys", include_str!("../../corpus/smb3_door.sys")),
    (
        "nsmb_enemy_door.sys",
        include_str!("../../corpus/nsmb_enemy_door.sys"),
    ),
    ("smw_door.sys", include_str!("../../corpus/smw_door.sys")),
    ("smm_door.sys", include_str!("../../corpus/smm_door.sys")),
    (
        "smm2_3dw_door.sys",
        include_str!("../../corpus/smm2_3dw_door.sys"),
    ),
    ("smbw_door.sys", include_str!("../../corpus/smbw_door.sys")),
    ("sml2_door.sys", include_str!("../../corpus/sml2_door.sys")),
    ("smw2_door.sys", include_str!("../../corpus/smw2_door.sys")),
    (
        "nsmb_event_door.sys",
        include_str!("../../corpus/nsmb_event_door.sys"),
    ),
    ("smb2_door.sys", include_str!("../../corpus/smb2_door.sys")),
    (
        "sml_variable.sys",
        include_str!("../../corpus/sml_variable.sys"),
    ),
    (
        "sml_clause.sys",
        include_str!("../../corpus/sml_clause.sys"),
    ),
    (
        "sml_crossover.sys",
        include_str!("../../corpus/sml_crossover.sys"),
    ),
    (
        "smr_variable.sys",
        include_str!("../../corpus/smr_variable.sys"),
    ),
    (
        "smr_clause.sys",
        include_str!("../../corpus/smr_clause.sys"),
    ),
    (
        "smr_crossover.sys",
        include_str!("../../corpus/smr_crossover.sys"),
    ),
];

/// Text of a shipped corpus file.
pub fn corpus_file(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(f, _)| *f == name).map(|(_, t)| *t)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("unknown corpus entry `{0}`")]
    UnknownEntry(String),
    #[error("manifest line {line}: {msg}")]
    Manifest { line: usize, msg: String },
    #[error("{file}: {err}")]
    Parse { file: String, err: ParseError },
    #[error("{name}: {err}")]
    Equivalence { name: String, err: EquivError },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub file: String,
    pub candidate: CandidateBoundary,
    pub target_name: String,
    pub target: Gadget,
    pub target_initial: String,
    pub ports: BTreeMap<String, Endpoint>,
    pub alpha: AbstractionMap,
    pub pruning: bool,
    pub anchor: String,
}

fn manifest_err(line: usize, msg: impl Into<String>) -> CorpusError {
    CorpusError::Manifest {
        line,
        msg: msg.into(),
    }
}

/// Parses one manifest line, resolving its file through `files`.
pub fn parse_manifest_line<'a>(
    line_no: usize,
    line: &str,
    files: impl Fn(&str) -> Option<&'a str>,
) -> Result<CorpusEntry, CorpusError> {
    let (head, anchor) = match line.split_once(" anchor \"") {
        Some((h, rest)) => (
            h,
            rest.strip_suffix('"')
                .ok_or_else(|| manifest_err(line_no, "unterminated anchor"))?,
        ),
        None => return Err(manifest_err(line_no, "missing anchor")),
    };
    let toks: Vec<&str> = head.split_whitespace().collect();
    let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
    let mut it = toks.chunks(2);
    for pair in &mut it {
        match pair {
            [k, v] => {
                fields.insert(k, v);
            }
            _ => return Err(manifest_err(line_no, "odd number of fields")),
        }
    }
    let get = |k: &str| {
        fields
            .get(k)
            .copied()
            .ok_or_else(|| manifest_err(line_no, alloc::format!("missing `{k}`")))
    };

    let name = get("entry")?.to_string();
    let file = get("file")?.to_string();
    let target_name = get("target")?.to_string();
    let target = library_gadget(&target_name)
        .ok_or_else(|| manifest_err(line_no, alloc::format!("unknown target `{target_name}`")))?;
    let pruning = match get("pruning")? {
        "on" => true,
        "off" => false,
        other => {
            return Err(manifest_err(
                line_no,
                alloc::format!("pruning must be on or off, got `{other}`"),
            ))
        }
    };

    let mut ports = BTreeMap::new();
    let mut boundary = Vec::new();
    for pair in get("ports")?.split(',') {
        let (loc, e) = pair
            .split_once('=')
            .ok_or_else(|| manifest_err(line_no, "malformed port"))?;
        let e = Endpoint::parse(e)
            .ok_or_else(|| manifest_err(line_no, alloc::format!("bad endpoint `{e}`")))?;
        boundary.push(e.clone());
        ports.insert(loc.to_string(), e);
    }
    let mut alpha = Vec::new();
    for pair in get("alpha")?.split(',') {
        let (cfg, st) = pair
            .split_once('=')
            .ok_or_else(|| manifest_err(line_no, "malformed alpha"))?;
        alpha.push((cfg.to_string(), st.to_string()));
    }
    let mut once = Vec::new();
    if let Some(loc) = fields.get("once") {
        once.push(
            ports
                .get(*loc)
                .cloned()
                .ok_or_else(|| manifest_err(line_no, "once port not in ports"))?,
        );
    }

    let text =
        files(&file).ok_or_else(|| manifest_err(line_no, alloc::format!("no file `{file}`")))?;
    let system = parse_candidate(text).map_err(|err| CorpusError::Parse {
        file: file.clone(),
        err,
    })?;
    Ok(CorpusEntry {
        name,
        file,
        candidate: CandidateBoundary {
            system,
            boundary,
            once,
        },
        target_name,
        target,
        target_initial: get("init")?.to_string(),
        ports,
        alpha: AbstractionMap::new(alpha),
        pruning,
        anchor: anchor.to_string(),
    })
}

/// Parses a whole manifest; blank and `#` lines are skipped.
pub fn parse_manifest<'a>(
    manifest: &str,
    files: impl Fn(&str) -> Option<&'a str> + Copy,
) -> Result<Vec<CorpusEntry>, CorpusError> {
    manifest
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_manifest_line(i + 1, l, files))
        .collect()
}

/// The shipped corpus in manifest order.
pub fn corpus_entries() -> Vec<CorpusEntry> {
    parse_manifest(MANIFEST, corpus_file).expect("shipped corpus parses")
}

pub fn corpus_list() -> Vec<String> {
    corpus_entries().into_iter().map(|e| e.name).collect()
}

pub fn entry(name: &str) -> Result<CorpusEntry, CorpusError> {
    corpus_entries()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CorpusError::UnknownEntry(name.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelReport {
    pub name: String,
    pub target: String,
    pub pruning: bool,
    pub report: EquivalenceReport,
}

impl ModelReport {
    pub fn passed(&self) -> bool {
        self.report.is_equivalent()
    }
}

/// Checks `e` with an explicit pruning mode.
pub fn verify_entry(e: &CorpusEntry, pruning: bool) -> Result<ModelReport, CorpusError> {
    let report = check_equivalence(
        &e.candidate,
        &e.target,
        &e.target_initial,
        &e.alpha,
        &e.ports,
        pruning,
    )
    .map_err(|err| CorpusError::Equivalence {
        name: e.name.clone(),
        err,
    })?;
    Ok(ModelReport {
        name: e.name.clone(),
        target: e.target_name.clone(),
        pruning,
        report,
    })
}

/// Checks the named entry under its declared pruning mode.
pub fn verify_model(name: &str) -> Result<ModelReport, CorpusError> {
    let e = entry(name)?;
    verify_entry(&e, e.pruning)
}

/// Checks every entry in order.
pub fn verify_all() -> Vec<Result<ModelReport, CorpusError>> {
    corpus_entries()
        .iter()
        .map(|e| verify_entry(e, e.pruning))
        .collect()
}

/// The game model standing in for an NP framework role, with its initial
/// state. Start, finish and diode have no game models.
pub fn np_model(set: GadgetSet, role: NpGadgetSpec) -> Option<(Gadget, String)> {
    let prefix = match set {
        GadgetSet::Abstract => return None,
        GadgetSet::Sml => "sml",
        GadgetSet::Smr => "smr",
    };
    let suffix = match role {
        NpGadgetSpec::Variable => "variable",
        NpGadgetSpec::Clause => "clause",
        NpGadgetSpec::Crossover { .. } => "crossover",
        _ => return None,
    };
    let e = entry(&alloc::format!("{prefix}_{suffix}")).ok()?;
    let inst = &e.candidate.system.instances()[0];
    let g = e.candidate.system.gadget_of(&inst.id)?.clone();
    Some((g, inst.initial.clone()))
}
