use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::gadget::{Gadget, Location, TraversalRule};

/// Gadgets of the NP framework: start, finish, diode, variable, clause and
/// crossover (plain or leaky, in either handedness).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NpGadgetSpec {
    Start,
    Finish,
    Diode,
    Variable,
    Clause,
    Crossover { leaky: bool, mirrored: bool },
}

impl NpGadgetSpec {
    pub const ALL: [NpGadgetSpec; 9] = [
        NpGadgetSpec::Start,
        NpGadgetSpec::Finish,
        NpGadgetSpec::Diode,
        NpGadgetSpec::Variable,
        NpGadgetSpec::Clause,
        NpGadgetSpec::Crossover {
            leaky: false,
            mirrored: false,
        },
        NpGadgetSpec::Crossover {
            leaky: false,
            mirrored: true,
        },
        NpGadgetSpec::Crossover {
            leaky: true,
            mirrored: false,
        },
        NpGadgetSpec::Crossover {
            leaky: true,
            mirrored: true,
        },
    ];

    pub fn library_name(self) -> &'static str {
        match self {
            NpGadgetSpec::Start => "np.start",
            NpGadgetSpec::Finish => "np.finish",
            NpGadgetSpec::Diode => "np.diode",
            NpGadgetSpec::Variable => "np.variable",
            NpGadgetSpec::Clause => "np.clause",
            NpGadgetSpec::Crossover {
                leaky: false,
                mirrored: false,
            } => "np.crossover",
            NpGadgetSpec::Crossover {
                leaky: false,
                mirrored: true,
            } => "np.crossover_mirrored",
            NpGadgetSpec::Crossover {
                leaky: true,
                mirrored: false,
            } => "np.crossover_leaky",
            NpGadgetSpec::Crossover {
                leaky: true,
                mirrored: true,
            } => "np.crossover_leaky_mirrored",
        }
    }

    pub fn from_library_name(name: &str) -> Option<NpGadgetSpec> {
        NpGadgetSpec::ALL
            .into_iter()
            .find(|s| s.library_name() == name)
    }

    /// Initial state used by the compiler.
    pub fn initial(self) -> &'static str {
        match self {
            NpGadgetSpec::Variable => "unset",
            NpGadgetSpec::Clause => "locked",
            NpGadgetSpec::Crossover { leaky: true, .. } => "fresh",
            _ => "idle",
        }
    }

    pub fn gadget(self) -> Gadget {
        let r = |a: &str, b: &str, p: &str, q: &str| TraversalRule::new(a, b, p, q);
        let locs = |ids: &[&str]| {
            ids.iter()
                .map(|&id| Location::exposed(id))
                .collect::<Vec<_>>()
        };
        let states = |ids: &[&str]| ids.iter().map(|s| s.to_string()).collect::<Vec<String>>();
        let name = self.library_name();
        match self {
            NpGadgetSpec::Start | NpGadgetSpec::Finish => {
                Gadget::new(name, locs(&["p"]), states(&["idle"]), vec![])
            }
            NpGadgetSpec::Diode => Gadget::new(
                name,
                locs(&["in", "out"]),
                states(&["idle"]),
                vec![r("in", "out", "idle", "idle")],
            ),
            NpGadgetSpec::Variable => Gadget::new(
                name,
                locs(&["V_in", "V_true_out", "V_false_out"]),
                states(&["unset", "done"]),
                vec![
                    r("V_in", "V_true_out", "unset", "done"),
                    r("V_in", "V_false_out", "unset", "done"),
                ],
            ),
            NpGadgetSpec::Clause => {
                let mut rules = Vec::new();
                for i in 1..=3 {
                    let (a, b) = (alloc::format!("U{i}_in"), alloc::format!("U{i}_out"));
                    rules.push(r(a.as_str(), b.as_str(), "locked", "unlocked"));
                    rules.push(r(a.as_str(), b.as_str(), "unlocked", "unlocked"));
                }
                rules.push(r("K_in", "K_out", "unlocked", "unlocked"));
                Gadget::new(
                    name,
                    locs(&[
                        "K_out", "K_in", "U3_out", "U3_in", "U2_out", "U2_in", "U1_out", "U1_in",
                    ]),
                    states(&["locked", "unlocked"]),
                    rules,
                )
            }
            NpGadgetSpec::Crossover { leaky, mirrored } => {
                let base = if leaky {
                    Gadget::new(
                        name,
                        locs(&["H_in", "V_out", "H_out", "V_in"]),
                        states(&["fresh", "v_done"]),
                        vec![
                            r("H_in", "H_out", "fresh", "fresh"),
                            r("H_in", "H_out", "v_done", "v_done"),
                            r("V_in", "V_out", "fresh", "v_done"),
                            r("V_in", "V_out", "v_done", "v_done"),
                            r("H_in", "V_out", "v_done", "v_done"),
                        ],
                    )
                } else {
                    Gadget::new(
                        name,
                        locs(&["H_in", "V_out", "H_out", "V_in"]),
                        states(&["idle"]),
                        vec![
                            r("H_in", "H_out", "idle", "idle"),
                            r("V_in", "V_out", "idle", "idle"),
                        ],
                    )
                };
                if mirrored {
                    base.mirrored(name)
                } else {
                    base
                }
            }
        }
    }
}
