use alloc::collections::BTreeMap;
use alloc::string::String;

use super::{Move, Witness};
use crate::system::{Endpoint, System};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject { step: usize, reason: &'static str },
}

/// Replays `w` from the initial configuration of `s` using only the
/// symbolic system description.
pub fn verify_witness(s: &System, w: &Witness) -> Verdict {
    let mut states: BTreeMap<&str, &str> = s
        .instances()
        .iter()
        .map(|i| (i.id.as_str(), i.initial.as_str()))
        .collect();
    let mut agent = Endpoint::Start;

    for (step, m) in w.moves.iter().enumerate() {
        let reject = |reason| Verdict::Reject { step, reason };
        match m {
            Move::Walk { from, to } => {
                if *from != agent {
                    return reject("walk does not start at the agent");
                }
                let exists = s
                    .connections()
                    .iter()
                    .any(|c| (c.a == *from && c.b == *to) || (c.b == *from && c.a == *to));
                if !exists {
                    return reject("no such connection");
                }
                agent = to.clone();
            }
            Move::Traverse { instance, rule } => {
                let Some(g) = s.gadget_of(instance) else {
                    return reject("unknown instance");
                };
                if agent != Endpoint::port(instance.as_str(), rule.entry.as_str()) {
                    return reject("traverse does not start at the agent");
                }
                let current = states[instance.as_str()];
                let legal = g.rules().iter().any(|r| r == rule) && rule.pre == current;
                if !legal {
                    return reject("rule not applicable");
                }
                let post: &String = &g.rules().iter().find(|r| *r == rule).unwrap().post;
                states.insert(instance.as_str(), post.as_str());
                agent = Endpoint::port(instance.as_str(), rule.exit.as_str());
            }
        }
    }
    if agent == Endpoint::Goal {
        Verdict::Accept
    } else {
        Verdict::Reject {
            step: w.moves.len(),
            reason: "not at goal",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::TraversalRule;
    use crate::solver::{solve, DEFAULT_MAX_CONFIGS};
    use crate::text::parse_system;

    fn one_door() -> System {
        parse_system(
            "use door.open_close as oc\ninstance d1 : oc init Open\nconnect start d1.T_in\nconnect d1.T_out goal\n",
        )
        .unwrap()
    }

    #[test]
    fn mismatched_pre_state_is_rejected_at_its_index() {
        let s = one_door();
        let mut w = solve(&s, DEFAULT_MAX_CONFIGS)
            .unwrap()
            .witness()
            .unwrap()
            .clone();
        w.moves[1] = Move::Traverse {
            instance: "d1".into(),
            rule: TraversalRule::new("T_in", "T_out", "Closed", "Closed"),
        };
        assert_eq!(
            verify_witness(&s, &w),
            Verdict::Reject {
                step: 1,
                reason: "rule not applicable"
            }
        );
    }

    #[test]
    fn short_witness_is_not_at_goal() {
        let s = one_door();
        let mut w = solve(&s, DEFAULT_MAX_CONFIGS)
            .unwrap()
            .witness()
            .unwrap()
            .clone();
        w.moves.pop();
        assert_eq!(
            verify_witness(&s, &w),
            Verdict::Reject {
                step: 2,
                reason: "not at goal"
            }
        );
    }

    #[test]
    fn teleporting_walk_is_rejected() {
        let s = one_door();
        let w = Witness {
            moves: alloc::vec![Move::Walk {
                from: Endpoint::port("d1", "T_out"),
                to: Endpoint::Goal
            }],
        };
        assert_eq!(
            verify_witness(&s, &w),
            Verdict::Reject {
                step: 0,
                reason: "walk does not start at the agent"
            }
        );
    }
}
