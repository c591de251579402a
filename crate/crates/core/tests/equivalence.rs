use std::collections::{BTreeMap, BTreeSet};

use doorkit_core::corpus::{corpus_entries, corpus_list, verify_entry, verify_model, CorpusEntry};
use doorkit_core::equiv::{
    boundary_behavior, check_equivalence, prune_dominated, simulation_preorder, AbstractionMap,
    Behavior, CandidateBoundary, Counterexample, DEFAULT_MAX_REST_CONFIGS,
};
use doorkit_core::gadget::{Location, TraversalRule};
use doorkit_core::{canonical_door, DoorKind, Endpoint, Gadget};
use doorkit_testkit::{gadget_words, successors};

fn pruned(e: &CorpusEntry) -> Behavior {
    let b = boundary_behavior(&e.candidate, DEFAULT_MAX_REST_CONFIGS).unwrap();
    if e.pruning {
        prune_dominated(&b, &simulation_preorder(&b))
    } else {
        b
    }
}

fn canonical_identity(
    kind: DoorKind,
    init: &str,
) -> (
    CandidateBoundary,
    BTreeMap<String, Endpoint>,
    AbstractionMap,
) {
    let g = canonical_door(kind);
    let c = CandidateBoundary::from_gadget(&g, init);
    let ports = g
        .locations()
        .iter()
        .map(|l| (l.id.clone(), Endpoint::port("g", l.id.as_str())))
        .collect();
    let alpha = AbstractionMap::new(g.states().iter().map(|s| (format!("g:{s}"), s.clone())));
    (c, ports, alpha)
}

#[test]
fn corpus_has_seventeen_unique_names_in_stable_order() {
    let names = corpus_list();
    assert_eq!(names.len(), 17);
    assert_eq!(names.iter().collect::<BTreeSet<_>>().len(), 17);
    assert_eq!(names, corpus_list());
}

#[test]
fn every_entry_verifies_within_sixty_four_configurations() {
    for e in corpus_entries() {
        let r = verify_entry(&e, e.pruning).unwrap();
        assert!(r.passed(), "{}: {:?}", e.name, r.report.counterexample);
        assert!(r.report.configs <= 64, "{}: {}", e.name, r.report.configs);
    }
}

#[test]
fn canonical_doors_behave_as_their_rules() {
    for kind in DoorKind::ALL {
        let (c, ports, alpha) = canonical_identity(kind, "Open");
        let g = canonical_door(kind);
        let r = check_equivalence(&c, &g, "Open", &alpha, &ports, false).unwrap();
        assert!(r.is_equivalent(), "{kind:?}");

        let b = boundary_behavior(&c, 100).unwrap();
        let loc = |i: usize| match &b.boundary[i] {
            Endpoint::Port { location, .. } => location.clone(),
            _ => unreachable!(),
        };
        let mut quads = BTreeSet::new();
        for (e, x, pre, post) in b.quadruples() {
            let state = |c: usize| b.state_names[0][b.configs[c][0] as usize].clone();
            quads.insert(TraversalRule::new(
                loc(e),
                loc(x),
                state(pre),
                state(post.unwrap()),
            ));
        }
        let reachable: BTreeSet<String> = b
            .reachable()
            .iter()
            .map(|&c| b.state_names[0][b.configs[c][0] as usize].clone())
            .collect();
        let expected: BTreeSet<TraversalRule> = g
            .rules()
            .iter()
            .filter(|r| reachable.contains(&r.pre))
            .cloned()
            .collect();
        assert_eq!(quads, expected, "{kind:?}");
    }
}

#[test]
fn pruning_is_needed_exactly_where_declared() {
    for e in corpus_entries() {
        let off = verify_entry(&e, false).unwrap();
        assert_eq!(off.passed(), !e.pruning, "{}", e.name);
        assert!(verify_entry(&e, true).unwrap().passed(), "{}", e.name);
    }
}

#[test]
fn smb3_without_pruning_names_a_broken_configuration() {
    let e = corpus_entries()
        .into_iter()
        .find(|e| e.name == "smb3_door")
        .unwrap();
    let r = verify_entry(&e, false).unwrap();
    match r.report.counterexample {
        Some(Counterexample::MissingAbstraction { config }) => {
            assert!(config.contains("_1"), "{config}")
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn smm2_without_pruning_names_a_keyed_configuration() {
    let e = corpus_entries()
        .into_iter()
        .find(|e| e.name == "smm2_3dw_door")
        .unwrap();
    let r = verify_entry(&e, false).unwrap();
    let text = r.report.counterexample.unwrap().to_string();
    assert!(text.contains("check:k1"), "{text}");
}

#[test]
fn smm2_pruned_configurations_hold_no_key() {
    let e = corpus_entries()
        .into_iter()
        .find(|e| e.name == "smm2_3dw_door")
        .unwrap();
    let b = pruned(&e);
    for c in b.reachable() {
        assert!(
            b.config_name(c).contains("check:k0"),
            "{}",
            b.config_name(c)
        );
    }
}

#[test]
fn nsmb_event_door_is_exact_with_two_configurations() {
    let r = verify_model("nsmb_event_door").unwrap();
    assert!(r.passed());
    assert!(!r.pruning);
    assert_eq!(r.report.configs, 2);
}

#[test]
fn smb2_pruned_configurations_within_product_bound() {
    let r = verify_model("smb2_door").unwrap();
    assert!(r.passed());
    assert!(r.report.pruned_configs <= 8);
}

#[test]
fn smb2_close_path_always_parks_the_mushroom_at_b() {
    let e = corpus_entries()
        .into_iter()
        .find(|e| e.name == "smb2_door")
        .unwrap();
    let b = boundary_behavior(&e.candidate, DEFAULT_MAX_REST_CONFIGS).unwrap();
    let entry = b
        .boundary
        .iter()
        .position(|p| *p == e.ports["C_in"])
        .unwrap();
    let exit = b
        .boundary
        .iter()
        .position(|p| *p == e.ports["C_out"])
        .unwrap();
    let mut seen = 0;
    for c in 0..b.configs.len() {
        for &(x, post) in &b.outcomes[c][entry] {
            assert_eq!(x, exit);
            assert!(
                b.config_name(post.unwrap()).starts_with("m1:B"),
                "{}",
                b.config_name(post.unwrap())
            );
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn sml2_trap_branch_contributes_nothing() {
    let e = corpus_entries()
        .into_iter()
        .find(|e| e.name == "sml2_door")
        .unwrap();
    let b = boundary_behavior(&e.candidate, DEFAULT_MAX_REST_CONFIGS).unwrap();
    let entry = b
        .boundary
        .iter()
        .position(|p| *p == e.ports["T_in"])
        .unwrap();
    let right = b.config_index("koopa:right").unwrap();
    let got: Vec<(Endpoint, String)> = b.outcomes[right][entry]
        .iter()
        .map(|&(x, p)| (b.boundary[x].clone(), b.config_name(p.unwrap())))
        .collect();
    assert_eq!(
        got,
        [(e.ports["T_out"].clone(), "koopa:topleft".to_string())]
    );
}

#[test]
fn smb3_intact_strictly_simulates_broken() {
    let e = corpus_entries()
        .into_iter()
        .find(|e| e.name == "smb3_door")
        .unwrap();
    let b = boundary_behavior(&e.candidate, DEFAULT_MAX_REST_CONFIGS).unwrap();
    let pre = simulation_preorder(&b);
    let intact = b.config_index("spiny:R_0_0").unwrap();
    let broken = b.config_index("spiny:R_1_0").unwrap();
    assert!(pre.strictly_above(intact, broken));
}

#[test]
fn preorder_is_reflexive_and_transitive_and_pruning_idempotent() {
    for e in corpus_entries() {
        let b = boundary_behavior(&e.candidate, DEFAULT_MAX_REST_CONFIGS).unwrap();
        let pre = simulation_preorder(&b);
        let n = b.configs.len();
        for a in 0..n {
            assert!(pre.simulates(a, a));
            for m in 0..n {
                for z in 0..n {
                    if pre.simulates(a, m) && pre.simulates(m, z) {
                        assert!(pre.simulates(a, z), "{}", e.name);
                    }
                }
            }
        }
        let once = prune_dominated(&b, &pre);
        assert_eq!(
            prune_dominated(&once, &simulation_preorder(&once)),
            once,
            "{}",
            e.name
        );

        // Maximal posts always survive.
        for (c, per_entry) in b.outcomes.iter().enumerate() {
            for (ei, set) in per_entry.iter().enumerate() {
                for &(x, p) in set {
                    let Some(p) = p else { continue };
                    let beaten = set
                        .iter()
                        .any(|&(y, q)| y == x && q.is_some_and(|q| pre.simulates(q, p) && q != p));
                    if !beaten {
                        assert!(once.outcomes[c][ei].contains(&(x, Some(p))), "{}", e.name);
                    }
                }
            }
        }
    }
}

#[test]
fn identical_outcome_sets_are_mutually_related() {
    let (c, _, _) = canonical_identity(DoorKind::SymmetricSelfClosing, "Open");
    let b = boundary_behavior(&c, 100).unwrap();
    let pre = simulation_preorder(&b);
    for x in 0..b.configs.len() {
        for y in 0..b.configs.len() {
            if b.outcomes[x] == b.outcomes[y] {
                assert!(pre.simulates(x, y) && pre.simulates(y, x));
            }
        }
    }
}

/// Whether firing `rule` from any reachable rest configuration leaves the
/// agent unable to reach the boundary again.
fn is_trap(e: &CorpusEntry, inst: &str, rule: &TraversalRule) -> bool {
    let s = &e.candidate.system;
    let b = boundary_behavior(&e.candidate, DEFAULT_MAX_REST_CONFIGS).unwrap();
    let ix = s.instance_index(inst).unwrap();
    for c in b.reachable() {
        let mut states: Vec<String> = s
            .instances()
            .iter()
            .map(|i| {
                let k = b.instances.iter().position(|n| *n == i.id).unwrap();
                b.state_names[k][b.configs[c][k] as usize].clone()
            })
            .collect();
        if states[ix] != rule.pre {
            continue;
        }
        states[ix] = rule.post.clone();
        let start = (Endpoint::port(inst, rule.exit.as_str()), states);
        let mut seen = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(cfg) = stack.pop() {
            if e.candidate.boundary.contains(&cfg.0) {
                return false;
            }
            if seen.insert(cfg.clone()) {
                stack.extend(successors(s, &cfg));
            }
        }
    }
    true
}

fn with_rule_deleted(e: &CorpusEntry, inst: &str, index: usize) -> CorpusEntry {
    let s = &e.candidate.system;
    let alias = s.instance(inst).unwrap().type_name.clone();
    let g = s.gadget_of(inst).unwrap().without_rule(index);
    let mut out = e.clone();
    out.candidate.system = s.with_gadget(&alias, g);
    out
}

#[test]
fn deleting_any_rule_breaks_its_model() {
    let mut traps = 0;
    for e in corpus_entries() {
        for inst in e.candidate.system.instances() {
            let g = e.candidate.system.gadget_of(&inst.id).unwrap();
            for (i, rule) in g.rules().iter().enumerate() {
                if is_trap(&e, &inst.id, rule) {
                    traps += 1;
                    continue;
                }
                let m = with_rule_deleted(&e, &inst.id, i);
                let before = boundary_behavior(&e.candidate, DEFAULT_MAX_REST_CONFIGS).unwrap();
                let after = boundary_behavior(&m.candidate, DEFAULT_MAX_REST_CONFIGS);
                let changed = after.as_ref().map_or(true, |a| {
                    a.quadruples() != before.quadruples() || a.configs != before.configs
                });
                let fails = verify_entry(&m, m.pruning).map_or(true, |r| !r.passed());
                assert!(
                    fails || changed,
                    "{}: deleting `{rule}` of {} is invisible",
                    e.name,
                    inst.id
                );
            }
        }
    }
    assert!(traps >= 1);
}

#[test]
fn one_deleted_smw_rule_fails_exactly_that_entry() {
    let entries: Vec<CorpusEntry> = corpus_entries()
        .into_iter()
        .map(|e| {
            if e.name == "smw_door" {
                with_rule_deleted(&e, "goomba", 0)
            } else {
                e
            }
        })
        .collect();
    let failed: Vec<String> = entries
        .iter()
        .filter(|e| !verify_entry(e, e.pruning).unwrap().passed())
        .map(|e| e.name.clone())
        .collect();
    assert_eq!(failed, ["smw_door"]);
}

fn candidate_words(e: &CorpusEntry, max_len: usize) -> BTreeSet<Vec<(usize, usize)>> {
    let b = pruned(e);
    let mut words = BTreeSet::new();
    let mut frontier: BTreeMap<Vec<(usize, usize)>, BTreeSet<usize>> =
        BTreeMap::from([(Vec::new(), BTreeSet::from([0]))]);
    for _ in 0..max_len {
        let mut next: BTreeMap<Vec<(usize, usize)>, BTreeSet<usize>> = BTreeMap::new();
        for (w, configs) in &frontier {
            for &c in configs {
                for (ei, set) in b.outcomes[c].iter().enumerate() {
                    for &(x, p) in set {
                        let mut w2 = w.clone();
                        w2.push((ei, x));
                        words.insert(w2.clone());
                        if let Some(p) = p {
                            next.entry(w2).or_default().insert(p);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    words
}

#[test]
fn bounded_words_agree_up_to_length_six() {
    for e in corpus_entries() {
        let b = pruned(&e);
        let idx = |loc: &str| b.boundary.iter().position(|p| *p == e.ports[loc]).unwrap();
        let once: BTreeSet<usize> = e
            .candidate
            .once
            .iter()
            .map(|p| b.boundary.iter().position(|q| q == p).unwrap())
            .collect();
        let target: BTreeSet<Vec<(usize, usize)>> = gadget_words(&e.target, &e.target_initial, 6)
            .into_iter()
            .map(|w| w.iter().map(|(a, x)| (idx(a), idx(x))).collect::<Vec<_>>())
            .filter(|w: &Vec<(usize, usize)>| {
                w[..w.len() - 1].iter().all(|(a, _)| !once.contains(a))
            })
            .collect();
        assert_eq!(candidate_words(&e, 6), target, "{}", e.name);
    }
}

fn rename_locations(g: &Gadget, f: impl Fn(&str) -> String) -> Gadget {
    let locs = g
        .locations()
        .iter()
        .map(|l| Location {
            id: f(&l.id),
            exposure: l.exposure,
        })
        .collect();
    let mut rules: Vec<TraversalRule> = g
        .rules()
        .iter()
        .map(|r| TraversalRule::new(f(&r.entry), f(&r.exit), r.pre.clone(), r.post.clone()))
        .collect();
    rules.reverse();
    Gadget::new(g.name(), locs, g.states().to_vec(), rules)
}

#[test]
fn verdict_survives_location_renaming_and_rule_reordering() {
    for e in corpus_entries()
        .into_iter()
        .filter(|e| e.candidate.system.instances().len() == 1)
    {
        let inst = e.candidate.system.instances()[0].clone();
        let f = |l: &str| format!("z_{l}");
        let g = rename_locations(e.candidate.system.gadget_of(&inst.id).unwrap(), f);
        let mut m = e.clone();
        m.candidate.system = e.candidate.system.with_gadget(&inst.type_name, g);
        let rename = |p: &Endpoint| match p {
            Endpoint::Port { instance, location } => Endpoint::port(instance.as_str(), f(location)),
            other => other.clone(),
        };
        m.candidate.boundary = e.candidate.boundary.iter().map(rename).collect();
        m.candidate.once = e.candidate.once.iter().map(rename).collect();
        m.ports = e
            .ports
            .iter()
            .map(|(k, v)| (k.clone(), rename(v)))
            .collect();
        let a = verify_entry(&e, e.pruning).unwrap();
        let b = verify_entry(&m, m.pruning).unwrap();
        assert_eq!(a.passed(), b.passed(), "{}", e.name);
        assert_eq!(a.report.configs, b.report.configs, "{}", e.name);
    }
}

#[test]
fn unknown_model_is_an_error() {
    assert!(verify_model("no_such_model").is_err());
}
