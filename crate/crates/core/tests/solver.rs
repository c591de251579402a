use doorkit_core::solver::{
    enumerate_configs, gen_counter_system, reachable_configs, solve, verify_witness, ConfigCount,
    SolveResult, Verdict, Witness, DEFAULT_MAX_CONFIGS,
};
use doorkit_core::system::{check_planarity, Connection};
use doorkit_core::text::parse_system;
use doorkit_core::{Endpoint, System};
use doorkit_testkit::{counter_length, dfs_oracle, random_system, reachable_set};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn door(init: &str, extra: &str) -> System {
    parse_system(&format!(
        "use door.open_close as oc\ninstance d1 : oc init {init}\nconnect start d1.T_in\nconnect d1.T_out goal\n{extra}"
    ))
    .unwrap()
}

#[test]
fn agrees_with_dfs_oracle_on_random_systems() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut reachable = 0;
    for case in 0..300 {
        let s = random_system(&mut rng, 4, 3);
        let r = solve(&s, DEFAULT_MAX_CONFIGS).unwrap();
        let oracle = dfs_oracle(&s);
        assert_eq!(r.witness().map(Witness::len), oracle, "case {case}");
        if let Some(w) = r.witness() {
            reachable += 1;
            assert_eq!(verify_witness(&s, w), Verdict::Accept, "case {case}");
        }
        match enumerate_configs(&s, DEFAULT_MAX_CONFIGS).unwrap() {
            ConfigCount::Complete(n) => assert_eq!(n, reachable_set(&s).len(), "case {case}"),
            other => panic!("{other:?}"),
        }
    }
    assert!(reachable > 50 && reachable < 290, "{reachable}");
}

#[test]
fn closed_door_with_open_path_takes_six_moves() {
    let s = door("Closed", "connect d1.T_in d1.O\n");
    let r = solve(&s, DEFAULT_MAX_CONFIGS).unwrap();
    let w = r.witness().unwrap();
    assert_eq!(Some(w.len()), dfs_oracle(&s));
    assert_eq!(w.len(), 6);
    assert!(w.to_text().contains("traverse d1 O->O Closed->Open"));
}

#[test]
fn adding_connections_never_loses_reachability() {
    let mut rng = StdRng::seed_from_u64(41);
    let mut checked = 0;
    while checked < 100 {
        let s = random_system(&mut rng, 4, 3);
        if !solve(&s, DEFAULT_MAX_CONFIGS).unwrap().is_reachable() {
            continue;
        }
        let ports: Vec<Endpoint> = s
            .instances()
            .iter()
            .flat_map(|i| {
                let g = s.gadget_of(&i.id).unwrap();
                g.exposed_locations()
                    .map(|l| Endpoint::port(i.id.as_str(), l.id.as_str()))
                    .collect::<Vec<_>>()
            })
            .collect();
        let a = ports[rng.gen_range(0..ports.len())].clone();
        let b = ports[rng.gen_range(0..ports.len())].clone();
        let bigger = s.with_connection(Connection::new(a, b));
        let r = solve(&bigger, DEFAULT_MAX_CONFIGS).unwrap();
        assert!(r.is_reachable());
        checked += 1;
    }
}

#[test]
fn budget_is_reported_not_guessed() {
    let s = gen_counter_system(4);
    assert!(matches!(
        solve(&s, 10).unwrap(),
        SolveResult::BudgetExceeded { .. }
    ));
    assert!(matches!(
        enumerate_configs(&s, 10).unwrap(),
        ConfigCount::BudgetExceeded(_)
    ));
}

#[test]
fn repeated_solves_are_identical() {
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..30 {
        let s = random_system(&mut rng, 4, 3);
        assert_eq!(
            solve(&s, DEFAULT_MAX_CONFIGS).unwrap(),
            solve(&s, DEFAULT_MAX_CONFIGS).unwrap()
        );
    }
}

#[test]
fn counter_witnesses_follow_the_doubling_recurrence() {
    let lengths: Vec<usize> = (1..=5)
        .map(|n| {
            let s = gen_counter_system(n);
            assert!(check_planarity(&s).unwrap().is_planar(), "n={n}");
            let r = solve(&s, DEFAULT_MAX_CONFIGS).unwrap();
            let w = r.witness().unwrap();
            assert_eq!(verify_witness(&s, w), Verdict::Accept);
            w.traverse_count()
        })
        .collect();
    let c = lengths[1] as i64 - 2 * lengths[0] as i64;
    for n in 2..5 {
        assert_eq!(
            lengths[n] as i64,
            2 * lengths[n - 1] as i64 + c,
            "n={}",
            n + 1
        );
    }
    for (i, &l) in lengths.iter().enumerate() {
        assert_eq!(l, counter_length(i + 1));
    }
}

#[test]
fn counter_move_counts_match_oracle_for_small_n() {
    for n in 1..=3 {
        let s = gen_counter_system(n);
        let r = solve(&s, DEFAULT_MAX_CONFIGS).unwrap();
        assert_eq!(r.witness().map(Witness::len), dfs_oracle(&s));
    }
}

#[test]
fn counter_system_is_deterministic() {
    for n in 1..=5 {
        assert_eq!(gen_counter_system(n), gen_counter_system(n));
    }
}

/// `k` open-close doors, each one's open, close and traverse paths hanging
/// off a shared hallway at the start.
fn togglable_doors(k: usize) -> System {
    let mut text = String::from("use door.open_close as oc\n");
    for i in 1..=k {
        text += &format!("instance d{i} : oc init Closed\n");
    }
    text += "connect start d1.O\nconnect d1.T_out goal\n";
    for i in 1..=k {
        text += &format!("connect d{i}.O d{i}.C_in\nconnect d{i}.C_out d{i}.O\n");
        if i > 1 {
            text += &format!(
                "connect d{}.O d{i}.O\nconnect d{i}.T_in d{i}.O\nconnect d{i}.T_out d{i}.O\n",
                i - 1
            );
        }
    }
    text += "connect d1.T_in d1.O\n";
    parse_system(&text).unwrap()
}

#[test]
fn independent_doors_grow_exponentially() {
    let mut counts = Vec::new();
    for k in 1..=6 {
        let s = togglable_doors(k);
        let ConfigCount::Complete(n) = enumerate_configs(&s, DEFAULT_MAX_CONFIGS).unwrap() else {
            panic!("budget");
        };
        if k <= 4 {
            assert_eq!(n, reachable_set(&s).len(), "k={k}");
        }
        assert!(n >= 1 << k, "k={k} n={n}");
        counts.push(n);
    }
    assert!(counts.windows(2).all(|w| w[1] > 2 * w[0] - 1), "{counts:?}");
}

#[test]
fn unreachable_island_is_not_counted() {
    let s = door(
        "Open",
        "use door.self_closing as sc\ninstance z9 : sc init Open\nconnect z9.T_out z9.O\n",
    );
    let configs = reachable_configs(&s, DEFAULT_MAX_CONFIGS).unwrap();
    assert!(configs.iter().all(|c| c.agent.instance() != Some("z9")));
    assert_eq!(configs.len(), reachable_set(&s).len());
}
