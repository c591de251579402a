use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use doorkit_core::solver::{solve, verify_witness, Verdict, Witness};
use doorkit_core::text::parse_system;

fn manifest() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn fixture(name: &str) -> PathBuf {
    manifest().join("fixtures").join(name)
}

fn doorkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_doorkit"))
        .current_dir(manifest())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn status(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// Golden name plus machine-mode arguments; outputs go to throwaway paths.
const GOLDEN: &[(&str, &[&str])] = &[
    (
        "solve_one_door_open",
        &["solve", "fixtures/one_door_open.sys"],
    ),
    (
        "solve_one_door_closed",
        &["solve", "fixtures/one_door_closed.sys"],
    ),
    (
        "solve_open_then_traverse",
        &["solve", "fixtures/open_then_traverse.sys"],
    ),
    ("planar_one_door", &["planar", "fixtures/one_door_open.sys"]),
    ("planar_k5", &["planar", "fixtures/k5.sys"]),
    ("corpus_verify", &["corpus", "verify"]),
    (
        "sat_check_contradiction",
        &["sat", "check", "fixtures/contradiction.cnf"],
    ),
    (
        "sat_check_two_vars",
        &["sat", "check", "fixtures/two_vars.cnf"],
    ),
    (
        "sat_compile_single",
        &[
            "sat",
            "compile",
            "fixtures/single.cnf",
            "-o",
            "{out}",
            "--set",
            "smr",
        ],
    ),
    (
        "emit_one_door",
        &[
            "emit",
            "fixtures/one_door_open.sys",
            "-o",
            "{out}",
            "--tunnel-len",
            "16",
        ],
    ),
    ("gen_counter_3", &["gen", "counter", "3", "-o", "{out}"]),
];

fn machine_run(args: &[&str], out: &Path, jobs: &str) -> Output {
    let out = out.to_str().unwrap();
    let mut full = vec!["--machine", "--jobs", jobs];
    full.extend(args.iter().map(|a| if *a == "{out}" { out } else { a }));
    doorkit(&full)
}

#[test]
fn machine_output_matches_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args) in GOLDEN {
        let o = machine_run(args, &dir.path().join("out"), "0");
        assert_eq!(status(&o), 0, "{name}");
        let golden =
            std::fs::read_to_string(manifest().join("tests/golden").join(format!("{name}.json")))
                .unwrap();
        assert_eq!(stdout(&o), golden, "{name}");
    }
}

#[test]
fn machine_output_is_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args) in GOLDEN {
        let runs: Vec<(String, Vec<u8>)> = ["1", "4", "1"]
            .iter()
            .enumerate()
            .map(|(k, jobs)| {
                let out = dir.path().join(format!("out{k}"));
                let o = machine_run(args, &out, jobs);
                (stdout(&o), std::fs::read(&out).unwrap_or_default())
            })
            .collect();
        assert!(runs.windows(2).all(|w| w[0] == w[1]), "{name}");
    }
}

#[test]
fn solve_open_door_prints_three_move_witness() {
    let o = doorkit(&["solve", "fixtures/one_door_open.sys"]);
    assert_eq!(status(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("Reachable: 3 moves"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn witness_file_replays() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.txt");
    let o = doorkit(&[
        "solve",
        "fixtures/open_then_traverse.sys",
        "--witness",
        w.to_str().unwrap(),
    ]);
    assert_eq!(status(&o), 0);
    let witness = Witness::parse(&std::fs::read_to_string(&w).unwrap()).unwrap();
    let s =
        parse_system(&std::fs::read_to_string(fixture("open_then_traverse.sys")).unwrap()).unwrap();
    assert_eq!(verify_witness(&s, &witness), Verdict::Accept);
    assert_eq!(witness.len(), 5);
}

#[test]
fn strict_mode_exit_codes() {
    let closed = ["solve", "fixtures/one_door_closed.sys"];
    assert_eq!(status(&doorkit(&closed)), 0);
    assert_eq!(status(&doorkit(&[&closed[..], &["--strict"]].concat())), 3);
    assert_eq!(
        status(&doorkit(&["--strict", "planar", "fixtures/k5.sys"])),
        3
    );
    assert_eq!(
        status(&doorkit(&[
            "--strict",
            "planar",
            "fixtures/one_door_open.sys"
        ])),
        0
    );
    let budget = [
        "solve",
        "fixtures/one_door_closed.sys",
        "--max-configs",
        "1",
    ];
    assert_eq!(status(&doorkit(&budget)), 0);
    assert_eq!(status(&doorkit(&[&budget[..], &["--strict"]].concat())), 4);
    assert_eq!(status(&doorkit(&["--strict", "corpus", "verify"])), 0);
}

#[test]
fn strict_contradiction_agrees_in_every_set() {
    let o = doorkit(&["sat", "check", "fixtures/contradiction.cnf", "--strict"]);
    assert_eq!(status(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.matches("agree(unsat/Unreachable)").count(), 3);
    let one = doorkit(&["sat", "check", "fixtures/contradiction.cnf", "--set", "sml"]);
    assert_eq!(stdout(&one), "sml: agree(unsat/Unreachable)\n");
}

#[test]
fn usage_and_file_errors_exit_two() {
    assert_eq!(status(&doorkit(&["--bogus", "corpus", "verify"])), 2);
    assert_eq!(
        status(&doorkit(&[
            "solve",
            "fixtures/one_door_open.sys",
            "--max-cfg",
            "3"
        ])),
        2
    );
    assert_eq!(status(&doorkit(&["solve", "fixtures/missing.sys"])), 2);
    assert_eq!(
        status(&doorkit(&["sat", "check", "fixtures/bad_header.cnf"])),
        2
    );
    assert_eq!(
        status(&doorkit(&[
            "sat",
            "check",
            "fixtures/single.cnf",
            "--set",
            "nes"
        ])),
        2
    );
    assert_eq!(
        status(&doorkit(&["corpus", "verify", "--model", "no_such_model"])),
        2
    );
    let o = doorkit(&["solve", "fixtures/broken.sys"]);
    assert_eq!(status(&o), 2);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("broken.sys:5:"), "{err}");
    assert!(err.contains("d1.nowhere"), "{err}");
}

#[test]
fn compiled_system_file_solves_like_the_oracle_says() {
    let dir = tempfile::tempdir().unwrap();
    for (cnf, sat) in [("two_vars.cnf", true), ("contradiction.cnf", false)] {
        let out = dir.path().join("c.sys");
        let o = doorkit(&[
            "sat",
            "compile",
            fixture(cnf).to_str().unwrap(),
            "-o",
            out.to_str().unwrap(),
        ]);
        assert_eq!(status(&o), 0);
        let s = parse_system(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(solve(&s, 1 << 20).unwrap().is_reachable(), sat, "{cnf}");
    }
}

#[test]
fn emit_writes_level_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let lvl = dir.path().join("door.lvl");
    let o = doorkit(&[
        "emit",
        "fixtures/one_door_open.sys",
        "-o",
        lvl.to_str().unwrap(),
    ]);
    assert_eq!(status(&o), 0);
    let text = std::fs::read_to_string(&lvl).unwrap();
    assert!(text.starts_with("; doorkit level "));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with(';')).collect();
    assert!(rows.iter().all(|r| r.len() == rows[0].len()));
    let count = |t: char| {
        rows.iter()
            .flat_map(|r| r.chars())
            .filter(|&c| c == t)
            .count()
    };
    assert_eq!((count('M'), count('F')), (1, 1));

    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("door.lvl.json")).unwrap())
            .unwrap();
    let placements = side["placements"].as_array().unwrap();
    let names: Vec<&str> = placements
        .iter()
        .map(|p| p["instance"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["start", "d1", "goal"]);
    for r in side["routes"].as_array().unwrap() {
        assert!(r["length"].as_u64().unwrap() >= 64);
        assert_eq!(
            r["tiles"].as_array().unwrap().len() as u64,
            r["length"].as_u64().unwrap()
        );
    }
}

#[test]
fn emit_refuses_non_planar_and_zero_tunnels() {
    let dir = tempfile::tempdir().unwrap();
    let lvl = dir.path().join("k5.lvl");
    let o = doorkit(&[
        "--strict",
        "emit",
        "fixtures/k5.sys",
        "-o",
        lvl.to_str().unwrap(),
    ]);
    assert_eq!(status(&o), 3);
    assert!(stdout(&o).starts_with("non-planar"));
    assert!(!lvl.exists());
    let o = doorkit(&[
        "emit",
        "fixtures/one_door_open.sys",
        "-o",
        lvl.to_str().unwrap(),
        "--tunnel-len",
        "0",
    ]);
    assert_eq!(status(&o), 2);
}

#[test]
fn generated_counter_doubles() {
    let dir = tempfile::tempdir().unwrap();
    let mut traversals = Vec::new();
    for n in 1..=3 {
        let out = dir.path().join(format!("c{n}.sys"));
        assert_eq!(
            status(&doorkit(&[
                "gen",
                "counter",
                &n.to_string(),
                "-o",
                out.to_str().unwrap()
            ])),
            0
        );
        let o = doorkit(&["--machine", "solve", out.to_str().unwrap()]);
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        traversals.push(v["traversals"].as_u64().unwrap());
    }
    assert_eq!(traversals, [2, 6, 14]);
    assert_eq!(
        status(&doorkit(&["gen", "counter", "0", "-o", "/dev/null"])),
        2
    );
}

#[test]
fn help_lists_every_documented_flag() {
    let top = stdout(&doorkit(&["--help"]));
    for flag in ["--strict", "--machine", "--jobs"] {
        assert!(top.contains(flag), "{flag}");
    }
    for (cmd, flags) in [
        (
            &["solve", "--help"][..],
            &["--max-configs", "--witness"][..],
        ),
        (&["corpus", "verify", "--help"], &["--model"]),
        (&["sat", "compile", "--help"], &["--output", "--set"]),
        (&["sat", "check", "--help"], &["--set", "--max-configs"]),
        (&["emit", "--help"], &["--output", "--tunnel-len"]),
        (&["gen", "counter", "--help"], &["--output"]),
    ] {
        let text = stdout(&doorkit(cmd));
        for flag in flags {
            assert!(text.contains(flag), "{cmd:?} {flag}");
        }
    }
}
