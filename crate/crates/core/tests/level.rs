use std::collections::VecDeque;

use doorkit_core::level::{
    check_conservative, emit_tilemap, passable, LevelError, Tilemap, DEFAULT_TUNNEL_LEN,
};
use doorkit_core::sat::{compile_cnf, CnfFormula, GadgetSet};
use doorkit_core::solver::gen_counter_system;
use doorkit_core::text::parse_system;
use doorkit_core::System;
use doorkit_testkit::K5;

fn one_door() -> System {
    parse_system("use door.open_close as oc\ninstance d1 : oc init Open\nconnect start d1.T_in\nconnect d1.T_out goal\n")
        .unwrap()
}

fn fixtures() -> Vec<(String, System)> {
    let mut out = vec![("one_door".to_string(), one_door())];
    for n in 1..=3 {
        out.push((format!("counter{n}"), gen_counter_system(n)));
    }
    let f = CnfFormula {
        vars: 1,
        clauses: vec![vec![1]],
    };
    out.push((
        "sat_x1".into(),
        compile_cnf(&f, GadgetSet::Abstract).unwrap(),
    ));
    out
}

fn find(map: &Tilemap, tile: u8) -> (usize, usize) {
    let i = map.tiles.iter().position(|&t| t == tile).unwrap();
    (i % map.width, i / map.width)
}

/// Shortest path over passable tiles, footprints included.
fn shortest_path(
    map: &Tilemap,
    from: (usize, usize),
    to: (usize, usize),
) -> Option<Vec<(usize, usize)>> {
    let (w, h) = (map.width, map.height);
    let mut prev = vec![usize::MAX; w * h];
    let start = from.1 * w + from.0;
    prev[start] = start;
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        if i == to.1 * w + to.0 {
            let mut path = vec![(i % w, i / w)];
            let mut j = i;
            while j != start {
                j = prev[j];
                path.push((j % w, j / w));
            }
            path.reverse();
            return Some(path);
        }
        let (x, y) = (i % w, i / w);
        let next = [
            (y > 0).then(|| i - w),
            (x + 1 < w).then(|| i + 1),
            (y + 1 < h).then(|| i + w),
            (x > 0).then(|| i - 1),
        ];
        for j in next.into_iter().flatten() {
            if prev[j] == usize::MAX && passable(map.tiles[j]) {
                prev[j] = i;
                queue.push_back(j);
            }
        }
    }
    None
}

#[test]
fn one_door_path_runs_through_the_traversal_corridor() {
    let s = one_door();
    let map = emit_tilemap(&s, 8).unwrap();
    let path = shortest_path(&map, find(&map, b'M'), find(&map, b'F')).unwrap();
    let d1 = map.placements.iter().find(|p| p.name == "d1").unwrap();
    let inside: Vec<_> = path
        .iter()
        .filter(|&&(x, y)| x > d1.x && x < d1.x + d1.w - 1 && y > d1.y && y < d1.y + d1.h - 1)
        .collect();
    assert!(!inside.is_empty());
    assert!(inside.iter().all(|&&(_, y)| y == d1.y + 1), "{inside:?}");
    assert!(map.routes.iter().all(|r| r.len() >= 8));
}

#[test]
fn emitted_fixtures_are_conservative_with_long_tunnels() {
    for (name, s) in fixtures() {
        let map = emit_tilemap(&s, DEFAULT_TUNNEL_LEN).unwrap_or_else(|e| panic!("{name}: {e}"));
        check_conservative(&map, &s).unwrap_or_else(|e| panic!("{name}: {e}"));
        let routed = s.connections().iter().filter(|c| c.a != c.b).count();
        assert_eq!(map.routes.len(), routed, "{name}");
        for r in &map.routes {
            assert!(
                r.len() >= DEFAULT_TUNNEL_LEN,
                "{name}: {} {} is {}",
                r.a,
                r.b,
                r.len()
            );
        }
        assert_eq!(map.tiles.iter().filter(|&&t| t == b'M').count(), 1);
        assert_eq!(map.tiles.iter().filter(|&&t| t == b'F').count(), 1);
        for p in &map.placements {
            assert!(p.x + p.w <= map.width && p.y + p.h <= map.height);
        }
        assert_eq!(map.placements.len(), s.instances().len() + 2);
    }
}

#[test]
fn routes_never_share_or_touch_tiles_of_other_connections() {
    for (name, s) in fixtures() {
        let map = emit_tilemap(&s, 16).unwrap();
        for (i, a) in map.routes.iter().enumerate() {
            for b in &map.routes[i + 1..] {
                let joined = [&a.a, &a.b].iter().any(|e| **e == b.a || **e == b.b);
                if joined {
                    continue;
                }
                for &(x, y) in &a.tiles {
                    for &(u, v) in &b.tiles {
                        assert!(
                            x.abs_diff(u) + y.abs_diff(v) > 1,
                            "{name}: {} {} vs {} {}",
                            a.a,
                            a.b,
                            b.a,
                            b.b
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn emission_is_deterministic() {
    for (_, s) in fixtures() {
        assert_eq!(
            emit_tilemap(&s, 20).unwrap().to_lvl(),
            emit_tilemap(&s, 20).unwrap().to_lvl()
        );
    }
}

#[test]
fn lvl_text_has_legend_and_rectangular_rows() {
    let map = emit_tilemap(&one_door(), 8).unwrap();
    let text = map.to_lvl();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with(';')).collect();
    assert_eq!(rows.len(), map.height);
    assert!(rows.iter().all(|r| r.len() == map.width));
    assert!(text.lines().any(|l| l == "; M start"));
}

#[test]
fn non_planar_systems_are_refused() {
    let s = parse_system(K5).unwrap();
    assert_eq!(emit_tilemap(&s, 8).unwrap_err(), LevelError::NonPlanar);
}
