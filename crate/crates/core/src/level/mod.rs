//! Schematic ASCII levels: footprints on a coarse grid joined by routed
//! corridors.
//!
//! Tiles: `#` solid, `.` empty, `^` spike, `=` semisolid, `B` brick,
//! `?` block, `e` enemy, `M` start, `F` goal.

mod footprint;

pub use footprint::{footprint_for, Footprint, Side};

use alloc::collections::{BTreeMap, BinaryHeap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt::Write;

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use crate::system::{check_planarity, Endpoint, System};

pub const DEFAULT_TUNNEL_LEN: usize = 64;

pub const LEGEND: &[(char, &str)] = &[
    ('#', "solid"),
    ('.', "empty"),
    ('^', "spike"),
    ('=', "semisolid"),
    ('B', "brick"),
    ('?', "block"),
    ('e', "enemy"),
    ('M', "start"),
    ('F', "goal"),
];

/// Tiles the player can stand in.
pub fn passable(tile: u8) -> bool {
    matches!(tile, b'.' | b'e' | b'M' | b'F')
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LevelError {
    #[error("non-planar system")]
    NonPlanar,
    #[error("invalid system: {0}")]
    Invalid(String),
    #[error("tunnel length must be at least 1")]
    ZeroTunnel,
    #[error("cannot route connection `{0}`")]
    Unroutable(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    /// Instance id, or `start` / `goal`.
    pub name: String,
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    pub a: Endpoint,
    pub b: Endpoint,
    /// Corridor tiles from the tile outside `a` to the tile outside `b`.
    pub tiles: Vec<(usize, usize)>,
}

impl Route {
    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tilemap {
    pub width: usize,
    pub height: usize,
    pub tiles: Vec<u8>,
    pub tunnel_len: usize,
    pub placements: Vec<Placement>,
    /// Port tile per endpoint, sealed ports excluded.
    pub ports: BTreeMap<Endpoint, (usize, usize)>,
    pub routes: Vec<Route>,
}

impl Tilemap {
    pub fn at(&self, x: usize, y: usize) -> u8 {
        self.tiles[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.tiles[y * self.width..(y + 1) * self.width]
    }

    /// Whether `(x, y)` lies strictly inside a gadget footprint (the
    /// footprint's boundary ports and the start/goal markers excluded).
    pub fn in_footprint(&self, x: usize, y: usize) -> bool {
        if self.ports.values().any(|&p| p == (x, y)) {
            return false;
        }
        self.placements.iter().any(|p| {
            p.name != "start"
                && p.name != "goal"
                && x >= p.x
                && x < p.x + p.w
                && y >= p.y
                && y < p.y + p.h
        })
    }

    /// `.lvl` text: `;` header lines, then the rows.
    pub fn to_lvl(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "; doorkit level {}x{} tunnel_len {}",
            self.width, self.height, self.tunnel_len
        );
        for (c, meaning) in LEGEND {
            let _ = writeln!(out, "; {c} {meaning}");
        }
        for y in 0..self.height {
            out.push_str(core::str::from_utf8(self.row(y)).unwrap_or(""));
            out.push('\n');
        }
        out
    }
}

/// Renders `s` with every corridor at least `tunnel_len` tiles long,
/// retrying with wider routing channels before giving up.
pub fn emit_tilemap(s: &System, tunnel_len: usize) -> Result<Tilemap, LevelError> {
    let mut last = None;
    for factor in 1..=4 {
        match emit_tilemap_with(s, tunnel_len, factor) {
            Err(e @ LevelError::Unroutable(_)) => last = Some(e),
            other => return other,
        }
    }
    Err(last.unwrap())
}

struct Item {
    name: String,
    fp: Footprint,
}

/// One emission attempt; `grid_factor` scales the routing channel width.
pub fn emit_tilemap_with(
    s: &System,
    tunnel_len: usize,
    grid_factor: usize,
) -> Result<Tilemap, LevelError> {
    if tunnel_len == 0 {
        return Err(LevelError::ZeroTunnel);
    }
    match check_planarity(s) {
        Err(e) => return Err(LevelError::Invalid(format!("{e}"))),
        Ok(p) if !p.is_planar() => return Err(LevelError::NonPlanar),
        Ok(_) => {}
    }

    let mut items = vec![Item {
        name: "start".into(),
        fp: Footprint::terminal(b'M'),
    }];
    for inst in s.instances() {
        let t = s.gadget_type(&inst.type_name).expect("validated type");
        items.push(Item {
            name: inst.id.clone(),
            fp: footprint_for(t),
        });
    }
    items.push(Item {
        name: "goal".into(),
        fp: Footprint::terminal(b'F'),
    });

    let stub = tunnel_len.div_ceil(2);
    let max_ports = items.iter().map(|i| i.fp.ports.len()).max().unwrap_or(1);
    let margin = 2 + 2 * grid_factor * max_ports.max(2);
    let max_w = items.iter().map(|i| i.fp.w).max().unwrap();
    let max_h = items.iter().map(|i| i.fp.h).max().unwrap();
    let cell_w = max_w + 2 * margin;
    let cell_h = max_h + 2 * (stub + margin);
    let cols = (1..).find(|c| c * c >= items.len()).unwrap();
    let rows = items.len().div_ceil(cols);
    let (width, height) = (cols * cell_w, rows * cell_h);

    let mut tiles = vec![b'#'; width * height];
    let mut blocked = vec![false; width * height];
    let mut placements = Vec::new();
    let mut port_tiles: BTreeMap<Endpoint, ((usize, usize), Side)> = BTreeMap::new();

    for (k, item) in items.iter().enumerate() {
        let (cx, cy) = (k % cols, k / cols);
        let x0 = cx * cell_w + (cell_w - item.fp.w) / 2;
        let y0 = cy * cell_h + (cell_h - item.fp.h) / 2;
        for y in 0..item.fp.h {
            for x in 0..item.fp.w {
                let i = (y0 + y) * width + x0 + x;
                tiles[i] = item.fp.tiles[y * item.fp.w + x];
                blocked[i] = true;
            }
        }
        for (loc, px, py, side) in &item.fp.ports {
            let e = match item.name.as_str() {
                "start" => Endpoint::Start,
                "goal" => Endpoint::Goal,
                id => Endpoint::port(id, loc.as_str()),
            };
            port_tiles.insert(e, ((x0 + px, y0 + py), *side));
        }
        placements.push(Placement {
            name: item.name.clone(),
            x: x0,
            y: y0,
            w: item.fp.w,
            h: item.fp.h,
        });
    }

    // Nets: connected components of endpoints under connections.
    let mut net_of: BTreeMap<Endpoint, usize> = BTreeMap::new();
    let mut parent: Vec<usize> = Vec::new();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for c in s.connections() {
        for e in [&c.a, &c.b] {
            if !net_of.contains_key(e) {
                net_of.insert(e.clone(), parent.len());
                parent.push(parent.len());
            }
        }
        let (a, b) = (
            find(&mut parent, net_of[&c.a]),
            find(&mut parent, net_of[&c.b]),
        );
        parent[a] = b;
    }
    let net: BTreeMap<Endpoint, usize> = net_of
        .iter()
        .map(|(e, &i)| (e.clone(), find(&mut parent, i) + 1))
        .collect();

    // Owner 0 is free; seal unconnected ports and carve stubs.
    let mut owner = vec![0usize; width * height];
    let mut ports = BTreeMap::new();
    let mut stub_end = BTreeMap::new();
    for (e, &((px, py), side)) in &port_tiles {
        let i = py * width + px;
        match net.get(e) {
            None => {
                if tiles[i] == b'.' {
                    tiles[i] = b'#';
                }
            }
            Some(&n) => {
                owner[i] = n;
                ports.insert(e.clone(), (px, py));
                let mut y = py;
                for _ in 0..stub {
                    y = match side {
                        Side::Up => y - 1,
                        Side::Down => y + 1,
                    };
                    let j = y * width + px;
                    tiles[j] = b'.';
                    owner[j] = n;
                }
                stub_end.insert(e.clone(), (px, y));
            }
        }
    }

    // Rip-up and retry: a connection that cannot be routed without cutting
    // off a pending one moves to the front of the order, and later attempts
    // perturb tile costs.
    let mut order: Vec<usize> = (0..s.connections().len())
        .filter(|&i| s.connections()[i].a != s.connections()[i].b)
        .collect();
    let attempts = (2 * order.len() + 8).min(MAX_ATTEMPTS);
    let mut rng = SmallRng::seed_from_u64(0x1e7e1);
    let mut done = None;
    let mut work = 0usize;
    'attempts: for attempt in 0..attempts {
        let mut t = tiles.clone();
        let mut o = owner.clone();
        let mut paths = BTreeMap::new();
        let mut failed = None;
        for (k, &ci) in order.iter().enumerate() {
            let c = &s.connections()[ci];
            let n = net[&c.a];
            let pending: Vec<_> = order[k + 1..]
                .iter()
                .map(|&cj| {
                    let d = &s.connections()[cj];
                    (net[&d.a], stub_end[&d.a], stub_end[&d.b])
                })
                .collect();
            let mut found = None;
            for variant in 0..VARIANTS {
                work += width * height;
                if work > WORK_BUDGET {
                    order.swap(0, k);
                    break 'attempts;
                }
                let cost: Vec<u8> = if attempt == 0 && variant == 0 {
                    vec![1; width * height]
                } else {
                    (0..width * height).map(|_| rng.gen_range(1..=8)).collect()
                };
                let grid = Grid {
                    width,
                    height,
                    blocked: &blocked,
                    cost: &cost,
                };
                let Some(path) = route(&grid, &o, n, stub_end[&c.a], stub_end[&c.b]) else {
                    break;
                };
                let mut o2 = o.clone();
                for &(x, y) in &path {
                    o2[y * width + x] = n;
                }
                if still_open(&grid, &o2, &pending) {
                    found = Some((path, o2));
                    break;
                }
            }
            match found {
                Some((path, o2)) => {
                    for &(x, y) in &path {
                        t[y * width + x] = b'.';
                    }
                    o = o2;
                    paths.insert(ci, path);
                }
                None => {
                    failed = Some(k);
                    break;
                }
            }
        }
        match failed {
            None => {
                done = Some((t, paths));
                break;
            }
            Some(k) => {
                let ci = order.remove(k);
                order.insert(0, ci);
            }
        }
    }
    let Some((tiles, paths)) = done else {
        return Err(LevelError::Unroutable(format!(
            "{}",
            s.connections()[order[0]]
        )));
    };

    let stub_tiles = |e: &Endpoint| -> Vec<(usize, usize)> {
        let ((px, py), side) = port_tiles[e];
        (1..=stub)
            .map(|d| match side {
                Side::Up => (px, py - d),
                Side::Down => (px, py + d),
            })
            .collect()
    };
    let mut routes = Vec::new();
    for (ci, path) in paths {
        let c = &s.connections()[ci];
        let mut all = stub_tiles(&c.a);
        all.extend(path.iter().skip(1).take(path.len().saturating_sub(2)));
        let mut tail = stub_tiles(&c.b);
        tail.reverse();
        all.extend(tail);
        routes.push(Route {
            a: c.a.clone(),
            b: c.b.clone(),
            tiles: all,
        });
    }

    Ok(Tilemap {
        width,
        height,
        tiles,
        tunnel_len,
        placements,
        ports,
        routes,
    })
}

const VARIANTS: usize = 6;
const MAX_ATTEMPTS: usize = 40;
/// Tiles scanned per emission attempt before giving up.
const WORK_BUDGET: usize = 10_000_000;

/// Net id and the two stub ends of a connection not yet routed.
type Pending = (usize, (usize, usize), (usize, usize));

struct Grid<'a> {
    width: usize,
    height: usize,
    blocked: &'a [bool],
    cost: &'a [u8],
}

impl Grid<'_> {
    fn neighbors(&self, x: usize, y: usize) -> [Option<(usize, usize)>; 4] {
        [
            (y > 0).then(|| (x, y - 1)),
            (x + 1 < self.width).then(|| (x + 1, y)),
            (y + 1 < self.height).then(|| (x, y + 1)),
            (x > 0).then(|| (x - 1, y)),
        ]
    }

    /// Not a footprint, not the map border and not yet taken.
    fn open(&self, owner: &[usize], x: usize, y: usize) -> bool {
        let i = y * self.width + x;
        owner[i] == 0
            && !self.blocked[i]
            && x > 0
            && y > 0
            && x + 1 < self.width
            && y + 1 < self.height
    }
}

/// Cheapest corridor for net `n` that never touches another net.
fn route(
    g: &Grid,
    owner: &[usize],
    n: usize,
    from: (usize, usize),
    to: (usize, usize),
) -> Option<Vec<(usize, usize)>> {
    let width = g.width;
    let idx = |x: usize, y: usize| y * width + x;
    let free = |x: usize, y: usize| {
        if owner[idx(x, y)] == n {
            return true;
        }
        g.open(owner, x, y)
            && g.neighbors(x, y)
                .iter()
                .flatten()
                .all(|&(a, b)| owner[idx(a, b)] == 0 || owner[idx(a, b)] == n)
    };

    let mut dist = vec![u32::MAX; width * g.height];
    let mut prev = vec![usize::MAX; width * g.height];
    dist[idx(from.0, from.1)] = 0;
    let mut heap = BinaryHeap::from([Reverse((0u32, idx(from.0, from.1)))]);
    while let Some(Reverse((d, i))) = heap.pop() {
        if d > dist[i] {
            continue;
        }
        let (x, y) = (i % width, i / width);
        if (x, y) == to {
            let mut path = vec![to];
            let mut i = i;
            while i != idx(from.0, from.1) {
                i = prev[i];
                path.push((i % width, i / width));
            }
            path.reverse();
            return Some(path);
        }
        for (a, b) in g.neighbors(x, y).into_iter().flatten() {
            let j = idx(a, b);
            let nd = d + u32::from(g.cost[j]);
            if nd < dist[j] && free(a, b) {
                dist[j] = nd;
                prev[j] = i;
                heap.push(Reverse((nd, j)));
            }
        }
    }
    None
}

/// Whether every pending pair of stub ends still borders a common region
/// of tiles clear of all corridors.
fn still_open(g: &Grid, owner: &[usize], pending: &[Pending]) -> bool {
    if pending.is_empty() {
        return true;
    }
    let width = g.width;
    let usable = |n: usize, x: usize, y: usize| {
        g.open(owner, x, y)
            && g.neighbors(x, y)
                .iter()
                .flatten()
                .all(|&(a, b)| owner[b * width + a] == 0 || owner[b * width + a] == n)
    };
    let clear = |x: usize, y: usize| usable(0, x, y);
    let mut comp = vec![usize::MAX; width * g.height];
    let mut next = 0;
    let mut label = |start: (usize, usize), comp: &mut Vec<usize>| {
        let i = start.1 * width + start.0;
        if comp[i] != usize::MAX {
            return comp[i];
        }
        comp[i] = next;
        let mut queue = VecDeque::from([start]);
        while let Some((x, y)) = queue.pop_front() {
            for (a, b) in g.neighbors(x, y).into_iter().flatten() {
                let j = b * width + a;
                if comp[j] == usize::MAX && clear(a, b) {
                    comp[j] = next;
                    queue.push_back((a, b));
                }
            }
        }
        next += 1;
        next - 1
    };
    let mut regions = |n: usize, p: (usize, usize), comp: &mut Vec<usize>| -> Vec<usize> {
        let mut out = Vec::new();
        for (qx, qy) in g.neighbors(p.0, p.1).into_iter().flatten() {
            if !usable(n, qx, qy) {
                continue;
            }
            if clear(qx, qy) {
                out.push(label((qx, qy), comp));
            }
            for (rx, ry) in g.neighbors(qx, qy).into_iter().flatten() {
                if clear(rx, ry) {
                    out.push(label((rx, ry), comp));
                }
            }
        }
        out
    };
    pending.iter().all(|&(n, a, b)| {
        let ra = regions(n, a, &mut comp);
        let rb = regions(n, b, &mut comp);
        a == b || ra.iter().any(|r| rb.contains(r))
    })
}

/// Checks that corridor connectivity outside the footprints joins exactly
/// the endpoints the system connects. Returns the first offending
/// endpoint set on failure.
pub fn check_conservative(map: &Tilemap, s: &System) -> Result<(), String> {
    let (w, h) = (map.width, map.height);
    let mut comp = vec![usize::MAX; w * h];
    let mut next = 0;
    for start in 0..w * h {
        let (sx, sy) = (start % w, start / w);
        if comp[start] != usize::MAX || !passable(map.tiles[start]) || map.in_footprint(sx, sy) {
            continue;
        }
        comp[start] = next;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let (x, y) = (i % w, i / w);
            let cand = [
                (y > 0).then(|| i - w),
                (x + 1 < w).then(|| i + 1),
                (y + 1 < h).then(|| i + w),
                (x > 0).then(|| i - 1),
            ];
            for j in cand.into_iter().flatten() {
                if comp[j] == usize::MAX
                    && passable(map.tiles[j])
                    && !map.in_footprint(j % w, j / w)
                {
                    comp[j] = next;
                    queue.push_back(j);
                }
            }
        }
        next += 1;
    }

    // Expected grouping: endpoints joined by connections (self-loops aside).
    let mut groups: BTreeMap<usize, Vec<Endpoint>> = BTreeMap::new();
    for (e, &(x, y)) in &map.ports {
        groups.entry(comp[y * w + x]).or_default().push(e.clone());
    }
    for (_, eps) in groups {
        let mut reach: Vec<Endpoint> = vec![eps[0].clone()];
        let mut k = 0;
        while k < reach.len() {
            let cur = reach[k].clone();
            for c in s.connections() {
                if let Some(o) = c.other(&cur) {
                    if !reach.contains(o) && map.ports.contains_key(o) {
                        reach.push(o.clone());
                    }
                }
            }
            k += 1;
        }
        reach.sort();
        let mut got = eps.clone();
        got.sort();
        if reach != got {
            let names: Vec<String> = got.iter().map(|e| format!("{e}")).collect();
            return Err(names.join(" "));
        }
    }
    Ok(())
}
