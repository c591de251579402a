//! Planarity of a system via its derived graph.
//!
//! Each instance becomes a wheel (hub plus its locations on a rim in
//! rotation order), each connection an edge subdivided once, and the
//! terminals pendant vertices. The derived graph is simple, so a standard
//! planarity test decides whether the system embeds with every rotation
//! respected (up to reflection).

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use hashbrown::{HashMap, HashSet};

use super::validate::validate;
use super::{Endpoint, System};
use crate::error::DomainError;

/// Simple undirected graph with labelled vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedGraph {
    pub labels: Vec<String>,
    pub edges: Vec<(usize, usize)>,
}

impl DerivedGraph {
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges
            .iter()
            .any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    K5,
    K33,
    /// Minimal non-planar edge set whose shape was not recognised; only
    /// produced if the minimisation is interrupted by a bug.
    Unclassified,
}

/// Edge set of a subdivided Kuratowski graph inside the derived graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub kind: WitnessKind,
    pub edges: Vec<(usize, usize)>,
    /// Vertices of degree at least three in the witness.
    pub branch_vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Planarity {
    Planar,
    NonPlanar(Witness),
}

impl Planarity {
    pub fn is_planar(&self) -> bool {
        matches!(self, Planarity::Planar)
    }
}

/// Builds the wheel expansion of `s`.
pub fn derived_graph(s: &System) -> DerivedGraph {
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut port = HashMap::new();

    for inst in s.instances() {
        let Some(g) = s.gadget_of(&inst.id) else {
            continue;
        };
        let hub = labels.len();
        labels.push(format!("{}#hub", inst.id));
        let first = labels.len();
        for loc in g.locations() {
            port.insert(
                Endpoint::port(inst.id.as_str(), loc.id.as_str()),
                labels.len(),
            );
            labels.push(format!("{}.{}", inst.id, loc.id));
        }
        let k = g.locations().len();
        for i in 0..k {
            edges.push((hub, first + i));
        }
        match k {
            0 | 1 => {}
            2 => edges.push((first, first + 1)),
            _ => {
                for i in 0..k {
                    edges.push((first + i, first + (i + 1) % k));
                }
            }
        }
    }

    let mut terminal = |e: &Endpoint, labels: &mut Vec<String>| -> usize {
        if let Some(&v) = port.get(e) {
            return v;
        }
        let v = labels.len();
        labels.push(e.to_string());
        port.insert(e.clone(), v);
        v
    };

    for (ix, c) in s.connections().iter().enumerate() {
        let a = terminal(&c.a, &mut labels);
        let b = terminal(&c.b, &mut labels);
        if c.a.is_terminal() || c.b.is_terminal() {
            if a != b {
                edges.push((a, b));
            }
            continue;
        }
        let m = labels.len();
        labels.push(format!("~{ix}"));
        if a == b {
            let m2 = labels.len();
            labels.push(format!("~{ix}b"));
            edges.extend([(a, m), (m, m2), (m2, a)]);
        } else {
            edges.extend([(a, m), (m, b)]);
        }
    }
    DerivedGraph { labels, edges }
}

/// Decides planarity of `s` and, if it fails, extracts a Kuratowski witness.
pub fn check_planarity(s: &System) -> Result<Planarity, DomainError> {
    let report = validate(s, false);
    if let Some(first) = report.first() {
        return Err(DomainError::InvalidSystem(first.to_string()));
    }
    let g = derived_graph(s);
    if is_planar_graph(g.vertex_count(), &g.edges) {
        Ok(Planarity::Planar)
    } else {
        let w = kuratowski_witness(g.vertex_count(), &g.edges)
            .expect("a non-planar graph has a Kuratowski subgraph");
        Ok(Planarity::NonPlanar(w))
    }
}

/// Planarity of a simple graph on vertices `0..n`.
pub fn is_planar_graph(n: usize, edges: &[(usize, usize)]) -> bool {
    first_nonplanar_block(n, edges).is_none()
}

/// Edge-minimal non-planar subgraph, classified as K5 or K3,3; `None` for
/// planar input.
pub fn kuratowski_witness(n: usize, edges: &[(usize, usize)]) -> Option<Witness> {
    let mut keep = first_nonplanar_block(n, edges)?;

    // Chunked deletion: drop whole runs of edges while the rest stays
    // non-planar, halving the run length down to single edges.
    let mut chunk = keep.len().div_ceil(2);
    loop {
        let mut i = 0;
        while i < keep.len() {
            let end = (i + chunk).min(keep.len());
            let mut trial = Vec::with_capacity(keep.len());
            trial.extend_from_slice(&keep[..i]);
            trial.extend_from_slice(&keep[end..]);
            if !is_planar_graph(n, &trial) {
                keep = trial;
            } else {
                i = end;
            }
        }
        if chunk == 1 {
            break;
        }
        chunk = chunk.div_ceil(2);
    }

    let mut degree = vec![0usize; n];
    for &(a, b) in &keep {
        degree[a] += 1;
        degree[b] += 1;
    }
    let branch: Vec<usize> = (0..n).filter(|&v| degree[v] >= 3).collect();
    let kind = if branch.len() == 5 && branch.iter().all(|&v| degree[v] == 4) {
        WitnessKind::K5
    } else if branch.len() == 6 && branch.iter().all(|&v| degree[v] == 3) {
        WitnessKind::K33
    } else {
        WitnessKind::Unclassified
    };
    keep.sort_unstable();
    Some(Witness {
        kind,
        edges: keep,
        branch_vertices: branch,
    })
}

fn first_nonplanar_block(n: usize, edges: &[(usize, usize)]) -> Option<Vec<(usize, usize)>> {
    for block in biconnected_blocks(n, edges) {
        let nv = {
            let mut vs: Vec<usize> = block.iter().flat_map(|&(a, b)| [a, b]).collect();
            vs.sort_unstable();
            vs.dedup();
            vs.len()
        };
        if block.len() < 9 || nv < 5 {
            continue;
        }
        if block.len() > 3 * nv - 6 || !block_is_planar(&block) {
            return Some(block);
        }
    }
    None
}

/// Edge sets of the biconnected components (iterative Tarjan).
fn biconnected_blocks(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    const NONE: usize = usize::MAX;
    let mut adj = vec![Vec::new(); n];
    for (eid, &(a, b)) in edges.iter().enumerate() {
        if a == b {
            continue;
        }
        adj[a].push((b, eid));
        adj[b].push((a, eid));
    }
    let mut disc = vec![NONE; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut blocks = Vec::new();
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();

    for root in 0..n {
        if disc[root] != NONE || adj[root].is_empty() {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        stack.push((root, NONE, 0));
        while let Some(top) = stack.last_mut() {
            let (v, parent_edge) = (top.0, top.1);
            if top.2 < adj[v].len() {
                let (w, eid) = adj[v][top.2];
                top.2 += 1;
                if eid == parent_edge {
                    continue;
                }
                if disc[w] == NONE {
                    edge_stack.push(eid);
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, eid, 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push(eid);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(parent) = stack.last() {
                    let p = parent.0;
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(edges[e]);
                            if e == parent_edge {
                                break;
                            }
                        }
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

/// Demoucron-Malgrange-Pertuiset path embedding on one biconnected block.
fn block_is_planar(block: &[(usize, usize)]) -> bool {
    let mut index = HashMap::new();
    let local = |v: usize, index: &mut HashMap<usize, usize>| {
        let next = index.len();
        *index.entry(v).or_insert(next)
    };
    let edges: Vec<(usize, usize)> = block
        .iter()
        .map(|&(a, b)| (local(a, &mut index), local(b, &mut index)))
        .collect();
    let n = index.len();
    let mut adj = vec![Vec::new(); n];
    let mut edge_id = HashMap::new();
    for (eid, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, eid));
        adj[b].push((a, eid));
        edge_id.insert((a.min(b), a.max(b)), eid);
    }

    let mut on = vec![false; n];
    let mut used = vec![false; edges.len()];
    let mut embedded_edges = 0;
    let mark = |path: &[usize], on: &mut Vec<bool>, used: &mut Vec<bool>, count: &mut usize| {
        for w in path.windows(2) {
            let eid = edge_id[&(w[0].min(w[1]), w[0].max(w[1]))];
            if !used[eid] {
                used[eid] = true;
                *count += 1;
            }
        }
        for &v in path {
            on[v] = true;
        }
    };

    let cycle = {
        let (u, v) = edges[0];
        let mut prev = vec![usize::MAX; n];
        prev[v] = v;
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            if x == u {
                break;
            }
            for &(y, eid) in &adj[x] {
                if eid != 0 && prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut path = vec![u];
        let mut x = u;
        while x != v {
            x = prev[x];
            path.push(x);
        }
        path
    };
    let mut closed = cycle.clone();
    closed.push(cycle[0]);
    mark(&closed, &mut on, &mut used, &mut embedded_edges);

    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle.clone()];
    let mut face_sets: Vec<HashSet<usize>> = vec![
        cycle.iter().copied().collect(),
        cycle.iter().copied().collect(),
    ];
    let mut vertex_faces: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &v in &cycle {
        vertex_faces[v].extend([0, 1]);
    }

    while embedded_edges < edges.len() {
        let fragments = fragments(n, &edges, &adj, &on, &used);
        let mut choice: Option<(usize, usize)> = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let faces_ok = admissible_faces(&frag.attachments, &vertex_faces, &face_sets);
            match faces_ok.len() {
                0 => return false,
                1 => {
                    choice = Some((fi, faces_ok[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, faces_ok[0]));
                    }
                }
            }
        }
        let (fi, face) = choice.expect("an unembedded edge leaves a fragment");
        let path = fragment_path(&fragments[fi], &adj, &on);
        mark(&path, &mut on, &mut used, &mut embedded_edges);

        let f = &faces[face];
        let u = path[0];
        let v = *path.last().unwrap();
        let i = f.iter().position(|&x| x == u).unwrap();
        let j = f.iter().position(|&x| x == v).unwrap();
        let k = f.len();
        let interior = &path[1..path.len() - 1];
        let mut f1 = Vec::new();
        let mut t = i;
        loop {
            f1.push(f[t]);
            if t == j {
                break;
            }
            t = (t + 1) % k;
        }
        f1.extend(interior.iter().rev());
        let mut f2 = Vec::new();
        let mut t = j;
        loop {
            f2.push(f[t]);
            if t == i {
                break;
            }
            t = (t + 1) % k;
        }
        f2.extend(interior.iter());

        for &x in &faces[face] {
            vertex_faces[x].retain(|&g| g != face);
        }
        let new_id = faces.len();
        for &x in &f1 {
            vertex_faces[x].push(face);
        }
        for &x in &f2 {
            vertex_faces[x].push(new_id);
        }
        face_sets[face] = f1.iter().copied().collect();
        face_sets.push(f2.iter().copied().collect());
        faces[face] = f1;
        faces.push(f2);
    }
    true
}

struct Fragment {
    attachments: Vec<usize>,
    /// Unembedded vertices of the fragment; empty for a single chord.
    inner: Vec<usize>,
    chord: Option<(usize, usize)>,
}

fn fragments(
    n: usize,
    edges: &[(usize, usize)],
    adj: &[Vec<(usize, usize)>],
    on: &[bool],
    used: &[bool],
) -> Vec<Fragment> {
    let mut out = Vec::new();
    for (eid, &(a, b)) in edges.iter().enumerate() {
        if !used[eid] && on[a] && on[b] {
            out.push(Fragment {
                attachments: vec![a, b],
                inner: Vec::new(),
                chord: Some((a, b)),
            });
        }
    }
    let mut seen = vec![false; n];
    for s in 0..n {
        if on[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut inner = vec![s];
        let mut attachments = Vec::new();
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &adj[x] {
                if on[y] {
                    attachments.push(y);
                } else if !seen[y] {
                    seen[y] = true;
                    inner.push(y);
                    queue.push_back(y);
                }
            }
        }
        attachments.sort_unstable();
        attachments.dedup();
        out.push(Fragment {
            attachments,
            inner,
            chord: None,
        });
    }
    out
}

fn admissible_faces(
    attachments: &[usize],
    vertex_faces: &[Vec<usize>],
    face_sets: &[HashSet<usize>],
) -> Vec<usize> {
    let pivot = attachments
        .iter()
        .min_by_key(|&&v| vertex_faces[v].len())
        .expect("fragments attach to the embedded part");
    let mut out: Vec<usize> = vertex_faces[*pivot]
        .iter()
        .copied()
        .filter(|&f| attachments.iter().all(|v| face_sets[f].contains(v)))
        .collect();
    out.sort_unstable();
    out
}

fn fragment_path(frag: &Fragment, adj: &[Vec<(usize, usize)>], on: &[bool]) -> Vec<usize> {
    if let Some((a, b)) = frag.chord {
        return vec![a, b];
    }
    let start = frag.attachments[0];
    let inner: HashSet<usize> = frag.inner.iter().copied().collect();
    let mut prev: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for &(y, _) in &adj[start] {
        if inner.contains(&y) && !prev.contains_key(&y) {
            prev.insert(y, start);
            queue.push_back(y);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &(y, _) in &adj[x] {
            if on[y] && y != start {
                let mut path = vec![y, x];
                let mut t = x;
                while let Some(&p) = prev.get(&t) {
                    path.push(p);
                    if p == start {
                        break;
                    }
                    t = p;
                }
                path.reverse();
                return path;
            }
            if inner.contains(&y) && !prev.contains_key(&y) {
                prev.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    unreachable!("a fragment of a biconnected block has two attachments")
}
