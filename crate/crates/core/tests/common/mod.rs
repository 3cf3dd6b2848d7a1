//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's search, factor or weighting code.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};

use opsr::lot::{EdgeSpec, LotGraph, Node, NodeKind};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

pub const REFERENCE_LOT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/reference_lot.json");
pub const EIGHT_SPACE_LOT: &str =
    concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/eight_space_lot.json");

pub const WALK_SPEED: f64 = 1.1;
pub const DRIVE_SPEED: f64 = 5000.0 / 3600.0;
pub const MANEUVER: [f64; 3] = [105.0, 157.5, 210.0];

/// Plain adjacency list over integer node indices.
#[derive(Debug, Clone)]
pub struct Adjacency {
    pub ids: Vec<String>,
    pub kinds: Vec<String>,
    pub coords: Vec<(f64, f64)>,
    pub adj: Vec<Vec<(usize, f64)>>,
    pub neighbors: Vec<(String, String)>,
}

impl Adjacency {
    pub fn index(&self, id: &str) -> usize {
        self.ids.iter().position(|x| x == id).expect("known id")
    }

    pub fn of_kind(&self, kind: &str) -> Vec<String> {
        let mut v: Vec<String> = self
            .ids
            .iter()
            .zip(&self.kinds)
            .filter(|(_, k)| k.as_str() == kind)
            .map(|(id, _)| id.clone())
            .collect();
        v.sort();
        v
    }
}

/// Reads a layout document straight from JSON.
pub fn adjacency_from_json(text: &str) -> Adjacency {
    let doc: Value = serde_json::from_str(text).unwrap();
    let mut ids = Vec::new();
    let mut kinds = Vec::new();
    let mut coords = Vec::new();
    for n in doc["nodes"].as_array().unwrap() {
        ids.push(n["id"].as_str().unwrap().to_string());
        kinds.push(n["kind"].as_str().unwrap().to_string());
        coords.push((n["x"].as_f64().unwrap(), n["y"].as_f64().unwrap()));
    }
    let pos = |id: &str| ids.iter().position(|x| x == id).unwrap();
    let mut adj = vec![Vec::new(); ids.len()];
    for e in doc["edges"].as_array().unwrap() {
        let a = pos(e["a"].as_str().unwrap());
        let b = pos(e["b"].as_str().unwrap());
        let len = e.get("length").and_then(Value::as_f64).unwrap_or_else(|| {
            let (dx, dy) = (coords[a].0 - coords[b].0, coords[a].1 - coords[b].1);
            (dx * dx + dy * dy).sqrt()
        });
        adj[a].push((b, len));
        adj[b].push((a, len));
    }
    let neighbors = doc
        .get("neighbors")
        .and_then(Value::as_array)
        .map(|list| {
            list.iter()
                .map(|p| {
                    (
                        p[0].as_str().unwrap().to_string(),
                        p[1].as_str().unwrap().to_string(),
                    )
                })
                .collect()
        })
        .unwrap_or_default();
    Adjacency {
        ids,
        kinds,
        coords,
        adj,
        neighbors,
    }
}

pub fn adjacency_of_file(path: &str) -> Adjacency {
    adjacency_from_json(&std::fs::read_to_string(path).unwrap())
}

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

/// Single-source Dijkstra; `INFINITY` for unreachable nodes.
pub fn dijkstra(adj: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Item(0.0, source));
    while let Some(Item(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Item(nd, v));
            }
        }
    }
    dist
}

pub fn bfs_reachable(adj: &[Vec<(usize, f64)>], source: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([source]);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &(v, _) in &adj[u] {
            if seen.insert(v) {
                queue.push_back(v);
            }
        }
    }
    seen
}

/// A random connected graph whose edge lengths are at least the Euclidean
/// distance between endpoints.
#[derive(Debug, Clone)]
pub struct RandomGraph {
    pub nodes: Vec<Node>,
    pub edges: Vec<(usize, usize, f64)>,
}

impl RandomGraph {
    pub fn id(i: usize) -> String {
        format!("n{i:02}")
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b, w) in &self.edges {
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        adj
    }

    pub fn lot(&self) -> LotGraph {
        let specs = self
            .edges
            .iter()
            .map(|&(a, b, w)| EdgeSpec::new(Self::id(a), Self::id(b), Some(w)))
            .collect();
        LotGraph::raw(self.nodes.clone(), specs).unwrap()
    }
}

/// `integral` puts nodes on an integer grid with integer lengths, so path
/// sums are exact and equal-length ties are common.
pub fn random_graph(
    rng: &mut StdRng,
    max_nodes: usize,
    max_edges: usize,
    integral: bool,
) -> RandomGraph {
    let n = rng.gen_range(2..=max_nodes);
    let nodes: Vec<Node> = (0..n)
        .map(|i| {
            let (x, y) = if integral {
                (rng.gen_range(0..6) as f64, rng.gen_range(0..6) as f64)
            } else {
                (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0))
            };
            Node::new(RandomGraph::id(i), NodeKind::Intersection, x, y)
        })
        .collect();
    let length = |rng: &mut StdRng, a: usize, b: usize| {
        let e = nodes[a].distance_to(&nodes[b]);
        if integral {
            e.ceil().max(1.0) + rng.gen_range(0..2) as f64
        } else if rng.gen_bool(0.3) {
            e.max(1e-3)
        } else {
            e * rng.gen_range(1.0..1.5) + 1e-3
        }
    };
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for b in 1..n {
        let a = rng.gen_range(0..b);
        seen.insert((a, b));
        let w = length(rng, a, b);
        edges.push((a, b, w));
    }
    let limit = max_edges.min(n * (n - 1) / 2).max(n - 1);
    let target = rng.gen_range(n - 1..=limit);
    let mut attempts = 0;
    while edges.len() < target && attempts < 20 * target {
        attempts += 1;
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let key = (a.min(b), a.max(b));
        if a == b || !seen.insert(key) {
            continue;
        }
        let w = length(rng, key.0, key.1);
        edges.push((key.0, key.1, w));
    }
    RandomGraph { nodes, edges }
}

pub fn seeded(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Every simple path of minimum total length from `s` to `t`, expressed as
/// node-index sequences. Only for small graphs with exact integer lengths.
pub fn all_shortest_simple_paths(
    adj: &[Vec<(usize, f64)>],
    s: usize,
    t: usize,
) -> (f64, Vec<Vec<usize>>) {
    fn walk(
        adj: &[Vec<(usize, f64)>],
        t: usize,
        path: &mut Vec<usize>,
        len: f64,
        on_path: &mut [bool],
        best: &mut (f64, Vec<Vec<usize>>),
    ) {
        let u = *path.last().unwrap();
        if u == t {
            if len < best.0 {
                *best = (len, vec![path.clone()]);
            } else if len == best.0 {
                best.1.push(path.clone());
            }
            return;
        }
        for &(v, w) in &adj[u] {
            if !on_path[v] {
                on_path[v] = true;
                path.push(v);
                walk(adj, t, path, len + w, on_path, best);
                path.pop();
                on_path[v] = false;
            }
        }
    }
    let mut best = (f64::INFINITY, Vec::new());
    let mut on_path = vec![false; adj.len()];
    on_path[s] = true;
    walk(adj, t, &mut vec![s], 0.0, &mut on_path, &mut best);
    best
}

/// Per-space raw factors `(X, L, S)` recomputed from the document.
pub fn oracle_raw_factors(
    lot: &Adjacency,
    vacant: &BTreeSet<String>,
) -> BTreeMap<String, (f64, f64, u8)> {
    let entrance = lot.of_kind("entrance")[0].clone();
    let exits = lot.of_kind("exit");
    let from_entrance = dijkstra(&lot.adj, lot.index(&entrance));
    let mut out = BTreeMap::new();
    for space in lot.of_kind("space") {
        let from_space = dijkstra(&lot.adj, lot.index(&space));
        let x = from_entrance[lot.index(&space)];
        let l = exits
            .iter()
            .map(|e| from_space[lot.index(e)])
            .fold(f64::INFINITY, f64::min);
        let occupied_neighbors = lot
            .neighbors
            .iter()
            .filter_map(|(a, b)| {
                if *a == space {
                    Some(b)
                } else if *b == space {
                    Some(a)
                } else {
                    None
                }
            })
            .filter(|n| !vacant.contains(*n))
            .count();
        let s = match occupied_neighbors {
            0 => 1,
            1 => 2,
            _ => 3,
        };
        out.insert(space, (x, l, s));
    }
    out
}

/// Entropy weights by direct formula evaluation. Uniform columns are detected
/// by comparing entries for equality and get entropy exactly 1.
pub fn oracle_entropy_weights(rows: &[[f64; 3]]) -> ([f64; 3], bool) {
    let m = rows.len() as f64;
    let mut h = [0.0; 3];
    for j in 0..3 {
        let total: f64 = rows.iter().map(|r| r[j]).sum();
        if total <= 0.0 {
            return ([1.0 / 3.0; 3], true);
        }
        if rows.iter().all(|r| r[j] == rows[0][j]) {
            h[j] = 0.0;
            continue;
        }
        let mut acc = 0.0;
        for r in rows {
            let y = r[j] / total;
            if y > 0.0 {
                acc += y * y.ln();
            }
        }
        let e = (-acc / m.ln()).clamp(0.0, 1.0);
        h[j] = 1.0 - e;
    }
    let sum: f64 = h.iter().sum();
    if sum <= 0.0 {
        return ([1.0 / 3.0; 3], true);
    }
    (h.map(|v| v / sum), false)
}

/// Result of scoring every vacant space and taking the minimum index.
#[derive(Debug, Clone)]
pub struct OracleCell {
    pub space: String,
    pub drive_s: f64,
    pub maneuver_s: f64,
    pub walk_s: f64,
    pub total_s: f64,
}

/// Exhaustive pipeline oracle. `weights = None` selects entropy weighting.
pub fn oracle_cell(
    lot: &Adjacency,
    vacant: &BTreeSet<String>,
    weights: Option<[f64; 3]>,
) -> OracleCell {
    let raw = oracle_raw_factors(lot, vacant);
    let x_max = raw.values().map(|r| r.0).fold(0.0, f64::max);
    let l_max = raw.values().map(|r| r.1).fold(0.0, f64::max);
    let candidates: Vec<(&String, [f64; 3])> = raw
        .iter()
        .filter(|(id, _)| vacant.contains(*id))
        .map(|(id, &(x, l, s))| (id, [x / x_max, l / l_max, s as f64 / 3.0]))
        .collect();
    let w = match weights {
        Some(w) => w,
        None if candidates.len() == 1 => [1.0 / 3.0; 3],
        None => oracle_entropy_weights(&candidates.iter().map(|c| c.1).collect::<Vec<_>>()).0,
    };
    let mut best: Option<(&String, f64)> = None;
    for (id, row) in &candidates {
        let h = w[0] * row[0] + w[1] * row[1] + w[2] * row[2];
        if best.is_none_or(|(_, bh)| h < bh) {
            best = Some((id, h));
        }
    }
    let space = best.unwrap().0.clone();
    let (x, l, s) = raw[&space];
    let drive_s = x / DRIVE_SPEED;
    let maneuver_s = MANEUVER[s as usize - 1];
    let walk_s = l / WALK_SPEED;
    OracleCell {
        space,
        drive_s,
        maneuver_s,
        walk_s,
        total_s: drive_s + maneuver_s + walk_s,
    }
}
