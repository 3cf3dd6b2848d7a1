//! A* shortest paths over the lot graph.
//!
//! The heuristic is the straight-line distance to the goal. Every edge is at
//! least as long as the straight line between its endpoints (enforced when the
//! lot is built), so the heuristic is admissible and consistent.
//!
//! Among equal-length shortest paths the search returns the one whose node-id
//! sequence is lexicographically smallest. Open entries with equal `f` are
//! expanded larger-`g` first, then by smaller node id.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::lot::{LotGraph, NodeKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PathError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("node `{id}` is a {found}, expected {expected}")]
    WrongKind {
        id: String,
        expected: NodeKind,
        found: NodeKind,
    },
    #[error("no path from `{start}` to `{goal}`")]
    Unreachable { start: String, goal: String },
    #[error("no exit given")]
    NoExits,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub nodes: Vec<String>,
    /// Sum of traversed edge lengths, meters.
    pub length: f64,
}

/// Cost bookkeeping for one node during a search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchCost {
    /// Meters traveled from the start.
    pub g: f64,
    /// Straight-line meters to the goal.
    pub h: f64,
    pub f: f64,
}

impl SearchCost {
    fn new(g: f64, h: f64) -> Self {
        SearchCost { g, h, f: g + h }
    }
}

/// One node expansion, in the order the search performed them.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub node: String,
    pub cost: SearchCost,
}

#[derive(Debug, Clone, Copy)]
struct OpenEntry {
    cost: SearchCost,
    node: usize,
    generation: u32,
}

impl PartialEq for OpenEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OpenEntry {}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OpenEntry {
    // BinaryHeap pops the greatest entry: smallest f, then largest g, then
    // smallest node index.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .f
            .total_cmp(&self.cost.f)
            .then_with(|| self.cost.g.total_cmp(&other.cost.g))
            .then_with(|| other.node.cmp(&self.node))
            .then_with(|| self.generation.cmp(&other.generation))
    }
}

struct Search<'a> {
    graph: &'a LotGraph,
    start: usize,
    g: Vec<f64>,
    parent: Vec<Option<usize>>,
    generation: Vec<u32>,
}

impl Search<'_> {
    fn chain(&self, mut node: usize) -> Vec<usize> {
        let mut out = vec![node];
        while let Some(p) = self.parent[node] {
            out.push(p);
            node = p;
        }
        out.reverse();
        out
    }

    /// Whether reaching `v` through `u` gives a lexicographically smaller
    /// node sequence than the current route to `v`.
    fn lex_better(&self, u: usize, v: usize) -> bool {
        let mut candidate = self.chain(u);
        candidate.push(v);
        candidate < self.chain(v)
    }
}

/// Index-level A*: returns the node index sequence and its length.
pub(crate) fn search(
    graph: &LotGraph,
    start: usize,
    goal: usize,
    mut trace: Option<&mut Vec<(usize, SearchCost)>>,
) -> Option<(Vec<usize>, f64)> {
    let n = graph.node_count();
    let goal_node = graph.node_at(goal);
    let heuristic = |i: usize| graph.node_at(i).distance_to(goal_node);

    let mut s = Search {
        graph,
        start,
        g: vec![f64::INFINITY; n],
        parent: vec![None; n],
        generation: vec![0; n],
    };
    let mut open = BinaryHeap::new();
    s.g[start] = 0.0;
    open.push(OpenEntry {
        cost: SearchCost::new(0.0, heuristic(start)),
        node: start,
        generation: 0,
    });

    while let Some(entry) = open.pop() {
        let u = entry.node;
        if entry.generation != s.generation[u] {
            continue;
        }
        // Keep expanding while some open node could still tie the goal.
        if entry.cost.f > s.g[goal] {
            break;
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push((u, entry.cost));
        }
        if u == goal {
            continue;
        }
        for &(v, length) in s.graph.adjacent(u) {
            if v == s.start {
                continue;
            }
            let tentative = s.g[u] + length;
            let better = tentative < s.g[v] || (tentative == s.g[v] && s.lex_better(u, v));
            if better {
                s.g[v] = tentative;
                s.parent[v] = Some(u);
                s.generation[v] += 1;
                open.push(OpenEntry {
                    cost: SearchCost::new(tentative, heuristic(v)),
                    node: v,
                    generation: s.generation[v],
                });
            }
        }
    }

    s.g[goal].is_finite().then(|| (s.chain(goal), s.g[goal]))
}

fn resolve(graph: &LotGraph, id: &str) -> Result<usize, PathError> {
    graph
        .index_of(id)
        .ok_or_else(|| PathError::UnknownNode(id.to_string()))
}

fn expect_kind(graph: &LotGraph, id: &str, expected: NodeKind) -> Result<usize, PathError> {
    let i = resolve(graph, id)?;
    let found = graph.node_at(i).kind;
    if found != expected {
        return Err(PathError::WrongKind {
            id: id.to_string(),
            expected,
            found,
        });
    }
    Ok(i)
}

fn to_path(graph: &LotGraph, (nodes, length): (Vec<usize>, f64)) -> Path {
    Path {
        nodes: nodes
            .into_iter()
            .map(|i| graph.node_at(i).id.clone())
            .collect(),
        length,
    }
}

/// Minimum-length path between two nodes.
pub fn astar(graph: &LotGraph, start: &str, goal: &str) -> Result<Path, PathError> {
    astar_traced(graph, start, goal).map(|(path, _)| path)
}

/// Like [`astar`], also returning every expansion in order.
pub fn astar_traced(
    graph: &LotGraph,
    start: &str,
    goal: &str,
) -> Result<(Path, Vec<Expansion>), PathError> {
    let s = resolve(graph, start)?;
    let t = resolve(graph, goal)?;
    let mut trace = Vec::new();
    let found = search(graph, s, t, Some(&mut trace)).ok_or_else(|| PathError::Unreachable {
        start: start.to_string(),
        goal: goal.to_string(),
    })?;
    let expansions = trace
        .into_iter()
        .map(|(i, cost)| Expansion {
            node: graph.node_at(i).id.clone(),
            cost,
        })
        .collect();
    Ok((to_path(graph, found), expansions))
}

/// Driving distance X from an entrance to a space, meters.
pub fn driving_distance(graph: &LotGraph, entrance: &str, space: &str) -> Result<f64, PathError> {
    let e = expect_kind(graph, entrance, NodeKind::Entrance)?;
    let p = expect_kind(graph, space, NodeKind::Space)?;
    search(graph, e, p, None)
        .map(|(_, len)| len)
        .ok_or_else(|| PathError::Unreachable {
            start: entrance.to_string(),
            goal: space.to_string(),
        })
}

/// Walking distance L from a space to the nearest of `exits`, meters.
pub fn walking_distance<S: AsRef<str>>(
    graph: &LotGraph,
    space: &str,
    exits: &[S],
) -> Result<f64, PathError> {
    walking_path(graph, space, exits).map(|p| p.length)
}

/// Shortest space-to-exit path over all given exits. Ties go to the exit
/// listed first.
pub fn walking_path<S: AsRef<str>>(
    graph: &LotGraph,
    space: &str,
    exits: &[S],
) -> Result<Path, PathError> {
    let p = expect_kind(graph, space, NodeKind::Space)?;
    let mut best: Option<(Vec<usize>, f64)> = None;
    for exit in exits {
        let exit = exit.as_ref();
        let x = expect_kind(graph, exit, NodeKind::Exit)?;
        let found = search(graph, p, x, None).ok_or_else(|| PathError::Unreachable {
            start: space.to_string(),
            goal: exit.to_string(),
        })?;
        if best.as_ref().is_none_or(|(_, len)| found.1 < *len) {
            best = Some(found);
        }
    }
    best.map(|b| to_path(graph, b)).ok_or(PathError::NoExits)
}
