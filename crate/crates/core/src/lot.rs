//! Parking lot model: typed nodes with planar coordinates, road edges, declared
//! stall adjacency and per-stall occupancy.
//!
//! A lot is loaded from a JSON layout document:
//!
//! ```json
//! {
//!   "nodes": [{"id": "E", "kind": "entrance", "x": 0.0, "y": 0.0},
//!             {"id": "p1", "kind": "space", "x": 6.0, "y": 0.0}],
//!   "edges": [{"a": "E", "b": "p1"}],
//!   "neighbors": [],
//!   "occupied": []
//! }
//! ```
//!
//! Edge lengths default to the straight-line distance between endpoints. A
//! declared length below that distance is rejected so the straight-line A*
//! heuristic stays admissible.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute slack (meters) tolerated when comparing a declared edge length
/// against the straight-line distance of its endpoints. Covers decimal
/// rounding of hand-written coordinates.
pub const ADMISSIBILITY_SLACK: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum LotError {
    #[error("failed to read layout: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse layout: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("duplicate node id `{0}`")]
    DuplicateId(String),
    #[error("node `{0}` has a non-finite coordinate")]
    NonFiniteCoordinate(String),
    #[error("edge {a}-{b} references unknown node `{missing}`")]
    DanglingEdge {
        a: String,
        b: String,
        missing: String,
    },
    #[error("edge {0}-{0} is a self-loop")]
    SelfLoop(String),
    #[error("duplicate edge {a}-{b}")]
    DuplicateEdge { a: String, b: String },
    #[error("edge {a}-{b} has non-positive or non-finite length {length}")]
    BadLength { a: String, b: String, length: f64 },
    #[error("edge {a}-{b} length {length} is shorter than the straight-line distance {euclidean}")]
    Inadmissible {
        a: String,
        b: String,
        length: f64,
        euclidean: f64,
    },
    #[error("lot has no {0} node")]
    MissingKind(NodeKind),
    #[error("neighbor pair {a}/{b} references unknown node `{missing}`")]
    DanglingNeighbor {
        a: String,
        b: String,
        missing: String,
    },
    #[error("neighbor pair {a}/{b} is invalid: {reason}")]
    BadNeighborPair {
        a: String,
        b: String,
        reason: &'static str,
    },
    #[error("space `{0}` declares more than two neighbors")]
    TooManyNeighbors(String),
    #[error("node `{0}` is not reachable from the rest of the lot")]
    Disconnected(String),
    #[error("unknown space `{0}`")]
    UnknownSpace(String),
    #[error("node `{id}` is a {kind}, not a space")]
    NotASpace { id: String, kind: NodeKind },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Entrance,
    Exit,
    Intersection,
    Space,
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeKind::Entrance => "entrance",
            NodeKind::Exit => "exit",
            NodeKind::Intersection => "intersection",
            NodeKind::Space => "space",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
    pub x: f64,
    pub y: f64,
}

impl Node {
    pub fn new(id: impl Into<String>, kind: NodeKind, x: f64, y: f64) -> Self {
        Node {
            id: id.into(),
            kind,
            x,
            y,
        }
    }

    /// Straight-line distance in meters.
    pub fn distance_to(&self, other: &Node) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Edge {
    pub a: String,
    pub b: String,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub a: String,
    pub b: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
}

impl EdgeSpec {
    pub fn new(a: impl Into<String>, b: impl Into<String>, length: Option<f64>) -> Self {
        EdgeSpec {
            a: a.into(),
            b: b.into(),
            length,
        }
    }
}

/// On-disk layout document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutDocument {
    pub nodes: Vec<Node>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub neighbors: Vec<[String; 2]>,
    #[serde(default)]
    pub occupied: Vec<String>,
}

/// Stall difficulty from the occupancy of its declared side neighbors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Difficulty {
    /// No occupied neighbor.
    Open = 1,
    /// One occupied neighbor.
    OneSide = 2,
    /// Both neighbors occupied.
    BothSides = 3,
}

impl Difficulty {
    pub fn from_occupied_neighbors(count: usize) -> Self {
        match count {
            0 => Difficulty::Open,
            1 => Difficulty::OneSide,
            _ => Difficulty::BothSides,
        }
    }

    pub fn value(self) -> u8 {
        self as u8
    }
}

/// Immutable, validated lot graph.
///
/// Nodes are stored sorted by id, so node indices follow the canonical
/// lexicographic order used for every tie-break downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct LotGraph {
    nodes: Vec<Node>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, f64)>>,
    neighbor_pairs: Vec<(String, String)>,
    side_neighbors: Vec<Vec<usize>>,
    initial_occupied: Vec<String>,
}

impl LotGraph {
    /// Builds and fully validates a lot.
    pub fn new(
        nodes: Vec<Node>,
        edges: Vec<EdgeSpec>,
        neighbors: Vec<[String; 2]>,
        occupied: Vec<String>,
    ) -> Result<Self, LotError> {
        let mut graph = Self::raw(nodes, edges)?;
        for kind in [NodeKind::Entrance, NodeKind::Exit, NodeKind::Space] {
            if !graph.nodes.iter().any(|n| n.kind == kind) {
                return Err(LotError::MissingKind(kind));
            }
        }
        graph.attach_neighbors(neighbors)?;
        graph.check_connected()?;

        let mut seen = BTreeSet::new();
        for id in &occupied {
            graph.space_index(id)?;
            seen.insert(id.clone());
        }
        graph.initial_occupied = seen.into_iter().collect();
        Ok(graph)
    }

    /// Builds a road graph checking only per-node and per-edge invariants
    /// (unique ids, finite coordinates, known endpoints, positive admissible
    /// lengths). Node kinds and connectivity are not required.
    pub fn raw(mut nodes: Vec<Node>, edges: Vec<EdgeSpec>) -> Result<Self, LotError> {
        nodes.sort_by(|a, b| a.id.cmp(&b.id));
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            if !node.x.is_finite() || !node.y.is_finite() {
                return Err(LotError::NonFiniteCoordinate(node.id.clone()));
            }
            if index.insert(node.id.clone(), i).is_some() {
                return Err(LotError::DuplicateId(node.id.clone()));
            }
        }

        let mut adjacency = vec![Vec::new(); nodes.len()];
        let mut pairs = BTreeSet::new();
        let mut resolved = Vec::with_capacity(edges.len());
        for spec in edges {
            let lookup = |id: &String| {
                index
                    .get(id)
                    .copied()
                    .ok_or_else(|| LotError::DanglingEdge {
                        a: spec.a.clone(),
                        b: spec.b.clone(),
                        missing: id.clone(),
                    })
            };
            let ia = lookup(&spec.a)?;
            let ib = lookup(&spec.b)?;
            if ia == ib {
                return Err(LotError::SelfLoop(spec.a));
            }
            if !pairs.insert((ia.min(ib), ia.max(ib))) {
                return Err(LotError::DuplicateEdge {
                    a: spec.a,
                    b: spec.b,
                });
            }
            let euclidean = nodes[ia].distance_to(&nodes[ib]);
            let length = spec.length.unwrap_or(euclidean);
            if !length.is_finite() || length <= 0.0 {
                return Err(LotError::BadLength {
                    a: spec.a,
                    b: spec.b,
                    length,
                });
            }
            if length + ADMISSIBILITY_SLACK < euclidean {
                return Err(LotError::Inadmissible {
                    a: spec.a,
                    b: spec.b,
                    length,
                    euclidean,
                });
            }
            adjacency[ia].push((ib, length));
            adjacency[ib].push((ia, length));
            resolved.push(Edge {
                a: spec.a,
                b: spec.b,
                length,
            });
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(j, _)| j);
        }

        let side_neighbors = vec![Vec::new(); nodes.len()];
        Ok(LotGraph {
            nodes,
            index,
            edges: resolved,
            adjacency,
            neighbor_pairs: Vec::new(),
            side_neighbors,
            initial_occupied: Vec::new(),
        })
    }

    fn attach_neighbors(&mut self, neighbors: Vec<[String; 2]>) -> Result<(), LotError> {
        let mut seen = BTreeSet::new();
        for [a, b] in neighbors {
            let resolve = |id: &String| -> Result<usize, LotError> {
                let i = *self
                    .index
                    .get(id)
                    .ok_or_else(|| LotError::DanglingNeighbor {
                        a: a.clone(),
                        b: b.clone(),
                        missing: id.clone(),
                    })?;
                if self.nodes[i].kind != NodeKind::Space {
                    return Err(LotError::BadNeighborPair {
                        a: a.clone(),
                        b: b.clone(),
                        reason: "both ends must be spaces",
                    });
                }
                Ok(i)
            };
            let ia = resolve(&a)?;
            let ib = resolve(&b)?;
            if ia == ib {
                return Err(LotError::BadNeighborPair {
                    a,
                    b,
                    reason: "a space cannot neighbor itself",
                });
            }
            if !seen.insert((ia.min(ib), ia.max(ib))) {
                return Err(LotError::BadNeighborPair {
                    a,
                    b,
                    reason: "pair declared twice",
                });
            }
            for (from, to) in [(ia, ib), (ib, ia)] {
                let list = &mut self.side_neighbors[from];
                list.push(to);
                if list.len() > 2 {
                    return Err(LotError::TooManyNeighbors(self.nodes[from].id.clone()));
                }
            }
            self.neighbor_pairs.push((a, b));
        }
        for list in &mut self.side_neighbors {
            list.sort_unstable();
        }
        Ok(())
    }

    fn check_connected(&self) -> Result<(), LotError> {
        let Some(start) = self.nodes.iter().position(|n| n.kind == NodeKind::Entrance) else {
            return Ok(());
        };
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        match seen.iter().position(|&s| !s) {
            Some(i) => Err(LotError::Disconnected(self.nodes[i].id.clone())),
            None => Ok(()),
        }
    }

    pub fn from_document(doc: LayoutDocument) -> Result<Self, LotError> {
        Self::new(doc.nodes, doc.edges, doc.neighbors, doc.occupied)
    }

    /// Nodes in canonical (lexicographic id) order.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbor_pairs(&self) -> &[(String, String)] {
        &self.neighbor_pairs
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.index_of(id).map(|i| &self.nodes[i])
    }

    pub(crate) fn node_at(&self, index: usize) -> &Node {
        &self.nodes[index]
    }

    /// `(neighbor index, edge length)` pairs of a node, ordered by neighbor index.
    pub(crate) fn adjacent(&self, index: usize) -> &[(usize, f64)] {
        &self.adjacency[index]
    }

    pub fn ids_of_kind(&self, kind: NodeKind) -> impl Iterator<Item = &str> + '_ {
        self.nodes
            .iter()
            .filter(move |n| n.kind == kind)
            .map(|n| n.id.as_str())
    }

    pub fn space_ids(&self) -> Vec<&str> {
        self.ids_of_kind(NodeKind::Space).collect()
    }

    pub fn exit_ids(&self) -> Vec<&str> {
        self.ids_of_kind(NodeKind::Exit).collect()
    }

    /// Lexicographically first entrance.
    pub fn default_entrance(&self) -> Option<&str> {
        self.ids_of_kind(NodeKind::Entrance).next()
    }

    /// Declared side neighbors of a space, in canonical order.
    pub fn side_neighbors(&self, space: &str) -> Result<Vec<&str>, LotError> {
        let i = self.space_index(space)?;
        Ok(self.side_neighbors[i]
            .iter()
            .map(|&j| self.nodes[j].id.as_str())
            .collect())
    }

    /// Occupancy declared by the layout document.
    pub fn initial_occupancy(&self) -> OccupancyState {
        let mut state = OccupancyState::all_vacant(self);
        for id in &self.initial_occupied {
            state.occupied.insert(id.clone(), true);
        }
        state
    }

    pub(crate) fn space_index(&self, id: &str) -> Result<usize, LotError> {
        let i = self
            .index_of(id)
            .ok_or_else(|| LotError::UnknownSpace(id.to_string()))?;
        match self.nodes[i].kind {
            NodeKind::Space => Ok(i),
            kind => Err(LotError::NotASpace {
                id: id.to_string(),
                kind,
            }),
        }
    }

    /// Serializes the lot back into a layout document with explicit lengths.
    pub fn to_document(&self) -> LayoutDocument {
        LayoutDocument {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec::new(e.a.clone(), e.b.clone(), Some(e.length)))
                .collect(),
            neighbors: self
                .neighbor_pairs
                .iter()
                .map(|(a, b)| [a.clone(), b.clone()])
                .collect(),
            occupied: self.initial_occupied.clone(),
        }
    }
}

/// Parses and validates a layout document.
pub fn load_lot(source: &str) -> Result<LotGraph, LotError> {
    let doc: LayoutDocument = serde_json::from_str(source)?;
    LotGraph::from_document(doc)
}

pub fn load_lot_file(path: impl AsRef<Path>) -> Result<LotGraph, LotError> {
    let text = std::fs::read_to_string(path)?;
    load_lot(&text)
}

/// Per-space occupied flags. Keys are exactly the space ids of one lot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OccupancyState {
    occupied: BTreeMap<String, bool>,
}

impl OccupancyState {
    pub fn all_vacant(graph: &LotGraph) -> Self {
        Self::filled(graph, false)
    }

    pub fn all_occupied(graph: &LotGraph) -> Self {
        Self::filled(graph, true)
    }

    fn filled(graph: &LotGraph, flag: bool) -> Self {
        OccupancyState {
            occupied: graph
                .ids_of_kind(NodeKind::Space)
                .map(|id| (id.to_string(), flag))
                .collect(),
        }
    }

    /// State in which exactly the listed spaces are occupied.
    pub fn with_occupied<S: AsRef<str>>(graph: &LotGraph, ids: &[S]) -> Result<Self, LotError> {
        let mut state = Self::all_vacant(graph);
        for id in ids {
            state.set(graph, id.as_ref(), true)?;
        }
        Ok(state)
    }

    /// State in which exactly the listed spaces are vacant.
    pub fn with_vacant<S: AsRef<str>>(graph: &LotGraph, ids: &[S]) -> Result<Self, LotError> {
        let mut state = Self::all_occupied(graph);
        for id in ids {
            state.set(graph, id.as_ref(), false)?;
        }
        Ok(state)
    }

    pub fn set(&mut self, graph: &LotGraph, space: &str, occupied: bool) -> Result<(), LotError> {
        graph.space_index(space)?;
        match self.occupied.get_mut(space) {
            Some(flag) => {
                *flag = occupied;
                Ok(())
            }
            None => Err(LotError::UnknownSpace(space.to_string())),
        }
    }

    pub fn is_occupied(&self, space: &str) -> Option<bool> {
        self.occupied.get(space).copied()
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied.values().filter(|&&o| o).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> + '_ {
        self.occupied.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.occupied.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupied.is_empty()
    }
}

/// Returns a copy of `state` with one flag changed.
pub fn set_occupancy(
    graph: &LotGraph,
    state: &OccupancyState,
    space: &str,
    occupied: bool,
) -> Result<OccupancyState, LotError> {
    let mut next = state.clone();
    next.set(graph, space, occupied)?;
    Ok(next)
}

/// Vacant space ids in canonical order. This is the row order of every
/// factor matrix.
pub fn vacant_spaces(graph: &LotGraph, state: &OccupancyState) -> Vec<String> {
    graph
        .ids_of_kind(NodeKind::Space)
        .filter(|id| state.is_occupied(id) == Some(false))
        .map(str::to_string)
        .collect()
}

/// Undeclared neighbors count as unoccupied.
pub fn space_difficulty(
    graph: &LotGraph,
    state: &OccupancyState,
    space: &str,
) -> Result<Difficulty, LotError> {
    let i = graph.space_index(space)?;
    let occupied = graph.side_neighbors[i]
        .iter()
        .filter(|&&j| state.is_occupied(&graph.nodes[j].id) == Some(true))
        .count();
    Ok(Difficulty::from_occupied_neighbors(occupied))
}
