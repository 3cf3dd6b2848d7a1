//! SVG rendering of a lot, its occupancy and a recommendation.
//!
//! Scale is 10 px per meter. The origin is the lot's minimum coordinate over
//! all drawn extents; y grows upward in lot coordinates and downward in SVG,
//! so the image is flipped vertically.

use std::fmt::Write as _;

use crate::lot::{LotGraph, Node, NodeKind, OccupancyState};
use crate::pathfind::Path;

pub const PX_PER_METER: f64 = 10.0;
pub const STALL_WIDTH: f64 = 2.4;
pub const STALL_DEPTH: f64 = 5.3;
const MARKER_RADIUS: f64 = 1.0;

/// A recommended space with its entrance-to-space and space-to-exit routes.
#[derive(Debug, Clone, PartialEq)]
pub struct Highlight {
    pub space: String,
    pub drive: Path,
    pub walk: Path,
}

/// Half extents `(along x, along y)` of a stall rectangle. The stall depth
/// points at its nearest adjacent node.
fn stall_half_extents(graph: &LotGraph, index: usize) -> (f64, f64) {
    let me = graph.node_at(index);
    let nearest = graph
        .adjacent(index)
        .iter()
        .map(|&(j, _)| graph.node_at(j))
        .min_by(|a, b| me.distance_to(a).total_cmp(&me.distance_to(b)));
    let depth_along_x = nearest.is_some_and(|n| (n.x - me.x).abs() > (n.y - me.y).abs());
    if depth_along_x {
        (STALL_DEPTH / 2.0, STALL_WIDTH / 2.0)
    } else {
        (STALL_WIDTH / 2.0, STALL_DEPTH / 2.0)
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Frame {
    min_x: f64,
    max_y: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn of(graph: &LotGraph) -> Self {
        let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
        let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for (i, node) in graph.nodes().iter().enumerate() {
            let (hx, hy) = match node.kind {
                NodeKind::Space => stall_half_extents(graph, i),
                _ => (MARKER_RADIUS, MARKER_RADIUS),
            };
            min_x = min_x.min(node.x - hx);
            max_x = max_x.max(node.x + hx);
            min_y = min_y.min(node.y - hy);
            max_y = max_y.max(node.y + hy);
        }
        Frame {
            min_x,
            max_y,
            width: (max_x - min_x) * PX_PER_METER,
            height: (max_y - min_y) * PX_PER_METER,
        }
    }

    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        (
            (x - self.min_x) * PX_PER_METER,
            (self.max_y - y) * PX_PER_METER,
        )
    }
}

fn polyline(out: &mut String, graph: &LotGraph, frame: &Frame, path: &Path, class: &str) {
    let points: Vec<String> = path
        .nodes
        .iter()
        .filter_map(|id| graph.node(id))
        .map(|n| {
            let (x, y) = frame.px(n.x, n.y);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(
        out,
        r#"  <polyline class="{class}" points="{}"/>"#,
        points.join(" ")
    );
}

fn marker(out: &mut String, frame: &Frame, node: &Node, class: &str) {
    let (x, y) = frame.px(node.x, node.y);
    let _ = writeln!(
        out,
        r#"  <circle class="{class}" cx="{x:.2}" cy="{y:.2}" r="{:.2}"><title>{}</title></circle>"#,
        MARKER_RADIUS * PX_PER_METER,
        escape(&node.id)
    );
}

pub fn render_svg(
    graph: &LotGraph,
    state: &OccupancyState,
    highlight: Option<&Highlight>,
) -> String {
    let frame = Frame::of(graph);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#,
        w = frame.width,
        h = frame.height
    );
    out.push_str(concat!(
        "  <style>\n",
        "    .road { stroke: #9a9a9a; stroke-width: 2; }\n",
        "    .vacant { fill: none; stroke: #333; stroke-width: 1; }\n",
        "    .occupied { fill: #777; stroke: #333; stroke-width: 1; }\n",
        "    .recommended { fill: #3c9; stroke: #063; stroke-width: 2; }\n",
        "    .drive { fill: none; stroke: #1f5fd0; stroke-width: 3; }\n",
        "    .walk { fill: none; stroke: #e07b00; stroke-width: 3; stroke-dasharray: 6 4; }\n",
        "    .entrance { fill: #2a2; }\n",
        "    .exit { fill: #c22; }\n",
        "    text { font: 9px sans-serif; text-anchor: middle; }\n",
        "  </style>\n",
    ));

    for edge in graph.edges() {
        let (Some(a), Some(b)) = (graph.node(&edge.a), graph.node(&edge.b)) else {
            continue;
        };
        let (x1, y1) = frame.px(a.x, a.y);
        let (x2, y2) = frame.px(b.x, b.y);
        let _ = writeln!(
            out,
            r#"  <line class="road" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#
        );
    }

    for (i, node) in graph.nodes().iter().enumerate() {
        if node.kind != NodeKind::Space {
            continue;
        }
        let (hx, hy) = stall_half_extents(graph, i);
        let (x, y) = frame.px(node.x - hx, node.y + hy);
        let class = if highlight.is_some_and(|h| h.space == node.id) {
            "recommended"
        } else if state.is_occupied(&node.id) == Some(true) {
            "occupied"
        } else {
            "vacant"
        };
        let id = escape(&node.id);
        let (cx, cy) = frame.px(node.x, node.y);
        let _ = writeln!(
            out,
            r#"  <rect class="{class}" data-space="{id}" x="{x:.2}" y="{y:.2}" width="{:.2}" height="{:.2}"/>"#,
            2.0 * hx * PX_PER_METER,
            2.0 * hy * PX_PER_METER
        );
        let _ = writeln!(
            out,
            r#"  <text x="{cx:.2}" y="{:.2}">{id}</text>"#,
            cy + 3.0
        );
    }

    if let Some(h) = highlight {
        polyline(&mut out, graph, &frame, &h.drive, "drive");
        polyline(&mut out, graph, &frame, &h.walk, "walk");
    }

    for node in graph.nodes() {
        match node.kind {
            NodeKind::Entrance => marker(&mut out, &frame, node, "entrance"),
            NodeKind::Exit => marker(&mut out, &frame, node, "exit"),
            _ => {}
        }
    }
    out.push_str("</svg>\n");
    out
}
