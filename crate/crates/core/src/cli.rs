//! Command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input or lot, 2 lot full.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::entropy::{entropy_weights, WeightVector};
use crate::evaluate::{compare_lot, DurationModel, EvalError, ScenarioId};
use crate::factors::{build_factor_matrix, FactorError};
use crate::lot::{load_lot_file, vacant_spaces, LotGraph, NodeKind, OccupancyState};
use crate::output::to_fixed_json;
use crate::pathfind::{astar, walking_path};
use crate::recommend::{recommend, RecommendError, Recommendation, WeightMode};
use crate::render::{render_svg, Highlight};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_LOT_FULL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "opsr", version, about = "Parking space recommendation")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a layout file and print a summary.
    Validate { lot_path: PathBuf },
    /// Recommend a vacant space.
    Recommend {
        lot_path: PathBuf,
        #[command(flatten)]
        occupancy: OccupancyArgs,
        #[command(flatten)]
        weights: WeightsArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Show the entropy weighting of the current candidates.
    Weights {
        lot_path: PathBuf,
        #[command(flatten)]
        occupancy: OccupancyArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Compare the entropy method against fixed-weight baselines.
    Compare {
        lot_path: PathBuf,
        /// Comma-separated scenario ids.
        #[arg(long, value_delimiter = ',', default_value = "A,B,C,D")]
        scenario: Vec<ScenarioArg>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Draw the lot and the recommended space as SVG.
    Render {
        lot_path: PathBuf,
        #[command(flatten)]
        occupancy: OccupancyArgs,
        #[command(flatten)]
        weights: WeightsArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct OccupancyArgs {
    /// Comma-separated occupied space ids; replaces the file's `occupied` list.
    #[arg(long)]
    pub occupied: Option<String>,
}

impl OccupancyArgs {
    fn resolve(&self, graph: &LotGraph) -> Result<OccupancyState, String> {
        match &self.occupied {
            None => Ok(graph.initial_occupancy()),
            Some(list) => {
                let ids: Vec<&str> = list
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .collect();
                OccupancyState::with_occupied(graph, &ids).map_err(|e| e.to_string())
            }
        }
    }
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    /// `entropy` or fixed weights `w1,w2,w3`.
    #[arg(long, default_value = "entropy")]
    pub weights: WeightsArg,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightsArg(pub WeightMode);

impl FromStr for WeightsArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("entropy") {
            return Ok(WeightsArg(WeightMode::Entropy));
        }
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("bad weight: {e}"))?;
        let [w1, w2, w3] = parts[..] else {
            return Err(format!(
                "expected `entropy` or three weights, got {}",
                parts.len()
            ));
        };
        let w = WeightVector::new(w1, w2, w3);
        if !w.is_valid() {
            return Err("weights must be nonnegative and not all zero".into());
        }
        Ok(WeightsArg(WeightMode::Fixed(w)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioArg(pub ScenarioId);

impl FromStr for ScenarioArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse()
            .map(ScenarioArg)
            .map_err(|e: EvalError| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Structured,
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn fail(&mut self, code: i32, msg: impl std::fmt::Display) -> i32 {
        let _ = writeln!(self.err, "error: {msg}");
        code
    }

    fn print(&mut self, text: &str) -> i32 {
        match self.out.write_all(text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => self.fail(EXIT_INVALID, e),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut io = Io { out, err };
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => io.print(&text),
                _ => {
                    let _ = io.err.write_all(text.as_bytes());
                    EXIT_INVALID
                }
            };
        }
    };
    execute(config, &mut io)
}

fn execute(config: CliConfig, io: &mut Io<'_>) -> i32 {
    match config.command {
        Command::Validate { lot_path } => cmd_validate(&lot_path, io),
        Command::Recommend {
            lot_path,
            occupancy,
            weights,
            format,
        } => cmd_recommend(&lot_path, &occupancy, weights.weights.0, format, io),
        Command::Weights {
            lot_path,
            occupancy,
            format,
        } => cmd_weights(&lot_path, &occupancy, format, io),
        Command::Compare {
            lot_path,
            scenario,
            format,
        } => {
            let ids: Vec<ScenarioId> = scenario.into_iter().map(|s| s.0).collect();
            cmd_compare(&lot_path, &ids, format, io)
        }
        Command::Render {
            lot_path,
            occupancy,
            weights,
            out,
        } => cmd_render(&lot_path, &occupancy, weights.weights.0, &out, io),
    }
}

fn load(path: &Path, io: &mut Io<'_>) -> Result<LotGraph, i32> {
    load_lot_file(path).map_err(|e| io.fail(EXIT_INVALID, format!("{}: {e}", path.display())))
}

fn endpoints(graph: &LotGraph) -> (&str, Vec<&str>) {
    let entrance = graph
        .default_entrance()
        .expect("validated lots have an entrance");
    (entrance, graph.exit_ids())
}

fn cmd_validate(path: &Path, io: &mut Io<'_>) -> i32 {
    let graph = match load(path, io) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let count = |k| graph.ids_of_kind(k).count();
    let text = format!(
        "valid lot: {} nodes ({} entrance, {} exit, {} intersection, {} space), {} edges, {} neighbor pairs\n\
         connected: yes\nedge lengths admissible: yes\n",
        graph.node_count(),
        count(NodeKind::Entrance),
        count(NodeKind::Exit),
        count(NodeKind::Intersection),
        count(NodeKind::Space),
        graph.edges().len(),
        graph.neighbor_pairs().len(),
    );
    io.print(&text)
}

fn mode_label(mode: WeightMode) -> &'static str {
    match mode {
        WeightMode::Entropy => "entropy",
        WeightMode::Fixed(_) => "fixed",
    }
}

#[derive(Serialize)]
struct IndexEntry<'a> {
    space: &'a str,
    h: f64,
}

#[derive(Serialize)]
struct RecommendDoc<'a> {
    space: &'a str,
    h_value: f64,
    weights_mode: &'static str,
    weights: WeightVector,
    fallback: bool,
    indices: Vec<IndexEntry<'a>>,
}

fn recommendation_table(rec: &Recommendation, mode: WeightMode) -> String {
    let w = rec.weights_used;
    let mut s = String::new();
    let _ = writeln!(s, "recommended: {} (H = {:.6})", rec.space, rec.h_value);
    let _ = writeln!(
        s,
        "weights ({}): w1={:.6} w2={:.6} w3={:.6} sum={:.6}",
        mode_label(mode),
        w.w1,
        w.w2,
        w.w3,
        w.sum()
    );
    let _ = writeln!(
        s,
        "fallback: {}",
        if rec.fallback_flag { "yes" } else { "no" }
    );
    let _ = writeln!(s, "{:<10} {:>10}", "space", "H");
    for (space, h) in &rec.per_space_indices {
        let mark = if *space == rec.space { " *" } else { "" };
        let _ = writeln!(s, "{space:<10} {h:>10.6}{mark}");
    }
    s
}

fn recommend_error(io: &mut Io<'_>, err: RecommendError) -> i32 {
    match err {
        RecommendError::LotFull => io.fail(EXIT_LOT_FULL, "lot is full: no vacant space"),
        other => io.fail(EXIT_INVALID, other),
    }
}

fn cmd_recommend(
    path: &Path,
    occupancy: &OccupancyArgs,
    mode: WeightMode,
    format: Format,
    io: &mut Io<'_>,
) -> i32 {
    let graph = match load(path, io) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let state = match occupancy.resolve(&graph) {
        Ok(s) => s,
        Err(e) => return io.fail(EXIT_INVALID, e),
    };
    let (entrance, exits) = endpoints(&graph);
    let rec = match recommend(&graph, &state, entrance, &exits, mode) {
        Ok(r) => r,
        Err(e) => return recommend_error(io, e),
    };
    let text = match format {
        Format::Table => recommendation_table(&rec, mode),
        Format::Structured => to_fixed_json(&RecommendDoc {
            space: &rec.space,
            h_value: rec.h_value,
            weights_mode: mode_label(mode),
            weights: rec.weights_used,
            fallback: rec.fallback_flag,
            indices: rec
                .per_space_indices
                .iter()
                .map(|(space, h)| IndexEntry { space, h: *h })
                .collect(),
        }),
    };
    io.print(&text)
}

fn cmd_weights(path: &Path, occupancy: &OccupancyArgs, format: Format, io: &mut Io<'_>) -> i32 {
    let graph = match load(path, io) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let state = match occupancy.resolve(&graph) {
        Ok(s) => s,
        Err(e) => return io.fail(EXIT_INVALID, e),
    };
    let vacant = vacant_spaces(&graph, &state).len();
    if vacant < 2 {
        return io.fail(
            EXIT_INVALID,
            format!("entropy weighting needs at least two vacant spaces, found {vacant}"),
        );
    }
    let (entrance, exits) = endpoints(&graph);
    let report = match build_factor_matrix(&graph, &state, entrance, &exits)
        .map_err(|e: FactorError| e.to_string())
        .and_then(|m| entropy_weights(&m).map_err(|e| e.to_string()))
    {
        Ok(r) => r,
        Err(e) => return io.fail(EXIT_INVALID, e),
    };
    let text = match format {
        Format::Structured => {
            #[derive(Serialize)]
            struct Doc<'a> {
                candidates: usize,
                report: &'a crate::entropy::EntropyReport,
            }
            to_fixed_json(&Doc {
                candidates: vacant,
                report: &report,
            })
        }
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "candidates: {vacant}");
            let _ = writeln!(s, "k = {:.6}", report.k);
            let _ = writeln!(s, "{:<8} {:>10} {:>10} {:>10}", "factor", "e", "h", "w");
            for (j, name) in ["X", "L", "S"].iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{name:<8} {:>10.6} {:>10.6} {:>10.6}",
                    report.e[j],
                    report.h[j],
                    report.w.as_array()[j]
                );
            }
            let _ = writeln!(
                s,
                "fallback: {}",
                if report.fallback {
                    "yes (equal weights)"
                } else {
                    "no"
                }
            );
            s
        }
    };
    io.print(&text)
}

fn cmd_compare(path: &Path, ids: &[ScenarioId], format: Format, io: &mut Io<'_>) -> i32 {
    let graph = match load(path, io) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let report = match compare_lot(&graph, ids, &DurationModel::default()) {
        Ok(r) => r,
        Err(EvalError::Recommend {
            scenario,
            source: RecommendError::LotFull,
        }) => return io.fail(EXIT_LOT_FULL, format!("scenario {scenario}: lot is full")),
        Err(e) => return io.fail(EXIT_INVALID, e),
    };
    let text = match format {
        Format::Table => report.render_table(),
        Format::Structured => report.to_structured(),
    };
    io.print(&text)
}

fn cmd_render(
    path: &Path,
    occupancy: &OccupancyArgs,
    mode: WeightMode,
    out_path: &Path,
    io: &mut Io<'_>,
) -> i32 {
    let graph = match load(path, io) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let state = match occupancy.resolve(&graph) {
        Ok(s) => s,
        Err(e) => return io.fail(EXIT_INVALID, e),
    };
    let (entrance, exits) = endpoints(&graph);
    let highlight = match recommend(&graph, &state, entrance, &exits, mode) {
        Ok(rec) => {
            let drive = astar(&graph, entrance, &rec.space);
            let walk = walking_path(&graph, &rec.space, &exits);
            match (drive, walk) {
                (Ok(drive), Ok(walk)) => Some(Highlight {
                    space: rec.space,
                    drive,
                    walk,
                }),
                (Err(e), _) | (_, Err(e)) => return io.fail(EXIT_INVALID, e),
            }
        }
        Err(RecommendError::LotFull) => {
            let _ = writeln!(
                io.err,
                "warning: lot is full; rendering without a recommendation"
            );
            None
        }
        Err(e) => return io.fail(EXIT_INVALID, e),
    };
    let svg = render_svg(&graph, &state, highlight.as_ref());
    if let Err(e) = std::fs::write(out_path, svg) {
        return io.fail(EXIT_INVALID, format!("{}: {e}", out_path.display()));
    }
    let msg = match &highlight {
        Some(h) => format!("wrote {} (recommended {})\n", out_path.display(), h.space),
        None => format!("wrote {}\n", out_path.display()),
    };
    io.print(&msg)
}
