//! Scenario harness: scores the entropy-weighted recommendation against the
//! fixed-weight baselines on the reference lot under a duration model.
//!
//! A chosen space costs `X / drive_speed + maneuver(S) + L / walk_speed`
//! seconds.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::factors::{FactorError, RawFactors, SpaceDistances};
use crate::lot::{vacant_spaces, Difficulty, LotError, LotGraph, NodeKind, OccupancyState};
use crate::output::to_fixed_json;
use crate::recommend::{
    recommend_with, RecommendError, WeightMode, BASELINE_I, BASELINE_II, BASELINE_III, BASELINE_IV,
};

pub const REFERENCE_LOT_JSON: &str = include_str!("../fixtures/reference_lot.json");

/// The bundled four-row reference lot.
pub fn reference_lot() -> LotGraph {
    crate::lot::load_lot(REFERENCE_LOT_JSON).expect("bundled reference lot is valid")
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Lot(#[from] LotError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error("scenario {scenario}: {source}")]
    Recommend {
        scenario: ScenarioId,
        #[source]
        source: RecommendError,
    },
    #[error("space `{0}` is occupied")]
    Occupied(String),
    #[error("scenario {scenario} needs space `{space}`, which the lot lacks")]
    MissingSpace { scenario: ScenarioId, space: String },
    #[error("invalid duration model: {0}")]
    BadModel(&'static str),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("lot has no entrance")]
    NoEntrance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DurationModel {
    /// Meters per second.
    pub walk_speed: f64,
    /// Meters per second.
    pub drive_speed: f64,
    /// Seconds to park, indexed by difficulty 1, 2, 3.
    pub maneuver_times: [f64; 3],
}

impl Default for DurationModel {
    fn default() -> Self {
        DurationModel {
            walk_speed: 1.1,
            // 5 km/h
            drive_speed: 25.0 / 18.0,
            maneuver_times: [105.0, 157.5, 210.0],
        }
    }
}

impl DurationModel {
    pub fn maneuver_time(&self, s: Difficulty) -> f64 {
        self.maneuver_times[usize::from(s.value()) - 1]
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        if !(self.walk_speed > 0.0 && self.drive_speed > 0.0) {
            return Err(EvalError::BadModel("speeds must be positive"));
        }
        let [easy, mid, hard] = self.maneuver_times;
        if !(easy < mid && mid < hard) {
            return Err(EvalError::BadModel(
                "maneuver time must grow with difficulty",
            ));
        }
        Ok(())
    }

    pub fn score(&self, raw: &RawFactors) -> DurationBreakdown {
        let drive_s = raw.x / self.drive_speed;
        let maneuver_s = self.maneuver_time(raw.s);
        let walk_s = raw.l / self.walk_speed;
        DurationBreakdown {
            drive_s,
            maneuver_s,
            walk_s,
            total_s: drive_s + maneuver_s + walk_s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DurationBreakdown {
    pub drive_s: f64,
    pub maneuver_s: f64,
    pub walk_s: f64,
    pub total_s: f64,
}

/// Seconds to drive to, park in and walk away from a vacant space.
pub fn duration<S: AsRef<str>>(
    graph: &LotGraph,
    state: &OccupancyState,
    space: &str,
    model: &DurationModel,
    entrance: &str,
    exits: &[S],
) -> Result<DurationBreakdown, EvalError> {
    match state.is_occupied(space) {
        Some(false) => {}
        Some(true) => return Err(EvalError::Occupied(space.to_string())),
        None => return Err(LotError::UnknownSpace(space.to_string()).into()),
    }
    let raw = crate::factors::raw_factors(graph, state, entrance, exits, space)?;
    Ok(model.score(&raw))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ScenarioId {
    A,
    B,
    C,
    D,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 4] = [ScenarioId::A, ScenarioId::B, ScenarioId::C, ScenarioId::D];

    pub fn description(self) -> &'static str {
        match self {
            ScenarioId::A => "vacant lot",
            ScenarioId::B => "every candidate flanked by two cars",
            ScenarioId::C => "equal driving distance",
            ScenarioId::D => "equal walking distance",
        }
    }

    /// Spaces left vacant by the fixed-list scenarios.
    pub fn vacant_set(self) -> Option<&'static [&'static str]> {
        match self {
            ScenarioId::C => Some(&["C3", "C4", "C5", "D3", "D5"]),
            ScenarioId::D => Some(&["A3", "A5", "B3", "B4", "B5"]),
            _ => None,
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for ScenarioId {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(ScenarioId::A),
            "B" => Ok(ScenarioId::B),
            "C" => Ok(ScenarioId::C),
            "D" => Ok(ScenarioId::D),
            _ => Err(EvalError::UnknownScenario(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: ScenarioId,
    pub description: &'static str,
    pub occupancy: OccupancyState,
}

/// Occupancy for one comparison environment.
///
/// B leaves vacant only stalls with two declared neighbors, chosen greedily in
/// canonical order so that no two vacant stalls are neighbors; everything else
/// is occupied.
pub fn build_scenario(graph: &LotGraph, id: ScenarioId) -> Result<Scenario, EvalError> {
    let occupancy = match id {
        ScenarioId::A => OccupancyState::all_vacant(graph),
        ScenarioId::B => {
            let mut chosen: Vec<&str> = Vec::new();
            for space in graph.space_ids() {
                let neighbors = graph.side_neighbors(space)?;
                if neighbors.len() == 2 && neighbors.iter().all(|n| !chosen.contains(n)) {
                    chosen.push(space);
                }
            }
            OccupancyState::with_vacant(graph, &chosen)?
        }
        ScenarioId::C | ScenarioId::D => {
            let vacant = id.vacant_set().expect("fixed-list scenario");
            for space in vacant {
                let present = graph.node(space).is_some_and(|n| n.kind == NodeKind::Space);
                if !present {
                    return Err(EvalError::MissingSpace {
                        scenario: id,
                        space: space.to_string(),
                    });
                }
            }
            OccupancyState::with_vacant(graph, vacant)?
        }
    };
    Ok(Scenario {
        id,
        description: id.description(),
        occupancy,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Method {
    #[serde(rename = "OPSR")]
    Opsr,
    I,
    II,
    III,
    IV,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Opsr, Method::I, Method::II, Method::III, Method::IV];

    pub fn weight_mode(self) -> WeightMode {
        match self {
            Method::Opsr => WeightMode::Entropy,
            Method::I => WeightMode::Fixed(BASELINE_I),
            Method::II => WeightMode::Fixed(BASELINE_II),
            Method::III => WeightMode::Fixed(BASELINE_III),
            Method::IV => WeightMode::Fixed(BASELINE_IV),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Method::Opsr => "OPSR",
            Method::I => "I",
            Method::II => "II",
            Method::III => "III",
            Method::IV => "IV",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportCell {
    pub scenario: ScenarioId,
    pub method: Method,
    pub space: String,
    pub drive_s: f64,
    pub maneuver_s: f64,
    pub walk_s: f64,
    pub total_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSummary {
    pub scenario: ScenarioId,
    pub opsr_total_s: f64,
    pub best_baseline_total_s: f64,
    pub opsr_lowest: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    /// Informational only: whether OPSR's total is the lowest per scenario.
    pub opsr_lowest_in: usize,
    pub scenarios: Vec<ScenarioSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    /// Canonical (scenario, method) order.
    pub cells: Vec<ReportCell>,
}

impl ComparisonReport {
    pub fn cell(&self, scenario: ScenarioId, method: Method) -> Option<&ReportCell> {
        self.cells
            .iter()
            .find(|c| c.scenario == scenario && c.method == method)
    }

    /// Per-scenario check that OPSR is no slower than every baseline
    /// (within 1e-9 s). Scenarios without an OPSR cell or without a baseline
    /// are skipped.
    pub fn summary(&self) -> Summary {
        let mut scenarios = Vec::new();
        let mut ids: Vec<ScenarioId> = self.cells.iter().map(|c| c.scenario).collect();
        ids.dedup();
        for id in ids {
            let Some(opsr) = self.cell(id, Method::Opsr) else {
                continue;
            };
            let best = self
                .cells
                .iter()
                .filter(|c| c.scenario == id && c.method != Method::Opsr)
                .map(|c| c.total_s)
                .fold(f64::INFINITY, f64::min);
            if best.is_finite() {
                scenarios.push(ScenarioSummary {
                    scenario: id,
                    opsr_total_s: opsr.total_s,
                    best_baseline_total_s: best,
                    opsr_lowest: opsr.total_s <= best + 1e-9,
                });
            }
        }
        Summary {
            opsr_lowest_in: scenarios.iter().filter(|s| s.opsr_lowest).count(),
            scenarios,
        }
    }

    pub fn summary_line(&self) -> String {
        let summary = self.summary();
        let detail: Vec<String> = summary
            .scenarios
            .iter()
            .map(|s| {
                format!(
                    "{}={}",
                    s.scenario,
                    if s.opsr_lowest { "yes" } else { "no" }
                )
            })
            .collect();
        format!(
            "summary (informational): OPSR total lowest in {}/{} scenarios [{}]",
            summary.opsr_lowest_in,
            summary.scenarios.len(),
            detail.join(" ")
        )
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<8} {:<6} {:<6} {:>12} {:>12} {:>12} {:>12}",
            "scenario", "method", "space", "drive_s", "maneuver_s", "walk_s", "total_s"
        );
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{:<8} {:<6} {:<6} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
                c.scenario.to_string(),
                c.method.label(),
                c.space,
                c.drive_s,
                c.maneuver_s,
                c.walk_s,
                c.total_s
            );
        }
        out.push_str(&self.summary_line());
        out.push('\n');
        out
    }

    /// JSON document: `{"cells": [...], "summary": {...}}`, six-decimal floats.
    pub fn to_structured(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            cells: &'a [ReportCell],
            summary: Summary,
        }
        to_fixed_json(&Doc {
            cells: &self.cells,
            summary: self.summary(),
        })
    }
}

/// Runs every (scenario, method) pair through the recommender and scores the
/// chosen space.
pub fn run_comparison<S: AsRef<str>>(
    graph: &LotGraph,
    scenarios: &[Scenario],
    methods: &[Method],
    model: &DurationModel,
    entrance: &str,
    exits: &[S],
) -> Result<ComparisonReport, EvalError> {
    model.validate()?;
    let distances = SpaceDistances::compute(graph, entrance, exits)?;
    let mut cells = Vec::with_capacity(scenarios.len() * methods.len());
    for scenario in scenarios {
        if vacant_spaces(graph, &scenario.occupancy).is_empty() {
            return Err(EvalError::Recommend {
                scenario: scenario.id,
                source: RecommendError::LotFull,
            });
        }
        for &method in methods {
            let rec = recommend_with(graph, &scenario.occupancy, &distances, method.weight_mode())
                .map_err(|source| EvalError::Recommend {
                    scenario: scenario.id,
                    source,
                })?;
            let raw = distances.raw_factors(graph, &scenario.occupancy, &rec.space)?;
            let d = model.score(&raw);
            cells.push(ReportCell {
                scenario: scenario.id,
                method,
                space: rec.space,
                drive_s: d.drive_s,
                maneuver_s: d.maneuver_s,
                walk_s: d.walk_s,
                total_s: d.total_s,
            });
        }
    }
    Ok(ComparisonReport { cells })
}

/// Full grid on a lot with its default entrance and all exits.
pub fn compare_lot(
    graph: &LotGraph,
    ids: &[ScenarioId],
    model: &DurationModel,
) -> Result<ComparisonReport, EvalError> {
    let entrance = graph.default_entrance().ok_or(EvalError::NoEntrance)?;
    let exits = graph.exit_ids();
    let scenarios = ids
        .iter()
        .map(|&id| build_scenario(graph, id))
        .collect::<Result<Vec<_>, _>>()?;
    run_comparison(graph, &scenarios, &Method::ALL, model, entrance, &exits)
}
