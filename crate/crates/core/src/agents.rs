//! The four agent roles: early-warning hypothesis generation, wildfire and
//! flood specialist analysis, and decision-level fusion.
//!
//! Labels and decisions come from deterministic rules; reasoning backends
//! only write prose. Free tool orchestration by a language model is a
//! documented non-goal, so the tool sequence of each specialist is fixed and
//! ordered, and the fusion rules cannot be overridden by a backend.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::scene::{BandId, SceneBundle};
use crate::spectral::{compute_mndwi, compute_nhi_swir, ThresholdConfig};
use crate::tools::{
    tool_burned_area, tool_index_fire, tool_ml_fire, tool_ml_flood, SegmenterBackend, ToolName,
    ToolResult,
};
use crate::SCHEMA_VERSION;

/// Hazard classes the pipeline can report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventType {
    Wildfire,
    Flood,
    #[default]
    None,
}

impl EventType {
    pub fn as_str(self) -> &'static str {
        match self {
            EventType::Wildfire => "wildfire",
            EventType::Flood => "flood",
            EventType::None => "none",
        }
    }

    pub fn parse(s: &str) -> Option<EventType> {
        match s {
            "wildfire" => Some(EventType::Wildfire),
            "flood" => Some(EventType::Flood),
            "none" => Some(EventType::None),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentRole {
    EarlyWarning,
    WildfireSpecialist,
    FloodSpecialist,
    Decision,
}

impl AgentRole {
    pub fn as_str(self) -> &'static str {
        match self {
            AgentRole::EarlyWarning => "early_warning",
            AgentRole::WildfireSpecialist => "wildfire_specialist",
            AgentRole::FloodSpecialist => "flood_specialist",
            AgentRole::Decision => "decision",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecialistKind {
    Wildfire,
    Flood,
}

impl SpecialistKind {
    pub fn event(self) -> EventType {
        match self {
            SpecialistKind::Wildfire => EventType::Wildfire,
            SpecialistKind::Flood => EventType::Flood,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    EventConfirmed,
    PastEvent,
    NoEvent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Alert,
    NoAlert,
}

/// Reasoning strings are clipped to this many characters.
pub const MAX_REASONING_CHARS: usize = 500;

/// First-tier output: a fast hazard hypothesis used for routing and as one
/// fusion evidence source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub schema_version: u32,
    pub scene_id: String,
    pub predicted_event: EventType,
    pub reasoning: String,
    pub elapsed_ms: f64,
}

/// Error annotation for a tool that failed inside a specialist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolFailure {
    pub tool: ToolName,
    pub message: String,
}

/// Second-tier output: the fixed tool sequence's results plus a
/// classification derived from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialistReport {
    pub schema_version: u32,
    pub scene_id: String,
    pub specialist: SpecialistKind,
    pub tool_results: Vec<ToolResult>,
    pub classification: Classification,
    pub reasoning: String,
    #[serde(default)]
    pub tool_errors: Vec<ToolFailure>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub hypothesis: Option<HypothesisReport>,
    pub specialist_reports: Vec<SpecialistReport>,
}

/// Final fan-in output with a confidence score reflecting agreement across
/// evidence sources.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalAlert {
    pub schema_version: u32,
    pub scene_id: String,
    pub decision: Decision,
    pub event_type: EventType,
    pub confidence: f64,
    pub reasoning: String,
    pub provenance: Provenance,
}

#[derive(Debug, Error)]
pub enum ReasonerError {
    #[error("reasoner timed out after {timeout_ms} ms")]
    Timeout { timeout_ms: u64 },
    #[error("connection failure: {0}")]
    Connection(String),
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error("backend failure: {0}")]
    Failure(String),
}

/// Label plus prose produced by a reasoning backend.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReasonerOutput {
    pub label: String,
    pub reasoning: String,
}

/// Seam for the language models. Implementations must answer within their
/// timeout or signal failure, and must return a label from the role's enum.
pub trait ReasonerBackend: Send + Sync {
    fn backend_id(&self) -> &str;

    fn timeout_ms(&self) -> u64 {
        10_000
    }

    fn reason(&self, role: AgentRole, evidence: &Value) -> Result<ReasonerOutput, ReasonerError>;
}

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("missing band {band} required by {role}")]
    MissingBand { band: BandId, role: &'static str },
}

/// Deterministic rule-based reasoner: the default backend for every role.
///
/// For the early-warning role it predicts from cheap full-scene statistics;
/// for the other roles it composes template prose around the rule-computed
/// labels carried in the evidence document.
#[derive(Debug, Clone)]
pub struct RuleReasoner {
    /// Hotspot-index fraction above which the scene reads as a fire scene.
    pub fire_fraction_min: f64,
    /// Water-index fraction above which the scene reads as flooded; acts as
    /// a crude climatological water-extent bound.
    pub water_fraction_min: f64,
}

impl Default for RuleReasoner {
    fn default() -> Self {
        Self {
            fire_fraction_min: 5e-4,
            water_fraction_min: 0.02,
        }
    }
}

fn fmt_km2(v: f64) -> String {
    let mut s = format!("{v:.2}");
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.push('0');
    }
    s
}

impl ReasonerBackend for RuleReasoner {
    fn backend_id(&self) -> &str {
        "rule-based"
    }

    fn reason(&self, role: AgentRole, evidence: &Value) -> Result<ReasonerOutput, ReasonerError> {
        match role {
            AgentRole::EarlyWarning => {
                let fire = evidence["fire_fraction"].as_f64().ok_or_else(|| {
                    ReasonerError::SchemaViolation("fire_fraction missing".into())
                })?;
                let water = evidence["water_fraction"].as_f64().ok_or_else(|| {
                    ReasonerError::SchemaViolation("water_fraction missing".into())
                })?;
                let (label, reasoning) = if fire > self.fire_fraction_min {
                    (
                        EventType::Wildfire,
                        format!(
                            "Hotspot-index response over {:.3}% of the quicklook grid suggests an active fire.",
                            fire * 100.0
                        ),
                    )
                } else if water > self.water_fraction_min {
                    (
                        EventType::Flood,
                        format!(
                            "Water-index response over {:.1}% of the quicklook grid exceeds the expected water extent.",
                            water * 100.0
                        ),
                    )
                } else {
                    (
                        EventType::None,
                        "Quicklook statistics show no hazard signature.".to_string(),
                    )
                };
                Ok(ReasonerOutput {
                    label: label.as_str().to_string(),
                    reasoning,
                })
            }
            AgentRole::WildfireSpecialist | AgentRole::FloodSpecialist => {
                let classification = evidence["classification"].as_str().unwrap_or("no_event");
                let mut parts = Vec::new();
                if let Some(tools) = evidence["tools"].as_array() {
                    for t in tools {
                        let name = t["tool_name"].as_str().unwrap_or("?");
                        let mut metric_parts = Vec::new();
                        if let Some(metrics) = t["metrics"].as_object() {
                            for (k, v) in metrics {
                                let v = v.as_f64().unwrap_or(f64::NAN);
                                if k.ends_with("_km2") {
                                    metric_parts.push(format!(
                                        "{} {} km²",
                                        k.trim_end_matches("_km2").replace('_', " "),
                                        fmt_km2(v)
                                    ));
                                } else if k == "hotspot_count" {
                                    metric_parts.push(format!("{} hotspots", v as i64));
                                } else {
                                    metric_parts.push(format!("{} {:.4}", k.replace('_', " "), v));
                                }
                            }
                        }
                        parts.push(format!("{name}: {}", metric_parts.join(", ")));
                    }
                }
                let lead = match classification {
                    "event_confirmed" => "Tool evidence confirms an active event.",
                    "past_event" => {
                        "Burned-area evidence indicates a past event; no new active fires were identified."
                    }
                    _ => "All tools report no event.",
                };
                Ok(ReasonerOutput {
                    label: classification.to_string(),
                    reasoning: format!("{lead} {}", parts.join("; ")),
                })
            }
            AgentRole::Decision => {
                let decision = evidence["decision"].as_str().unwrap_or("no_alert");
                let event = evidence["event_type"].as_str().unwrap_or("none");
                let confidence = evidence["confidence"].as_f64().unwrap_or(0.0);
                let summary = evidence["summary"].as_str().unwrap_or("");
                let text = match decision {
                    "alert" => format!(
                        "Specialist evidence confirms a {event} event (agreement {confidence:.2}). {summary}"
                    ),
                    _ => format!(
                        "No alert is issued (agreement {confidence:.2}). {summary}"
                    ),
                };
                Ok(ReasonerOutput {
                    label: decision.to_string(),
                    reasoning: text.trim_end().to_string(),
                })
            }
        }
    }
}

/// Fault-injection backend used in tests: always times out.
pub struct FailingReasoner;

impl ReasonerBackend for FailingReasoner {
    fn backend_id(&self) -> &str {
        "failing"
    }

    fn timeout_ms(&self) -> u64 {
        1
    }

    fn reason(&self, _role: AgentRole, _evidence: &Value) -> Result<ReasonerOutput, ReasonerError> {
        Err(ReasonerError::Timeout { timeout_ms: 1 })
    }
}

fn clip_reasoning(mut s: String) -> String {
    if s.chars().count() > MAX_REASONING_CHARS {
        s = s.chars().take(MAX_REASONING_CHARS).collect();
    }
    s
}

/// Step used by the early-warning quicklook statistics: every 4th pixel in
/// both axes.
const QUICKLOOK_STEP: usize = 4;

/// Fraction of finite sampled index values strictly above zero.
fn sampled_fraction_above_zero(raster: &crate::spectral::IndexRaster) -> f64 {
    let mut above = 0usize;
    let mut total = 0usize;
    let mut y = 0;
    while y < raster.height {
        let mut x = 0;
        while x < raster.width {
            let v = raster.get(x, y);
            if v.is_finite() {
                total += 1;
                if v > 0.0 {
                    above += 1;
                }
            }
            x += QUICKLOOK_STEP;
        }
        y += QUICKLOOK_STEP;
    }
    if total == 0 {
        0.0
    } else {
        above as f64 / total as f64
    }
}

/// Produces the routing hypothesis for a scene. A backend failure degrades
/// to `none` rather than failing open into the specialists.
pub fn early_warning_assess(
    scene: &SceneBundle,
    backend: &dyn ReasonerBackend,
) -> Result<HypothesisReport, AgentError> {
    let started = Instant::now();
    for band in [BandId::B4, BandId::B3, BandId::B2] {
        if scene.band(band).is_none() {
            return Err(AgentError::MissingBand {
                band,
                role: "early_warning",
            });
        }
    }
    let eps = ThresholdConfig::default().eps_denominator;
    let fire_fraction = compute_nhi_swir(scene, eps)
        .map(|r| sampled_fraction_above_zero(&r))
        .unwrap_or(0.0);
    let water_fraction = compute_mndwi(scene, eps)
        .map(|r| sampled_fraction_above_zero(&r))
        .unwrap_or(0.0);
    let evidence = json!({
        "schema_version": SCHEMA_VERSION,
        "scene_id": scene.scene_id,
        "width": scene.width(),
        "height": scene.height(),
        "fire_fraction": fire_fraction,
        "water_fraction": water_fraction,
    });
    let (predicted_event, reasoning) = match backend.reason(AgentRole::EarlyWarning, &evidence) {
        Ok(out) => match EventType::parse(&out.label) {
            Some(event) => {
                let reasoning = if out.reasoning.is_empty() && event != EventType::None {
                    format!("Predicted {} without rationale.", event.as_str())
                } else {
                    out.reasoning
                };
                (event, reasoning)
            }
            None => (
                EventType::None,
                format!(
                    "Degraded mode: backend {} returned unknown label {:?}; defaulting to none.",
                    backend.backend_id(),
                    out.label
                ),
            ),
        },
        Err(e) => (
            EventType::None,
            format!(
                "Degraded mode: backend {} failed ({e}); defaulting to none.",
                backend.backend_id()
            ),
        ),
    };
    Ok(HypothesisReport {
        schema_version: SCHEMA_VERSION,
        scene_id: scene.scene_id.clone(),
        predicted_event,
        reasoning: clip_reasoning(reasoning),
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

/// Selects which specialists a hypothesis activates.
pub fn route(predicted: EventType) -> Vec<SpecialistKind> {
    match predicted {
        EventType::Wildfire => vec![SpecialistKind::Wildfire],
        EventType::Flood => vec![SpecialistKind::Flood],
        EventType::None => Vec::new(),
    }
}

fn detected(results: &[ToolResult], tool: ToolName) -> bool {
    results
        .iter()
        .find(|r| r.tool_name == tool)
        .is_some_and(|r| r.detected)
}

/// Classification rule of the wildfire specialist, a pure function of the
/// tool detection flags.
pub fn wildfire_classification(results: &[ToolResult]) -> Classification {
    let active = detected(results, ToolName::MlFire) || detected(results, ToolName::IndexFire);
    if active {
        Classification::EventConfirmed
    } else if detected(results, ToolName::BurnedArea) {
        Classification::PastEvent
    } else {
        Classification::NoEvent
    }
}

/// Classification rule of the flood specialist; floods have no past-event
/// class.
pub fn flood_classification(results: &[ToolResult]) -> Classification {
    if detected(results, ToolName::MlFlood) {
        Classification::EventConfirmed
    } else {
        Classification::NoEvent
    }
}

fn tools_evidence(scene_id: &str, results: &[ToolResult], classification: Classification) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "scene_id": scene_id,
        "classification": serde_json::to_value(classification).unwrap(),
        "tools": results,
    })
}

fn specialist_reasoning(
    backend: &dyn ReasonerBackend,
    role: AgentRole,
    evidence: &Value,
    classification: Classification,
) -> String {
    match backend.reason(role, evidence) {
        Ok(out) => out.reasoning,
        Err(e) => format!(
            "Reasoning backend {} unavailable ({e}); classification {} from tool rules.",
            backend.backend_id(),
            serde_json::to_value(classification)
                .unwrap()
                .as_str()
                .unwrap_or("?")
        ),
    }
}

/// Runs the three wildfire tools in their fixed order and classifies the
/// outcome. Tools are independent: one failure is annotated and the rest
/// still run.
pub fn wildfire_specialist_analyze(
    scene: &SceneBundle,
    cfg: &ThresholdConfig,
    fire_backend: &dyn SegmenterBackend,
    reasoner: &dyn ReasonerBackend,
) -> SpecialistReport {
    let started = Instant::now();
    let mut results = Vec::new();
    let mut failures = Vec::new();
    match tool_ml_fire(scene, fire_backend, cfg) {
        Ok((r, _)) => results.push(r),
        Err(e) => failures.push(ToolFailure {
            tool: ToolName::MlFire,
            message: e.to_string(),
        }),
    }
    match tool_index_fire(scene, cfg) {
        Ok((r, _)) => results.push(r),
        Err(e) => failures.push(ToolFailure {
            tool: ToolName::IndexFire,
            message: e.to_string(),
        }),
    }
    match tool_burned_area(scene, cfg) {
        Ok((r, _)) => results.push(r),
        Err(e) => failures.push(ToolFailure {
            tool: ToolName::BurnedArea,
            message: e.to_string(),
        }),
    }
    let classification = wildfire_classification(&results);
    let evidence = tools_evidence(&scene.scene_id, &results, classification);
    let reasoning = specialist_reasoning(
        reasoner,
        AgentRole::WildfireSpecialist,
        &evidence,
        classification,
    );
    SpecialistReport {
        schema_version: SCHEMA_VERSION,
        scene_id: scene.scene_id.clone(),
        specialist: SpecialistKind::Wildfire,
        tool_results: results,
        classification,
        reasoning: clip_reasoning(reasoning),
        tool_errors: failures,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    }
}

/// Runs the flood tool and classifies the outcome.
pub fn flood_specialist_analyze(
    scene: &SceneBundle,
    cfg: &ThresholdConfig,
    flood_backend: &dyn SegmenterBackend,
    reasoner: &dyn ReasonerBackend,
) -> SpecialistReport {
    let started = Instant::now();
    let mut results = Vec::new();
    let mut failures = Vec::new();
    match tool_ml_flood(scene, flood_backend, cfg) {
        Ok((r, _)) => results.push(r),
        Err(e) => failures.push(ToolFailure {
            tool: ToolName::MlFlood,
            message: e.to_string(),
        }),
    }
    let classification = flood_classification(&results);
    let evidence = tools_evidence(&scene.scene_id, &results, classification);
    let reasoning = specialist_reasoning(
        reasoner,
        AgentRole::FloodSpecialist,
        &evidence,
        classification,
    );
    SpecialistReport {
        schema_version: SCHEMA_VERSION,
        scene_id: scene.scene_id.clone(),
        specialist: SpecialistKind::Flood,
        tool_results: results,
        classification,
        reasoning: clip_reasoning(reasoning),
        tool_errors: failures,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    }
}

/// Area a specialist report claims for its event, used only by the
/// multi-event tie-break.
fn report_area_km2(report: &SpecialistReport) -> f64 {
    report
        .tool_results
        .iter()
        .flat_map(|r| {
            r.metrics
                .iter()
                .filter(|(k, _)| k.ends_with("_km2"))
                .map(|(_, &v)| v)
        })
        .fold(0.0, f64::max)
}

/// Event a source votes for when compared against the fused outcome. A
/// past-event report votes for no current event.
fn specialist_vote(report: &SpecialistReport) -> EventType {
    if report.classification == Classification::EventConfirmed {
        report.specialist.event()
    } else {
        EventType::None
    }
}

/// Deterministic decision-level fusion.
///
/// The rules, applied before any prose is written:
/// (a) any confirmed specialist report raises an alert for that event;
/// (b) a hypothesis refuted by every routed specialist yields no alert;
/// (c) past-event evidence alone yields no alert with a note;
/// (d) no hypothesis and no reports yields no alert;
/// (e) two confirmed events resolve to the larger reported area, ties to
///     wildfire.
///
/// `hypothesis` is `None` in baseline mode, where no early-warning stage
/// runs; absent sources are excluded from the confidence denominator.
pub fn decision_fuse(
    hypothesis: Option<&HypothesisReport>,
    reports: &[SpecialistReport],
    backend: &dyn ReasonerBackend,
) -> FinalAlert {
    let scene_id = hypothesis
        .map(|h| h.scene_id.clone())
        .or_else(|| reports.first().map(|r| r.scene_id.clone()))
        .unwrap_or_default();

    let confirmed: Vec<&SpecialistReport> = reports
        .iter()
        .filter(|r| r.classification == Classification::EventConfirmed)
        .collect();
    let past_event = reports
        .iter()
        .any(|r| r.classification == Classification::PastEvent);

    let (decision, event_type) = if confirmed.is_empty() {
        (Decision::NoAlert, EventType::None)
    } else if confirmed.len() == 1 {
        (Decision::Alert, confirmed[0].specialist.event())
    } else {
        // Rule (e): pick the larger reported area, tie to wildfire.
        let best = confirmed
            .iter()
            .max_by(|a, b| {
                report_area_km2(a)
                    .partial_cmp(&report_area_km2(b))
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then_with(|| {
                        // On ties prefer wildfire.
                        let a_fire = a.specialist == SpecialistKind::Wildfire;
                        let b_fire = b.specialist == SpecialistKind::Wildfire;
                        a_fire.cmp(&b_fire)
                    })
            })
            .unwrap();
        (Decision::Alert, best.specialist.event())
    };

    let mut agreeing = 0usize;
    let mut total = 0usize;
    if let Some(h) = hypothesis {
        total += 1;
        if h.predicted_event == event_type {
            agreeing += 1;
        }
    }
    for report in reports {
        total += 1;
        if specialist_vote(report) == event_type {
            agreeing += 1;
        }
    }
    // Vacuous agreement when there are no sources at all.
    let confidence = if total == 0 {
        1.0
    } else {
        agreeing as f64 / total as f64
    };

    let mut summary_parts = Vec::new();
    if let Some(h) = hypothesis {
        summary_parts.push(format!(
            "Early warning predicted {}.",
            h.predicted_event.as_str()
        ));
    }
    for report in reports {
        let areas: Vec<String> = report
            .tool_results
            .iter()
            .flat_map(|r| {
                r.metrics
                    .iter()
                    .filter(|(k, _)| k.ends_with("_km2"))
                    .map(|(k, &v)| {
                        format!("{} {} km²", k.trim_end_matches("_km2").replace('_', " "), fmt_km2(v))
                    })
            })
            .collect();
        summary_parts.push(format!(
            "{:?} specialist reports {:?} ({}).",
            report.specialist, report.classification, areas.join(", ")
        ));
    }
    if past_event && decision == Decision::NoAlert {
        summary_parts
            .push("Evidence points to a past event; no active hazard at this time.".to_string());
    }
    if hypothesis.is_some_and(|h| h.predicted_event != EventType::None)
        && decision == Decision::NoAlert
        && !past_event
    {
        summary_parts.push(
            "Specialist evidence refutes the early-warning hypothesis; the alert is rejected."
                .to_string(),
        );
    }
    let summary = summary_parts.join(" ");

    let evidence = json!({
        "schema_version": SCHEMA_VERSION,
        "scene_id": scene_id,
        "decision": serde_json::to_value(decision).unwrap(),
        "event_type": event_type.as_str(),
        "confidence": confidence,
        "summary": summary,
    });
    let reasoning = match backend.reason(AgentRole::Decision, &evidence) {
        Ok(out) => out.reasoning,
        Err(e) => format!(
            "Reasoning backend {} unavailable ({e}). {summary}",
            backend.backend_id()
        ),
    };

    FinalAlert {
        schema_version: SCHEMA_VERSION,
        scene_id,
        decision,
        event_type,
        confidence,
        reasoning: clip_reasoning(reasoning),
        provenance: Provenance {
            hypothesis: hypothesis.cloned(),
            specialist_reports: reports.to_vec(),
        },
    }
}

/// Builds a specialist report directly from tool results, bypassing the
/// tools themselves. Used for report fixtures and the fusion truth table.
pub fn specialist_report_from_tools(
    scene_id: &str,
    specialist: SpecialistKind,
    tool_results: Vec<ToolResult>,
    reasoner: &dyn ReasonerBackend,
) -> SpecialistReport {
    let classification = match specialist {
        SpecialistKind::Wildfire => wildfire_classification(&tool_results),
        SpecialistKind::Flood => flood_classification(&tool_results),
    };
    let evidence = tools_evidence(scene_id, &tool_results, classification);
    let role = match specialist {
        SpecialistKind::Wildfire => AgentRole::WildfireSpecialist,
        SpecialistKind::Flood => AgentRole::FloodSpecialist,
    };
    let reasoning = specialist_reasoning(reasoner, role, &evidence, classification);
    SpecialistReport {
        schema_version: SCHEMA_VERSION,
        scene_id: scene_id.to_string(),
        specialist,
        tool_results,
        classification,
        reasoning: clip_reasoning(reasoning),
        tool_errors: Vec::new(),
        elapsed_ms: 0.0,
    }
}

/// Convenience constructor for fixture tool results.
pub fn tool_result_fixture(
    tool_name: ToolName,
    detected: bool,
    metrics: &[(&str, f64)],
) -> ToolResult {
    let metrics: BTreeMap<String, f64> =
        metrics.iter().map(|&(k, v)| (k.to_string(), v)).collect();
    ToolResult {
        tool_name,
        detected,
        metrics,
        mask_pixels: 0,
        elapsed_ms: 0.0,
    }
}
