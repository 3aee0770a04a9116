//! Workflow execution: the always-run-everything baseline and the
//! hypothesis-routed configuration, with per-stage wall-clock timings.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agents::{AgentRole, EventType, FinalAlert, HypothesisReport, SpecialistKind};
use crate::spectral::ThresholdConfig;
use crate::transport::{
    AnalyzeRequest, DecideRequest, NodeRequest, NodeResponse, Transport, TransportError,
};
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorkflowMode {
    /// No early-warning stage; every specialist runs on every scene.
    Baseline,
    /// The early-warning hypothesis selects which specialists run.
    Routed,
}

impl WorkflowMode {
    pub fn as_str(self) -> &'static str {
        match self {
            WorkflowMode::Baseline => "baseline",
            WorkflowMode::Routed => "routed",
        }
    }
}

/// Node ids of one deployment, keyed by role.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deployment {
    pub early_warning: String,
    pub wildfire: String,
    pub flood: String,
    pub decision: String,
}

impl Default for Deployment {
    fn default() -> Self {
        Self {
            early_warning: "early-warning".into(),
            wildfire: "wildfire-specialist".into(),
            flood: "flood-specialist".into(),
            decision: "decision".into(),
        }
    }
}

impl Deployment {
    fn specialist_node(&self, kind: SpecialistKind) -> &str {
        match kind {
            SpecialistKind::Wildfire => &self.wildfire,
            SpecialistKind::Flood => &self.flood,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkflowConfig {
    pub mode: WorkflowMode,
    /// Run independent specialist calls on separate threads.
    pub parallel_specialists: bool,
    #[serde(default)]
    pub thresholds: Option<ThresholdConfig>,
}

impl WorkflowConfig {
    pub fn baseline() -> Self {
        Self {
            mode: WorkflowMode::Baseline,
            parallel_specialists: false,
            thresholds: None,
        }
    }

    pub fn routed() -> Self {
        Self {
            mode: WorkflowMode::Routed,
            parallel_specialists: false,
            thresholds: None,
        }
    }

    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel_specialists = parallel;
        self
    }
}

/// A non-fatal stage failure recorded in the run record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageFailure {
    pub role: AgentRole,
    pub message: String,
}

/// Wall-clock breakdown of one scene run. Every field here is stripped by
/// canonicalization.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StageTimings {
    pub early_warning_ms: f64,
    pub specialists_ms: f64,
    pub decision_ms: f64,
    pub total_ms: f64,
}

/// One scene processed through one workflow configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub scene_ref: String,
    pub mode: WorkflowMode,
    /// Scene footprint, carried for area-stratified analysis.
    pub area_km2: f64,
    /// Ground-truth label of the scene when known.
    pub label: EventType,
    pub specialists_run: Vec<SpecialistKind>,
    pub alert: FinalAlert,
    pub failures: Vec<StageFailure>,
    pub timings: StageTimings,
}

/// One scene to process: a store reference plus bench metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneJob {
    pub scene_ref: String,
    pub area_km2: f64,
    pub label: EventType,
}

#[derive(Debug, Error)]
pub enum OrchestratorError {
    #[error("decision stage failed: {0}")]
    Decision(TransportError),
    #[error("unexpected response from node {node_id}")]
    UnexpectedResponse { node_id: String },
    #[error("record io failure on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn analyze_request(job: &SceneJob, config: &WorkflowConfig) -> NodeRequest {
    NodeRequest::Analyze(AnalyzeRequest {
        schema_version: SCHEMA_VERSION,
        scene_ref: job.scene_ref.clone(),
        thresholds: config.thresholds.clone(),
    })
}

fn call_specialist(
    transport: &dyn Transport,
    deployment: &Deployment,
    kind: SpecialistKind,
    request: &NodeRequest,
) -> Result<crate::agents::SpecialistReport, StageFailure> {
    let node_id = deployment.specialist_node(kind);
    let role = match kind {
        SpecialistKind::Wildfire => AgentRole::WildfireSpecialist,
        SpecialistKind::Flood => AgentRole::FloodSpecialist,
    };
    match transport.call(node_id, request) {
        Ok(NodeResponse::Specialist(report)) => Ok(report),
        Ok(_) => Err(StageFailure {
            role,
            message: format!("unexpected response kind from {node_id}"),
        }),
        Err(e) => Err(StageFailure {
            role,
            message: e.to_string(),
        }),
    }
}

fn run_specialists(
    transport: &dyn Transport,
    deployment: &Deployment,
    kinds: &[SpecialistKind],
    request: &NodeRequest,
    parallel: bool,
) -> (Vec<crate::agents::SpecialistReport>, Vec<StageFailure>) {
    let outcomes: Vec<Result<crate::agents::SpecialistReport, StageFailure>> =
        if parallel && kinds.len() > 1 {
            std::thread::scope(|scope| {
                let handles: Vec<_> = kinds
                    .iter()
                    .map(|&kind| {
                        scope.spawn(move || call_specialist(transport, deployment, kind, request))
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).collect()
            })
        } else {
            kinds
                .iter()
                .map(|&kind| call_specialist(transport, deployment, kind, request))
                .collect()
        };
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(r) => reports.push(r),
            Err(f) => failures.push(f),
        }
    }
    (reports, failures)
}

fn decide(
    transport: &dyn Transport,
    deployment: &Deployment,
    hypothesis: Option<HypothesisReport>,
    reports: Vec<crate::agents::SpecialistReport>,
) -> Result<FinalAlert, OrchestratorError> {
    let request = NodeRequest::Decide(DecideRequest {
        schema_version: SCHEMA_VERSION,
        hypothesis,
        specialist_reports: reports,
    });
    match transport.call(&deployment.decision, &request) {
        Ok(NodeResponse::Alert(alert)) => Ok(alert),
        Ok(_) => Err(OrchestratorError::UnexpectedResponse {
            node_id: deployment.decision.clone(),
        }),
        Err(e) => Err(OrchestratorError::Decision(e)),
    }
}

/// Processes one scene through the configured workflow.
///
/// Baseline: both specialists, then decision with no hypothesis. Routed: the
/// early-warning hypothesis picks the specialists. If the early-warning call
/// itself fails, the run degrades to the baseline specialist set so no scene
/// goes unanalyzed; the failure is recorded.
pub fn run_scene(
    transport: &dyn Transport,
    deployment: &Deployment,
    config: &WorkflowConfig,
    job: &SceneJob,
) -> Result<RunRecord, OrchestratorError> {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut timings = StageTimings::default();
    let request = analyze_request(job, config);

    let (hypothesis, kinds) = match config.mode {
        WorkflowMode::Baseline => (None, vec![SpecialistKind::Wildfire, SpecialistKind::Flood]),
        WorkflowMode::Routed => {
            let stage = Instant::now();
            let outcome = transport.call(&deployment.early_warning, &request);
            timings.early_warning_ms = stage.elapsed().as_secs_f64() * 1e3;
            match outcome {
                Ok(NodeResponse::Hypothesis(h)) => {
                    let kinds = crate::agents::route(h.predicted_event);
                    (Some(h), kinds)
                }
                Ok(_) => {
                    failures.push(StageFailure {
                        role: AgentRole::EarlyWarning,
                        message: "unexpected response kind".into(),
                    });
                    (None, vec![SpecialistKind::Wildfire, SpecialistKind::Flood])
                }
                Err(e) => {
                    failures.push(StageFailure {
                        role: AgentRole::EarlyWarning,
                        message: e.to_string(),
                    });
                    (None, vec![SpecialistKind::Wildfire, SpecialistKind::Flood])
                }
            }
        }
    };

    let stage = Instant::now();
    let (reports, mut specialist_failures) = run_specialists(
        transport,
        deployment,
        &kinds,
        &request,
        config.parallel_specialists,
    );
    timings.specialists_ms = stage.elapsed().as_secs_f64() * 1e3;
    failures.append(&mut specialist_failures);
    let specialists_run: Vec<SpecialistKind> = reports.iter().map(|r| r.specialist).collect();

    let stage = Instant::now();
    let alert = decide(transport, deployment, hypothesis, reports)?;
    timings.decision_ms = stage.elapsed().as_secs_f64() * 1e3;
    timings.total_ms = started.elapsed().as_secs_f64() * 1e3;

    Ok(RunRecord {
        schema_version: SCHEMA_VERSION,
        scene_ref: job.scene_ref.clone(),
        mode: config.mode,
        area_km2: job.area_km2,
        label: job.label,
        specialists_run,
        alert,
        failures,
        timings,
    })
}

/// A scene the dataset run could not complete.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SceneFailure {
    pub scene_ref: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRun {
    pub records: Vec<RunRecord>,
    pub failures: Vec<SceneFailure>,
}

/// Runs every job in order. A scene whose decision stage fails is recorded as
/// a failure; the rest still run. Output order matches job order.
pub fn run_dataset(
    transport: &dyn Transport,
    deployment: &Deployment,
    config: &WorkflowConfig,
    jobs: &[SceneJob],
) -> DatasetRun {
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for job in jobs {
        match run_scene(transport, deployment, config, job) {
            Ok(record) => records.push(record),
            Err(e) => failures.push(SceneFailure {
                scene_ref: job.scene_ref.clone(),
                message: e.to_string(),
            }),
        }
    }
    DatasetRun { records, failures }
}

/// Writes run records as JSON Lines, one record per line, in input order.
pub fn write_records_jsonl(records: &[RunRecord], path: &Path) -> Result<(), OrchestratorError> {
    let io_err = |source| OrchestratorError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut file = std::io::BufWriter::new(std::fs::File::create(path).map_err(io_err)?);
    for record in records {
        serde_json::to_writer(&mut file, record).map_err(|e| OrchestratorError::Io {
            path: path.display().to_string(),
            source: e.into(),
        })?;
        file.write_all(b"\n").map_err(io_err)?;
    }
    file.flush().map_err(io_err)
}

/// Reads run records written by [`write_records_jsonl`].
pub fn read_records_jsonl(path: &Path) -> Result<Vec<RunRecord>, OrchestratorError> {
    let data = std::fs::read_to_string(path).map_err(|e| OrchestratorError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    data.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            serde_json::from_str(l).map_err(|e| OrchestratorError::Io {
                path: path.display().to_string(),
                source: e.into(),
            })
        })
        .collect()
}
