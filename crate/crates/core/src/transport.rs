//! Agent nodes and the request/response transports that connect them.
//!
//! Each agent runs as a stateless node answering `POST /analyze` (early
//! warning and specialists) or `POST /decide` (decision) plus `GET /health`.
//! Scenes travel by reference: messages carry a scene id or a path relative
//! to a shared dataset root, never pixels. The same handlers run over an
//! in-process transport with optional seeded latency/drop injection, or over
//! real HTTP endpoints; both are behaviorally equivalent.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::agents::{
    decision_fuse, early_warning_assess, flood_specialist_analyze, wildfire_specialist_analyze,
    AgentRole, FinalAlert, HypothesisReport, ReasonerBackend, RuleReasoner, SpecialistReport,
};
use crate::http::{self, HttpError, HttpRequest, HttpResponse, HttpServer};
use crate::mask::BitMask;
use crate::scene::{load_permanent_water, load_scene, BandId, DatasetManifest, SceneBundle};
use crate::spectral::ThresholdConfig;
use crate::tile::{tile_segment, DEFAULT_STRIDE, TILE_SIZE};
use crate::tools::{NhiSwirSegmenter, SegmenterBackend, VvThresholdSegmenter};
use crate::SCHEMA_VERSION;

/// Where a node lives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    InProcess,
    Http(String),
}

/// Identity, role, and band requirements of one node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDescriptor {
    pub node_id: String,
    pub role: AgentRole,
    pub endpoint: Endpoint,
    pub capabilities: Vec<BandId>,
}

impl NodeDescriptor {
    pub fn in_process(node_id: impl Into<String>, role: AgentRole) -> Self {
        Self {
            node_id: node_id.into(),
            role,
            endpoint: Endpoint::InProcess,
            capabilities: default_capabilities(role),
        }
    }
}

fn default_capabilities(role: AgentRole) -> Vec<BandId> {
    match role {
        AgentRole::EarlyWarning => vec![BandId::B4, BandId::B3, BandId::B2],
        AgentRole::WildfireSpecialist => vec![
            BandId::B3,
            BandId::B4,
            BandId::B8,
            BandId::B11,
            BandId::B12,
        ],
        AgentRole::FloodSpecialist => vec![BandId::VV, BandId::VH],
        AgentRole::Decision => Vec::new(),
    }
}

/// Simulated network parameters. Deterministic for a given seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimNetConfig {
    /// Fixed one-way latency per link.
    pub latency_ms: f64,
    /// Uniform jitter added on top of the fixed latency.
    pub jitter_ms: f64,
    /// Probability that a message is dropped, surfacing as a timeout.
    pub drop_probability: f64,
    pub seed: u64,
}

impl Default for SimNetConfig {
    fn default() -> Self {
        Self {
            latency_ms: 0.0,
            jitter_ms: 0.0,
            drop_probability: 0.0,
            seed: 0,
        }
    }
}

/// Seeded latency/drop sampler shared by all links of one deployment.
pub struct SimNet {
    config: SimNetConfig,
    rng: Mutex<ChaCha8Rng>,
}

impl SimNet {
    pub fn new(config: SimNetConfig) -> Self {
        let rng = Mutex::new(ChaCha8Rng::seed_from_u64(config.seed));
        Self { config, rng }
    }

    /// Samples one delivery: one-way delay in ms and whether the message is
    /// dropped.
    pub fn sample(&self) -> (f64, bool) {
        let mut rng = self.rng.lock().expect("simnet rng");
        let jitter = if self.config.jitter_ms > 0.0 {
            rng.gen_range(0.0..=self.config.jitter_ms)
        } else {
            0.0
        };
        let dropped = self.config.drop_probability > 0.0
            && rng.gen_bool(self.config.drop_probability.min(1.0));
        (self.config.latency_ms + jitter, dropped)
    }
}

#[derive(Debug, Error)]
pub enum TransportError {
    #[error("unknown node {node_id}")]
    UnknownNode { node_id: String },
    #[error("timeout calling {node_id}")]
    Timeout { node_id: String },
    #[error("connection failure to {node_id}: {message}")]
    Connection { node_id: String, message: String },
    #[error("node {node_id} error {code}: {message}")]
    Remote {
        node_id: String,
        code: String,
        message: String,
    },
}

/// Structured error payload a node returns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    pub node_id: String,
}

#[derive(Debug, Error)]
#[error("{code}: {message}")]
pub struct NodeError {
    pub code: &'static str,
    pub message: String,
}

impl NodeError {
    fn new(code: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalyzeRequest {
    pub schema_version: u32,
    pub scene_ref: String,
    #[serde(default)]
    pub thresholds: Option<ThresholdConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecideRequest {
    pub schema_version: u32,
    /// Absent in baseline mode, where no early-warning stage runs.
    #[serde(default)]
    pub hypothesis: Option<HypothesisReport>,
    pub specialist_reports: Vec<SpecialistReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HealthInfo {
    pub node_id: String,
    pub role: AgentRole,
    pub schema_version: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeRequest {
    Analyze(AnalyzeRequest),
    Decide(DecideRequest),
    Health,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeResponse {
    Hypothesis(HypothesisReport),
    Specialist(SpecialistReport),
    Alert(FinalAlert),
    Health(HealthInfo),
}

/// Resolves scene references for the nodes of one deployment.
pub enum SceneStore {
    /// Scenes on disk under a shared dataset root, optionally indexed by a
    /// manifest. Path references outside the root are rejected.
    Disk {
        root: PathBuf,
        manifest: Option<DatasetManifest>,
    },
    /// In-memory scenes, used by tests and synthetic benchmarks.
    Memory {
        scenes: BTreeMap<String, Arc<SceneBundle>>,
        permanent_water: BTreeMap<String, BitMask>,
    },
}

impl SceneStore {
    pub fn disk(root: impl Into<PathBuf>, manifest: Option<DatasetManifest>) -> Self {
        SceneStore::Disk {
            root: root.into(),
            manifest,
        }
    }

    pub fn memory() -> Self {
        SceneStore::Memory {
            scenes: BTreeMap::new(),
            permanent_water: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, scene: SceneBundle, permanent: Option<BitMask>) {
        if let SceneStore::Memory {
            scenes,
            permanent_water,
        } = self
        {
            if let Some(mask) = permanent {
                permanent_water.insert(scene.scene_id.clone(), mask);
            }
            scenes.insert(scene.scene_id.clone(), Arc::new(scene));
        }
    }

    fn resolve_dir(&self, scene_ref: &str) -> Result<Option<PathBuf>, NodeError> {
        let SceneStore::Disk { root, manifest } = self else {
            return Ok(None);
        };
        let rel = manifest
            .as_ref()
            .and_then(|m| m.find(scene_ref))
            .map(|e| e.path.clone())
            .unwrap_or_else(|| scene_ref.to_string());
        let dir = root.join(&rel);
        // Confinement: the resolved directory must stay under the root.
        let canonical_root = root
            .canonicalize()
            .map_err(|e| NodeError::new("unknown-scene", format!("dataset root: {e}")))?;
        let canonical = dir.canonicalize().map_err(|_| {
            NodeError::new("unknown-scene", format!("scene {scene_ref:?} not found"))
        })?;
        if !canonical.starts_with(&canonical_root) {
            return Err(NodeError::new(
                "unknown-scene",
                format!("scene reference {scene_ref:?} escapes the dataset root"),
            ));
        }
        Ok(Some(canonical))
    }

    /// Resolves a manifest scene id or a root-relative path to a loaded
    /// scene.
    pub fn resolve(&self, scene_ref: &str) -> Result<Arc<SceneBundle>, NodeError> {
        match self {
            SceneStore::Memory { scenes, .. } => scenes.get(scene_ref).cloned().ok_or_else(|| {
                NodeError::new("unknown-scene", format!("scene {scene_ref:?} not found"))
            }),
            SceneStore::Disk { .. } => {
                let dir = self.resolve_dir(scene_ref)?.expect("disk store");
                load_scene(&dir)
                    .map(Arc::new)
                    .map_err(|e| NodeError::new("unknown-scene", e.to_string()))
            }
        }
    }

    /// Permanent-water reference mask for a scene, when one exists.
    pub fn permanent_water(&self, scene_ref: &str) -> Option<BitMask> {
        match self {
            SceneStore::Memory {
                permanent_water, ..
            } => permanent_water.get(scene_ref).cloned(),
            SceneStore::Disk { .. } => {
                let dir = self.resolve_dir(scene_ref).ok().flatten()?;
                load_permanent_water(&dir).ok().flatten()
            }
        }
    }
}

/// Resolves a scene reference against a store.
pub fn scene_reference_resolve(
    store: &SceneStore,
    scene_ref: &str,
) -> Result<Arc<SceneBundle>, NodeError> {
    store.resolve(scene_ref)
}

/// Artificial processing cost injected into a node handler, used by the
/// benchmark to model heavyweight inference.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct InjectedDelay {
    pub fixed_ms: f64,
    pub per_tile_ms: f64,
}

impl InjectedDelay {
    pub fn fixed(fixed_ms: f64) -> Self {
        Self {
            fixed_ms,
            per_tile_ms: 0.0,
        }
    }

    fn apply(&self, scene: Option<&SceneBundle>) {
        let mut total = self.fixed_ms;
        if self.per_tile_ms > 0.0 {
            if let Some(scene) = scene {
                let tiles = tile_segment(scene.width(), scene.height(), TILE_SIZE, DEFAULT_STRIDE)
                    .map(|w| w.len())
                    .unwrap_or(0);
                total += self.per_tile_ms * tiles as f64;
            }
        }
        if total > 0.0 {
            std::thread::sleep(Duration::from_secs_f64(total / 1e3));
        }
    }
}

/// A stateless request handler for one agent role.
pub trait AgentNode: Send + Sync {
    fn descriptor(&self) -> &NodeDescriptor;

    fn handle(&self, request: &NodeRequest) -> Result<NodeResponse, NodeError>;

    fn health(&self) -> HealthInfo {
        let d = self.descriptor();
        HealthInfo {
            node_id: d.node_id.clone(),
            role: d.role,
            schema_version: SCHEMA_VERSION,
        }
    }
}

pub struct EarlyWarningNode {
    descriptor: NodeDescriptor,
    store: Arc<SceneStore>,
    reasoner: Arc<dyn ReasonerBackend>,
    delay: InjectedDelay,
}

impl EarlyWarningNode {
    pub fn new(node_id: &str, store: Arc<SceneStore>) -> Self {
        Self {
            descriptor: NodeDescriptor::in_process(node_id, AgentRole::EarlyWarning),
            store,
            reasoner: Arc::new(RuleReasoner::default()),
            delay: InjectedDelay::default(),
        }
    }

    pub fn with_reasoner(mut self, reasoner: Arc<dyn ReasonerBackend>) -> Self {
        self.reasoner = reasoner;
        self
    }

    pub fn with_delay(mut self, delay: InjectedDelay) -> Self {
        self.delay = delay;
        self
    }
}

impl AgentNode for EarlyWarningNode {
    fn descriptor(&self) -> &NodeDescriptor {
        &self.descriptor
    }

    fn handle(&self, request: &NodeRequest) -> Result<NodeResponse, NodeError> {
        match request {
            NodeRequest::Analyze(req) => {
                let scene = self.store.resolve(&req.scene_ref)?;
                self.delay.apply(Some(&scene));
                let report = early_warning_assess(&scene, self.reasoner.as_ref())
                    .map_err(|e| NodeError::new("missing-band", e.to_string()))?;
                Ok(NodeResponse::Hypothesis(report))
            }
            NodeRequest::Health => Ok(NodeResponse::Health(self.health())),
            NodeRequest::Decide(_) => Err(NodeError::new(
                "unsupported-request",
                "early warning node does not decide",
            )),
        }
    }
}

pub struct WildfireSpecialistNode {
    descriptor: NodeDescriptor,
    store: Arc<SceneStore>,
    thresholds: ThresholdConfig,
    backend: Arc<dyn SegmenterBackend>,
    reasoner: Arc<dyn ReasonerBackend>,
    delay: InjectedDelay,
}

impl WildfireSpecialistNode {
    pub fn new(node_id: &str, store: Arc<SceneStore>) -> Self {
        Self {
            descriptor: NodeDescriptor::in_process(node_id, AgentRole::WildfireSpecialist),
            store,
            thresholds: ThresholdConfig::default(),
            backend: Arc::new(NhiSwirSegmenter::default()),
            reasoner: Arc::new(RuleReasoner::default()),
            delay: InjectedDelay::default(),
        }
    }

    pub fn with_delay(mut self, delay: InjectedDelay) -> Self {
        self.delay = delay;
        self
    }

    pub fn with_thresholds(mut self, thresholds: ThresholdConfig) -> Self {
        self.thresholds = thresholds;
        self
    }
}

impl AgentNode for WildfireSpecialistNode {
    fn descriptor(&self) -> &NodeDescriptor {
        &self.descriptor
    }

    fn handle(&self, request: &NodeRequest) -> Result<NodeResponse, NodeError> {
        match request {
            NodeRequest::Analyze(req) => {
                let scene = self.store.resolve(&req.scene_ref)?;
                self.delay.apply(Some(&scene));
                let cfg = req.thresholds.clone().unwrap_or_else(|| self.thresholds.clone());
                let report = wildfire_specialist_analyze(
                    &scene,
                    &cfg,
                    self.backend.as_ref(),
                    self.reasoner.as_ref(),
                );
                Ok(NodeResponse::Specialist(report))
            }
            NodeRequest::Health => Ok(NodeResponse::Health(self.health())),
            NodeRequest::Decide(_) => Err(NodeError::new(
                "unsupported-request",
                "specialist node does not decide",
            )),
        }
    }
}

pub struct FloodSpecialistNode {
    descriptor: NodeDescriptor,
    store: Arc<SceneStore>,
    thresholds: ThresholdConfig,
    reasoner: Arc<dyn ReasonerBackend>,
    delay: InjectedDelay,
}

impl FloodSpecialistNode {
    pub fn new(node_id: &str, store: Arc<SceneStore>) -> Self {
        Self {
            descriptor: NodeDescriptor::in_process(node_id, AgentRole::FloodSpecialist),
            store,
            thresholds: ThresholdConfig::default(),
            reasoner: Arc::new(RuleReasoner::default()),
            delay: InjectedDelay::default(),
        }
    }

    pub fn with_delay(mut self, delay: InjectedDelay) -> Self {
        self.delay = delay;
        self
    }

    pub fn with_thresholds(mut self, thresholds: ThresholdConfig) -> Self {
        self.thresholds = thresholds;
        self
    }
}

impl AgentNode for FloodSpecialistNode {
    fn descriptor(&self) -> &NodeDescriptor {
        &self.descriptor
    }

    fn handle(&self, request: &NodeRequest) -> Result<NodeResponse, NodeError> {
        match request {
            NodeRequest::Analyze(req) => {
                let scene = self.store.resolve(&req.scene_ref)?;
                self.delay.apply(Some(&scene));
                let cfg = req.thresholds.clone().unwrap_or_else(|| self.thresholds.clone());
                // The 3-class backend needs the scene's permanent-water
                // reference, so it is built per request.
                let backend = VvThresholdSegmenter::with_permanent_water(
                    self.store.permanent_water(&req.scene_ref),
                );
                let report = flood_specialist_analyze(
                    &scene,
                    &cfg,
                    &backend,
                    self.reasoner.as_ref(),
                );
                Ok(NodeResponse::Specialist(report))
            }
            NodeRequest::Health => Ok(NodeResponse::Health(self.health())),
            NodeRequest::Decide(_) => Err(NodeError::new(
                "unsupported-request",
                "specialist node does not decide",
            )),
        }
    }
}

pub struct DecisionNode {
    descriptor: NodeDescriptor,
    reasoner: Arc<dyn ReasonerBackend>,
    delay: InjectedDelay,
}

impl DecisionNode {
    pub fn new(node_id: &str) -> Self {
        Self {
            descriptor: NodeDescriptor::in_process(node_id, AgentRole::Decision),
            reasoner: Arc::new(RuleReasoner::default()),
            delay: InjectedDelay::default(),
        }
    }

    pub fn with_delay(mut self, delay: InjectedDelay) -> Self {
        self.delay = delay;
        self
    }
}

impl AgentNode for DecisionNode {
    fn descriptor(&self) -> &NodeDescriptor {
        &self.descriptor
    }

    fn handle(&self, request: &NodeRequest) -> Result<NodeResponse, NodeError> {
        match request {
            NodeRequest::Decide(req) => {
                self.delay.apply(None);
                let alert = decision_fuse(
                    req.hypothesis.as_ref(),
                    &req.specialist_reports,
                    self.reasoner.as_ref(),
                );
                Ok(NodeResponse::Alert(alert))
            }
            NodeRequest::Health => Ok(NodeResponse::Health(self.health())),
            NodeRequest::Analyze(_) => Err(NodeError::new(
                "unsupported-request",
                "decision node does not analyze",
            )),
        }
    }
}

/// Synchronous request/response access to a deployment of nodes.
pub trait Transport: Send + Sync {
    fn call(&self, node_id: &str, request: &NodeRequest) -> Result<NodeResponse, TransportError>;
}

/// All nodes in one process, optionally behind a simulated network.
pub struct InProcessTransport {
    nodes: BTreeMap<String, Arc<dyn AgentNode>>,
    simnet: Option<SimNet>,
}

impl InProcessTransport {
    pub fn new() -> Self {
        Self {
            nodes: BTreeMap::new(),
            simnet: None,
        }
    }

    pub fn with_simnet(mut self, config: SimNetConfig) -> Self {
        self.simnet = Some(SimNet::new(config));
        self
    }

    pub fn register(&mut self, node: Arc<dyn AgentNode>) {
        self.nodes
            .insert(node.descriptor().node_id.clone(), node);
    }
}

impl Default for InProcessTransport {
    fn default() -> Self {
        Self::new()
    }
}

impl Transport for InProcessTransport {
    fn call(&self, node_id: &str, request: &NodeRequest) -> Result<NodeResponse, TransportError> {
        let node = self
            .nodes
            .get(node_id)
            .ok_or_else(|| TransportError::UnknownNode {
                node_id: node_id.to_string(),
            })?;
        if let Some(simnet) = &self.simnet {
            let (delay, dropped) = simnet.sample();
            std::thread::sleep(Duration::from_secs_f64(delay / 1e3));
            if dropped {
                return Err(TransportError::Timeout {
                    node_id: node_id.to_string(),
                });
            }
        }
        let result = node.handle(request);
        if let Some(simnet) = &self.simnet {
            let (delay, dropped) = simnet.sample();
            std::thread::sleep(Duration::from_secs_f64(delay / 1e3));
            if dropped {
                return Err(TransportError::Timeout {
                    node_id: node_id.to_string(),
                });
            }
        }
        result.map_err(|e| TransportError::Remote {
            node_id: node_id.to_string(),
            code: e.code.to_string(),
            message: e.message,
        })
    }
}

/// Serves a node over HTTP. `addr` like `127.0.0.1:0`.
pub fn serve_node(node: Arc<dyn AgentNode>, addr: &str) -> Result<HttpServer, HttpError> {
    let node_id = node.descriptor().node_id.clone();
    HttpServer::serve(addr, move |req: HttpRequest| {
        let outcome = match (req.method.as_str(), req.path.as_str()) {
            ("GET", "/health") => Ok(NodeResponse::Health(node.health())),
            ("POST", "/analyze") => match serde_json::from_slice::<AnalyzeRequest>(&req.body) {
                Ok(body) => node.handle(&NodeRequest::Analyze(body)),
                Err(e) => Err(NodeError::new(
                    "schema-violation",
                    format!("invalid analyze request: {e}"),
                )),
            },
            ("POST", "/decide") => match serde_json::from_slice::<DecideRequest>(&req.body) {
                Ok(body) => node.handle(&NodeRequest::Decide(body)),
                Err(e) => Err(NodeError::new(
                    "schema-violation",
                    format!("invalid decide request: {e}"),
                )),
            },
            _ => Err(NodeError::new(
                "not-found",
                format!("no route {} {}", req.method, req.path),
            )),
        };
        match outcome {
            Ok(NodeResponse::Health(h)) => {
                HttpResponse::json(200, serde_json::to_vec(&h).unwrap())
            }
            Ok(NodeResponse::Hypothesis(h)) => {
                HttpResponse::json(200, serde_json::to_vec(&h).unwrap())
            }
            Ok(NodeResponse::Specialist(s)) => {
                HttpResponse::json(200, serde_json::to_vec(&s).unwrap())
            }
            Ok(NodeResponse::Alert(a)) => HttpResponse::json(200, serde_json::to_vec(&a).unwrap()),
            Err(e) => {
                let status = if e.code == "not-found" { 404 } else { 400 };
                let body = ErrorBody {
                    code: e.code.to_string(),
                    message: e.message,
                    node_id: node_id.clone(),
                };
                HttpResponse::json(status, serde_json::to_vec(&body).unwrap())
            }
        }
    })
}

/// Client side of the HTTP transport: node ids mapped to base URLs.
pub struct HttpTransport {
    endpoints: BTreeMap<String, (AgentRole, String)>,
    pub timeout: Duration,
}

impl HttpTransport {
    pub fn new() -> Self {
        Self {
            endpoints: BTreeMap::new(),
            timeout: Duration::from_secs(30),
        }
    }

    pub fn register(&mut self, node_id: &str, role: AgentRole, base_url: &str) {
        self.endpoints.insert(
            node_id.to_string(),
            (role, base_url.trim_end_matches('/').to_string()),
        );
    }
}

impl Default for HttpTransport {
    fn default() -> Self {
        Self::new()
    }
}

impl Transport for HttpTransport {
    fn call(&self, node_id: &str, request: &NodeRequest) -> Result<NodeResponse, TransportError> {
        let (role, base) = self
            .endpoints
            .get(node_id)
            .ok_or_else(|| TransportError::UnknownNode {
                node_id: node_id.to_string(),
            })?;
        let (method, path, body) = match request {
            NodeRequest::Health => ("GET", "/health", json!({})),
            NodeRequest::Analyze(req) => (
                "POST",
                "/analyze",
                serde_json::to_value(req).expect("request serializes"),
            ),
            NodeRequest::Decide(req) => (
                "POST",
                "/decide",
                serde_json::to_value(req).expect("request serializes"),
            ),
        };
        let url = format!("{base}{path}");
        let response = http::http_request(
            method,
            &url,
            &serde_json::to_vec(&body).unwrap(),
            self.timeout,
        )
        .map_err(|e| match e {
            HttpError::Timeout => TransportError::Timeout {
                node_id: node_id.to_string(),
            },
            other => TransportError::Connection {
                node_id: node_id.to_string(),
                message: other.to_string(),
            },
        })?;
        if response.status != 200 {
            let err: ErrorBody = serde_json::from_slice(&response.body).unwrap_or(ErrorBody {
                code: "remote-error".into(),
                message: format!("status {}", response.status),
                node_id: node_id.to_string(),
            });
            return Err(TransportError::Remote {
                node_id: err.node_id,
                code: err.code,
                message: err.message,
            });
        }
        let parse = |node_id: &str, e: serde_json::Error| TransportError::Remote {
            node_id: node_id.to_string(),
            code: "schema-violation".into(),
            message: e.to_string(),
        };
        match request {
            NodeRequest::Health => serde_json::from_slice(&response.body)
                .map(NodeResponse::Health)
                .map_err(|e| parse(node_id, e)),
            NodeRequest::Decide(_) => serde_json::from_slice(&response.body)
                .map(NodeResponse::Alert)
                .map_err(|e| parse(node_id, e)),
            NodeRequest::Analyze(_) => match role {
                AgentRole::EarlyWarning => serde_json::from_slice(&response.body)
                    .map(NodeResponse::Hypothesis)
                    .map_err(|e| parse(node_id, e)),
                _ => serde_json::from_slice(&response.body)
                    .map(NodeResponse::Specialist)
                    .map_err(|e| parse(node_id, e)),
            },
        }
    }
}

/// Builds the standard four-node in-process deployment over a store.
pub fn standard_in_process(
    store: Arc<SceneStore>,
    thresholds: &ThresholdConfig,
) -> InProcessTransport {
    let mut transport = InProcessTransport::new();
    transport.register(Arc::new(
        EarlyWarningNode::new("early-warning", Arc::clone(&store)),
    ));
    transport.register(Arc::new(
        WildfireSpecialistNode::new("wildfire-specialist", Arc::clone(&store))
            .with_thresholds(thresholds.clone()),
    ));
    transport.register(Arc::new(
        FloodSpecialistNode::new("flood-specialist", Arc::clone(&store))
            .with_thresholds(thresholds.clone()),
    ));
    transport.register(Arc::new(DecisionNode::new("decision")));
    transport
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{make_synthetic_scene, RegionKind, SyntheticSpec};

    fn memory_store_with(specs: &[SyntheticSpec]) -> Arc<SceneStore> {
        let mut store = SceneStore::memory();
        for spec in specs {
            store.insert(make_synthetic_scene(spec).unwrap(), None);
        }
        Arc::new(store)
    }

    #[test]
    fn in_process_analyze_round_trip() {
        let spec = SyntheticSpec::new("s1", 64, 64, 1).with_region(RegionKind::Fire, 5, 5, 16, 16);
        let store = memory_store_with(&[spec]);
        let transport = standard_in_process(store, &ThresholdConfig::default());
        let req = NodeRequest::Analyze(AnalyzeRequest {
            schema_version: SCHEMA_VERSION,
            scene_ref: "s1".into(),
            thresholds: None,
        });
        match transport.call("early-warning", &req).unwrap() {
            NodeResponse::Hypothesis(h) => {
                assert_eq!(h.predicted_event, crate::agents::EventType::Wildfire)
            }
            other => panic!("unexpected response {other:?}"),
        }
    }

    #[test]
    fn unknown_scene_is_remote_error() {
        let store = memory_store_with(&[]);
        let transport = standard_in_process(store, &ThresholdConfig::default());
        let req = NodeRequest::Analyze(AnalyzeRequest {
            schema_version: SCHEMA_VERSION,
            scene_ref: "ghost".into(),
            thresholds: None,
        });
        match transport.call("early-warning", &req) {
            Err(TransportError::Remote { code, .. }) => assert_eq!(code, "unknown-scene"),
            other => panic!("expected remote error, got {other:?}"),
        }
    }

    #[test]
    fn simnet_fixed_latency_bounds_round_trip() {
        let store = memory_store_with(&[SyntheticSpec::new("s", 32, 32, 2)]);
        let transport = standard_in_process(store, &ThresholdConfig::default()).with_simnet(
            SimNetConfig {
                latency_ms: 50.0,
                ..Default::default()
            },
        );
        let started = std::time::Instant::now();
        transport
            .call(
                "early-warning",
                &NodeRequest::Analyze(AnalyzeRequest {
                    schema_version: SCHEMA_VERSION,
                    scene_ref: "s".into(),
                    thresholds: None,
                }),
            )
            .unwrap();
        assert!(started.elapsed() >= Duration::from_millis(100));
    }

    #[test]
    fn drop_probability_one_times_out() {
        let store = memory_store_with(&[SyntheticSpec::new("s", 32, 32, 3)]);
        let transport = standard_in_process(store, &ThresholdConfig::default()).with_simnet(
            SimNetConfig {
                drop_probability: 1.0,
                ..Default::default()
            },
        );
        assert!(matches!(
            transport.call("early-warning", &NodeRequest::Health),
            Err(TransportError::Timeout { .. })
        ));
    }

    #[test]
    fn simnet_same_seed_same_sequence() {
        let config = SimNetConfig {
            latency_ms: 5.0,
            jitter_ms: 10.0,
            drop_probability: 0.3,
            seed: 42,
        };
        let a = SimNet::new(config.clone());
        let b = SimNet::new(config);
        let seq_a: Vec<(u64, bool)> = (0..50)
            .map(|_| {
                let (d, drop) = a.sample();
                ((d * 1000.0) as u64, drop)
            })
            .collect();
        let seq_b: Vec<(u64, bool)> = (0..50)
            .map(|_| {
                let (d, drop) = b.sample();
                ((d * 1000.0) as u64, drop)
            })
            .collect();
        assert_eq!(seq_a, seq_b);
    }

    #[test]
    fn disk_store_rejects_escaping_reference() {
        let dir = tempfile::TempDir::new().unwrap();
        let root = dir.path().join("data");
        std::fs::create_dir_all(&root).unwrap();
        let scene = make_synthetic_scene(&SyntheticSpec::new("s", 16, 16, 4)).unwrap();
        crate::scene::save_scene(&scene, &dir.path().join("outside")).unwrap();
        let store = SceneStore::disk(&root, None);
        let err = store.resolve("../outside").unwrap_err();
        assert_eq!(err.code, "unknown-scene");
    }

    #[test]
    fn http_node_health_and_analyze() {
        let spec = SyntheticSpec::new("s1", 64, 64, 5).with_region(RegionKind::Flood, 0, 0, 40, 40);
        let store = memory_store_with(&[spec]);
        let node: Arc<dyn AgentNode> = Arc::new(EarlyWarningNode::new("ew-1", store));
        let server = serve_node(Arc::clone(&node), "127.0.0.1:0").unwrap();

        let mut transport = HttpTransport::new();
        transport.register("ew-1", AgentRole::EarlyWarning, &format!("http://{}", server.addr));

        match transport.call("ew-1", &NodeRequest::Health).unwrap() {
            NodeResponse::Health(h) => {
                assert_eq!(h.role, AgentRole::EarlyWarning);
                assert_eq!(h.schema_version, SCHEMA_VERSION);
            }
            other => panic!("unexpected {other:?}"),
        }

        let req = NodeRequest::Analyze(AnalyzeRequest {
            schema_version: SCHEMA_VERSION,
            scene_ref: "s1".into(),
            thresholds: None,
        });
        match transport.call("ew-1", &req).unwrap() {
            NodeResponse::Hypothesis(h) => {
                assert_eq!(h.predicted_event, crate::agents::EventType::Flood)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn http_malformed_body_gets_schema_diagnostic() {
        let store = memory_store_with(&[]);
        let node: Arc<dyn AgentNode> = Arc::new(EarlyWarningNode::new("ew-2", store));
        let server = serve_node(node, "127.0.0.1:0").unwrap();
        let url = format!("http://{}/analyze", server.addr);
        let resp =
            http::http_request("POST", &url, b"{\"nope\":1}", Duration::from_secs(2)).unwrap();
        assert_eq!(resp.status, 400);
        let err: ErrorBody = serde_json::from_slice(&resp.body).unwrap();
        assert_eq!(err.code, "schema-violation");
        assert_eq!(err.node_id, "ew-2");
    }
}
