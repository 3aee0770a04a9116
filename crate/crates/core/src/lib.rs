//! Event-driven multi-agent pipeline for onboard Earth-observation hazard
//! detection.
//!
//! The pipeline is organized in three tiers: an early-warning stage produces a
//! fast hazard hypothesis from cheap full-scene statistics, the hypothesis
//! routes the scene to wildfire and/or flood specialist agents built on
//! spectral-index and segmentation tools, and a decision stage fuses the
//! hypothesis with the specialist reports into a final alert. A benchmark
//! harness compares the routed configuration against a baseline that always
//! runs every specialist.

pub mod agents;
pub mod bench;
pub mod http;
pub mod mask;
pub mod orchestrator;
pub mod scene;
pub mod schema;
pub mod spectral;
pub mod synth;
pub mod tile;
pub mod tools;
pub mod transport;

pub use agents::{
    decision_fuse, early_warning_assess, flood_specialist_analyze, route,
    wildfire_specialist_analyze, AgentRole, Classification, Decision, EventType, FinalAlert,
    HypothesisReport, ReasonerBackend, RuleReasoner, SpecialistKind, SpecialistReport,
};
pub use mask::{connected_components, mask_area_km2, BitMask};
pub use scene::{
    load_scene, save_scene, scene_area_km2, BandId, BandRaster, DatasetManifest, SceneBundle,
};
pub use spectral::{
    compute_bai, compute_mndwi, compute_nhi_swir, compute_nhi_swnir, water_mask, IndexKind,
    IndexRaster, ThresholdConfig,
};
pub use synth::{make_synthetic_scene, synthetic_permanent_water, Region, RegionKind, SyntheticSpec};
pub use tile::{merge_tile_masks, tile_segment, TileWindow};
pub use tools::{
    tool_burned_area, tool_index_fire, tool_ml_fire, tool_ml_flood, SegmenterBackend, ToolName,
    ToolResult,
};

/// Version stamped into every serialized message and report.
pub const SCHEMA_VERSION: u32 = 1;
