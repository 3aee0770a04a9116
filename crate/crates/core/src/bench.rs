//! Benchmark analysis: per-scene speedups of the routed workflow over the
//! baseline, grouped statistics, and area-stratified correlation, plus report
//! emission.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::agents::EventType;
use crate::orchestrator::RunRecord;
use crate::transport::{
    DecisionNode, EarlyWarningNode, FloodSpecialistNode, InProcessTransport, InjectedDelay,
    SceneStore, WildfireSpecialistNode,
};

/// Injected processing costs that model heavyweight inference: a cheap
/// quicklook stage, tile-proportional specialists, and a trivial fusion
/// stage.
pub const EARLY_WARNING_DELAY_MS: f64 = 20.0;
pub const DECISION_DELAY_MS: f64 = 5.0;
pub const SPECIALIST_FIXED_DELAY_MS: f64 = 100.0;
pub const SPECIALIST_PER_TILE_DELAY_MS: f64 = 15.0;

/// Standard four-node in-process deployment with the cost-model delays.
pub fn cost_model_transport(store: std::sync::Arc<SceneStore>) -> InProcessTransport {
    let specialist_delay = InjectedDelay {
        fixed_ms: SPECIALIST_FIXED_DELAY_MS,
        per_tile_ms: SPECIALIST_PER_TILE_DELAY_MS,
    };
    let mut transport = InProcessTransport::new();
    transport.register(std::sync::Arc::new(
        EarlyWarningNode::new("early-warning", std::sync::Arc::clone(&store))
            .with_delay(InjectedDelay::fixed(EARLY_WARNING_DELAY_MS)),
    ));
    transport.register(std::sync::Arc::new(
        WildfireSpecialistNode::new("wildfire-specialist", std::sync::Arc::clone(&store))
            .with_delay(specialist_delay),
    ));
    transport.register(std::sync::Arc::new(
        FloodSpecialistNode::new("flood-specialist", std::sync::Arc::clone(&store))
            .with_delay(specialist_delay),
    ));
    transport.register(std::sync::Arc::new(
        DecisionNode::new("decision").with_delay(InjectedDelay::fixed(DECISION_DELAY_MS)),
    ));
    transport
}

/// Injected costs for the area-versus-speedup correlation study: a large
/// fixed early-warning stage (modeling a heavyweight quicklook model whose
/// cost does not depend on scene size) and specialists that cost purely per
/// tile. Under this model speed-up rises steeply with area inside both
/// strata, which is what the stratified correlation measures.
pub const CORRELATION_EARLY_WARNING_DELAY_MS: f64 = 250.0;
pub const CORRELATION_SPECIALIST_PER_TILE_DELAY_MS: f64 = 40.0;

/// Four-node in-process deployment with the correlation-study delays.
pub fn correlation_transport(store: std::sync::Arc<SceneStore>) -> InProcessTransport {
    let specialist_delay = InjectedDelay {
        fixed_ms: 0.0,
        per_tile_ms: CORRELATION_SPECIALIST_PER_TILE_DELAY_MS,
    };
    let mut transport = InProcessTransport::new();
    transport.register(std::sync::Arc::new(
        EarlyWarningNode::new("early-warning", std::sync::Arc::clone(&store))
            .with_delay(InjectedDelay::fixed(CORRELATION_EARLY_WARNING_DELAY_MS)),
    ));
    transport.register(std::sync::Arc::new(
        WildfireSpecialistNode::new("wildfire-specialist", std::sync::Arc::clone(&store))
            .with_delay(specialist_delay),
    ));
    transport.register(std::sync::Arc::new(
        FloodSpecialistNode::new("flood-specialist", std::sync::Arc::clone(&store))
            .with_delay(specialist_delay),
    ));
    transport.register(std::sync::Arc::new(
        DecisionNode::new("decision").with_delay(InjectedDelay::fixed(DECISION_DELAY_MS)),
    ));
    transport
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("no routed record for scene {scene_ref}")]
    UnmatchedScene { scene_ref: String },
    #[error("group {group:?} is empty")]
    EmptyGroup { group: String },
    #[error("report io failure on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// One scene's paired measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenePerf {
    pub scene_ref: String,
    pub label: EventType,
    pub area_km2: f64,
    pub baseline_ms: f64,
    pub routed_ms: f64,
    pub speedup: f64,
}

impl ScenePerf {
    pub fn has_event(&self) -> bool {
        self.label != EventType::None
    }

    /// Time reduction in percent; algebraically `100 * (1 - 1/speedup)`.
    pub fn reduction_percent(&self) -> f64 {
        100.0 * (1.0 - self.routed_ms / self.baseline_ms)
    }
}

/// Pairs baseline and routed records by scene reference.
pub fn compute_speedups(
    baseline: &[RunRecord],
    routed: &[RunRecord],
) -> Result<Vec<ScenePerf>, BenchError> {
    let routed_by_ref: BTreeMap<&str, &RunRecord> = routed
        .iter()
        .map(|r| (r.scene_ref.as_str(), r))
        .collect();
    baseline
        .iter()
        .map(|b| {
            let r = routed_by_ref
                .get(b.scene_ref.as_str())
                .ok_or_else(|| BenchError::UnmatchedScene {
                    scene_ref: b.scene_ref.clone(),
                })?;
            Ok(ScenePerf {
                scene_ref: b.scene_ref.clone(),
                label: b.label,
                area_km2: b.area_km2,
                baseline_ms: b.timings.total_ms,
                routed_ms: r.timings.total_ms,
                speedup: b.timings.total_ms / r.timings.total_ms,
            })
        })
        .collect()
}

/// Mean and sample standard deviation of one group of values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupStats {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation; 0 when `single_sample` is set.
    pub std: f64,
    pub min: f64,
    pub max: f64,
    /// A standard deviation of one sample is undefined; flagged rather than
    /// reported as 0 silently.
    pub single_sample: bool,
}

pub fn group_stats(values: &[f64]) -> Option<GroupStats> {
    if values.is_empty() {
        return None;
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let std = if n > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Some(GroupStats {
        n,
        mean,
        std,
        min,
        max,
        single_sample: n == 1,
    })
}

/// Pearson correlation coefficient; `None` when either side is constant or
/// the series is shorter than 2.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// Ranks with ties assigned their average rank.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation: Pearson on average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationPair {
    pub n: usize,
    pub pearson: Option<f64>,
    pub spearman: Option<f64>,
}

fn correlate(perf: &[&ScenePerf]) -> CorrelationPair {
    let areas: Vec<f64> = perf.iter().map(|p| p.area_km2).collect();
    let speedups: Vec<f64> = perf.iter().map(|p| p.speedup).collect();
    CorrelationPair {
        n: perf.len(),
        pearson: pearson(&areas, &speedups),
        spearman: spearman(&areas, &speedups),
    }
}

/// Area-vs-speedup correlation globally and within the event / no-event
/// strata. Mixing the strata can mask the within-group scaling, which is the
/// point of reporting both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratifiedCorrelation {
    pub global: CorrelationPair,
    pub no_event: CorrelationPair,
    pub event: CorrelationPair,
}

pub fn stratified_correlation(perf: &[ScenePerf]) -> StratifiedCorrelation {
    let all: Vec<&ScenePerf> = perf.iter().collect();
    let no_event: Vec<&ScenePerf> = perf.iter().filter(|p| !p.has_event()).collect();
    let event: Vec<&ScenePerf> = perf.iter().filter(|p| p.has_event()).collect();
    StratifiedCorrelation {
        global: correlate(&all),
        no_event: correlate(&no_event),
        event: correlate(&event),
    }
}

/// Published measurements the report prints beside the measured values for
/// comparison. Means with sample standard deviations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceTargets {
    pub no_event_speedup: (f64, f64),
    pub event_speedup: (f64, f64),
    pub no_event_reduction_percent: (f64, f64),
    pub event_reduction_percent: (f64, f64),
}

impl Default for ReferenceTargets {
    fn default() -> Self {
        Self {
            no_event_speedup: (4.78, 2.54),
            event_speedup: (1.3, 0.45),
            no_event_reduction_percent: (73.2, 14.1),
            event_reduction_percent: (13.5, 30.8),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub schema_version: u32,
    pub scene_count: usize,
    pub speedup_no_event: Option<GroupStats>,
    pub speedup_event: Option<GroupStats>,
    pub reduction_no_event: Option<GroupStats>,
    pub reduction_event: Option<GroupStats>,
    pub correlation: StratifiedCorrelation,
    pub reference: ReferenceTargets,
}

pub fn summarize(perf: &[ScenePerf]) -> BenchSummary {
    let speed = |has_event: bool| -> Vec<f64> {
        perf.iter()
            .filter(|p| p.has_event() == has_event)
            .map(|p| p.speedup)
            .collect()
    };
    let reduction = |has_event: bool| -> Vec<f64> {
        perf.iter()
            .filter(|p| p.has_event() == has_event)
            .map(|p| p.reduction_percent())
            .collect()
    };
    BenchSummary {
        schema_version: crate::SCHEMA_VERSION,
        scene_count: perf.len(),
        speedup_no_event: group_stats(&speed(false)),
        speedup_event: group_stats(&speed(true)),
        reduction_no_event: group_stats(&reduction(false)),
        reduction_event: group_stats(&reduction(true)),
        correlation: stratified_correlation(perf),
        reference: ReferenceTargets::default(),
    }
}

fn fmt_stats(stats: &Option<GroupStats>) -> String {
    match stats {
        Some(s) if s.single_sample => format!("{:.2} (n=1, std undefined)", s.mean),
        Some(s) => format!("{:.2} ± {:.2} (n={})", s.mean, s.std, s.n),
        None => "n/a (empty group)".to_string(),
    }
}

fn fmt_corr(pair: &CorrelationPair) -> String {
    let f = |v: Option<f64>| match v {
        Some(v) => format!("{v:.3}"),
        None => "n/a".to_string(),
    };
    format!(
        "pearson {} / spearman {} (n={})",
        f(pair.pearson),
        f(pair.spearman),
        pair.n
    )
}

/// Writes `report.json`, `report.txt`, and `plot_data.csv` into `dir`.
pub fn emit_report(
    perf: &[ScenePerf],
    summary: &BenchSummary,
    dir: &Path,
) -> Result<(), BenchError> {
    let io_err = |path: &Path| {
        let path = path.display().to_string();
        move |source| BenchError::Io {
            path: path.clone(),
            source,
        }
    };

    let json_path = dir.join("report.json");
    let payload = json!({
        "summary": summary,
        "scenes": perf,
    });
    std::fs::write(
        &json_path,
        serde_json::to_string_pretty(&payload).expect("summary serializes"),
    )
    .map_err(io_err(&json_path))?;

    let txt_path = dir.join("report.txt");
    let reference = &summary.reference;
    let text = format!(
        "Routed vs baseline workflow benchmark ({} scenes)\n\
         \n\
         Speed-up by event presence (measured vs reference):\n\
         \x20 no event : {}  [reference {:.2} ± {:.2}]\n\
         \x20 event    : {}  [reference {:.2} ± {:.2}]\n\
         \n\
         Processing-time reduction %:\n\
         \x20 no event : {}  [reference {:.1} ± {:.1}]\n\
         \x20 event    : {}  [reference {:.1} ± {:.1}]\n\
         \n\
         Area vs speed-up correlation:\n\
         \x20 global   : {}\n\
         \x20 no event : {}\n\
         \x20 event    : {}\n",
        summary.scene_count,
        fmt_stats(&summary.speedup_no_event),
        reference.no_event_speedup.0,
        reference.no_event_speedup.1,
        fmt_stats(&summary.speedup_event),
        reference.event_speedup.0,
        reference.event_speedup.1,
        fmt_stats(&summary.reduction_no_event),
        reference.no_event_reduction_percent.0,
        reference.no_event_reduction_percent.1,
        fmt_stats(&summary.reduction_event),
        reference.event_reduction_percent.0,
        reference.event_reduction_percent.1,
        fmt_corr(&summary.correlation.global),
        fmt_corr(&summary.correlation.no_event),
        fmt_corr(&summary.correlation.event),
    );
    std::fs::write(&txt_path, text).map_err(io_err(&txt_path))?;

    let csv_path = dir.join("plot_data.csv");
    let mut csv = std::io::BufWriter::new(
        std::fs::File::create(&csv_path).map_err(io_err(&csv_path))?,
    );
    writeln!(
        csv,
        "scene_ref,label,area_km2,baseline_ms,routed_ms,speedup,reduction_percent"
    )
    .map_err(io_err(&csv_path))?;
    for p in perf {
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            p.scene_ref,
            p.label.as_str(),
            p.area_km2,
            p.baseline_ms,
            p.routed_ms,
            p.speedup,
            p.reduction_percent()
        )
        .map_err(io_err(&csv_path))?;
    }
    csv.flush().map_err(io_err(&csv_path))
}
