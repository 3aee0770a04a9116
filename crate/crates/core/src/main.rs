//! Command-line front end: dataset synthesis, workflow runs, benchmark
//! statistics, report emission, and serving a node over HTTP.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 invalid usage.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use eowatch::agents::AgentRole;
use eowatch::bench;
use eowatch::orchestrator::{
    read_records_jsonl, run_dataset, write_records_jsonl, Deployment, SceneJob, WorkflowConfig,
    WorkflowMode,
};
use eowatch::scene::{
    load_scene, save_permanent_water, save_scene, scene_area_km2, DatasetManifest, ManifestEntry,
};
use eowatch::synth::{benchmark_dataset, make_synthetic_scene, synthetic_permanent_water, RegionKind};
use eowatch::transport::{
    serve_node, standard_in_process, AgentNode, DecisionNode, EarlyWarningNode,
    FloodSpecialistNode, SceneStore, WildfireSpecialistNode,
};
use eowatch::ThresholdConfig;

/// Environment variable overriding `--data` when the flag is absent.
const DATA_ROOT_ENV: &str = "EOWATCH_DATA_ROOT";
const MANIFEST_FILE: &str = "manifest.json";

#[derive(Parser)]
#[command(
    name = "eowatch",
    about = "Hierarchical multi-agent hazard detection pipeline",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DataArg {
    /// Dataset root directory; falls back to $EOWATCH_DATA_ROOT.
    #[arg(long)]
    data: Option<PathBuf>,
}

impl DataArg {
    fn resolve(&self) -> Result<PathBuf, String> {
        self.data
            .clone()
            .or_else(|| std::env::var_os(DATA_ROOT_ENV).map(PathBuf::from))
            .ok_or_else(|| format!("no dataset root: pass --data or set {DATA_ROOT_ENV}"))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Baseline,
    Routed,
}

#[derive(Clone, Copy, ValueEnum)]
enum RoleArg {
    EarlyWarning,
    Wildfire,
    Flood,
    Decision,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the standard synthetic benchmark dataset.
    Synth {
        /// Output directory; created if needed.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Run a workflow over every scene of a dataset and write JSONL records.
    Run {
        #[command(flatten)]
        data: DataArg,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Output records file.
        #[arg(long)]
        out: PathBuf,
        /// Run independent specialist calls concurrently.
        #[arg(long)]
        parallel: bool,
        /// Inject the benchmark cost-model delays into every node.
        #[arg(long)]
        cost_model: bool,
    },
    /// Summarize paired baseline/routed records as JSON on stdout.
    Stats {
        #[arg(long)]
        baseline: PathBuf,
        #[arg(long)]
        routed: PathBuf,
    },
    /// Emit report.json, report.txt, and plot_data.csv from paired records.
    Report {
        #[arg(long)]
        baseline: PathBuf,
        #[arg(long)]
        routed: PathBuf,
        /// Output directory; created if needed.
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve one agent node over HTTP until interrupted.
    Serve {
        #[command(flatten)]
        data: DataArg,
        #[arg(long, value_enum)]
        role: RoleArg,
        #[arg(long, default_value = "127.0.0.1:0")]
        addr: String,
        /// Node id reported in health and error payloads.
        #[arg(long)]
        node_id: Option<String>,
    },
}

fn cmd_synth(out: &Path, seed: u64) -> Result<(), String> {
    std::fs::create_dir_all(out).map_err(|e| format!("create {}: {e}", out.display()))?;
    let mut entries = Vec::new();
    for spec in benchmark_dataset(seed) {
        let scene = make_synthetic_scene(&spec).map_err(|e| e.to_string())?;
        let dir = out.join(&spec.scene_id);
        save_scene(&scene, &dir).map_err(|e| e.to_string())?;
        if spec
            .regions
            .iter()
            .any(|r| r.kind == RegionKind::PermanentWater)
        {
            save_permanent_water(&dir, &synthetic_permanent_water(&spec))
                .map_err(|e| e.to_string())?;
        }
        entries.push(ManifestEntry {
            scene_id: spec.scene_id.clone(),
            path: spec.scene_id.clone(),
            label: spec.label,
        });
    }
    let manifest = DatasetManifest::new(entries).map_err(|e| e.to_string())?;
    manifest
        .save(&out.join(MANIFEST_FILE))
        .map_err(|e| e.to_string())?;
    println!(
        "wrote {} scenes and {MANIFEST_FILE} to {}",
        manifest.entries.len(),
        out.display()
    );
    Ok(())
}

fn load_jobs(root: &Path, manifest: &DatasetManifest) -> Result<Vec<SceneJob>, String> {
    manifest
        .entries
        .iter()
        .map(|e| {
            let scene = load_scene(&root.join(&e.path)).map_err(|err| err.to_string())?;
            Ok(SceneJob {
                scene_ref: e.scene_id.clone(),
                area_km2: scene_area_km2(&scene),
                label: e.label,
            })
        })
        .collect()
}

fn cmd_run(
    data: &DataArg,
    mode: ModeArg,
    out: &Path,
    parallel: bool,
    cost_model: bool,
) -> Result<(), String> {
    let root = data.resolve()?;
    let manifest = DatasetManifest::load(&root.join(MANIFEST_FILE)).map_err(|e| e.to_string())?;
    let jobs = load_jobs(&root, &manifest)?;
    let store = Arc::new(SceneStore::disk(&root, Some(manifest)));
    let transport = if cost_model {
        bench::cost_model_transport(store)
    } else {
        standard_in_process(store, &ThresholdConfig::default())
    };
    let config = WorkflowConfig {
        mode: match mode {
            ModeArg::Baseline => WorkflowMode::Baseline,
            ModeArg::Routed => WorkflowMode::Routed,
        },
        parallel_specialists: parallel,
        thresholds: None,
    };
    let run = run_dataset(&transport, &Deployment::default(), &config, &jobs);
    write_records_jsonl(&run.records, out).map_err(|e| e.to_string())?;
    for f in &run.failures {
        eprintln!("scene {} failed: {}", f.scene_ref, f.message);
    }
    println!(
        "wrote {} records ({} failures) to {}",
        run.records.len(),
        run.failures.len(),
        out.display()
    );
    if run.failures.is_empty() {
        Ok(())
    } else {
        Err(format!("{} scenes failed", run.failures.len()))
    }
}

fn load_perf(baseline: &Path, routed: &Path) -> Result<Vec<bench::ScenePerf>, String> {
    let baseline = read_records_jsonl(baseline).map_err(|e| e.to_string())?;
    let routed = read_records_jsonl(routed).map_err(|e| e.to_string())?;
    bench::compute_speedups(&baseline, &routed).map_err(|e| e.to_string())
}

fn cmd_stats(baseline: &Path, routed: &Path) -> Result<(), String> {
    let perf = load_perf(baseline, routed)?;
    let summary = bench::summarize(&perf);
    println!(
        "{}",
        serde_json::to_string_pretty(&summary).expect("summary serializes")
    );
    Ok(())
}

fn cmd_report(baseline: &Path, routed: &Path, out: &Path) -> Result<(), String> {
    std::fs::create_dir_all(out).map_err(|e| format!("create {}: {e}", out.display()))?;
    let perf = load_perf(baseline, routed)?;
    let summary = bench::summarize(&perf);
    bench::emit_report(&perf, &summary, out).map_err(|e| e.to_string())?;
    println!("wrote report.json, report.txt, plot_data.csv to {}", out.display());
    Ok(())
}

fn cmd_serve(data: &DataArg, role: RoleArg, addr: &str, node_id: Option<String>) -> Result<(), String> {
    let node: Arc<dyn AgentNode> = match role {
        RoleArg::Decision => {
            let id = node_id.unwrap_or_else(|| "decision".into());
            Arc::new(DecisionNode::new(&id))
        }
        _ => {
            let root = data.resolve()?;
            let manifest = DatasetManifest::load(&root.join(MANIFEST_FILE)).ok();
            let store = Arc::new(SceneStore::disk(&root, manifest));
            match role {
                RoleArg::EarlyWarning => {
                    let id = node_id.unwrap_or_else(|| "early-warning".into());
                    Arc::new(EarlyWarningNode::new(&id, store))
                }
                RoleArg::Wildfire => {
                    let id = node_id.unwrap_or_else(|| "wildfire-specialist".into());
                    Arc::new(WildfireSpecialistNode::new(&id, store))
                }
                RoleArg::Flood => {
                    let id = node_id.unwrap_or_else(|| "flood-specialist".into());
                    Arc::new(FloodSpecialistNode::new(&id, store))
                }
                RoleArg::Decision => unreachable!(),
            }
        }
    };
    let role_name = match node.descriptor().role {
        AgentRole::EarlyWarning => "early_warning",
        AgentRole::WildfireSpecialist => "wildfire_specialist",
        AgentRole::FloodSpecialist => "flood_specialist",
        AgentRole::Decision => "decision",
    };
    let server = serve_node(node, addr).map_err(|e| e.to_string())?;
    println!("serving {role_name} on http://{}", server.addr);
    loop {
        std::thread::park();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Synth { out, seed } => cmd_synth(out, *seed),
        Command::Run {
            data,
            mode,
            out,
            parallel,
            cost_model,
        } => cmd_run(data, *mode, out, *parallel, *cost_model),
        Command::Stats { baseline, routed } => cmd_stats(baseline, routed),
        Command::Report {
            baseline,
            routed,
            out,
        } => cmd_report(baseline, routed, out),
        Command::Serve {
            data,
            role,
            addr,
            node_id,
        } => cmd_serve(data, *role, addr, node_id.clone()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
