//! Acceptance gate: one test per criterion, each printing a single
//! `criterion N ... pass|fail` line (run with `--nocapture` to see them).

use std::sync::{Arc, Mutex, MutexGuard, OnceLock};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use eowatch::agents::{
    decision_fuse, specialist_report_from_tools, tool_result_fixture, AgentRole, Classification,
    Decision, EventType, HypothesisReport, RuleReasoner, SpecialistKind,
};
use eowatch::bench::{self, ScenePerf};
use eowatch::mask::{connected_components, BitMask};
use eowatch::orchestrator::{
    run_dataset, Deployment, RunRecord, SceneJob, WorkflowConfig,
};
use eowatch::scene::{
    save_scene, scene_area_km2, BandId, BandRaster, DatasetManifest, ManifestEntry, SceneBundle,
};
use eowatch::schema::{canonical_json, validate_final_alert, validate_hypothesis, validate_specialist};
use eowatch::spectral::{
    compute_bai, compute_mndwi, compute_nhi_swir, compute_nhi_swnir, water_mask, ThresholdConfig,
};
use eowatch::synth::{
    benchmark_dataset, correlation_dataset, make_synthetic_scene, RegionKind, SyntheticSpec,
};
use eowatch::tile::{merge_tile_masks, tile_segment};
use eowatch::tools::{burned_candidate_mask, tool_burned_area, tool_index_fire, ToolName};
use eowatch::transport::{
    serve_node, standard_in_process, DecisionNode, EarlyWarningNode, FloodSpecialistNode,
    HttpTransport, SceneStore, WildfireSpecialistNode,
};
use eowatch::SCHEMA_VERSION;

/// The benchmark criteria measure wall-clock time, so the criteria must not
/// compete for the CPU; every test takes this lock.
fn serial() -> MutexGuard<'static, ()> {
    static LOCK: OnceLock<Mutex<()>> = OnceLock::new();
    LOCK.get_or_init(|| Mutex::new(()))
        .lock()
        .unwrap_or_else(|e| e.into_inner())
}

fn verdict(criterion: u32, name: &str, ok: bool) {
    println!(
        "criterion {criterion} ({name}): {}",
        if ok { "pass" } else { "fail" }
    );
    assert!(ok, "criterion {criterion} ({name}) failed");
}

fn random_scene(rng: &mut ChaCha8Rng, width: usize, height: usize) -> SceneBundle {
    let bands = [
        BandId::B2,
        BandId::B3,
        BandId::B4,
        BandId::B8,
        BandId::B11,
        BandId::B12,
    ]
    .iter()
    .map(|&band| {
        let values: Vec<f32> = (0..width * height)
            .map(|_| {
                if rng.gen_bool(0.02) {
                    f32::NAN
                } else {
                    rng.gen_range(0.0..1.5)
                }
            })
            .collect();
        BandRaster::new(band, width, height, values).unwrap()
    })
    .collect();
    SceneBundle::new("rand", bands, 20.0, EventType::None, "").unwrap()
}

fn close(a: f32, b: f32) -> bool {
    (a.is_nan() && b.is_nan()) || (a - b).abs() <= 1e-6
}

#[test]
fn c01_index_math_oracle() {
    let _guard = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let eps = 1e-6f32;
    let mut ok = true;
    let norm = |a: f32, b: f32| -> f32 {
        let denom = a + b;
        if a.is_nan() || b.is_nan() || denom.abs() < eps {
            f32::NAN
        } else {
            (a - b) / denom
        }
    };
    for _ in 0..1000 {
        let scene = random_scene(&mut rng, 64, 64);
        let b3 = scene.band(BandId::B3).unwrap();
        let b4 = scene.band(BandId::B4).unwrap();
        let b8 = scene.band(BandId::B8).unwrap();
        let b11 = scene.band(BandId::B11).unwrap();
        let b12 = scene.band(BandId::B12).unwrap();
        let swir = compute_nhi_swir(&scene, eps).unwrap();
        let swnir = compute_nhi_swnir(&scene, eps).unwrap();
        let mndwi = compute_mndwi(&scene, eps).unwrap();
        let bai = compute_bai(&scene, eps).unwrap();
        for y in 0..64 {
            for x in 0..64 {
                ok &= close(swir.get(x, y), norm(b12.get(x, y), b11.get(x, y)));
                ok &= close(swnir.get(x, y), norm(b11.get(x, y), b8.get(x, y)));
                ok &= close(mndwi.get(x, y), norm(b3.get(x, y), b11.get(x, y)));
                let (r, n) = (b4.get(x, y), b8.get(x, y));
                let denom = (0.1 - r) * (0.1 - r) + (0.06 - n) * (0.06 - n);
                let expected = if r.is_nan() || n.is_nan() || denom < eps {
                    f32::NAN
                } else {
                    1.0 / denom
                };
                ok &= close(bai.get(x, y), expected);
                for v in [swir.get(x, y), swnir.get(x, y), mndwi.get(x, y)] {
                    ok &= v.is_nan() || (-1.0..=1.0).contains(&v);
                }
            }
        }
        if !ok {
            break;
        }
    }
    verdict(1, "index-math oracle, 1000 random rasters", ok);
}

fn random_config(rng: &mut ChaCha8Rng) -> ThresholdConfig {
    let strict_swir = rng.gen_range(-0.2..0.5f32);
    let strict_swnir = rng.gen_range(-0.2..0.5f32);
    ThresholdConfig {
        nhi_swir_hot: strict_swir,
        nhi_swnir_hot: strict_swnir,
        nhi_swir_relaxed: strict_swir - rng.gen_range(0.0..0.3f32),
        nhi_swnir_relaxed: strict_swnir - rng.gen_range(0.0..0.3f32),
        mndwi_water: rng.gen_range(-0.2..0.2f32),
        bai_burn: rng.gen_range(10.0..500.0f32),
        ..ThresholdConfig::default()
    }
}

#[test]
fn c02_tool_containment() {
    let _guard = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let kinds = [
        RegionKind::Fire,
        RegionKind::BurnScar,
        RegionKind::Water,
        RegionKind::FireOnWater,
        RegionKind::Flood,
    ];
    let mut ok = true;
    for i in 0..200 {
        let cfg = random_config(&mut rng);
        cfg.validate().unwrap();
        let dim = rng.gen_range(48..128usize);
        let mut spec = SyntheticSpec::new(format!("c2-{i}"), dim, dim, rng.gen());
        for _ in 0..rng.gen_range(0..4usize) {
            let kind = kinds[rng.gen_range(0..kinds.len())];
            let w = rng.gen_range(4..dim / 2);
            let h = rng.gen_range(4..dim / 2);
            let x = rng.gen_range(0..dim - w);
            let y = rng.gen_range(0..dim - h);
            spec = spec.with_region(kind, x, y, w, h);
        }
        let scene = make_synthetic_scene(&spec).unwrap();
        let candidate = burned_candidate_mask(&scene, &cfg).unwrap();
        let (_, fire) = tool_index_fire(&scene, &cfg).unwrap();
        let (_, burned) = tool_burned_area(&scene, &cfg).unwrap();
        let water = water_mask(&scene, &cfg).unwrap();
        let bai = compute_bai(&scene, cfg.eps_denominator)
            .unwrap()
            .above(cfg.bai_burn);
        ok &= fire.is_subset_of(&candidate);
        ok &= burned.is_subset_of(&candidate.and(&bai).unwrap());
        ok &= !fire.intersects(&water);
        if !ok {
            break;
        }
    }
    verdict(2, "containment over 200 random configs", ok);
}

/// Reference component count by repeated min-label propagation.
fn oracle_components(mask: &BitMask) -> usize {
    let (w, h) = (mask.width, mask.height);
    let mut labels: Vec<usize> = (0..w * h)
        .map(|i| if mask.bits()[i] { i + 1 } else { 0 })
        .collect();
    loop {
        let mut changed = false;
        for y in 0..h {
            for x in 0..w {
                let i = y * w + x;
                if labels[i] == 0 {
                    continue;
                }
                for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                        if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                            continue;
                        }
                        let j = ny as usize * w + nx as usize;
                        if labels[j] != 0 && labels[j] < labels[i] {
                            labels[i] = labels[j];
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut distinct: Vec<usize> = labels.into_iter().filter(|&l| l != 0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    distinct.len()
}

#[test]
fn c03_component_count_oracle() {
    let _guard = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut ok = true;
    for _ in 0..500 {
        let w = rng.gen_range(1..=32usize);
        let h = rng.gen_range(1..=32usize);
        let density = rng.gen_range(0.05..0.95);
        let bits: Vec<bool> = (0..w * h).map(|_| rng.gen_bool(density)).collect();
        let mask = BitMask::from_bits(w, h, bits);
        ok &= connected_components(&mask) == oracle_components(&mask);
        if !ok {
            break;
        }
    }
    verdict(3, "component count vs flood-fill oracle, 500 masks", ok);
}

#[test]
fn c04_tiling_coverage_and_order_invariance() {
    let _guard = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut ok = true;
    for _ in 0..50 {
        let w = rng.gen_range(1..=1024usize);
        let h = rng.gen_range(1..=1024usize);
        let stride = rng.gen_range(1..=256usize);
        let windows = tile_segment(w, h, 256, stride).unwrap();
        let mut covered = vec![false; w * h];
        for win in &windows {
            for y in win.y..win.y + win.height {
                for x in win.x..win.x + win.width {
                    covered[y * w + x] = true;
                }
            }
        }
        ok &= covered.iter().all(|&c| c);
        if !ok {
            break;
        }
    }

    let w = 700;
    let h = 500;
    let windows = tile_segment(w, h, 256, 128).unwrap();
    let mut tiles: Vec<_> = windows
        .iter()
        .map(|&win| {
            let bits: Vec<bool> = (0..win.width * win.height).map(|_| rng.gen_bool(0.3)).collect();
            (win, BitMask::from_bits(win.width, win.height, bits))
        })
        .collect();
    let reference = merge_tile_masks(w, h, &tiles).unwrap();
    for _ in 0..20 {
        tiles.shuffle(&mut rng);
        ok &= merge_tile_masks(w, h, &tiles).unwrap() == reference;
    }
    verdict(4, "tiling coverage and merge order invariance", ok);
}

#[test]
fn c05_fusion_truth_table() {
    let _guard = serial();
    let reasoner = RuleReasoner::default();
    let mut ok = true;
    for hyp_event in [EventType::Wildfire, EventType::Flood, EventType::None] {
        for wf_bits in 0..8u8 {
            let (ml, index, burned) = (wf_bits & 1 != 0, wf_bits & 2 != 0, wf_bits & 4 != 0);
            for flood_detected in [false, true] {
                let wf_report = specialist_report_from_tools(
                    "tt",
                    SpecialistKind::Wildfire,
                    vec![
                        tool_result_fixture(
                            ToolName::MlFire,
                            ml,
                            &[("active_fire_area_km2", if ml { 1.0 } else { 0.0 })],
                        ),
                        tool_result_fixture(
                            ToolName::IndexFire,
                            index,
                            &[("active_fire_area_km2", if index { 1.0 } else { 0.0 })],
                        ),
                        tool_result_fixture(
                            ToolName::BurnedArea,
                            burned,
                            &[("burned_area_km2", if burned { 1.0 } else { 0.0 })],
                        ),
                    ],
                    &reasoner,
                );
                let flood_report = specialist_report_from_tools(
                    "tt",
                    SpecialistKind::Flood,
                    vec![tool_result_fixture(
                        ToolName::MlFlood,
                        flood_detected,
                        &[("flood_area_km2", if flood_detected { 2.0 } else { 0.0 })],
                    )],
                    &reasoner,
                );
                let hypothesis = HypothesisReport {
                    schema_version: SCHEMA_VERSION,
                    scene_id: "tt".into(),
                    predicted_event: hyp_event,
                    reasoning: "tt".into(),
                    elapsed_ms: 0.0,
                };
                let alert = decision_fuse(
                    Some(&hypothesis),
                    &[wf_report, flood_report],
                    &reasoner,
                );

                // Independent restatement of the rules.
                let wf_confirmed = ml || index;
                let expected_event = match (wf_confirmed, flood_detected) {
                    (true, true) => EventType::Flood, // flood fixture claims the larger area
                    (true, false) => EventType::Wildfire,
                    (false, true) => EventType::Flood,
                    (false, false) => EventType::None,
                };
                let expected_decision = if expected_event == EventType::None {
                    Decision::NoAlert
                } else {
                    Decision::Alert
                };
                let mut agree = 0;
                if hyp_event == expected_event {
                    agree += 1;
                }
                if (if wf_confirmed { EventType::Wildfire } else { EventType::None })
                    == expected_event
                {
                    agree += 1;
                }
                if (if flood_detected { EventType::Flood } else { EventType::None })
                    == expected_event
                {
                    agree += 1;
                }
                let expected_confidence = agree as f64 / 3.0;

                ok &= alert.event_type == expected_event;
                ok &= alert.decision == expected_decision;
                ok &= (alert.confidence - expected_confidence).abs() < 1e-12;
                // Past-event-only evidence never raises an alert.
                if !wf_confirmed && !flood_detected && burned {
                    ok &= alert.decision == Decision::NoAlert;
                }
            }
        }
    }
    verdict(5, "fusion truth table, 48 combinations", ok);
}

fn benchmark_perf() -> &'static Vec<ScenePerf> {
    static PERF: OnceLock<Vec<ScenePerf>> = OnceLock::new();
    PERF.get_or_init(|| {
        let mut store = SceneStore::memory();
        let mut jobs = Vec::new();
        for spec in benchmark_dataset(7) {
            let scene = make_synthetic_scene(&spec).unwrap();
            jobs.push(SceneJob {
                scene_ref: scene.scene_id.clone(),
                area_km2: scene_area_km2(&scene),
                label: scene.label,
            });
            store.insert(scene, None);
        }
        let transport = bench::cost_model_transport(Arc::new(store));
        let deployment = Deployment::default();
        let baseline = run_dataset(
            &transport,
            &deployment,
            &WorkflowConfig::baseline(),
            &jobs,
        );
        let routed = run_dataset(&transport, &deployment, &WorkflowConfig::routed(), &jobs);
        assert!(baseline.failures.is_empty() && routed.failures.is_empty());
        bench::compute_speedups(&baseline.records, &routed.records).unwrap()
    })
}

#[test]
fn c06_routing_efficiency_pattern() {
    let _guard = serial();
    let perf = benchmark_perf();
    let no_event: Vec<f64> = perf
        .iter()
        .filter(|p| !p.has_event())
        .map(|p| p.speedup)
        .collect();
    let event: Vec<f64> = perf
        .iter()
        .filter(|p| p.has_event())
        .map(|p| p.speedup)
        .collect();
    let no_event_mean = no_event.iter().sum::<f64>() / no_event.len() as f64;
    let event_mean = event.iter().sum::<f64>() / event.len() as f64;
    let ok = perf.len() == 30 && no_event_mean >= 2.0 && no_event_mean > event_mean;
    println!(
        "  cost-model speedups: no-event mean {no_event_mean:.2}, event mean {event_mean:.2}"
    );
    verdict(6, "routing efficiency pattern on 30-scene cost model", ok);
}

/// Builds the two-regime correlation dataset and measures it under the
/// fixed-early-warning, per-tile-specialist cost model.
fn correlation_perf() -> Vec<ScenePerf> {
    let mut store = SceneStore::memory();
    let mut jobs = Vec::new();
    for spec in correlation_dataset(11) {
        let scene = make_synthetic_scene(&spec).unwrap();
        jobs.push(SceneJob {
            scene_ref: scene.scene_id.clone(),
            area_km2: scene_area_km2(&scene),
            label: scene.label,
        });
        store.insert(scene, None);
    }
    let transport = bench::correlation_transport(Arc::new(store));
    let deployment = Deployment::default();
    let baseline = run_dataset(
        &transport,
        &deployment,
        &WorkflowConfig::baseline(),
        &jobs,
    );
    let routed = run_dataset(&transport, &deployment, &WorkflowConfig::routed(), &jobs);
    assert!(baseline.failures.is_empty() && routed.failures.is_empty());
    bench::compute_speedups(&baseline.records, &routed.records).unwrap()
}

#[test]
fn c07_stratified_correlation() {
    let _guard = serial();
    let perf = correlation_perf();
    let corr = bench::stratified_correlation(&perf);
    let no_event = corr.no_event.pearson.unwrap();
    let event = corr.event.pearson.unwrap();
    let global = corr.global.pearson.unwrap();
    println!("  area-speedup rho: no-event {no_event:.3}, event {event:.3}, global {global:.3}");
    let ok = no_event >= 0.8 && event >= 0.8 && global.abs() <= 0.3;
    verdict(7, "stratified correlation masking", ok);
}

fn equivalence_dataset() -> Vec<SyntheticSpec> {
    let mut specs = Vec::new();
    for (i, dim) in [128usize, 160, 192, 224].iter().enumerate() {
        specs.push(SyntheticSpec::new(format!("q{i}"), *dim, *dim, 800 + i as u64));
    }
    for (i, dim) in [192usize, 256, 320].iter().enumerate() {
        specs.push(
            SyntheticSpec::new(format!("f{i}"), *dim, *dim, 810 + i as u64)
                .with_region(RegionKind::Fire, dim / 8, dim / 8, dim / 8, dim / 8)
                .with_label(EventType::Wildfire),
        );
    }
    for (i, dim) in [192usize, 256, 320].iter().enumerate() {
        specs.push(
            SyntheticSpec::new(format!("w{i}"), *dim, *dim, 820 + i as u64)
                .with_region(RegionKind::Flood, 0, 0, dim / 2, dim / 2)
                .with_label(EventType::Flood),
        );
    }
    specs
}

#[test]
fn c08_transport_equivalence() {
    let _guard = serial();
    let dir = tempfile::TempDir::new().unwrap();
    let mut entries = Vec::new();
    let mut jobs = Vec::new();
    for spec in equivalence_dataset() {
        let scene = make_synthetic_scene(&spec).unwrap();
        save_scene(&scene, &dir.path().join(&spec.scene_id)).unwrap();
        entries.push(ManifestEntry {
            scene_id: spec.scene_id.clone(),
            path: spec.scene_id.clone(),
            label: spec.label,
        });
        jobs.push(SceneJob {
            scene_ref: spec.scene_id.clone(),
            area_km2: scene_area_km2(&scene),
            label: spec.label,
        });
    }
    let manifest = DatasetManifest::new(entries).unwrap();
    let store = || {
        Arc::new(SceneStore::disk(dir.path(), Some(manifest.clone())))
    };

    let in_proc = standard_in_process(store(), &ThresholdConfig::default());
    let deployment = Deployment::default();
    let config = WorkflowConfig::routed();
    let local = run_dataset(&in_proc, &deployment, &config, &jobs);

    let servers = vec![
        serve_node(
            Arc::new(EarlyWarningNode::new("early-warning", store())),
            "127.0.0.1:0",
        )
        .unwrap(),
        serve_node(
            Arc::new(WildfireSpecialistNode::new("wildfire-specialist", store())),
            "127.0.0.1:0",
        )
        .unwrap(),
        serve_node(
            Arc::new(FloodSpecialistNode::new("flood-specialist", store())),
            "127.0.0.1:0",
        )
        .unwrap(),
        serve_node(Arc::new(DecisionNode::new("decision")), "127.0.0.1:0").unwrap(),
    ];
    let mut http = HttpTransport::new();
    for (server, (id, role)) in servers.iter().zip([
        ("early-warning", AgentRole::EarlyWarning),
        ("wildfire-specialist", AgentRole::WildfireSpecialist),
        ("flood-specialist", AgentRole::FloodSpecialist),
        ("decision", AgentRole::Decision),
    ]) {
        http.register(id, role, &format!("http://{}", server.addr));
    }
    let remote = run_dataset(&http, &deployment, &config, &jobs);

    let mut ok = local.failures.is_empty() && remote.failures.is_empty();
    ok &= local.records.len() == jobs.len() && remote.records.len() == jobs.len();
    for (a, b) in local.records.iter().zip(&remote.records) {
        ok &= canonical_json(&a.alert) == canonical_json(&b.alert);
    }
    verdict(8, "in-process vs HTTP transport equivalence, 10 scenes", ok);
}

#[test]
fn c09_end_to_end_determinism() {
    let _guard = serial();
    let run = || -> Vec<RunRecord> {
        let mut store = SceneStore::memory();
        let mut jobs = Vec::new();
        for spec in equivalence_dataset() {
            let scene = make_synthetic_scene(&spec).unwrap();
            jobs.push(SceneJob {
                scene_ref: scene.scene_id.clone(),
                area_km2: scene_area_km2(&scene),
                label: scene.label,
            });
            store.insert(scene, None);
        }
        let transport = standard_in_process(Arc::new(store), &ThresholdConfig::default());
        run_dataset(&transport, &Deployment::default(), &WorkflowConfig::routed(), &jobs).records
    };
    let first = run();
    let second = run();
    let canon = |records: &[RunRecord]| -> Vec<String> {
        records.iter().map(canonical_json).collect()
    };
    let ok = !first.is_empty() && canon(&first) == canon(&second);
    verdict(9, "end-to-end determinism across equal-seed runs", ok);
}

#[test]
fn c10_schema_conformance_and_report_fixtures() {
    let _guard = serial();
    let reasoner = RuleReasoner::default();
    let mut ok = true;

    // Every report emitted by a routed run validates.
    let mut store = SceneStore::memory();
    let mut jobs = Vec::new();
    for spec in equivalence_dataset() {
        let scene = make_synthetic_scene(&spec).unwrap();
        jobs.push(SceneJob {
            scene_ref: scene.scene_id.clone(),
            area_km2: scene_area_km2(&scene),
            label: scene.label,
        });
        store.insert(scene, None);
    }
    let transport = standard_in_process(Arc::new(store), &ThresholdConfig::default());
    let run = run_dataset(&transport, &Deployment::default(), &WorkflowConfig::routed(), &jobs);
    ok &= run.failures.is_empty();
    for record in &run.records {
        let alert = serde_json::to_value(&record.alert).unwrap();
        ok &= validate_final_alert(&alert).is_ok();
        if let Some(h) = &record.alert.provenance.hypothesis {
            ok &= validate_hypothesis(&serde_json::to_value(h).unwrap()).is_ok();
        }
        for report in &record.alert.provenance.specialist_reports {
            ok &= validate_specialist(&serde_json::to_value(report).unwrap()).is_ok();
        }
    }

    let hypothesis = |event: EventType| HypothesisReport {
        schema_version: SCHEMA_VERSION,
        scene_id: "fixture".into(),
        predicted_event: event,
        reasoning: "fixture".into(),
        elapsed_ms: 0.0,
    };

    // Active fire plus burned area: alert, wildfire.
    let active_fire = specialist_report_from_tools(
        "fixture",
        SpecialistKind::Wildfire,
        vec![
            tool_result_fixture(ToolName::MlFire, true, &[("active_fire_area_km2", 1.77)]),
            tool_result_fixture(ToolName::IndexFire, true, &[("active_fire_area_km2", 1.77)]),
            tool_result_fixture(
                ToolName::BurnedArea,
                true,
                &[("burned_area_km2", 41.1), ("hotspot_count", 3.0)],
            ),
        ],
        &reasoner,
    );
    let h = hypothesis(EventType::Wildfire);
    let alert = decision_fuse(Some(&h), &[active_fire], &reasoner);
    ok &= alert.decision == Decision::Alert && alert.event_type == EventType::Wildfire;
    ok &= alert.reasoning.contains("1.77") && alert.reasoning.contains("41.1");
    ok &= validate_final_alert(&serde_json::to_value(&alert).unwrap()).is_ok();

    // Flood extent above threshold: alert, flood.
    let flood = specialist_report_from_tools(
        "fixture",
        SpecialistKind::Flood,
        vec![tool_result_fixture(
            ToolName::MlFlood,
            true,
            &[("flood_area_km2", 25.42), ("flood_fraction", 0.08)],
        )],
        &reasoner,
    );
    let h = hypothesis(EventType::Flood);
    let alert = decision_fuse(Some(&h), &[flood], &reasoner);
    ok &= alert.decision == Decision::Alert && alert.event_type == EventType::Flood;
    ok &= alert.reasoning.contains("25.42");
    ok &= validate_final_alert(&serde_json::to_value(&alert).unwrap()).is_ok();

    // Burned area only: past event, no alert.
    let burned_only = specialist_report_from_tools(
        "fixture",
        SpecialistKind::Wildfire,
        vec![
            tool_result_fixture(ToolName::MlFire, false, &[("active_fire_area_km2", 0.0)]),
            tool_result_fixture(ToolName::IndexFire, false, &[("active_fire_area_km2", 0.0)]),
            tool_result_fixture(
                ToolName::BurnedArea,
                true,
                &[("burned_area_km2", 44.83), ("hotspot_count", 1.0)],
            ),
        ],
        &reasoner,
    );
    ok &= burned_only.classification == Classification::PastEvent;
    let h = hypothesis(EventType::Wildfire);
    let alert = decision_fuse(Some(&h), &[burned_only], &reasoner);
    ok &= alert.decision == Decision::NoAlert && alert.event_type == EventType::None;
    ok &= validate_final_alert(&serde_json::to_value(&alert).unwrap()).is_ok();

    verdict(10, "schema conformance and report fixtures", ok);
}
