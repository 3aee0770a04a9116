//! Detection tools used by the specialist agents.
//!
//! Wildfire analysis runs three tools in a fixed order: a tiled segmentation
//! model (`ml_fire`), the hotspot-index tool (`index_fire`), and the
//! double-evidence burned-area tool (`burned_area`). Flood analysis runs a
//! single tiled SAR segmentation tool (`ml_flood`). Segmentation models sit
//! behind [`SegmenterBackend`]; the shipped defaults are threshold stand-ins
//! so the whole pipeline runs without model weights, and real models attach
//! through the same seam.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mask::{mask_area_km2, BitMask, MaskError};
use crate::scene::{BandId, SceneBundle};
use crate::spectral::{
    compute_bai, compute_nhi_swir, compute_nhi_swnir, water_mask, SpectralError, ThresholdConfig,
};
use crate::tile::{merge_tile_masks, tile_segment, TileError, TileWindow, DEFAULT_STRIDE, TILE_SIZE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToolName {
    MlFire,
    IndexFire,
    BurnedArea,
    MlFlood,
}

impl ToolName {
    pub fn as_str(self) -> &'static str {
        match self {
            ToolName::MlFire => "ml_fire",
            ToolName::IndexFire => "index_fire",
            ToolName::BurnedArea => "burned_area",
            ToolName::MlFlood => "ml_flood",
        }
    }
}

/// One tool's quantitative output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolResult {
    pub tool_name: ToolName,
    pub detected: bool,
    pub metrics: BTreeMap<String, f64>,
    /// Set-pixel count of the tool's output mask.
    pub mask_pixels: u64,
    pub elapsed_ms: f64,
}

impl ToolResult {
    pub fn metric(&self, key: &str) -> Option<f64> {
        self.metrics.get(key).copied()
    }
}

#[derive(Debug, Error)]
pub enum ToolError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Tile(#[from] TileError),
    #[error(transparent)]
    Mask(#[from] MaskError),
    #[error("backend {backend_id} failed: {message}")]
    Backend { backend_id: String, message: String },
}

/// Flood segmentation classes emitted per tile.
pub const CLASS_DRY: u8 = 0;
pub const CLASS_FLOOD: u8 = 1;
pub const CLASS_PERMANENT_WATER: u8 = 2;
/// Fire segmentation classes.
pub const CLASS_BACKGROUND: u8 = 0;
pub const CLASS_FIRE: u8 = 1;

/// Per-tile class labels, row-major within the window.
#[derive(Debug, Clone)]
pub struct TileClasses {
    pub window: TileWindow,
    pub classes: Vec<u8>,
}

impl TileClasses {
    /// Mask of pixels whose class is in `positive`.
    pub fn mask_of(&self, positive: &[u8]) -> BitMask {
        let bits = self
            .classes
            .iter()
            .map(|c| positive.contains(c))
            .collect();
        BitMask::from_bits(self.window.width, self.window.height, bits)
    }
}

/// Seam for segmentation models. Implementations receive the full scene plus
/// a tile window and label each pixel of the window.
pub trait SegmenterBackend: Send + Sync {
    fn backend_id(&self) -> &str;

    fn segment_tile(&self, scene: &SceneBundle, window: TileWindow)
        -> Result<TileClasses, ToolError>;

    /// Whether tiles of one scene may be segmented concurrently.
    fn concurrent_tiles(&self) -> bool {
        true
    }
}

/// Default fire segmenter: thresholds NHI_SWIR per tile. A stand-in for the
/// trained model, equivalent to the index tool with the SWNIR cue disabled.
pub struct NhiSwirSegmenter {
    pub threshold: f32,
    pub eps: f32,
}

impl Default for NhiSwirSegmenter {
    fn default() -> Self {
        Self {
            threshold: 0.0,
            eps: 1e-6,
        }
    }
}

impl SegmenterBackend for NhiSwirSegmenter {
    fn backend_id(&self) -> &str {
        "nhi-swir-threshold"
    }

    fn segment_tile(
        &self,
        scene: &SceneBundle,
        window: TileWindow,
    ) -> Result<TileClasses, ToolError> {
        let swir2 = scene
            .band(BandId::B12)
            .ok_or(SpectralError::MissingBand {
                band: BandId::B12,
                operation: "nhi-swir-threshold",
            })?;
        let swir1 = scene
            .band(BandId::B11)
            .ok_or(SpectralError::MissingBand {
                band: BandId::B11,
                operation: "nhi-swir-threshold",
            })?;
        let mut classes = Vec::with_capacity(window.width * window.height);
        for y in window.y..window.y + window.height {
            for x in window.x..window.x + window.width {
                let a = swir2.get(x, y);
                let b = swir1.get(x, y);
                let denom = a + b;
                let v = if a.is_nan() || b.is_nan() || denom.abs() < self.eps {
                    f32::NAN
                } else {
                    (a - b) / denom
                };
                classes.push(if v.is_finite() && v > self.threshold {
                    CLASS_FIRE
                } else {
                    CLASS_BACKGROUND
                });
            }
        }
        Ok(TileClasses { window, classes })
    }
}

/// Default flood segmenter: flood where VV backscatter is below a
/// low-backscatter threshold and the pixel is not in the supplied
/// permanent-water reference mask; permanent-water pixels get their own
/// class so the merge rule can fold them into non-flooded.
pub struct VvThresholdSegmenter {
    pub vv_threshold: f32,
    pub permanent_water: Option<BitMask>,
}

impl Default for VvThresholdSegmenter {
    fn default() -> Self {
        Self {
            vv_threshold: 0.02,
            permanent_water: None,
        }
    }
}

impl VvThresholdSegmenter {
    pub fn with_permanent_water(mask: Option<BitMask>) -> Self {
        Self {
            permanent_water: mask,
            ..Default::default()
        }
    }
}

impl SegmenterBackend for VvThresholdSegmenter {
    fn backend_id(&self) -> &str {
        "vv-threshold"
    }

    fn segment_tile(
        &self,
        scene: &SceneBundle,
        window: TileWindow,
    ) -> Result<TileClasses, ToolError> {
        let features = flood_features(scene, window)?;
        let mut classes = Vec::with_capacity(window.width * window.height);
        for (i, &vv) in features.vv.iter().enumerate() {
            let x = window.x + i % window.width;
            let y = window.y + i / window.width;
            let permanent = self
                .permanent_water
                .as_ref()
                .is_some_and(|m| m.get(x, y));
            classes.push(if permanent {
                CLASS_PERMANENT_WATER
            } else if vv.is_finite() && vv < self.vv_threshold {
                CLASS_FLOOD
            } else {
                CLASS_DRY
            });
        }
        Ok(TileClasses { window, classes })
    }
}

/// SAR features of one tile: VV, VH, and their NaN-guarded ratio.
pub struct FloodFeatures {
    pub vv: Vec<f32>,
    pub vh: Vec<f32>,
    pub ratio: Vec<f32>,
}

pub fn flood_features(scene: &SceneBundle, window: TileWindow) -> Result<FloodFeatures, ToolError> {
    let vv_band = scene.band(BandId::VV).ok_or(SpectralError::MissingBand {
        band: BandId::VV,
        operation: "flood_features",
    })?;
    let vh_band = scene.band(BandId::VH).ok_or(SpectralError::MissingBand {
        band: BandId::VH,
        operation: "flood_features",
    })?;
    let n = window.width * window.height;
    let mut vv = Vec::with_capacity(n);
    let mut vh = Vec::with_capacity(n);
    let mut ratio = Vec::with_capacity(n);
    for y in window.y..window.y + window.height {
        for x in window.x..window.x + window.width {
            let a = vv_band.get(x, y);
            let b = vh_band.get(x, y);
            vv.push(a);
            vh.push(b);
            ratio.push(if a.is_nan() || b.is_nan() || b.abs() < 1e-9 {
                f32::NAN
            } else {
                a / b
            });
        }
    }
    Ok(FloodFeatures { vv, vh, ratio })
}

fn result(
    tool_name: ToolName,
    detected: bool,
    metrics: BTreeMap<String, f64>,
    mask: &BitMask,
    started: Instant,
) -> ToolResult {
    ToolResult {
        tool_name,
        detected,
        metrics,
        mask_pixels: mask.count_ones() as u64,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    }
}

/// Hotspot mask from the strict NHI thresholds, excluding water pixels.
/// Detected when the active-fire area reaches the configured minimum.
pub fn tool_index_fire(
    scene: &SceneBundle,
    cfg: &ThresholdConfig,
) -> Result<(ToolResult, BitMask), ToolError> {
    let started = Instant::now();
    let swir = compute_nhi_swir(scene, cfg.eps_denominator)?;
    let swnir = compute_nhi_swnir(scene, cfg.eps_denominator)?;
    let water = water_mask(scene, cfg)?;
    let hot = swir
        .above(cfg.nhi_swir_hot)
        .or(&swnir.above(cfg.nhi_swnir_hot))?;
    let mask = hot.and_not(&water)?;
    let area = mask_area_km2(&mask, scene.pixel_size_m);
    let mut metrics = BTreeMap::new();
    metrics.insert("active_fire_area_km2".to_string(), area);
    let detected = area >= cfg.fire_area_min_km2;
    Ok((
        result(ToolName::IndexFire, detected, metrics, &mask, started),
        mask,
    ))
}

/// Tiled segmentation-model fire detection. The scene is cut into tiles,
/// each tile is fed to the backend, and the per-tile fire masks are
/// OR-merged back to scene size.
pub fn tool_ml_fire(
    scene: &SceneBundle,
    backend: &dyn SegmenterBackend,
    cfg: &ThresholdConfig,
) -> Result<(ToolResult, BitMask), ToolError> {
    let started = Instant::now();
    for band in [BandId::B8, BandId::B11, BandId::B12] {
        if scene.band(band).is_none() {
            return Err(SpectralError::MissingBand {
                band,
                operation: "tool_ml_fire",
            }
            .into());
        }
    }
    let windows = tile_segment(scene.width(), scene.height(), TILE_SIZE, DEFAULT_STRIDE)?;
    let mut tiles = Vec::with_capacity(windows.len());
    for window in windows {
        let classes = backend.segment_tile(scene, window)?;
        tiles.push((window, classes.mask_of(&[CLASS_FIRE])));
    }
    let mask = merge_tile_masks(scene.width(), scene.height(), &tiles)?;
    let area = mask_area_km2(&mask, scene.pixel_size_m);
    let mut metrics = BTreeMap::new();
    metrics.insert("active_fire_area_km2".to_string(), area);
    let detected = area >= cfg.fire_area_min_km2;
    Ok((
        result(ToolName::MlFire, detected, metrics, &mask, started),
        mask,
    ))
}

/// Double-evidence burned-area detection: a permissive candidate mask from
/// the relaxed NHI thresholds (water excluded) intersected with the BAI burn
/// mask. Reports the burned area and the 8-connected hotspot count.
pub fn tool_burned_area(
    scene: &SceneBundle,
    cfg: &ThresholdConfig,
) -> Result<(ToolResult, BitMask), ToolError> {
    let started = Instant::now();
    let candidate = burned_candidate_mask(scene, cfg)?;
    let bai = compute_bai(scene, cfg.eps_denominator)?.above(cfg.bai_burn);
    let mask = candidate.and(&bai)?;
    let area = mask_area_km2(&mask, scene.pixel_size_m);
    let hotspots = crate::mask::connected_components(&mask);
    let mut metrics = BTreeMap::new();
    metrics.insert("burned_area_km2".to_string(), area);
    metrics.insert("hotspot_count".to_string(), hotspots as f64);
    let detected = area >= cfg.fire_area_min_km2;
    Ok((
        result(ToolName::BurnedArea, detected, metrics, &mask, started),
        mask,
    ))
}

/// The relaxed-threshold candidate mask of the burned-area tool, exposed for
/// containment checks against the strict hotspot mask.
pub fn burned_candidate_mask(
    scene: &SceneBundle,
    cfg: &ThresholdConfig,
) -> Result<BitMask, ToolError> {
    let swir = compute_nhi_swir(scene, cfg.eps_denominator)?;
    let swnir = compute_nhi_swnir(scene, cfg.eps_denominator)?;
    let water = water_mask(scene, cfg)?;
    Ok(swir
        .above(cfg.nhi_swir_relaxed)
        .or(&swnir.above(cfg.nhi_swnir_relaxed))?
        .and_not(&water)?)
}

/// Tiled SAR flood detection. The backend labels each tile into flood /
/// permanent-water / dry; the merge keeps only the flood class, so permanent
/// water counts as non-flooded. Detected when the flood fraction of the
/// scene reaches the configured minimum.
pub fn tool_ml_flood(
    scene: &SceneBundle,
    backend: &dyn SegmenterBackend,
    cfg: &ThresholdConfig,
) -> Result<(ToolResult, BitMask), ToolError> {
    let started = Instant::now();
    for band in [BandId::VV, BandId::VH] {
        if scene.band(band).is_none() {
            return Err(SpectralError::MissingBand {
                band,
                operation: "tool_ml_flood",
            }
            .into());
        }
    }
    let windows = tile_segment(scene.width(), scene.height(), TILE_SIZE, DEFAULT_STRIDE)?;
    let mut tiles = Vec::with_capacity(windows.len());
    for window in windows {
        let classes = backend.segment_tile(scene, window)?;
        tiles.push((window, classes.mask_of(&[CLASS_FLOOD])));
    }
    let mask = merge_tile_masks(scene.width(), scene.height(), &tiles)?;
    let area = mask_area_km2(&mask, scene.pixel_size_m);
    let fraction = mask.count_ones() as f64 / (scene.width() * scene.height()) as f64;
    let mut metrics = BTreeMap::new();
    metrics.insert("flood_area_km2".to_string(), area);
    metrics.insert("flood_fraction".to_string(), fraction);
    let detected = fraction >= cfg.flood_fraction_min;
    Ok((
        result(ToolName::MlFlood, detected, metrics, &mask, started),
        mask,
    ))
}
