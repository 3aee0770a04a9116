//! Deterministic synthetic scene generator.
//!
//! Paints rectangular regions with spectral signatures chosen to trip or
//! avoid the index thresholds: fire rectangles land well above both hotspot
//! indices, burn scars sit between the relaxed and strict hotspot thresholds
//! while maximizing the burn index, water and flood rectangles push MNDWI
//! positive, and flood rectangles additionally show the low SAR backscatter
//! of calm water. Equal spec and seed always yield identical scenes.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::agents::EventType;
use crate::mask::BitMask;
use crate::scene::{BandId, BandRaster, SceneBundle, SceneError, MAX_REFLECTANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    /// Active fire front: hot in both NHI indices, not a burn scar.
    Fire,
    /// Burn scar: relaxed-NHI candidate plus a strong BAI response, but below
    /// the strict hotspot thresholds.
    BurnScar,
    /// Open water in the optical bands only; suppresses fire detections.
    Water,
    /// Fire spectral signature on a pixel that also reads as water; exercises
    /// the water-exclusion rule.
    FireOnWater,
    /// Flood water: optical water signature plus low SAR backscatter.
    Flood,
    /// Permanent water body: same SAR response as flood water, but recorded
    /// in the permanent-water reference mask.
    PermanentWater,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub kind: RegionKind,
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub scene_id: String,
    pub width: usize,
    pub height: usize,
    pub pixel_size_m: f64,
    pub seed: u64,
    #[serde(default)]
    pub label: EventType,
    /// Bands to generate; empty means all eight.
    #[serde(default)]
    pub bands: Vec<BandId>,
    #[serde(default)]
    pub regions: Vec<Region>,
    /// Uniform per-pixel noise amplitude.
    #[serde(default = "default_jitter")]
    pub jitter: f32,
}

fn default_jitter() -> f32 {
    0.001
}

impl SyntheticSpec {
    pub fn new(scene_id: impl Into<String>, width: usize, height: usize, seed: u64) -> Self {
        Self {
            scene_id: scene_id.into(),
            width,
            height,
            pixel_size_m: 20.0,
            seed,
            label: EventType::None,
            bands: Vec::new(),
            regions: Vec::new(),
            jitter: default_jitter(),
        }
    }

    pub fn with_region(mut self, kind: RegionKind, x: usize, y: usize, w: usize, h: usize) -> Self {
        self.regions.push(Region {
            kind,
            x,
            y,
            width: w,
            height: h,
        });
        self
    }

    pub fn with_label(mut self, label: EventType) -> Self {
        self.label = label;
        self
    }

    fn band_list(&self) -> Vec<BandId> {
        if self.bands.is_empty() {
            BandId::ALL.to_vec()
        } else {
            self.bands.clone()
        }
    }
}

/// Scene-wide background values per band: dry vegetated land, calm SAR
/// return well above the flood threshold.
fn background(band: BandId) -> f32 {
    match band {
        BandId::B2 => 0.08,
        BandId::B3 => 0.10,
        BandId::B4 => 0.12,
        BandId::B8 => 0.30,
        BandId::B11 => 0.25,
        BandId::B12 => 0.20,
        BandId::VV => 0.15,
        BandId::VH => 0.03,
    }
}

fn signature(kind: RegionKind, band: BandId) -> f32 {
    match kind {
        RegionKind::Fire => match band {
            BandId::B2 => 0.10,
            BandId::B3 => 0.15,
            BandId::B4 => 0.30,
            BandId::B8 => 0.10,
            BandId::B11 => 0.30,
            BandId::B12 => 0.90,
            _ => background(band),
        },
        // Both NHI indices near -0.025: inside the relaxed candidate band,
        // below the strict hotspot thresholds. Red/NIR sit on the charcoal
        // point so BAI is far above any plausible burn threshold.
        RegionKind::BurnScar => match band {
            BandId::B2 => 0.03,
            BandId::B3 => 0.04,
            BandId::B4 => 0.102,
            BandId::B8 => 0.062,
            BandId::B11 => 0.059,
            BandId::B12 => 0.056,
            _ => background(band),
        },
        RegionKind::Water => match band {
            BandId::B2 => 0.15,
            BandId::B3 => 0.20,
            BandId::B4 => 0.05,
            BandId::B8 => 0.06,
            BandId::B11 => 0.05,
            BandId::B12 => 0.03,
            _ => background(band),
        },
        RegionKind::FireOnWater => match band {
            BandId::B3 => 0.50,
            _ => signature(RegionKind::Fire, band),
        },
        RegionKind::Flood => match band {
            BandId::VV => 0.008,
            BandId::VH => 0.002,
            _ => signature(RegionKind::Water, band),
        },
        RegionKind::PermanentWater => match band {
            BandId::VV => 0.010,
            BandId::VH => 0.003,
            _ => signature(RegionKind::Water, band),
        },
    }
}

/// Generates a scene from the spec. Deterministic for a given seed.
pub fn make_synthetic_scene(spec: &SyntheticSpec) -> Result<SceneBundle, SceneError> {
    if spec.width == 0 || spec.height == 0 {
        return Err(SceneError::InvalidSpec {
            message: format!("dimensions {}x{} must be positive", spec.width, spec.height),
        });
    }
    for r in &spec.regions {
        if r.width == 0 || r.height == 0 {
            return Err(SceneError::InvalidSpec {
                message: "region dimensions must be positive".into(),
            });
        }
        if r.x + r.width > spec.width || r.y + r.height > spec.height {
            return Err(SceneError::InvalidSpec {
                message: format!(
                    "region {:?} at ({},{}) size {}x{} exceeds scene {}x{}",
                    r.kind, r.x, r.y, r.width, r.height, spec.width, spec.height
                ),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut bands = Vec::new();
    for band in spec.band_list() {
        let mut values = vec![background(band); spec.width * spec.height];
        for region in &spec.regions {
            let v = signature(region.kind, band);
            for y in region.y..region.y + region.height {
                let row = y * spec.width;
                values[row + region.x..row + region.x + region.width].fill(v);
            }
        }
        if spec.jitter > 0.0 {
            for v in &mut values {
                *v += rng.gen_range(-spec.jitter..=spec.jitter);
                if band.is_optical() {
                    *v = v.clamp(0.0, MAX_REFLECTANCE);
                } else {
                    *v = v.max(0.0);
                }
            }
        }
        bands.push(BandRaster::new(band, spec.width, spec.height, values)?);
    }
    SceneBundle::new(
        spec.scene_id.clone(),
        bands,
        spec.pixel_size_m,
        spec.label,
        format!("synthetic seed={}", spec.seed),
    )
}

/// Scene dimensions of the standard benchmark dataset: 10 quiet scenes and
/// 10 each with a wildfire or flood, spanning a range of footprints so
/// area-dependent scaling is observable within each group.
const NO_EVENT_DIMS: [usize; 10] = [256, 320, 384, 448, 512, 576, 640, 704, 768, 832];
const EVENT_DIMS: [usize; 10] = [448, 512, 576, 640, 704, 768, 832, 896, 960, 1024];

/// Specs for the standard 30-scene benchmark dataset at 20 m/px.
pub fn benchmark_dataset(seed: u64) -> Vec<SyntheticSpec> {
    let mut specs = Vec::new();
    for (i, &dim) in NO_EVENT_DIMS.iter().enumerate() {
        specs.push(SyntheticSpec::new(
            format!("quiet-{dim:04}"),
            dim,
            dim,
            seed.wrapping_add(i as u64),
        ));
    }
    for (i, &dim) in EVENT_DIMS.iter().enumerate() {
        let side = dim / 16;
        specs.push(
            SyntheticSpec::new(
                format!("fire-{dim:04}"),
                dim,
                dim,
                seed.wrapping_add(100 + i as u64),
            )
            .with_region(RegionKind::Fire, dim / 8, dim / 8, side, side)
            .with_label(EventType::Wildfire),
        );
    }
    for (i, &dim) in EVENT_DIMS.iter().enumerate() {
        specs.push(
            SyntheticSpec::new(
                format!("flood-{dim:04}"),
                dim,
                dim,
                seed.wrapping_add(200 + i as u64),
            )
            .with_region(RegionKind::Flood, 0, 0, dim / 2, dim / 2)
            .with_label(EventType::Flood),
        );
    }
    specs
}

/// Scene dimensions of the two-regime correlation dataset. Quiet scenes and
/// wildfire scenes sit at small-to-mid footprints while flood scenes occupy
/// the large end, so each stratum sweeps a wide tile-count range while the
/// per-hazard compute curves stay monotone within the event stratum.
const CORR_NO_EVENT_DIMS: [usize; 10] = [256, 256, 384, 384, 512, 512, 640, 640, 768, 768];
const CORR_FIRE_DIMS: [usize; 10] = [256, 384, 384, 512, 512, 640, 640, 768, 768, 896];
const CORR_FLOOD_DIMS: [usize; 10] = [640, 768, 768, 896, 896, 1024, 1024, 896, 1024, 1024];

/// Specs for the 30-scene two-regime correlation dataset at 20 m/px.
///
/// Designed for the area-versus-speedup study: pair it with a cost model
/// whose early-warning stage has a large fixed cost and whose specialist
/// tools cost purely per tile, so speed-up varies strongly with scene area
/// inside both the no-event and event strata.
pub fn correlation_dataset(seed: u64) -> Vec<SyntheticSpec> {
    let mut specs = Vec::new();
    for (i, &dim) in CORR_NO_EVENT_DIMS.iter().enumerate() {
        specs.push(SyntheticSpec::new(
            format!("corr-quiet-{dim:04}-{i:02}"),
            dim,
            dim,
            seed.wrapping_add(i as u64),
        ));
    }
    for (i, &dim) in CORR_FIRE_DIMS.iter().enumerate() {
        let side = dim / 16;
        specs.push(
            SyntheticSpec::new(
                format!("corr-fire-{dim:04}-{i:02}"),
                dim,
                dim,
                seed.wrapping_add(100 + i as u64),
            )
            .with_region(RegionKind::Fire, dim / 8, dim / 8, side, side)
            .with_label(EventType::Wildfire),
        );
    }
    for (i, &dim) in CORR_FLOOD_DIMS.iter().enumerate() {
        specs.push(
            SyntheticSpec::new(
                format!("corr-flood-{dim:04}-{i:02}"),
                dim,
                dim,
                seed.wrapping_add(200 + i as u64),
            )
            .with_region(RegionKind::Flood, 0, 0, dim / 2, dim / 2)
            .with_label(EventType::Flood),
        );
    }
    specs
}

/// Reference mask of permanent water bodies for the same spec.
pub fn synthetic_permanent_water(spec: &SyntheticSpec) -> BitMask {
    let mut mask = BitMask::new(spec.width, spec.height);
    for region in &spec.regions {
        if region.kind == RegionKind::PermanentWater {
            for y in region.y..region.y + region.height {
                for x in region.x..region.x + region.width {
                    mask.set(x, y, true);
                }
            }
        }
    }
    mask
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{compute_mndwi, compute_nhi_swir, ThresholdConfig};

    #[test]
    fn same_seed_identical_scenes() {
        let spec = SyntheticSpec::new("d", 64, 64, 7).with_region(RegionKind::Fire, 5, 5, 10, 10);
        assert_eq!(
            make_synthetic_scene(&spec).unwrap(),
            make_synthetic_scene(&spec).unwrap()
        );
    }

    #[test]
    fn fire_region_is_hot_by_construction() {
        let cfg = ThresholdConfig::default();
        let spec = SyntheticSpec::new("f", 64, 64, 1).with_region(RegionKind::Fire, 5, 5, 10, 10);
        let scene = make_synthetic_scene(&spec).unwrap();
        let nhi = compute_nhi_swir(&scene, cfg.eps_denominator).unwrap();
        for y in 5..15 {
            for x in 5..15 {
                assert!(nhi.get(x, y) > 0.0, "fire pixel ({x},{y}) not hot");
            }
        }
        assert!(nhi.get(0, 0) < 0.0, "background pixel reads hot");
    }

    #[test]
    fn water_region_is_wet_by_construction() {
        let cfg = ThresholdConfig::default();
        let spec = SyntheticSpec::new("w", 32, 32, 2).with_region(RegionKind::Water, 0, 0, 8, 8);
        let scene = make_synthetic_scene(&spec).unwrap();
        let mndwi = compute_mndwi(&scene, cfg.eps_denominator).unwrap();
        assert!(mndwi.get(3, 3) > 0.0);
        assert!(mndwi.get(20, 20) < 0.0);
    }

    #[test]
    fn invalid_region_rejected() {
        let spec = SyntheticSpec::new("bad", 32, 32, 0).with_region(RegionKind::Fire, 30, 30, 8, 8);
        assert!(matches!(
            make_synthetic_scene(&spec),
            Err(SceneError::InvalidSpec { .. })
        ));
    }

    #[test]
    fn permanent_water_mask_marks_only_its_regions() {
        let spec = SyntheticSpec::new("p", 32, 32, 3)
            .with_region(RegionKind::Flood, 0, 0, 8, 8)
            .with_region(RegionKind::PermanentWater, 16, 16, 4, 4);
        let mask = synthetic_permanent_water(&spec);
        assert_eq!(mask.count_ones(), 16);
        assert!(mask.get(17, 17));
        assert!(!mask.get(1, 1));
    }
}
