//! Spectral indices and detection thresholds.
//!
//! Four per-pixel indices drive the wildfire and flood tools:
//!
//! - `NHI_SWIR  = (SWIR2 - SWIR1) / (SWIR2 + SWIR1)` — active-fire hotspot cue
//! - `NHI_SWNIR = (SWIR1 - NIR)   / (SWIR1 + NIR)`   — complementary hotspot cue
//! - `MNDWI     = (Green - SWIR1) / (Green + SWIR1)` — water cue, suppresses
//!   fire false positives over water bodies
//! - `BAI       = 1 / ((0.1 - Red)^2 + (0.06 - NIR)^2)` — burn-scar cue, large
//!   near the charcoal reflectance point (0.1, 0.06)
//!
//! Pixels where any input is NaN or a denominator falls under the guard
//! epsilon evaluate to NaN, and NaN is mask-false everywhere downstream.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mask::BitMask;
use crate::scene::{BandId, SceneBundle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexKind {
    NhiSwir,
    NhiSwnir,
    Mndwi,
    Bai,
}

/// Per-pixel index values over a scene.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexRaster {
    pub kind: IndexKind,
    pub width: usize,
    pub height: usize,
    pub values: Vec<f32>,
}

impl IndexRaster {
    pub fn get(&self, x: usize, y: usize) -> f32 {
        self.values[y * self.width + x]
    }

    /// Mask of pixels with a finite value strictly above `threshold`.
    pub fn above(&self, threshold: f32) -> BitMask {
        let bits = self
            .values
            .iter()
            .map(|&v| v.is_finite() && v > threshold)
            .collect();
        BitMask::from_bits(self.width, self.height, bits)
    }
}

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("missing band {band} required by {operation}")]
    MissingBand {
        band: BandId,
        operation: &'static str,
    },
    #[error("invalid threshold config: {message}")]
    InvalidConfig { message: String },
}

/// Detection thresholds for every tool; all values are configurable because
/// the underlying method fixes only the sign conventions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThresholdConfig {
    /// Strict hotspot threshold on NHI_SWIR.
    pub nhi_swir_hot: f32,
    /// Strict hotspot threshold on NHI_SWNIR.
    pub nhi_swnir_hot: f32,
    /// Relaxed candidate threshold on NHI_SWIR (burned-area stage).
    pub nhi_swir_relaxed: f32,
    /// Relaxed candidate threshold on NHI_SWNIR (burned-area stage).
    pub nhi_swnir_relaxed: f32,
    /// Water threshold on MNDWI.
    pub mndwi_water: f32,
    /// Burn threshold on BAI.
    pub bai_burn: f32,
    /// Scene fraction of flooded pixels that triggers a flood detection.
    pub flood_fraction_min: f64,
    /// Minimum fire / burned area that triggers a detection.
    pub fire_area_min_km2: f64,
    /// Denominator guard; smaller magnitudes evaluate to NaN.
    pub eps_denominator: f32,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self {
            nhi_swir_hot: 0.0,
            nhi_swnir_hot: 0.0,
            nhi_swir_relaxed: -0.05,
            nhi_swnir_relaxed: -0.05,
            mndwi_water: 0.0,
            bai_burn: 100.0,
            flood_fraction_min: 0.005,
            fire_area_min_km2: 0.01,
            eps_denominator: 1e-6,
        }
    }
}

impl ThresholdConfig {
    /// Relaxed thresholds must not exceed their strict counterparts.
    pub fn validate(&self) -> Result<(), SpectralError> {
        if self.nhi_swir_relaxed > self.nhi_swir_hot {
            return Err(SpectralError::InvalidConfig {
                message: format!(
                    "nhi_swir_relaxed {} > nhi_swir_hot {}",
                    self.nhi_swir_relaxed, self.nhi_swir_hot
                ),
            });
        }
        if self.nhi_swnir_relaxed > self.nhi_swnir_hot {
            return Err(SpectralError::InvalidConfig {
                message: format!(
                    "nhi_swnir_relaxed {} > nhi_swnir_hot {}",
                    self.nhi_swnir_relaxed, self.nhi_swnir_hot
                ),
            });
        }
        if !(self.eps_denominator > 0.0) {
            return Err(SpectralError::InvalidConfig {
                message: "eps_denominator must be positive".into(),
            });
        }
        Ok(())
    }
}

fn require<'a>(
    scene: &'a SceneBundle,
    band: BandId,
    operation: &'static str,
) -> Result<&'a crate::scene::BandRaster, SpectralError> {
    scene
        .band(band)
        .ok_or(SpectralError::MissingBand { band, operation })
}

fn normalized_difference(
    kind: IndexKind,
    a: &crate::scene::BandRaster,
    b: &crate::scene::BandRaster,
    eps: f32,
) -> IndexRaster {
    let values = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(&x, &y)| {
            let denom = x + y;
            if x.is_nan() || y.is_nan() || denom.abs() < eps {
                f32::NAN
            } else {
                (x - y) / denom
            }
        })
        .collect();
    IndexRaster {
        kind,
        width: a.width,
        height: a.height,
        values,
    }
}

/// `(SWIR2 - SWIR1) / (SWIR2 + SWIR1)` from B12 and B11.
pub fn compute_nhi_swir(scene: &SceneBundle, eps: f32) -> Result<IndexRaster, SpectralError> {
    let swir2 = require(scene, BandId::B12, "compute_nhi_swir")?;
    let swir1 = require(scene, BandId::B11, "compute_nhi_swir")?;
    Ok(normalized_difference(IndexKind::NhiSwir, swir2, swir1, eps))
}

/// `(SWIR1 - NIR) / (SWIR1 + NIR)` from B11 and B8.
pub fn compute_nhi_swnir(scene: &SceneBundle, eps: f32) -> Result<IndexRaster, SpectralError> {
    let swir1 = require(scene, BandId::B11, "compute_nhi_swnir")?;
    let nir = require(scene, BandId::B8, "compute_nhi_swnir")?;
    Ok(normalized_difference(IndexKind::NhiSwnir, swir1, nir, eps))
}

/// `(Green - SWIR1) / (Green + SWIR1)` from B3 and B11.
pub fn compute_mndwi(scene: &SceneBundle, eps: f32) -> Result<IndexRaster, SpectralError> {
    let green = require(scene, BandId::B3, "compute_mndwi")?;
    let swir1 = require(scene, BandId::B11, "compute_mndwi")?;
    Ok(normalized_difference(IndexKind::Mndwi, green, swir1, eps))
}

/// `1 / ((0.1 - Red)^2 + (0.06 - NIR)^2)` from B4 and B8.
pub fn compute_bai(scene: &SceneBundle, eps: f32) -> Result<IndexRaster, SpectralError> {
    let red = require(scene, BandId::B4, "compute_bai")?;
    let nir = require(scene, BandId::B8, "compute_bai")?;
    let values = red
        .values()
        .iter()
        .zip(nir.values())
        .map(|(&r, &n)| {
            let denom = (0.1 - r) * (0.1 - r) + (0.06 - n) * (0.06 - n);
            if r.is_nan() || n.is_nan() || denom < eps {
                f32::NAN
            } else {
                1.0 / denom
            }
        })
        .collect();
    Ok(IndexRaster {
        kind: IndexKind::Bai,
        width: red.width,
        height: red.height,
        values,
    })
}

/// Pixels where MNDWI is finite and above the water threshold.
pub fn water_mask(scene: &SceneBundle, cfg: &ThresholdConfig) -> Result<BitMask, SpectralError> {
    Ok(compute_mndwi(scene, cfg.eps_denominator)?.above(cfg.mndwi_water))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::EventType;
    use crate::scene::BandRaster;

    fn scene_of(pairs: &[(BandId, f32)]) -> SceneBundle {
        let bands = pairs
            .iter()
            .map(|&(b, v)| BandRaster::new(b, 2, 2, vec![v; 4]).unwrap())
            .collect();
        SceneBundle::new("t", bands, 20.0, EventType::None, "").unwrap()
    }

    const EPS: f32 = 1e-6;

    #[test]
    fn nhi_swir_hand_values() {
        let s = scene_of(&[(BandId::B12, 0.3), (BandId::B11, 0.3)]);
        assert_eq!(compute_nhi_swir(&s, EPS).unwrap().get(0, 0), 0.0);

        let s = scene_of(&[(BandId::B12, 0.6), (BandId::B11, 0.2)]);
        assert!((compute_nhi_swir(&s, EPS).unwrap().get(0, 0) - 0.5).abs() < 1e-6);

        let s = scene_of(&[(BandId::B12, 0.0), (BandId::B11, 0.0)]);
        assert!(compute_nhi_swir(&s, EPS).unwrap().get(0, 0).is_nan());
    }

    #[test]
    fn nhi_swnir_hand_values() {
        let s = scene_of(&[(BandId::B11, 0.4), (BandId::B8, 0.4)]);
        assert_eq!(compute_nhi_swnir(&s, EPS).unwrap().get(0, 0), 0.0);

        let s = scene_of(&[(BandId::B11, 0.9), (BandId::B8, 0.1)]);
        assert!((compute_nhi_swnir(&s, EPS).unwrap().get(0, 0) - 0.8).abs() < 1e-6);

        let s = scene_of(&[(BandId::B11, 0.9)]);
        assert!(matches!(
            compute_nhi_swnir(&s, EPS),
            Err(SpectralError::MissingBand { band: BandId::B8, .. })
        ));
    }

    #[test]
    fn mndwi_hand_values() {
        let s = scene_of(&[(BandId::B3, 0.2), (BandId::B11, 0.2)]);
        assert_eq!(compute_mndwi(&s, EPS).unwrap().get(0, 0), 0.0);

        let s = scene_of(&[(BandId::B3, 0.3), (BandId::B11, 0.1)]);
        assert!((compute_mndwi(&s, EPS).unwrap().get(0, 0) - 0.5).abs() < 1e-6);

        let s = scene_of(&[(BandId::B3, 0.05), (BandId::B11, 0.45)]);
        assert!((compute_mndwi(&s, EPS).unwrap().get(0, 0) + 0.8).abs() < 1e-6);
    }

    #[test]
    fn bai_hand_values() {
        let s = scene_of(&[(BandId::B4, 0.1), (BandId::B8, 0.06)]);
        assert!(compute_bai(&s, EPS).unwrap().get(0, 0).is_nan());

        let s = scene_of(&[(BandId::B4, 0.2), (BandId::B8, 0.06)]);
        assert!((compute_bai(&s, EPS).unwrap().get(0, 0) - 100.0).abs() < 1e-3);

        let s = scene_of(&[(BandId::B4, 0.1), (BandId::B8, 0.16)]);
        assert!((compute_bai(&s, EPS).unwrap().get(0, 0) - 100.0).abs() < 1e-3);
    }

    #[test]
    fn water_mask_uniform_scenes() {
        let cfg = ThresholdConfig::default();
        let wet = scene_of(&[(BandId::B3, 0.4), (BandId::B11, 0.05)]);
        assert_eq!(water_mask(&wet, &cfg).unwrap().count_ones(), 4);

        let dry = scene_of(&[(BandId::B3, 0.05), (BandId::B11, 0.4)]);
        assert_eq!(water_mask(&dry, &cfg).unwrap().count_ones(), 0);
    }

    #[test]
    fn relaxed_must_not_exceed_strict() {
        let cfg = ThresholdConfig {
            nhi_swir_relaxed: 0.1,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        assert!(ThresholdConfig::default().validate().is_ok());
    }
}
