//! On-disk scene format, dataset manifest, and band access.
//!
//! A scene bundle is a directory holding `meta.json` plus one flat
//! little-endian f32 row-major binary per band, named `<BandId>.bin`.
//! Optical reflectance is bottom-of-atmosphere in `[0, 1.5]`; SAR values are
//! linear backscatter. Nodata is NaN and every downstream tool treats NaN
//! pixels as mask-false.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agents::EventType;
use crate::mask::BitMask;
use crate::SCHEMA_VERSION;

/// Spectral / polarization channels a scene may carry.
///
/// Optical bands follow Sentinel-2 MSI naming; `Vv`/`Vh` are the Sentinel-1
/// GRD polarizations. The mapping is fixed and exhaustive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BandId {
    /// Blue.
    B2,
    /// Green.
    B3,
    /// Red.
    B4,
    /// Near infrared.
    B8,
    /// Shortwave infrared 1.
    B11,
    /// Shortwave infrared 2.
    B12,
    /// SAR co-polarized backscatter (linear).
    VV,
    /// SAR cross-polarized backscatter (linear).
    VH,
}

impl BandId {
    pub const ALL: [BandId; 8] = [
        BandId::B2,
        BandId::B3,
        BandId::B4,
        BandId::B8,
        BandId::B11,
        BandId::B12,
        BandId::VV,
        BandId::VH,
    ];

    /// Optical bands carry surface reflectance; SAR bands linear backscatter.
    pub fn is_optical(self) -> bool {
        !matches!(self, BandId::VV | BandId::VH)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BandId::B2 => "B2",
            BandId::B3 => "B3",
            BandId::B4 => "B4",
            BandId::B8 => "B8",
            BandId::B11 => "B11",
            BandId::B12 => "B12",
            BandId::VV => "VV",
            BandId::VH => "VH",
        }
    }
}

impl fmt::Display for BandId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BandId {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        BandId::ALL
            .iter()
            .copied()
            .find(|b| b.as_str() == s)
            .ok_or(())
    }
}

/// Upper bound for valid optical reflectance; slight over-1 artifacts are
/// tolerated.
pub const MAX_REFLECTANCE: f32 = 1.5;

/// One band of a scene: a row-major f32 grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BandRaster {
    pub band: BandId,
    pub width: usize,
    pub height: usize,
    values: Vec<f32>,
}

impl BandRaster {
    pub fn new(
        band: BandId,
        width: usize,
        height: usize,
        values: Vec<f32>,
    ) -> Result<Self, SceneError> {
        if width == 0 || height == 0 {
            return Err(SceneError::InvalidDimensions { width, height });
        }
        if values.len() != width * height {
            return Err(SceneError::ValueCountMismatch {
                band,
                expected: width * height,
                actual: values.len(),
            });
        }
        if band.is_optical() {
            for &v in &values {
                if !v.is_nan() && !(0.0..=MAX_REFLECTANCE).contains(&v) {
                    return Err(SceneError::ReflectanceOutOfRange { band, value: v });
                }
            }
        } else {
            for &v in &values {
                if !v.is_nan() && v < 0.0 {
                    return Err(SceneError::NegativeBackscatter { band, value: v });
                }
            }
        }
        Ok(Self {
            band,
            width,
            height,
            values,
        })
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn get(&self, x: usize, y: usize) -> f32 {
        self.values[y * self.width + x]
    }
}

/// A multiband raster scene with geo metadata: the unit of work flowing
/// through the pipeline. Immutable after load; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneBundle {
    pub scene_id: String,
    pub bands: BTreeMap<BandId, BandRaster>,
    pub pixel_size_m: f64,
    pub label: EventType,
    pub acquisition_note: String,
}

impl SceneBundle {
    pub fn new(
        scene_id: impl Into<String>,
        bands: Vec<BandRaster>,
        pixel_size_m: f64,
        label: EventType,
        acquisition_note: impl Into<String>,
    ) -> Result<Self, SceneError> {
        if !(pixel_size_m > 0.0) {
            return Err(SceneError::InvalidPixelSize { pixel_size_m });
        }
        let mut map = BTreeMap::new();
        let mut dims: Option<(usize, usize)> = None;
        for raster in bands {
            match dims {
                None => dims = Some((raster.width, raster.height)),
                Some((w, h)) => {
                    if raster.width != w || raster.height != h {
                        return Err(SceneError::BandSizeMismatch {
                            band: raster.band,
                            expected: (w, h),
                            actual: (raster.width, raster.height),
                        });
                    }
                }
            }
            map.insert(raster.band, raster);
        }
        if map.is_empty() {
            return Err(SceneError::NoBands);
        }
        Ok(Self {
            scene_id: scene_id.into(),
            bands: map,
            pixel_size_m,
            label,
            acquisition_note: acquisition_note.into(),
        })
    }

    pub fn width(&self) -> usize {
        self.bands.values().next().map(|b| b.width).unwrap_or(0)
    }

    pub fn height(&self) -> usize {
        self.bands.values().next().map(|b| b.height).unwrap_or(0)
    }

    pub fn band(&self, id: BandId) -> Option<&BandRaster> {
        self.bands.get(&id)
    }

    pub fn has_bands(&self, ids: &[BandId]) -> bool {
        ids.iter().all(|id| self.bands.contains_key(id))
    }
}

/// Ground area covered by the scene.
pub fn scene_area_km2(scene: &SceneBundle) -> f64 {
    let px = scene.width() as f64 * scene.height() as f64;
    px * scene.pixel_size_m * scene.pixel_size_m / 1e6
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub scene_id: String,
    pub path: String,
    pub label: EventType,
}

/// Index of a dataset: one entry per scene directory, unique scene ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub version: u32,
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn new(entries: Vec<ManifestEntry>) -> Result<Self, SceneError> {
        let mut seen = std::collections::BTreeSet::new();
        for e in &entries {
            if !seen.insert(e.scene_id.clone()) {
                return Err(SceneError::DuplicateSceneId {
                    scene_id: e.scene_id.clone(),
                });
            }
        }
        Ok(Self {
            version: 1,
            entries,
        })
    }

    pub fn load(path: &Path) -> Result<Self, SceneError> {
        let data = fs::read(path).map_err(|e| SceneError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let manifest: DatasetManifest =
            serde_json::from_slice(&data).map_err(|e| SceneError::InvalidMetadata {
                path: path.to_path_buf(),
                message: e.to_string(),
            })?;
        DatasetManifest::new(manifest.entries)
    }

    pub fn save(&self, path: &Path) -> Result<(), SceneError> {
        let json = serde_json::to_string_pretty(self).expect("manifest serializes");
        fs::write(path, json.as_bytes()).map_err(|e| SceneError::Io {
            path: path.to_path_buf(),
            source: e,
        })
    }

    pub fn find(&self, scene_id: &str) -> Option<&ManifestEntry> {
        self.entries.iter().find(|e| e.scene_id == scene_id)
    }
}

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("missing metadata file: {path}")]
    MissingMetadata { path: PathBuf },
    #[error("invalid metadata in {path}: {message}")]
    InvalidMetadata { path: PathBuf, message: String },
    #[error("unknown band id {name:?} in {path}")]
    UnknownBandId { name: String, path: PathBuf },
    #[error("band {band} is {actual:?} pixels, expected {expected:?}")]
    BandSizeMismatch {
        band: BandId,
        expected: (usize, usize),
        actual: (usize, usize),
    },
    #[error("band {band} has {actual} values, expected {expected}")]
    ValueCountMismatch {
        band: BandId,
        expected: usize,
        actual: usize,
    },
    #[error("truncated band file {path}: holds {actual_floats} floats, header declares {expected_floats}")]
    TruncatedBandFile {
        path: PathBuf,
        expected_floats: usize,
        actual_floats: usize,
    },
    #[error("invalid raster dimensions {width}x{height}")]
    InvalidDimensions { width: usize, height: usize },
    #[error("invalid pixel size {pixel_size_m}")]
    InvalidPixelSize { pixel_size_m: f64 },
    #[error("band {band}: optical reflectance {value} outside [0, 1.5]")]
    ReflectanceOutOfRange { band: BandId, value: f32 },
    #[error("band {band}: negative backscatter {value}")]
    NegativeBackscatter { band: BandId, value: f32 },
    #[error("scene has no bands")]
    NoBands,
    #[error("duplicate scene id {scene_id} in manifest")]
    DuplicateSceneId { scene_id: String },
    #[error("invalid synthetic spec: {message}")]
    InvalidSpec { message: String },
    #[error("io error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct SceneMeta {
    schema_version: u32,
    scene_id: String,
    width: usize,
    height: usize,
    pixel_size_m: f64,
    #[serde(default)]
    label: EventType,
    bands: Vec<String>,
    #[serde(default)]
    acquisition_note: String,
}

/// Name of the optional sidecar boolean raster marking permanent water.
pub const PERMANENT_WATER_FILE: &str = "permanent_water.bin";

/// Writes a scene bundle directory. Two saves of the same scene are
/// byte-identical.
pub fn save_scene(scene: &SceneBundle, path: &Path) -> Result<(), SceneError> {
    fs::create_dir_all(path).map_err(|e| SceneError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let meta = SceneMeta {
        schema_version: SCHEMA_VERSION,
        scene_id: scene.scene_id.clone(),
        width: scene.width(),
        height: scene.height(),
        pixel_size_m: scene.pixel_size_m,
        label: scene.label,
        bands: scene.bands.keys().map(|b| b.to_string()).collect(),
        acquisition_note: scene.acquisition_note.clone(),
    };
    let meta_path = path.join("meta.json");
    let json = serde_json::to_string_pretty(&meta).expect("meta serializes");
    fs::write(&meta_path, json.as_bytes()).map_err(|e| SceneError::Io {
        path: meta_path,
        source: e,
    })?;
    for raster in scene.bands.values() {
        let band_path = path.join(format!("{}.bin", raster.band));
        let file = fs::File::create(&band_path).map_err(|e| SceneError::Io {
            path: band_path.clone(),
            source: e,
        })?;
        let mut writer = std::io::BufWriter::new(file);
        for v in raster.values() {
            writer
                .write_all(&v.to_le_bytes())
                .map_err(|e| SceneError::Io {
                    path: band_path.clone(),
                    source: e,
                })?;
        }
        writer.flush().map_err(|e| SceneError::Io {
            path: band_path.clone(),
            source: e,
        })?;
    }
    Ok(())
}

/// Loads and validates a scene bundle directory.
pub fn load_scene(path: &Path) -> Result<SceneBundle, SceneError> {
    let meta_path = path.join("meta.json");
    if !meta_path.is_file() {
        return Err(SceneError::MissingMetadata { path: meta_path });
    }
    let data = fs::read(&meta_path).map_err(|e| SceneError::Io {
        path: meta_path.clone(),
        source: e,
    })?;
    let meta: SceneMeta =
        serde_json::from_slice(&data).map_err(|e| SceneError::InvalidMetadata {
            path: meta_path.clone(),
            message: e.to_string(),
        })?;
    if meta.width == 0 || meta.height == 0 {
        return Err(SceneError::InvalidDimensions {
            width: meta.width,
            height: meta.height,
        });
    }
    let mut bands = Vec::with_capacity(meta.bands.len());
    for name in &meta.bands {
        let band: BandId = name.parse().map_err(|()| SceneError::UnknownBandId {
            name: name.clone(),
            path: meta_path.clone(),
        })?;
        let band_path = path.join(format!("{band}.bin"));
        let values = read_f32_file(&band_path, meta.width * meta.height)?;
        bands.push(BandRaster::new(band, meta.width, meta.height, values)?);
    }
    SceneBundle::new(
        meta.scene_id,
        bands,
        meta.pixel_size_m,
        meta.label,
        meta.acquisition_note,
    )
}

fn read_f32_file(path: &Path, expected_floats: usize) -> Result<Vec<f32>, SceneError> {
    let mut file = fs::File::open(path).map_err(|e| SceneError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut raw = Vec::new();
    file.read_to_end(&mut raw).map_err(|e| SceneError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    if raw.len() != expected_floats * 4 {
        return Err(SceneError::TruncatedBandFile {
            path: path.to_path_buf(),
            expected_floats,
            actual_floats: raw.len() / 4,
        });
    }
    Ok(raw
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect())
}

/// Loads the optional permanent-water sidecar mask of a scene directory.
pub fn load_permanent_water(scene_dir: &Path) -> Result<Option<BitMask>, SceneError> {
    let path = scene_dir.join(PERMANENT_WATER_FILE);
    if !path.is_file() {
        return Ok(None);
    }
    let meta = load_meta_dims(scene_dir)?;
    let raw = fs::read(&path).map_err(|e| SceneError::Io {
        path: path.clone(),
        source: e,
    })?;
    if raw.len() != meta.0 * meta.1 {
        return Err(SceneError::TruncatedBandFile {
            path,
            expected_floats: meta.0 * meta.1,
            actual_floats: raw.len(),
        });
    }
    let bits = raw.iter().map(|&b| b != 0).collect();
    Ok(Some(BitMask::from_bits(meta.0, meta.1, bits)))
}

/// Writes a permanent-water sidecar next to a saved scene.
pub fn save_permanent_water(scene_dir: &Path, mask: &BitMask) -> Result<(), SceneError> {
    let path = scene_dir.join(PERMANENT_WATER_FILE);
    let bytes: Vec<u8> = mask.bits().iter().map(|&b| u8::from(b)).collect();
    fs::write(&path, bytes).map_err(|e| SceneError::Io { path, source: e })
}

fn load_meta_dims(scene_dir: &Path) -> Result<(usize, usize), SceneError> {
    let meta_path = scene_dir.join("meta.json");
    let data = fs::read(&meta_path).map_err(|e| SceneError::Io {
        path: meta_path.clone(),
        source: e,
    })?;
    let meta: SceneMeta =
        serde_json::from_slice(&data).map_err(|e| SceneError::InvalidMetadata {
            path: meta_path,
            message: e.to_string(),
        })?;
    Ok((meta.width, meta.height))
}

/// Shared handle used when many readers work over one scene.
pub type SharedScene = Arc<SceneBundle>;
