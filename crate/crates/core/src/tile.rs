//! Sliding-window tiling and overlap merging.
//!
//! Scenes are cut into overlapping square tiles with a fixed stride. Windows
//! at the right/bottom edge are shifted back so they fit inside the scene,
//! which keeps every tile at full size whenever the scene is at least one
//! tile wide. Overlapping predictions merge with logical OR, so the result is
//! independent of tile processing order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mask::BitMask;

/// Default tile edge, matching the segmentation models' input size.
pub const TILE_SIZE: usize = 256;
/// Default stride: 50% overlap.
pub const DEFAULT_STRIDE: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileWindow {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

#[derive(Debug, Error)]
pub enum TileError {
    #[error("stride {stride} outside [1, {tile}]")]
    InvalidStride { stride: usize, tile: usize },
    #[error("scene dimensions {width}x{height} must be at least 1x1")]
    EmptyScene { width: usize, height: usize },
    #[error("tile mask {actual:?} does not match its window {expected:?}")]
    WindowMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },
}

fn axis_starts(dim: usize, tile: usize, stride: usize) -> Vec<(usize, usize)> {
    if dim <= tile {
        return vec![(0, dim)];
    }
    let mut starts = Vec::new();
    let mut s = 0;
    while s + tile < dim {
        starts.push(s);
        s += stride;
    }
    let last = dim - tile;
    if starts.last() != Some(&last) {
        starts.push(last);
    }
    starts.into_iter().map(|s| (s, tile)).collect()
}

/// Enumerates tile windows in row-major order of their origins. Every pixel
/// is covered by at least one window.
pub fn tile_segment(
    width: usize,
    height: usize,
    tile: usize,
    stride: usize,
) -> Result<Vec<TileWindow>, TileError> {
    if width == 0 || height == 0 {
        return Err(TileError::EmptyScene { width, height });
    }
    if stride == 0 || stride > tile {
        return Err(TileError::InvalidStride { stride, tile });
    }
    let xs = axis_starts(width, tile, stride);
    let ys = axis_starts(height, tile, stride);
    let mut windows = Vec::with_capacity(xs.len() * ys.len());
    for &(y, h) in &ys {
        for &(x, w) in &xs {
            windows.push(TileWindow {
                x,
                y,
                width: w,
                height: h,
            });
        }
    }
    Ok(windows)
}

/// OR-merges per-tile masks into a full-scene mask.
pub fn merge_tile_masks(
    width: usize,
    height: usize,
    tiles: &[(TileWindow, BitMask)],
) -> Result<BitMask, TileError> {
    let mut merged = BitMask::new(width, height);
    for (window, mask) in tiles {
        if mask.width != window.width || mask.height != window.height {
            return Err(TileError::WindowMismatch {
                expected: (window.width, window.height),
                actual: (mask.width, mask.height),
            });
        }
        for ty in 0..window.height {
            for tx in 0..window.width {
                if mask.get(tx, ty) {
                    merged.set(window.x + tx, window.y + ty, true);
                }
            }
        }
    }
    Ok(merged)
}
