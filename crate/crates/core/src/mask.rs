//! Boolean raster masks and the metrics derived from them.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MaskError {
    #[error("mask dimensions {actual:?} do not match {expected:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },
}

/// Boolean raster with the same dimensions as its source scene.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMask {
    pub width: usize,
    pub height: usize,
    bits: Vec<bool>,
}

impl BitMask {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Self {
        assert_eq!(bits.len(), width * height, "bit count must match dims");
        Self {
            width,
            height,
            bits,
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn same_dims(&self, other: &BitMask) -> Result<(), MaskError> {
        if self.width != other.width || self.height != other.height {
            return Err(MaskError::DimensionMismatch {
                expected: (self.width, self.height),
                actual: (other.width, other.height),
            });
        }
        Ok(())
    }

    pub fn and(&self, other: &BitMask) -> Result<BitMask, MaskError> {
        self.same_dims(other)?;
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(&a, &b)| a && b)
            .collect();
        Ok(BitMask::from_bits(self.width, self.height, bits))
    }

    pub fn or(&self, other: &BitMask) -> Result<BitMask, MaskError> {
        self.same_dims(other)?;
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(&a, &b)| a || b)
            .collect();
        Ok(BitMask::from_bits(self.width, self.height, bits))
    }

    pub fn and_not(&self, other: &BitMask) -> Result<BitMask, MaskError> {
        self.same_dims(other)?;
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(&a, &b)| a && !b)
            .collect();
        Ok(BitMask::from_bits(self.width, self.height, bits))
    }

    pub fn is_subset_of(&self, other: &BitMask) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub fn intersects(&self, other: &BitMask) -> bool {
        self.bits.iter().zip(&other.bits).any(|(&a, &b)| a && b)
    }
}

/// Ground area covered by the set pixels.
pub fn mask_area_km2(mask: &BitMask, pixel_size_m: f64) -> f64 {
    mask.count_ones() as f64 * pixel_size_m * pixel_size_m / 1e6
}

/// Number of 8-connected components of true pixels.
pub fn connected_components(mask: &BitMask) -> usize {
    let (w, h) = (mask.width, mask.height);
    let mut visited = vec![false; w * h];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..w * h {
        if !mask.bits[start] || visited[start] {
            continue;
        }
        count += 1;
        visited[start] = true;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            let (x, y) = (idx % w, idx / w);
            for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let nx = x as i64 + dx;
                    let ny = y as i64 + dy;
                    if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                        continue;
                    }
                    let n = ny as usize * w + nx as usize;
                    if mask.bits[n] && !visited[n] {
                        visited[n] = true;
                        stack.push(n);
                    }
                }
            }
        }
    }
    count
}
