//! Luma frames, block geometry and the SAD matching cost.

use alloc::vec::Vec;

use crate::{Error, Result};

/// A grid of 8-bit luminance samples stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LumaFrame {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl LumaFrame {
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput(alloc::format!("empty frame geometry {width}x{height}")));
        }
        if samples.len() != width * height {
            return Err(Error::InvalidInput(alloc::format!(
                "{} samples do not fill a {width}x{height} frame",
                samples.len()
            )));
        }
        Ok(LumaFrame { width, height, samples })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, alloc::vec![value; width * height])
    }

    /// Builds a frame from a sample function `f(x, y)`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        let mut samples = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y));
            }
        }
        Self::new(width, height, samples)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.samples[y * self.width + x]
    }

    #[inline]
    pub fn row(&self, y: usize) -> &[u8] {
        &self.samples[y * self.width..(y + 1) * self.width]
    }

    #[inline]
    pub(crate) fn row_mut(&mut self, y: usize) -> &mut [u8] {
        &mut self.samples[y * self.width..(y + 1) * self.width]
    }

    pub fn same_geometry(&self, other: &LumaFrame) -> bool {
        self.width == other.width && self.height == other.height
    }
}

/// An `n`×`n` block anchored at its top-left sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BlockRef {
    pub x: usize,
    pub y: usize,
    pub n: usize,
}

impl BlockRef {
    /// Whether the block displaced by `mv` lies fully inside a
    /// `width`×`height` frame.
    #[inline]
    pub fn accepts(&self, mv: MotionVector, width: usize, height: usize) -> bool {
        let cx = self.x as i64 + mv.u as i64;
        let cy = self.y as i64 + mv.v as i64;
        cx >= 0 && cy >= 0 && cx + self.n as i64 <= width as i64 && cy + self.n as i64 <= height as i64
    }

    /// Inclusive range of horizontal displacements within `±w` that keep the
    /// block inside a frame of the given width.
    pub fn u_range(&self, w: i32, width: usize) -> (i32, i32) {
        let lo = (-w).max(-(self.x as i64) as i32);
        let hi = (w as i64).min(width as i64 - self.n as i64 - self.x as i64) as i32;
        (lo, hi)
    }

    pub fn v_range(&self, w: i32, height: usize) -> (i32, i32) {
        let lo = (-w).max(-(self.y as i64) as i32);
        let hi = (w as i64).min(height as i64 - self.n as i64 - self.y as i64) as i32;
        (lo, hi)
    }
}

/// Integer displacement from a block to its match in the reference frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MotionVector {
    pub u: i32,
    pub v: i32,
}

impl MotionVector {
    pub const ZERO: MotionVector = MotionVector { u: 0, v: 0 };

    #[inline]
    pub const fn new(u: i32, v: i32) -> Self {
        MotionVector { u, v }
    }
}

/// Splits a frame into non-overlapping `n`×`n` blocks in row-major order.
/// Samples beyond the last whole block column or row are left out.
pub fn partition(width: usize, height: usize, n: usize) -> Result<Vec<BlockRef>> {
    if n == 0 {
        return Err(Error::InvalidConfig("block size must be positive".into()));
    }
    if width < n || height < n {
        return Err(Error::InvalidInput(alloc::format!(
            "{width}x{height} frame is smaller than one {n}x{n} block"
        )));
    }
    let (cols, rows) = (width / n, height / n);
    let mut blocks = Vec::with_capacity(cols * rows);
    for by in 0..rows {
        for bx in 0..cols {
            blocks.push(BlockRef { x: bx * n, y: by * n, n });
        }
    }
    Ok(blocks)
}

/// Sum of absolute differences between `block` in `current` and the block
/// displaced by `mv` in `previous`.
pub fn sad(current: &LumaFrame, previous: &LumaFrame, block: BlockRef, mv: MotionVector) -> Result<u64> {
    if block.x + block.n > current.width || block.y + block.n > current.height {
        return Err(Error::InvalidInput(alloc::format!(
            "block {}x{} at ({}, {}) exceeds the {}x{} frame",
            block.n,
            block.n,
            block.x,
            block.y,
            current.width,
            current.height
        )));
    }
    if !block.accepts(mv, previous.width, previous.height) {
        return Err(Error::InvalidCandidate {
            x: block.x as i64 + mv.u as i64,
            y: block.y as i64 + mv.v as i64,
            n: block.n,
        });
    }
    Ok(sad_unchecked(current, previous, block, mv))
}

/// [`sad`] without the bounds checks; the caller guarantees validity.
#[inline]
pub(crate) fn sad_unchecked(current: &LumaFrame, previous: &LumaFrame, block: BlockRef, mv: MotionVector) -> u64 {
    let n = block.n;
    let cx = (block.x as i64 + mv.u as i64) as usize;
    let cy = (block.y as i64 + mv.v as i64) as usize;
    let mut total = 0u64;
    for j in 0..n {
        let a = &current.row(block.y + j)[block.x..block.x + n];
        let b = &previous.row(cy + j)[cx..cx + n];
        total += a.iter().zip(b).map(|(&p, &q)| p.abs_diff(q) as u32).sum::<u32>() as u64;
    }
    total
}
