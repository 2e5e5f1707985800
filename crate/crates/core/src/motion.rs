//! Whole-frame motion estimation and motion compensation.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::baselines::{ds_search_traced, tss_search_traced};
use crate::frame::{partition, BlockRef, LumaFrame, MotionVector};
use crate::search::{debm_search_traced, full_search_traced, BlockResult, SearchConfig};
use crate::trace::PatternTrace;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Algorithm {
    Fsa,
    Debm,
    Tss,
    Ds,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Fsa, Algorithm::Debm, Algorithm::Tss, Algorithm::Ds];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Fsa => "fsa",
            Algorithm::Debm => "debm",
            Algorithm::Tss => "tss",
            Algorithm::Ds => "ds",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(alloc::format!("unknown algorithm `{s}` (expected fsa, debm, tss or ds)")))
    }
}

/// Motion vectors of every block of a frame, in partition order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MvField {
    pub blocks: Vec<BlockRef>,
    pub results: Vec<BlockResult>,
}

impl MvField {
    pub fn mv(&self, index: usize) -> MotionVector {
        self.results[index].mv
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BlockRef, &BlockResult)> {
        self.blocks.iter().zip(&self.results)
    }

    pub fn total_evaluations(&self) -> u64 {
        self.results.iter().map(|r| r.evaluations as u64).sum()
    }

    pub fn total_estimations(&self) -> u64 {
        self.results.iter().map(|r| r.estimations as u64).sum()
    }
}

/// Seed of the DE search for the block at row-major `index`.
#[inline]
pub fn block_seed(seed: u64, index: usize) -> u64 {
    seed ^ index as u64
}

/// Runs one algorithm on one block. `config.de.rng_seed` is used as-is.
pub fn search_block(
    algorithm: Algorithm,
    current: &LumaFrame,
    previous: &LumaFrame,
    block: BlockRef,
    config: &SearchConfig,
) -> Result<(BlockResult, PatternTrace)> {
    match algorithm {
        Algorithm::Fsa => full_search_traced(current, previous, block, config.w),
        Algorithm::Debm => debm_search_traced(current, previous, block, config).map(|s| (s.result, s.pattern)),
        Algorithm::Tss => tss_search_traced(current, previous, block, config.w),
        Algorithm::Ds => ds_search_traced(current, previous, block, config.w),
    }
}

/// Estimates motion for every block of `current` against `previous`. Block
/// `i` of a DE search is seeded with `config.de.rng_seed ^ i`.
pub fn estimate_frame(
    current: &LumaFrame,
    previous: &LumaFrame,
    config: &SearchConfig,
    algorithm: Algorithm,
) -> Result<MvField> {
    let blocks = frame_blocks(current, previous, config)?;
    let results = blocks
        .iter()
        .enumerate()
        .map(|(i, &block)| estimate_block(current, previous, config, algorithm, i, block).map(|(r, _)| r))
        .collect::<Result<Vec<_>>>()?;
    Ok(MvField { blocks, results })
}

/// Validates a frame pair and returns its block partition.
pub fn frame_blocks(current: &LumaFrame, previous: &LumaFrame, config: &SearchConfig) -> Result<Vec<BlockRef>> {
    if !current.same_geometry(previous) {
        return Err(Error::InvalidInput(alloc::format!(
            "frame geometry differs: {}x{} vs {}x{}",
            current.width(),
            current.height(),
            previous.width(),
            previous.height()
        )));
    }
    config.validate()?;
    partition(current.width(), current.height(), config.n)
}

/// One block of [`estimate_frame`], with the per-block seed applied.
pub fn estimate_block(
    current: &LumaFrame,
    previous: &LumaFrame,
    config: &SearchConfig,
    algorithm: Algorithm,
    index: usize,
    block: BlockRef,
) -> Result<(BlockResult, PatternTrace)> {
    let mut local = *config;
    local.de.rng_seed = block_seed(config.de.rng_seed, index);
    search_block(algorithm, current, previous, block, &local)
}

/// Builds the prediction of the current frame: every block is copied from
/// `previous` at its motion vector; samples outside the partition are copied
/// unchanged.
pub fn compensate(previous: &LumaFrame, field: &MvField) -> Result<LumaFrame> {
    let mut out = previous.clone();
    for (block, result) in field.iter() {
        let mv = result.mv;
        if block.x + block.n > previous.width()
            || block.y + block.n > previous.height()
            || !block.accepts(mv, previous.width(), previous.height())
        {
            return Err(Error::ContractViolation(alloc::format!(
                "motion vector ({}, {}) of block ({}, {}) leaves the frame",
                mv.u,
                mv.v,
                block.x,
                block.y
            )));
        }
        let sx = (block.x as i64 + mv.u as i64) as usize;
        let sy = (block.y as i64 + mv.v as i64) as usize;
        for j in 0..block.n {
            let src = &previous.row(sy + j)[sx..sx + block.n];
            out.row_mut(block.y + j)[block.x..block.x + block.n].copy_from_slice(src);
        }
    }
    Ok(out)
}
