//! Full search and the differential-evolution block matcher.

use alloc::vec::Vec;

use crate::de::{self, Bounds, DeParams, Fitness, FitnessKind, Outcome};
use crate::frame::{sad_unchecked, BlockRef, LumaFrame, MotionVector};
use crate::strategy::{HistoryStore, StrategyParams};
use crate::trace::PatternTrace;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchConfig {
    /// Maximum displacement on each axis.
    pub w: i32,
    /// Block side.
    pub n: usize,
    pub de: DeParams,
    pub strategy: StrategyParams,
    /// Axial offset of the four non-central initial individuals. Clamped to
    /// `w`.
    pub pattern_offset: i32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            w: 7,
            n: 16,
            de: DeParams::default(),
            strategy: StrategyParams::default(),
            pattern_offset: 4,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        check_window(self.w)?;
        if self.n == 0 {
            return Err(Error::InvalidConfig("block size must be positive".into()));
        }
        if self.pattern_offset < 1 {
            return Err(Error::InvalidConfig("initial pattern offset must be positive".into()));
        }
        self.de.validate()?;
        self.strategy.validate()
    }
}

/// Outcome of one block search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BlockResult {
    pub mv: MotionVector,
    pub sad: u64,
    /// True SAD computations.
    pub evaluations: u32,
    /// Fitness values copied from a neighbour instead of computed.
    pub estimations: u32,
    /// Fitness requests issued by the search. For the DE matcher this is
    /// `evaluations + estimations` minus one when the winner's SAD had to be
    /// recomputed because it was an estimate.
    pub requests: u32,
    /// Distinct displacements touched by the search.
    pub visited: u32,
}

pub(crate) fn check_window(w: i32) -> Result<()> {
    if w < 1 {
        return Err(Error::InvalidConfig(alloc::format!("search range must be at least 1, got {w}")));
    }
    Ok(())
}

pub(crate) fn check_inputs(current: &LumaFrame, previous: &LumaFrame, block: BlockRef) -> Result<()> {
    if !current.same_geometry(previous) {
        return Err(Error::InvalidInput(alloc::format!(
            "frame geometry differs: {}x{} vs {}x{}",
            current.width(),
            current.height(),
            previous.width(),
            previous.height()
        )));
    }
    if block.n == 0 || block.x + block.n > current.width() || block.y + block.n > current.height() {
        return Err(Error::InvalidInput(alloc::format!(
            "block {}x{} at ({}, {}) does not fit a {}x{} frame",
            block.n,
            block.n,
            block.x,
            block.y,
            current.width(),
            current.height()
        )));
    }
    Ok(())
}

/// SAD oracle for one block search. Tracks every computation in a
/// [`PatternTrace`] and optionally memoizes per displacement.
pub(crate) struct Probe<'a> {
    current: &'a LumaFrame,
    previous: &'a LumaFrame,
    pub(crate) block: BlockRef,
    pub(crate) w: i32,
    cache: Vec<Option<u64>>,
    pub(crate) trace: PatternTrace,
}

impl<'a> Probe<'a> {
    pub(crate) fn new(current: &'a LumaFrame, previous: &'a LumaFrame, block: BlockRef, w: i32) -> Result<Self> {
        check_window(w)?;
        check_inputs(current, previous, block)?;
        let trace = PatternTrace::empty(w);
        Ok(Probe { current, previous, block, w, cache: alloc::vec![None; trace.cells.len()], trace })
    }

    /// Whether `mv` is inside the window and keeps the block in the frame.
    pub(crate) fn valid(&self, mv: MotionVector) -> bool {
        mv.u.abs() <= self.w
            && mv.v.abs() <= self.w
            && self.block.accepts(mv, self.previous.width(), self.previous.height())
    }

    /// Always computes the SAD and counts it.
    pub(crate) fn evaluate(&mut self, mv: MotionVector) -> u64 {
        debug_assert!(self.valid(mv));
        let s = sad_unchecked(self.current, self.previous, self.block, mv);
        let i = self.trace.index(mv);
        self.cache[i] = Some(s);
        self.trace.record_evaluation(mv);
        s
    }

    /// Computes the SAD only on the first visit of `mv`.
    pub(crate) fn evaluate_cached(&mut self, mv: MotionVector) -> u64 {
        match self.cache[self.trace.index(mv)] {
            Some(s) => s,
            None => self.evaluate(mv),
        }
    }

    pub(crate) fn mark_estimated(&mut self, mv: MotionVector) {
        self.trace.record_estimate(mv);
    }

    pub(crate) fn finish(mut self, mv: MotionVector, sad: u64, requests: u32) -> (BlockResult, PatternTrace) {
        self.trace.minimum = mv;
        let visited = self.trace.cells.len() - self.trace.count(crate::trace::CellTag::Unvisited);
        let result = BlockResult {
            mv,
            sad,
            evaluations: self.trace.evaluations,
            estimations: self.trace.estimations,
            requests,
            visited: visited as u32,
        };
        (result, self.trace)
    }
}

/// Exhaustive search over every valid displacement in `±w`. Rows (`v`) are
/// scanned outermost, both axes ascending; the first minimum wins.
pub fn full_search(current: &LumaFrame, previous: &LumaFrame, block: BlockRef, w: i32) -> Result<BlockResult> {
    full_search_traced(current, previous, block, w).map(|(r, _)| r)
}

pub fn full_search_traced(
    current: &LumaFrame,
    previous: &LumaFrame,
    block: BlockRef,
    w: i32,
) -> Result<(BlockResult, PatternTrace)> {
    let mut probe = Probe::new(current, previous, block, w)?;
    let (u_lo, u_hi) = block.u_range(w, previous.width());
    let (v_lo, v_hi) = block.v_range(w, previous.height());
    let mut best = (u64::MAX, MotionVector::ZERO);
    for v in v_lo..=v_hi {
        for u in u_lo..=u_hi {
            let mv = MotionVector::new(u, v);
            let s = probe.evaluate(mv);
            if s < best.0 {
                best = (s, mv);
            }
        }
    }
    let requests = probe.trace.evaluations;
    Ok(probe.finish(best.1, best.0, requests))
}

/// The five starting positions: the origin and four axial points at
/// `min(offset, w)`.
pub fn initial_pattern(w: i32, offset: i32) -> [[f64; 2]; 5] {
    let a = offset.min(w).max(1) as f64;
    [[0.0, 0.0], [-a, 0.0], [a, 0.0], [0.0, -a], [0.0, a]]
}

/// Maps a real-valued position to a valid integer displacement: round half
/// away from zero, clamp to `±w`, then clamp so the displaced block stays
/// inside the frame.
pub fn candidate_to_lattice(p: &[f64; 2], block: BlockRef, width: usize, height: usize, w: i32) -> MotionVector {
    let (u_lo, u_hi) = block.u_range(w, width);
    let (v_lo, v_hi) = block.v_range(w, height);
    MotionVector::new(to_lattice(p[0], w).clamp(u_lo, u_hi), to_lattice(p[1], w).clamp(v_lo, v_hi))
}

fn to_lattice(x: f64, w: i32) -> i32 {
    let w = w as f64;
    libm::round(x).clamp(-w, w) as i32
}

/// Full record of a DE block search.
#[derive(Debug, Clone)]
pub struct DebmSearch {
    pub result: BlockResult,
    pub pattern: PatternTrace,
    pub history: HistoryStore,
    pub outcome: Outcome<2>,
    /// The winner's stored fitness was an estimate and its SAD was recomputed.
    pub reresolved: bool,
}

struct BlockFitness<'p, 'f> {
    probe: &'p mut Probe<'f>,
    store: HistoryStore,
    strategy: StrategyParams,
    bounds: Bounds<2>,
    width: usize,
    height: usize,
}

impl BlockFitness<'_, '_> {
    fn lattice(&self, p: &[f64; 2]) -> MotionVector {
        candidate_to_lattice(p, self.probe.block, self.width, self.height, self.probe.w)
    }
}

impl Fitness<2> for BlockFitness<'_, '_> {
    type Error = Error;

    fn fitness(&mut self, position: &[f64; 2]) -> Result<(f64, FitnessKind)> {
        let p = self.bounds.clamp(position);
        let mv = self.lattice(&p);
        let probe = &mut *self.probe;
        let (fitness, kind) = self.store.fitness_of(&p, &self.strategy, |_| Ok::<_, Error>(probe.evaluate(mv) as f64))?;
        if kind == FitnessKind::Estimated {
            self.probe.mark_estimated(mv);
        }
        Ok((fitness, kind))
    }
}

/// DE block matching with nearest-neighbour fitness estimation.
pub fn debm_search(current: &LumaFrame, previous: &LumaFrame, block: BlockRef, config: &SearchConfig) -> Result<BlockResult> {
    debm_search_traced(current, previous, block, config).map(|s| s.result)
}

pub fn debm_search_traced(
    current: &LumaFrame,
    previous: &LumaFrame,
    block: BlockRef,
    config: &SearchConfig,
) -> Result<DebmSearch> {
    config.validate()?;
    let mut probe = Probe::new(current, previous, block, config.w)?;
    let bounds = Bounds::symmetric(config.w as f64)?;
    let seeds = initial_pattern(config.w, config.pattern_offset);
    let capacity = config.de.population_size * (config.de.generations + 1);
    let mut fitness = BlockFitness {
        probe: &mut probe,
        store: HistoryStore::with_capacity(capacity),
        strategy: config.strategy,
        bounds,
        width: previous.width(),
        height: previous.height(),
    };
    let outcome = de::run(&mut fitness, &config.de, &seeds, &bounds)?;
    let mv = fitness.lattice(&bounds.clamp(&outcome.best.position));
    let history = fitness.store;
    let requests = history.len() as u32;

    let reresolved = outcome.best.kind() == Some(FitnessKind::Estimated);
    let sad = if reresolved {
        probe.evaluate(mv)
    } else {
        outcome.best.fitness().expect("final population is scored") as u64
    };
    let (result, pattern) = probe.finish(mv, sad, requests);
    Ok(DebmSearch { result, pattern, history, outcome, reresolved })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::sad;

    fn texture(width: usize, height: usize, seed: u32) -> LumaFrame {
        // xorshift noise, independent of the crate's generators.
        let mut s = seed.max(1);
        LumaFrame::from_fn(width, height, |_, _| {
            s ^= s << 13;
            s ^= s >> 17;
            s ^= s << 5;
            (s >> 24) as u8
        })
        .unwrap()
    }

    /// `previous(x + du, y + dv) = current(x, y)` wherever both exist.
    fn shifted(current: &LumaFrame, du: i32, dv: i32) -> LumaFrame {
        let (w, h) = (current.width() as i32, current.height() as i32);
        LumaFrame::from_fn(current.width(), current.height(), |x, y| {
            let sx = (x as i32 - du).rem_euclid(w);
            let sy = (y as i32 - dv).rem_euclid(h);
            current.get(sx as usize, sy as usize)
        })
        .unwrap()
    }

    #[test]
    fn full_search_counts() {
        let cur = texture(64, 64, 1);
        let prev = texture(64, 64, 2);
        let interior = full_search(&cur, &prev, BlockRef { x: 16, y: 16, n: 16 }, 7).unwrap();
        assert_eq!(interior.evaluations, 225);
        assert_eq!(interior.visited, 225);
        // Corner: u, v in 0..=7.
        let corner = full_search(&cur, &prev, BlockRef { x: 0, y: 0, n: 16 }, 7).unwrap();
        assert_eq!(corner.evaluations, 64);
    }

    #[test]
    fn full_search_recovers_translation() {
        let cur = texture(64, 64, 3);
        let prev = shifted(&cur, 3, 0);
        let r = full_search(&cur, &prev, BlockRef { x: 16, y: 16, n: 16 }, 7).unwrap();
        assert_eq!((r.mv, r.sad), (MotionVector::new(3, 0), 0));
    }

    #[test]
    fn full_search_ties_take_first_in_scan_order() {
        let flat = LumaFrame::filled(64, 64, 9).unwrap();
        let r = full_search(&flat, &flat, BlockRef { x: 16, y: 16, n: 16 }, 7).unwrap();
        assert_eq!(r.mv, MotionVector::new(-7, -7));
    }

    #[test]
    fn initial_pattern_shapes() {
        assert_eq!(initial_pattern(7, 4), [[0.0, 0.0], [-4.0, 0.0], [4.0, 0.0], [0.0, -4.0], [0.0, 4.0]]);
        assert_eq!(initial_pattern(4, 4), initial_pattern(7, 4));
        for w in 1..10 {
            let p = initial_pattern(w, 4);
            assert!(p.iter().all(|q| q[0].abs() <= w as f64 && q[1].abs() <= w as f64));
            for i in 0..5 {
                for j in i + 1..5 {
                    assert_ne!(p[i], p[j]);
                }
            }
        }
    }

    #[test]
    fn lattice_conversion() {
        let interior = BlockRef { x: 32, y: 32, n: 16 };
        assert_eq!(candidate_to_lattice(&[2.5, -2.5], interior, 96, 96, 7), MotionVector::new(3, -3));
        assert_eq!(candidate_to_lattice(&[9.2, 0.0], interior, 96, 96, 7), MotionVector::new(7, 0));
        assert_eq!(candidate_to_lattice(&[2.4, -0.5], interior, 96, 96, 7), MotionVector::new(2, -1));
        let corner = BlockRef { x: 0, y: 0, n: 16 };
        assert_eq!(candidate_to_lattice(&[-3.0, -3.0], corner, 96, 96, 7), MotionVector::ZERO);
    }

    #[test]
    fn debm_on_static_content_finds_origin() {
        let f = texture(64, 64, 5);
        let r = debm_search(&f, &f, BlockRef { x: 16, y: 16, n: 16 }, &SearchConfig::default()).unwrap();
        assert_eq!((r.mv, r.sad), (MotionVector::ZERO, 0));
    }

    #[test]
    fn debm_budget_and_accounting() {
        let cur = texture(96, 96, 11);
        let prev = texture(96, 96, 12);
        for seed in 0..30 {
            let config = SearchConfig { de: DeParams { rng_seed: seed, ..DeParams::default() }, ..SearchConfig::default() };
            for block in crate::frame::partition(96, 96, 16).unwrap() {
                let s = debm_search_traced(&cur, &prev, block, &config).unwrap();
                let r = s.result;
                assert_eq!(r.requests, 40);
                assert!(r.evaluations >= 5);
                assert_eq!(r.evaluations + r.estimations, r.requests + s.reresolved as u32);
                assert_eq!(s.history.evaluations() + s.reresolved as usize, r.evaluations as usize);
                assert_eq!(sad(&cur, &prev, block, r.mv).unwrap(), r.sad);
                assert_eq!(s.pattern.eval_counts.iter().sum::<u32>(), r.evaluations);
                let fsa = full_search(&cur, &prev, block, 7).unwrap();
                assert!(r.sad >= fsa.sad);
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::default().validate().is_ok());
        assert!(SearchConfig { w: 0, ..SearchConfig::default() }.validate().is_err());
        assert!(SearchConfig { n: 0, ..SearchConfig::default() }.validate().is_err());
    }

    #[test]
    fn rejects_mismatched_frames() {
        let a = texture(64, 64, 1);
        let b = texture(48, 64, 1);
        assert!(full_search(&a, &b, BlockRef { x: 0, y: 0, n: 16 }, 7).is_err());
        assert!(full_search(&a, &a, BlockRef { x: 56, y: 0, n: 16 }, 7).is_err());
    }
}
