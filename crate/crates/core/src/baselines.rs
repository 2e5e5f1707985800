//! Fixed-pattern fast searches: three step search and diamond search.
//!
//! Both skip pattern points outside the valid displacement region, compute
//! each displacement at most once, and keep the first-scanned minimum.

use crate::frame::{BlockRef, LumaFrame, MotionVector};
use crate::search::{BlockResult, Probe};
use crate::trace::PatternTrace;
use crate::Result;

const SQUARE: [(i32, i32); 9] = [(0, 0), (-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)];

const LARGE_DIAMOND: [(i32, i32); 9] = [(0, 0), (0, -2), (1, -1), (2, 0), (1, 1), (0, 2), (-1, 1), (-2, 0), (-1, -1)];

const SMALL_DIAMOND: [(i32, i32); 5] = [(0, 0), (0, -1), (1, 0), (0, 1), (-1, 0)];

/// Scans `pattern` scaled by `step` around `center`; returns the best
/// displacement and its SAD. The center must be valid.
fn scan(probe: &mut Probe<'_>, center: MotionVector, pattern: &[(i32, i32)], step: i32) -> (MotionVector, u64) {
    let mut best = (center, u64::MAX);
    for &(du, dv) in pattern {
        let mv = MotionVector::new(center.u + du * step, center.v + dv * step);
        if !probe.valid(mv) {
            continue;
        }
        let s = probe.evaluate_cached(mv);
        if s < best.1 {
            best = (mv, s);
        }
    }
    best
}

/// Three step search: a 3×3 pattern with step `ceil(w/2)`, recentered on the
/// running minimum and halved until the step reaches one.
pub fn tss_search(current: &LumaFrame, previous: &LumaFrame, block: BlockRef, w: i32) -> Result<BlockResult> {
    tss_search_traced(current, previous, block, w).map(|(r, _)| r)
}

pub fn tss_search_traced(
    current: &LumaFrame,
    previous: &LumaFrame,
    block: BlockRef,
    w: i32,
) -> Result<(BlockResult, PatternTrace)> {
    let mut probe = Probe::new(current, previous, block, w)?;
    let mut center = MotionVector::ZERO;
    let mut sad = 0;
    let mut step = (w + 1) / 2;
    while step >= 1 {
        (center, sad) = scan(&mut probe, center, &SQUARE, step);
        step /= 2;
    }
    let requests = probe.trace.evaluations;
    Ok(probe.finish(center, sad, requests))
}

/// Diamond search: the large diamond is recentered on its minimum until the
/// minimum stays at the center, then one small-diamond pass refines it.
pub fn ds_search(current: &LumaFrame, previous: &LumaFrame, block: BlockRef, w: i32) -> Result<BlockResult> {
    ds_search_traced(current, previous, block, w).map(|(r, _)| r)
}

pub fn ds_search_traced(
    current: &LumaFrame,
    previous: &LumaFrame,
    block: BlockRef,
    w: i32,
) -> Result<(BlockResult, PatternTrace)> {
    let mut probe = Probe::new(current, previous, block, w)?;
    let mut center = MotionVector::ZERO;
    loop {
        // The center is scanned first, so a move implies a strictly lower SAD.
        let (next, _) = scan(&mut probe, center, &LARGE_DIAMOND, 1);
        if next == center {
            break;
        }
        center = next;
    }
    let (mv, sad) = scan(&mut probe, center, &SMALL_DIAMOND, 1);
    let requests = probe.trace.evaluations;
    Ok(probe.finish(mv, sad, requests))
}
