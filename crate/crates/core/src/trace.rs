//! Per-block search-pattern grids.

use alloc::string::String;
use alloc::vec::Vec;

use crate::frame::MotionVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum CellTag {
    Unvisited,
    /// At least one true SAD computation landed here.
    Evaluated,
    /// Only estimated requests landed here.
    Estimated,
}

impl CellTag {
    pub fn symbol(self) -> char {
        match self {
            CellTag::Unvisited => '.',
            CellTag::Evaluated => 'E',
            CellTag::Estimated => 'S',
        }
    }
}

/// The `(2w+1)`×`(2w+1)` displacement window of one block search. Rows run
/// over `v` from `-w` to `w`, columns over `u` from `-w` to `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PatternTrace {
    pub w: i32,
    pub cells: Vec<CellTag>,
    /// Number of true SAD computations per cell.
    pub eval_counts: Vec<u32>,
    pub minimum: MotionVector,
    pub evaluations: u32,
    pub estimations: u32,
}

impl PatternTrace {
    pub(crate) fn empty(w: i32) -> Self {
        let side = (2 * w + 1) as usize;
        PatternTrace {
            w,
            cells: alloc::vec![CellTag::Unvisited; side * side],
            eval_counts: alloc::vec![0; side * side],
            minimum: MotionVector::ZERO,
            evaluations: 0,
            estimations: 0,
        }
    }

    pub fn side(&self) -> usize {
        (2 * self.w + 1) as usize
    }

    pub(crate) fn index(&self, mv: MotionVector) -> usize {
        debug_assert!(mv.u.abs() <= self.w && mv.v.abs() <= self.w);
        (mv.v + self.w) as usize * self.side() + (mv.u + self.w) as usize
    }

    pub fn cell(&self, mv: MotionVector) -> CellTag {
        self.cells[self.index(mv)]
    }

    pub fn count(&self, tag: CellTag) -> usize {
        self.cells.iter().filter(|&&c| c == tag).count()
    }

    pub(crate) fn record_evaluation(&mut self, mv: MotionVector) {
        let i = self.index(mv);
        self.cells[i] = CellTag::Evaluated;
        self.eval_counts[i] += 1;
        self.evaluations += 1;
    }

    pub(crate) fn record_estimate(&mut self, mv: MotionVector) {
        let i = self.index(mv);
        if self.cells[i] == CellTag::Unvisited {
            self.cells[i] = CellTag::Estimated;
        }
        self.estimations += 1;
    }

    /// One string per row; the minimum is drawn as `M`.
    pub fn rows(&self) -> Vec<String> {
        let side = self.side();
        let min = self.index(self.minimum);
        (0..side)
            .map(|r| {
                (0..side)
                    .map(|c| {
                        let i = r * side + c;
                        if i == min { 'M' } else { self.cells[i].symbol() }
                    })
                    .collect()
            })
            .collect()
    }
}
