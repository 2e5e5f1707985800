//! Prediction quality and search cost.
//!
//! PSNR uses an 8-bit peak: `10 log10(255² / MSE)`. A zero MSE yields
//! `f64::INFINITY`, which sequence means leave out and count separately.

use alloc::vec::Vec;

use crate::frame::LumaFrame;
use crate::motion::{Algorithm, MvField};
use crate::{Error, Result};

pub const PEAK: f64 = 255.0;

/// Mean squared error over every sample of two equally sized frames.
pub fn mse(a: &LumaFrame, b: &LumaFrame) -> Result<f64> {
    if !a.same_geometry(b) {
        return Err(Error::InvalidInput(alloc::format!(
            "cannot compare {}x{} with {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    let sum: u64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&p, &q)| {
            let d = p.abs_diff(q) as u64;
            d * d
        })
        .sum();
    Ok(sum as f64 / a.samples().len() as f64)
}

/// PSNR in decibels; `f64::INFINITY` for a zero MSE.
pub fn psnr(mse: f64) -> Result<f64> {
    if !(mse >= 0.0) {
        return Err(Error::ContractViolation(alloc::format!("MSE must be non-negative, got {mse}")));
    }
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * libm::log10(PEAK * PEAK / mse))
}

/// PSNR degradation of `psnr_bm` relative to `psnr_fsa`, in percent. Zero for
/// equal values, negative when `psnr_bm` is lower. `None` when the reference
/// is not a positive finite number or `psnr_bm` is not finite.
pub fn d_psnr(psnr_fsa: f64, psnr_bm: f64) -> Option<f64> {
    if !(psnr_fsa.is_finite() && psnr_fsa > 0.0 && psnr_bm.is_finite()) {
        return None;
    }
    Some((psnr_bm - psnr_fsa) / psnr_fsa * 100.0)
}

/// Raw tallies for one predicted frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameMeasurement {
    pub frame_index: usize,
    pub mse: f64,
    pub blocks: u64,
    pub evaluations: u64,
    pub estimations: u64,
}

impl FrameMeasurement {
    /// Scores the prediction of `current` built from `field`.
    pub fn new(frame_index: usize, current: &LumaFrame, prediction: &LumaFrame, field: &MvField) -> Result<Self> {
        Ok(FrameMeasurement {
            frame_index,
            mse: mse(current, prediction)?,
            blocks: field.len() as u64,
            evaluations: field.total_evaluations(),
            estimations: field.total_estimations(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrameScore {
    pub frame_index: usize,
    #[cfg_attr(feature = "serde", serde(with = "decibels"))]
    pub psnr_db: f64,
    pub mse: f64,
    pub avg_evaluations: f64,
    pub avg_estimations: f64,
    pub blocks: u64,
    pub evaluations: u64,
    pub estimations: u64,
}

impl FrameScore {
    pub fn is_infinite(&self) -> bool {
        self.psnr_db.is_infinite()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SequenceReport {
    pub algorithm: Algorithm,
    /// Mean over frames with finite PSNR; `None` when there are none.
    pub mean_psnr: Option<f64>,
    pub infinite_psnr_frames: usize,
    /// Degradation against a full-search reference, when one was applied.
    pub d_psnr: Option<f64>,
    /// True SAD computations per block.
    pub mean_search_points: f64,
    pub mean_estimations: f64,
    pub total_blocks: u64,
    pub total_evaluations: u64,
    pub total_estimations: u64,
    pub per_frame: Vec<FrameScore>,
}

pub fn frame_score(m: &FrameMeasurement) -> Result<FrameScore> {
    let blocks = m.blocks.max(1) as f64;
    Ok(FrameScore {
        frame_index: m.frame_index,
        psnr_db: psnr(m.mse)?,
        mse: m.mse,
        avg_evaluations: m.evaluations as f64 / blocks,
        avg_estimations: m.estimations as f64 / blocks,
        blocks: m.blocks,
        evaluations: m.evaluations,
        estimations: m.estimations,
    })
}

/// Folds per-frame tallies into a sequence report.
pub fn aggregate(algorithm: Algorithm, frames: &[FrameMeasurement]) -> Result<SequenceReport> {
    if frames.is_empty() {
        return Err(Error::InvalidInput("no frames to aggregate".into()));
    }
    let per_frame = frames.iter().map(frame_score).collect::<Result<Vec<_>>>()?;
    let finite: Vec<f64> = per_frame.iter().map(|f| f.psnr_db).filter(|p| p.is_finite()).collect();
    let mean_psnr = (!finite.is_empty()).then(|| finite.iter().sum::<f64>() / finite.len() as f64);
    let total_blocks: u64 = per_frame.iter().map(|f| f.blocks).sum();
    let total_evaluations: u64 = per_frame.iter().map(|f| f.evaluations).sum();
    let total_estimations: u64 = per_frame.iter().map(|f| f.estimations).sum();
    let denom = total_blocks.max(1) as f64;
    Ok(SequenceReport {
        algorithm,
        mean_psnr,
        infinite_psnr_frames: per_frame.len() - finite.len(),
        d_psnr: None,
        mean_search_points: total_evaluations as f64 / denom,
        mean_estimations: total_estimations as f64 / denom,
        total_blocks,
        total_evaluations,
        total_estimations,
        per_frame,
    })
}

impl SequenceReport {
    /// Fills `d_psnr` against a full-search report of the same sequence.
    pub fn with_reference(mut self, reference: &SequenceReport) -> Self {
        self.d_psnr = match (reference.mean_psnr, self.mean_psnr) {
            (Some(r), Some(m)) => d_psnr(r, m),
            _ => None,
        };
        self
    }
}

/// Serializes non-finite PSNR values as the string `"inf"`.
#[cfg(feature = "serde")]
mod decibels {
    use alloc::string::String;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &f64, s: S) -> Result<S::Ok, S::Error> {
        if value.is_finite() {
            s.serialize_f64(*value)
        } else {
            s.serialize_str("inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(v),
            Repr::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Repr::Text(t) => Err(serde::de::Error::custom(alloc::format!("invalid PSNR value `{t}`"))),
        }
    }
}
