//! Deterministic test sequences with known motion.
//!
//! Every generated frame is a wrap-around translation of a single base
//! texture, so for any block whose displaced copy stays inside the frame the
//! true motion vector is exactly the per-frame motion.

use std::str::FromStr;

use debm_core::LumaFrame;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthKind {
    /// One random texture repeated.
    Static,
    /// An analytic periodic pattern, translated.
    Translate,
    /// A seeded, low-pass filtered random texture, translated.
    RandomTextureTranslate,
}

impl FromStr for SynthKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "static" => Ok(SynthKind::Static),
            "translate" => Ok(SynthKind::Translate),
            "random-texture" | "random_texture_translate" | "random-texture-translate" => {
                Ok(SynthKind::RandomTextureTranslate)
            }
            _ => Err(Error::Config(format!(
                "unknown synthetic sequence `{s}` (expected static, translate or random-texture)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthParams {
    pub kind: SynthKind,
    pub width: usize,
    pub height: usize,
    pub frames: usize,
    /// Motion vector of every frame relative to its predecessor:
    /// `previous(x + du, y + dv) = current(x, y)`.
    pub du: i32,
    pub dv: i32,
    /// Maximum displacement the motion must respect.
    pub max_motion: i32,
    /// Box-filter radius used to correlate the random texture; 0 keeps white
    /// noise.
    pub smoothness: usize,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            kind: SynthKind::RandomTextureTranslate,
            width: 176,
            height: 144,
            frames: 10,
            du: 0,
            dv: 0,
            max_motion: 7,
            smoothness: DEFAULT_SMOOTHNESS,
            seed: 0,
        }
    }
}

pub const DEFAULT_SMOOTHNESS: usize = 3;

/// Generates the whole sequence.
pub fn synth_sequence(params: &SynthParams) -> Result<Vec<LumaFrame>> {
    let (w, h) = (params.width, params.height);
    if w == 0 || h == 0 {
        return Err(Error::Config(format!("empty synthetic geometry {w}x{h}")));
    }
    if params.du.abs() > params.max_motion || params.dv.abs() > params.max_motion {
        return Err(Error::Config(format!(
            "motion ({}, {}) exceeds the search range {}",
            params.du, params.dv, params.max_motion
        )));
    }
    let base = match params.kind {
        SynthKind::Translate => periodic_pattern(w, h),
        SynthKind::Static | SynthKind::RandomTextureTranslate => random_texture(w, h, params.smoothness, params.seed),
    };
    let (du, dv) = match params.kind {
        SynthKind::Static => (0, 0),
        _ => (params.du as i64, params.dv as i64),
    };
    let mut frames = Vec::with_capacity(params.frames);
    for t in 0..params.frames as i64 {
        // frame t samples the base at (x + t*du, y + t*dv).
        let (ox, oy) = (t * du, t * dv);
        let frame = LumaFrame::from_fn(w, h, |x, y| {
            let sx = (x as i64 + ox).rem_euclid(w as i64) as usize;
            let sy = (y as i64 + oy).rem_euclid(h as i64) as usize;
            base[sy * w + sx]
        })?;
        frames.push(frame);
    }
    Ok(frames)
}

/// Uniform noise smoothed by two passes of a wrap-around box filter, then
/// stretched to the full 8-bit range.
fn random_texture(w: usize, h: usize, radius: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut field: Vec<f64> = (0..w * h).map(|_| rng.gen::<f64>()).collect();
    if radius > 0 {
        for _ in 0..2 {
            field = box_blur(&field, w, h, radius);
        }
    }
    stretch(&field)
}

fn box_blur(src: &[f64], w: usize, h: usize, r: usize) -> Vec<f64> {
    let k = (2 * r + 1) as f64;
    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut s = 0.0;
            for d in 0..=2 * r {
                let sx = (x + w * (r / w + 1) + d - r) % w;
                s += src[y * w + sx];
            }
            tmp[y * w + x] = s / k;
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut s = 0.0;
            for d in 0..=2 * r {
                let sy = (y + h * (r / h + 1) + d - r) % h;
                s += tmp[sy * w + x];
            }
            out[y * w + x] = s / k;
        }
    }
    out
}

fn stretch(field: &[f64]) -> Vec<u8> {
    let (lo, hi) = field.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let span = (hi - lo).max(f64::EPSILON);
    field.iter().map(|&v| ((v - lo) / span * 255.0).round() as u8).collect()
}

/// Sum of sinusoids whose periods divide the frame size, so the pattern
/// tiles seamlessly and has no period shorter than a third of the frame.
fn periodic_pattern(w: usize, h: usize) -> Vec<u8> {
    use std::f64::consts::TAU;
    let (wf, hf) = (w as f64, h as f64);
    let mut field = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let (xf, yf) = (x as f64, y as f64);
            let v = (TAU * xf / wf).sin()
                + 0.8 * (TAU * 2.0 * yf / hf + 0.7).sin()
                + 0.6 * (TAU * (xf / wf * 3.0 + yf / hf)).cos()
                + 0.5 * (TAU * (xf / wf - yf / hf * 2.0) + 1.3).sin();
            field.push(v);
        }
    }
    stretch(&field)
}
