//! The benchmark commands: run one algorithm over a sequence, compare several
//! against the full-search reference, and trace a single block search.
//!
//! Frame `t` is always predicted from frame `t - 1`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use debm_core::metrics::{aggregate, FrameMeasurement, SequenceReport};
use debm_core::motion::{compensate, estimate_block, frame_blocks};
use debm_core::{Algorithm, BlockRef, LumaFrame, MvField, SearchConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::io::{read_sequence, synth_sequence, SequenceSource, SynthParams};
use crate::report::{self, ReportFormat, TraceDocument};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    File(SequenceSource),
    Synth(SynthParams),
}

impl Input {
    pub fn load(&self) -> Result<Vec<LumaFrame>> {
        let frames = match self {
            Input::File(source) => read_sequence(source)?,
            Input::Synth(params) => synth_sequence(params)?,
        };
        if frames.len() < 2 {
            return Err(Error::Config(format!("need at least two frames, the input has {}", frames.len())));
        }
        Ok(frames)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: Input,
    pub algorithm: Algorithm,
    pub search: SearchConfig,
    /// Base seed; block `i` of every frame searches with `seed ^ i`.
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub mv_dump: Option<PathBuf>,
    /// Search the blocks of a frame on the rayon pool. Results are identical
    /// either way.
    pub parallel: bool,
}

impl RunConfig {
    pub fn new(input: Input, algorithm: Algorithm) -> Self {
        RunConfig {
            input,
            algorithm,
            search: SearchConfig::default(),
            seed: 0,
            out: None,
            mv_dump: None,
            parallel: true,
        }
    }

    fn search(&self) -> SearchConfig {
        let mut s = self.search;
        s.de.rng_seed = self.seed;
        s
    }
}

/// Motion field of one frame pair, in partition order.
pub fn estimate_pair(
    current: &LumaFrame,
    previous: &LumaFrame,
    config: &SearchConfig,
    algorithm: Algorithm,
    parallel: bool,
) -> Result<MvField> {
    let blocks = frame_blocks(current, previous, config)?;
    let one = |(i, &b): (usize, &BlockRef)| estimate_block(current, previous, config, algorithm, i, b).map(|(r, _)| r);
    let results = if parallel {
        blocks.par_iter().enumerate().map(one).collect::<debm_core::Result<Vec<_>>>()?
    } else {
        blocks.iter().enumerate().map(one).collect::<debm_core::Result<Vec<_>>>()?
    };
    Ok(MvField { blocks, results })
}

/// Estimates, compensates and scores every consecutive pair.
pub fn evaluate_sequence(
    frames: &[LumaFrame],
    config: &SearchConfig,
    algorithm: Algorithm,
    parallel: bool,
) -> Result<(SequenceReport, Vec<MvField>)> {
    let mut fields = Vec::with_capacity(frames.len().saturating_sub(1));
    let mut measurements = Vec::with_capacity(fields.capacity());
    for (t, pair) in frames.windows(2).enumerate() {
        let (previous, current) = (&pair[0], &pair[1]);
        let field = estimate_pair(current, previous, config, algorithm, parallel)?;
        let prediction = compensate(previous, &field)?;
        measurements.push(FrameMeasurement::new(t + 1, current, &prediction, &field)?);
        fields.push(field);
    }
    Ok((aggregate(algorithm, &measurements)?, fields))
}

/// Runs one algorithm and writes the requested files. On failure, files this
/// call already wrote are removed.
pub fn cmd_run(config: &RunConfig) -> Result<SequenceReport> {
    let frames = config.input.load()?;
    let (report, fields) = evaluate_sequence(&frames, &config.search(), config.algorithm, config.parallel)?;
    let mut written = Outputs::default();
    let result = (|| -> Result<()> {
        if let Some(path) = &config.out {
            report::write_report(&report, path, ReportFormat::from_path(path))?;
            written.0.push(path.clone());
        }
        if let Some(path) = &config.mv_dump {
            report::write_mv_dump(path, fields.iter().enumerate().map(|(i, f)| (i + 1, f)))?;
            written.0.push(path.clone());
        }
        Ok(())
    })();
    result?;
    written.0.clear();
    Ok(report)
}

/// Removes the listed paths when dropped.
#[derive(Default)]
struct Outputs(Vec<PathBuf>);

impl Drop for Outputs {
    fn drop(&mut self) {
        for p in &self.0 {
            let _ = std::fs::remove_file(p);
        }
    }
}

/// One-line human summary of a report.
pub fn summary_line(report: &SequenceReport) -> String {
    let mut s = format!("{}: mean PSNR ", report.algorithm);
    match report.mean_psnr {
        Some(p) => write!(s, "{p:.3} dB").unwrap(),
        None => s.push_str("n/a"),
    }
    write!(
        s,
        " ({} infinite), mean search points {:.3}, mean estimations {:.3}, {} frames, {} blocks",
        report.infinite_psnr_frames,
        report.mean_search_points,
        report.mean_estimations,
        report.per_frame.len(),
        report.total_blocks
    )
    .unwrap();
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareConfig {
    pub input: Input,
    pub algorithms: Vec<Algorithm>,
    pub search: SearchConfig,
    pub seed: u64,
    /// Stored full-search report, used when `fsa` is not among `algorithms`.
    pub reference: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub parallel: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub algorithm: Algorithm,
    pub mean_psnr: Option<f64>,
    pub d_psnr: Option<f64>,
    pub mean_search_points: f64,
    /// 1 for the fewest search points; ties keep the listed order.
    pub rank: usize,
}

pub fn cmd_compare(config: &CompareConfig) -> Result<Vec<CompareRow>> {
    if config.algorithms.is_empty() {
        return Err(Error::Config("no algorithms to compare".into()));
    }
    let stored = match (config.algorithms.contains(&Algorithm::Fsa), &config.reference) {
        (true, _) => None,
        (false, Some(path)) => Some(report::read_report(path)?),
        (false, None) => {
            return Err(Error::Config("comparison needs `fsa` in the list or a stored reference report".into()))
        }
    };
    let frames = config.input.load()?;
    let mut search = config.search;
    search.de.rng_seed = config.seed;

    let reports = config
        .algorithms
        .iter()
        .map(|&a| evaluate_sequence(&frames, &search, a, config.parallel).map(|(r, _)| r))
        .collect::<Result<Vec<_>>>()?;
    let reference = match stored {
        Some(r) => r,
        None => reports.iter().find(|r| r.algorithm == Algorithm::Fsa).expect("fsa was requested").clone(),
    };
    let rows = rank_rows(reports.into_iter().map(|r| r.with_reference(&reference)).collect());
    if let Some(path) = &config.out {
        write_compare(&rows, path)?;
    }
    Ok(rows)
}

fn rank_rows(reports: Vec<SequenceReport>) -> Vec<CompareRow> {
    let mut order: Vec<usize> = (0..reports.len()).collect();
    order.sort_by(|&a, &b| reports[a].mean_search_points.total_cmp(&reports[b].mean_search_points));
    let mut rank = vec![0; reports.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r + 1;
    }
    reports
        .into_iter()
        .zip(rank)
        .map(|(r, rank)| CompareRow {
            algorithm: r.algorithm,
            mean_psnr: r.mean_psnr,
            d_psnr: r.d_psnr,
            mean_search_points: r.mean_search_points,
            rank,
        })
        .collect()
}

fn write_compare(rows: &[CompareRow], path: &Path) -> Result<()> {
    match ReportFormat::from_path(path) {
        ReportFormat::Json => report::write_atomic(path, |out| {
            serde_json::to_writer_pretty(&mut *out, rows).map_err(|source| Error::Json { path: path.into(), source })
        }),
        ReportFormat::Csv => report::write_atomic(path, |out| {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r).map_err(|source| Error::Csv { path: path.into(), source })?;
            }
            w.flush().map_err(|e| Error::io(path, e))
        }),
    }
}

/// Fixed-width table of comparison rows.
pub fn compare_table(rows: &[CompareRow]) -> String {
    let opt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3}"));
    let mut s = format!("{:<6} {:>10} {:>9} {:>14} {:>5}\n", "algo", "PSNR(dB)", "D_PSNR%", "search points", "rank");
    for r in rows {
        writeln!(
            s,
            "{:<6} {:>10} {:>9} {:>14.3} {:>5}",
            r.algorithm.name(),
            opt(r.mean_psnr),
            opt(r.d_psnr),
            r.mean_search_points,
            r.rank
        )
        .unwrap();
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceConfig {
    pub input: Input,
    pub algorithm: Algorithm,
    pub search: SearchConfig,
    pub seed: u64,
    /// Top-left corner of the block.
    pub block: (usize, usize),
    /// Index of the predicted frame; it is matched against `frame - 1`.
    pub frame: usize,
    pub out: Option<PathBuf>,
}

pub fn cmd_trace(config: &TraceConfig) -> Result<TraceDocument> {
    if config.frame == 0 {
        return Err(Error::Config("trace frame must be at least 1; frame 0 has no predecessor".into()));
    }
    let frames = config.input.load()?;
    let (Some(previous), Some(current)) = (frames.get(config.frame - 1), frames.get(config.frame)) else {
        return Err(Error::Config(format!("frame {} is past the end of a {}-frame sequence", config.frame, frames.len())));
    };
    let mut search = config.search;
    search.de.rng_seed = config.seed;
    let blocks = frame_blocks(current, previous, &search)?;
    let (x, y) = config.block;
    let Some(index) = blocks.iter().position(|b| (b.x, b.y) == (x, y)) else {
        return Err(Error::Config(format!("block ({x}, {y}) is not a partition anchor; valid anchors: {}", anchors(&blocks))));
    };
    let block = blocks[index];
    let (result, trace) = estimate_block(current, previous, &search, config.algorithm, index, block)?;
    let doc = TraceDocument {
        algorithm: config.algorithm.name().into(),
        frame: config.frame,
        block,
        mv: result.mv,
        sad: result.sad,
        evaluations: result.evaluations,
        estimations: result.estimations,
        rows: trace.rows(),
        trace,
    };
    if let Some(path) = &config.out {
        report::write_trace(&doc, path)?;
    }
    Ok(doc)
}

/// `x in {0, 16, ...}, y in {0, 16, ...}` for a regular grid.
fn anchors(blocks: &[BlockRef]) -> String {
    let mut xs: Vec<usize> = blocks.iter().map(|b| b.x).collect();
    let mut ys: Vec<usize> = blocks.iter().map(|b| b.y).collect();
    xs.sort_unstable();
    xs.dedup();
    ys.sort_unstable();
    ys.dedup();
    let join = |v: &[usize]| v.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", ");
    format!("x in {{{}}}, y in {{{}}}", join(&xs), join(&ys))
}
