//! Report, motion-vector dump and pattern-trace files.
//!
//! Every writer goes through a temporary file in the destination directory
//! that is renamed into place once complete.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use debm_core::metrics::SequenceReport;
use debm_core::trace::PatternTrace;
use debm_core::{BlockRef, MotionVector, MvField};
use serde::{Deserialize, Serialize};
use tempfile::NamedTempFile;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    /// `.csv` selects CSV; anything else JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => ReportFormat::Csv,
            _ => ReportFormat::Json,
        }
    }
}

/// Writes `path` atomically from whatever `fill` puts into the buffer.
pub fn write_atomic(path: &Path, fill: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let tmp = NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    let mut out = BufWriter::new(tmp);
    fill(&mut out)?;
    let tmp = out.into_inner().map_err(|e| Error::io(path, e.into_error()))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

#[derive(Serialize)]
struct FrameRow {
    frame_index: usize,
    psnr_db: String,
    mse: f64,
    avg_eval: f64,
    avg_est: f64,
}

pub fn write_report(report: &SequenceReport, path: &Path, format: ReportFormat) -> Result<()> {
    write_atomic(path, |out| match format {
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, report).map_err(|source| json_err(path, source))?;
            writeln!(out).map_err(|e| Error::io(path, e))
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for f in &report.per_frame {
                let psnr_db = if f.psnr_db.is_finite() { f.psnr_db.to_string() } else { "inf".into() };
                w.serialize(FrameRow {
                    frame_index: f.frame_index,
                    psnr_db,
                    mse: f.mse,
                    avg_eval: f.avg_evaluations,
                    avg_est: f.avg_estimations,
                })
                .map_err(|source| csv_err(path, source))?;
            }
            w.flush().map_err(|e| Error::io(path, e))
        }
    })
}

pub fn read_report(path: &Path) -> Result<SequenceReport> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| json_err(path, source))
}

/// One line of a motion-vector dump.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MvRecord {
    pub frame: usize,
    pub x: usize,
    pub y: usize,
    pub u: i32,
    pub v: i32,
    pub sad: u64,
    pub evaluations: u32,
    pub estimations: u32,
}

impl MvRecord {
    pub fn rows(frame: usize, field: &MvField) -> impl Iterator<Item = MvRecord> + '_ {
        field.iter().map(move |(b, r)| MvRecord {
            frame,
            x: b.x,
            y: b.y,
            u: r.mv.u,
            v: r.mv.v,
            sad: r.sad,
            evaluations: r.evaluations,
            estimations: r.estimations,
        })
    }
}

pub fn write_mv_dump<'a>(path: &Path, fields: impl IntoIterator<Item = (usize, &'a MvField)>) -> Result<()> {
    write_atomic(path, |out| {
        let mut w = csv::Writer::from_writer(out);
        for (frame, field) in fields {
            for rec in MvRecord::rows(frame, field) {
                w.serialize(rec).map_err(|source| csv_err(path, source))?;
            }
        }
        w.flush().map_err(|e| Error::io(path, e))
    })
}

pub fn read_mv_dump(path: &Path) -> Result<Vec<MvRecord>> {
    let mut r = csv::Reader::from_path(path).map_err(|source| csv_err(path, source))?;
    r.deserialize().collect::<std::result::Result<_, _>>().map_err(|source| csv_err(path, source))
}

/// Pattern trace of one block, as written by `debm trace`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub algorithm: String,
    pub frame: usize,
    pub block: BlockRef,
    pub mv: MotionVector,
    pub sad: u64,
    pub evaluations: u32,
    pub estimations: u32,
    /// Rows over `v = -w..=w`; `E` evaluated, `S` estimated only, `.`
    /// unvisited, `M` the reported minimum.
    pub rows: Vec<String>,
    pub trace: PatternTrace,
}

pub fn write_trace(doc: &TraceDocument, path: &Path) -> Result<()> {
    write_atomic(path, |out| {
        serde_json::to_writer_pretty(&mut *out, doc).map_err(|source| json_err(path, source))?;
        writeln!(out).map_err(|e| Error::io(path, e))
    })
}

pub fn read_trace(path: &Path) -> Result<TraceDocument> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| json_err(path, source))
}

fn json_err(path: &Path, source: serde_json::Error) -> Error {
    Error::Json { path: PathBuf::from(path), source }
}

fn csv_err(path: &Path, source: csv::Error) -> Error {
    Error::Csv { path: PathBuf::from(path), source }
}
