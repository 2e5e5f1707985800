//! Sequence ingestion. Only the luma plane is kept.

mod pgm;
mod raw;
pub mod synth;
mod y4m;

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use debm_core::LumaFrame;

pub use self::pgm::{parse_pgm, pgm_sequence_paths, write_pgm};
pub use self::raw::RawReader;
pub use self::synth::{synth_sequence, SynthKind, SynthParams};
pub use self::y4m::{Y4mHeader, Y4mReader};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceFormat {
    Y4m,
    RawYuv420,
    PgmSequence,
}

impl FromStr for SequenceFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "y4m" => Ok(SequenceFormat::Y4m),
            "raw" | "yuv" | "raw_yuv420" | "yuv420" => Ok(SequenceFormat::RawYuv420),
            "pgm" | "pgm_sequence" => Ok(SequenceFormat::PgmSequence),
            _ => Err(Error::Config(format!("unknown input format `{s}` (expected y4m, raw or pgm)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceSource {
    pub format: SequenceFormat,
    /// File for Y4M and RAW; a directory or a `%d`/`%0Nd` pattern for PGM.
    pub path: PathBuf,
    /// Required for RAW input.
    pub width: Option<usize>,
    pub height: Option<usize>,
    pub frame_limit: Option<usize>,
}

impl SequenceSource {
    pub fn new(format: SequenceFormat, path: impl Into<PathBuf>) -> Self {
        SequenceSource { format, path: path.into(), width: None, height: None, frame_limit: None }
    }
}

pub type FrameIter = Box<dyn Iterator<Item = Result<LumaFrame>> + Send>;

/// Opens a sequence and yields its luma frames in order.
pub fn open_sequence(source: &SequenceSource) -> Result<FrameIter> {
    let frames: FrameIter = match source.format {
        SequenceFormat::Y4m => Box::new(Y4mReader::new(open(&source.path)?, &source.path)?),
        SequenceFormat::RawYuv420 => {
            let (Some(w), Some(h)) = (source.width, source.height) else {
                return Err(Error::Config("raw YUV input needs --width and --height".into()));
            };
            Box::new(RawReader::new(open(&source.path)?, &source.path, w, h)?)
        }
        SequenceFormat::PgmSequence => {
            let paths = pgm_sequence_paths(&source.path)?;
            Box::new(pgm::PgmSequence::new(paths))
        }
    };
    Ok(match source.frame_limit {
        Some(n) => Box::new(frames.take(n)),
        None => frames,
    })
}

/// Reads a whole sequence into memory.
pub fn read_sequence(source: &SequenceSource) -> Result<Vec<LumaFrame>> {
    open_sequence(source)?.collect()
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

/// Bytes of one 4:2:0 chroma plane.
pub(crate) fn chroma_plane_len(width: usize, height: usize) -> usize {
    width.div_ceil(2) * height.div_ceil(2)
}

/// Fills `buf` completely, or reports how many bytes were available.
pub(crate) fn read_full(reader: &mut impl std::io::Read, buf: &mut [u8]) -> std::io::Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match reader.read(&mut buf[filled..]) {
            Ok(0) => break,
            Ok(n) => filled += n,
            Err(e) if e.kind() == std::io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e),
        }
    }
    Ok(filled)
}
