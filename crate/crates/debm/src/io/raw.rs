use std::io::Read;
use std::path::{Path, PathBuf};

use debm_core::LumaFrame;

use super::{chroma_plane_len, read_full};
use crate::{Error, Result};

/// Headerless planar 4:2:0: each frame is the Y plane followed by the two
/// chroma planes, which are skipped.
pub struct RawReader<R> {
    reader: R,
    path: PathBuf,
    width: usize,
    height: usize,
    frames_read: usize,
    chroma: Vec<u8>,
    done: bool,
}

impl<R: Read> RawReader<R> {
    pub fn new(reader: R, path: impl AsRef<Path>, width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Config(format!("raw geometry {width}x{height} is empty")));
        }
        Ok(RawReader {
            reader,
            path: path.as_ref().to_path_buf(),
            width,
            height,
            frames_read: 0,
            chroma: vec![0; 2 * chroma_plane_len(width, height)],
            done: false,
        })
    }

    fn frame_len(&self) -> usize {
        self.width * self.height + self.chroma.len()
    }

    fn next_frame(&mut self) -> Result<Option<LumaFrame>> {
        let mut luma = vec![0; self.width * self.height];
        let got = read_full(&mut self.reader, &mut luma).map_err(|e| Error::io(&self.path, e))?;
        if got == 0 {
            return Ok(None);
        }
        let got_chroma = if got == luma.len() {
            read_full(&mut self.reader, &mut self.chroma).map_err(|e| Error::io(&self.path, e))?
        } else {
            0
        };
        if got + got_chroma < self.frame_len() {
            return Err(Error::Truncated {
                path: self.path.clone(),
                frames_read: self.frames_read,
                message: format!(
                    "frame {} has {} of {} bytes",
                    self.frames_read,
                    got + got_chroma,
                    self.frame_len()
                ),
            });
        }
        self.frames_read += 1;
        Ok(Some(LumaFrame::new(self.width, self.height, luma)?))
    }
}

impl<R: Read> Iterator for RawReader<R> {
    type Item = Result<LumaFrame>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = self.next_frame().transpose();
        if !matches!(item, Some(Ok(_))) {
            self.done = true;
        }
        item
    }
}
