use std::io::{BufRead, Read};
use std::path::{Path, PathBuf};

use debm_core::LumaFrame;

use super::{chroma_plane_len, read_full};
use crate::{Error, Result};

const SIGNATURE: &[u8] = b"YUV4MPEG2";
const FRAME_TAG: &[u8] = b"FRAME";
const MAX_LINE: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Y4mHeader {
    pub width: usize,
    pub height: usize,
    /// Frame rate as numerator and denominator, when present.
    pub rate: Option<(u32, u32)>,
    pub colorspace: Option<String>,
}

/// Streams the luma planes of a YUV4MPEG2 file. Only 8-bit 4:2:0 is accepted;
/// interlacing, aspect and extension tokens are ignored.
pub struct Y4mReader<R> {
    reader: R,
    path: PathBuf,
    header: Y4mHeader,
    offset: u64,
    frames_read: usize,
    chroma: Vec<u8>,
    done: bool,
}

impl<R: BufRead> Y4mReader<R> {
    pub fn new(mut reader: R, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let line = read_line(&mut reader, &path, 0)?.ok_or_else(|| Error::Format {
            path: path.clone(),
            offset: 0,
            message: "empty input, expected YUV4MPEG2 signature".into(),
        })?;
        let header = parse_header(&line, &path)?;
        let offset = line.len() as u64 + 1;
        let chroma = vec![0; 2 * chroma_plane_len(header.width, header.height)];
        Ok(Y4mReader { reader, path, header, offset, frames_read: 0, chroma, done: false })
    }

    pub fn header(&self) -> &Y4mHeader {
        &self.header
    }

    fn next_frame(&mut self) -> Result<Option<LumaFrame>> {
        let start = self.offset;
        let Some(line) = read_line(&mut self.reader, &self.path, start)? else {
            return Ok(None);
        };
        if !line.starts_with(FRAME_TAG) || !matches!(line.get(FRAME_TAG.len()), None | Some(b' ')) {
            return Err(Error::Format {
                path: self.path.clone(),
                offset: start,
                message: format!("expected FRAME marker, found {:?}", String::from_utf8_lossy(&line[..line.len().min(16)])),
            });
        }
        self.offset += line.len() as u64 + 1;
        let (w, h) = (self.header.width, self.header.height);
        let mut luma = vec![0; w * h];
        let got = read_full(&mut self.reader, &mut luma).map_err(|e| Error::io(&self.path, e))?;
        let got_chroma = if got == luma.len() {
            read_full(&mut self.reader, &mut self.chroma).map_err(|e| Error::io(&self.path, e))?
        } else {
            0
        };
        if got < luma.len() || got_chroma < self.chroma.len() {
            return Err(Error::Truncated {
                path: self.path.clone(),
                frames_read: self.frames_read,
                message: format!(
                    "frame {} at byte {start} has {} of {} bytes",
                    self.frames_read,
                    got + got_chroma,
                    luma.len() + self.chroma.len()
                ),
            });
        }
        self.offset += (luma.len() + self.chroma.len()) as u64;
        self.frames_read += 1;
        Ok(Some(LumaFrame::new(w, h, luma)?))
    }
}

impl<R: BufRead> Iterator for Y4mReader<R> {
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

/// Reads up to the next `\n` (excluded). `None` at a clean end of input.
fn read_line(reader: &mut impl BufRead, path: &Path, offset: u64) -> Result<Option<Vec<u8>>> {
    let mut line = Vec::new();
    let n = reader
        .by_ref()
        .take(MAX_LINE as u64 + 1)
        .read_until(b'\n', &mut line)
        .map_err(|e| Error::io(path, e))?;
    if n == 0 {
        return Ok(None);
    }
    if line.last() != Some(&b'\n') {
        return Err(Error::Format {
            path: path.to_path_buf(),
            offset,
            message: if n > MAX_LINE { "header line too long".into() } else { "unterminated header line".into() },
        });
    }
    line.pop();
    Ok(Some(line))
}

fn parse_header(line: &[u8], path: &Path) -> Result<Y4mHeader> {
    let fail = |offset: usize, message: String| Error::Format { path: path.to_path_buf(), offset: offset as u64, message };
    if !line.starts_with(SIGNATURE) || !matches!(line.get(SIGNATURE.len()), None | Some(b' ')) {
        return Err(fail(0, "missing YUV4MPEG2 signature".into()));
    }
    let text = std::str::from_utf8(line).map_err(|e| fail(e.valid_up_to(), "header is not ASCII".into()))?;
    let (mut width, mut height, mut rate, mut colorspace) = (None, None, None, None);
    let mut pos = SIGNATURE.len();
    for token in text[SIGNATURE.len()..].split(' ') {
        let at = pos;
        pos += token.len() + 1;
        let Some(tag) = token.chars().next() else { continue };
        let value = &token[1..];
        match tag {
            'W' => width = Some(value.parse::<usize>().map_err(|_| fail(at, format!("bad width `{value}`")))?),
            'H' => height = Some(value.parse::<usize>().map_err(|_| fail(at, format!("bad height `{value}`")))?),
            'F' => {
                let parsed = value
                    .split_once(':')
                    .and_then(|(n, d)| Some((n.parse().ok()?, d.parse().ok()?)));
                rate = Some(parsed.ok_or_else(|| fail(at, format!("bad frame rate `{value}`")))?);
            }
            'C' => {
                if !matches!(value, "420" | "420jpeg" | "420paldv" | "420mpeg2") {
                    return Err(fail(at, format!("unsupported colorspace `{value}`, only 8-bit 4:2:0 is handled")));
                }
                colorspace = Some(value.to_string());
            }
            _ => {}
        }
    }
    match (width, height) {
        (Some(w), Some(h)) if w > 0 && h > 0 => Ok(Y4mHeader { width: w, height: h, rate, colorspace }),
        _ => Err(fail(0, "header lacks a positive W and H".into())),
    }
}
