use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use debm_core::LumaFrame;

use crate::{Error, Result};

/// Parses a binary (`P5`) PGM with a maxval of 255.
pub fn parse_pgm(data: &[u8], path: &Path) -> Result<LumaFrame> {
    let fail = |offset: usize, message: &str| Error::Format { path: path.to_path_buf(), offset: offset as u64, message: message.into() };
    if !data.starts_with(b"P5") {
        return Err(fail(0, "missing P5 magic"));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in &mut fields {
        skip_space_and_comments(data, &mut pos);
        let start = pos;
        while pos < data.len() && data[pos].is_ascii_digit() {
            pos += 1;
        }
        if start == pos {
            return Err(fail(start, "expected a decimal header field"));
        }
        *field = std::str::from_utf8(&data[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| fail(start, "header field out of range"))?;
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(fail(pos, "only maxval 255 is supported"));
    }
    if width == 0 || height == 0 {
        return Err(fail(pos, "empty image"));
    }
    if !data.get(pos).is_some_and(|b| b.is_ascii_whitespace()) {
        return Err(fail(pos, "expected whitespace before the raster"));
    }
    pos += 1;
    let need = width * height;
    let raster = data.get(pos..pos + need).ok_or_else(|| {
        Error::Truncated {
            path: path.to_path_buf(),
            frames_read: 0,
            message: format!("raster has {} of {need} bytes", data.len().saturating_sub(pos)),
        }
    })?;
    Ok(LumaFrame::new(width, height, raster.to_vec())?)
}

fn skip_space_and_comments(data: &[u8], pos: &mut usize) {
    while *pos < data.len() {
        match data[*pos] {
            b'#' => {
                while *pos < data.len() && data[*pos] != b'\n' {
                    *pos += 1;
                }
            }
            b if b.is_ascii_whitespace() => *pos += 1,
            _ => break,
        }
    }
}

pub fn write_pgm(frame: &LumaFrame, path: &Path) -> Result<()> {
    let mut out = Vec::with_capacity(frame.samples().len() + 20);
    write!(out, "P5\n{} {}\n255\n", frame.width(), frame.height()).expect("writing to a Vec");
    out.extend_from_slice(frame.samples());
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Resolves a PGM sequence locator: a directory (all `.pgm` files, sorted by
/// name) or a printf-style pattern such as `frame_%03d.pgm`, numbered from 0
/// or 1 until the first missing index.
pub fn pgm_sequence_paths(locator: &Path) -> Result<Vec<PathBuf>> {
    if locator.is_dir() {
        let mut paths: Vec<PathBuf> = fs::read_dir(locator)
            .map_err(|e| Error::io(locator, e))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm")))
            .collect();
        paths.sort();
        if paths.is_empty() {
            return Err(Error::Config(format!("{}: no .pgm files", locator.display())));
        }
        return Ok(paths);
    }
    let text = locator.to_string_lossy();
    let Some((prefix, width, suffix)) = split_pattern(&text) else {
        return if locator.is_file() {
            Ok(vec![locator.to_path_buf()])
        } else {
            Err(Error::io(locator, std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or directory")))
        };
    };
    let name = |i: usize| PathBuf::from(format!("{prefix}{i:0width$}{suffix}"));
    let first = if name(0).is_file() { 0 } else { 1 };
    let paths: Vec<PathBuf> = (first..).map(name).take_while(|p| p.is_file()).collect();
    if paths.is_empty() {
        return Err(Error::Config(format!("no files match the pattern {text}")));
    }
    Ok(paths)
}

/// Splits `a%03db` into (`a`, 3, `b`).
fn split_pattern(text: &str) -> Option<(&str, usize, &str)> {
    let start = text.find('%')?;
    let rest = &text[start + 1..];
    let d = rest.find('d')?;
    let spec = &rest[..d];
    let width = if spec.is_empty() { 0 } else { spec.parse().ok()? };
    Some((&text[..start], width, &rest[d + 1..]))
}

pub(crate) struct PgmSequence {
    paths: std::vec::IntoIter<PathBuf>,
    geometry: Option<(usize, usize)>,
    failed: bool,
}

impl PgmSequence {
    pub(crate) fn new(paths: Vec<PathBuf>) -> Self {
        PgmSequence { paths: paths.into_iter(), geometry: None, failed: false }
    }

    fn load(&mut self, path: PathBuf) -> Result<LumaFrame> {
        let data = fs::read(&path).map_err(|e| Error::io(&path, e))?;
        let frame = parse_pgm(&data, &path)?;
        let dims = (frame.width(), frame.height());
        match self.geometry {
            None => self.geometry = Some(dims),
            Some(g) if g != dims => {
                return Err(Error::Format {
                    path,
                    offset: 0,
                    message: format!("geometry {}x{} differs from the first frame's {}x{}", dims.0, dims.1, g.0, g.1),
                })
            }
            Some(_) => {}
        }
        Ok(frame)
    }
}

impl Iterator for PgmSequence {
    type Item = Result<LumaFrame>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let path = self.paths.next()?;
        let item = self.load(path);
        self.failed = item.is_err();
        Some(item)
    }
}
