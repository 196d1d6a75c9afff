//! Netpbm (P2/P3/P5/P6) decoding and encoding, maxval <= 255.

use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::RawImage;

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    path: &'a Path,
}

impl<'a> Cursor<'a> {
    fn new(bytes: &'a [u8], path: &'a Path) -> Self {
        Cursor { bytes, pos: 0, path }
    }

    fn truncated(&self) -> Error {
        Error::TruncatedFile(self.path.display().to_string())
    }

    /// Skips whitespace and `#` comments (which run to end of line).
    fn skip_separators(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<&'a [u8]> {
        self.skip_separators();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.truncated());
        }
        Ok(&self.bytes[start..self.pos])
    }

    fn header_number(&mut self, what: &str) -> Result<usize> {
        let tok = self.token()?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| {
                Error::MalformedHeader(format!(
                    "{}: bad {what} `{}`",
                    self.path.display(),
                    String::from_utf8_lossy(tok)
                ))
            })
    }
}

/// Decodes a PNM image (binary or ASCII, gray or RGB) from raw bytes.
pub fn decode_pnm(bytes: &[u8], path: &Path) -> Result<RawImage> {
    if bytes.len() < 2 {
        return Err(Error::TruncatedFile(path.display().to_string()));
    }
    let magic = &bytes[..2];
    let (channels, ascii) = match magic {
        b"P2" => (1u8, true),
        b"P3" => (3u8, true),
        b"P5" => (1u8, false),
        b"P6" => (3u8, false),
        _ => {
            return Err(Error::UnsupportedFormat(format!(
                "{}: magic `{}`",
                path.display(),
                String::from_utf8_lossy(magic)
            )))
        }
    };

    let mut cur = Cursor::new(bytes, path);
    cur.pos = 2;
    let width = cur.header_number("width")?;
    let height = cur.header_number("height")?;
    let maxval = cur.header_number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::MalformedHeader(format!("{}: zero dimension", path.display())));
    }
    if maxval == 0 {
        return Err(Error::MalformedHeader(format!("{}: maxval 0", path.display())));
    }
    if maxval > 255 {
        return Err(Error::UnsupportedFormat(format!(
            "{}: maxval {maxval} exceeds 255",
            path.display()
        )));
    }

    let count = width * height * channels as usize;
    let samples = if ascii {
        let mut samples = Vec::with_capacity(count);
        for _ in 0..count {
            let tok = cur.token()?;
            let v = std::str::from_utf8(tok)
                .ok()
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| Error::MalformedValue {
                    key: "sample".into(),
                    value: String::from_utf8_lossy(tok).into_owned(),
                })?;
            if v > maxval {
                return Err(Error::MalformedValue { key: "sample".into(), value: v.to_string() });
            }
            samples.push(v as u8);
        }
        samples
    } else {
        // Exactly one whitespace byte separates the header from the raster.
        if cur.pos >= bytes.len() || !bytes[cur.pos].is_ascii_whitespace() {
            return Err(Error::MalformedHeader(format!(
                "{}: missing raster separator",
                path.display()
            )));
        }
        cur.pos += 1;
        let raster = &bytes[cur.pos..];
        if raster.len() < count {
            return Err(cur.truncated());
        }
        let samples = raster[..count].to_vec();
        if maxval < 255 {
            if let Some(&v) = samples.iter().find(|&&v| v as usize > maxval) {
                return Err(Error::MalformedValue { key: "sample".into(), value: v.to_string() });
            }
        }
        samples
    };

    Ok(RawImage { width, height, channels, samples })
}

/// Loads a PNM file from disk.
pub fn load_pnm(path: &Path) -> Result<RawImage> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pnm(&bytes, path)
}

/// Encodes as binary P5 (1 channel) or P6 (3 channels), maxval 255.
pub fn encode_pnm(img: &RawImage) -> Vec<u8> {
    let magic = if img.channels == 1 { "P5" } else { "P6" };
    let mut out = format!("{magic}\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.samples);
    out
}

/// Writes a binary PNM file (P5/P6, maxval 255).
pub fn write_pnm(img: &RawImage, path: &Path) -> Result<()> {
    std::fs::write(path, encode_pnm(img)).map_err(|e| Error::io(path, e))
}
