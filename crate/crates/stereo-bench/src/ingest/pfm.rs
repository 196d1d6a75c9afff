//! PFM ground-truth disparity maps ("Pf", single channel).
//!
//! The scale line's sign encodes endianness (negative = little-endian) and
//! rows are stored bottom-to-top; loading converts to top-to-bottom. Stored
//! values that are non-finite (Middlebury marks unknown disparities with
//! +inf) or negative map to `valid = false`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::GroundTruth;

fn header_token<'a>(bytes: &'a [u8], pos: &mut usize, path: &Path) -> Result<&'a [u8]> {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    if *pos == start {
        return Err(Error::TruncatedFile(path.display().to_string()));
    }
    Ok(&bytes[start..*pos])
}

/// Decodes a single-channel PFM from raw bytes.
pub fn decode_pfm(bytes: &[u8], path: &Path) -> Result<GroundTruth> {
    let mut pos = 0;
    let magic = header_token(bytes, &mut pos, path)?;
    match magic {
        b"Pf" => {}
        b"PF" => {
            return Err(Error::UnsupportedFormat(format!(
                "{}: color PFM not supported",
                path.display()
            )))
        }
        other => {
            return Err(Error::UnsupportedFormat(format!(
                "{}: magic `{}`",
                path.display(),
                String::from_utf8_lossy(other)
            )))
        }
    }

    let parse_dim = |tok: &[u8]| -> Option<usize> {
        std::str::from_utf8(tok).ok().and_then(|s| s.parse().ok())
    };
    let wtok = header_token(bytes, &mut pos, path)?;
    let htok = header_token(bytes, &mut pos, path)?;
    let (width, height) = match (parse_dim(wtok), parse_dim(htok)) {
        (Some(w), Some(h)) if w > 0 && h > 0 => (w, h),
        _ => {
            return Err(Error::MalformedHeader(format!("{}: bad dimensions", path.display())))
        }
    };

    let stok = header_token(bytes, &mut pos, path)?;
    let scale: f64 = std::str::from_utf8(stok)
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|s: &f64| s.is_finite() && *s != 0.0)
        .ok_or_else(|| Error::MalformedHeader(format!("{}: bad scale line", path.display())))?;
    let little_endian = scale < 0.0;

    // One whitespace byte, then the raster.
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(Error::MalformedHeader(format!("{}: missing raster separator", path.display())));
    }
    pos += 1;

    let count = width * height;
    let raster = &bytes[pos..];
    if raster.len() < count * 4 {
        return Err(Error::TruncatedFile(path.display().to_string()));
    }

    // PFM rows run bottom-to-top; flip while reading.
    let mut disparities = vec![0.0f64; count];
    let mut valid = vec![false; count];
    for row in 0..height {
        let src_row = height - 1 - row;
        for x in 0..width {
            let off = (src_row * width + x) * 4;
            let quad = [raster[off], raster[off + 1], raster[off + 2], raster[off + 3]];
            let v = if little_endian {
                f32::from_le_bytes(quad)
            } else {
                f32::from_be_bytes(quad)
            };
            let v = f64::from(v);
            let i = row * width + x;
            disparities[i] = v;
            valid[i] = v.is_finite() && v >= 0.0;
        }
    }
    Ok(GroundTruth { width, height, disparities, valid })
}

/// Loads a PFM file from disk.
pub fn load_pfm(path: &Path) -> Result<GroundTruth> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pfm(&bytes, path)
}

/// Encodes values as little-endian "Pf" (scale -1.0), rows bottom-to-top.
/// `values` is top-to-bottom row-major, in f64; each is narrowed to f32.
pub fn encode_pfm(width: usize, height: usize, values: &[f64]) -> Vec<u8> {
    assert_eq!(values.len(), width * height);
    let mut out = format!("Pf\n{width} {height}\n-1.0\n").into_bytes();
    for row in (0..height).rev() {
        for x in 0..width {
            out.extend_from_slice(&(values[row * width + x] as f32).to_le_bytes());
        }
    }
    out
}

/// Writes a little-endian "Pf" file.
pub fn write_pfm(width: usize, height: usize, values: &[f64], path: &Path) -> Result<()> {
    std::fs::write(path, encode_pfm(width, height, values)).map_err(|e| Error::io(path, e))
}
