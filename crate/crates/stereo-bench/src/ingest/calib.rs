//! Middlebury `calib.txt` parsing. Only `ndisp` matters here; camera
//! matrices, vmin/vmax and friends are ignored.

use std::path::Path;

use crate::error::{Error, Result};

/// Extracts the disparity search bound from `key=value` calibration text.
pub fn parse_calib_str(text: &str) -> Result<usize> {
    for line in text.lines() {
        let line = line.trim();
        let Some((key, value)) = line.split_once('=') else { continue };
        if key.trim() != "ndisp" {
            continue;
        }
        let value = value.trim();
        return value
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::MalformedValue { key: "ndisp".into(), value: value.into() });
    }
    Err(Error::MissingKey("ndisp".into()))
}

/// Parses a calibration file and returns `ndisp`.
pub fn parse_calib(path: &Path) -> Result<usize> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_calib_str(&text)
}
