//! Scene ingestion: image and ground-truth decoding plus dataset discovery
//! for Middlebury-style directory layouts.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

mod calib;
mod pfm;
mod pnm;

pub use calib::{parse_calib, parse_calib_str};
pub use pfm::{decode_pfm, encode_pfm, load_pfm, write_pfm};
pub use pnm::{decode_pnm, encode_pnm, load_pnm, write_pnm};

/// 8-bit raster image, row-major, interleaved channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawImage {
    pub width: usize,
    pub height: usize,
    /// 1 (gray) or 3 (RGB).
    pub channels: u8,
    pub samples: Vec<u8>,
}

/// Ground-truth disparities with a validity mask.
///
/// `valid` is false where the stored value was non-finite (the Middlebury
/// unknown marker) or negative.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub width: usize,
    pub height: usize,
    pub disparities: Vec<f64>,
    pub valid: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalibrationQuality {
    Perfect,
    Imperfect,
}

/// One discovered scene: paths plus the calibration's disparity bound.
#[derive(Debug, Clone)]
pub struct SceneEntry {
    pub scene_id: String,
    pub left_path: PathBuf,
    pub right_path: PathBuf,
    pub gt_path: PathBuf,
    /// Disparity search bound from calib.txt; disparities live in [0, ndisp).
    pub ndisp: usize,
    pub calibration_quality: CalibrationQuality,
}

/// On-disk file names inside each scene directory. Middlebury 2014 defaults;
/// the 2021 scenes use different ground-truth names, hence configurable.
#[derive(Debug, Clone)]
pub struct SceneNaming {
    pub left: String,
    pub right: String,
    pub gt: String,
    pub calib: String,
}

impl Default for SceneNaming {
    fn default() -> Self {
        SceneNaming {
            left: "im0.png".into(),
            right: "im1.png".into(),
            gt: "disp0.pfm".into(),
            calib: "calib.txt".into(),
        }
    }
}

/// A scene directory that was skipped, and why.
#[derive(Debug, Clone)]
pub struct SkippedDir {
    pub dir: String,
    pub reason: String,
}

/// Result of scanning a dataset root.
#[derive(Debug, Clone)]
pub struct Discovery {
    /// Usable scenes in lexicographic scene_id order.
    pub scenes: Vec<SceneEntry>,
    /// Subdirectories missing a required file, in the same order.
    pub skipped: Vec<SkippedDir>,
}

/// Loads a left/right image, sniffing the container from its magic bytes.
/// PNM is decoded in-repo; PNG is delegated to the `image` crate and
/// converted to the same 8-bit `RawImage` contract.
pub fn load_image(path: &Path) -> Result<RawImage> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.starts_with(b"\x89PNG") {
        return decode_png(&bytes, path);
    }
    if bytes.starts_with(b"P") {
        return decode_pnm(&bytes, path);
    }
    Err(Error::UnsupportedFormat(format!("{}: unrecognized image container", path.display())))
}

fn decode_png(bytes: &[u8], path: &Path) -> Result<RawImage> {
    use image::DynamicImage;

    let dynimg = image::load_from_memory(bytes)
        .map_err(|e| Error::MalformedHeader(format!("{}: {e}", path.display())))?;
    let (width, height) = (dynimg.width() as usize, dynimg.height() as usize);
    let (channels, samples) = match dynimg {
        DynamicImage::ImageLuma8(buf) => (1, buf.into_raw()),
        DynamicImage::ImageRgb8(buf) => (3, buf.into_raw()),
        DynamicImage::ImageLumaA8(buf) => {
            (1, buf.pixels().map(|p| p.0[0]).collect())
        }
        DynamicImage::ImageRgba8(buf) => {
            (3, buf.pixels().flat_map(|p| [p.0[0], p.0[1], p.0[2]]).collect())
        }
        other => {
            return Err(Error::UnsupportedFormat(format!(
                "{}: {:?} is not an 8-bit gray/RGB PNG",
                path.display(),
                other.color()
            )))
        }
    };
    Ok(RawImage { width, height, channels, samples })
}

/// Scans `root` for scene directories holding the four required files.
///
/// Directories missing any of them (or with an unparseable calib file) are
/// reported in `skipped` rather than aborting the scan. Output order is
/// lexicographic by scene_id regardless of filesystem enumeration order.
pub fn discover_dataset(root: &Path, naming: &SceneNaming) -> Result<Discovery> {
    let entries = std::fs::read_dir(root).map_err(|e| Error::io(root, e))?;
    let mut dirs: Vec<(String, PathBuf)> = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(root, e))?;
        let path = entry.path();
        if path.is_dir() {
            dirs.push((entry.file_name().to_string_lossy().into_owned(), path));
        }
    }
    dirs.sort_by(|a, b| a.0.cmp(&b.0));

    let mut scenes = Vec::new();
    let mut skipped = Vec::new();
    for (scene_id, dir) in dirs {
        let left_path = dir.join(&naming.left);
        let right_path = dir.join(&naming.right);
        let gt_path = dir.join(&naming.gt);
        let calib_path = dir.join(&naming.calib);

        let mut missing = Vec::new();
        for (name, p) in [
            (&naming.left, &left_path),
            (&naming.right, &right_path),
            (&naming.gt, &gt_path),
            (&naming.calib, &calib_path),
        ] {
            if !p.is_file() {
                missing.push(name.as_str());
            }
        }
        if !missing.is_empty() {
            skipped.push(SkippedDir { dir: scene_id, reason: format!("missing {}", missing.join(", ")) });
            continue;
        }

        let ndisp = match parse_calib(&calib_path) {
            Ok(n) => n,
            Err(e) => {
                skipped.push(SkippedDir { dir: scene_id, reason: format!("calib: {e}") });
                continue;
            }
        };
        let calibration_quality = if scene_id.ends_with("-imperfect") {
            CalibrationQuality::Imperfect
        } else {
            CalibrationQuality::Perfect
        };
        scenes.push(SceneEntry { scene_id, left_path, right_path, gt_path, ndisp, calibration_quality });
    }

    if scenes.is_empty() {
        return Err(Error::EmptyDataset(root.to_path_buf()));
    }
    Ok(Discovery { scenes, skipped })
}
