//! Preprocessing: grayscale conversion, bilinear resizing, and gradient fields.
//!
//! Everything downstream works on `GrayImage`: double-precision intensities
//! in `[0, 1]`, row-major.

use crate::error::{Error, Result};
use crate::ingest::RawImage;

/// Rec.601 luminance weights for RGB -> gray.
const LUMA_R: f64 = 0.299;
const LUMA_G: f64 = 0.587;
const LUMA_B: f64 = 0.114;

/// Grayscale image with intensities in `[0, 1]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayImage {
    /// Wraps raw intensity data. Panics if the length is wrong or any value
    /// falls outside `[0, 1]`.
    pub fn from_data(width: usize, height: usize, data: Vec<f64>) -> Self {
        assert!(width > 0 && height > 0, "empty image");
        assert_eq!(data.len(), width * height, "data length != width*height");
        assert!(
            data.iter().all(|v| (0.0..=1.0).contains(v)),
            "intensity outside [0, 1]"
        );
        GrayImage { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        debug_assert!(x < self.width && y < self.height);
        self.data[y * self.width + x]
    }
}

/// Per-pixel horizontal and vertical derivatives of a `GrayImage`.
#[derive(Debug, Clone)]
pub struct GradientField {
    pub width: usize,
    pub height: usize,
    /// d/dx, row-major, same dimensions as the source.
    pub gx: Vec<f64>,
    /// d/dy, row-major, same dimensions as the source.
    pub gy: Vec<f64>,
}

/// Converts an 8-bit raw image to grayscale intensities in `[0, 1]`.
///
/// Single-channel samples map to `s / 255`; RGB uses Rec.601 luminance
/// weights before the division.
pub fn to_grayscale(img: &RawImage) -> Result<GrayImage> {
    let (w, h) = (img.width, img.height);
    let mut data = Vec::with_capacity(w * h);
    match img.channels {
        1 => {
            for &s in &img.samples {
                data.push(f64::from(s) / 255.0);
            }
        }
        3 => {
            for px in img.samples.chunks_exact(3) {
                let y = LUMA_R * f64::from(px[0]) + LUMA_G * f64::from(px[1]) + LUMA_B * f64::from(px[2]);
                data.push((y / 255.0).clamp(0.0, 1.0));
            }
        }
        c => return Err(Error::UnsupportedChannels(c as u32)),
    }
    Ok(GrayImage::from_data(w, h, data))
}

/// Downscales by `factor` in `(0, 1]` with bilinear interpolation.
///
/// Output dimensions are `floor(w*factor) x floor(h*factor)`. Samples are
/// half-pixel centered: output pixel centers map uniformly onto the source
/// grid, so `factor = 1` reproduces the input bit-exactly.
pub fn resize(img: &GrayImage, factor: f64) -> Result<GrayImage> {
    assert!(factor > 0.0 && factor <= 1.0, "factor must be in (0, 1]");
    let out_w = (img.width as f64 * factor).floor() as usize;
    let out_h = (img.height as f64 * factor).floor() as usize;
    if out_w == 0 || out_h == 0 {
        return Err(Error::DegenerateSize { width: img.width, height: img.height, factor });
    }

    let rx = img.width as f64 / out_w as f64;
    let ry = img.height as f64 / out_h as f64;
    let last_x = img.width - 1;
    let last_y = img.height - 1;

    let mut data = vec![0.0; out_w * out_h];
    for (yo, row) in data.chunks_exact_mut(out_w).enumerate() {
        let sy = ((yo as f64 + 0.5) * ry - 0.5).clamp(0.0, last_y as f64);
        let y0 = sy.floor() as usize;
        let y1 = (y0 + 1).min(last_y);
        let fy = sy - y0 as f64;
        for (xo, out) in row.iter_mut().enumerate() {
            let sx = ((xo as f64 + 0.5) * rx - 0.5).clamp(0.0, last_x as f64);
            let x0 = sx.floor() as usize;
            let x1 = (x0 + 1).min(last_x);
            let fx = sx - x0 as f64;
            let top = img.get(x0, y0) * (1.0 - fx) + img.get(x1, y0) * fx;
            let bot = img.get(x0, y1) * (1.0 - fx) + img.get(x1, y1) * fx;
            *out = (top * (1.0 - fy) + bot * fy).clamp(0.0, 1.0);
        }
    }
    Ok(GrayImage::from_data(out_w, out_h, data))
}

/// Central-difference gradients, one-sided at the borders.
pub fn gradients(img: &GrayImage) -> Result<GradientField> {
    let (w, h) = (img.width, img.height);
    if w < 2 || h < 2 {
        return Err(Error::TooSmall { width: w, height: h, min_width: 2, min_height: 2 });
    }
    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            gx[i] = if x == 0 {
                img.get(1, y) - img.get(0, y)
            } else if x == w - 1 {
                img.get(w - 1, y) - img.get(w - 2, y)
            } else {
                (img.get(x + 1, y) - img.get(x - 1, y)) / 2.0
            };
            gy[i] = if y == 0 {
                img.get(x, 1) - img.get(x, 0)
            } else if y == h - 1 {
                img.get(x, h - 1) - img.get(x, h - 2)
            } else {
                (img.get(x, y + 1) - img.get(x, y - 1)) / 2.0
            };
        }
    }
    Ok(GradientField { width: w, height: h, gx, gy })
}

/// Gradient magnitude and orientation in degrees.
///
/// Signed orientations live in `[0, 360)`, unsigned ones fold into
/// `[0, 180)` (so 180 becomes 0). Zero-magnitude pixels get orientation 0.
pub fn magnitude_orientation(g: &GradientField, signed: bool) -> (Vec<f64>, Vec<f64>) {
    let n = g.width * g.height;
    let mut mag = vec![0.0; n];
    let mut ori = vec![0.0; n];
    for i in 0..n {
        let (dx, dy) = (g.gx[i], g.gy[i]);
        mag[i] = (dx * dx + dy * dy).sqrt();
        if dx == 0.0 && dy == 0.0 {
            continue;
        }
        let mut deg = dy.atan2(dx).to_degrees();
        if deg < 0.0 {
            deg += 360.0;
        }
        if deg >= 360.0 {
            deg = 0.0;
        }
        if !signed {
            if deg >= 180.0 {
                deg -= 180.0;
            }
            if deg >= 180.0 {
                deg = 0.0;
            }
        }
        ori[i] = deg;
    }
    (mag, ori)
}
