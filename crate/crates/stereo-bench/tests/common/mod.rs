//! Shared test support: synthetic stereo scenes in Middlebury 2014 on-disk
//! layout (im0.png / im1.png / disp0.pfm / calib.txt), plus small
//! independent oracles.
//!
//! Scenes are synthesized from an analytic texture P and a left-referenced
//! disparity field D: the right image samples P directly and the left
//! image samples P at (x - D(x, y), y), so L(x, y) corresponds to
//! R(x - D(x, y), y) exactly. Sensor noise is added independently to both
//! images from a seeded generator.

#![allow(dead_code)]

use std::path::Path;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use stereo_bench::cost::{CostVolume, Metric, WindowSpec};
use stereo_bench::imaging::GrayImage;
use stereo_bench::ingest::write_pfm;

/// Wraps explicit per-(pixel, label) costs in a volume.
pub fn volume_from_costs(w: usize, h: usize, labels: usize, costs: &[f64]) -> CostVolume {
    assert_eq!(costs.len(), w * h * labels);
    CostVolume::build(w, h, labels - 1, Metric::Sad, WindowSpec::new(0), |x, y, out| {
        let base = (y * w + x) * labels;
        out.copy_from_slice(&costs[base..base + labels]);
    })
}

/// Smooth aperiodic texture in [0, 1] with a gentle low-frequency contrast
/// dip so window matching has genuinely ambiguous regions. The dip is gated
/// off near the left edge where the disparity search has partial window
/// overlap anyway.
pub fn texture(x: f64, y: f64, variant: u32) -> f64 {
    let v = variant as f64;
    let dip = 0.5 + 0.5 * (x / 131.0 + v).sin() * (y / 97.0 - 0.4 * v).sin();
    let gate = ((x - 120.0) / 80.0).clamp(0.0, 1.0);
    let contrast = 1.0 - 0.7 * gate * (1.0 - dip);
    let base = 0.15 * (0.431 * x + 0.117 * y + 1.3 * v).sin()
        + 0.12 * (0.173 * x - 0.301 * y + 0.7 * v).cos()
        + 0.09 * (0.251 * (x + y) - 2.1 * v).sin()
        + 0.06 * (0.587 * x + 0.089 * y + 0.5 * v).cos();
    // Horizontally periodic component: its period (16 px, 4 px at quarter
    // scale) sits inside the search range, so weakly textured areas offer
    // ghost matches one period off the true disparity.
    let grating = 0.10 * (std::f64::consts::TAU * x / 16.0 + 0.9 * v).sin();
    (0.5 + contrast * base + grating).clamp(0.0, 1.0)
}

/// Left-referenced disparity fields, full-resolution pixel units.
#[derive(Clone, Copy)]
pub enum DispField {
    /// Fronto-parallel background plus two raised rectangles.
    Blocks,
    /// Slanted plane with a raised bump.
    Slant,
    /// Smooth blobs.
    Blobs,
    /// Nested fronto-parallel depth planes with curved boundaries.
    Steps,
}

impl DispField {
    pub fn eval(self, x: f64, y: f64, w: f64, h: f64) -> f64 {
        match self {
            DispField::Blocks => {
                let mut d = 12.0;
                if x > 0.22 * w && x < 0.55 * w && y > 0.2 * h && y < 0.62 * h {
                    d = 32.0;
                }
                if x > 0.62 * w && x < 0.9 * w && y > 0.45 * h && y < 0.85 * h {
                    d = 22.0;
                }
                d
            }
            DispField::Slant => {
                let ramp = 8.0 + 28.0 * (x / w);
                let bump = if (x - 0.3 * w).hypot(y - 0.7 * h) < 0.16 * w { 10.0 } else { 0.0 };
                ramp + bump
            }
            DispField::Blobs => {
                let g = |cx: f64, cy: f64, s: f64, a: f64| {
                    let r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
                    a * (-r2 / (2.0 * s * s)).exp()
                };
                10.0 + g(0.3 * w, 0.35 * h, 0.13 * w, 22.0)
                    + g(0.72 * w, 0.65 * h, 0.1 * w, 16.0)
                    + g(0.55 * w, 0.2 * h, 0.08 * w, 12.0)
            }
            DispField::Steps => {
                // Ellipse-ish levels: distance from a warped center picks
                // one of four fronto-parallel planes.
                let dx = (x - 0.52 * w) / (0.55 * w);
                let dy = (y - 0.48 * h) / (0.62 * h);
                let wobble = 0.08 * (x / 53.0).sin() * (y / 41.0).cos();
                let r = (dx * dx + dy * dy).sqrt() + wobble;
                if r < 0.28 {
                    34.0
                } else if r < 0.55 {
                    26.0
                } else if r < 0.82 {
                    18.0
                } else {
                    10.0
                }
            }
        }
    }
}

#[derive(Clone)]
pub struct SceneSpec {
    pub name: &'static str,
    pub width: usize,
    pub height: usize,
    pub ndisp: usize,
    pub field: DispField,
    pub noise: f64,
    pub texture_variant: u32,
    pub seed: u64,
}

/// The three scenes the dataset-level tests run on.
pub fn standard_scenes() -> Vec<SceneSpec> {
    vec![
        SceneSpec {
            name: "blocks",
            width: 1024,
            height: 512,
            ndisp: 40,
            field: DispField::Blocks,
            noise: 0.18,
            texture_variant: 0,
            seed: 101,
        },
        SceneSpec {
            name: "blobs",
            width: 1024,
            height: 512,
            ndisp: 40,
            field: DispField::Blobs,
            noise: 0.20,
            texture_variant: 1,
            seed: 202,
        },
        SceneSpec {
            name: "slant",
            width: 1024,
            height: 512,
            ndisp: 40,
            field: DispField::Slant,
            noise: 0.20,
            texture_variant: 2,
            seed: 303,
        },
        SceneSpec {
            name: "steps",
            width: 1024,
            height: 512,
            ndisp: 40,
            field: DispField::Steps,
            noise: 0.20,
            texture_variant: 3,
            seed: 404,
        },
    ]
}

fn save_gray_png(path: &Path, width: usize, height: usize, data: &[f64]) {
    let samples: Vec<u8> = data.iter().map(|v| (v * 255.0).round().clamp(0.0, 255.0) as u8).collect();
    let buf: image::GrayImage =
        image::ImageBuffer::from_raw(width as u32, height as u32, samples).unwrap();
    buf.save(path).unwrap();
}

/// Writes one scene directory under `root` and returns its ground truth.
pub fn generate_scene(root: &Path, spec: &SceneSpec) -> Vec<f64> {
    let dir = root.join(spec.name);
    std::fs::create_dir_all(&dir).unwrap();
    let (w, h) = (spec.width, spec.height);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut left = vec![0.0f64; w * h];
    let mut right = vec![0.0f64; w * h];
    let mut gt = vec![0.0f64; w * h];
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let (xf, yf) = (x as f64, y as f64);
            let d = spec.field.eval(xf, yf, w as f64, h as f64);
            // Pixels whose correspondence falls off the right image, plus a
            // left guard band where the search window barely overlaps, have
            // no usable ground truth; mark them unknown like the published
            // maps do.
            gt[i] = if xf - d < 0.0 || x < spec.ndisp + 4 { f64::INFINITY } else { d };
            left[i] = texture(xf - d, yf, spec.texture_variant);
            right[i] = texture(xf, yf, spec.texture_variant);
        }
    }
    for v in left.iter_mut().chain(right.iter_mut()) {
        let noise = (rng.random::<f64>() * 2.0 - 1.0) * spec.noise;
        *v = (*v + noise).clamp(0.0, 1.0);
    }

    save_gray_png(&dir.join("im0.png"), w, h, &left);
    save_gray_png(&dir.join("im1.png"), w, h, &right);
    write_pfm(w, h, &gt, &dir.join("disp0.pfm")).unwrap();
    std::fs::write(
        dir.join("calib.txt"),
        format!(
            "cam0=[1000 0 {cx}; 0 1000 {cy}; 0 0 1]\nwidth={w}\nheight={h}\nndisp={nd}\nisint=0\n",
            cx = w / 2,
            cy = h / 2,
            nd = spec.ndisp
        ),
    )
    .unwrap();
    gt
}

/// Writes the full three-scene dataset and returns the root.
pub fn generate_dataset(root: &Path) {
    for spec in standard_scenes() {
        generate_scene(root, &spec);
    }
}

/// Analytic shifted pair on a plain texture, no noise: L(x) = P(x),
/// R(x) = P(x + k), so the true disparity is exactly k everywhere.
pub fn shifted_pair(w: usize, h: usize, k: usize, variant: u32) -> (GrayImage, GrayImage) {
    let mut left = Vec::with_capacity(w * h);
    let mut right = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            left.push(texture(x as f64, y as f64, variant));
            right.push(texture((x + k) as f64, y as f64, variant));
        }
    }
    (GrayImage::from_data(w, h, left), GrayImage::from_data(w, h, right))
}

/// Energy of one row labeling under truncated-linear smoothness; the
/// independent oracle shared by the DP and BP exactness tests.
pub fn row_energy(costs: &[f64], labels: usize, labeling: &[usize], lambda: f64, tau: f64) -> f64 {
    let mut e = 0.0;
    for (x, &d) in labeling.iter().enumerate() {
        e += costs[x * labels + d];
    }
    for pair in labeling.windows(2) {
        let delta = (pair[0] as i64 - pair[1] as i64).unsigned_abs() as f64;
        e += (lambda * delta).min(tau);
    }
    e
}

/// Exhaustive minimum of the row energy over all labelings.
pub fn brute_force_min_energy(costs: &[f64], width: usize, labels: usize, lambda: f64, tau: f64) -> f64 {
    let mut best = f64::INFINITY;
    let mut labeling = vec![0usize; width];
    for code in 0..labels.pow(width as u32) {
        let mut c = code;
        for slot in labeling.iter_mut() {
            *slot = c % labels;
            c /= labels;
        }
        let e = row_energy(costs, labels, &labeling, lambda, tau);
        if e < best {
            best = e;
        }
    }
    best
}
