//! Histogram-of-oriented-gradients descriptors and descriptor matching.
//!
//! `hog_descriptor_field` computes the classic fixed-grid field: cell
//! histograms of gradient orientation (hard assignment, magnitude votes)
//! and block descriptors normalized per block. For disparity estimation the
//! descriptors are anchored densely at every pixel instead, so matching
//! resolves shifts at pixel rather than cell granularity; the cells of each
//! block are carved relative to its anchor.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::imaging::{gradients, magnitude_orientation, GrayImage};
use crate::matching::DisparityMap;

#[derive(Debug, Clone, Copy)]
pub struct HogParams {
    /// Cell side in pixels.
    pub cell_size: usize,
    /// Orientation bins over [0, 180) unsigned or [0, 360) signed.
    pub bins: usize,
    /// Cells per block side.
    pub block_cells: usize,
    pub signed: bool,
    /// Normalization guard: v / sqrt(|v|^2 + epsilon^2).
    pub epsilon: f64,
}

impl Default for HogParams {
    fn default() -> Self {
        HogParams { cell_size: 4, bins: 9, block_cells: 2, signed: false, epsilon: 1e-3 }
    }
}

impl HogParams {
    fn validate(&self) {
        assert!(self.cell_size >= 1, "cell_size must be >= 1");
        assert!(self.bins >= 2, "bins must be >= 2");
        assert!(self.block_cells >= 1, "block_cells must be >= 1");
        assert!(self.epsilon > 0.0, "epsilon must be positive");
    }

    /// Block side in pixels.
    fn span(&self) -> usize {
        self.block_cells * self.cell_size
    }

    fn block_dim(&self) -> usize {
        self.block_cells * self.block_cells * self.bins
    }

    #[inline]
    fn bin_of(&self, orientation: f64) -> usize {
        let range = if self.signed { 360.0 } else { 180.0 };
        (((orientation / range) * self.bins as f64) as usize).min(self.bins - 1)
    }
}

/// Fixed-grid descriptor field: per-cell orientation histograms plus the
/// L2-normalized descriptor of every block of `block_cells x block_cells`
/// cells (block stride = one cell).
#[derive(Debug, Clone)]
pub struct HogDescriptorField {
    pub cells_x: usize,
    pub cells_y: usize,
    pub blocks_x: usize,
    pub blocks_y: usize,
    pub bins: usize,
    pub block_dim: usize,
    cell_histograms: Vec<f64>,
    blocks: Vec<f64>,
}

impl HogDescriptorField {
    pub fn cell_histogram(&self, cx: usize, cy: usize) -> &[f64] {
        let base = (cy * self.cells_x + cx) * self.bins;
        &self.cell_histograms[base..base + self.bins]
    }

    /// Normalized descriptor of the block whose top-left cell is (bx, by).
    pub fn block(&self, bx: usize, by: usize) -> &[f64] {
        let base = (by * self.blocks_x + bx) * self.block_dim;
        &self.blocks[base..base + self.block_dim]
    }
}

fn normalize_block(v: &mut [f64], epsilon: f64) {
    let norm_sq: f64 = v.iter().map(|x| x * x).sum();
    let denom = (norm_sq + epsilon * epsilon).sqrt();
    for x in v.iter_mut() {
        *x /= denom;
    }
}

/// Computes the fixed-grid descriptor field.
pub fn hog_descriptor_field(img: &GrayImage, p: &HogParams) -> Result<HogDescriptorField> {
    p.validate();
    let span = p.span();
    if img.width() < span || img.height() < span {
        return Err(Error::TooSmall {
            width: img.width(),
            height: img.height(),
            min_width: span,
            min_height: span,
        });
    }
    let field = gradients(img)?;
    let (mag, ori) = magnitude_orientation(&field, p.signed);
    let w = img.width();

    let cells_x = img.width() / p.cell_size;
    let cells_y = img.height() / p.cell_size;
    let mut cell_histograms = vec![0.0f64; cells_x * cells_y * p.bins];
    for cy in 0..cells_y {
        for cx in 0..cells_x {
            let hist = &mut cell_histograms[(cy * cells_x + cx) * p.bins..][..p.bins];
            for py in cy * p.cell_size..(cy + 1) * p.cell_size {
                for px in cx * p.cell_size..(cx + 1) * p.cell_size {
                    let i = py * w + px;
                    hist[p.bin_of(ori[i])] += mag[i];
                }
            }
        }
    }

    let blocks_x = cells_x - p.block_cells + 1;
    let blocks_y = cells_y - p.block_cells + 1;
    let block_dim = p.block_dim();
    let mut blocks = vec![0.0f64; blocks_x * blocks_y * block_dim];
    for by in 0..blocks_y {
        for bx in 0..blocks_x {
            let desc = &mut blocks[(by * blocks_x + bx) * block_dim..][..block_dim];
            let mut offset = 0;
            for cy in by..by + p.block_cells {
                for cx in bx..bx + p.block_cells {
                    let hist = &cell_histograms[(cy * cells_x + cx) * p.bins..][..p.bins];
                    desc[offset..offset + p.bins].copy_from_slice(hist);
                    offset += p.bins;
                }
            }
            normalize_block(desc, p.epsilon);
        }
    }

    Ok(HogDescriptorField {
        cells_x,
        cells_y,
        blocks_x,
        blocks_y,
        bins: p.bins,
        block_dim,
        cell_histograms,
        blocks,
    })
}

/// Dense per-pixel block descriptors: one normalized block anchored at each
/// pixel that can host it. Anchors past `width - span` or `height - span`
/// are invalid.
struct DenseDescriptors {
    width: usize,
    height: usize,
    span: usize,
    dim: usize,
    data: Vec<f64>,
}

impl DenseDescriptors {
    fn valid(&self, x: usize, y: usize) -> bool {
        x + self.span <= self.width && y + self.span <= self.height
    }

    #[inline]
    fn get(&self, x: usize, y: usize) -> &[f64] {
        let base = (y * self.width + x) * self.dim;
        &self.data[base..base + self.dim]
    }
}

fn dense_descriptors(img: &GrayImage, p: &HogParams) -> Result<DenseDescriptors> {
    let span = p.span();
    if img.width() < span || img.height() < span {
        return Err(Error::TooSmall {
            width: img.width(),
            height: img.height(),
            min_width: span,
            min_height: span,
        });
    }
    let field = gradients(img)?;
    let (mag, ori) = magnitude_orientation(&field, p.signed);
    let (w, h) = (img.width(), img.height());
    let dim = p.block_dim();

    let mut data = vec![0.0f64; w * h * dim];
    data.par_chunks_mut(w * dim).enumerate().for_each(|(y, row)| {
        if y + span > h {
            return;
        }
        for x in 0..=(w - span) {
            let desc = &mut row[x * dim..(x + 1) * dim];
            for bc_y in 0..p.block_cells {
                for bc_x in 0..p.block_cells {
                    let hist_base = (bc_y * p.block_cells + bc_x) * p.bins;
                    let hist = &mut desc[hist_base..hist_base + p.bins];
                    let y0 = y + bc_y * p.cell_size;
                    let x0 = x + bc_x * p.cell_size;
                    for py in y0..y0 + p.cell_size {
                        for px in x0..x0 + p.cell_size {
                            let i = py * w + px;
                            hist[p.bin_of(ori[i])] += mag[i];
                        }
                    }
                }
            }
            normalize_block(desc, p.epsilon);
        }
    });
    Ok(DenseDescriptors { width: w, height: h, span, dim, data })
}

#[inline]
fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    acc
}

/// Descriptor matching: per pixel, the squared L2 distance between the left
/// descriptor at `(x, y)` and the right descriptor at `(x - d, y)`,
/// winner-take-all with ties toward the smallest disparity. Pixels whose
/// block does not fit are INVALID.
pub fn hog_disparity(
    left: &GrayImage,
    right: &GrayImage,
    dmax: usize,
    p: &HogParams,
) -> Result<DisparityMap> {
    if left.width() != right.width() || left.height() != right.height() {
        return Err(Error::dims(
            format!("{}x{}", left.width(), left.height()),
            format!("{}x{}", right.width(), right.height()),
        ));
    }
    let dl = dense_descriptors(left, p)?;
    let dr = dense_descriptors(right, p)?;
    let (w, h) = (left.width(), left.height());

    let mut values = vec![f64::NAN; w * h];
    let mut valid = vec![false; w * h];
    values
        .par_chunks_mut(w)
        .zip(valid.par_chunks_mut(w))
        .enumerate()
        .for_each(|(y, (vrow, mrow))| {
            for x in 0..w {
                if !dl.valid(x, y) {
                    continue;
                }
                let reference = dl.get(x, y);
                let mut best_d = usize::MAX;
                let mut best_cost = f64::INFINITY;
                for d in 0..=dmax.min(x) {
                    let xr = x - d;
                    if !dr.valid(xr, y) {
                        continue;
                    }
                    let cost = squared_distance(reference, dr.get(xr, y));
                    if cost < best_cost {
                        best_cost = cost;
                        best_d = d;
                    }
                }
                if best_d != usize::MAX {
                    vrow[x] = best_d as f64;
                    mrow[x] = true;
                }
            }
        });
    Ok(DisparityMap { width: w, height: h, values, valid })
}
