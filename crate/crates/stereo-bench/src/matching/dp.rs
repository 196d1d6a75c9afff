//! Scanline optimization: each row is solved exactly by forward dynamic
//! programming over the disparity labels, with the same truncated-linear
//! smoothness term the message passing uses.

use rayon::prelude::*;

use crate::cost::CostVolume;
use crate::matching::envelope::truncated_linear_envelope;
use crate::matching::DisparityMap;

/// Row-energy parameters: `E = sum cost(x, d_x) + sum V(d_x, d_{x+1})`
/// with `V(d, d') = min(lambda * |d - d'|, tau_s)`.
#[derive(Debug, Clone, Copy)]
pub struct DpParams {
    pub lambda: f64,
    pub tau_s: f64,
}

impl Default for DpParams {
    fn default() -> Self {
        DpParams { lambda: 0.05, tau_s: 0.1 }
    }
}

/// Minimizes each row's energy independently and exactly.
///
/// Among co-optimal labelings, backtracking scans right to left and prefers
/// the smallest disparity at each step.
pub fn dp_scanline(cv: &CostVolume, p: &DpParams) -> DisparityMap {
    let (w, h, labels) = (cv.width(), cv.height(), cv.labels());
    let mut values = vec![0.0f64; w * h];
    values
        .par_chunks_mut(w)
        .enumerate()
        .for_each(|(y, row)| solve_row(cv, p, y, labels, row));
    DisparityMap::all_valid(w, h, values)
}

fn solve_row(cv: &CostVolume, p: &DpParams, y: usize, labels: usize, out: &mut [f64]) {
    let w = out.len();
    // table[x * labels + d] = min energy of columns 0..=x ending at label d.
    let mut table = vec![0.0f64; w * labels];
    table[..labels].copy_from_slice(cv.costs_at(0, y));
    let mut env = vec![0.0f64; labels];
    for x in 1..w {
        let (prev, cur) = table.split_at_mut(x * labels);
        truncated_linear_envelope(&prev[(x - 1) * labels..], p.lambda, p.tau_s, &mut env);
        let costs = cv.costs_at(x, y);
        for d in 0..labels {
            cur[d] = costs[d] + env[d];
        }
    }

    let last = &table[(w - 1) * labels..];
    let mut d_next = argmin(last);
    out[w - 1] = d_next as f64;
    for x in (0..w - 1).rev() {
        let slice = &table[x * labels..(x + 1) * labels];
        let mut best = 0usize;
        let mut best_v = slice[0] + transition(p, 0, d_next);
        for (d, &m) in slice.iter().enumerate().skip(1) {
            let v = m + transition(p, d, d_next);
            if v < best_v {
                best_v = v;
                best = d;
            }
        }
        d_next = best;
        out[x] = best as f64;
    }
}

#[inline]
fn transition(p: &DpParams, d: usize, d_next: usize) -> f64 {
    let delta = (d as i64 - d_next as i64).unsigned_abs() as f64;
    (p.lambda * delta).min(p.tau_s)
}

#[inline]
fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] {
            best = i;
        }
    }
    best
}
