//! Scoring disparity maps against ground truth and summarizing results.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::GroundTruth;
use crate::matching::{CostFn, DisparityMap, Method};

/// One scored (scene, method, cost function) combination. `costfn` is
/// `None` for the descriptor-style methods that take none.
#[derive(Debug, Clone)]
pub struct EvalResult {
    pub scene_id: String,
    pub method: Method,
    pub costfn: Option<CostFn>,
    pub correlation: f64,
    /// Fraction of jointly valid pixels with |error| > 2 px.
    pub bad2: f64,
    /// Fraction of jointly valid pixels with |error| > 5 px.
    pub bad5: f64,
    pub runtime_ms: f64,
    pub valid_pixel_count: usize,
}

fn check_dims(dm: &DisparityMap, gt: &GroundTruth) -> Result<()> {
    if dm.width != gt.width || dm.height != gt.height {
        return Err(Error::dims(
            format!("{}x{}", dm.width, dm.height),
            format!("{}x{}", gt.width, gt.height),
        ));
    }
    Ok(())
}

fn joint_valid<'a>(
    dm: &'a DisparityMap,
    gt: &'a GroundTruth,
) -> impl Iterator<Item = (f64, f64)> + 'a {
    dm.values
        .iter()
        .zip(&dm.valid)
        .zip(gt.disparities.iter().zip(&gt.valid))
        .filter(|((_, dv), (_, gv))| **dv && **gv)
        .map(|((d, _), (g, _))| (*d, *g))
}

/// Number of pixels valid in both inputs.
pub fn joint_valid_count(dm: &DisparityMap, gt: &GroundTruth) -> Result<usize> {
    check_dims(dm, gt)?;
    Ok(joint_valid(dm, gt).count())
}

/// Sample Pearson correlation over the jointly valid pixels.
///
/// Returns 0 when either side is constant over that set; never NaN.
pub fn pearson_correlation(dm: &DisparityMap, gt: &GroundTruth) -> Result<f64> {
    check_dims(dm, gt)?;

    let mut n = 0usize;
    let (mut sum_a, mut sum_b) = (0.0f64, 0.0f64);
    let (mut min_a, mut max_a) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_b, mut max_b) = (f64::INFINITY, f64::NEG_INFINITY);
    for (a, b) in joint_valid(dm, gt) {
        n += 1;
        sum_a += a;
        sum_b += b;
        min_a = min_a.min(a);
        max_a = max_a.max(a);
        min_b = min_b.min(b);
        max_b = max_b.max(b);
    }
    if n == 0 {
        return Err(Error::NoValidPixels);
    }
    // Constancy detected on the raw values: the rounded sum of squared
    // deviations of a constant series need not be exactly zero.
    if min_a == max_a || min_b == max_b {
        return Ok(0.0);
    }

    let mean_a = sum_a / n as f64;
    let mean_b = sum_b / n as f64;
    let (mut var_a, mut var_b, mut cov) = (0.0f64, 0.0f64, 0.0f64);
    for (a, b) in joint_valid(dm, gt) {
        let da = a - mean_a;
        let db = b - mean_b;
        var_a += da * da;
        var_b += db * db;
        cov += da * db;
    }
    let denom = (var_a * var_b).sqrt();
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok((cov / denom).clamp(-1.0, 1.0))
}

/// Fraction of jointly valid pixels whose absolute error exceeds
/// `threshold` pixels.
pub fn bad_pixel_rate(dm: &DisparityMap, gt: &GroundTruth, threshold: f64) -> Result<f64> {
    check_dims(dm, gt)?;
    let mut n = 0usize;
    let mut bad = 0usize;
    for (a, b) in joint_valid(dm, gt) {
        n += 1;
        if (a - b).abs() > threshold {
            bad += 1;
        }
    }
    if n == 0 {
        return Err(Error::NoValidPixels);
    }
    Ok(bad as f64 / n as f64)
}

/// Nearest-neighbor resize of ground truth to the working resolution, with
/// disparities rescaled by the realized horizontal ratio. Nearest neighbor
/// never blends invalid pixels into valid ones.
pub fn resize_gt_nearest(gt: &GroundTruth, out_w: usize, out_h: usize) -> GroundTruth {
    assert!(out_w > 0 && out_h > 0);
    let rx = gt.width as f64 / out_w as f64;
    let ry = gt.height as f64 / out_h as f64;
    let scale = out_w as f64 / gt.width as f64;
    let mut disparities = Vec::with_capacity(out_w * out_h);
    let mut valid = Vec::with_capacity(out_w * out_h);
    for yo in 0..out_h {
        let ys = (((yo as f64 + 0.5) * ry - 0.5).round() as i64).clamp(0, gt.height as i64 - 1) as usize;
        for xo in 0..out_w {
            let xs = (((xo as f64 + 0.5) * rx - 0.5).round() as i64).clamp(0, gt.width as i64 - 1) as usize;
            let i = ys * gt.width + xs;
            disparities.push(gt.disparities[i] * scale);
            valid.push(gt.valid[i]);
        }
    }
    GroundTruth { width: out_w, height: out_h, disparities, valid }
}

/// Min/max correlation per (cost function, method) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryTable {
    pub cells: BTreeMap<(Option<CostFn>, Method), (f64, f64)>,
}

/// Builds the min/max table. Cells with no results are simply absent.
pub fn summarize(results: &[EvalResult]) -> Result<SummaryTable> {
    if results.is_empty() {
        return Err(Error::EmptyResults);
    }
    let mut cells: BTreeMap<(Option<CostFn>, Method), (f64, f64)> = BTreeMap::new();
    for r in results {
        let entry = cells
            .entry((r.costfn, r.method))
            .or_insert((f64::INFINITY, f64::NEG_INFINITY));
        entry.0 = entry.0.min(r.correlation);
        entry.1 = entry.1.max(r.correlation);
    }
    Ok(SummaryTable { cells })
}

impl SummaryTable {
    /// Aligned text: one row per cost function (plus a `-` row for the
    /// costfn-agnostic methods), min/max column pair per method.
    pub fn render(&self) -> String {
        let methods = Method::ALL;
        let mut out = String::new();
        let _ = write!(out, "{:<6}", "");
        for m in methods {
            let _ = write!(out, "{:>15}", m.to_string());
        }
        out.push('\n');
        let _ = write!(out, "{:<6}", "");
        for _ in methods {
            let _ = write!(out, "{:>8}{:>7}", "Min", "Max");
        }
        out.push('\n');

        let rows: [(Option<CostFn>, &str); 4] = [
            (Some(CostFn::Mse), "MSE"),
            (Some(CostFn::Ncc), "NCC"),
            (Some(CostFn::Sad), "SAD"),
            (None, "-"),
        ];
        for (costfn, label) in rows {
            if !methods.iter().any(|m| self.cells.contains_key(&(costfn, *m))) {
                continue;
            }
            let _ = write!(out, "{label:<6}");
            for m in methods {
                match self.cells.get(&(costfn, m)) {
                    Some((lo, hi)) => {
                        let _ = write!(out, "{lo:>8.3}{hi:>7.3}");
                    }
                    None => {
                        let _ = write!(out, "{:>8}{:>7}", "--", "--");
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

fn costfn_label(costfn: Option<CostFn>) -> String {
    costfn.map_or_else(|| "-".to_string(), |c| c.to_string())
}

/// Sorts results by (scene, method, costfn) and returns them.
pub fn sorted_results(results: &[EvalResult]) -> Vec<EvalResult> {
    let mut sorted = results.to_vec();
    sorted.sort_by(|a, b| {
        (&a.scene_id, a.method, a.costfn).cmp(&(&b.scene_id, b.method, b.costfn))
    });
    sorted
}

/// Renders the CSV report: a fixed header then one row per result in
/// deterministic (scene, method, costfn) order.
pub fn render_csv(results: &[EvalResult]) -> String {
    let mut out = String::from("scene,method,costfn,correlation,bad2,bad5,runtime_ms,valid_pixels\n");
    for r in sorted_results(results) {
        let _ = writeln!(
            out,
            "{},{},{},{:.6},{:.6},{:.6},{:.3},{}",
            r.scene_id,
            r.method,
            costfn_label(r.costfn),
            r.correlation,
            r.bad2,
            r.bad5,
            r.runtime_ms,
            r.valid_pixel_count
        );
    }
    out
}

/// Writes the CSV report to `path`.
pub fn emit_csv(results: &[EvalResult], path: &Path) -> Result<()> {
    std::fs::write(path, render_csv(results)).map_err(|e| Error::io(path, e))
}
