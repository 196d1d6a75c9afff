//! Matching costs and cost volumes.
//!
//! Window costs compare the left window centered at `(x, y)` against the
//! right window centered at `(x - d, y)`. Windows are clipped at image
//! borders: sums run over offsets where both pixels are in bounds, and the
//! mean/normalized costs divide by that clipped count. Offsets are always
//! visited top-to-bottom, left-to-right, so volumes are bit-identical for
//! any worker count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::imaging::GrayImage;

/// Square aggregation window of side `2 * radius + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    pub radius: usize,
}

impl WindowSpec {
    pub fn new(radius: usize) -> Self {
        WindowSpec { radius }
    }

    /// Full (unclipped) pixel count of the window.
    pub fn area(&self) -> usize {
        let side = 2 * self.radius + 1;
        side * side
    }
}

/// Which cost populated a volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Sad,
    Mse,
    /// `1 - NCC`, so lower is better like the rest.
    NccCost,
    /// Gradient SAD (d/dx plus d/dy planes).
    Gf,
    Hog,
    Dwac,
}

/// Blend weight and window for the fixed-window aggregated cost.
#[derive(Debug, Clone, Copy)]
pub struct DwacParams {
    /// Mixing weight in [0, 1]: `alpha * SADnorm + (1 - alpha) * (1 - NCC)`.
    pub alpha: f64,
    pub window: WindowSpec,
}

impl Default for DwacParams {
    fn default() -> Self {
        DwacParams { alpha: 0.5, window: WindowSpec::new(3) }
    }
}

/// H x W x (dmax+1) grid of nonnegative matching costs.
#[derive(Debug, Clone)]
pub struct CostVolume {
    width: usize,
    height: usize,
    dmax: usize,
    costs: Vec<f64>,
    pub metric: Metric,
    pub window: WindowSpec,
}

impl CostVolume {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Largest disparity label; labels run 0..=dmax.
    pub fn dmax(&self) -> usize {
        self.dmax
    }

    pub fn labels(&self) -> usize {
        self.dmax + 1
    }

    #[inline]
    pub fn cost(&self, x: usize, y: usize, d: usize) -> f64 {
        self.costs_at(x, y)[d]
    }

    /// All labels for one pixel.
    #[inline]
    pub fn costs_at(&self, x: usize, y: usize) -> &[f64] {
        debug_assert!(x < self.width && y < self.height);
        let base = (y * self.width + x) * (self.dmax + 1);
        &self.costs[base..base + self.dmax + 1]
    }

    /// Builds a volume by filling each pixel's label slice. `fill` runs in
    /// parallel across rows and must be a pure function of its arguments.
    pub fn build<F>(
        width: usize,
        height: usize,
        dmax: usize,
        metric: Metric,
        window: WindowSpec,
        fill: F,
    ) -> CostVolume
    where
        F: Fn(usize, usize, &mut [f64]) + Sync,
    {
        let labels = dmax + 1;
        let mut costs = vec![0.0; width * height * labels];
        costs
            .par_chunks_mut(width * labels)
            .enumerate()
            .for_each(|(y, row)| {
                for x in 0..width {
                    fill(x, y, &mut row[x * labels..(x + 1) * labels]);
                }
            });
        CostVolume { width, height, dmax, costs, metric, window }
    }
}

/// Borrowed 2D view used by the window kernels; gradient planes go through
/// the same code as intensity images.
#[derive(Clone, Copy)]
pub(crate) struct Plane<'a> {
    pub width: usize,
    pub height: usize,
    pub data: &'a [f64],
}

impl<'a> Plane<'a> {
    pub(crate) fn from_image(img: &'a GrayImage) -> Self {
        Plane { width: img.width(), height: img.height(), data: img.data() }
    }

    #[inline]
    fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }
}

/// Iterates the clipped window around `(x, y)` on `a` and `(x - d, y)` on
/// `b`, feeding each in-bounds pair to the accumulator. Returns the clipped
/// pixel count.
#[inline]
pub(crate) fn for_each_overlap<F: FnMut(f64, f64)>(
    a: Plane,
    b: Plane,
    x: usize,
    y: usize,
    d: i64,
    radius: usize,
    mut acc: F,
) -> usize {
    assert!(x < a.width && y < a.height, "window center out of bounds");
    let r = radius as i64;
    let mut count = 0;
    for i in -r..=r {
        let yy = y as i64 + i;
        if yy < 0 || yy >= a.height as i64 {
            continue;
        }
        for j in -r..=r {
            let xa = x as i64 + j;
            if xa < 0 || xa >= a.width as i64 {
                continue;
            }
            let xb = xa - d;
            if xb < 0 || xb >= b.width as i64 {
                continue;
            }
            acc(a.get(xa as usize, yy as usize), b.get(xb as usize, yy as usize));
            count += 1;
        }
    }
    count
}

pub(crate) fn sad_plane(a: Plane, b: Plane, x: usize, y: usize, d: i64, radius: usize) -> (f64, usize) {
    let mut sum = 0.0;
    let count = for_each_overlap(a, b, x, y, d, radius, |l, r| sum += (l - r).abs());
    (sum, count)
}

fn squared_diff_plane(a: Plane, b: Plane, x: usize, y: usize, d: i64, radius: usize) -> (f64, usize) {
    let mut sum = 0.0;
    let count = for_each_overlap(a, b, x, y, d, radius, |l, r| {
        let diff = l - r;
        sum += diff * diff;
    });
    (sum, count)
}

struct NccSums {
    dot: f64,
    energy_a: f64,
    energy_b: f64,
    count: usize,
}

fn ncc_sums(a: Plane, b: Plane, x: usize, y: usize, d: i64, radius: usize) -> NccSums {
    let (mut dot, mut ea, mut eb) = (0.0, 0.0, 0.0);
    let count = for_each_overlap(a, b, x, y, d, radius, |l, r| {
        dot += l * r;
        ea += l * l;
        eb += r * r;
    });
    NccSums { dot, energy_a: ea, energy_b: eb, count }
}

fn ncc_from_sums(s: &NccSums) -> f64 {
    if s.energy_a == 0.0 || s.energy_b == 0.0 {
        return 0.0;
    }
    s.dot / (s.energy_a * s.energy_b).sqrt()
}

/// Sum of absolute differences over the clipped window. Empty overlap sums
/// to zero; the volume builders substitute a sentinel there instead.
pub fn sad_window(left: &GrayImage, right: &GrayImage, x: usize, y: usize, d: usize, w: WindowSpec) -> f64 {
    sad_plane(Plane::from_image(left), Plane::from_image(right), x, y, d as i64, w.radius).0
}

/// Mean squared difference over the clipped window.
pub fn mse_window(
    left: &GrayImage,
    right: &GrayImage,
    x: usize,
    y: usize,
    d: usize,
    w: WindowSpec,
) -> Result<f64> {
    let (sum, count) =
        squared_diff_plane(Plane::from_image(left), Plane::from_image(right), x, y, d as i64, w.radius);
    if count == 0 {
        return Err(Error::EmptyOverlap);
    }
    Ok(sum / count as f64)
}

/// Normalized cross-correlation over the clipped window (no mean
/// subtraction). Zero-energy windows score 0.
pub fn ncc_window(
    left: &GrayImage,
    right: &GrayImage,
    x: usize,
    y: usize,
    d: usize,
    w: WindowSpec,
) -> Result<f64> {
    let sums = ncc_sums(Plane::from_image(left), Plane::from_image(right), x, y, d as i64, w.radius);
    if sums.count == 0 {
        return Err(Error::EmptyOverlap);
    }
    Ok(ncc_from_sums(&sums))
}

fn ncc_to_cost(similarity: f64) -> f64 {
    (1.0 - similarity).max(0.0)
}

fn check_pair(left: &GrayImage, right: &GrayImage) -> Result<()> {
    if left.width() != right.width() || left.height() != right.height() {
        return Err(Error::dims(
            format!("{}x{}", left.width(), left.height()),
            format!("{}x{}", right.width(), right.height()),
        ));
    }
    Ok(())
}

/// Builds the H x W x (dmax+1) volume for one of the basic metrics.
///
/// Disparities whose right window has no in-bounds pixel get a finite
/// sentinel cost: the maximum attainable in-range value (the full window
/// area for SAD at unit intensity range, 1.0 for MSE and NCC-cost).
pub fn build_cost_volume(
    left: &GrayImage,
    right: &GrayImage,
    dmax: usize,
    metric: Metric,
    w: WindowSpec,
) -> Result<CostVolume> {
    check_pair(left, right)?;
    assert!(
        matches!(metric, Metric::Sad | Metric::Mse | Metric::NccCost),
        "build_cost_volume handles SAD/MSE/NCC only"
    );
    let sentinel = match metric {
        Metric::Sad => w.area() as f64,
        _ => 1.0,
    };
    let (lp, rp) = (Plane::from_image(left), Plane::from_image(right));
    let volume = CostVolume::build(left.width(), left.height(), dmax, metric, w, |x, y, out| {
        for (d, slot) in out.iter_mut().enumerate() {
            *slot = match metric {
                Metric::Sad => {
                    let (sum, count) = sad_plane(lp, rp, x, y, d as i64, w.radius);
                    if count == 0 {
                        sentinel
                    } else {
                        sum
                    }
                }
                Metric::Mse => {
                    let (sum, count) = squared_diff_plane(lp, rp, x, y, d as i64, w.radius);
                    if count == 0 {
                        sentinel
                    } else {
                        sum / count as f64
                    }
                }
                Metric::NccCost => {
                    let sums = ncc_sums(lp, rp, x, y, d as i64, w.radius);
                    if sums.count == 0 {
                        sentinel
                    } else {
                        ncc_to_cost(ncc_from_sums(&sums))
                    }
                }
                _ => unreachable!(),
            };
        }
    });
    Ok(volume)
}

/// Fixed-window aggregated cost: `alpha * SADnorm + (1 - alpha) * (1 - NCC)`
/// over a single window.
///
/// SADnorm divides by the in-bounds pixel count of the *left* window (a
/// per-pixel constant), so both terms live in [0, 1] and `alpha = 1`
/// reproduces the SAD argmin field exactly.
pub fn dwac_cost_volume(
    left: &GrayImage,
    right: &GrayImage,
    dmax: usize,
    p: &DwacParams,
) -> Result<CostVolume> {
    check_pair(left, right)?;
    assert!((0.0..=1.0).contains(&p.alpha), "alpha must be in [0, 1]");
    let w = p.window;
    let alpha = p.alpha;
    let (lp, rp) = (Plane::from_image(left), Plane::from_image(right));
    let volume = CostVolume::build(left.width(), left.height(), dmax, Metric::Dwac, w, |x, y, out| {
        // Left-window pixel count, independent of d.
        let left_count = for_each_overlap(lp, lp, x, y, 0, w.radius, |_, _| {});
        for (d, slot) in out.iter_mut().enumerate() {
            let (mut sad, mut dot, mut ea, mut eb) = (0.0, 0.0, 0.0, 0.0);
            let count = for_each_overlap(lp, rp, x, y, d as i64, w.radius, |l, r| {
                sad += (l - r).abs();
                dot += l * r;
                ea += l * l;
                eb += r * r;
            });
            *slot = if count == 0 {
                1.0
            } else {
                let sad_norm = sad / left_count as f64;
                let ncc = ncc_from_sums(&NccSums { dot, energy_a: ea, energy_b: eb, count });
                alpha * sad_norm + (1.0 - alpha) * ncc_to_cost(ncc)
            };
        }
    });
    Ok(volume)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn gray(w: usize, h: usize, data: &[f64]) -> GrayImage {
        GrayImage::from_data(w, h, data.to_vec())
    }

    fn plane(w: usize, h: usize, data: &[f64]) -> Plane<'_> {
        Plane { width: w, height: h, data }
    }

    #[test]
    fn sad_identical_windows_is_zero() {
        let img = gray(5, 5, &(0..25).map(|i| i as f64 / 24.0).collect::<Vec<_>>());
        assert_eq!(sad_window(&img, &img, 2, 2, 0, WindowSpec::new(2)), 0.0);
    }

    #[test]
    fn sad_two_pixel_window() {
        // 2x1 images; radius 1 clips to the two columns.
        let l = gray(2, 1, &[1.0, 0.0]);
        let r = gray(2, 1, &[0.0, 1.0]);
        assert_eq!(sad_window(&l, &r, 0, 0, 0, WindowSpec::new(1)), 2.0);
    }

    #[test]
    fn sad_constant_offset() {
        let l = gray(3, 3, &[0.8; 9]);
        let r = gray(3, 3, &[0.5; 9]);
        let cost = sad_window(&l, &r, 1, 1, 0, WindowSpec::new(1));
        assert_relative_eq!(cost, 9.0 * 0.3, max_relative = 1e-12);
    }

    #[test]
    fn mse_direct_example() {
        // g = [0, 2] vs g_hat = [2, 0] -> ((2-0)^2 + (0-2)^2) / 2 = 4.
        // Plane-level: intensities above 1 are fine there.
        let a = plane(2, 1, &[0.0, 2.0]);
        let b = plane(2, 1, &[2.0, 0.0]);
        let (sum, count) = {
            let mut s = 0.0;
            let c = for_each_overlap(a, b, 0, 0, 0, 1, |l, r| s += (l - r) * (l - r));
            (s, c)
        };
        assert_eq!(sum / count as f64, 4.0);
    }

    #[test]
    fn mse_identical_and_offset() {
        let l = gray(3, 1, &[0.1, 0.6, 0.3]);
        assert_eq!(mse_window(&l, &l, 1, 0, 0, WindowSpec::new(1)).unwrap(), 0.0);

        let r = gray(3, 1, &[0.3, 0.8, 0.5]);
        let mse = mse_window(&l, &r, 1, 0, 0, WindowSpec::new(1)).unwrap();
        assert_relative_eq!(mse, 0.04, max_relative = 1e-12);
    }

    #[test]
    fn mse_empty_overlap_errors() {
        let l = gray(3, 1, &[0.1, 0.6, 0.3]);
        // d beyond x + radius: right window entirely out of bounds.
        assert!(matches!(
            mse_window(&l, &l, 0, 0, 2, WindowSpec::new(0)),
            Err(Error::EmptyOverlap)
        ));
    }

    #[test]
    fn ncc_self_similarity_is_one() {
        let img = gray(3, 3, &[0.2, 0.4, 0.9, 0.1, 0.5, 0.7, 0.3, 0.8, 0.6]);
        let ncc = ncc_window(&img, &img, 1, 1, 0, WindowSpec::new(1)).unwrap();
        assert_relative_eq!(ncc, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn ncc_is_scale_invariant() {
        let l = gray(3, 1, &[0.1, 0.4, 0.2]);
        let r = gray(3, 1, &[0.2, 0.8, 0.4]); // 2 * left
        let ncc = ncc_window(&l, &r, 1, 0, 0, WindowSpec::new(1)).unwrap();
        assert_relative_eq!(ncc, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn ncc_orthogonal_windows_score_zero() {
        let l = gray(2, 1, &[1.0, 0.0]);
        let r = gray(2, 1, &[0.0, 1.0]);
        assert_eq!(ncc_window(&l, &r, 0, 0, 0, WindowSpec::new(1)).unwrap(), 0.0);
    }

    #[test]
    fn ncc_zero_energy_scores_zero() {
        let l = gray(3, 1, &[0.0, 0.0, 0.0]);
        let r = gray(3, 1, &[0.5, 0.5, 0.5]);
        assert_eq!(ncc_window(&l, &r, 1, 0, 0, WindowSpec::new(1)).unwrap(), 0.0);
    }

    fn shifted_pair(w: usize, h: usize, k: usize) -> (GrayImage, GrayImage) {
        // L(x) = P(x), R(x) = P(x + k) so that L(x) == R(x - k).
        let pattern = |x: usize, y: usize| -> f64 {
            let (xf, yf) = (x as f64, y as f64);
            0.5 + 0.21 * (0.7 * xf + 0.31 * yf).sin()
                + 0.17 * (1.3 * xf - 0.57 * yf).cos()
                + 0.09 * (0.23 * xf * yf * 0.01 + 2.0).sin()
        };
        let mut l = Vec::with_capacity(w * h);
        let mut r = Vec::with_capacity(w * h);
        for y in 0..h {
            for x in 0..w {
                l.push(pattern(x + k, y).clamp(0.0, 1.0));
                r.push(pattern(x + k + k, y).clamp(0.0, 1.0));
            }
        }
        // Note: L uses pattern(x + k) so both images index the pattern
        // positively; matching offset stays k.
        (gray(w, h, &l), gray(w, h, &r))
    }

    #[test]
    fn volume_argmin_recovers_synthetic_shift() {
        let k = 3;
        let (l, r) = shifted_pair(24, 10, k);
        let cv = build_cost_volume(&l, &r, 6, Metric::Sad, WindowSpec::new(2)).unwrap();
        for y in 3..7 {
            for x in 10..20 {
                let costs = cv.costs_at(x, y);
                let argmin = costs
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                    .unwrap()
                    .0;
                assert_eq!(argmin, k, "at ({x},{y}): {costs:?}");
            }
        }
    }

    #[test]
    fn volume_shape_and_sentinels() {
        let img = gray(4, 3, &(0..12).map(|i| i as f64 / 11.0).collect::<Vec<_>>());
        let cv = build_cost_volume(&img, &img, 5, Metric::Sad, WindowSpec::new(1)).unwrap();
        assert_eq!((cv.width(), cv.height(), cv.dmax()), (4, 3, 5));
        // x = 0, d = 2: right window fully out of bounds -> sentinel 9.
        assert_eq!(cv.cost(0, 1, 2), 9.0);
        // Self-match at d = 0 is zero.
        assert_eq!(cv.cost(2, 1, 0), 0.0);
        assert!(cv.costs_at(0, 0).iter().all(|c| c.is_finite() && *c >= 0.0));
    }

    #[test]
    fn ncc_volume_costs_stay_in_unit_range() {
        let (l, r) = shifted_pair(16, 8, 2);
        let cv = build_cost_volume(&l, &r, 5, Metric::NccCost, WindowSpec::new(2)).unwrap();
        for y in 0..8 {
            for x in 0..16 {
                for &c in cv.costs_at(x, y) {
                    assert!((0.0..=1.0).contains(&c), "cost {c} out of range");
                }
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = gray(2, 2, &[0.0; 4]);
        let b = gray(3, 2, &[0.0; 6]);
        assert!(matches!(
            build_cost_volume(&a, &b, 1, Metric::Sad, WindowSpec::new(1)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    fn argmin_field(cv: &CostVolume) -> Vec<usize> {
        let mut out = Vec::with_capacity(cv.width() * cv.height());
        for y in 0..cv.height() {
            for x in 0..cv.width() {
                let costs = cv.costs_at(x, y);
                let mut best = 0;
                for d in 1..costs.len() {
                    if costs[d] < costs[best] {
                        best = d;
                    }
                }
                out.push(best);
            }
        }
        out
    }

    #[test]
    fn dwac_alpha_one_matches_sad_argmin() {
        let (l, r) = shifted_pair(18, 9, 2);
        let w = WindowSpec::new(2);
        let sad = build_cost_volume(&l, &r, 5, Metric::Sad, w).unwrap();
        let dwac = dwac_cost_volume(&l, &r, 5, &DwacParams { alpha: 1.0, window: w }).unwrap();
        assert_eq!(argmin_field(&sad), argmin_field(&dwac));
    }

    #[test]
    fn dwac_alpha_zero_matches_ncc_argmin() {
        let (l, r) = shifted_pair(18, 9, 2);
        let w = WindowSpec::new(2);
        let ncc = build_cost_volume(&l, &r, 5, Metric::NccCost, w).unwrap();
        let dwac = dwac_cost_volume(&l, &r, 5, &DwacParams { alpha: 0.0, window: w }).unwrap();
        assert_eq!(argmin_field(&ncc), argmin_field(&dwac));
    }

    #[test]
    fn dwac_self_match_costs_nothing() {
        let img = gray(9, 9, &(0..81).map(|i| (i as f64 * 0.37).sin().abs()).collect::<Vec<_>>());
        let cv = dwac_cost_volume(&img, &img, 3, &DwacParams::default()).unwrap();
        for y in 3..6 {
            for x in 3..6 {
                assert!(cv.cost(x, y, 0) < 1e-12, "cost {}", cv.cost(x, y, 0));
            }
        }
    }

    proptest! {
        // Swapping the two windows leaves all three costs unchanged.
        #[test]
        fn window_costs_are_symmetric(
            data_a in proptest::collection::vec(0.0f64..=1.0, 25),
            data_b in proptest::collection::vec(0.0f64..=1.0, 25),
            d in 0i64..3,
        ) {
            let a = plane(5, 5, &data_a);
            let b = plane(5, 5, &data_b);
            let (x, y, r) = (3usize, 2usize, 1usize);
            // Mirror: center the window on b at (x-d) and shift by -d.
            let xm = (x as i64 - d) as usize;

            let (sad_ab, n_ab) = sad_plane(a, b, x, y, d, r);
            let (sad_ba, n_ba) = sad_plane(b, a, xm, y, -d, r);
            prop_assert_eq!(n_ab, n_ba);
            prop_assert!((sad_ab - sad_ba).abs() < 1e-12);

            let (sq_ab, _) = squared_diff_plane(a, b, x, y, d, r);
            let (sq_ba, _) = squared_diff_plane(b, a, xm, y, -d, r);
            prop_assert!((sq_ab - sq_ba).abs() < 1e-12);

            let ncc_ab = ncc_from_sums(&ncc_sums(a, b, x, y, d, r));
            let ncc_ba = ncc_from_sums(&ncc_sums(b, a, xm, y, -d, r));
            prop_assert!((ncc_ab - ncc_ba).abs() < 1e-12);
        }

        // Identical monotone rescaling of both images preserves SAD argmin.
        #[test]
        fn sad_argmin_invariant_under_common_scale(
            seed in proptest::collection::vec(0.0f64..=1.0, 60),
        ) {
            let l = gray(10, 6, &seed[..]);
            let shifted: Vec<f64> = (0..60)
                .map(|i| {
                    let (x, y) = (i % 10, i / 10);
                    if x >= 2 { l.get(x - 2, y) } else { l.get(0, y) }
                })
                .collect();
            let r = gray(10, 6, &shifted);
            let halve = |img: &GrayImage| {
                gray(10, 6, &img.data().iter().map(|v| v * 0.5).collect::<Vec<_>>())
            };
            let w = WindowSpec::new(1);
            let cv = build_cost_volume(&l, &r, 3, Metric::Sad, w).unwrap();
            let cv2 = build_cost_volume(&halve(&l), &halve(&r), 3, Metric::Sad, w).unwrap();
            prop_assert_eq!(argmin_field(&cv), argmin_field(&cv2));
        }

        // Multiplicative gain on the right image preserves the NCC argmin.
        #[test]
        fn ncc_argmin_invariant_under_gain(
            seed in proptest::collection::vec(0.01f64..=0.5, 60),
            gain in 1.1f64..2.0,
        ) {
            let l = gray(10, 6, &seed[..]);
            let shifted: Vec<f64> = (0..60)
                .map(|i| {
                    let (x, y) = (i % 10, i / 10);
                    if x >= 1 { l.get(x - 1, y) } else { l.get(0, y) }
                })
                .collect();
            let r = gray(10, 6, &shifted);
            let gained = gray(10, 6, &r.data().iter().map(|v| (v * gain).min(1.0)).collect::<Vec<_>>());
            let w = WindowSpec::new(1);
            let cv = build_cost_volume(&l, &r, 3, Metric::NccCost, w).unwrap();
            let cv2 = build_cost_volume(&l, &gained, 3, Metric::NccCost, w).unwrap();
            prop_assert_eq!(argmin_field(&cv), argmin_field(&cv2));
        }

        // Volumes never contain negative or non-finite entries.
        #[test]
        fn volume_entries_are_finite_nonnegative(
            seed_l in proptest::collection::vec(0.0f64..=1.0, 36),
            seed_r in proptest::collection::vec(0.0f64..=1.0, 36),
        ) {
            let l = gray(6, 6, &seed_l);
            let r = gray(6, 6, &seed_r);
            for metric in [Metric::Sad, Metric::Mse, Metric::NccCost] {
                let cv = build_cost_volume(&l, &r, 7, metric, WindowSpec::new(1)).unwrap();
                for y in 0..6 {
                    for x in 0..6 {
                        prop_assert!(cv.costs_at(x, y).iter().all(|c| c.is_finite() && *c >= 0.0));
                    }
                }
            }
        }
    }
}
