//! Disparity estimation: six strategies over the shared cost machinery.

use std::fmt;
use std::str::FromStr;

use crate::cost::{build_cost_volume, dwac_cost_volume, CostVolume, DwacParams, Metric, WindowSpec};
use crate::error::{Error, Result};
use crate::imaging::GrayImage;

mod bp;
mod dp;
mod envelope;
mod gf;
mod hog;

pub use bp::{bp_disparity, message_update, BpParams};
pub use dp::{dp_scanline, DpParams};
pub use gf::gf_disparity;
pub use hog::{hog_descriptor_field, hog_disparity, HogDescriptorField, HogParams};

/// Marker stored at invalid pixels of a [`DisparityMap`].
pub const INVALID_DISPARITY: f64 = f64::NAN;

/// Estimated disparities with a validity mask. Invalid pixels carry
/// [`INVALID_DISPARITY`] and `valid = false`.
#[derive(Debug, Clone)]
pub struct DisparityMap {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
    pub valid: Vec<bool>,
}

impl DisparityMap {
    pub(crate) fn all_valid(width: usize, height: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), width * height);
        DisparityMap { width, height, valid: vec![true; values.len()], values }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<f64> {
        let i = y * self.width + x;
        self.valid[i].then(|| self.values[i])
    }
}

/// The six estimation strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    /// Window matching, winner-take-all.
    Bm,
    /// Window matching plus per-row dynamic programming.
    Bmdp,
    /// Window matching plus grid belief propagation.
    Bp,
    /// Gradient-feature matching.
    Gf,
    /// HOG descriptor matching.
    Hog,
    /// Fixed-window aggregated cost, winner-take-all.
    Dwac,
}

impl Method {
    pub const ALL: [Method; 6] =
        [Method::Bm, Method::Bmdp, Method::Bp, Method::Gf, Method::Hog, Method::Dwac];

    /// Descriptor-style methods take no matching-cost function.
    pub fn ignores_costfn(self) -> bool {
        matches!(self, Method::Gf | Method::Hog | Method::Dwac)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Bm => "BM",
            Method::Bmdp => "BMDP",
            Method::Bp => "BP",
            Method::Gf => "GF",
            Method::Hog => "HOG",
            Method::Dwac => "DWAC",
        };
        f.write_str(s)
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "BM" => Ok(Method::Bm),
            "BMDP" => Ok(Method::Bmdp),
            "BP" => Ok(Method::Bp),
            "GF" => Ok(Method::Gf),
            "HOG" => Ok(Method::Hog),
            "DWAC" => Ok(Method::Dwac),
            other => Err(Error::Config(format!("unknown method `{other}`"))),
        }
    }
}

/// The three matching-cost functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CostFn {
    Sad,
    Mse,
    Ncc,
}

impl CostFn {
    pub const ALL: [CostFn; 3] = [CostFn::Sad, CostFn::Mse, CostFn::Ncc];

    pub fn metric(self) -> Metric {
        match self {
            CostFn::Sad => Metric::Sad,
            CostFn::Mse => Metric::Mse,
            CostFn::Ncc => Metric::NccCost,
        }
    }
}

impl fmt::Display for CostFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CostFn::Sad => "SAD",
            CostFn::Mse => "MSE",
            CostFn::Ncc => "NCC",
        };
        f.write_str(s)
    }
}

impl FromStr for CostFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SAD" => Ok(CostFn::Sad),
            "MSE" => Ok(CostFn::Mse),
            "NCC" => Ok(CostFn::Ncc),
            other => Err(Error::Config(format!("unknown cost function `{other}`"))),
        }
    }
}

/// Everything `estimate` needs besides the images.
#[derive(Debug, Clone)]
pub struct MatchParams {
    pub window: WindowSpec,
    pub dp: DpParams,
    pub bp: BpParams,
    pub hog: HogParams,
    pub dwac: DwacParams,
}

impl Default for MatchParams {
    fn default() -> Self {
        MatchParams {
            window: WindowSpec::new(3),
            dp: DpParams::default(),
            bp: BpParams::default(),
            hog: HogParams::default(),
            dwac: DwacParams::default(),
        }
    }
}

/// Disparity search bound at the working scale: `ceil(ndisp * scale)`.
pub fn dmax_for(ndisp: usize, scale: f64) -> usize {
    (ndisp as f64 * scale).ceil() as usize
}

/// Per-pixel argmin over the labels, ties toward the smallest disparity.
pub fn wta_disparity(cv: &CostVolume) -> DisparityMap {
    let (w, h) = (cv.width(), cv.height());
    let mut values = vec![0.0f64; w * h];
    for y in 0..h {
        for x in 0..w {
            let costs = cv.costs_at(x, y);
            let mut best = 0usize;
            for d in 1..costs.len() {
                if costs[d] < costs[best] {
                    best = d;
                }
            }
            values[y * w + x] = best as f64;
        }
    }
    DisparityMap::all_valid(w, h, values)
}

/// Dispatches one (method, cost function) combination on a preprocessed
/// pair. `left`/`right` are already at working scale; the label range is
/// derived from the scene's `ndisp` and the same `scale`.
///
/// GF, HOG and DWAC ignore `costfn` (DWAC blends SAD and NCC internally).
pub fn estimate(
    method: Method,
    costfn: CostFn,
    left: &GrayImage,
    right: &GrayImage,
    ndisp: usize,
    scale: f64,
    params: &MatchParams,
) -> Result<DisparityMap> {
    let dmax = dmax_for(ndisp, scale);
    match method {
        Method::Bm => {
            let cv = build_cost_volume(left, right, dmax, costfn.metric(), params.window)?;
            Ok(wta_disparity(&cv))
        }
        Method::Bmdp => {
            let cv = build_cost_volume(left, right, dmax, costfn.metric(), params.window)?;
            Ok(dp_scanline(&cv, &params.dp))
        }
        Method::Bp => {
            let cv = build_cost_volume(left, right, dmax, costfn.metric(), params.window)?;
            Ok(bp_disparity(&cv, &params.bp))
        }
        Method::Gf => gf_disparity(left, right, dmax, params.window),
        Method::Hog => hog_disparity(left, right, dmax, &params.hog),
        Method::Dwac => {
            let cv = dwac_cost_volume(left, right, dmax, &params.dwac)?;
            Ok(wta_disparity(&cv))
        }
    }
}
