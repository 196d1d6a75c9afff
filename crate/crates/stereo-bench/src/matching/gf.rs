//! Gradient-feature matching: windowed SAD over the horizontal and vertical
//! derivative planes, then winner-take-all. Constant intensity offsets
//! between the two images cancel in the derivatives.

use crate::cost::{sad_plane, CostVolume, Metric, Plane, WindowSpec};
use crate::error::{Error, Result};
use crate::imaging::{gradients, GrayImage};
use crate::matching::{wta_disparity, DisparityMap};

/// Builds the gradient-SAD cost volume and picks per-pixel argmins.
pub fn gf_disparity(
    left: &GrayImage,
    right: &GrayImage,
    dmax: usize,
    w: WindowSpec,
) -> Result<DisparityMap> {
    if left.width() != right.width() || left.height() != right.height() {
        return Err(Error::dims(
            format!("{}x{}", left.width(), left.height()),
            format!("{}x{}", right.width(), right.height()),
        ));
    }
    let gl = gradients(left)?;
    let gr = gradients(right)?;
    let (width, height) = (left.width(), left.height());

    let lx = Plane { width, height, data: &gl.gx };
    let ly = Plane { width, height, data: &gl.gy };
    let rx = Plane { width, height, data: &gr.gx };
    let ry = Plane { width, height, data: &gr.gy };

    // Derivatives lie in [-1, 1], so per-pixel |dL - dR| <= 2 per plane;
    // the empty-overlap sentinel tops every reachable in-range cost.
    let sentinel = 4.0 * w.area() as f64;
    let cv = CostVolume::build(width, height, dmax, Metric::Gf, w, |x, y, out| {
        for (d, slot) in out.iter_mut().enumerate() {
            let (sx, count) = sad_plane(lx, rx, x, y, d as i64, w.radius);
            if count == 0 {
                *slot = sentinel;
                continue;
            }
            let (sy, _) = sad_plane(ly, ry, x, y, d as i64, w.radius);
            *slot = sx + sy;
        }
    });
    Ok(wta_disparity(&cv))
}
