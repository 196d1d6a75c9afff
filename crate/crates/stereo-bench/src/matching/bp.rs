//! Min-sum loopy belief propagation on the four-connected pixel grid.
//!
//! Messages are vectors over the disparity labels. Updates are synchronous:
//! every message of iteration `t` is computed from iteration `t - 1`
//! messages only, so results are bit-identical for any worker count. Each
//! message is normalized by subtracting its minimum, which keeps beliefs
//! finite for any iteration count without changing any argmin.

use rayon::prelude::*;

use crate::cost::CostVolume;
use crate::matching::envelope::truncated_linear_envelope;
use crate::matching::DisparityMap;

/// Message-passing parameters. The pairwise potential is
/// `V(d, d') = min(lambda * |d - d'|, tau_s)`; `tau_d`, when set, truncates
/// the data cost at `min(cost, tau_d)`.
#[derive(Debug, Clone, Copy)]
pub struct BpParams {
    pub iterations: usize,
    pub lambda: f64,
    pub tau_s: f64,
    pub tau_d: Option<f64>,
}

impl Default for BpParams {
    fn default() -> Self {
        BpParams { iterations: 30, lambda: 0.05, tau_s: 0.1, tau_d: None }
    }
}

/// One min-sum message: lower envelope of `data + sum(incoming)` under the
/// truncated-linear potential, then normalized so its minimum is exactly 0.
///
/// Runs in O(labels) and agrees with the quadratic direct formula.
pub fn message_update(data: &[f64], incoming: &[&[f64]], lambda: f64, tau_s: f64) -> Vec<f64> {
    let mut h = data.to_vec();
    for msg in incoming {
        assert_eq!(msg.len(), h.len());
        for (hv, m) in h.iter_mut().zip(msg.iter()) {
            *hv += m;
        }
    }
    let mut out = vec![0.0; h.len()];
    envelope_normalized(&h, lambda, tau_s, &mut out);
    out
}

fn envelope_normalized(h: &[f64], lambda: f64, tau_s: f64, out: &mut [f64]) {
    truncated_linear_envelope(h, lambda, tau_s, out);
    let mut min = out[0];
    for &v in &out[1..] {
        if v < min {
            min = v;
        }
    }
    for v in out.iter_mut() {
        *v -= min;
    }
}

/// Incoming-message direction, indexed by the sender's position relative to
/// the receiver.
const FROM_LEFT: usize = 0;
const FROM_RIGHT: usize = 1;
const FROM_UP: usize = 2;
const FROM_DOWN: usize = 3;

struct MessageGrid {
    /// One field per direction, each width*height*labels, zero-initialized.
    /// Border entries whose sender does not exist stay zero forever.
    fields: [Vec<f64>; 4],
    width: usize,
    labels: usize,
}

impl MessageGrid {
    fn new(width: usize, height: usize, labels: usize) -> Self {
        let size = width * height * labels;
        MessageGrid {
            fields: [vec![0.0; size], vec![0.0; size], vec![0.0; size], vec![0.0; size]],
            width,
            labels,
        }
    }

    #[inline]
    fn slot(&self, dir: usize, x: usize, y: usize) -> &[f64] {
        let base = (y * self.width + x) * self.labels;
        &self.fields[dir][base..base + self.labels]
    }
}

/// Runs synchronous min-sum BP and reads each pixel's disparity off the
/// final beliefs, ties toward the smallest label.
pub fn bp_disparity(cv: &CostVolume, p: &BpParams) -> DisparityMap {
    assert!(p.iterations >= 1, "iterations must be >= 1");
    let (w, h, labels) = (cv.width(), cv.height(), cv.labels());

    // Data costs, optionally truncated.
    let mut data = vec![0.0f64; w * h * labels];
    for y in 0..h {
        for x in 0..w {
            let src = cv.costs_at(x, y);
            let base = (y * w + x) * labels;
            match p.tau_d {
                Some(tau_d) => {
                    for d in 0..labels {
                        data[base + d] = src[d].min(tau_d);
                    }
                }
                None => data[base..base + labels].copy_from_slice(src),
            }
        }
    }
    let data_at = |x: usize, y: usize| -> &[f64] {
        let base = (y * w + x) * labels;
        &data[base..base + labels]
    };

    let mut old = MessageGrid::new(w, h, labels);
    let mut new = MessageGrid::new(w, h, labels);

    for _ in 0..p.iterations {
        // The message into (x, y) from direction `dir` is sent by neighbor
        // p; its h-vector sums p's data cost and p's other incoming
        // messages (old iteration), excluding the one that came from the
        // receiver.
        for dir in 0..4 {
            let mut field = std::mem::take(&mut new.fields[dir]);
            field
                .par_chunks_mut(w * labels)
                .enumerate()
                .for_each(|(y, row)| {
                    let mut hbuf = vec![0.0f64; labels];
                    for x in 0..w {
                        let out = &mut row[x * labels..(x + 1) * labels];
                        let sender: Option<(usize, usize, usize)> = match dir {
                            FROM_LEFT if x > 0 => Some((x - 1, y, FROM_RIGHT)),
                            FROM_RIGHT if x + 1 < w => Some((x + 1, y, FROM_LEFT)),
                            FROM_UP if y > 0 => Some((x, y - 1, FROM_DOWN)),
                            FROM_DOWN if y + 1 < h => Some((x, y + 1, FROM_UP)),
                            _ => None,
                        };
                        let Some((sx, sy, excluded)) = sender else {
                            out.fill(0.0);
                            continue;
                        };
                        hbuf.copy_from_slice(data_at(sx, sy));
                        for d in 0..4 {
                            if d == excluded {
                                continue;
                            }
                            for (hv, m) in hbuf.iter_mut().zip(old.slot(d, sx, sy)) {
                                *hv += m;
                            }
                        }
                        envelope_normalized(&hbuf, p.lambda, p.tau_s, out);
                    }
                });
            new.fields[dir] = field;
        }
        std::mem::swap(&mut old, &mut new);
    }

    // Beliefs: data plus all incoming messages.
    let mut values = vec![0.0f64; w * h];
    values
        .par_chunks_mut(w)
        .enumerate()
        .for_each(|(y, row)| {
            let mut belief = vec![0.0f64; labels];
            for (x, slot) in row.iter_mut().enumerate() {
                belief.copy_from_slice(data_at(x, y));
                for dir in 0..4 {
                    for (b, m) in belief.iter_mut().zip(old.slot(dir, x, y)) {
                        *b += m;
                    }
                }
                let mut best = 0usize;
                for d in 1..labels {
                    if belief[d] < belief[best] {
                        best = d;
                    }
                }
                *slot = best as f64;
            }
        });
    DisparityMap::all_valid(w, h, values)
}
