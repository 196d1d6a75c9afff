//! Lower envelope of a cost vector under the truncated-linear potential
//! `V(d, d') = min(lambda * |d - d'|, tau)`.
//!
//! `envelope[d] = min over d' of h[d'] + V(d', d)` in O(n): a forward and a
//! backward scan track the best source so far, and a final pass clamps at
//! `min(h) + tau`. Each candidate value is computed fresh from the source
//! entry (one multiply, one add), so the result matches the quadratic
//! formula term for term.

pub(crate) fn truncated_linear_envelope(h: &[f64], lambda: f64, tau: f64, out: &mut [f64]) {
    let n = h.len();
    assert_eq!(out.len(), n);
    assert!(n > 0);

    out[0] = h[0];
    let mut src = 0usize;
    for d in 1..n {
        let carried = h[src] + lambda * (d - src) as f64;
        if h[d] <= carried {
            src = d;
            out[d] = h[d];
        } else {
            out[d] = carried;
        }
    }

    src = n - 1;
    for d in (0..n.saturating_sub(1)).rev() {
        let carried = h[src] + lambda * (src - d) as f64;
        if h[d] <= carried {
            src = d;
        } else if carried < out[d] {
            out[d] = carried;
        }
    }

    let mut min_h = h[0];
    for &v in &h[1..] {
        if v < min_h {
            min_h = v;
        }
    }
    let cap = min_h + tau;
    for v in out.iter_mut() {
        if cap < *v {
            *v = cap;
        }
    }
}
