
/// Tolerance (in normalized argument units) within which a point is treated as
/// lying on a discontinuity of a rect-type window.
pub(crate) const EDGE_TOL: f64 = 1e-12;

/// Unit rect with the half-maximum convention: 1 inside `|t| < 1/2`, 1/2 on the
/// edges, 0 outside. The edge value makes lattice sums of the window agree with
/// its integral, which keeps lattice-aligned pulses exact.
pub(crate) fn rect(t: f64) -> f64 {
    let d = t.abs() - 0.5;
    if d < -EDGE_TOL {
        1.0
    } else if d <= EDGE_TOL {
        0.5
    } else {
        0.0
    }
}

/// Centered cardinal polynomial B-spline `β^r(t)`, the `(r+1)`-fold convolution of
/// the unit rect, supported on `[-(r+1)/2, (r+1)/2]`.
///
/// Uses the uniform-knot Cox–de Boor recursion on the left half of the support
/// (the spline is even). `β^0` takes the value 1/2 at `t = ±1/2`.
pub fn bspline(r: u32, t: f64) -> f64 {
    if r == 0 {
        return rect(t);
    }
    let order = r as usize + 1;
    let half = 0.5 * order as f64;
    let u = half - t.abs();
    if !(u > 0.0) {
        return 0.0;
    }
    let cell = (u.floor() as usize).min(order - 1);
    // w[j] holds N_k(u - j) for the current order k
    let mut w = [0.0f64; 64];
    assert!(order < w.len(), "B-spline order {r} too large");
    w[cell] = 1.0;
    for k in 2..=order {
        let kf = k as f64;
        for j in 0..=(order - k) {
            let s = u - j as f64;
            w[j] = (s * w[j] + (kf - s) * w[j + 1]) / (kf - 1.0);
        }
    }
    w[0]
}
