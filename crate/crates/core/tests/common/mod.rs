#![allow(dead_code)]

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration on the
/// three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// Composite rule on `[lo, hi]` with the sorted interior `breaks` honoured and each
/// piece split into `sub` panels of an `n`-point rule.
pub fn composite(lo: f64, hi: f64, breaks: &[f64], sub: usize, n: usize) -> Vec<(f64, f64)> {
    let (gx, gw) = gauss_legendre(n);
    let mut cuts = vec![lo];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|b| *b > lo && *b < hi).collect();
    inner.sort_by(f64::total_cmp);
    cuts.extend(inner);
    cuts.push(hi);
    let mut out = Vec::new();
    for seg in cuts.windows(2) {
        let h = (seg[1] - seg[0]) / sub as f64;
        if h <= 0.0 {
            continue;
        }
        for s in 0..sub {
            let a = seg[0] + s as f64 * h;
            for (x, w) in gx.iter().zip(&gw) {
                out.push((a + 0.5 * h * (x + 1.0), 0.5 * h * w));
            }
        }
    }
    out
}

pub struct Lcg(pub u64);

impl Lcg {
    pub fn uniform(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}
