//! Gauss–Legendre rules and composite panel grids.
//!
//! Kernel transforms and pulse convolutions are integrated over panels whose
//! edges sit on the kernel's breakpoints (spline knots, support edges), so the
//! integrand is smooth inside every panel and the composite rule converges
//! spectrally.

use alloc::vec::Vec;
use core::f64::consts::PI;


/// `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule with `n ≥ 1` nodes, computed by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Nodes on `[-1, 1]`, increasing.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights matching [`nodes`](Self::nodes); they sum to 2.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of nodes.
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Composite rule over consecutive `breaks`: every interval between two
    /// breakpoints is split into equal panels no wider than `max_width`.
    /// Nodes come back sorted.
    pub fn composite(&self, breaks: &[f64], max_width: f64) -> (Vec<f64>, Vec<f64>) {
        let mut xs = Vec::new();
        let mut ws = Vec::new();
        for pair in breaks.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let len = hi - lo;
            if len <= 0.0 {
                continue;
            }
            let panels = (len / max_width).ceil().max(1.0) as usize;
            let width = len / panels as f64;
            for p in 0..panels {
                let a = lo + p as f64 * width;
                let mid = a + 0.5 * width;
                for (t, w) in self.nodes.iter().zip(&self.weights) {
                    xs.push(mid + 0.5 * width * t);
                    ws.push(0.5 * width * w);
                }
            }
        }
        (xs, ws)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Linear change of variables `(x, y) = M·(a, b)` together with the breakpoints
/// of a kernel along the `a` and `b` axes. The kernel is smooth on every panel of
/// the tensor grid and vanishes outside `[a_first, a_last] × [b_first, b_last]`.
#[derive(Debug, Clone)]
pub struct PanelFrame {
    /// Row-major `M`.
    pub to_xy: [[f64; 2]; 2],
    /// Sorted breakpoints along `a`, including the support ends.
    pub a_breaks: Vec<f64>,
    /// Sorted breakpoints along `b`, including the support ends.
    pub b_breaks: Vec<f64>,
}

impl PanelFrame {
    /// `|det M|`, the area element `dx dy = |det M| da db`.
    pub fn jacobian(&self) -> f64 {
        let m = &self.to_xy;
        (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs()
    }

    /// Maps frame coordinates to `(x, y)`.
    pub fn to_xy(&self, a: f64, b: f64) -> (f64, f64) {
        let m = &self.to_xy;
        (m[0][0] * a + m[0][1] * b, m[1][0] * a + m[1][1] * b)
    }

    /// Maps `(x, y)` to frame coordinates.
    pub fn from_xy(&self, x: f64, y: f64) -> (f64, f64) {
        let m = &self.to_xy;
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        ((m[1][1] * x - m[0][1] * y) / det, (-m[1][0] * x + m[0][0] * y) / det)
    }

    /// Extent of the support along `a` and `b`.
    pub fn extents(&self) -> (f64, f64) {
        (
            self.a_breaks[self.a_breaks.len() - 1] - self.a_breaks[0],
            self.b_breaks[self.b_breaks.len() - 1] - self.b_breaks[0],
        )
    }
}
