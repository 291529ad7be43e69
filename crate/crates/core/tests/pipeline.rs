mod common;

use std::f64::consts::PI;

use common::{composite, Lcg};
use fri2d_core::kernels::{KernelSpec, NonseparableKernel, SeparableSmsKernel};
use fri2d_core::signals::{acquire, Fov, FriSignal, GaussianBlur, Pulse, PulseShape, SampleSet, SamplingConfig};
use fri2d_core::spectral::{dtft_on_grid, measurements, SwceMeasurements};
use fri2d_core::{Complex64, SpectralGrid};
use proptest::prelude::*;

const OMEGA0: f64 = PI / 0.99;

fn sample(signal: &FriSignal, kernel: &KernelSpec, fov: Fov) -> SampleSet {
    let (sx, sy) = kernel.grid().critical_rates();
    let cfg = SamplingConfig::covering(kernel, sx, sy, fov, signal.shape().halfwidth()).unwrap();
    acquire(signal, kernel, &cfg).unwrap()
}

fn max_abs_diff(a: &SwceMeasurements, b: &SwceMeasurements) -> (f64, f64) {
    let diff = a.values.iter().zip(b.values.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let scale = b.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    (diff, scale)
}

fn kernels(half: u32) -> Vec<KernelSpec> {
    let g = SpectralGrid::symmetric(half, half, OMEGA0, OMEGA0).unwrap();
    vec![
        NonseparableKernel::with_unit_weights(g).into(),
        SeparableSmsKernel::new(g, 1, 1).unwrap().into(),
        SeparableSmsKernel::new(g, 2, 3).unwrap().into(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn noiseless_dirac_measurements_are_exact(l in 1usize..=5, seed in any::<u64>()) {
        let mut rng = Lcg(seed);
        let pulses: Vec<Pulse> = (0..l).map(|_| Pulse::new(0.1 + rng.uniform(), rng.uniform(), rng.uniform())).collect();
        let signal = FriSignal::new(pulses.clone(), PulseShape::Dirac).unwrap();
        for kernel in kernels(l as u32) {
            let samples = sample(&signal, &kernel, Fov::UNIT);
            let p = measurements(&samples, &kernel, &PulseShape::Dirac).unwrap();
            let model: Vec<_> = pulses.iter().map(|q| (q.gamma, q.x, q.y)).collect();
            let truth = SwceMeasurements::from_pulses(*kernel.grid(), &model);
            let (diff, scale) = max_abs_diff(&p, &truth);
            prop_assert!(diff <= 1e-9 * scale, "{}: {diff:e} vs {scale:e}", kernel.family());
        }
    }
}

#[test]
fn two_dirac_dtft_is_transfer_times_model() {
    let kernel = kernels(2).remove(0);
    let pulses = vec![Pulse::new(0.8, 0.21, 0.64), Pulse { gamma: Complex64::new(0.3, -0.4), x: 0.77, y: 0.15 }];
    let signal = FriSignal::new(pulses.clone(), PulseShape::Dirac).unwrap();
    let samples = sample(&signal, &kernel, Fov::UNIT);
    let g = *kernel.grid();
    let fhat = dtft_on_grid(&samples, &g).unwrap();
    for (k1, k2, wx, wy) in g.points() {
        let model: Complex64 = pulses.iter().map(|p| p.gamma * Complex64::from_polar(1.0, -(wx * p.x + wy * p.y))).sum();
        let want = kernel.transfer(wx, wy) * model;
        let got = fhat[(g.k1().offset(k1), g.k2().offset(k2))];
        assert!((got - want).norm() <= 1e-10 * want.norm().max(1.0), "({k1},{k2}): {got} vs {want}");
    }
}

#[test]
fn real_amplitudes_give_conjugate_symmetric_measurements() {
    for kernel in kernels(3) {
        let pulses = vec![Pulse::new(0.5, 0.1, 0.9), Pulse::new(1.2, 0.45, 0.33), Pulse::new(0.7, 0.8, 0.6)];
        let signal = FriSignal::new(pulses, PulseShape::Dirac).unwrap();
        let samples = sample(&signal, &kernel, Fov::UNIT);
        assert!(samples.real);
        let p = measurements(&samples, &kernel, &PulseShape::Dirac).unwrap();
        let g = p.grid;
        for (k1, k2, _, _) in g.points() {
            let a = p.get(k1, k2);
            let b = p.get(-k1, -k2).conj();
            assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0), "{}", kernel.family());
        }
    }
}

#[test]
fn shifting_pulses_modulates_measurements() {
    let (dx, dy) = (0.13, -0.07);
    for kernel in kernels(2) {
        let base = vec![Pulse::new(0.9, 0.3, 0.5), Pulse::new(0.4, 0.6, 0.2)];
        let moved: Vec<Pulse> = base.iter().map(|p| Pulse { x: p.x + dx, y: p.y + dy, ..*p }).collect();
        let fov = Fov { x: [0.0, 1.0], y: [-0.1, 1.0] };
        let pa = measurements(&sample(&FriSignal::new(base, PulseShape::Dirac).unwrap(), &kernel, fov), &kernel, &PulseShape::Dirac).unwrap();
        let pb = measurements(&sample(&FriSignal::new(moved, PulseShape::Dirac).unwrap(), &kernel, fov), &kernel, &PulseShape::Dirac).unwrap();
        for (k1, k2, wx, wy) in pa.grid.points() {
            let want = pa.get(k1, k2) * Complex64::from_polar(1.0, -(wx * dx + wy * dy));
            assert!((pb.get(k1, k2) - want).norm() <= 1e-10 * want.norm().max(1.0));
        }
    }
}

#[test]
fn samples_vanish_beyond_kernel_support() {
    for kernel in kernels(2) {
        let signal = FriSignal::new(vec![Pulse::new(1.0, 0.4, 0.6)], PulseShape::Dirac).unwrap();
        let samples = sample(&signal, &kernel, Fov { x: [-2.0, 3.0], y: [-2.0, 3.0] });
        let (hx, hy) = kernel.support_half_widths();
        let cfg = samples.config;
        let mut zeros = 0;
        for (i, x) in cfg.xs().into_iter().enumerate() {
            for (j, y) in cfg.ys().into_iter().enumerate() {
                if (x - 0.4).abs() > hx || (y - 0.6).abs() > hy {
                    assert_eq!(samples.values[(i, j)], Complex64::new(0.0, 0.0));
                    zeros += 1;
                }
            }
        }
        assert!(zeros > 0);
    }
}

// (h ∗ g)(x, y) for a unit Gaussian at the origin and the nonseparable kernel,
// integrating along v inside the diamond slice for each u.
fn blob_oracle_nonseparable(k: &NonseparableKernel, sigma: f64, hw: f64, x: f64, y: f64) -> Complex64 {
    let g = k.grid();
    let (w0x, w0y) = (g.omega0x(), g.omega0y());
    let two_pi = 2.0 * PI;
    // u is the pulse-side variable; the kernel is evaluated at (x − u, y − v)
    let mut breaks = vec![x, x - g.t0x(), x + g.t0x()];
    for edge in [-hw, hw] {
        let a = two_pi - w0y * (y - edge).abs();
        if a > 0.0 {
            breaks.push(x - a / w0x);
            breaks.push(x + a / w0x);
        }
    }
    let lo = (-hw).max(x - g.t0x());
    let hi = hw.min(x + g.t0x());
    if lo >= hi {
        return Complex64::new(0.0, 0.0);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (u, wu) in composite(lo, hi, &breaks, 6, 24) {
        let a = (w0x * (x - u)).abs();
        let reach = (two_pi - a) / w0y;
        let vlo = (y - reach).max(-hw);
        let vhi = (y + reach).min(hw);
        if vlo >= vhi {
            continue;
        }
        let gu = (-u * u / (2.0 * sigma * sigma)).exp();
        for (v, wv) in composite(vlo, vhi, &[], 6, 24) {
            let gv = (-v * v / (2.0 * sigma * sigma)).exp();
            acc += k.spatial(x - u, y - v) * (wu * wv * gu * gv);
        }
    }
    acc
}

fn blob_oracle_separable(k: &SeparableSmsKernel, sigma: f64, hw: f64, x: f64, y: f64) -> Complex64 {
    let g = k.grid();
    let axis = |c: f64, r: u32, t0: f64, f: &dyn Fn(f64) -> Complex64| -> Complex64 {
        let knots: Vec<f64> = (0..=r).map(|i| c - (i as f64 - 0.5 * r as f64) * t0).collect();
        composite(-hw, hw, &knots, 6, 24)
            .into_iter()
            .map(|(u, w)| f(c - u) * (w * (-u * u / (2.0 * sigma * sigma)).exp()))
            .sum()
    };
    axis(x, k.r1(), g.t0x(), &|t| k.axis_x(t)) * axis(y, k.r2(), g.t0y(), &|t| k.axis_y(t))
}

#[test]
fn gaussian_blob_matches_quadrature_oracle() {
    let g = SpectralGrid::symmetric(2, 2, OMEGA0, OMEGA0).unwrap();
    let ns = NonseparableKernel::with_unit_weights(g);
    let kns: KernelSpec = ns.clone().into();
    let sigma = 0.05;
    for (hw, pts) in [
        (6.0 * sigma, vec![(0.0, 0.0), (0.37, -0.21), (0.9, 0.05), (-0.5, 0.55)]),
        (4.0 * sigma, vec![(0.2, 0.7)]),
    ] {
        let blur = GaussianBlur::new(&kns, sigma, hw).unwrap();
        for (x, y) in pts {
            let got = blur.response(x, y);
            let want = blob_oracle_nonseparable(&ns, sigma, hw, x, y);
            let scale = 2.0 * PI * sigma * sigma * kns.spatial(0.0, 0.0).norm();
            assert!((got - want).norm() <= 1e-5 * scale, "({x},{y}) hw={hw}: {got} vs {want}");
        }
    }
    let sep = SeparableSmsKernel::new(g, 2, 1).unwrap();
    let ks: KernelSpec = sep.clone().into();
    let blur = GaussianBlur::new(&ks, sigma, 6.0 * sigma).unwrap();
    for (x, y) in [(0.01, -0.3), (-0.95, 0.2)] {
        let got = blur.response(x, y);
        let want = blob_oracle_separable(&sep, sigma, 6.0 * sigma, x, y);
        let scale = 2.0 * PI * sigma * sigma * ks.spatial(0.0, 0.0).norm();
        assert!((got - want).norm() <= 1e-5 * scale, "({x},{y}): {got} vs {want}");
    }
}

#[test]
fn gaussian_transform_matches_quadrature() {
    let sigma = 0.02;
    let shape = PulseShape::gaussian(sigma).unwrap();
    let hw = shape.halfwidth();
    let nodes = composite(-hw, hw, &[], 16, 24);
    let axis = |w: f64| -> Complex64 {
        nodes.iter().map(|&(u, wt)| Complex64::from_polar(wt * (-u * u / (2.0 * sigma * sigma)).exp(), -w * u)).sum()
    };
    let h0 = shape.ctft(0.0, 0.0);
    for (wx, wy) in [(0.0, 0.0), (10.0, -5.0), (40.0, 20.0), (-95.0, 60.0)] {
        let q = axis(wx) * axis(wy);
        assert!((q - shape.ctft(wx, wy)).norm() <= 1e-6 * h0, "({wx},{wy})");
    }
}

#[test]
fn centred_blob_gives_flat_real_measurements() {
    let sigma = 0.02;
    let shape = PulseShape::gaussian(sigma).unwrap();
    for kernel in kernels(3) {
        let signal = FriSignal::new(vec![Pulse::new(1.0, 0.0, 0.0)], shape).unwrap();
        let samples = sample(&signal, &kernel, Fov { x: [-0.1, 0.1], y: [-0.1, 0.1] });
        let p = measurements(&samples, &kernel, &shape).unwrap();
        let c = p.get(0, 0);
        assert!(c.re > 0.0 && c.im.abs() <= 1e-12);
        for v in p.values.iter() {
            assert!((v - Complex64::new(1.0, 0.0)).norm() <= 1e-6, "{}: {v}", kernel.family());
        }
    }
}
