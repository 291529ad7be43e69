use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::SampleSet;
use crate::{Error, Result};

/// Adds i.i.d. zero-mean Gaussian noise at the requested SNR.
///
/// The noise variance is `mean |ψ|²·10^(−snr_db/10)`, the mean running over the
/// whole sample window. Real sample sets get real noise; complex sets get
/// circular noise with half the variance on each component. `snr_db = +∞`
/// returns the input unchanged. The generator is ChaCha8 seeded with `seed`, and
/// samples are visited row by row.
///
/// # Errors
///
/// [`Error::InvalidParameter`] for all-zero samples or a NaN/−∞ SNR.
pub fn add_awgn(samples: &SampleSet, snr_db: f64, seed: u64) -> Result<SampleSet> {
    if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
        return Err(Error::invalid(alloc::format!("SNR must be a number or +∞, got {snr_db}")));
    }
    let n = samples.values.len();
    let power = samples.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / n.max(1) as f64;
    if !(power > 0.0) {
        return Err(Error::invalid("SNR is undefined for all-zero samples"));
    }
    if snr_db == f64::INFINITY {
        return Ok(samples.clone());
    }
    let variance = power * 10f64.powf(-snr_db / 10.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = samples.clone();
    let (rows, cols) = out.values.shape();
    if samples.real {
        let sd = variance.sqrt();
        for i in 0..rows {
            for j in 0..cols {
                let e: f64 = StandardNormal.sample(&mut rng);
                out.values[(i, j)].re += sd * e;
            }
        }
    } else {
        let sd = (0.5 * variance).sqrt();
        for i in 0..rows {
            for j in 0..cols {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                out.values[(i, j)] += Complex64::new(sd * re, sd * im);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::SamplingConfig;
    use crate::{CMatrix, IndexRange};

    fn set(real: bool, rows: i32, cols: i32) -> SampleSet {
        let cfg = SamplingConfig::new(1.0, 1.0, IndexRange::new(0, rows - 1).unwrap(), IndexRange::new(0, cols - 1).unwrap()).unwrap();
        let v = CMatrix::from_fn(rows as usize, cols as usize, |i, j| {
            let re = ((i * 7 + j * 3) % 11) as f64 - 5.0;
            Complex64::new(re, if real { 0.0 } else { 0.5 * re })
        });
        SampleSet::new(v, cfg, real).unwrap()
    }

    #[test]
    fn infinite_snr_is_identity() {
        let s = set(true, 4, 5);
        assert_eq!(add_awgn(&s, f64::INFINITY, 3).unwrap(), s);
    }

    #[test]
    fn seeded_noise_is_reproducible() {
        let s = set(false, 6, 6);
        assert_eq!(add_awgn(&s, 10.0, 42).unwrap(), add_awgn(&s, 10.0, 42).unwrap());
        assert_ne!(add_awgn(&s, 10.0, 42).unwrap(), add_awgn(&s, 10.0, 43).unwrap());
    }

    #[test]
    fn real_samples_stay_real() {
        let s = set(true, 6, 6);
        assert!(add_awgn(&s, 5.0, 1).unwrap().values.iter().all(|v| v.im == 0.0));
    }

    #[test]
    fn zero_samples_rejected() {
        let mut s = set(true, 3, 3);
        s.values.fill(Complex64::new(0.0, 0.0));
        assert!(add_awgn(&s, 10.0, 1).is_err());
        assert!(add_awgn(&set(true, 2, 2), f64::NAN, 1).is_err());
    }

    #[test]
    fn empirical_snr() {
        for real in [true, false] {
            let s = set(real, 1000, 1000);
            let noisy = add_awgn(&s, 15.0, 9).unwrap();
            let sig: f64 = s.values.iter().map(|v| v.norm_sqr()).sum();
            let noise: f64 = noisy.values.iter().zip(s.values.iter()).map(|(a, b)| (a - b).norm_sqr()).sum();
            let snr = 10.0 * (sig / noise).log10();
            assert!((snr - 15.0).abs() < 0.05, "{snr}");
        }
    }
}
