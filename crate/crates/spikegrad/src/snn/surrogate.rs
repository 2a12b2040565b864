//! Heaviside spike function and its two surrogate derivatives.

use super::{SurrogateConfig, SurrogateKind};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Step function with H(0) = 1.
#[inline]
pub fn heaviside(x: f64) -> f64 {
    if x < 0.0 {
        0.0
    } else {
        1.0
    }
}

#[inline]
pub(crate) fn gaussian_density(x: f64, sigma: f64) -> f64 {
    let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    norm * (-x * x / (2.0 * sigma * sigma)).exp()
}

/// Standard surrogate gradient: the Gaussian density of width `sigma`.
///
/// The chain-rule tangent is applied by the caller; this returns only the
/// density value.
pub fn surrogate_sg(x: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::config(format!(
            "surrogate sigma must be positive, got {sigma}"
        )));
    }
    Ok(gaussian_density(x, sigma))
}

/// Weak-form surrogate evaluated on explicit perturbation samples.
///
/// f(x) = (1/K) sum_k (delta_k / sigma^2) (H(x + delta_k) - H(x))
pub fn surrogate_wsg_from_deltas(x: f64, sigma: f64, deltas: &[f64]) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::config(format!(
            "surrogate sigma must be positive, got {sigma}"
        )));
    }
    if deltas.is_empty() {
        return Err(Error::config("weak surrogate needs at least one sample"));
    }
    let h0 = heaviside(x);
    let inv_s2 = 1.0 / (sigma * sigma);
    let sum: f64 = deltas
        .iter()
        .map(|d| d * inv_s2 * (heaviside(x + d) - h0))
        .sum();
    Ok(sum / deltas.len() as f64)
}

/// Monte-Carlo weak surrogate with `k_samples` draws of N(0, sigma^2) from `rng`.
pub fn surrogate_wsg<R: Rng>(x: f64, sigma: f64, k_samples: usize, rng: &mut R) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::config(format!(
            "surrogate sigma must be positive, got {sigma}"
        )));
    }
    if k_samples == 0 {
        return Err(Error::config("k_samples must be at least 1"));
    }
    let normal = Normal::new(0.0, sigma).expect("sigma checked positive");
    let h0 = heaviside(x);
    let inv_s2 = 1.0 / (sigma * sigma);
    let mut sum = 0.0;
    for _ in 0..k_samples {
        let d: f64 = normal.sample(rng);
        sum += d * inv_s2 * (heaviside(x + d) - h0);
    }
    Ok(sum / k_samples as f64)
}

/// Standard normal CDF via erf.
#[inline]
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + libm::erf(z / std::f64::consts::SQRT_2))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-pass surrogate evaluator.
///
/// Weak-form values are drawn from a counter-based stream keyed by
/// (pass_seed, layer, time step, unit), so a reverse-mode and a forward-mode
/// sweep over the same pass see bit-identical surrogate factors.
#[derive(Debug, Clone)]
pub struct SurrogateEval {
    kind: SurrogateKind,
    sigma: f64,
    samples: usize,
    pass_seed: u64,
}

impl SurrogateEval {
    pub fn new(cfg: &SurrogateConfig, pass_seed: u64) -> Result<Self> {
        cfg.validate()?;
        Ok(SurrogateEval {
            kind: cfg.kind,
            sigma: cfg.sigma,
            samples: cfg.wsg_samples,
            pass_seed,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Tallied cost of one evaluation, in multiply-accumulate units.
    pub fn cost_per_eval(&self) -> u64 {
        match self.kind {
            SurrogateKind::Sg => 1,
            SurrogateKind::Wsg => self.samples as u64,
        }
    }

    /// Surrogate derivative at `x` for the unit addressed by (layer, t, unit).
    pub fn eval(&self, x: f64, layer: usize, t: usize, unit: usize) -> f64 {
        match self.kind {
            SurrogateKind::Sg => gaussian_density(x, self.sigma),
            SurrogateKind::Wsg => {
                let key = self
                    .pass_seed
                    .wrapping_add(splitmix64((layer as u64) << 42 ^ (t as u64) << 21 ^ unit as u64));
                let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(key));
                let normal = Normal::new(0.0, self.sigma).expect("sigma checked positive");
                let h0 = heaviside(x);
                let inv_s2 = 1.0 / (self.sigma * self.sigma);
                let mut sum = 0.0;
                for _ in 0..self.samples {
                    let d: f64 = normal.sample(&mut rng);
                    sum += d * inv_s2 * (heaviside(x + d) - h0);
                }
                sum / self.samples as f64
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn heaviside_case_split() {
        assert_eq!(heaviside(-1.0), 0.0);
        assert_eq!(heaviside(0.0), 1.0);
        assert_eq!(heaviside(0.5), 1.0);
        assert_eq!(heaviside(-0.0), 1.0);
    }

    #[test]
    fn sg_density_values() {
        // 1/(sigma sqrt(2 pi)) at zero.
        let v = surrogate_sg(0.0, 0.5).unwrap();
        assert!((v - 0.797885).abs() < 1e-6, "got {v}");
        let v = surrogate_sg(0.0, 0.3).unwrap();
        assert!((v - 1.329808).abs() < 1e-6, "got {v}");
        let a = surrogate_sg(1.0, 0.5).unwrap();
        let b = surrogate_sg(-1.0, 0.5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sg_rejects_bad_sigma() {
        assert!(surrogate_sg(0.0, 0.0).is_err());
        assert!(surrogate_sg(0.0, -1.0).is_err());
        assert!(surrogate_wsg(0.0, -1.0, 4, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }

    #[test]
    fn sg_shape_properties() {
        // Even, positive, maximized at zero.
        let sigma = 0.4;
        let at0 = surrogate_sg(0.0, sigma).unwrap();
        for i in 1..50 {
            let x = i as f64 * 0.1;
            let v = surrogate_sg(x, sigma).unwrap();
            assert!(v > 0.0);
            assert!(v < at0);
            assert_eq!(v, surrogate_sg(-x, sigma).unwrap());
        }
    }

    #[test]
    fn sg_integrates_to_one() {
        // Trapezoid quadrature over +-10 sigma.
        let sigma = 0.5;
        let n = 200_000;
        let lo = -10.0 * sigma;
        let hi = 10.0 * sigma;
        let h = (hi - lo) / n as f64;
        let mut acc = 0.5 * (gaussian_density(lo, sigma) + gaussian_density(hi, sigma));
        for i in 1..n {
            acc += gaussian_density(lo + i as f64 * h, sigma);
        }
        let integral = acc * h;
        assert!((integral - 1.0).abs() < 1e-6, "integral {integral}");
    }

    #[test]
    fn wsg_far_from_threshold_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in [1, 8, 64] {
            let v = surrogate_wsg(10.0, 0.5, k, &mut rng).unwrap();
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn wsg_single_forced_sample() {
        // x = -0.1, delta = +0.2: (0.2/0.25) * (1 - 0) = 0.8
        let v = surrogate_wsg_from_deltas(-0.1, 0.5, &[0.2]).unwrap();
        assert!((v - 0.8).abs() < 1e-15, "got {v}");
    }

    #[test]
    fn wsg_deterministic_under_seed() {
        let a = surrogate_wsg(0.1, 0.5, 32, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        let b = surrogate_wsg(0.1, 0.5, 32, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn wsg_mean_matches_density_at_zero() {
        // Monte-Carlo oracle: expectation at x = 0 is the density 1/(sigma sqrt(2 pi)).
        let sigma = 0.5;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let est = surrogate_wsg(0.0, sigma, 1_000_000, &mut rng).unwrap();
        let expect = surrogate_sg(0.0, sigma).unwrap();
        let rel = (est - expect).abs() / expect;
        assert!(rel < 0.01, "relative error {rel}");
    }

    #[test]
    fn eval_stream_is_position_keyed() {
        let cfg = SurrogateConfig::wsg(0.5, 8, 3);
        let ev = SurrogateEval::new(&cfg, 99).unwrap();
        let a = ev.eval(0.05, 1, 4, 2);
        let b = ev.eval(0.05, 1, 4, 2);
        assert_eq!(a, b);
        // Different positions draw different samples (almost surely differ).
        let c = ev.eval(0.05, 1, 4, 3);
        assert_ne!(a, c);
    }

    #[test]
    fn normal_cdf_matches_known_points() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((normal_cdf(1.959963984540054) - 0.975).abs() < 1e-9);
        assert!(normal_cdf(-8.0) < 1e-14);
    }
}
