//! Reproducible, splittable random streams and the normal/gamma samplers
//! built on top of them.
//!
//! A stream is identified by `(seed, stream_id)`. The underlying generator is
//! ChaCha12 keyed by the seed with `stream_id` in the nonce, so any stream can
//! be materialised on any thread without touching the others.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{OpenClosed01, StandardNormal};

use crate::error::{ensure_positive, Error, Result};

#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha12Rng,
    clamped_gamma: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream { seed, stream_id, rng, clamped_gamma: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on (0, 1].
    pub fn uniform_open_closed(&mut self) -> f64 {
        self.rng.sample(OpenClosed01)
    }

    pub fn sample_standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// One Γ(alpha, theta) draw (shape/scale parameterisation).
    pub fn sample_gamma(&mut self, alpha: f64, theta: f64) -> Result<f64> {
        Ok(GammaSampler::new(alpha, theta)?.sample(self))
    }

    /// Number of gamma draws that underflowed to zero and were replaced by
    /// `f64::MIN_POSITIVE`.
    pub fn clamped_gamma_count(&self) -> u64 {
        self.clamped_gamma
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Marsaglia-Tsang squeeze/rejection sampler for Γ(alpha, theta).
///
/// Shapes below one are drawn as Γ(alpha + 1) · U^(1/alpha).
#[derive(Clone, Copy, Debug)]
pub struct GammaSampler {
    alpha: f64,
    theta: f64,
    d: f64,
    c: f64,
    inv_alpha: Option<f64>,
}

impl GammaSampler {
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        ensure_positive("alpha", alpha)?;
        ensure_positive("theta", theta)?;
        if !alpha.is_finite() || !theta.is_finite() {
            return Err(Error::param("alpha", "gamma parameters must be finite"));
        }
        let (shape, inv_alpha) = if alpha < 1.0 {
            (alpha + 1.0, Some(1.0 / alpha))
        } else {
            (alpha, None)
        };
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        Ok(GammaSampler { alpha, theta, d, c, inv_alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn sample(&self, stream: &mut RngStream) -> f64 {
        let mut g = self.marsaglia_tsang(stream);
        if let Some(inv_alpha) = self.inv_alpha {
            let u = stream.uniform_open_closed();
            g *= (u.ln() * inv_alpha).exp();
        }
        let x = g * self.theta;
        if x > 0.0 {
            x
        } else {
            stream.clamped_gamma += 1;
            f64::MIN_POSITIVE
        }
    }

    fn marsaglia_tsang(&self, stream: &mut RngStream) -> f64 {
        loop {
            let x = stream.sample_standard_normal();
            let v = 1.0 + self.c * x;
            if v <= 0.0 {
                continue;
            }
            let v = v * v * v;
            let u = stream.uniform_open_closed();
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 {
                return self.d * v;
            }
            if u.ln() < 0.5 * x2 + self.d * (1.0 - v + v.ln()) {
                return self.d * v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn same_stream_replays() {
        let mut a = RngStream::new(7, 3);
        let mut b = RngStream::new(7, 3);
        for _ in 0..1000 {
            assert_eq!(a.sample_standard_normal().to_bits(), b.sample_standard_normal().to_bits());
            assert_eq!(
                a.sample_gamma(0.7, 2.0).unwrap().to_bits(),
                b.sample_gamma(0.7, 2.0).unwrap().to_bits()
            );
        }
    }

    #[test]
    fn different_streams_differ() {
        let mut a = RngStream::new(7, 0);
        let mut b = RngStream::new(7, 1);
        let same = (0..100).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn normal_moments() {
        let mut s = RngStream::new(42, 0);
        let xs: Vec<f64> = (0..1_000_000).map(|_| s.sample_standard_normal()).collect();
        let (mean, var) = moments(&xs);
        assert!(mean.abs() < 0.004, "mean {mean}");
        assert!((var - 1.0).abs() < 0.005, "var {var}");
    }

    #[test]
    fn gamma_moments_alpha_four() {
        let mut s = RngStream::new(1, 0);
        let g = GammaSampler::new(4.0, 0.5).unwrap();
        let xs: Vec<f64> = (0..1_000_000).map(|_| g.sample(&mut s)).collect();
        let (mean, var) = moments(&xs);
        assert!((mean / 2.0 - 1.0).abs() < 0.005, "mean {mean}");
        assert!((var - 1.0).abs() < 0.01, "var {var}");
    }

    #[test]
    fn gamma_mean_exponential_large_scale() {
        let mut s = RngStream::new(2, 0);
        let g = GammaSampler::new(1.0, 0.2e6).unwrap();
        let mean = (0..1_000_000).map(|_| g.sample(&mut s)).sum::<f64>() / 1e6;
        assert!((mean / 0.2e6 - 1.0).abs() < 0.003, "mean {mean}");
    }

    // Both sampler branches: mean and variance within 3 standard errors.
    #[test]
    fn gamma_moments_both_branches() {
        for (seed, alpha) in [(3u64, 0.3), (4, 0.9), (5, 1.0), (6, 2.5), (7, 40.0)] {
            let theta = 1.7;
            let mut s = RngStream::new(seed, 0);
            let g = GammaSampler::new(alpha, theta).unwrap();
            let n = 1_000_000;
            let xs: Vec<f64> = (0..n).map(|_| g.sample(&mut s)).collect();
            let (mean, var) = moments(&xs);
            let true_var = alpha * theta * theta;
            let se_mean = (true_var / n as f64).sqrt();
            // Var of the sample variance: (mu4 - sigma^4) / n, mu4 = 3 a^2 t^4 + 6 a t^4.
            let mu4 = (3.0 * alpha * alpha + 6.0 * alpha) * theta.powi(4);
            let se_var = ((mu4 - true_var * true_var) / n as f64).sqrt();
            assert!((mean - alpha * theta).abs() < 3.0 * se_mean, "alpha {alpha}: mean {mean}");
            assert!((var - true_var).abs() < 3.0 * se_var, "alpha {alpha}: var {var}");
        }
    }

    #[test]
    fn gamma_rejects_bad_parameters() {
        let mut s = RngStream::new(0, 0);
        assert!(s.sample_gamma(0.0, 1.0).is_err());
        assert!(s.sample_gamma(1.0, -1.0).is_err());
        assert!(s.sample_gamma(f64::NAN, 1.0).is_err());
        assert!(GammaSampler::new(f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn tiny_shape_is_clamped_and_counted() {
        let mut s = RngStream::new(11, 0);
        let g = GammaSampler::new(1e-3, 1.0).unwrap();
        for _ in 0..2000 {
            let x = g.sample(&mut s);
            assert!(x > 0.0);
        }
        assert!(s.clamped_gamma_count() > 0);
    }
}
