use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::fit_gamma_mle;
use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::rng::{GammaSampler, RngStream};
use crate::special::{gamma_p, gamma_q};

const CDF_EPS: f64 = 1e-15;

pub const MIN_BOOTSTRAP: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GofResult {
    pub p_ad: f64,
    pub p_ks: f64,
    pub stat_ad: f64,
    pub stat_ks: f64,
    pub n_boot: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GofStatistics {
    pub ad: f64,
    pub ks: f64,
}

/// K-S and A-D statistics of `data` against Γ(alpha, theta).
pub fn gof_statistics(data: &[f64], alpha: f64, theta: f64) -> GofStatistics {
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let nf = n as f64;
    let lower: Vec<f64> = sorted.iter().map(|x| gamma_p(alpha, x / theta).clamp(CDF_EPS, 1.0 - CDF_EPS)).collect();
    let upper: Vec<f64> = sorted.iter().map(|x| gamma_q(alpha, x / theta).clamp(CDF_EPS, 1.0 - CDF_EPS)).collect();

    let mut ks = 0.0f64;
    for (i, f) in lower.iter().enumerate() {
        ks = ks.max((i + 1) as f64 / nf - f).max(f - i as f64 / nf);
    }
    let mut acc = 0.0;
    for i in 0..n {
        acc += (2 * i + 1) as f64 * (lower[i].ln() + upper[n - 1 - i].ln());
    }
    GofStatistics { ad: -nf - acc / nf, ks: ks.min(1.0) }
}

/// Bootstrap p-values for the composite gamma hypothesis: each replication
/// samples from Γ(α̂, θ̂), refits, and recomputes both statistics.
/// Replication b draws from stream b of `seed`.
pub fn gof_pvalues(data: &[f64], alpha_hat: f64, theta_hat: f64, n_boot: usize, seed: u64) -> Result<GofResult> {
    ensure_positive("alpha_hat", alpha_hat)?;
    ensure_finite("alpha_hat", alpha_hat)?;
    ensure_positive("theta_hat", theta_hat)?;
    ensure_finite("theta_hat", theta_hat)?;
    if n_boot < MIN_BOOTSTRAP {
        return Err(Error::param("n_boot", format!("must be at least {MIN_BOOTSTRAP}")));
    }
    if data.len() < 2 {
        return Err(Error::InsufficientData(format!("goodness of fit needs at least 2 points, got {}", data.len())));
    }
    let observed = gof_statistics(data, alpha_hat, theta_hat);
    let sampler = GammaSampler::new(alpha_hat, theta_hat)?;
    let n = data.len();

    let exceed: (usize, usize) = (0..n_boot as u64)
        .into_par_iter()
        .map(|b| {
            let mut stream = RngStream::new(seed, b);
            let sample: Vec<f64> = (0..n).map(|_| sampler.sample(&mut stream)).collect();
            match fit_gamma_mle(&sample) {
                Ok(fit) => {
                    let s = gof_statistics(&sample, fit.alpha_hat, fit.theta_hat);
                    ((s.ad >= observed.ad) as usize, (s.ks >= observed.ks) as usize)
                }
                // an unfittable replicate counts against the null
                Err(_) => (1, 1),
            }
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    let denom = (n_boot + 1) as f64;
    Ok(GofResult {
        p_ad: (1 + exceed.0) as f64 / denom,
        p_ks: (1 + exceed.1) as f64 / denom,
        stat_ad: observed.ad,
        stat_ks: observed.ks,
        n_boot,
    })
}
