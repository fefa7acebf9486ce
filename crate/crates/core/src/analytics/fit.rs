use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{ln_gamma, log_minus_digamma, trigamma};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaFit {
    pub alpha_hat: f64,
    pub theta_hat: f64,
    pub log_likelihood: f64,
}

const MAX_ITER: usize = 200;

/// Maximum-likelihood gamma fit. Newton on ln α − ψ(α) = ln x̄ − mean(ln x),
/// started from Minka's closed-form approximation.
pub fn fit_gamma_mle(data: &[f64]) -> Result<GammaFit> {
    if data.len() < 2 {
        return Err(Error::InsufficientData(format!("gamma fit needs at least 2 points, got {}", data.len())));
    }
    if let Some(x) = data.iter().find(|x| !(**x > 0.0) || !x.is_finite()) {
        return Err(Error::DegenerateData(format!("gamma fit needs positive finite data, found {x}")));
    }
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    let mean_ln = data.iter().map(|x| x.ln()).sum::<f64>() / n;
    let s = mean.ln() - mean_ln;
    if !(s > 1e-14) {
        return Err(Error::DegenerateData("gamma fit: data are (numerically) all equal".into()));
    }

    let mut alpha = (3.0 - s + ((s - 3.0).powi(2) + 24.0 * s).sqrt()) / (12.0 * s);
    let mut converged = false;
    for _ in 0..MAX_ITER {
        let f = log_minus_digamma(alpha) - s;
        let df = 1.0 / alpha - trigamma(alpha);
        let mut next = alpha - f / df;
        if !(next > 0.0) || !next.is_finite() {
            next = alpha / 2.0;
        }
        let step = (next - alpha).abs() / alpha;
        alpha = next;
        if step < 1e-10 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(format!("gamma MLE did not converge (s = {s})")));
    }
    let theta = mean / alpha;
    let log_likelihood = n * ((alpha - 1.0) * mean_ln - mean / theta - ln_gamma(alpha) - alpha * theta.ln());
    Ok(GammaFit { alpha_hat: alpha, theta_hat: theta, log_likelihood })
}
