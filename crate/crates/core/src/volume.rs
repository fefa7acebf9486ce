//! Gamma volume model: i.i.d. Γ(α, θ) bucket volumes on an equidistant grid,
//! and the closed-form moments of the normalised weights X_i = V_i / Σ V_j,
//! which follow the symmetric Dirichlet law D(α, …, α).

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};

/// Volume model parameters.
///
/// `alpha` is the gamma shape of one averaging bucket. `f64::INFINITY` is
/// accepted and means deterministic, equal bucket volumes (the arithmetic
/// average).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeParams {
    alpha: f64,
    theta: f64,
    n_buckets: usize,
}

impl VolumeParams {
    pub fn new(alpha: f64, theta: f64, n_buckets: usize) -> Result<Self> {
        ensure_positive("alpha", alpha)?;
        ensure_positive("theta", theta)?;
        ensure_finite("theta", theta)?;
        if n_buckets == 0 {
            return Err(Error::param("n_buckets", "must be at least 1"));
        }
        Ok(VolumeParams { alpha, theta, n_buckets })
    }

    /// Equal-weight limit α → ∞.
    pub fn degenerate(n_buckets: usize) -> Result<Self> {
        Self::new(f64::INFINITY, 1.0, n_buckets)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn n_buckets(&self) -> usize {
        self.n_buckets
    }

    pub fn is_degenerate(&self) -> bool {
        self.alpha.is_infinite()
    }

    /// Same volume process observed on `n_buckets` buckets over the same
    /// horizon: the shape is proportional to bucket length.
    pub fn rebucket(&self, n_buckets: usize) -> Result<Self> {
        let alpha = self.alpha * self.n_buckets as f64 / n_buckets as f64;
        Self::new(alpha, self.theta, n_buckets)
    }

    /// Mean volume of one bucket, αθ.
    pub fn bucket_mean(&self) -> f64 {
        self.alpha * self.theta
    }

    pub fn dirichlet_moments(&self) -> DirichletMoments {
        dirichlet_moments(self)
    }
}

/// Equidistant averaging dates t_i = i·T/N, i = 1..N.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AveragingGrid {
    maturity: f64,
    n_buckets: usize,
}

impl AveragingGrid {
    pub fn new(maturity: f64, n_buckets: usize) -> Result<Self> {
        ensure_positive("maturity", maturity)?;
        ensure_finite("maturity", maturity)?;
        if n_buckets == 0 {
            return Err(Error::param("n_buckets", "must be at least 1"));
        }
        Ok(AveragingGrid { maturity, n_buckets })
    }

    pub fn maturity(&self) -> f64 {
        self.maturity
    }

    pub fn n_buckets(&self) -> usize {
        self.n_buckets
    }

    pub fn dt(&self) -> f64 {
        self.maturity / self.n_buckets as f64
    }

    /// t_i for i in 1..=N. `time(N)` is exactly the maturity.
    pub fn time(&self, i: usize) -> f64 {
        if i == self.n_buckets {
            self.maturity
        } else {
            i as f64 * self.dt()
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.n_buckets).map(move |i| self.time(i))
    }

    pub(crate) fn check_matches(&self, vol: &VolumeParams) -> Result<()> {
        if self.n_buckets != vol.n_buckets {
            return Err(Error::param(
                "n_buckets",
                format!(
                    "averaging grid has {} buckets but volume model has {}",
                    self.n_buckets, vol.n_buckets
                ),
            ));
        }
        Ok(())
    }
}

/// First and second moments of one Dirichlet weight, and the cross moments
/// of two distinct weights.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DirichletMoments {
    pub e_x: f64,
    pub e_x2: f64,
    pub var_x: f64,
    pub e_xixj: f64,
    pub cov_xixj: f64,
}

pub fn dirichlet_moments(params: &VolumeParams) -> DirichletMoments {
    let n = params.n_buckets as f64;
    let e_x = 1.0 / n;
    if params.is_degenerate() {
        return DirichletMoments { e_x, e_x2: e_x * e_x, var_x: 0.0, e_xixj: e_x * e_x, cov_xixj: 0.0 };
    }
    let a = params.alpha;
    let denom = a * n + 1.0;
    DirichletMoments {
        e_x,
        e_x2: (a + 1.0) / (n * denom),
        var_x: (n - 1.0) / (n * n * denom),
        e_xixj: a / (n * denom),
        cov_xixj: -1.0 / (n * n * denom),
    }
}
