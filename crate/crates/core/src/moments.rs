//! First two moments of the VWAP under GBM prices and i.i.d. gamma volumes.
//!
//! With weights X_i = V_i / Σ V_j independent of the price path,
//!
//! ```text
//! M1 = E[(1/N) Σ S_i]
//! M2 = Var[(1/N) Σ S_i] + D / (αN + 1)                    (exact)
//! M2 = Var[(1/N) Σ S_i] + (D + Var[(1/N) Σ S_i]) / (αN)   (ratio-expansion approximation)
//! ```
//!
//! where D = E[(1/N) Σ S_i²] − E[((1/N) Σ S_i)²] is the price dispersion
//! across buckets. The second variant comes from the second-order ratio
//! expansions E(Y/Z), Var(Y/Z) and is always wider than the exact one.
//! Both central terms are evaluated in forms that are sums of positive terms,
//! so they stay accurate as σ → 0 or α → ∞.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::volume::{AveragingGrid, VolumeParams};

/// Below this magnitude a rate is treated as zero in (e^{xT} − 1)/x.
const ZERO_RATE: f64 = 1e-12;

/// GBM dynamics dS = r S dt + σ S dW under the pricing measure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarketParams {
    s0: f64,
    r: f64,
    sigma: f64,
}

impl MarketParams {
    pub fn new(s0: f64, r: f64, sigma: f64) -> Result<Self> {
        ensure_positive("s0", s0)?;
        ensure_finite("s0", s0)?;
        ensure_finite("r", r)?;
        ensure_positive("sigma", sigma)?;
        ensure_finite("sigma", sigma)?;
        Ok(MarketParams { s0, r, sigma })
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Mean and variance of an average price.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentPair {
    pub m1: f64,
    pub m2: f64,
}

impl MomentPair {
    pub fn new(m1: f64, m2: f64) -> Result<Self> {
        ensure_positive("m1", m1)?;
        ensure_finite("m1", m1)?;
        if !(m2 >= 0.0) || !m2.is_finite() {
            return Err(Error::param("m2", format!("must be finite and non-negative, got {m2}")));
        }
        Ok(MomentPair { m1, m2 })
    }

    /// Var / mean², the lognormal e^{σ²T} − 1.
    pub fn relative_variance(&self) -> f64 {
        self.m2 / (self.m1 * self.m1)
    }
}

/// Gamma-process volume in continuous time: Z_T ~ Γ(ᾱT, θ).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuousVolumeParams {
    alpha_tilde: f64,
    theta: f64,
}

impl ContinuousVolumeParams {
    pub fn new(alpha_tilde: f64, theta: f64) -> Result<Self> {
        ensure_positive("alpha_tilde", alpha_tilde)?;
        ensure_positive("theta", theta)?;
        ensure_finite("theta", theta)?;
        Ok(ContinuousVolumeParams { alpha_tilde, theta })
    }

    /// ᾱ = α / Δt, i.e. ᾱT = αN.
    pub fn from_discrete(vol: &VolumeParams, grid: &AveragingGrid) -> Result<Self> {
        Self::new(vol.alpha() / grid.dt(), vol.theta())
    }

    pub fn alpha_tilde(&self) -> f64 {
        self.alpha_tilde
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Total shape ᾱT accumulated over `maturity`.
    pub fn total_shape(&self, maturity: f64) -> f64 {
        self.alpha_tilde * maturity
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentVariant {
    Exact,
    Stace,
}

/// Expectations of the plain price average on the grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GbmSums {
    /// E[(1/N) Σ S_i]
    pub mean_avg: f64,
    /// E[(1/N) Σ S_i²]
    pub mean_sq_avg: f64,
    /// E[((1/N) Σ S_i)²]
    pub mean_avg_sq: f64,
    /// Var[(1/N) Σ S_i], evaluated without cancellation.
    pub var_avg: f64,
    /// mean_sq_avg − mean_avg_sq = (1/N²) Σ_{i<j} E(S_j − S_i)², evaluated
    /// without cancellation.
    pub dispersion: f64,
}

/// O(N) evaluation of the GBM sums on an equidistant grid.
pub fn gbm_sum_moments(mkt: &MarketParams, grid: &AveragingGrid) -> GbmSums {
    let n = grid.n_buckets();
    let nf = n as f64;
    let dt = grid.dt();
    let (s0, r, sig2) = (mkt.s0, mkt.r, mkt.sigma * mkt.sigma);
    let c = 2.0 * r + sig2;

    let growth: Vec<f64> = (1..=n).map(|i| (r * i as f64 * dt).exp()).collect();
    let second: Vec<f64> = (1..=n).map(|i| (c * i as f64 * dt).exp()).collect();

    let sum_growth: f64 = growth.iter().sum();
    let sum_second: f64 = second.iter().sum();

    // Σ_j e^{r t_j} Σ_{i<j} e^{(r+σ²) t_i}
    let mut cross = 0.0;
    let mut running = 0.0;
    for j in 1..=n {
        cross += growth[j - 1] * running;
        running += ((r + sig2) * j as f64 * dt).exp();
    }

    // Var: Σ_i e^{r t_i}(e^{σ² t_i} − 1) (e^{r t_i} + 2 Σ_{j>i} e^{r t_j})
    let mut var_acc = 0.0;
    let mut suffix = 0.0;
    for i in (1..=n).rev() {
        let u = growth[i - 1] * (sig2 * i as f64 * dt).exp_m1();
        var_acc += u * (growth[i - 1] + 2.0 * suffix);
        suffix += growth[i - 1];
    }

    // Dispersion by lag k = j − i: Σ_k w_k Σ_{i=1}^{N−k} e^{c t_i}
    let mut prefix = vec![0.0; n + 1];
    for i in 1..=n {
        prefix[i] = prefix[i - 1] + second[i - 1];
    }
    let mut disp_acc = 0.0;
    for k in 1..n {
        let tau = k as f64 * dt;
        let drift = (r * tau).exp_m1();
        let w = drift * drift + (2.0 * r * tau).exp() * (sig2 * tau).exp_m1();
        disp_acc += w * prefix[n - k];
    }

    let scale = s0 * s0 / (nf * nf);
    GbmSums {
        mean_avg: s0 * sum_growth / nf,
        mean_sq_avg: s0 * s0 * sum_second / nf,
        mean_avg_sq: scale * (sum_second + 2.0 * cross),
        var_avg: scale * var_acc,
        dispersion: scale * disp_acc,
    }
}

/// Moments of the arithmetic average (1/N) Σ S_i.
pub fn asian_moments_discrete(mkt: &MarketParams, grid: &AveragingGrid) -> MomentPair {
    let sums = gbm_sum_moments(mkt, grid);
    MomentPair { m1: sums.mean_avg, m2: sums.var_avg }
}

pub fn vwap_moments_discrete(
    mkt: &MarketParams,
    vol: &VolumeParams,
    grid: &AveragingGrid,
    variant: MomentVariant,
) -> Result<MomentPair> {
    grid.check_matches(vol)?;
    let sums = gbm_sum_moments(mkt, grid);
    let total_shape = vol.alpha() * grid.n_buckets() as f64;
    Ok(MomentPair { m1: sums.mean_avg, m2: volume_adjusted_m2(sums.var_avg, sums.dispersion, total_shape, variant) })
}

pub fn vwap_moments_discrete_exact(
    mkt: &MarketParams,
    vol: &VolumeParams,
    grid: &AveragingGrid,
) -> Result<MomentPair> {
    vwap_moments_discrete(mkt, vol, grid, MomentVariant::Exact)
}

pub fn vwap_moments_discrete_stace(
    mkt: &MarketParams,
    vol: &VolumeParams,
    grid: &AveragingGrid,
) -> Result<MomentPair> {
    vwap_moments_discrete(mkt, vol, grid, MomentVariant::Stace)
}

// total_shape is αN (discrete) or ᾱT (continuous); ∞ removes the volume term.
fn volume_adjusted_m2(var_avg: f64, dispersion: f64, total_shape: f64, variant: MomentVariant) -> f64 {
    if total_shape.is_infinite() {
        return var_avg;
    }
    match variant {
        MomentVariant::Exact => var_avg + dispersion / (total_shape + 1.0),
        MomentVariant::Stace => var_avg + (dispersion + var_avg) / total_shape,
    }
}

/// Expectations of the continuous average (1/T) ∫ S_t dt.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GbmIntegrals {
    pub mean_avg: f64,
    pub mean_sq_avg: f64,
    pub mean_avg_sq: f64,
}

impl GbmIntegrals {
    pub fn var_avg(&self) -> f64 {
        self.mean_avg_sq - self.mean_avg * self.mean_avg
    }

    pub fn dispersion(&self) -> f64 {
        self.mean_sq_avg - self.mean_avg_sq
    }
}

pub fn gbm_integral_moments(mkt: &MarketParams, maturity: f64) -> Result<GbmIntegrals> {
    ensure_positive("maturity", maturity)?;
    let t = maturity;
    let (s0, r, sig2) = (mkt.s0, mkt.r, mkt.sigma * mkt.sigma);
    let c = 2.0 * r + sig2;
    Ok(GbmIntegrals {
        mean_avg: s0 * growth_integral(r, t) / t,
        mean_sq_avg: s0 * s0 * growth_integral(c, t) / t,
        // 2 S0² / ((r+σ²) T²) · (g(2r+σ²) − g(r)), as a divided difference
        mean_avg_sq: 2.0 * s0 * s0 * growth_divided_difference(c, r, t) / (t * t),
    })
}

pub fn asian_moments_continuous(mkt: &MarketParams, maturity: f64) -> Result<MomentPair> {
    let ints = gbm_integral_moments(mkt, maturity)?;
    Ok(MomentPair { m1: ints.mean_avg, m2: ints.var_avg().max(0.0) })
}

pub fn vwap_moments_continuous(
    mkt: &MarketParams,
    cvol: &ContinuousVolumeParams,
    maturity: f64,
    variant: MomentVariant,
) -> Result<MomentPair> {
    let ints = gbm_integral_moments(mkt, maturity)?;
    let var = ints.var_avg().max(0.0);
    let m2 = volume_adjusted_m2(var, ints.dispersion().max(0.0), cvol.total_shape(maturity), variant);
    Ok(MomentPair { m1: ints.mean_avg, m2 })
}

/// ∫_0^T e^{xu} du = (e^{xT} − 1)/x.
fn growth_integral(x: f64, t: f64) -> f64 {
    if x.abs() < ZERO_RATE {
        t * (1.0 + 0.5 * x * t)
    } else {
        (x * t).exp_m1() / x
    }
}

/// (g(a) − g(b)) / (a − b) with g = growth_integral.
fn growth_divided_difference(a: f64, b: f64, t: f64) -> f64 {
    if ((a - b) * t).abs() > 1e-3 {
        return (growth_integral(a, t) - growth_integral(b, t)) / (a - b);
    }
    // T² Σ_{k≥1} h_k(aT, bT) / (k+1)!, h_k the complete homogeneous polynomial
    let (at, bt) = (a * t, b * t);
    let mut h = 1.0;
    let mut b_pow = 1.0;
    let mut fact = 2.0;
    let mut sum = h / fact;
    for k in 2..400 {
        b_pow *= bt;
        h = at * h + b_pow;
        fact *= (k + 1) as f64;
        let term = h / fact;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    t * t * sum
}

/// Leading-order implied-volatility ratio σ_VWAP / σ_Asian on a discrete
/// grid, dropping O(T/N) terms.
pub fn vwap_ratio_asymptotic(vol: &VolumeParams, variant: MomentVariant) -> f64 {
    if vol.is_degenerate() {
        return 1.0;
    }
    let a = vol.alpha();
    let n = vol.n_buckets() as f64;
    let num = 3.0 + a + 2.0 * a * n;
    match variant {
        MomentVariant::Exact => (n * num / ((1.0 + 2.0 * n) * (1.0 + a * n))).sqrt(),
        MomentVariant::Stace => (num / (a + 2.0 * a * n)).sqrt(),
    }
}

/// Small-T expansion of the squared continuous-time implied-volatility ratio
/// at fixed total shape A = ᾱT: ratio² = `leading` + `slope`·T + O(T²).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioExpansion {
    pub leading: f64,
    pub slope: f64,
}

impl RatioExpansion {
    pub fn ratio(&self, maturity: f64) -> f64 {
        (self.leading + self.slope * maturity).sqrt()
    }
}

pub fn continuous_ratio_expansion(mkt: &MarketParams, total_shape: f64, variant: MomentVariant) -> RatioExpansion {
    let a = total_shape;
    let (r, s2) = (mkt.r, mkt.sigma * mkt.sigma);
    if a.is_infinite() {
        return RatioExpansion { leading: 1.0, slope: 0.0 };
    }
    match variant {
        MomentVariant::Exact => RatioExpansion {
            leading: (3.0 + 2.0 * a) / (2.0 + 2.0 * a),
            slope: (6.0 * (1.0 + a) * r * r + 3.0 * (1.0 + a) * r * s2 + a * s2 * s2)
                / (24.0 * (1.0 + a).powi(2) * s2),
        },
        MomentVariant::Stace => RatioExpansion {
            leading: (3.0 + 2.0 * a) / (2.0 * a),
            slope: (2.0 * a * r * r + a * r * s2 - 3.0 * s2 * s2 - a * s2 * s2) / (8.0 * a * a * s2),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lognormal_vol(m: &MomentPair, t: f64) -> f64 {
        ((m.relative_variance()).ln_1p() / t).sqrt()
    }

    // O(N²) reference straight from the defining sums.
    fn naive_sums(mkt: &MarketParams, grid: &AveragingGrid) -> (f64, f64, f64) {
        let n = grid.n_buckets();
        let dt = grid.dt();
        let (s0, r, s2) = (mkt.s0(), mkt.r(), mkt.sigma().powi(2));
        let nf = n as f64;
        let mut a = 0.0;
        let mut m = 0.0;
        let mut b = 0.0;
        for j in 1..=n {
            let tj = j as f64 * dt;
            m += (r * tj).exp();
            a += ((2.0 * r + s2) * tj).exp();
            for i in 1..j {
                let ti = i as f64 * dt;
                b += (r * (ti + tj) + s2 * ti).exp();
            }
        }
        (s0 * m / nf, s0 * s0 * a / nf, s0 * s0 / (nf * nf) * (a + 2.0 * b))
    }

    fn mkt() -> MarketParams {
        MarketParams::new(100.0, 0.05, 0.2).unwrap()
    }

    #[test]
    fn running_sums_match_naive() {
        for (n, t, r, s) in [(1, 0.5, 0.05, 0.2), (10, 2.0 / 52.0, 0.05, 0.2), (80, 0.317, -0.02, 0.4), (257, 3.0, 0.1, 0.1)] {
            let mkt = MarketParams::new(100.0, r, s).unwrap();
            let grid = AveragingGrid::new(t, n).unwrap();
            let fast = gbm_sum_moments(&mkt, &grid);
            let (m, sq, avg_sq) = naive_sums(&mkt, &grid);
            assert!(((fast.mean_avg - m) / m).abs() < 1e-13);
            assert!(((fast.mean_sq_avg - sq) / sq).abs() < 1e-13);
            assert!(((fast.mean_avg_sq - avg_sq) / avg_sq).abs() < 1e-13);
            let var = avg_sq - m * m;
            let disp = sq - avg_sq;
            assert!(((fast.var_avg - var) / var).abs() < 1e-8, "var {} vs {}", fast.var_avg, var);
            if n > 1 {
                assert!(((fast.dispersion - disp) / disp).abs() < 1e-8);
            } else {
                assert_eq!(fast.dispersion, 0.0);
            }
        }
    }

    #[test]
    fn flat_path_limit() {
        let mkt = MarketParams::new(100.0, 0.0, 1e-9).unwrap();
        let sums = gbm_sum_moments(&mkt, &AveragingGrid::new(1.0, 12).unwrap());
        assert!((sums.mean_avg - 100.0).abs() < 1e-12);
        assert!((sums.mean_sq_avg - 1e4).abs() < 1e-9);
        assert!((sums.mean_avg_sq - 1e4).abs() < 1e-9);
        assert!(sums.var_avg >= 0.0 && sums.var_avg < 1e-10);
    }

    #[test]
    fn single_bucket_is_terminal_lognormal() {
        let t = 0.7;
        let grid = AveragingGrid::new(t, 1).unwrap();
        let vol = VolumeParams::new(3.0, 1.0, 1).unwrap();
        let m = vwap_moments_discrete_exact(&mkt(), &vol, &grid).unwrap();
        let m1 = 100.0 * (0.05 * t).exp();
        let m2 = 1e4 * (0.04 * t).exp_m1() * (0.1 * t).exp();
        assert!(((m.m1 - m1) / m1).abs() < 1e-15);
        assert!(((m.m2 - m2) / m2).abs() < 1e-13);
    }

    #[test]
    fn infinite_alpha_is_asian() {
        let grid = AveragingGrid::new(2.0 / 52.0, 10).unwrap();
        let asian = asian_moments_discrete(&mkt(), &grid);
        for variant in [MomentVariant::Exact, MomentVariant::Stace] {
            let big = vwap_moments_discrete(&mkt(), &VolumeParams::new(1e12, 1.0, 10).unwrap(), &grid, variant).unwrap();
            assert!(((big.m2 - asian.m2) / asian.m2).abs() < 1e-9);
            assert_eq!(big.m1, asian.m1);
            let inf = vwap_moments_discrete(&mkt(), &VolumeParams::degenerate(10).unwrap(), &grid, variant).unwrap();
            assert_eq!(inf, asian);
        }
    }

    #[test]
    fn mismatched_buckets_rejected() {
        let grid = AveragingGrid::new(1.0, 10).unwrap();
        let vol = VolumeParams::new(1.0, 1.0, 11).unwrap();
        assert!(vwap_moments_discrete_exact(&mkt(), &vol, &grid).is_err());
    }

    fn table2_ratio(alpha: f64, variant: MomentVariant) -> f64 {
        let t = 2.0 / 52.0;
        let grid = AveragingGrid::new(t, 10).unwrap();
        let vol = VolumeParams::new(alpha, 0.00067, 10).unwrap();
        let m = vwap_moments_discrete(&mkt(), &vol, &grid, variant).unwrap();
        lognormal_vol(&m, t) / lognormal_vol(&asian_moments_discrete(&mkt(), &grid), t)
    }

    #[test]
    fn table2_alpha_half() {
        assert!((table2_ratio(0.5, MomentVariant::Exact) - 1.0351).abs() < 1e-4);
        assert!((table2_ratio(0.5, MomentVariant::Stace) - 1.1339).abs() < 1e-4);
        assert!((table2_ratio(1.0 / 1.2, MomentVariant::Stace) - 1.0823).abs() < 1e-4);
    }

    #[test]
    fn asymptotic_ratio_values() {
        let r = |a: f64| vwap_ratio_asymptotic(&VolumeParams::new(a, 1.0, 10).unwrap(), MomentVariant::Exact);
        assert!((r(50.0) - 1.0004).abs() < 5e-5);
        assert!((r(1.0) - 1.0193).abs() < 5e-5);
        let inf = VolumeParams::degenerate(10).unwrap();
        assert_eq!(vwap_ratio_asymptotic(&inf, MomentVariant::Exact), 1.0);
        assert_eq!(vwap_ratio_asymptotic(&inf, MomentVariant::Stace), 1.0);
        let big = VolumeParams::new(1e15, 1.0, 10).unwrap();
        assert!((vwap_ratio_asymptotic(&big, MomentVariant::Stace) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn asymptotic_ratio_close_to_full_pipeline() {
        for inv_alpha in [0.02, 0.2, 0.5, 0.75, 1.0, 1.2, 1.5, 1.8, 2.0] {
            let alpha = 1.0 / inv_alpha;
            for variant in [MomentVariant::Exact, MomentVariant::Stace] {
                let full = table2_ratio(alpha, variant);
                let asym = vwap_ratio_asymptotic(&VolumeParams::new(alpha, 1.0, 10).unwrap(), variant);
                assert!((full - asym).abs() < 5e-4, "1/α={inv_alpha}: {full} vs {asym}");
            }
        }
    }

    #[test]
    fn continuous_integrals_at_zero_rate() {
        // r = 0: E avg = S0, E avg S² = S0²(e^{σ²T}−1)/(σ²T)
        let mkt = MarketParams::new(50.0, 0.0, 0.3).unwrap();
        let t = 2.0;
        let ints = gbm_integral_moments(&mkt, t).unwrap();
        assert!((ints.mean_avg - 50.0).abs() < 1e-12);
        let s2t = 0.09 * t;
        assert!((ints.mean_sq_avg / 2500.0 - s2t.exp_m1() / s2t).abs() < 1e-14);
        // E avg² = 2 S0² (e^{σ²T} − 1 − σ²T) / (σ²T)²
        let expected = 2.0 * 2500.0 * (s2t.exp_m1() - s2t) / (s2t * s2t);
        assert!(((ints.mean_avg_sq - expected) / expected).abs() < 1e-12);
    }

    #[test]
    fn divided_difference_branches_agree() {
        for (a, b, t) in [(0.09, 0.05, 1.0), (0.0501, 0.05, 1.0), (1e-9, 0.0, 2.0), (0.3, 0.2999999, 5.0), (-0.04, -0.0400001, 0.5)] {
            // midpoint rule on ∫_0^T e^{bu} (e^{(a−b)u} − 1)/(a−b) du
            let m = 200_000;
            let h = t / m as f64;
            let quad: f64 = (0..m)
                .map(|k| {
                    let u = (k as f64 + 0.5) * h;
                    let d = (a - b) * u;
                    let ratio = if d.abs() < 1e-12 { 1.0 } else { d.exp_m1() / d };
                    u * (b * u).exp() * ratio * h
                })
                .sum();
            let got = growth_divided_difference(a, b, t);
            assert!(((got - quad) / quad).abs() < 1e-8, "a={a} b={b}: {got} vs {quad}");
        }
    }

    #[test]
    fn negative_rate_equal_to_minus_variance() {
        // r + σ² = 0 is a removable singularity of the closed form.
        let sigma: f64 = 0.2;
        let mkt = MarketParams::new(100.0, -sigma * sigma, sigma).unwrap();
        let near = MarketParams::new(100.0, -sigma * sigma + 1e-6, sigma).unwrap();
        let a = gbm_integral_moments(&mkt, 1.0).unwrap();
        let b = gbm_integral_moments(&near, 1.0).unwrap();
        assert!(a.mean_avg_sq.is_finite());
        assert!(((a.mean_avg_sq - b.mean_avg_sq) / a.mean_avg_sq).abs() < 1e-5);
    }

    #[test]
    fn continuous_is_limit_of_discrete() {
        let t = 0.5;
        let total_shape = 20.0;
        let cvol = ContinuousVolumeParams::new(total_shape / t, 1.0).unwrap();
        let n = 10_000;
        let grid = AveragingGrid::new(t, n).unwrap();
        let vol = VolumeParams::new(total_shape / n as f64, 1.0, n).unwrap();
        for variant in [MomentVariant::Exact, MomentVariant::Stace] {
            let c = vwap_moments_continuous(&mkt(), &cvol, t, variant).unwrap();
            let d = vwap_moments_discrete(&mkt(), &vol, &grid, variant).unwrap();
            assert!(((c.m1 - d.m1) / c.m1).abs() < 1e-3);
            assert!(((c.m2 - d.m2) / c.m2).abs() < 1e-3, "{variant:?}: {} vs {}", c.m2, d.m2);
        }
    }

    #[test]
    fn continuous_infinite_shape_is_asian() {
        let cvol = ContinuousVolumeParams::new(f64::INFINITY, 1.0).unwrap();
        let a = asian_moments_continuous(&mkt(), 0.3).unwrap();
        let v = vwap_moments_continuous(&mkt(), &cvol, 0.3, MomentVariant::Exact).unwrap();
        assert_eq!(a, v);
        let big = ContinuousVolumeParams::new(1e13, 1.0).unwrap();
        let v = vwap_moments_continuous(&mkt(), &big, 0.3, MomentVariant::Stace).unwrap();
        assert!(((v.m2 - a.m2) / a.m2).abs() < 1e-9);
    }

    #[test]
    fn continuous_ratio_small_maturity() {
        for a in [0.5, 2.0, 10.0] {
            for variant in [MomentVariant::Exact, MomentVariant::Stace] {
                let exp = continuous_ratio_expansion(&mkt(), a, variant);
                let t = 1e-3;
                let cvol = ContinuousVolumeParams::new(a / t, 1.0).unwrap();
                let v = vwap_moments_continuous(&mkt(), &cvol, t, variant).unwrap();
                let asian = asian_moments_continuous(&mkt(), t).unwrap();
                let ratio = lognormal_vol(&v, t) / lognormal_vol(&asian, t);
                assert!((ratio - exp.leading.sqrt()).abs() < 1e-4, "A={a} {variant:?}");
                // first-order term: residual is O(T²)
                assert!((ratio * ratio - exp.leading - exp.slope * t).abs() < 1e-6, "A={a} {variant:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn ordering_and_theta_invariance(
            sigma in 0.05f64..0.6,
            r in -0.02f64..0.12,
            t in 0.01f64..3.0,
            n in 1usize..120,
            alpha in 0.05f64..200.0,
            theta in 1e-4f64..1e6,
        ) {
            let mkt = MarketParams::new(100.0, r, sigma).unwrap();
            let grid = AveragingGrid::new(t, n).unwrap();
            let vol = VolumeParams::new(alpha, theta, n).unwrap();
            let vol2 = VolumeParams::new(alpha, theta * 37.0, n).unwrap();
            let exact = vwap_moments_discrete_exact(&mkt, &vol, &grid).unwrap();
            let stace = vwap_moments_discrete_stace(&mkt, &vol, &grid).unwrap();
            let asian = asian_moments_discrete(&mkt, &grid);
            prop_assert_eq!(exact, vwap_moments_discrete_exact(&mkt, &vol2, &grid).unwrap());
            prop_assert_eq!(exact.m1, asian.m1);
            prop_assert_eq!(stace.m1, asian.m1);
            prop_assert!(stace.m2 > exact.m2);
            if n > 1 {
                prop_assert!(exact.m2 > asian.m2);
                let more = VolumeParams::new(alpha * 1.5, theta, n).unwrap();
                prop_assert!(vwap_moments_discrete_exact(&mkt, &more, &grid).unwrap().m2 < exact.m2);
            }
        }
    }
}
