//! Monte Carlo pricing of VWAP and arithmetic-average options under GBM
//! prices and i.i.d. gamma bucket volumes.
//!
//! Paths are split into fixed-size blocks; block `b` draws from
//! `RngStream::new(seed, b)`, accumulates with compensated sums, and blocks
//! are reduced in index order. The result therefore depends only on
//! `(seed, block_size, n_paths)`, never on the number of worker threads.
//! Every path feeds both the VWAP and the plain-average payoff (common random
//! numbers).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{asian_moments_discrete, vwap_moments_discrete, MarketParams, MomentPair, MomentVariant};
use crate::pricer::{black_vega, check_maturity, implied_vol_from_price, match_moments_to_black, OptionSpec};
use crate::rng::{GammaSampler, RngStream};
use crate::volume::{AveragingGrid, VolumeParams};

pub const DEFAULT_PATHS: usize = 1_000_000;
pub const DEFAULT_BLOCK_SIZE: usize = 8_192;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub n_paths: usize,
    pub seed: u64,
    pub block_size: usize,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { n_paths: DEFAULT_PATHS, seed: 0, block_size: DEFAULT_BLOCK_SIZE, workers: None }
    }
}

impl McConfig {
    pub fn new(n_paths: usize, seed: u64) -> Self {
        McConfig { n_paths, seed, ..Default::default() }
    }

    pub fn with_workers(self, workers: usize) -> Self {
        McConfig { workers: Some(workers), ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(Error::param("n_paths", "must be at least 1"));
        }
        if self.block_size == 0 {
            return Err(Error::param("block_size", "must be at least 1"));
        }
        if self.workers == Some(0) {
            return Err(Error::param("workers", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub price: f64,
    pub std_error: f64,
    pub n_paths: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Averaging {
    Vwap,
    Asian,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PathAverages {
    pub vwap: f64,
    pub arith_avg: f64,
}

/// Per-path generator with the GBM step constants and gamma sampler
/// precomputed.
#[derive(Clone, Copy, Debug)]
pub struct PathSimulator {
    s0: f64,
    drift: f64,
    diffusion: f64,
    n_buckets: usize,
    volume: Option<GammaSampler>,
}

impl PathSimulator {
    pub fn new(mkt: &MarketParams, vol: &VolumeParams, grid: &AveragingGrid) -> Result<Self> {
        grid.check_matches(vol)?;
        let dt = grid.dt();
        let sigma = mkt.sigma();
        let volume = if vol.is_degenerate() { None } else { Some(GammaSampler::new(vol.alpha(), vol.theta())?) };
        Ok(PathSimulator {
            s0: mkt.s0(),
            drift: (mkt.r() - 0.5 * sigma * sigma) * dt,
            diffusion: sigma * dt.sqrt(),
            n_buckets: grid.n_buckets(),
            volume,
        })
    }

    pub fn simulate(&self, stream: &mut RngStream) -> PathAverages {
        let mut log_s = self.s0.ln();
        let mut weighted = 0.0;
        let mut total_volume = 0.0;
        let mut plain = 0.0;
        for _ in 0..self.n_buckets {
            log_s += self.drift + self.diffusion * stream.sample_standard_normal();
            let s = log_s.exp();
            let v = match &self.volume {
                Some(sampler) => sampler.sample(stream),
                None => 1.0,
            };
            weighted += s * v;
            total_volume += v;
            plain += s;
        }
        PathAverages { vwap: weighted / total_volume, arith_avg: plain / self.n_buckets as f64 }
    }
}

/// One path: exact lognormal increments for prices, gamma draws for volumes.
pub fn simulate_path(
    stream: &mut RngStream,
    mkt: &MarketParams,
    vol: &VolumeParams,
    grid: &AveragingGrid,
) -> Result<PathAverages> {
    Ok(PathSimulator::new(mkt, vol, grid)?.simulate(stream))
}

/// Kahan-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

/// Per-path features: the two payoffs, then the two averages shifted by the
/// spot and their squares (shifting keeps the moment sums well conditioned).
const N_FEATURES: usize = 6;
const N_PRODUCTS: usize = N_FEATURES * (N_FEATURES + 1) / 2;

#[derive(Clone, Copy, Debug, Default)]
struct BlockStats {
    paths: usize,
    sums: [KahanSum; N_FEATURES],
    products: [KahanSum; N_PRODUCTS],
    clamped: u64,
}

impl BlockStats {
    fn add_path(&mut self, f: &[f64; N_FEATURES]) {
        let mut k = 0;
        for i in 0..N_FEATURES {
            self.sums[i].add(f[i]);
            for j in i..N_FEATURES {
                self.products[k].add(f[i] * f[j]);
                k += 1;
            }
        }
        self.paths += 1;
    }

    fn merge(&mut self, other: &BlockStats) {
        self.paths += other.paths;
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            a.add(b.value());
        }
        for (a, b) in self.products.iter_mut().zip(&other.products) {
            a.add(b.value());
        }
        self.clamped += other.clamped;
    }

    fn means(&self) -> [f64; N_FEATURES] {
        let n = self.paths as f64;
        self.sums.map(|s| s.value() / n)
    }

    /// Covariance matrix of the feature means (sample covariance / n).
    fn mean_covariance(&self) -> [[f64; N_FEATURES]; N_FEATURES] {
        let n = self.paths as f64;
        let mean = self.means();
        let denom = if self.paths > 1 { n - 1.0 } else { 1.0 };
        let mut cov = [[0.0; N_FEATURES]; N_FEATURES];
        let mut k = 0;
        for i in 0..N_FEATURES {
            for j in i..N_FEATURES {
                let c = (self.products[k].value() - n * mean[i] * mean[j]) / denom / n;
                cov[i][j] = c;
                cov[j][i] = c;
                k += 1;
            }
        }
        cov
    }
}

fn run_block(sim: &PathSimulator, spec: &OptionSpec, cfg: &McConfig, block: usize) -> BlockStats {
    let start = block * cfg.block_size;
    let end = (start + cfg.block_size).min(cfg.n_paths);
    let mut stream = RngStream::new(cfg.seed, block as u64);
    let mut stats = BlockStats::default();
    for _ in start..end {
        let avg = sim.simulate(&mut stream);
        let yv = avg.vwap - sim.s0;
        let ya = avg.arith_avg - sim.s0;
        stats.add_path(&[spec.payoff(avg.vwap), spec.payoff(avg.arith_avg), yv, yv * yv, ya, ya * ya]);
    }
    stats.clamped = stream.clamped_gamma_count();
    stats
}

fn run_paths(sim: &PathSimulator, spec: &OptionSpec, cfg: &McConfig) -> Result<BlockStats> {
    let n_blocks = cfg.n_paths.div_ceil(cfg.block_size);
    let simulate = || -> Vec<BlockStats> {
        (0..n_blocks).into_par_iter().map(|b| run_block(sim, spec, cfg, b)).collect()
    };
    let blocks = match cfg.workers {
        None => simulate(),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::param("workers", e.to_string()))?
            .install(simulate),
    };
    let mut total = BlockStats::default();
    for b in &blocks {
        total.merge(b);
    }
    Ok(total)
}

/// Sample mean and variance of the simulated VWAP and plain average, with
/// the covariance of the underlying moment estimators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McMoments {
    pub vwap: MomentPair,
    pub asian: MomentPair,
    shift: f64,
    /// Means of (y_v, y_v², y_a, y_a²) with y = average − shift.
    raw: [f64; 4],
    raw_cov: [[f64; 4]; 4],
}

/// Discounted VWAP and plain-average prices from common paths.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McPair {
    pub vwap: McEstimate,
    pub asian: McEstimate,
    /// Covariance of the two price estimators.
    pub covariance: f64,
    pub moments: McMoments,
    /// Gamma draws that underflowed and were clamped.
    pub clamped_gamma: u64,
}

pub fn mc_price_pair(
    mkt: &MarketParams,
    vol: &VolumeParams,
    grid: &AveragingGrid,
    spec: &OptionSpec,
    cfg: &McConfig,
) -> Result<McPair> {
    cfg.validate()?;
    check_maturity(grid, spec)?;
    let sim = PathSimulator::new(mkt, vol, grid)?;
    let stats = run_paths(&sim, spec, cfg)?;

    let n = stats.paths as f64;
    let df = (-mkt.r() * spec.maturity()).exp();
    let mean = stats.means();
    let cov = stats.mean_covariance();

    let estimate = |i: usize| McEstimate {
        price: df * mean[i],
        std_error: df * cov[i][i].max(0.0).sqrt(),
        n_paths: stats.paths,
    };
    let pair_moments = |m: usize| {
        let m1 = sim.s0 + mean[m];
        let var = (mean[m + 1] - mean[m] * mean[m]) * n / (n - 1.0).max(1.0);
        MomentPair { m1, m2: var.max(0.0) }
    };
    let mut raw_cov = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            raw_cov[i][j] = cov[i + 2][j + 2];
        }
    }
    Ok(McPair {
        vwap: estimate(0),
        asian: estimate(1),
        covariance: df * df * cov[0][1],
        moments: McMoments {
            vwap: pair_moments(2),
            asian: pair_moments(4),
            shift: sim.s0,
            raw: [mean[2], mean[3], mean[4], mean[5]],
            raw_cov,
        },
        clamped_gamma: stats.clamped,
    })
}

pub fn mc_price(
    mkt: &MarketParams,
    vol: &VolumeParams,
    grid: &AveragingGrid,
    spec: &OptionSpec,
    cfg: &McConfig,
    which: Averaging,
) -> Result<McEstimate> {
    let pair = mc_price_pair(mkt, vol, grid, spec, cfg)?;
    Ok(match which {
        Averaging::Vwap => pair.vwap,
        Averaging::Asian => pair.asian,
    })
}

/// Ratio of Monte Carlo effective volatilities, VWAP over plain average.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McRatio {
    pub vol_vwap: f64,
    pub vol_asian: f64,
    pub ratio: f64,
    /// Delta-method standard error using the paired covariance.
    pub std_error: f64,
}

/// Lognormal-matched volatilities of the simulated VWAP and plain-average
/// moments, the Monte Carlo counterpart of the closed-form ratio.
pub fn mc_moment_ratio(pair: &McPair, maturity: f64) -> Result<McRatio> {
    let m = &pair.moments;
    let vol_vwap = match_moments_to_black(&m.vwap, maturity)?.effective_vol;
    let vol_asian = match_moments_to_black(&m.asian, maturity)?.effective_vol;
    if !(vol_asian > 0.0) {
        return Err(Error::DegenerateData("simulated plain average has zero variance".into()));
    }
    let ratio = vol_vwap / vol_asian;
    // ln R = ½ ln L_v − ½ ln L_a with L = ln(1 + var/m1²), m1 = shift + μ1,
    // var = μ2 − μ1²
    let grad = |mu1: f64, mu2: f64| -> [f64; 2] {
        let m1 = m.shift + mu1;
        let var = mu2 - mu1 * mu1;
        let q = var / (m1 * m1);
        let l = q.ln_1p();
        if !(l > 0.0) {
            return [0.0, 0.0];
        }
        let scale = 0.5 / (l * (1.0 + q));
        [scale * (-2.0 * (mu1 * m1 + var) / (m1 * m1 * m1)), scale / (m1 * m1)]
    };
    let gv = grad(m.raw[0], m.raw[1]);
    let ga = grad(m.raw[2], m.raw[3]);
    let g = [gv[0], gv[1], -ga[0], -ga[1]];
    let mut var = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            var += g[i] * m.raw_cov[i][j] * g[j];
        }
    }
    Ok(McRatio { vol_vwap, vol_asian, ratio, std_error: ratio * var.max(0.0).sqrt() })
}

/// Black volatilities implied by both MC prices against the common forward.
/// The VWAP is not lognormal, so this differs from [`mc_moment_ratio`].
pub fn mc_vol_ratio(pair: &McPair, forward: f64, spec: &OptionSpec, rate: f64) -> Result<McRatio> {
    let vol_vwap = implied_vol_from_price(pair.vwap.price, forward, spec, rate)?;
    let vol_asian = implied_vol_from_price(pair.asian.price, forward, spec, rate)?;
    let ratio = vol_vwap / vol_asian;
    let g_v = 1.0 / (vol_asian * black_vega(forward, vol_vwap, spec, rate));
    let g_a = -ratio / (vol_asian * black_vega(forward, vol_asian, spec, rate));
    let var = g_v * g_v * pair.vwap.std_error.powi(2)
        + g_a * g_a * pair.asian.std_error.powi(2)
        + 2.0 * g_v * g_a * pair.covariance;
    Ok(McRatio { vol_vwap, vol_asian, ratio, std_error: var.max(0.0).sqrt() })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub inv_alpha: f64,
    pub alpha: f64,
    pub r_exact: f64,
    pub r_stace: f64,
    /// Moment-matched MC ratio, comparable with `r_exact`.
    pub r_mc: f64,
    pub r_mc_std_error: f64,
    /// Ratio of vols implied from the MC option prices.
    pub r_mc_price: f64,
    pub r_mc_price_std_error: f64,
    /// (r_stace − 1)/(r_mc − 1); undefined when the MC ratio is exactly 1.
    pub stace_error_ratio: Option<f64>,
    pub vwap: McEstimate,
    pub asian: McEstimate,
}

/// Closed-form ratios from the full discrete moments, exact and approximate.
pub fn closed_form_ratios(mkt: &MarketParams, vol: &VolumeParams, grid: &AveragingGrid) -> Result<(f64, f64)> {
    let t = grid.maturity();
    let asian = match_moments_to_black(&asian_moments_discrete(mkt, grid), t)?.effective_vol;
    let ratio = |variant| -> Result<f64> {
        let m = vwap_moments_discrete(mkt, vol, grid, variant)?;
        Ok(match_moments_to_black(&m, t)?.effective_vol / asian)
    };
    Ok((ratio(MomentVariant::Exact)?, ratio(MomentVariant::Stace)?))
}

/// One row per α: closed-form ratios next to the Monte Carlo ratio.
/// `f64::INFINITY` in `alphas` gives the equal-weight row.
pub fn mc_ratio_table(
    mkt: &MarketParams,
    grid: &AveragingGrid,
    spec: &OptionSpec,
    cfg: &McConfig,
    theta: f64,
    alphas: &[f64],
) -> Result<Vec<RatioRow>> {
    if alphas.is_empty() {
        return Err(Error::param("alphas", "need at least one shape"));
    }
    let forward = asian_moments_discrete(mkt, grid).m1;
    alphas
        .iter()
        .map(|&alpha| {
            let vol = VolumeParams::new(alpha, theta, grid.n_buckets())?;
            let (r_exact, r_stace) = closed_form_ratios(mkt, &vol, grid)?;
            let pair = mc_price_pair(mkt, &vol, grid, spec, cfg)?;
            let mc = mc_moment_ratio(&pair, grid.maturity())?;
            let by_price = mc_vol_ratio(&pair, forward, spec, mkt.r())?;
            let stace_error_ratio = (mc.ratio != 1.0).then(|| (r_stace - 1.0) / (mc.ratio - 1.0));
            Ok(RatioRow {
                inv_alpha: 1.0 / alpha,
                alpha,
                r_exact,
                r_stace,
                r_mc: mc.ratio,
                r_mc_std_error: mc.std_error,
                r_mc_price: by_price.ratio,
                r_mc_price_std_error: by_price.std_error,
                stace_error_ratio,
                vwap: pair.vwap,
                asian: pair.asian,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pricer::{price_vwap, OptionKind, PricingVariant};

    fn table2_setup() -> (MarketParams, AveragingGrid, OptionSpec) {
        let t = 2.0 / 52.0;
        (
            MarketParams::new(100.0, 0.05, 0.2).unwrap(),
            AveragingGrid::new(t, 10).unwrap(),
            OptionSpec::new(100.0, t, OptionKind::Call).unwrap(),
        )
    }

    #[test]
    fn flat_price_paths_are_deterministic() {
        let mkt = MarketParams::new(100.0, 0.0, 1e-13).unwrap();
        let grid = AveragingGrid::new(1.0, 12).unwrap();
        let vol = VolumeParams::new(0.7, 1.0, 12).unwrap();
        let expected = 100.0;
        let mut stream = RngStream::new(5, 0);
        for _ in 0..100 {
            let avg = simulate_path(&mut stream, &mkt, &vol, &grid).unwrap();
            assert!(((avg.vwap - expected) / expected).abs() < 1e-11);
            assert!(((avg.arith_avg - expected) / expected).abs() < 1e-11);
        }
    }

    #[test]
    fn huge_alpha_weights_are_equal() {
        let (mkt, grid, _) = table2_setup();
        let vol = VolumeParams::new(1e12, 0.00067, 10).unwrap();
        let mut stream = RngStream::new(9, 0);
        for _ in 0..1000 {
            let avg = simulate_path(&mut stream, &mkt, &vol, &grid).unwrap();
            assert!(((avg.vwap - avg.arith_avg) / avg.arith_avg).abs() < 1e-6);
        }
    }

    #[test]
    fn single_bucket_vwap_is_spot() {
        let mkt = MarketParams::new(100.0, 0.05, 0.3).unwrap();
        let grid = AveragingGrid::new(0.5, 1).unwrap();
        let vol = VolumeParams::new(0.3, 2.0, 1).unwrap();
        let mut stream = RngStream::new(1, 1);
        for _ in 0..1000 {
            let avg = simulate_path(&mut stream, &mkt, &vol, &grid).unwrap();
            assert!((avg.vwap - avg.arith_avg).abs() <= 4.0 * f64::EPSILON * avg.arith_avg);
        }
    }

    #[test]
    fn degenerate_volume_matches_closed_form_asian() {
        let (mkt, grid, spec) = table2_setup();
        let vol = VolumeParams::new(1e12, 0.00067, 10).unwrap();
        let cfg = McConfig::new(400_000, 17);
        let est = mc_price(&mkt, &vol, &grid, &spec, &cfg, Averaging::Vwap).unwrap();
        let cf = price_vwap(&mkt, &vol, &grid, &spec, PricingVariant::Asian).unwrap();
        assert!((est.price - cf.price).abs() < 3.0 * est.std_error, "{} ± {} vs {}", est.price, est.std_error, cf.price);
    }

    #[test]
    fn repeat_runs_bit_identical() {
        let (mkt, grid, spec) = table2_setup();
        let vol = VolumeParams::new(0.5, 0.00067, 10).unwrap();
        let cfg = McConfig { n_paths: 50_000, seed: 3, block_size: 1000, workers: None };
        let a = mc_price_pair(&mkt, &vol, &grid, &spec, &cfg).unwrap();
        let b = mc_price_pair(&mkt, &vol, &grid, &spec, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn worker_count_does_not_change_result() {
        let (mkt, grid, spec) = table2_setup();
        let vol = VolumeParams::new(0.5, 0.00067, 10).unwrap();
        let base = McConfig { n_paths: 60_001, seed: 8, block_size: 777, workers: Some(1) };
        let one = mc_price_pair(&mkt, &vol, &grid, &spec, &base).unwrap();
        for w in [2, 8] {
            let other = mc_price_pair(&mkt, &vol, &grid, &spec, &base.with_workers(w)).unwrap();
            assert_eq!(one, other, "workers = {w}");
        }
        assert_eq!(one.vwap.n_paths, 60_001);
    }

    #[test]
    fn config_validation() {
        assert!(McConfig { n_paths: 0, ..Default::default() }.validate().is_err());
        assert!(McConfig { block_size: 0, ..Default::default() }.validate().is_err());
        assert!(McConfig::default().with_workers(0).validate().is_err());
        let (mkt, grid, spec) = table2_setup();
        let vol = VolumeParams::new(0.5, 1.0, 10).unwrap();
        assert!(mc_ratio_table(&mkt, &grid, &spec, &McConfig::new(10, 0), 1.0, &[]).is_err());
        assert!(mc_price_pair(&mkt, &vol, &grid, &spec, &McConfig::new(0, 0)).is_err());
    }

    #[test]
    fn standard_error_scales_with_paths() {
        let (mkt, grid, spec) = table2_setup();
        let vol = VolumeParams::new(0.5, 0.00067, 10).unwrap();
        let se = |n| mc_price(&mkt, &vol, &grid, &spec, &McConfig::new(n, 21), Averaging::Vwap).unwrap().std_error;
        let (a, b, c) = (se(10_000), se(100_000), se(1_000_000));
        let root10 = 10f64.sqrt();
        assert!((a / b / root10 - 1.0).abs() < 0.1, "{a} {b}");
        assert!((b / c / root10 - 1.0).abs() < 0.1, "{b} {c}");
    }

    #[test]
    fn infinite_alpha_row_is_unity() {
        let (mkt, grid, spec) = table2_setup();
        let rows = mc_ratio_table(&mkt, &grid, &spec, &McConfig::new(20_000, 1), 0.00067, &[f64::INFINITY]).unwrap();
        let row = rows[0];
        assert_eq!(row.inv_alpha, 0.0);
        assert_eq!(row.r_exact, 1.0);
        assert_eq!(row.r_stace, 1.0);
        assert_eq!(row.r_mc, 1.0);
        assert_eq!(row.stace_error_ratio, None);
    }

    // Oracle: closed-form discrete moments.
    #[test]
    fn simulated_moments_match_closed_form() {
        let (mkt, grid, spec) = table2_setup();
        let vol = VolumeParams::new(0.5, 0.00067, 10).unwrap();
        let pair = mc_price_pair(&mkt, &vol, &grid, &spec, &McConfig::new(400_000, 31)).unwrap();
        let exact = vwap_moments_discrete(&mkt, &vol, &grid, MomentVariant::Exact).unwrap();
        let m = pair.moments;
        let se_m1 = m.raw_cov[0][0].sqrt();
        assert!((m.vwap.m1 - exact.m1).abs() < 3.0 * se_m1, "{m:?}");
        let se_m2 = (m.raw_cov[1][1] + 4.0 * m.raw[0].powi(2) * m.raw_cov[0][0]).sqrt() + 2.0 * m.raw[0].abs() * se_m1;
        assert!((m.vwap.m2 - exact.m2).abs() < 3.0 * se_m2, "{} vs {}", m.vwap.m2, exact.m2);
        let ratio = mc_moment_ratio(&pair, grid.maturity()).unwrap();
        let (r_exact, _) = closed_form_ratios(&mkt, &vol, &grid).unwrap();
        assert!((ratio.ratio - r_exact).abs() < 3.0 * ratio.std_error, "{ratio:?} vs {r_exact}");
        assert!(ratio.std_error > 0.0 && ratio.std_error < 2e-3);
    }

    #[test]
    fn ratio_error_matches_spread_across_seeds() {
        let (mkt, grid, spec) = table2_setup();
        let vol = VolumeParams::new(1.0, 0.00067, 10).unwrap();
        let runs: Vec<McRatio> = (0..40)
            .map(|seed| {
                let pair = mc_price_pair(&mkt, &vol, &grid, &spec, &McConfig::new(20_000, 1000 + seed)).unwrap();
                mc_moment_ratio(&pair, grid.maturity()).unwrap()
            })
            .collect();
        let n = runs.len() as f64;
        let mean = runs.iter().map(|r| r.ratio).sum::<f64>() / n;
        let spread = (runs.iter().map(|r| (r.ratio - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        let reported = runs.iter().map(|r| r.std_error).sum::<f64>() / n;
        // sample sd of 40 draws is within ~25% of the truth
        assert!((spread / reported - 1.0).abs() < 0.3, "spread {spread} reported {reported}");
    }
}
