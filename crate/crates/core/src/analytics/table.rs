use serde::{Deserialize, Serialize};

use super::fit::fit_gamma_mle;
use super::gof::gof_pvalues;
use super::series::{amalgamate_with, AmalgamationMode, VolumeSeries};
use super::stats::autocorrelation;
use crate::error::{Error, Result};

/// One row of the goodness-of-fit table, for amalgamation level L.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub level: usize,
    pub theta_hat: f64,
    pub alpha_hat: f64,
    pub alpha_per_l: f64,
    pub autocorr: f64,
    pub p_ad: f64,
    pub p_ks: f64,
    pub stat_ad: f64,
    pub stat_ks: f64,
    pub n_points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GofOptions {
    pub n_boot: usize,
    pub seed: u64,
    pub lag: usize,
    pub mode: AmalgamationMode,
}

impl Default for GofOptions {
    fn default() -> Self {
        GofOptions { n_boot: 1000, seed: 0, lag: 1, mode: AmalgamationMode::Contiguous }
    }
}

impl GofOptions {
    pub fn new(n_boot: usize, seed: u64) -> Self {
        GofOptions { n_boot, seed, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GofTable {
    pub method: String,
    pub options: GofOptions,
    pub rows: Vec<GofReport>,
}

pub fn gof_report(series: &VolumeSeries, level: usize, opts: &GofOptions) -> Result<GofReport> {
    let data = amalgamate_with(series, level, opts.mode)?;
    if data.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "level {level} leaves {} amalgamated point(s), need at least 2",
            data.len()
        )));
    }
    let fit = fit_gamma_mle(&data)?;
    let autocorr = autocorrelation(&data, opts.lag)?;
    // distinct bootstrap streams per level
    let seed = opts.seed.wrapping_add((level as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let gof = gof_pvalues(&data, fit.alpha_hat, fit.theta_hat, opts.n_boot, seed)?;
    Ok(GofReport {
        level,
        theta_hat: fit.theta_hat,
        alpha_hat: fit.alpha_hat,
        alpha_per_l: fit.alpha_hat / level as f64,
        autocorr,
        p_ad: gof.p_ad,
        p_ks: gof.p_ks,
        stat_ad: gof.stat_ad,
        stat_ks: gof.stat_ks,
        n_points: data.len(),
    })
}

pub fn build_gof_table(series: &VolumeSeries, levels: &[usize], opts: &GofOptions) -> Result<GofTable> {
    if levels.is_empty() {
        return Err(Error::param("levels", "must not be empty"));
    }
    let rows = levels.iter().map(|&l| gof_report(series, l, opts)).collect::<Result<Vec<_>>>()?;
    Ok(GofTable { method: "mle".into(), options: *opts, rows })
}
