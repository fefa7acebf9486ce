//! The two reference tables: implied-vol ratios across volume shapes, and
//! Asian vs VWAP prices for a handful of contracts.

use serde::Serialize;

use crate::error::Result;
use crate::mc::{closed_form_ratios, mc_ratio_table, McConfig, RatioRow};
use crate::moments::MarketParams;
use crate::pricer::{compare_prices, OptionKind, OptionSpec, PriceComparison};
use crate::volume::{AveragingGrid, VolumeParams};

pub const TABLE2_THETA: f64 = 0.00067;
pub const TABLE2_BUCKETS: usize = 10;
/// 1/α per row; 0 is the equal-weight limit.
pub const TABLE2_INV_ALPHAS: [f64; 10] = [0.0, 0.02, 0.2, 0.5, 0.75, 1.0, 1.2, 1.5, 1.8, 2.0];

pub const TRADING_DAYS: f64 = 252.0;

pub fn reference_market() -> MarketParams {
    MarketParams::new(100.0, 0.05, 0.2).expect("valid market")
}

pub fn table2_grid() -> AveragingGrid {
    AveragingGrid::new(2.0 / 52.0, TABLE2_BUCKETS).expect("valid grid")
}

/// ATM call on the two-week average.
pub fn table2_spec() -> OptionSpec {
    OptionSpec::new(100.0, 2.0 / 52.0, OptionKind::Call).expect("valid option")
}

pub fn table2_alphas() -> Vec<f64> {
    TABLE2_INV_ALPHAS.iter().map(|&x| if x == 0.0 { f64::INFINITY } else { 1.0 / x }).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Table2Row {
    pub inv_alpha: f64,
    pub alpha: f64,
    pub r_exact: f64,
    pub r_stace: f64,
}

pub fn table2_closed_form() -> Result<Vec<Table2Row>> {
    let mkt = reference_market();
    let grid = table2_grid();
    TABLE2_INV_ALPHAS
        .iter()
        .zip(table2_alphas())
        .map(|(&inv_alpha, alpha)| {
            let vol = VolumeParams::new(alpha, TABLE2_THETA, TABLE2_BUCKETS)?;
            let (r_exact, r_stace) = closed_form_ratios(&mkt, &vol, &grid)?;
            Ok(Table2Row { inv_alpha, alpha, r_exact, r_stace })
        })
        .collect()
}

pub fn table2_mc(cfg: &McConfig) -> Result<Vec<RatioRow>> {
    mc_ratio_table(&reference_market(), &table2_grid(), &table2_spec(), cfg, TABLE2_THETA, &table2_alphas())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Table3Case {
    pub kind: OptionKind,
    pub alpha: f64,
    pub n_buckets: usize,
}

impl Table3Case {
    /// One averaging point per trading day.
    pub fn maturity(&self) -> f64 {
        self.n_buckets as f64 / TRADING_DAYS
    }
}

pub const TABLE3_CASES: [Table3Case; 7] = [
    Table3Case { kind: OptionKind::Put, alpha: 10.0, n_buckets: 80 },
    Table3Case { kind: OptionKind::Call, alpha: 10.0, n_buckets: 80 },
    Table3Case { kind: OptionKind::Put, alpha: 10.0, n_buckets: 20 },
    Table3Case { kind: OptionKind::Call, alpha: 10.0, n_buckets: 20 },
    Table3Case { kind: OptionKind::Put, alpha: 10.0, n_buckets: 5 },
    Table3Case { kind: OptionKind::Call, alpha: 10.0, n_buckets: 5 },
    Table3Case { kind: OptionKind::Put, alpha: 5.0, n_buckets: 5 },
];

/// ATM contracts, S = K = 100.
pub fn table3() -> Result<Vec<PriceComparison>> {
    let mkt = reference_market();
    TABLE3_CASES
        .iter()
        .map(|case| {
            let t = case.maturity();
            let grid = AveragingGrid::new(t, case.n_buckets)?;
            let vol = VolumeParams::new(case.alpha, 1.0, case.n_buckets)?;
            let spec = OptionSpec::new(100.0, t, case.kind)?;
            compare_prices(&mkt, &vol, &grid, &spec)
        })
        .collect()
}
