// Asian vs VWAP prices for the reference ATM contracts, plus one custom
// contract priced directly.

use vwap_gamma::reproduce::{table3, TABLE3_CASES};
use vwap_gamma::{compare_prices, AveragingGrid, MarketParams, OptionKind, OptionSpec, VolumeParams};

pub fn run_example() -> vwap_gamma::Result<()> {
    println!("{:>5} {:>7} {:>5} {:>3} {:>9} {:>9} {:>8} {:>8} {:>7}", "kind", "T", "alpha", "N", "vol_AA%", "vol_VW%", "P_AA", "P_VW", "gap%");
    for (case, row) in TABLE3_CASES.iter().zip(table3()?) {
        println!(
            "{:>5} {:>7.4} {:>5} {:>3} {:>9.3} {:>9.3} {:>8.4} {:>8.4} {:>7.3}",
            case.kind,
            row.maturity,
            row.alpha,
            row.n_buckets,
            100.0 * row.vol_asian,
            100.0 * row.vol_exact,
            row.price_asian,
            row.price_exact,
            100.0 * row.relative_gap
        );
    }

    // a three-month OTM put on a daily VWAP with noisy volume
    let t = 0.25;
    let mkt = MarketParams::new(50.0, 0.03, 0.35)?;
    let grid = AveragingGrid::new(t, 63)?;
    let vol = VolumeParams::new(2.0, 1.0, 63)?;
    let spec = OptionSpec::new(47.5, t, OptionKind::Put)?;
    let c = compare_prices(&mkt, &vol, &grid, &spec)?;
    println!("\ncustom put: asian {:.4}  vwap {:.4}  stace {:.4}", c.price_asian, c.price_exact, c.price_stace);
    Ok(())
}

fn main() -> vwap_gamma::Result<()> {
    run_example()
}
