// Correlation between cumulative day volume and the current bar, per
// time-of-day bucket. Under independence bucket i sits near 1/√i.

use chrono::NaiveDate;
use vwap_gamma::analytics::{intraday_cum_incr_correlation, synthetic_series};

pub fn run_example() -> vwap_gamma::Result<()> {
    let start = NaiveDate::from_ymd_opt(2013, 2, 15).expect("date");
    let series = synthetic_series(1.0, 0.2e6, 38 * 120, 38, 3, start)?;
    let band = 2.0 / (series.complete_days() as f64).sqrt();
    for c in intraday_cum_incr_correlation(&series)?.iter().step_by(4) {
        let iid = 1.0 / (c.bucket_index as f64).sqrt();
        println!("bucket {:>2}: {:+.3}  (independent {:.3} ± {:.3})", c.bucket_index, c.correlation, iid, band);
    }
    Ok(())
}

fn main() -> vwap_gamma::Result<()> {
    run_example()
}
