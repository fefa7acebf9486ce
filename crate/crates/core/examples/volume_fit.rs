// Gamma diagnostics on a synthetic volume file: amalgamate, fit, test.
// For true gamma bars θ̂ stays put and α̂/L stays near the bar shape.

use chrono::NaiveDate;
use vwap_gamma::analytics::{build_gof_table, synthetic_series, GofOptions, VolumeSeries};

pub fn run_example() -> vwap_gamma::Result<()> {
    let start = NaiveDate::from_ymd_opt(2013, 2, 15).expect("date");
    let series = synthetic_series(1.0, 0.2e6, 5130, 38, 20_130_215, start)?;

    // through the CSV format and back
    let mut csv = Vec::new();
    series.write_csv(&mut csv)?;
    let series = VolumeSeries::read_csv(csv.as_slice(), None)?;
    println!("{} bars over {} days", series.len(), series.days().len());

    let table = build_gof_table(&series, &[1, 5, 10, 20, 40], &GofOptions::new(200, 1))?;
    println!("{:>3} {:>6} {:>10} {:>8} {:>6} {:>7} {:>6} {:>6}", "L", "n", "theta/1e6", "alpha", "a/L", "C_auto", "P_AD", "P_KS");
    for r in &table.rows {
        println!(
            "{:>3} {:>6} {:>10.3} {:>8.2} {:>6.2} {:>7.3} {:>6.3} {:>6.3}",
            r.level,
            r.n_points,
            r.theta_hat / 1e6,
            r.alpha_hat,
            r.alpha_per_l,
            r.autocorr,
            r.p_ad,
            r.p_ks
        );
    }
    Ok(())
}

fn main() -> vwap_gamma::Result<()> {
    run_example()
}
