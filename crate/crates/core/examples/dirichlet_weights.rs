// Moments of the normalised volume weights and the leading-order
// volatility ratio they imply.

use vwap_gamma::{dirichlet_moments, vwap_ratio_asymptotic, MomentVariant, VolumeParams};

pub fn run_example() -> vwap_gamma::Result<()> {
    println!("{:>6} {:>12} {:>13} {:>9} {:>9}", "alpha", "Var X", "Cov XiXj", "R exact", "R stace");
    for alpha in [0.5, 1.0, 10.0, 50.0, f64::INFINITY] {
        let vol = VolumeParams::new(alpha, 1.0, 10)?;
        let m = dirichlet_moments(&vol);
        println!(
            "{alpha:>6} {:>12.4e} {:>13.4e} {:>9.5} {:>9.5}",
            m.var_x,
            m.cov_xixj,
            vwap_ratio_asymptotic(&vol, MomentVariant::Exact),
            vwap_ratio_asymptotic(&vol, MomentVariant::Stace)
        );
    }
    Ok(())
}

fn main() -> vwap_gamma::Result<()> {
    run_example()
}
