// Continuous-averaging limit: discrete moments converge as N grows with
// αN fixed, and the short-maturity ratio approaches √((3+2A)/(2+2A)).

use vwap_gamma::moments::{continuous_ratio_expansion, vwap_moments_continuous};
use vwap_gamma::pricer::match_moments_to_black;
use vwap_gamma::moments::asian_moments_continuous;
use vwap_gamma::{
    vwap_moments_discrete, AveragingGrid, ContinuousVolumeParams, MarketParams, MomentVariant, VolumeParams,
};

pub fn run_example() -> vwap_gamma::Result<()> {
    let mkt = MarketParams::new(100.0, 0.05, 0.2)?;
    let t = 0.5;
    let cvol = ContinuousVolumeParams::new(4.0, 1.0)?; // A = ᾱT = 2
    let cont = vwap_moments_continuous(&mkt, &cvol, t, MomentVariant::Exact)?;
    println!("continuous: M1 {:.6}  M2 {:.6}", cont.m1, cont.m2);
    for n in [10, 100, 1000, 10_000] {
        let grid = AveragingGrid::new(t, n)?;
        let vol = VolumeParams::new(cvol.total_shape(t) / n as f64, 1.0, n)?;
        let d = vwap_moments_discrete(&mkt, &vol, &grid, MomentVariant::Exact)?;
        println!("N = {n:>5}:  M1 {:.6}  M2 {:.6}  rel.err {:.2e}", d.m1, d.m2, (d.m2 / cont.m2 - 1.0).abs());
    }

    println!("\n{:>8} {:>10} {:>10}", "T", "ratio", "expansion");
    for t in [0.1, 0.01, 0.001] {
        let total_shape = 2.0;
        let cvol = ContinuousVolumeParams::new(total_shape / t, 1.0)?;
        let vw = vwap_moments_continuous(&mkt, &cvol, t, MomentVariant::Exact)?;
        let aa = asian_moments_continuous(&mkt, t)?;
        let ratio = match_moments_to_black(&vw, t)?.effective_vol / match_moments_to_black(&aa, t)?.effective_vol;
        let approx = continuous_ratio_expansion(&mkt, total_shape, MomentVariant::Exact).ratio(t);
        println!("{t:>8} {ratio:>10.6} {approx:>10.6}");
    }
    println!("limit    {:>10.6}", (7.0f64 / 6.0).sqrt());
    Ok(())
}

fn main() -> vwap_gamma::Result<()> {
    run_example()
}
