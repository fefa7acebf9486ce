// Black prices and their inversion.

use vwap_gamma::{black_price, implied_vol_from_price, OptionKind, OptionSpec};

pub fn run_example() -> vwap_gamma::Result<()> {
    let (forward, rate) = (101.0, 0.04);
    for (strike, kind) in [(90.0, OptionKind::Put), (100.0, OptionKind::Call), (115.0, OptionKind::Call)] {
        let spec = OptionSpec::new(strike, 0.5, kind)?;
        let price = black_price(forward, 0.27, &spec, rate);
        let vol = implied_vol_from_price(price, forward, &spec, rate)?;
        println!("{kind} K={strike}: price {price:.6} -> vol {vol:.10}");
    }
    let spec = OptionSpec::new(100.0, 0.5, OptionKind::Call)?;
    // below intrinsic: no volatility reproduces it
    match implied_vol_from_price(0.5, 110.0, &spec, rate) {
        Err(e) => println!("{e}"),
        Ok(v) => println!("unexpected vol {v}"),
    }
    Ok(())
}

fn main() -> vwap_gamma::Result<()> {
    run_example()
}
