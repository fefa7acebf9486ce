//! Moment-matched Black pricing.
//!
//! An average price with moments (M1, M2) is priced as a lognormal forward
//! F = M1 with volatility σ² = ln(M2/M1² + 1)/T. Discounting is continuous,
//! e^{−rT}.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::moments::{
    asian_moments_discrete, vwap_moments_discrete, MarketParams, MomentPair, MomentVariant,
};
use crate::special::{norm_cdf, norm_pdf};
use crate::volume::{AveragingGrid, VolumeParams};

const IV_LOWER: f64 = 1e-6;
const IV_UPPER: f64 = 5.0;
const IV_MAX_ITER: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionKind {
    Call,
    Put,
}

impl fmt::Display for OptionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            OptionKind::Call => "call",
            OptionKind::Put => "put",
        })
    }
}

impl FromStr for OptionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "call" | "c" => Ok(OptionKind::Call),
            "put" | "p" => Ok(OptionKind::Put),
            other => Err(Error::param("kind", format!("expected call or put, got `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptionSpec {
    strike: f64,
    maturity: f64,
    kind: OptionKind,
}

impl OptionSpec {
    pub fn new(strike: f64, maturity: f64, kind: OptionKind) -> Result<Self> {
        ensure_positive("strike", strike)?;
        ensure_finite("strike", strike)?;
        ensure_positive("maturity", maturity)?;
        ensure_finite("maturity", maturity)?;
        Ok(OptionSpec { strike, maturity, kind })
    }

    pub fn strike(&self) -> f64 {
        self.strike
    }

    pub fn maturity(&self) -> f64 {
        self.maturity
    }

    pub fn kind(&self) -> OptionKind {
        self.kind
    }

    pub fn payoff(&self, average: f64) -> f64 {
        match self.kind {
            OptionKind::Call => (average - self.strike).max(0.0),
            OptionKind::Put => (self.strike - average).max(0.0),
        }
    }

    pub fn with_kind(&self, kind: OptionKind) -> Self {
        OptionSpec { kind, ..*self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PricingVariant {
    Exact,
    Stace,
    /// Arithmetic average, the α → ∞ limit.
    Asian,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PriceQuote {
    pub price: f64,
    pub implied_vol: f64,
    pub forward: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlackInputs {
    pub forward: f64,
    pub effective_vol: f64,
}

/// Discounted Black value. `vol = 0` gives the discounted intrinsic value.
pub fn black_price(forward: f64, vol: f64, spec: &OptionSpec, rate: f64) -> f64 {
    let t = spec.maturity;
    let k = spec.strike;
    let df = (-rate * t).exp();
    let total_sd = vol * t.sqrt();
    if total_sd <= 0.0 {
        return df * spec.payoff(forward);
    }
    let d1 = ((forward / k).ln() + 0.5 * total_sd * total_sd) / total_sd;
    let d2 = d1 - total_sd;
    match spec.kind {
        OptionKind::Call => df * (forward * norm_cdf(d1) - k * norm_cdf(d2)),
        OptionKind::Put => df * (k * norm_cdf(-d2) - forward * norm_cdf(-d1)),
    }
}

/// ∂(discounted Black value)/∂vol; identical for calls and puts.
pub fn black_vega(forward: f64, vol: f64, spec: &OptionSpec, rate: f64) -> f64 {
    let t = spec.maturity;
    let total_sd = vol * t.sqrt();
    if total_sd <= 0.0 {
        return 0.0;
    }
    let d1 = ((forward / spec.strike).ln() + 0.5 * total_sd * total_sd) / total_sd;
    (-rate * t).exp() * forward * norm_pdf(d1) * t.sqrt()
}

pub fn match_moments_to_black(moments: &MomentPair, maturity: f64) -> Result<BlackInputs> {
    ensure_positive("maturity", maturity)?;
    let checked = MomentPair::new(moments.m1, moments.m2)?;
    let effective_vol = (checked.relative_variance().ln_1p() / maturity).sqrt();
    Ok(BlackInputs { forward: checked.m1, effective_vol })
}

pub fn moments_for(
    mkt: &MarketParams,
    vol: &VolumeParams,
    grid: &AveragingGrid,
    variant: PricingVariant,
) -> Result<MomentPair> {
    match variant {
        PricingVariant::Exact => vwap_moments_discrete(mkt, vol, grid, MomentVariant::Exact),
        PricingVariant::Stace => vwap_moments_discrete(mkt, vol, grid, MomentVariant::Stace),
        PricingVariant::Asian => {
            grid.check_matches(vol)?;
            Ok(asian_moments_discrete(mkt, grid))
        }
    }
}

pub fn price_vwap(
    mkt: &MarketParams,
    vol: &VolumeParams,
    grid: &AveragingGrid,
    spec: &OptionSpec,
    variant: PricingVariant,
) -> Result<PriceQuote> {
    check_maturity(grid, spec)?;
    let moments = moments_for(mkt, vol, grid, variant)?;
    let black = match_moments_to_black(&moments, spec.maturity)?;
    Ok(PriceQuote {
        price: black_price(black.forward, black.effective_vol, spec, mkt.r()),
        implied_vol: black.effective_vol,
        forward: black.forward,
    })
}

pub(crate) fn check_maturity(grid: &AveragingGrid, spec: &OptionSpec) -> Result<()> {
    let (a, b) = (grid.maturity(), spec.maturity);
    if ((a - b) / b).abs() > 1e-12 {
        return Err(Error::param("maturity", format!("averaging grid ends at {a} but option expires at {b}")));
    }
    Ok(())
}

/// Black volatility reproducing `price`, by bisection on [1e-6, 5].
pub fn implied_vol_from_price(price: f64, forward: f64, spec: &OptionSpec, rate: f64) -> Result<f64> {
    ensure_positive("forward", forward)?;
    let lower = black_price(forward, IV_LOWER, spec, rate);
    let upper = black_price(forward, IV_UPPER, spec, rate);
    let no_solution = || Error::NoImpliedVol { price, lower, upper };
    if !price.is_finite() || price <= lower || price >= upper {
        return Err(no_solution());
    }
    let (mut lo, mut hi) = (IV_LOWER, IV_UPPER);
    for _ in 0..IV_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if black_price(forward, mid, spec, rate) < price {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Asian, exact-VWAP and approximate-VWAP quotes for one contract.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PriceComparison {
    pub kind: OptionKind,
    pub maturity: f64,
    pub alpha: f64,
    pub n_buckets: usize,
    pub forward: f64,
    pub m1: f64,
    pub m2_asian: f64,
    pub m2_exact: f64,
    pub m2_stace: f64,
    pub vol_asian: f64,
    pub vol_exact: f64,
    pub vol_stace: f64,
    pub price_asian: f64,
    pub price_exact: f64,
    pub price_stace: f64,
    /// price_exact / price_asian − 1
    pub relative_gap: f64,
}

pub fn compare_prices(
    mkt: &MarketParams,
    vol: &VolumeParams,
    grid: &AveragingGrid,
    spec: &OptionSpec,
) -> Result<PriceComparison> {
    let asian = price_vwap(mkt, vol, grid, spec, PricingVariant::Asian)?;
    let exact = price_vwap(mkt, vol, grid, spec, PricingVariant::Exact)?;
    let stace = price_vwap(mkt, vol, grid, spec, PricingVariant::Stace)?;
    let m = |v| moments_for(mkt, vol, grid, v).map(|p| p.m2);
    Ok(PriceComparison {
        kind: spec.kind,
        maturity: spec.maturity,
        alpha: vol.alpha(),
        n_buckets: vol.n_buckets(),
        forward: exact.forward,
        m1: exact.forward,
        m2_asian: m(PricingVariant::Asian)?,
        m2_exact: m(PricingVariant::Exact)?,
        m2_stace: m(PricingVariant::Stace)?,
        vol_asian: asian.implied_vol,
        vol_exact: exact.implied_vol,
        vol_stace: stace.implied_vol,
        price_asian: asian.price,
        price_exact: exact.price,
        price_stace: stace.price,
        relative_gap: exact.price / asian.price - 1.0,
    })
}
