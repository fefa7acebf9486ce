//! VWAP option pricing under a gamma volume model.
//!
//! Bucket volumes are i.i.d. Γ(α, θ), prices follow geometric Brownian
//! motion, and the VWAP is priced by matching its first two moments to a
//! lognormal and applying Black's formula. A Monte Carlo engine checks the
//! closed forms, and [`analytics`] tests whether real volume data looks
//! gamma distributed.

pub mod analytics;
pub mod cli;
pub mod error;
pub mod mc;
pub mod moments;
pub mod pricer;
pub mod reproduce;
pub mod rng;
pub mod special;
pub mod volume;

pub use error::{Error, Result};
pub use mc::{mc_moment_ratio, mc_price_pair, mc_ratio_table, mc_vol_ratio, McConfig, McEstimate, McMoments, McPair};
pub use moments::{
    asian_moments_discrete, gbm_sum_moments, vwap_moments_continuous, vwap_moments_discrete,
    vwap_moments_discrete_exact, vwap_moments_discrete_stace, vwap_ratio_asymptotic, ContinuousVolumeParams,
    MarketParams, MomentPair, MomentVariant,
};
pub use pricer::{
    black_price, compare_prices, implied_vol_from_price, price_vwap, OptionKind, OptionSpec, PriceQuote,
    PricingVariant,
};
pub use rng::{GammaSampler, RngStream};
pub use volume::{dirichlet_moments, AveragingGrid, DirichletMoments, VolumeParams};
