//! Empirical volume diagnostics: bar series, amalgamation, gamma fits,
//! bootstrap goodness of fit and intraday correlations.

mod fit;
mod gof;
mod series;
mod stats;
mod table;

pub use fit::{fit_gamma_mle, GammaFit};
pub use gof::{gof_pvalues, gof_statistics, GofResult, GofStatistics, MIN_BOOTSTRAP};
pub use series::{
    amalgamate, amalgamate_values, amalgamate_with, parse_timestamp, synthetic_series, AmalgamationMode, Bar,
    VolumeSeries, DEFAULT_BARS_PER_DAY,
};
pub use stats::{autocorrelation, intraday_cum_incr_correlation, BucketCorrelation, MIN_COMPLETE_DAYS};
pub use table::{build_gof_table, gof_report, GofOptions, GofReport, GofTable};
