use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::series::{bucket_indices, VolumeSeries};
use crate::error::{Error, Result};

/// Sample autocorrelation Σ(x_i−x̄)(x_{i+lag}−x̄) / Σ(x_i−x̄)².
pub fn autocorrelation(data: &[f64], lag: usize) -> Result<f64> {
    if lag == 0 {
        return Err(Error::param("lag", "must be at least 1"));
    }
    if data.len() <= lag + 1 {
        return Err(Error::InsufficientData(format!(
            "autocorrelation at lag {lag} needs more than {} points, got {}",
            lag + 1,
            data.len()
        )));
    }
    let mean = data.iter().sum::<f64>() / data.len() as f64;
    let dev: Vec<f64> = data.iter().map(|x| x - mean).collect();
    let denom: f64 = dev.iter().map(|d| d * d).sum();
    if !(denom > 0.0) {
        return Err(Error::DegenerateData("autocorrelation of a constant series".into()));
    }
    let num: f64 = dev.iter().zip(&dev[lag..]).map(|(a, b)| a * b).sum();
    Ok(num / denom)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BucketCorrelation {
    pub bucket_index: usize,
    pub correlation: f64,
    pub n_days: usize,
}

pub const MIN_COMPLETE_DAYS: usize = 10;
const MIN_BUCKET_OBS: usize = 3;

/// Per intraday bucket, the correlation across days between cumulative
/// within-day volume up to the bucket and the bucket's own volume.
/// Buckets are identified by time of day; a day missing a bucket simply
/// contributes no pair for it.
pub fn intraday_cum_incr_correlation(series: &VolumeSeries) -> Result<Vec<BucketCorrelation>> {
    let complete = series.complete_days();
    if complete < MIN_COMPLETE_DAYS {
        return Err(Error::InsufficientData(format!(
            "need at least {MIN_COMPLETE_DAYS} complete trading days of {} bars, found {complete}",
            series.bars_per_day()
        )));
    }
    let buckets = bucket_indices(series);
    let mut pairs: BTreeMap<usize, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    let mut offset = 0;
    for day in series.days() {
        let mut cum = 0.0;
        for (k, bar) in day.iter().enumerate() {
            cum += bar.volume;
            let entry = pairs.entry(buckets[offset + k]).or_default();
            entry.0.push(cum);
            entry.1.push(bar.volume);
        }
        offset += day.len();
    }
    Ok(pairs
        .into_iter()
        .filter(|(_, (c, _))| c.len() >= MIN_BUCKET_OBS)
        .filter_map(|(bucket_index, (c, v))| {
            pearson(&c, &v).map(|correlation| BucketCorrelation { bucket_index, correlation, n_days: c.len() })
        })
        .collect())
}

/// None when either side has zero variance.
fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    if x == y {
        let mx = x.iter().sum::<f64>() / x.len() as f64;
        return x.iter().any(|v| *v != mx).then_some(1.0);
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if !(sxx > 0.0 && syy > 0.0) {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::series::{synthetic_series, Bar};
    use crate::rng::RngStream;
    use chrono::{Duration, NaiveDate};

    #[test]
    fn alternating_series() {
        let data: Vec<f64> = (0..100).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        assert!((autocorrelation(&data, 1).unwrap() + 0.99).abs() < 1e-12);
        let long: Vec<f64> = (0..100_000).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        assert!((autocorrelation(&long, 1).unwrap() + 1.0).abs() < 1e-4);
    }

    // Oracle: AR(1) with known coefficient.
    #[test]
    fn ar1_coefficient() {
        let mut s = RngStream::new(77, 0);
        let mut x = 0.0;
        let data: Vec<f64> = (0..10_000)
            .map(|_| {
                x = 0.4 * x + s.sample_standard_normal();
                x
            })
            .collect();
        assert!((autocorrelation(&data, 1).unwrap() - 0.4).abs() < 0.03);
    }

    #[test]
    fn autocorrelation_errors() {
        assert!(matches!(autocorrelation(&[3.0; 10], 1), Err(Error::DegenerateData(_))));
        assert!(matches!(autocorrelation(&[1.0, 2.0], 1), Err(Error::InsufficientData(_))));
        assert!(autocorrelation(&[1.0, 2.0, 3.0], 0).is_err());
    }

    fn start() -> NaiveDate {
        NaiveDate::from_ymd_opt(2013, 2, 15).unwrap()
    }

    #[test]
    fn first_bucket_is_one_and_late_buckets_are_noise() {
        let days = 100;
        let s = synthetic_series(1.0, 0.2e6, 38 * days, 38, 3, start()).unwrap();
        let corr = intraday_cum_incr_correlation(&s).unwrap();
        assert_eq!(corr.len(), 38);
        assert_eq!(corr[0].bucket_index, 1);
        assert_eq!(corr[0].correlation, 1.0);
        // cumulative up to bucket i carries ~1/i of its variance from V_i
        let band = 2.0 / (days as f64).sqrt();
        let late: Vec<_> = corr.iter().filter(|c| c.bucket_index >= 20).collect();
        let inside = late.iter().filter(|c| (c.correlation - (1.0 / c.bucket_index as f64).sqrt()).abs() < band).count();
        assert!(inside as f64 >= 0.9 * late.len() as f64, "{late:?}");
    }

    #[test]
    fn constructed_dependence() {
        let mut stream = RngStream::new(8, 0);
        let mut bars = Vec::new();
        let open = start().and_hms_opt(10, 0, 0).unwrap();
        for d in 0..15 {
            let day = open + Duration::days(d);
            let mut cum = 0.0;
            for i in 0..10 {
                let v = if i == 0 { 1.0 + stream.uniform_open_closed() } else { 0.5 * cum };
                cum += v;
                bars.push(Bar { timestamp: day + Duration::minutes(10 * i), volume: v, vwap_price: None });
            }
        }
        let s = VolumeSeries::new(bars, 10).unwrap();
        let corr = intraday_cum_incr_correlation(&s).unwrap();
        assert!(corr.iter().all(|c| c.correlation > 0.9), "{corr:?}");
    }

    #[test]
    fn missing_bars_and_sparse_buckets() {
        let s = synthetic_series(1.0, 1.0, 38 * 12, 38, 4, start()).unwrap();
        // drop bucket 5 everywhere except two days, bucket 7 on one day
        let bars: Vec<Bar> = s
            .days()
            .iter()
            .enumerate()
            .flat_map(|(d, day)| {
                day.iter()
                    .enumerate()
                    .filter(move |(k, _)| !(*k == 4 && d >= 2) && !(*k == 6 && d == 0))
                    .map(|(_, b)| *b)
                    .collect::<Vec<_>>()
            })
            .collect();
        let thinned = VolumeSeries::new(bars, 36).unwrap();
        let corr = intraday_cum_incr_correlation(&thinned).unwrap();
        assert!(corr.iter().all(|c| c.bucket_index != 5));
        assert_eq!(corr.iter().find(|c| c.bucket_index == 7).unwrap().n_days, 11);
    }

    #[test]
    fn too_few_days() {
        let s = synthetic_series(1.0, 1.0, 38 * 9, 38, 5, start()).unwrap();
        assert!(matches!(intraday_cum_incr_correlation(&s), Err(Error::InsufficientData(_))));
    }
}
