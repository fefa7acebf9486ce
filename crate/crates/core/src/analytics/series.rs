use std::collections::BTreeMap;
use std::io::{Read, Write};

use chrono::{DateTime, Datelike, Duration, NaiveDate, NaiveDateTime, NaiveTime, Weekday};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{GammaSampler, RngStream};

/// Intraday bars per day in the reference data: 10-minute bars plus the
/// opening and closing auction prints.
pub const DEFAULT_BARS_PER_DAY: usize = 38;

const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M:%S";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bar {
    pub timestamp: NaiveDateTime,
    pub volume: f64,
    pub vwap_price: Option<f64>,
}

/// Time-ordered intraday volume bars. Missing bars are simply absent.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeSeries {
    bars: Vec<Bar>,
    bars_per_day: usize,
}

impl VolumeSeries {
    pub fn new(bars: Vec<Bar>, bars_per_day: usize) -> Result<Self> {
        if bars_per_day == 0 {
            return Err(Error::param("bars_per_day", "must be at least 1"));
        }
        for (i, bar) in bars.iter().enumerate() {
            if !(bar.volume > 0.0) || !bar.volume.is_finite() {
                return Err(Error::DegenerateData(format!("bar {i}: volume must be positive, got {}", bar.volume)));
            }
            if let Some(p) = bar.vwap_price {
                if !(p > 0.0) || !p.is_finite() {
                    return Err(Error::DegenerateData(format!("bar {i}: vwap_price must be positive, got {p}")));
                }
            }
            if i > 0 && bar.timestamp <= bars[i - 1].timestamp {
                return Err(Error::DegenerateData(format!("bar {i}: timestamps must be strictly increasing")));
            }
        }
        Ok(VolumeSeries { bars, bars_per_day })
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn bars_per_day(&self) -> usize {
        self.bars_per_day
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn volumes(&self) -> Vec<f64> {
        self.bars.iter().map(|b| b.volume).collect()
    }

    /// Bars grouped by calendar date, in order.
    pub fn days(&self) -> Vec<&[Bar]> {
        self.bars.chunk_by(|a, b| a.timestamp.date() == b.timestamp.date()).collect()
    }

    /// Days carrying at least `bars_per_day` bars.
    pub fn complete_days(&self) -> usize {
        self.days().iter().filter(|d| d.len() >= self.bars_per_day).count()
    }

    pub fn read_csv<R: Read>(reader: R, bars_per_day: Option<usize>) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(true).trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| csv_error(e, 1))?.clone();
        let names: Vec<&str> = headers.iter().collect();
        if names.is_empty() || names == [""] {
            return Err(Error::Parse { line: 1, message: "empty input, expected header `timestamp,volume,vwap_price`".into() });
        }
        if names.len() < 2 || names[0] != "timestamp" || names[1] != "volume" || (names.len() > 2 && names[2] != "vwap_price") || names.len() > 3 {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header `timestamp,volume,vwap_price`, got `{}`", names.join(",")),
            });
        }
        let mut bars = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| csv_error(e, 0))?;
            let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
            let parse_err = |message: String| Error::Parse { line, message };
            if record.len() < 2 || record.len() > names.len() {
                return Err(parse_err(format!("expected {} fields, got {}", names.len(), record.len())));
            }
            let timestamp = parse_timestamp(&record[0]).ok_or_else(|| parse_err(format!("invalid ISO-8601 timestamp `{}`", &record[0])))?;
            let volume: f64 = record[1].parse().map_err(|_| parse_err(format!("invalid volume `{}`", &record[1])))?;
            if !(volume > 0.0) || !volume.is_finite() {
                return Err(parse_err(format!("volume must be positive, got `{}`", &record[1])));
            }
            let vwap_price = match record.get(2) {
                None | Some("") => None,
                Some(s) => {
                    let p: f64 = s.parse().map_err(|_| parse_err(format!("invalid vwap_price `{s}`")))?;
                    if !(p > 0.0) || !p.is_finite() {
                        return Err(parse_err(format!("vwap_price must be positive, got `{s}`")));
                    }
                    Some(p)
                }
            };
            if let Some(prev) = bars.last().map(|b: &Bar| b.timestamp) {
                if timestamp <= prev {
                    return Err(parse_err(format!("timestamp {timestamp} is not after {prev}")));
                }
            }
            bars.push(Bar { timestamp, volume, vwap_price });
        }
        if bars.is_empty() {
            return Err(Error::Parse { line: 2, message: "no data rows".into() });
        }
        let per_day = match bars_per_day {
            Some(n) => n,
            None => bars.chunk_by(|a, b| a.timestamp.date() == b.timestamp.date()).map(<[Bar]>::len).max().unwrap_or(1),
        };
        VolumeSeries::new(bars, per_day)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(["timestamp", "volume", "vwap_price"]).map_err(io)?;
        for bar in &self.bars {
            let price = bar.vwap_price.map(|p| p.to_string()).unwrap_or_default();
            w.write_record([bar.timestamp.format(TIMESTAMP_FORMAT).to_string(), bar.volume.to_string(), price])
                .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_error(e: csv::Error, fallback_line: usize) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(fallback_line);
    Error::Parse { line, message: e.to_string() }
}

/// ISO-8601 date-time, with or without offset. Offsets are dropped and the
/// local wall-clock time kept, since bucketing is by time of day.
pub fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Some(dt.naive_local());
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f", "%Y-%m-%dT%H:%M", "%Y-%m-%d %H:%M"] {
        if let Ok(dt) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(dt);
        }
    }
    None
}

/// How consecutive bars are grouped into one observation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmalgamationMode {
    /// Consecutive runs of L bars over the whole series.
    #[default]
    Contiguous,
    /// Groups never straddle a day boundary; each day's trailing partial
    /// group is dropped. For L ≥ bars_per_day a group is one whole day.
    WithinDay,
}

/// Sums of non-overlapping runs of `level` values; a trailing partial run is
/// dropped.
pub fn amalgamate_values(values: &[f64], level: usize) -> Vec<f64> {
    if level == 0 {
        return Vec::new();
    }
    values.chunks_exact(level).map(|c| c.iter().sum()).collect()
}

pub fn amalgamate(series: &VolumeSeries, level: usize) -> Result<Vec<f64>> {
    amalgamate_with(series, level, AmalgamationMode::Contiguous)
}

pub fn amalgamate_with(series: &VolumeSeries, level: usize, mode: AmalgamationMode) -> Result<Vec<f64>> {
    if level == 0 {
        return Err(Error::param("level", "must be at least 1"));
    }
    Ok(match mode {
        AmalgamationMode::Contiguous => amalgamate_values(&series.volumes(), level),
        AmalgamationMode::WithinDay => series
            .days()
            .into_iter()
            .flat_map(|day| {
                let volumes: Vec<f64> = day.iter().map(|b| b.volume).collect();
                if level >= series.bars_per_day {
                    vec![volumes.iter().sum()]
                } else {
                    amalgamate_values(&volumes, level)
                }
            })
            .collect(),
    })
}

/// Synthetic i.i.d. Γ(alpha, theta) bars on a weekday calendar, one bar
/// every ten minutes from 10:00 (tighter spacing if a day would overflow).
pub fn synthetic_series(
    alpha: f64,
    theta: f64,
    n_points: usize,
    bars_per_day: usize,
    seed: u64,
    start: NaiveDate,
) -> Result<VolumeSeries> {
    if bars_per_day == 0 || bars_per_day > 50_400 {
        return Err(Error::param("bars_per_day", "must be between 1 and 50400"));
    }
    if n_points == 0 {
        return Err(Error::param("n_points", "must be at least 1"));
    }
    let sampler = GammaSampler::new(alpha, theta)?;
    let mut stream = RngStream::new(seed, 0);
    let open = NaiveTime::from_hms_opt(10, 0, 0).expect("valid time");
    let spacing = Duration::seconds((50_400 / bars_per_day).min(600) as i64);
    let mut day = start;
    let mut bars = Vec::with_capacity(n_points);
    while bars.len() < n_points {
        while matches!(day.weekday(), Weekday::Sat | Weekday::Sun) {
            day = day.succ_opt().expect("date in range");
        }
        let mut ts = day.and_time(open);
        for _ in 0..bars_per_day.min(n_points - bars.len()) {
            bars.push(Bar { timestamp: ts, volume: sampler.sample(&mut stream), vwap_price: None });
            ts += spacing;
        }
        day = day.succ_opt().expect("date in range");
    }
    VolumeSeries::new(bars, bars_per_day)
}

/// Bucket index (1-based) of each bar, by rank of its time of day among all
/// distinct times of day in the series.
pub(crate) fn bucket_indices(series: &VolumeSeries) -> Vec<usize> {
    let mut slots: BTreeMap<NaiveTime, usize> = series.bars.iter().map(|b| (b.timestamp.time(), 0)).collect();
    for (i, slot) in slots.values_mut().enumerate() {
        *slot = i + 1;
    }
    series.bars.iter().map(|b| slots[&b.timestamp.time()]).collect()
}
