//! The `vwap` command-line tool.
//!
//! Every subcommand accepts `--format table|csv|json`, `--output FILE` and
//! `--config FILE`. A config file holds flat `key = value` lines named after
//! the long flags; flags given on the command line win.

mod report;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

pub use report::{Cell, Format, Report};

use crate::analytics::{
    build_gof_table, intraday_cum_incr_correlation, synthetic_series, AmalgamationMode, GofOptions, VolumeSeries,
    DEFAULT_BARS_PER_DAY,
};
use crate::error::{Error, Result};
use crate::mc::{closed_form_ratios, mc_moment_ratio, mc_price_pair, mc_vol_ratio, McConfig, DEFAULT_BLOCK_SIZE};
use crate::moments::{
    asian_moments_discrete, vwap_moments_continuous, ContinuousVolumeParams, MarketParams, MomentVariant,
};
use crate::pricer::{compare_prices, match_moments_to_black, OptionKind, OptionSpec};
use crate::reproduce::{table2_closed_form, table2_mc, table3, TABLE3_CASES};
use crate::volume::{AveragingGrid, VolumeParams};

pub const DEFAULT_SEED: u64 = 20_130_215;

const SUBCOMMANDS: [&str; 6] = ["price", "mc", "reproduce", "fit", "synth", "intraday"];

#[derive(Debug, Parser)]
#[command(name = "vwap", version, about = "VWAP option pricing under a gamma volume model", args_override_self = true)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Flat key=value file of default flag values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form Asian and VWAP prices for one contract.
    Price(PriceArgs),
    /// Monte Carlo VWAP and Asian prices with the implied-vol ratio.
    Mc(McArgs),
    /// Regenerate a reference table.
    Reproduce(ReproduceArgs),
    /// Gamma fits and goodness of fit of a volume CSV per amalgamation level.
    Fit(FitArgs),
    /// Write a synthetic gamma volume CSV.
    Synth(SynthArgs),
    /// Cumulative vs incremental volume correlation per intraday bucket.
    Intraday(IntradayArgs),
}

#[derive(Debug, Args)]
pub struct MarketArgs {
    #[arg(long, default_value_t = 100.0)]
    pub s0: f64,
    #[arg(long, default_value_t = 0.05)]
    pub r: f64,
    #[arg(long, default_value_t = 0.2)]
    pub sigma: f64,
}

#[derive(Debug, Args)]
pub struct ContractArgs {
    #[arg(long, default_value_t = 100.0)]
    pub k: f64,
    /// Maturity in years; also the end of the averaging window.
    #[arg(long)]
    pub t: f64,
    /// Number of averaging buckets.
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = KindArg::Call)]
    pub kind: KindArg,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("shape").required(true).args(["alpha", "alpha_tilde"])))]
pub struct VolumeArgs {
    /// Gamma shape per bucket (`inf` for equal weights).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Gamma process rate per year; the bucket shape is alpha_tilde * t / n.
    #[arg(long)]
    pub alpha_tilde: Option<f64>,
    #[arg(long, default_value_t = 0.00067)]
    pub theta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Call,
    Put,
}

impl From<KindArg> for OptionKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Call => OptionKind::Call,
            KindArg::Put => OptionKind::Put,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Number of paths; scientific notation such as 1e6 is accepted.
    #[arg(long, value_parser = parse_count, default_value = "1e6")]
    pub paths: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_BLOCK_SIZE)]
    pub block_size: usize,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
}

impl SimArgs {
    fn config(&self) -> McConfig {
        McConfig { n_paths: self.paths, seed: self.seed, block_size: self.block_size, workers: self.workers }
    }
}

#[derive(Debug, Args)]
pub struct PriceArgs {
    #[command(flatten)]
    pub market: MarketArgs,
    #[command(flatten)]
    pub contract: ContractArgs,
    #[command(flatten)]
    pub volume: VolumeArgs,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub market: MarketArgs,
    #[command(flatten)]
    pub contract: ContractArgs,
    #[command(flatten)]
    pub volume: VolumeArgs,
    #[command(flatten)]
    pub sim: SimArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableArg {
    Table2,
    Table3,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    pub table: TableArg,
    /// Add the Monte Carlo column (table2 only).
    #[arg(long)]
    pub mc: bool,
    #[command(flatten)]
    pub sim: SimArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Contiguous,
    WithinDay,
}

impl From<ModeArg> for AmalgamationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Contiguous => AmalgamationMode::Contiguous,
            ModeArg::WithinDay => AmalgamationMode::WithinDay,
        }
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "5,10,20,40")]
    pub levels: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub n_boot: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Autocorrelation lag on the amalgamated series.
    #[arg(long, default_value_t = 1)]
    pub lag: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Contiguous)]
    pub mode: ModeArg,
    /// Bars in a full trading day (default: the most seen in any day).
    #[arg(long)]
    pub bars_per_day: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.2e6)]
    pub theta: f64,
    #[arg(long, value_parser = parse_count, default_value = "5130")]
    pub n_points: usize,
    #[arg(long, default_value_t = DEFAULT_BARS_PER_DAY)]
    pub bars_per_day: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// First trading day (weekends are skipped).
    #[arg(long, default_value = "2013-02-15")]
    pub start: NaiveDate,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IntradayArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub bars_per_day: Option<usize>,
}

/// Integer count, allowing `1e6` and `1_000_000`.
fn parse_count(s: &str) -> std::result::Result<usize, String> {
    let cleaned = s.replace('_', "");
    if let Ok(n) = cleaned.parse::<usize>() {
        return Ok(n);
    }
    match cleaned.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x <= 9.007_199_254_740_992e15 => Ok(x as usize),
        _ => Err(format!("`{s}` is not a non-negative integer")),
    }
}

/// Splices `--key value` pairs from the config file right after the
/// subcommand, so that explicit flags later on the line take precedence.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        let a = a.to_string_lossy();
        if a == "--config" {
            path = args.get(i + 1).map(PathBuf::from);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        }
    }
    let Some(path) = path else { return Ok(args) };
    let extra = read_config(&path)?;
    let Some(pos) = args.iter().position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref())) else {
        return Ok(args);
    };
    let mut out = args[..=pos].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}

fn read_config(path: &Path) -> Result<Vec<OsString>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        let value = value.trim();
        if key.is_empty() || key == "config" {
            return Err(Error::Parse { line: i + 1, message: format!("invalid key in `{line}`") });
        }
        match value {
            "true" => out.push(format!("--{key}").into()),
            "false" => {}
            v => {
                out.push(format!("--{key}").into());
                out.push(v.into());
            }
        }
    }
    Ok(out)
}

/// Entry point for the binary.
pub fn main() -> ExitCode {
    let args: Vec<OsString> = std::env::args_os().collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let text = render(&cli.command, cli.common.format)?;
    match &cli.common.output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// The report a command prints, without touching the output destination.
pub fn render(command: &Command, format: Format) -> Result<String> {
    Ok(match command {
        Command::Price(a) => cmd_price(a)?.render(format),
        Command::Mc(a) => cmd_mc(a)?.render(format),
        Command::Reproduce(a) => cmd_reproduce(a)?.render(format),
        Command::Fit(a) => cmd_fit(a)?.render(format),
        Command::Synth(a) => cmd_synth(a, format)?,
        Command::Intraday(a) => cmd_intraday(a)?.render(format),
    })
}

struct Setup {
    mkt: MarketParams,
    vol: VolumeParams,
    grid: AveragingGrid,
    spec: OptionSpec,
}

fn setup(m: &MarketArgs, c: &ContractArgs, v: &VolumeArgs) -> Result<Setup> {
    let mkt = MarketParams::new(m.s0, m.r, m.sigma)?;
    let grid = AveragingGrid::new(c.t, c.n)?;
    let spec = OptionSpec::new(c.k, c.t, c.kind.into())?;
    let alpha = match (v.alpha, v.alpha_tilde) {
        (Some(a), _) => a,
        (None, Some(at)) => ContinuousVolumeParams::new(at, v.theta)?.alpha_tilde() * c.t / c.n as f64,
        (None, None) => return Err(Error::param("alpha", "one of --alpha or --alpha-tilde is required")),
    };
    let vol = VolumeParams::new(alpha, v.theta, c.n)?;
    Ok(Setup { mkt, vol, grid, spec })
}

fn cmd_price(a: &PriceArgs) -> Result<Report> {
    let s = setup(&a.market, &a.contract, &a.volume)?;
    let c = compare_prices(&s.mkt, &s.vol, &s.grid, &s.spec)?;
    let mut columns = vec![
        "kind", "t", "alpha", "n", "forward", "m2_asian", "m2_exact", "m2_stace", "vol_asian_pct", "vol_exact_pct",
        "vol_stace_pct", "price_asian", "price_exact", "price_stace", "gap_pct",
    ];
    let mut row: Vec<Cell> = vec![
        c.kind.to_string().into(),
        c.maturity.into(),
        c.alpha.into(),
        c.n_buckets.into(),
        c.forward.into(),
        c.m2_asian.into(),
        c.m2_exact.into(),
        c.m2_stace.into(),
        (100.0 * c.vol_asian).into(),
        (100.0 * c.vol_exact).into(),
        (100.0 * c.vol_stace).into(),
        c.price_asian.into(),
        c.price_exact.into(),
        c.price_stace.into(),
        (100.0 * c.relative_gap).into(),
    ];
    if let Some(at) = a.volume.alpha_tilde {
        let cvol = ContinuousVolumeParams::new(at, a.volume.theta)?;
        let t = a.contract.t;
        for (name, variant) in [("exact", MomentVariant::Exact), ("stace", MomentVariant::Stace)] {
            let m = vwap_moments_continuous(&s.mkt, &cvol, t, variant)?;
            let vol = match_moments_to_black(&m, t)?.effective_vol;
            columns.push(if name == "exact" { "m2_exact_continuous" } else { "m2_stace_continuous" });
            columns.push(if name == "exact" { "vol_exact_continuous_pct" } else { "vol_stace_continuous_pct" });
            row.push(m.m2.into());
            row.push((100.0 * vol).into());
        }
    }
    let mut report = Report::new("price", &columns);
    report.push(row);
    Ok(report)
}

fn cmd_mc(a: &McArgs) -> Result<Report> {
    let s = setup(&a.market, &a.contract, &a.volume)?;
    let cfg = a.sim.config();
    let pair = mc_price_pair(&s.mkt, &s.vol, &s.grid, &s.spec, &cfg)?;
    let forward = asian_moments_discrete(&s.mkt, &s.grid).m1;
    let ratio = mc_moment_ratio(&pair, s.grid.maturity())?;
    let by_price = mc_vol_ratio(&pair, forward, &s.spec, s.mkt.r())?;
    let (r_exact, r_stace) = closed_form_ratios(&s.mkt, &s.vol, &s.grid)?;
    let stace_error_ratio = (ratio.ratio != 1.0).then(|| (r_stace - 1.0) / (ratio.ratio - 1.0));
    let mut report = Report::new(
        "mc",
        &[
            "paths", "price_vwap", "se_vwap", "price_asian", "se_asian", "m1_vwap", "m2_vwap", "m2_asian",
            "vol_vwap_pct", "vol_asian_pct", "r_mc", "r_mc_se", "r_exact", "r_stace", "stace_error_ratio",
            "implied_vol_vwap_pct", "implied_vol_asian_pct", "r_mc_price", "r_mc_price_se", "clamped_gamma",
        ],
    )
    .meta("seed", cfg.seed)
    .meta("block_size", cfg.block_size);
    report.push(vec![
        pair.vwap.n_paths.into(),
        pair.vwap.price.into(),
        pair.vwap.std_error.into(),
        pair.asian.price.into(),
        pair.asian.std_error.into(),
        pair.moments.vwap.m1.into(),
        pair.moments.vwap.m2.into(),
        pair.moments.asian.m2.into(),
        (100.0 * ratio.vol_vwap).into(),
        (100.0 * ratio.vol_asian).into(),
        ratio.ratio.into(),
        ratio.std_error.into(),
        r_exact.into(),
        r_stace.into(),
        stace_error_ratio.into(),
        (100.0 * by_price.vol_vwap).into(),
        (100.0 * by_price.vol_asian).into(),
        by_price.ratio.into(),
        by_price.std_error.into(),
        pair.clamped_gamma.into(),
    ]);
    Ok(report)
}

fn cmd_reproduce(a: &ReproduceArgs) -> Result<Report> {
    match a.table {
        TableArg::Table2 if a.mc => {
            let cfg = a.sim.config();
            let mut report = Report::new(
                "reproduce table2",
                &["inv_alpha", "r_exact", "r_stace", "r_mc", "r_mc_se", "stace_error_ratio", "r_mc_price", "r_mc_price_se"],
            )
            .meta("paths", cfg.n_paths)
            .meta("seed", cfg.seed);
            for row in table2_mc(&cfg)? {
                report.push(vec![
                    row.inv_alpha.into(),
                    row.r_exact.into(),
                    row.r_stace.into(),
                    row.r_mc.into(),
                    row.r_mc_std_error.into(),
                    row.stace_error_ratio.into(),
                    row.r_mc_price.into(),
                    row.r_mc_price_std_error.into(),
                ]);
            }
            Ok(report)
        }
        TableArg::Table2 => {
            let mut report = Report::new("reproduce table2", &["inv_alpha", "r_exact", "r_stace"]);
            for row in table2_closed_form()? {
                report.push(vec![row.inv_alpha.into(), row.r_exact.into(), row.r_stace.into()]);
            }
            Ok(report)
        }
        TableArg::Table3 => {
            if a.mc {
                return Err(Error::param("mc", "the Monte Carlo column is only available for table2"));
            }
            let mut report = Report::new(
                "reproduce table3",
                &["kind", "t", "alpha", "n", "vol_asian_pct", "vol_vwap_pct", "price_asian", "price_vwap", "gap_pct"],
            );
            for (case, c) in TABLE3_CASES.iter().zip(table3()?) {
                report.push(vec![
                    case.kind.to_string().into(),
                    c.maturity.into(),
                    c.alpha.into(),
                    c.n_buckets.into(),
                    (100.0 * c.vol_asian).into(),
                    (100.0 * c.vol_exact).into(),
                    c.price_asian.into(),
                    c.price_exact.into(),
                    (100.0 * c.relative_gap).into(),
                ]);
            }
            Ok(report)
        }
    }
}

fn read_series(path: &Path, bars_per_day: Option<usize>) -> Result<VolumeSeries> {
    let file = fs::File::open(path)?;
    VolumeSeries::read_csv(std::io::BufReader::new(file), bars_per_day)
}

fn cmd_fit(a: &FitArgs) -> Result<Report> {
    let series = read_series(&a.input, a.bars_per_day)?;
    let opts = GofOptions { n_boot: a.n_boot, seed: a.seed, lag: a.lag, mode: a.mode.into() };
    let table = build_gof_table(&series, &a.levels, &opts)?;
    let mode = match opts.mode {
        AmalgamationMode::Contiguous => "contiguous",
        AmalgamationMode::WithinDay => "within-day",
    };
    let mut report = Report::new(
        "fit",
        &[
            "level", "n_points", "theta_hat", "alpha_hat", "alpha_per_l", "autocorr", "p_ad", "p_ks", "stat_ad",
            "stat_ks",
        ],
    )
    .meta("method", &table.method)
    .meta("n_boot", opts.n_boot)
    .meta("seed", opts.seed)
    .meta("lag", opts.lag)
    .meta("mode", mode);
    for r in &table.rows {
        report.push(vec![
            r.level.into(),
            r.n_points.into(),
            r.theta_hat.into(),
            r.alpha_hat.into(),
            r.alpha_per_l.into(),
            r.autocorr.into(),
            r.p_ad.into(),
            r.p_ks.into(),
            r.stat_ad.into(),
            r.stat_ks.into(),
        ]);
    }
    Ok(report)
}

fn cmd_synth(a: &SynthArgs, format: Format) -> Result<String> {
    let series = synthetic_series(a.alpha, a.theta, a.n_points, a.bars_per_day, a.seed, a.start)?;
    match &a.out {
        None => {
            let mut buf = Vec::new();
            series.write_csv(&mut buf)?;
            Ok(String::from_utf8(buf).expect("utf-8 csv"))
        }
        Some(path) => {
            series.write_csv(fs::File::create(path)?)?;
            let mut report = Report::new("synth", &["path", "rows", "days", "bars_per_day"]);
            report.push(vec![
                path.display().to_string().into(),
                series.len().into(),
                series.days().len().into(),
                series.bars_per_day().into(),
            ]);
            Ok(report.render(format))
        }
    }
}

fn cmd_intraday(a: &IntradayArgs) -> Result<Report> {
    let series = read_series(&a.input, a.bars_per_day)?;
    let mut report = Report::new("intraday", &["bucket_index", "correlation", "n_days"]);
    for c in intraday_cum_incr_correlation(&series)? {
        report.push(vec![c.bucket_index.into(), c.correlation.into(), c.n_days.into()]);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    fn os(args: &[&str]) -> Vec<OsString> {
        args.iter().map(OsString::from).collect()
    }

    #[test]
    fn command_definition_is_valid() {
        Cli::command().debug_assert();
    }

    #[test]
    fn counts_accept_scientific_notation() {
        assert_eq!(parse_count("1e6"), Ok(1_000_000));
        assert_eq!(parse_count("1_000"), Ok(1000));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }

    #[test]
    fn config_values_are_overridden_by_flags() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.cfg");
        fs::write(&cfg, "# table 3 row\nt = 0.317\nn=80\nalpha = 10\nkind = call\nsigma=0.3\n").unwrap();
        let args = expand_config(os(&["vwap", "--config", cfg.to_str().unwrap(), "price", "--kind", "put"])).unwrap();
        let cli = Cli::try_parse_from(args).unwrap();
        let Command::Price(p) = cli.command else { panic!() };
        assert_eq!(p.contract.kind, KindArg::Put);
        assert_eq!(p.contract.n, 80);
        assert_eq!(p.market.sigma, 0.3);
    }

    #[test]
    fn bad_config_line() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("bad.cfg");
        fs::write(&cfg, "t 0.3\n").unwrap();
        let err = expand_config(os(&["vwap", "--config", cfg.to_str().unwrap(), "price"])).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn alpha_tilde_maps_to_bucket_shape() {
        let cli = Cli::try_parse_from(["vwap", "price", "--t", "0.5", "--n", "10", "--alpha-tilde", "40"]).unwrap();
        let Command::Price(p) = &cli.command else { panic!() };
        let s = setup(&p.market, &p.contract, &p.volume).unwrap();
        assert!((s.vol.alpha() - 2.0).abs() < 1e-15);
        let text = render(&cli.command, Format::Csv).unwrap();
        assert!(text.lines().next().unwrap().contains("vol_exact_continuous_pct"));
        assert!(Cli::try_parse_from(["vwap", "price", "--t", "0.5", "--n", "10"]).is_err());
        assert!(Cli::try_parse_from(["vwap", "price", "--t", "1", "--n", "2", "--alpha", "1", "--alpha-tilde", "1"])
            .is_err());
    }
}
