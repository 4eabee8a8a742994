use std::path::PathBuf;

use chrono::NaiveDate;
use clap::{Args, Subcommand};

use axi_core::rate_builder::{
    averaging_method_gap, calibrate_equivalent_spread, compounded_average, credit_sensitive_rate, libor_proxy,
    splice_libor, CompositeRateSpec, COMPOUND_WINDOW_DAYS, LIBOR_FALLBACK_SPREAD_BP,
};
use axi_core::{RateKind, RateSeries};

use super::{emit_series, load_series};
use crate::report::Report;
use crate::{CliError, Context};

#[derive(Debug, Subcommand)]
pub enum RatesCommand {
    /// Compounded average of an overnight series (ACT/360, calendar-day window).
    Compound(CompoundArgs),
    /// R + s + c * AXI on the dates both inputs cover.
    Composite(CompositeArgs),
    /// Fixed spread equating the mean of a base rate with a target rate.
    Calibrate(CalibrateArgs),
    /// Term SOFR plus the fallback spread, optionally spliced onto LIBOR.
    Proxy(ProxyArgs),
    /// Simple 21-day average minus 30-day compounded average of daily spreads.
    Gap(GapArgs),
}

impl RatesCommand {
    pub fn name(&self) -> &'static str {
        match self {
            RatesCommand::Compound(_) => "compound",
            RatesCommand::Composite(_) => "composite",
            RatesCommand::Calibrate(_) => "calibrate",
            RatesCommand::Proxy(_) => "proxy",
            RatesCommand::Gap(_) => "gap",
        }
    }
}

#[derive(Debug, Args)]
pub struct CompoundArgs {
    /// Overnight rate series.
    #[arg(long = "in")]
    input: PathBuf,
    /// Window length in calendar days.
    #[arg(long)]
    window_days: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CompositeArgs {
    /// Risk-free reference series, e.g. the 30-day compounded average.
    #[arg(long)]
    reference: PathBuf,
    /// AXI index series.
    #[arg(long)]
    axi: PathBuf,
    /// Fixed spread, percent.
    #[arg(long, allow_hyphen_values = true)]
    spread: Option<f64>,
    /// Credit sensitivity c in [0, 1].
    #[arg(long)]
    sensitivity: Option<f64>,
    /// Name of the output series.
    #[arg(long, default_value = "composite")]
    name: String,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Series whose average income is matched.
    #[arg(long)]
    target: PathBuf,
    /// Series the spread is added to.
    #[arg(long)]
    base: PathBuf,
}

#[derive(Debug, Args)]
pub struct ProxyArgs {
    /// Term SOFR series.
    #[arg(long)]
    term_sofr: PathBuf,
    /// Spread added to term SOFR, basis points.
    #[arg(long)]
    spread_bp: Option<f64>,
    /// Published LIBOR used before the cutover.
    #[arg(long, requires = "cutover")]
    libor: Option<PathBuf>,
    /// First date taken from the proxy.
    #[arg(long, requires = "libor")]
    cutover: Option<NaiveDate>,
}

#[derive(Debug, Args)]
pub struct GapArgs {
    /// Daily spread series.
    #[arg(long)]
    daily: PathBuf,
}

pub fn run(cmd: &RatesCommand, ctx: &mut Context) -> Result<(), CliError> {
    match cmd {
        RatesCommand::Compound(a) => {
            let window = ctx.resolved.pick("rates.window_days", a.window_days, ctx.file.rates.window_days, COMPOUND_WINDOW_DAYS);
            if window == 0 {
                return Err(CliError::Usage("window-days must be positive".into()));
            }
            let cal = ctx.calendar()?;
            let overnight = load_series(ctx, &a.input)?;
            let out = compounded_average(&overnight, &cal, window)?;
            emit_series(ctx, &format!("{}_{window}d.csv", file_stem(&a.input)), &out)
        }
        RatesCommand::Composite(a) => {
            let spread = ctx.resolved.pick("rates.spread", a.spread, ctx.file.rates.spread, 0.0);
            let c = ctx.resolved.pick("rates.sensitivity", a.sensitivity, ctx.file.rates.sensitivity, 1.0);
            let reference = load_series(ctx, &a.reference)?;
            let axi = load_series(ctx, &a.axi)?;
            let spec = CompositeRateSpec::new(reference, spread, c)?;
            let mut out = credit_sensitive_rate(&spec, &axi.series)?;
            out.series.name = a.name.clone();
            emit_series(ctx, &format!("{}.csv", a.name), &out)
        }
        RatesCommand::Calibrate(a) => {
            let target = load_series(ctx, &a.target)?;
            let base = load_series(ctx, &a.base)?;
            let spread = calibrate_equivalent_spread(&target.series, &base.series)?;
            let mut r = Report::new("calibration", &["target", "base", "spread_pct", "spread_bp"]);
            r.push(vec![target.name().into(), base.name().into(), spread.into(), (spread * 100.0).into()]);
            ctx.sink.report(&r)
        }
        RatesCommand::Proxy(a) => {
            let bp = ctx.resolved.pick("rates.proxy_spread_bp", a.spread_bp, ctx.file.rates.proxy_spread_bp, LIBOR_FALLBACK_SPREAD_BP);
            let term = load_series(ctx, &a.term_sofr)?;
            let proxy = libor_proxy(&term, bp)?;
            let out = match (&a.libor, a.cutover) {
                (Some(path), Some(cut)) => {
                    ctx.resolved.note("rates.cutover", cut, crate::config::Source::Flag);
                    let libor = load_series(ctx, path)?;
                    splice_libor(&libor, &proxy, cut)?
                }
                _ => proxy,
            };
            emit_series(ctx, "libor_proxy.csv", &out)
        }
        RatesCommand::Gap(a) => {
            let cal = ctx.calendar()?;
            let daily = load_series(ctx, &a.daily)?;
            let gap = averaging_method_gap(&daily.series, &cal)?;
            emit_series(ctx, "averaging_gap.csv", &RateSeries::new(RateKind::Composite, gap))
        }
    }
}

fn file_stem(p: &std::path::Path) -> String {
    p.file_stem().map_or_else(|| "rate".to_string(), |s| s.to_string_lossy().into_owned())
}
