use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Args, Subcommand};

use axi_core::data_io::{apply_curves, parse_curves, parse_transactions, write_decompositions};
use axi_core::index_engine::{
    compute_index, default_min_volume, fallback_value, IndexConfig, IndexScope, WindowAlignment, INDEX_WINDOW,
};
use axi_core::{RateKind, RateSeries};

use super::{emit_series, load_series, parse_value};
use crate::report::Report;
use crate::{CliError, Context};

#[derive(Debug, Subcommand)]
pub enum IndexCommand {
    /// Daily decompositions, daily spreads and the rolling index.
    Compute(ComputeArgs),
    /// AXI with FXI substituted on thin-volume days.
    Fallback(FallbackArgs),
}

impl IndexCommand {
    pub fn name(&self) -> &'static str {
        match self {
            IndexCommand::Compute(_) => "compute",
            IndexCommand::Fallback(_) => "fallback",
        }
    }
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// Transaction CSV.
    #[arg(long = "in")]
    input: PathBuf,
    /// axi (bank trades) or fxi (all trades).
    #[arg(long)]
    scope: Option<String>,
    /// Rolling window in business days.
    #[arg(long)]
    window: Option<usize>,
    /// ending-at (window includes the date) or preceding (published next business day).
    #[arg(long)]
    alignment: Option<String>,
    /// Risk-free curves (date,tenor_years,rate_pct); transaction spreads are then read as all-in rates.
    #[arg(long)]
    curves: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FallbackArgs {
    /// AXI index series.
    #[arg(long)]
    axi: PathBuf,
    /// AXI daily eligible volume series.
    #[arg(long)]
    axi_volume: PathBuf,
    /// FXI index series.
    #[arg(long)]
    fxi: PathBuf,
    /// Fixed USD threshold. Overrides --min-volume-fraction.
    #[arg(long)]
    min_volume: Option<f64>,
    /// Threshold as a fraction of the median volume over the prior window.
    #[arg(long)]
    min_volume_fraction: Option<f64>,
}

pub fn run(cmd: &IndexCommand, ctx: &mut Context) -> Result<(), CliError> {
    match cmd {
        IndexCommand::Compute(a) => compute(a, ctx),
        IndexCommand::Fallback(a) => fallback(a, ctx),
    }
}

fn compute(args: &ComputeArgs, ctx: &mut Context) -> Result<(), CliError> {
    ctx.sink.require_dir("index compute")?;
    let scope_raw = ctx.resolved.pick("index.scope", args.scope.clone(), ctx.file.index.scope.clone(), "axi".into());
    let scope: IndexScope = parse_value("scope", &scope_raw)?;
    let window = ctx.resolved.pick("index.window", args.window, ctx.file.index.window, INDEX_WINDOW);
    if window == 0 {
        return Err(CliError::Usage("window must be positive".into()));
    }
    let alignment_raw = ctx.resolved.pick(
        "index.alignment",
        args.alignment.clone(),
        ctx.file.index.alignment.clone(),
        "ending-at".into(),
    );
    let alignment = match alignment_raw.as_str() {
        "ending-at" => WindowAlignment::EndingAt,
        "preceding" => WindowAlignment::Preceding,
        other => return Err(CliError::Usage(format!("unknown alignment '{other}' (ending-at, preceding)"))),
    };
    let calendar = ctx.calendar()?;

    let path = ctx.input(&args.input);
    let parsed = parse_transactions(&path)?;
    for w in parsed.warnings {
        ctx.sink.warn(w);
    }
    let mut txs = parsed.value;
    if let Some(curves) = &args.curves {
        let curves_path = ctx.input(curves);
        txs = apply_curves(&txs, &parse_curves(&curves_path)?)?;
    }
    ctx.resolved.note("index.curves", args.curves.is_some(), crate::config::Source::Flag);

    let config = IndexConfig { window, alignment, calendar, parallel: true };
    let name = scope.as_str().to_ascii_uppercase();
    if txs.is_empty() {
        write_empty(ctx, &name)?;
        return Ok(());
    }
    let run = match compute_index(&txs, scope, &config) {
        Ok(run) => run,
        Err(axi_core::Error::NoData(msg)) => {
            ctx.sink.warn(msg);
            write_empty(ctx, &name)?;
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    for s in &run.skipped {
        ctx.sink.warn(format!("{} skipped: {}", s.date, s.reason));
    }
    if run.index.is_empty() {
        ctx.sink.warn(format!(
            "{} published days is fewer than the {window}-day window; index is empty",
            run.daily.len()
        ));
    }

    let mut buf = Vec::new();
    write_decompositions(&mut buf, &run.decompositions).map_err(|e| CliError::Data(e.to_string()))?;
    ctx.sink.file("decompositions.csv", &buf)?;
    emit_series(ctx, "daily.csv", &RateSeries::new(RateKind::Overnight, run.daily.clone()))?;
    emit_series(ctx, "index.csv", &RateSeries::new(RateKind::Average21bdSimple, run.index.clone()))?;
    emit_series(ctx, "lt_weight.csv", &RateSeries::new(RateKind::Average21bdSimple, run.lt_weight.clone()))?;
    emit_series(ctx, "volume.csv", &RateSeries::new(RateKind::Overnight, run.volume.clone()))?;

    let mut summary = Report::new("summary", &SUMMARY_HEADER);
    for d in &run.decompositions {
        summary.push(vec![
            d.date.into(),
            d.daily_spread.into(),
            run.index.get(d.date).into(),
            run.lt_weight.get(d.date).into(),
            d.total_volume().into(),
            d.weighted_avg_maturity.into(),
        ]);
    }
    ctx.sink.report(&summary)
}

const SUMMARY_HEADER: [&str; 6] =
    ["date", "daily_spread_pct", "index_pct", "lt_weight", "volume_usd", "weighted_avg_maturity"];

fn write_empty(ctx: &mut Context, name: &str) -> Result<(), CliError> {
    let mut buf = Vec::new();
    write_decompositions(&mut buf, &[]).map_err(|e| CliError::Data(e.to_string()))?;
    ctx.sink.warn("no eligible transactions; wrote header-only outputs");
    ctx.sink.file("decompositions.csv", &buf)?;
    let empty = |kind| RateSeries::new(kind, axi_core::IndexSeries::empty(name));
    emit_series(ctx, "daily.csv", &empty(RateKind::Overnight))?;
    emit_series(ctx, "index.csv", &empty(RateKind::Average21bdSimple))?;
    emit_series(ctx, "lt_weight.csv", &empty(RateKind::Average21bdSimple))?;
    emit_series(ctx, "volume.csv", &empty(RateKind::Overnight))?;
    ctx.sink.report(&Report::new("summary", &SUMMARY_HEADER))
}

fn fallback(args: &FallbackArgs, ctx: &mut Context) -> Result<(), CliError> {
    let axi = load_series(ctx, &args.axi)?;
    let volume = load_series(ctx, &args.axi_volume)?;
    let fxi = load_series(ctx, &args.fxi)?;
    let fixed = ctx.resolved.pick_opt("fallback.min_volume", args.min_volume, None);
    let fraction = ctx.resolved.pick(
        "fallback.min_volume_fraction",
        args.min_volume_fraction,
        ctx.file.index.min_volume_fraction,
        0.5,
    );
    let invalid = |v: f64| v.is_nan() || v < 0.0;
    if fixed.is_some_and(invalid) || invalid(fraction) {
        return Err(CliError::Usage("volume thresholds must be >= 0".into()));
    }

    let dates: BTreeSet<_> = axi.series.dates().chain(fxi.series.dates()).collect();
    let mut report = Report::new("fallback", &["date", "value_pct", "source", "min_volume_usd"]);
    let mut points = Vec::new();
    for date in dates {
        let threshold = fixed.or_else(|| default_min_volume(&volume.series, date, fraction, INDEX_WINDOW)).unwrap_or(0.0);
        let (value, source) = fallback_value(date, &axi.series, &volume.series, &fxi.series, threshold)?;
        points.push((date, value));
        report.push(vec![date.into(), value.into(), source.as_str().into(), threshold.into()]);
    }
    let series = RateSeries::from_points(RateKind::Average21bdSimple, "AXI with FXI fallback", points)?;
    if ctx.sink.dir.is_some() {
        emit_series(ctx, "fallback.csv", &series)?;
    }
    ctx.sink.report(&report)
}
