use std::path::PathBuf;

use clap::{Args, Subcommand};

use axi_core::data_io::parse_indicator_manifest;
use axi_core::stats_lab::{
    granger_series, lagged_correlation, transform, Frequency, TransformKind, TransformSpec, DEFAULT_GRANGER_LAG,
};

use super::{load_series, parse_value};
use crate::report::{Cell, Report};
use crate::{CliError, Context};

#[derive(Debug, Subcommand)]
pub enum StatsCommand {
    /// Lagged correlations of a target series with each indicator in a manifest.
    Corr(CorrArgs),
    /// Granger-causality F-tests in both directions.
    Granger(GrangerArgs),
}

impl StatsCommand {
    pub fn name(&self) -> &'static str {
        match self {
            StatsCommand::Corr(_) => "corr",
            StatsCommand::Granger(_) => "granger",
        }
    }
}

#[derive(Debug, Args)]
pub struct CorrArgs {
    /// Target series, usually AXI.
    #[arg(long)]
    target: PathBuf,
    /// Indicator manifest CSV: name,path,transform[,frequency].
    #[arg(long)]
    manifest: PathBuf,
    /// Highest indicator lag, in periods.
    #[arg(long)]
    max_lag: Option<usize>,
    /// Frequency for indicators that leave it blank.
    #[arg(long)]
    frequency: Option<String>,
    /// Transform applied to the target: none, difference, log_difference.
    #[arg(long)]
    target_transform: Option<String>,
}

#[derive(Debug, Args)]
pub struct GrangerArgs {
    #[arg(long)]
    x: PathBuf,
    #[arg(long)]
    y: PathBuf,
    /// Lag order.
    #[arg(long)]
    lag: Option<usize>,
    /// Transform applied to both series before testing.
    #[arg(long)]
    transform: Option<String>,
    #[arg(long)]
    frequency: Option<String>,
}

pub fn run(cmd: &StatsCommand, ctx: &mut Context) -> Result<(), CliError> {
    match cmd {
        StatsCommand::Corr(a) => corr(a, ctx),
        StatsCommand::Granger(a) => granger(a, ctx),
    }
}

fn frequency(ctx: &mut Context, flag: Option<String>) -> Result<Frequency, CliError> {
    let raw = ctx.resolved.pick("stats.frequency", flag, ctx.file.stats.frequency.clone(), "weekly".into());
    parse_value("frequency", &raw)
}

fn transform_kind(ctx: &mut Context, key: &str, flag: Option<String>) -> Result<TransformKind, CliError> {
    let raw = ctx.resolved.pick(key, flag, ctx.file.stats.transform.clone(), "difference".into());
    parse_value("transform", &raw)
}

fn corr(args: &CorrArgs, ctx: &mut Context) -> Result<(), CliError> {
    let max_lag = ctx.resolved.pick("stats.max_lag", args.max_lag, ctx.file.stats.max_lag, 3);
    let freq = frequency(ctx, args.frequency.clone())?;
    let target_kind = transform_kind(ctx, "stats.target_transform", args.target_transform.clone())?;
    let target = load_series(ctx, &args.target)?;
    let manifest = ctx.input(&args.manifest);
    let specs = parse_indicator_manifest(&manifest, freq)?;

    let mut header = vec!["indicator".to_string(), "transform".to_string(), "frequency".to_string()];
    for lag in 0..=max_lag {
        header.push(format!("corr_lag{lag}"));
        header.push(format!("p_lag{lag}"));
        header.push(format!("n_lag{lag}"));
    }
    let mut report = Report::with_header("correlations", header);
    for spec in specs {
        let indicator = load_series(ctx, &spec.path)?;
        let x = transform(&indicator.series, spec.transform)?;
        let y = transform(&target.series, TransformSpec { kind: target_kind, frequency: spec.transform.frequency })?;
        let results = lagged_correlation(&y, &x, max_lag)?;
        let mut cells: Vec<Cell> = vec![
            spec.name.into(),
            format!("{:?}", spec.transform.kind).to_ascii_lowercase().into(),
            format!("{:?}", spec.transform.frequency).to_ascii_lowercase().into(),
        ];
        for r in results {
            cells.extend([Cell::Num(r.correlation), Cell::Num(r.p_value), r.n.into()]);
        }
        report.push(cells);
    }
    ctx.sink.report(&report)
}

fn granger(args: &GrangerArgs, ctx: &mut Context) -> Result<(), CliError> {
    let lag = ctx.resolved.pick("stats.granger_lag", args.lag, ctx.file.stats.granger_lag, DEFAULT_GRANGER_LAG);
    let freq = frequency(ctx, args.frequency.clone())?;
    let kind = transform_kind(ctx, "stats.transform", args.transform.clone())?;
    let spec = TransformSpec { kind, frequency: freq };
    let x = load_series(ctx, &args.x)?;
    let y = load_series(ctx, &args.y)?;
    let report = granger_series(&transform(&x.series, spec)?, &transform(&y.series, spec)?, lag)?;

    let mut out = Report::new(
        "granger",
        &["direction", "lag", "f_statistic", "p_value", "df_numerator", "df_denominator"],
    );
    let labels = [
        format!("{} -> {}", x.name(), y.name()),
        format!("{} -> {}", y.name(), x.name()),
    ];
    for (label, r) in labels.into_iter().zip([report.x_causes_y, report.y_causes_x]) {
        out.push(vec![
            label.into(),
            r.lag.into(),
            r.f_statistic.into(),
            r.p_value.into(),
            r.df_numerator.into(),
            r.df_denominator.into(),
        ]);
    }
    ctx.sink.report(&out)
}
