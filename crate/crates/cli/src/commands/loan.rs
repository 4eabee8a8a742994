use std::path::PathBuf;

use chrono::NaiveDate;
use clap::{Args, Subcommand};

use axi_core::loan_pricing::{
    cumulative_profit, horizon_days, stress_report, LoanSpec, StressWindow, DEFAULT_HORIZONS_MONTHS,
};

use super::{load_series, parse_value, split_pair};
use crate::report::{Cell, Report};
use crate::{CliError, Context};

const DEFAULT_NOTIONAL: f64 = 1_000_000.0;

#[derive(Debug, Subcommand)]
pub enum LoanCommand {
    /// Profit advantage of a benchmark loan over alternatives per stress window and horizon.
    Report(ReportArgs),
    /// Cumulative profit paths from one start date.
    Path(PathArgs),
}

impl LoanCommand {
    pub fn name(&self) -> &'static str {
        match self {
            LoanCommand::Report(_) => "report",
            LoanCommand::Path(_) => "path",
        }
    }
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Funding cost series (e.g. SOFR average + AXI).
    #[arg(long)]
    funding: PathBuf,
    /// Benchmark loan rate as NAME=PATH.
    #[arg(long)]
    benchmark: String,
    /// Alternative loan rate as NAME=PATH; repeatable.
    #[arg(long = "alt", required = true)]
    alternatives: Vec<String>,
    /// Stress window as NAME=YYYY-MM-DD; repeatable.
    #[arg(long = "window")]
    windows: Vec<String>,
    /// Horizons in months, comma separated.
    #[arg(long, value_delimiter = ',')]
    horizons: Option<Vec<u32>>,
    /// Notional, USD.
    #[arg(long)]
    notional: Option<f64>,
    /// annualized (bp per year) or period (bp of notional over the horizon).
    #[arg(long)]
    basis: Option<String>,
}

#[derive(Debug, Args)]
pub struct PathArgs {
    /// Funding cost series.
    #[arg(long)]
    funding: PathBuf,
    /// Loan rate as NAME=PATH; repeatable.
    #[arg(long = "loan", required = true)]
    loans: Vec<String>,
    /// Loan start date; accrual begins the next day.
    #[arg(long)]
    start: NaiveDate,
    /// Horizon in calendar months.
    #[arg(long, default_value_t = 3)]
    months: u32,
    #[arg(long)]
    notional: Option<f64>,
}

fn default_windows() -> Vec<StressWindow> {
    vec![
        StressWindow { name: "pandemic".into(), start: NaiveDate::from_ymd_opt(2020, 3, 1).unwrap() },
        StressWindow { name: "svb".into(), start: NaiveDate::from_ymd_opt(2023, 3, 1).unwrap() },
    ]
}

fn load_loan(ctx: &mut Context, flag: &str, raw: &str, notional: f64) -> Result<LoanSpec, CliError> {
    let (name, path) = split_pair(flag, raw)?;
    let rate = load_series(ctx, &PathBuf::from(path))?;
    Ok(LoanSpec::new(name, notional, rate)?)
}

pub fn run(cmd: &LoanCommand, ctx: &mut Context) -> Result<(), CliError> {
    match cmd {
        LoanCommand::Report(a) => report(a, ctx),
        LoanCommand::Path(a) => path(a, ctx),
    }
}

fn report(args: &ReportArgs, ctx: &mut Context) -> Result<(), CliError> {
    let notional = ctx.resolved.pick("loan.notional", args.notional, ctx.file.loan.notional, DEFAULT_NOTIONAL);
    let horizons = ctx.resolved.pick(
        "loan.horizons",
        args.horizons.clone().map(Horizons),
        ctx.file.loan.horizons.clone().map(Horizons),
        Horizons(DEFAULT_HORIZONS_MONTHS.to_vec()),
    );
    let basis = ctx.resolved.pick("loan.basis", args.basis.clone(), ctx.file.loan.basis.clone(), "annualized".into());
    let annualized = match basis.as_str() {
        "annualized" => true,
        "period" => false,
        other => return Err(CliError::Usage(format!("unknown basis '{other}' (annualized, period)"))),
    };
    let windows = if args.windows.is_empty() {
        default_windows()
    } else {
        args.windows
            .iter()
            .map(|raw| {
                let (name, date) = split_pair("--window", raw)?;
                Ok(StressWindow { name: name.to_string(), start: parse_value("--window", date)? })
            })
            .collect::<Result<Vec<_>, CliError>>()?
    };
    for w in &windows {
        ctx.resolved.note(&format!("loan.window.{}", w.name), w.start, if args.windows.is_empty() {
            crate::config::Source::Default
        } else {
            crate::config::Source::Flag
        });
    }

    let cal = ctx.calendar()?;
    let funding = load_series(ctx, &args.funding)?;
    let benchmark = load_loan(ctx, "--benchmark", &args.benchmark, notional)?;
    let alternatives = args
        .alternatives
        .iter()
        .map(|raw| load_loan(ctx, "--alt", raw, notional))
        .collect::<Result<Vec<_>, CliError>>()?;

    let rows = stress_report(&benchmark, &alternatives, &funding, &cal, &windows, &horizons.0)?;
    let mut header = vec!["window".to_string(), "benchmark".to_string(), "alternative".to_string()];
    header.extend(horizons.0.iter().map(|h| format!("{h}m_bp")));
    let mut out = Report::with_header("stress_report", header);
    for row in rows {
        let mut cells: Vec<Cell> = vec![row.window.into(), row.benchmark.into(), row.alternative.into()];
        cells.extend(row.cells.iter().map(|c| Cell::Num(if annualized { c.annualized_bp } else { c.period_bp })));
        out.push(cells);
    }
    ctx.sink.report(&out)
}

fn path(args: &PathArgs, ctx: &mut Context) -> Result<(), CliError> {
    let notional = ctx.resolved.pick("loan.notional", args.notional, ctx.file.loan.notional, DEFAULT_NOTIONAL);
    ctx.resolved.note("loan.start", args.start, crate::config::Source::Flag);
    ctx.resolved.note("loan.months", args.months, crate::config::Source::Flag);
    let cal = ctx.calendar()?;
    let funding = load_series(ctx, &args.funding)?;
    let days = horizon_days(args.start, args.months)?;
    let paths = args
        .loans
        .iter()
        .map(|raw| {
            let loan = load_loan(ctx, "--loan", raw, notional)?;
            Ok(cumulative_profit(&loan, &funding, &cal, args.start, days)?)
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut header = vec!["date".to_string()];
    header.extend(paths.iter().map(|p| format!("{}_usd", p.loan)));
    let mut out = Report::with_header("profit_paths", header);
    for i in 0..days as usize {
        let mut cells: Vec<Cell> = vec![paths[0].points[i].0.into()];
        cells.extend(paths.iter().map(|p| Cell::Num(p.points[i].1)));
        out.push(cells);
    }
    ctx.sink.report(&out)
}

#[derive(Debug, Clone)]
struct Horizons(Vec<u32>);

impl std::fmt::Display for Horizons {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}
