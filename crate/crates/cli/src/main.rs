mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{FileConfig, Resolved, Source};
use report::{Format, Manifest, Sink};

/// Credit-spread index engine: index construction, reference rates, loan
/// stress tests, risk-adjusted pricing and indicator statistics.
#[derive(Debug, Parser)]
#[command(name = "axi", version, propagate_version = true)]
pub struct Cli {
    /// TOML config file. Flags override it; it overrides built-in defaults.
    #[arg(long, global = true, env = "AXI_CONFIG")]
    config: Option<PathBuf>,

    /// Report format: csv, table or json. Data artifacts are always CSV.
    #[arg(long, global = true)]
    format: Option<Format>,

    /// Output directory. Reports go to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Holiday file (one ISO date per line) added to the weekday calendar.
    #[arg(long, global = true)]
    holidays: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate seeded synthetic transactions and an overnight rate series.
    Synth(commands::synth::SynthArgs),
    /// Build AXI/FXI from transactions.
    #[command(subcommand)]
    Index(commands::index::IndexCommand),
    /// Reference-rate construction.
    #[command(subcommand)]
    Rates(commands::rates::RatesCommand),
    /// Loan profitability under alternative indexing schemes.
    #[command(subcommand)]
    Loan(commands::loan::LoanCommand),
    /// Risk-adjusted return and spread-discount analytics.
    #[command(subcommand)]
    Risk(commands::risk::RiskCommand),
    /// Correlation and Granger-causality statistics.
    #[command(subcommand)]
    Stats(commands::stats::StatsCommand),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl From<axi_core::Error> for CliError {
    fn from(e: axi_core::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

/// State shared by every subcommand.
pub struct Context {
    pub file: FileConfig,
    pub resolved: Resolved,
    pub sink: Sink,
    pub holidays: Option<PathBuf>,
    pub inputs: Vec<PathBuf>,
}

impl Context {
    pub fn calendar(&mut self) -> Result<axi_core::BusinessCalendar, CliError> {
        let path = self.resolved.pick_opt(
            "holidays",
            self.holidays.clone().map(|p| p.display().to_string()),
            self.file.holidays.clone().map(|p| p.display().to_string()),
        );
        let cal = axi_core::BusinessCalendar::weekdays();
        Ok(match path {
            Some(p) => {
                let p = PathBuf::from(p);
                self.inputs.push(p.clone());
                cal.with_holidays(axi_core::data_io::parse_holidays(&p)?)
            }
            None => cal,
        })
    }

    pub fn input(&mut self, path: &std::path::Path) -> PathBuf {
        self.inputs.push(path.to_path_buf());
        path.to_path_buf()
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Synth(_) => "synth".to_string(),
        Command::Index(c) => format!("index {}", c.name()),
        Command::Rates(c) => format!("rates {}", c.name()),
        Command::Loan(c) => format!("loan {}", c.name()),
        Command::Risk(c) => format!("risk {}", c.name()),
        Command::Stats(c) => format!("stats {}", c.name()),
    }
}

fn run(cli: Cli) -> Result<Context, (CliError, Option<Box<Context>>)> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p).map_err(|e| (e, None))?,
        None => FileConfig::default(),
    };
    let mut resolved = Resolved::default();
    let config_format = match file.format.as_deref().map(str::parse::<Format>).transpose() {
        Ok(f) => f,
        Err(e) => return Err((CliError::Usage(format!("config format: {e}")), None)),
    };
    let format = resolved.pick("format", cli.format, config_format, Format::Csv);
    resolved.note(
        "config_file",
        cli.config.as_ref().map_or("none".to_string(), |p| p.display().to_string()),
        if cli.config.is_some() { Source::Flag } else { Source::Default },
    );
    let sink = Sink::new(cli.out.clone(), format).map_err(|e| (e, None))?;
    let mut ctx = Context { file, resolved, sink, holidays: cli.holidays.clone(), inputs: Vec::new() };
    let result = match &cli.command {
        Command::Synth(a) => commands::synth::run(a, &mut ctx),
        Command::Index(c) => commands::index::run(c, &mut ctx),
        Command::Rates(c) => commands::rates::run(c, &mut ctx),
        Command::Loan(c) => commands::loan::run(c, &mut ctx),
        Command::Risk(c) => commands::risk::run(c, &mut ctx),
        Command::Stats(c) => commands::stats::run(c, &mut ctx),
    };
    match result {
        Ok(()) => Ok(ctx),
        Err(e) => Err((e, Some(Box::new(ctx)))),
    }
}

fn manifest(command: &str, ctx: &Context, exit_code: u8, error: Option<&str>) -> Manifest {
    let mut lines = vec![
        format!("tool=axi {}", env!("CARGO_PKG_VERSION")),
        format!("generator={}", axi_core::data_io::GENERATOR_VERSION),
        format!("subcommand={command}"),
        format!("exit_code={exit_code}"),
        "exit_code.meaning=0 ok; 1 data or validation error; 2 usage error".to_string(),
        format!(
            "inputs={}",
            ctx.inputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(";")
        ),
        format!(
            "output_dir={}",
            ctx.sink.dir.as_ref().map_or("stdout".to_string(), |d| d.display().to_string())
        ),
        format!(
            "outputs={}",
            ctx.sink
                .written
                .iter()
                .filter_map(|p| p.file_name())
                .map(|n| n.to_string_lossy().into_owned())
                .collect::<Vec<_>>()
                .join(";")
        ),
    ];
    lines.extend(ctx.resolved.lines());
    for (i, w) in ctx.sink.warnings.iter().enumerate() {
        lines.push(format!("warning.{i}={w}"));
    }
    if let Some(e) = error {
        lines.push(format!("error={}", e.replace('\n', " ")));
    }
    lines.push(format!("generated_at={}", chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)));
    Manifest { lines }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let command = command_name(&cli.command);
    match run(cli) {
        Ok(ctx) => match manifest(&command, &ctx, 0, None).write(ctx.sink.dir.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(CliError::Data(m) | CliError::Usage(m)) => {
                eprintln!("error: {m}");
                ExitCode::from(1)
            }
        },
        Err((err, ctx)) => {
            let (code, msg) = match err {
                CliError::Usage(m) => (2u8, m),
                CliError::Data(m) => (1u8, m),
            };
            eprintln!("error: {msg}");
            if code == 2 {
                eprintln!("run 'axi --help' for usage");
            }
            if let Some(ctx) = ctx {
                let _ = manifest(&command, &ctx, code, Some(&msg)).write(ctx.sink.dir.as_deref());
            }
            ExitCode::from(code)
        }
    }
}
