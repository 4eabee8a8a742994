use chrono::NaiveDate;
use clap::Args;

use axi_core::data_io::{generate_sofr, generate_synthetic, write_transactions, SyntheticConfig};

use super::emit_series;
use crate::config::Source;
use crate::{CliError, Context};

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Generator seed.
    #[arg(long)]
    seed: Option<u64>,
    /// First calendar date (YYYY-MM-DD).
    #[arg(long)]
    start: Option<NaiveDate>,
    /// Last calendar date (YYYY-MM-DD).
    #[arg(long)]
    end: Option<NaiveDate>,
}

pub fn run(args: &SynthArgs, ctx: &mut Context) -> Result<(), CliError> {
    ctx.sink.require_dir("synth")?;
    let (mut cfg, source) = match &ctx.file.synth {
        Some(table) => (SyntheticConfig::from_toml_str(&table.to_string())?, Source::Config),
        None => (SyntheticConfig::default(), Source::Default),
    };
    let file_keys: Vec<String> = ctx.file.synth.as_ref().map(|t| t.keys().cloned().collect()).unwrap_or_default();
    let src = |key: &str| if file_keys.iter().any(|k| k == key) { source } else { Source::Default };

    let seed_src = if args.seed.is_some() { Source::Flag } else { src("seed") };
    let start_src = if args.start.is_some() { Source::Flag } else { src("start") };
    let end_src = if args.end.is_some() { Source::Flag } else { src("end") };
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    cfg.start = args.start.unwrap_or(cfg.start);
    cfg.end = args.end.unwrap_or(cfg.end);
    cfg.validate()?;

    let resolved_toml = cfg.to_toml_string();
    let table: toml::Table = toml::from_str(&resolved_toml).map_err(|e| CliError::Data(e.to_string()))?;
    for (key, value) in &table {
        let s = match key.as_str() {
            "seed" => seed_src,
            "start" => start_src,
            "end" => end_src,
            k => src(k),
        };
        match value {
            toml::Value::String(v) => ctx.resolved.note(&format!("synth.{key}"), v, s),
            v => ctx.resolved.note(&format!("synth.{key}"), v, s),
        }
    }

    let txs = generate_synthetic(&cfg)?;
    let mut buf = Vec::new();
    write_transactions(&mut buf, &txs, &cfg.header_comments())
        .map_err(|e| CliError::Data(format!("serialize transactions: {e}")))?;
    ctx.sink.file("transactions.csv", &buf)?;
    emit_series(ctx, "sofr.csv", &generate_sofr(&cfg)?)?;
    ctx.sink.file("synth_config.toml", resolved_toml.as_bytes())?;
    Ok(())
}
