use std::path::PathBuf;

use clap::{Args, Subcommand};

use axi_core::data_io::parse_decompositions;
use axi_core::risk_analytics::{
    demand_impact, discount_curve, equivalent_spread, risk_adjusted_return, sigma_delta_estimate, unit_grid,
    PricingPolicy, ProbabilityMode, RarParams,
};

use crate::report::Report;
use crate::{CliError, Context};

#[derive(Debug, Subcommand)]
pub enum RiskCommand {
    /// Spread discount across credit sensitivities c in [0, 1].
    Curve(CurveArgs),
    /// Risk-adjusted return of one pricing policy.
    Rar(PolicyArgs),
    /// RAR-equivalent spread and discount at one sensitivity.
    Spread(PolicyArgs),
    /// Bank-specific funding volatility estimated from daily decompositions.
    SigmaDelta(SigmaDeltaArgs),
    /// Loan demand change implied by a spread discount.
    Demand(DemandArgs),
}

impl RiskCommand {
    pub fn name(&self) -> &'static str {
        match self {
            RiskCommand::Curve(_) => "curve",
            RiskCommand::Rar(_) => "rar",
            RiskCommand::Spread(_) => "spread",
            RiskCommand::SigmaDelta(_) => "sigma-delta",
            RiskCommand::Demand(_) => "demand",
        }
    }
}

/// Moments in percent; defaults are the published calibration.
#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long)]
    mean_axi: Option<f64>,
    #[arg(long)]
    sigma_axi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mean_delta: Option<f64>,
    #[arg(long)]
    sigma_delta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Spread of the SOFR-only loan, percent.
    #[arg(long)]
    spread: Option<f64>,
    /// Grid intervals between c = 0 and c = 1.
    #[arg(long)]
    steps: Option<usize>,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct PolicyArgs {
    /// Fixed spread, percent.
    #[arg(long, allow_hyphen_values = true)]
    spread: Option<f64>,
    /// Credit sensitivity c in [0, 1].
    #[arg(long)]
    sensitivity: Option<f64>,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct SigmaDeltaArgs {
    /// Decomposition CSV written by `index compute`.
    #[arg(long)]
    decompositions: PathBuf,
    /// maturity-weighted or raw-volume probabilities.
    #[arg(long)]
    mode: Option<String>,
}

#[derive(Debug, Args)]
pub struct DemandArgs {
    /// Spread discount, percent.
    #[arg(long)]
    discount: f64,
    /// Demand elasticity per percentage point.
    #[arg(long)]
    elasticity: Option<f64>,
}

fn params(args: &ParamArgs, ctx: &mut Context) -> Result<RarParams, CliError> {
    let d = RarParams::default();
    let cfg = &ctx.file.risk;
    let (ma, sa, md, sd) = (cfg.mean_axi, cfg.sigma_axi, cfg.mean_delta, cfg.sigma_delta);
    let p = RarParams {
        mean_axi: ctx.resolved.pick("risk.mean_axi", args.mean_axi, ma, d.mean_axi),
        sigma_axi: ctx.resolved.pick("risk.sigma_axi", args.sigma_axi, sa, d.sigma_axi),
        mean_delta: ctx.resolved.pick("risk.mean_delta", args.mean_delta, md, d.mean_delta),
        sigma_delta: ctx.resolved.pick("risk.sigma_delta", args.sigma_delta, sd, d.sigma_delta),
    };
    p.validate()?;
    Ok(p)
}

fn policy(args: &PolicyArgs, ctx: &mut Context) -> Result<(PricingPolicy, RarParams), CliError> {
    let s = ctx.resolved.pick("risk.spread", args.spread, ctx.file.risk.spread, 1.0);
    let c = ctx.resolved.pick("risk.sensitivity", args.sensitivity, ctx.file.risk.sensitivity, 1.0);
    let policy = PricingPolicy::new(s, c).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((policy, params(&args.params, ctx)?))
}

pub fn run(cmd: &RiskCommand, ctx: &mut Context) -> Result<(), CliError> {
    match cmd {
        RiskCommand::Curve(a) => {
            let s = ctx.resolved.pick("risk.spread", a.spread, ctx.file.risk.spread, 1.0);
            let steps = ctx.resolved.pick("risk.steps", a.steps, ctx.file.risk.steps, 100);
            if steps == 0 {
                return Err(CliError::Usage("steps must be positive".into()));
            }
            let p = params(&a.params, ctx)?;
            let mut r = Report::new("discount_curve", &["c", "spread_prime_pct", "discount_bp"]);
            for pt in discount_curve(s, &p, &unit_grid(steps))? {
                r.push(vec![pt.sensitivity.into(), pt.spread_prime.into(), pt.discount_bp().into()]);
            }
            ctx.sink.report(&r)
        }
        RiskCommand::Rar(a) => {
            let (pol, p) = policy(a, ctx)?;
            let rar = risk_adjusted_return(&pol, &p)?;
            let mut r = Report::new("rar", &["spread_pct", "c", "rar"]);
            r.push(vec![pol.fixed_spread.into(), pol.sensitivity.into(), rar.into()]);
            ctx.sink.report(&r)
        }
        RiskCommand::Spread(a) => {
            let (pol, p) = policy(a, ctx)?;
            let s_prime = equivalent_spread(pol.fixed_spread, pol.sensitivity, &p)?;
            let rar = risk_adjusted_return(&PricingPolicy::new(s_prime, pol.sensitivity)?, &p)?;
            let mut r = Report::new("equivalent_spread", &["spread_pct", "c", "spread_prime_pct", "discount_bp", "rar"]);
            r.push(vec![
                pol.fixed_spread.into(),
                pol.sensitivity.into(),
                s_prime.into(),
                ((pol.fixed_spread - s_prime) * 100.0).into(),
                rar.into(),
            ]);
            ctx.sink.report(&r)
        }
        RiskCommand::SigmaDelta(a) => {
            let raw = ctx.resolved.pick("risk.mode", a.mode.clone(), ctx.file.risk.mode.clone(), "maturity-weighted".into());
            let mode = match raw.as_str() {
                "maturity-weighted" => ProbabilityMode::MaturityWeighted,
                "raw-volume" => ProbabilityMode::RawVolume,
                other => return Err(CliError::Usage(format!("unknown mode '{other}' (maturity-weighted, raw-volume)"))),
            };
            let path = ctx.input(&a.decompositions);
            let decomps = parse_decompositions(&path)?;
            let sigma = sigma_delta_estimate(&decomps, mode)?;
            let mut r = Report::new("sigma_delta", &["days", "mode", "sigma_delta_pct"]);
            r.push(vec![decomps.len().into(), raw.into(), sigma.into()]);
            ctx.sink.report(&r)
        }
        RiskCommand::Demand(a) => {
            let e = ctx.resolved.pick("risk.elasticity", a.elasticity, ctx.file.risk.elasticity, 25.0);
            ctx.resolved.note("risk.discount", a.discount, crate::config::Source::Flag);
            let impact = demand_impact(a.discount, e).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut r = Report::new("demand_impact", &["discount_pct", "elasticity", "demand_change_pct"]);
            r.push(vec![a.discount.into(), e.into(), impact.into()]);
            ctx.sink.report(&r)
        }
    }
}
