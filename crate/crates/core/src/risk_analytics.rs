//! Risk-adjusted return of credit-sensitive loan pricing.
//!
//! A loan priced at `R_t + s + c·AXI_t` funded at `R_t + AXI_t + Δ` earns
//! `s + (c−1)·AXI_t − Δ`. With AXI and the bank-specific deviation Δ
//! uncorrelated, its expected return per unit of volatility is
//!
//! ```text
//! RAR(s, c) = (s + (c−1)·mean(AXI)) / sqrt((c−1)²·σ²(AXI) + σ²(Δ))
//! ```
//!
//! and the spread `s'` that keeps the RAR of a SOFR-only loan with spread `s`
//! at sensitivity `c` follows by equating `RAR(s', c) = RAR(s, 0)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index_engine::DailySpreadDecomposition;

/// Moments feeding the RAR algebra, all in percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RarParams {
    pub mean_axi: f64,
    pub sigma_axi: f64,
    pub mean_delta: f64,
    pub sigma_delta: f64,
}

impl Default for RarParams {
    /// Calibration to the June 2016 - April 2025 AXI history.
    fn default() -> Self {
        Self {
            mean_axi: 0.5141,
            sigma_axi: 0.2987,
            mean_delta: -0.0020,
            sigma_delta: 0.3156,
        }
    }
}

impl RarParams {
    pub fn validate(&self) -> Result<()> {
        let all = [self.mean_axi, self.sigma_axi, self.mean_delta, self.sigma_delta];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("RAR parameters must be finite".into()));
        }
        if self.sigma_axi < 0.0 || self.sigma_delta < 0.0 {
            return Err(Error::InvalidParameter("volatilities must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PricingPolicy {
    /// Fixed spread, percent.
    pub fixed_spread: f64,
    /// Share of AXI passed through to the loan rate, in `[0, 1]`.
    pub sensitivity: f64,
}

impl PricingPolicy {
    pub fn new(fixed_spread: f64, sensitivity: f64) -> Result<Self> {
        check_sensitivity(sensitivity)?;
        Ok(Self {
            fixed_spread,
            sensitivity,
        })
    }
}

fn check_sensitivity(c: f64) -> Result<()> {
    if (0.0..=1.0).contains(&c) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("credit sensitivity {c} outside [0, 1]")))
    }
}

fn profit_volatility(c: f64, params: &RarParams) -> f64 {
    let unhedged = c - 1.0;
    (unhedged * unhedged * params.sigma_axi * params.sigma_axi + params.sigma_delta * params.sigma_delta).sqrt()
}

pub fn risk_adjusted_return(policy: &PricingPolicy, params: &RarParams) -> Result<f64> {
    params.validate()?;
    check_sensitivity(policy.sensitivity)?;
    let vol = profit_volatility(policy.sensitivity, params);
    if vol <= 0.0 {
        return Err(Error::DegenerateDenominator(
            "profit volatility is zero (c = 1 with sigma_delta = 0)".into(),
        ));
    }
    Ok((policy.fixed_spread + (policy.sensitivity - 1.0) * params.mean_axi) / vol)
}

/// `sqrt((c−1)²σ²(AXI)+σ²(Δ)) / sqrt(σ²(AXI)+σ²(Δ))`, in (0, 1] for c in [0, 1].
pub fn volatility_ratio(c: f64, params: &RarParams) -> Result<f64> {
    params.validate()?;
    check_sensitivity(c)?;
    let base = profit_volatility(0.0, params);
    if base <= 0.0 {
        return Err(Error::DegenerateDenominator("both volatilities are zero".into()));
    }
    Ok(profit_volatility(c, params) / base)
}

/// Spread at sensitivity `c` matching the RAR of a SOFR-only loan with spread `s`.
pub fn equivalent_spread(s: f64, c: f64, params: &RarParams) -> Result<f64> {
    let ratio = volatility_ratio(c, params)?;
    Ok((1.0 - c) * params.mean_axi + (s - params.mean_axi) * ratio)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscountPoint {
    pub sensitivity: f64,
    /// Percent.
    pub spread_prime: f64,
    /// `s − s'`, percent.
    pub discount: f64,
}

impl DiscountPoint {
    pub fn discount_bp(&self) -> f64 {
        self.discount * 100.0
    }
}

pub fn discount_curve(s: f64, params: &RarParams, grid: &[f64]) -> Result<Vec<DiscountPoint>> {
    grid.iter()
        .map(|&c| {
            let spread_prime = equivalent_spread(s, c, params)?;
            Ok(DiscountPoint {
                sensitivity: c,
                spread_prime,
                discount: s - spread_prime,
            })
        })
        .collect()
}

/// `n + 1` evenly spaced sensitivities from 0 to 1.
pub fn unit_grid(steps: usize) -> Vec<f64> {
    let steps = steps.max(1);
    (0..=steps).map(|i| i as f64 / steps as f64).collect()
}

/// Percentage change in loan demand for a spread cut of `discount` percent.
pub fn demand_impact(discount: f64, elasticity: f64) -> Result<f64> {
    if !(elasticity.is_finite() && elasticity >= 0.0) {
        return Err(Error::InvalidParameter(format!("elasticity {elasticity} must be >= 0")));
    }
    Ok(discount * elasticity)
}

/// One day of the two-point deviation model: LT and ST spreads with their
/// realization probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadSplit {
    pub lt_spread: f64,
    pub st_spread: f64,
    pub lt_weight: f64,
    pub st_weight: f64,
}

/// How Bernoulli probabilities are derived from a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbabilityMode {
    /// Maturity-weighted volume shares (the index weights).
    #[default]
    MaturityWeighted,
    /// Raw dollar-volume shares.
    RawVolume,
}

impl SpreadSplit {
    /// `None` when the day lacks either an ST or an LT spread; such a day has
    /// zero Bernoulli variance.
    pub fn from_decomposition(d: &DailySpreadDecomposition, mode: ProbabilityMode) -> Option<Self> {
        let lt_spread = d.lt_spread()?;
        let st_spread = d.st_spread?;
        let (lt, st) = match mode {
            ProbabilityMode::MaturityWeighted => (d.lt_weight(), d.st_weight),
            ProbabilityMode::RawVolume => (d.lt_volume(), d.st_volume),
        };
        let total = lt + st;
        Some(Self {
            lt_spread,
            st_spread,
            lt_weight: lt / total,
            st_weight: st / total,
        })
    }

    pub fn bernoulli_volatility(&self) -> f64 {
        (self.lt_weight * self.st_weight).sqrt() * (self.lt_spread - self.st_spread).abs()
    }
}

/// `(1/T) Σ sqrt(LT weight · ST weight) · |LT spread − ST spread|`.
pub fn sigma_delta_from_splits(days: &[SpreadSplit]) -> Result<f64> {
    if days.is_empty() {
        return Err(Error::NoData("sigma(delta) needs at least one day".into()));
    }
    Ok(days.iter().map(SpreadSplit::bernoulli_volatility).sum::<f64>() / days.len() as f64)
}

/// σ(Δ) over a decomposition history. Days with only one segment count with
/// zero volatility.
pub fn sigma_delta_estimate(decompositions: &[DailySpreadDecomposition], mode: ProbabilityMode) -> Result<f64> {
    if decompositions.is_empty() {
        return Err(Error::NoData("sigma(delta) needs at least one decomposition".into()));
    }
    let total: f64 = decompositions
        .iter()
        .map(|d| SpreadSplit::from_decomposition(d, mode).map_or(0.0, |s| s.bernoulli_volatility()))
        .sum();
    Ok(total / decompositions.len() as f64)
}
