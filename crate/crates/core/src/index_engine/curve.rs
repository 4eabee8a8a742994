use crate::error::{Error, Result};

/// Risk-free term structure for one date: `(tenor in years, rate in percent)`
/// nodes, linearly interpolated and flat beyond the end nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskFreeCurve {
    nodes: Vec<(f64, f64)>,
}

impl RiskFreeCurve {
    pub fn new(mut nodes: Vec<(f64, f64)>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidParameter("risk-free curve has no nodes".into()));
        }
        if nodes.iter().any(|(t, r)| !t.is_finite() || !r.is_finite() || *t < 0.0) {
            return Err(Error::InvalidParameter("risk-free curve nodes must be finite, tenors >= 0".into()));
        }
        nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
        if nodes.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameter("risk-free curve has duplicate tenors".into()));
        }
        Ok(Self { nodes })
    }

    pub fn rate(&self, tenor: f64) -> f64 {
        let first = self.nodes[0];
        let last = self.nodes[self.nodes.len() - 1];
        if tenor <= first.0 {
            return first.1;
        }
        if tenor >= last.0 {
            return last.1;
        }
        let i = self.nodes.partition_point(|(t, _)| *t <= tenor);
        let (t0, r0) = self.nodes[i - 1];
        let (t1, r1) = self.nodes[i];
        r0 + (r1 - r0) * (tenor - t0) / (t1 - t0)
    }

    /// Trade rate minus the matched-tenor risk-free rate.
    pub fn spread(&self, trade_rate: f64, maturity: f64) -> f64 {
        trade_rate - self.rate(maturity)
    }
}
