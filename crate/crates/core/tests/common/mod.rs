//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use axi_core::index_engine::{ScopeTag, Transaction};
use chrono::NaiveDate;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Weighted median by brute force: for every candidate value, total the
/// weight at or below it and take the first that reaches half.
pub fn oracle_median(items: &[(f64, f64)]) -> Option<f64> {
    let total: f64 = items.iter().map(|(_, w)| w).sum();
    if total <= 0.0 {
        return None;
    }
    let half = total / 2.0;
    let mut candidates: Vec<f64> = items.iter().filter(|(_, w)| *w > 0.0).map(|(v, _)| *v).collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    for (k, &v) in candidates.iter().enumerate() {
        let at_or_below: f64 = items.iter().filter(|(x, w)| *w > 0.0 && *x <= v).map(|(_, w)| w).sum();
        if at_or_below == half {
            return Some(candidates.get(k + 1).map_or(v, |next| (v + next) / 2.0));
        }
        if at_or_below > half {
            return Some(v);
        }
    }
    candidates.last().copied()
}

pub struct OracleDay {
    pub medians: [Option<f64>; 5],
    pub weights: [f64; 5],
    pub daily_spread: f64,
}

fn in_bucket(b: usize, m: f64) -> bool {
    match b {
        0 => m > 0.0 && m < 1.0,
        1 => (1.0..2.0).contains(&m),
        2 => (2.0..3.0).contains(&m),
        3 => (3.0..4.0).contains(&m),
        _ => (4.0..=5.0).contains(&m),
    }
}

/// Daily composite spread straight from the definitions, one bucket at a time.
pub fn oracle_daily(txs: &[Transaction]) -> Option<OracleDay> {
    let mut medians = [None; 5];
    let mut products = [0.0; 5];
    for b in 0..5 {
        let trades: Vec<&Transaction> = txs.iter().filter(|t| t.volume > 0.0 && in_bucket(b, t.maturity)).collect();
        if trades.is_empty() {
            continue;
        }
        let volume: f64 = trades.iter().map(|t| t.volume).sum();
        let mv: f64 = trades.iter().map(|t| t.maturity * t.volume).sum();
        products[b] = mv / volume * volume;
        let pairs: Vec<(f64, f64)> = trades.iter().map(|t| (t.spread, t.volume)).collect();
        medians[b] = oracle_median(&pairs);
    }
    let total: f64 = products.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let weights = products.map(|p| p / total);
    let mut daily = 0.0;
    for b in 0..5 {
        if let Some(m) = medians[b] {
            daily += m * weights[b];
        }
    }
    Some(OracleDay { medians, weights, daily_spread: daily })
}

/// A random single-day transaction set with integer volumes, spread ties,
/// bucket-edge maturities and the odd ineligible or zero-volume trade.
pub fn random_day(rng: &mut ChaCha8Rng, date: NaiveDate, max_trades: usize) -> Vec<Transaction> {
    let n = rng.random_range(1..=max_trades);
    (0..n)
        .map(|_| {
            let maturity = match rng.random_range(0..10) {
                0 => [1.0, 2.0, 3.0, 4.0, 5.0][rng.random_range(0..5)],
                1 => 5.0 + rng.random_range(1..365) as f64 / 365.0,
                _ => rng.random_range(1..=1825) as f64 / 365.0,
            };
            let volume = if rng.random_range(0..20) == 0 { 0.0 } else { rng.random_range(1..=1000) as f64 };
            let spread = if rng.random::<bool>() {
                rng.random_range(0..20) as f64 / 10.0
            } else {
                rng.random_range(-0.5..3.0)
            };
            Transaction {
                trade_date: date,
                maturity,
                volume,
                spread,
                scope: if rng.random::<bool>() { ScopeTag::Bank } else { ScopeTag::Nonbank },
            }
        })
        .collect()
}

/// Random `(value, weight)` pairs with integer weights and frequent ties.
pub fn random_weighted(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<(f64, f64)> {
    let n = rng.random_range(1..=max_len);
    (0..n)
        .map(|_| {
            let v = rng.random_range(0..15) as f64 / 4.0;
            let w = rng.random_range(0..=6) as f64;
            (v, w)
        })
        .collect()
}

/// Two-sided Student-t p-value from the regularized incomplete beta function,
/// `I_{df/(df+t²)}(df/2, 1/2)`, evaluated by continued fraction.
pub fn t_two_sided_reference(t: f64, df: f64) -> f64 {
    reg_inc_beta(df / 2.0, 0.5, df / (df + t * t))
}

fn ln_gamma(x: f64) -> f64 {
    // Lanczos, g = 7, n = 9.
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + 7.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-15 {
            break;
        }
    }
    h
}

pub fn reg_inc_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let front = (ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln()).exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, 1.0 - x) / b
    }
}

pub fn date(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}
