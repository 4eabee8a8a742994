mod common;

use axi_core::data_io::{generate_synthetic, SyntheticConfig};
use axi_core::index_engine::{
    compute_index, daily_decompositions, daily_spread, weighted_median, IndexConfig, IndexScope, ScopeTag, Transaction,
};
use axi_core::Error;
use chrono::Days;
use common::{date, oracle_daily, oracle_median, random_day, random_weighted};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn weighted_median_matches_scan_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2000 {
        let items = random_weighted(&mut rng, 30);
        match oracle_median(&items) {
            Some(expected) => assert_eq!(weighted_median(&items).unwrap(), expected, "{items:?}"),
            None => assert!(weighted_median(&items).is_err()),
        }
    }
}

#[test]
fn daily_spread_matches_bucket_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let day = date(2024, 5, 2);
    for _ in 0..2000 {
        let txs = random_day(&mut rng, day, 50);
        match (daily_spread(&txs), oracle_daily(&txs)) {
            (Ok(d), Some(o)) => {
                assert_eq!(d.daily_spread, o.daily_spread);
                assert_eq!(d.st_spread, o.medians[0]);
                assert_eq!(d.lt_bucket_spreads, [o.medians[1], o.medians[2], o.medians[3], o.medians[4]]);
                assert_eq!(d.st_weight, o.weights[0]);
                assert_eq!(d.lt_weights, [o.weights[1], o.weights[2], o.weights[3], o.weights[4]]);
            }
            (Err(Error::NoData(_)), None) => {}
            (got, want) => panic!("mismatch: {got:?} vs oracle present = {}", want.is_some()),
        }
    }
}

fn month() -> Vec<Transaction> {
    let cfg = SyntheticConfig {
        start: date(2024, 3, 1),
        end: date(2024, 4, 30),
        ..Default::default()
    };
    generate_synthetic(&cfg).unwrap()
}

#[test]
fn fxi_matches_oracle_over_unfiltered_pool() {
    let txs = month();
    assert!(txs.iter().any(|t| t.scope == ScopeTag::Nonbank));
    let run = compute_index(&txs, IndexScope::Fxi, &IndexConfig::default()).unwrap();
    for d in &run.decompositions {
        let day: Vec<Transaction> = txs.iter().filter(|t| t.trade_date == d.date).copied().collect();
        assert_eq!(d.daily_spread, oracle_daily(&day).unwrap().daily_spread);
    }
    let axi = compute_index(&txs, IndexScope::Axi, &IndexConfig::default()).unwrap();
    for d in &axi.decompositions {
        let day: Vec<Transaction> = txs
            .iter()
            .filter(|t| t.trade_date == d.date && t.scope == ScopeTag::Bank)
            .copied()
            .collect();
        assert_eq!(d.daily_spread, oracle_daily(&day).unwrap().daily_spread);
    }
}

#[test]
fn all_bank_pool_gives_identical_axi_and_fxi() {
    let txs: Vec<Transaction> = month().into_iter().map(|t| Transaction { scope: ScopeTag::Bank, ..t }).collect();
    let axi = compute_index(&txs, IndexScope::Axi, &IndexConfig::default()).unwrap();
    let fxi = compute_index(&txs, IndexScope::Fxi, &IndexConfig::default()).unwrap();
    assert_eq!(axi.index.points(), fxi.index.points());
}

#[test]
fn parallel_equals_sequential() {
    let txs = month();
    let par = daily_decompositions(&txs, IndexScope::Axi, &IndexConfig::default()).unwrap();
    let seq = daily_decompositions(&txs, IndexScope::Axi, &IndexConfig { parallel: false, ..Default::default() }).unwrap();
    assert_eq!(par.0, seq.0);
}

#[test]
fn lt_weight_matches_raw_recomputation() {
    let txs = month();
    let run = compute_index(&txs, IndexScope::Axi, &IndexConfig::default()).unwrap();
    let dates: Vec<_> = run.daily.dates().collect();
    let share = |day| {
        let bank = txs.iter().filter(|t| t.trade_date == day && t.scope == ScopeTag::Bank);
        let (mut st, mut lt) = (0.0, 0.0);
        for t in bank {
            if t.maturity < 1.0 {
                st += t.maturity * t.volume;
            } else {
                lt += t.maturity * t.volume;
            }
        }
        lt / (st + lt)
    };
    for (k, (d, v)) in run.lt_weight.points().iter().enumerate() {
        let window = &dates[k..k + 21];
        assert_eq!(window[20], *d);
        let expected = window.iter().map(|&day| share(day)).sum::<f64>() / 21.0;
        assert!((v - expected).abs() < 1e-12, "{d}: {v} vs {expected}");
    }
}

#[test]
fn stress_lengthens_average_maturity() {
    let calm = SyntheticConfig { start: date(2024, 1, 1), end: date(2024, 6, 28), ..Default::default() };
    let mut stressed = calm.clone();
    stressed.stress_windows = vec![axi_core::data_io::StressRegime {
        start: date(2024, 3, 1),
        end: date(2024, 4, 30),
        lt_spread_multiplier: 5.0,
        st_volume_multiplier: 0.6,
    }];
    let run = compute_index(&generate_synthetic(&stressed).unwrap(), IndexScope::Axi, &IndexConfig::default()).unwrap();
    let window = &stressed.stress_windows[0];
    let (inside, outside): (Vec<_>, Vec<_>) = run.decompositions.iter().partition(|d| window.contains(d.date));
    let mean = |v: &[&axi_core::index_engine::DailySpreadDecomposition]| {
        v.iter().map(|d| d.weighted_avg_maturity).sum::<f64>() / v.len() as f64
    };
    assert!(mean(&inside) > mean(&outside) + 0.1, "{} vs {}", mean(&inside), mean(&outside));
}

fn arb_day() -> impl Strategy<Value = Vec<Transaction>> {
    prop::collection::vec((1u32..=1825, 1u32..=1000, -100i32..400), 1..40).prop_map(|rows| {
        rows.into_iter()
            .map(|(days, vol, bp)| Transaction {
                trade_date: date(2024, 5, 2),
                maturity: days as f64 / 365.0,
                volume: vol as f64,
                spread: bp as f64 / 100.0,
                scope: ScopeTag::Bank,
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn weights_sum_to_one(txs in arb_day()) {
        let d = daily_spread(&txs).unwrap();
        prop_assert!((d.st_weight + d.lt_weight() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn volume_homogeneity(txs in arb_day(), lambda in 0.01f64..100.0) {
        let base = daily_spread(&txs).unwrap();
        let scaled: Vec<_> = txs.iter().map(|t| Transaction { volume: t.volume * lambda, ..*t }).collect();
        let s = daily_spread(&scaled).unwrap();
        prop_assert_eq!(base.st_spread, s.st_spread);
        prop_assert_eq!(base.lt_bucket_spreads, s.lt_bucket_spreads);
        prop_assert!((base.daily_spread - s.daily_spread).abs() < 1e-12);
    }

    #[test]
    fn spread_translation(txs in arb_day(), k in -1.0f64..1.0) {
        let base = daily_spread(&txs).unwrap();
        let shifted: Vec<_> = txs.iter().map(|t| Transaction { spread: t.spread + k, ..*t }).collect();
        prop_assert!((daily_spread(&shifted).unwrap().daily_spread - base.daily_spread - k).abs() < 1e-12);
    }

    #[test]
    fn daily_spread_bounded_by_bucket_medians(txs in arb_day()) {
        let d = daily_spread(&txs).unwrap();
        let lo = d.bucket_spreads().fold(f64::INFINITY, f64::min);
        let hi = d.bucket_spreads().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(d.daily_spread >= lo - 1e-12 && d.daily_spread <= hi + 1e-12);
    }

    #[test]
    fn raising_one_spread_never_lowers(txs in arb_day(), pick in any::<prop::sample::Index>(), bump in 0.0f64..2.0) {
        let base = daily_spread(&txs).unwrap();
        let mut raised = txs.clone();
        raised[pick.index(txs.len())].spread += bump;
        let r = daily_spread(&raised).unwrap();
        prop_assert!(r.daily_spread >= base.daily_spread - 1e-12);
        for (a, b) in r.bucket_spreads().zip(base.bucket_spreads()) {
            prop_assert!(a >= b);
        }
    }

    #[test]
    fn index_within_window_range(seed in 0u64..50) {
        let cfg = SyntheticConfig {
            seed,
            start: date(2024, 1, 1),
            end: date(2024, 1, 1) + Days::new(45),
            trades_per_bucket: 3,
            ..Default::default()
        };
        let run = compute_index(&generate_synthetic(&cfg).unwrap(), IndexScope::Axi, &IndexConfig::default()).unwrap();
        let daily: Vec<f64> = run.daily.values().collect();
        for (k, v) in run.index.values().enumerate() {
            let w = &daily[k..k + 21];
            let lo = w.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
        }
    }
}
