mod common;

use bcv_core::{ln_pmf_float, pmf, pmf_float, pmf_series, upper_tail, BinomialParams, ExactProbability};
use common::{factorial_pmf, ln_big, pascal_rows, ratio};
use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};
use proptest::prelude::*;

const PROBS: [(u64, u64); 3] = [(1, 2), (1, 3), (1, 4)];

fn params(trials: u64, a: u64, b: u64) -> BinomialParams {
    BinomialParams::new(trials, ExactProbability::from_ratio(a, b).unwrap()).unwrap()
}

#[test]
fn series_sums_to_one_exactly() {
    for (a, b) in PROBS {
        for trials in 1..=200 {
            let total = pmf_series(&params(trials, a, b))
                .iter()
                .fold(Ratio::<BigUint>::zero(), |acc, (_, q)| acc + q.as_ratio());
            assert!(total.is_one(), "N={trials} p={a}/{b}");
        }
    }
}

#[test]
fn matches_factorial_route() {
    for (a, b) in [(1, 3), (1, 4), (2, 5)] {
        for trials in [1, 2, 7, 20, 33] {
            let p = params(trials, a, b);
            for n in 0..=trials {
                assert_eq!(
                    pmf(n, &p).unwrap().as_ratio(),
                    &factorial_pmf(n, trials, a, b),
                    "n={n} N={trials} p={a}/{b}"
                );
            }
        }
    }
}

#[test]
fn worked_example_probability() {
    let p = params(20, 1, 3);
    assert_eq!(pmf(11, &p).unwrap().as_ratio(), &ratio(85_995_520, 3_486_784_401));
}

#[test]
fn upper_tail_matches_brute_force() {
    for trials in [1, 5, 8, 13, 30] {
        let p = params(trials, 1, 2);
        for n in 0..=trials {
            assert_eq!(
                upper_tail(n, &p).unwrap().as_ratio(),
                &common::brute_force_tail(n, trials, 1, 2)
            );
        }
    }
    assert_eq!(upper_tail(7, &params(8, 1, 2)).unwrap().as_ratio(), &ratio(9, 256));
}

#[test]
fn float_path_tracks_exact_values() {
    // Pascal rows give C(N, n) without the crate's multiplicative product.
    let rows = pascal_rows(300);
    for (a, b) in PROBS {
        for trials in (1..=300u64).step_by(7) {
            let p = params(trials, a, b);
            let ln_den = ln_big(&BigUint::from(b).pow(trials as u32));
            for n in 0..=trials {
                let term = &rows[trials as usize][n as usize]
                    * BigUint::from(a).pow(n as u32)
                    * BigUint::from(b - a).pow((trials - n) as u32);
                let exact_ln = ln_big(&term) - ln_den;
                let got = ln_pmf_float(n, &p).unwrap();
                assert!(
                    (got - exact_ln).abs() <= 1e-12,
                    "n={n} N={trials} p={a}/{b}: {got} vs {exact_ln}"
                );
            }
        }
    }
}

#[test]
fn float_path_large_panel() {
    let p = params(10_000, 1, 3);
    let v = pmf_float(3500, &p).unwrap();
    assert!(v.is_finite() && v > 0.0);
    let exact = pmf(3500, &p).unwrap().to_f64();
    assert!(((v - exact) / exact).abs() < 1e-11);
}

proptest! {
    #[test]
    fn symmetry(trials in 1u64..120, n_frac in 0.0f64..=1.0, a in 1u64..6, extra in 1u64..6) {
        let b = a + extra;
        let n = (n_frac * trials as f64).round() as u64;
        let p = params(trials, a, b);
        let q = params(trials, b - a, b);
        prop_assert_eq!(pmf(n, &p).unwrap(), pmf(trials - n, &q).unwrap());
    }

    #[test]
    fn recurrence(trials in 1u64..150, n_frac in 0.0f64..1.0, a in 1u64..6, extra in 1u64..6) {
        let b = a + extra;
        let n = ((n_frac * trials as f64) as u64).min(trials - 1);
        let p = params(trials, a, b);
        let lhs = pmf(n + 1, &p).unwrap().as_ratio() / pmf(n, &p).unwrap().as_ratio();
        let rhs = ratio(trials - n, n + 1) * ratio(a, b - a);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn upper_tail_non_increasing(trials in 1u64..80, a in 1u64..4) {
        let p = params(trials, 1, a + 1);
        let tails: Vec<_> = (0..=trials).map(|n| upper_tail(n, &p).unwrap()).collect();
        prop_assert!(tails[0].is_one());
        prop_assert!(tails.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn fair_coin_single_trial() {
    let series = pmf_series(&params(1, 1, 2));
    let rendered: Vec<(u64, String)> = series
        .iter()
        .map(|(n, q)| (*n, bcv_core::decimal::format_significant(q.as_ratio(), 6)))
        .collect();
    assert_eq!(rendered, vec![(0, "0.500000".to_string()), (1, "0.500000".to_string())]);
}
