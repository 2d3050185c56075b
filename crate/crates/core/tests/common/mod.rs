//! Independent oracles: nothing here goes through the crate's cursor or
//! multiplicative binomial coefficient.

#![allow(dead_code)]

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

/// `N! / (n! (N - n)!) · a^n · (b - a)^(N - n) / b^N` from factorials.
pub fn factorial_pmf(n: u64, trials: u64, a: u64, b: u64) -> Ratio<BigUint> {
    let fact = |k: u64| (1..=k).fold(BigUint::one(), |acc, i| acc * i);
    let coeff = fact(trials) / (fact(n) * fact(trials - n));
    let num = coeff * BigUint::from(a).pow(n as u32) * BigUint::from(b - a).pow((trials - n) as u32);
    Ratio::new(num, BigUint::from(b).pow(trials as u32))
}

/// Rows of Pascal's triangle, `rows[N][n] = C(N, n)`, by repeated addition.
pub fn pascal_rows(max: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for n in 1..=max {
        let prev = &rows[n - 1];
        let mut row = Vec::with_capacity(n + 1);
        row.push(BigUint::one());
        for k in 1..n {
            row.push(&prev[k - 1] + &prev[k]);
        }
        row.push(BigUint::one());
        rows.push(row);
    }
    rows
}

/// Natural log of a positive big integer, good to ~1e-16 relative.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap() as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Brute force: first `n` in `0..=N` with `n·b > N·a` and `pmf(n) ≤ λ`.
pub fn brute_force_critical(trials: u64, a: u64, b: u64, lambda: &Ratio<BigUint>) -> Option<u64> {
    (0..=trials).find(|&n| n * b > trials * a && factorial_pmf(n, trials, a, b) <= *lambda)
}

/// Brute force upper tail by summing every term.
pub fn brute_force_tail(n: u64, trials: u64, a: u64, b: u64) -> Ratio<BigUint> {
    (n..=trials).fold(Ratio::zero(), |acc, k| acc + factorial_pmf(k, trials, a, b))
}

pub fn ratio(a: u64, b: u64) -> Ratio<BigUint> {
    Ratio::new(BigUint::from(a), BigUint::from(b))
}
