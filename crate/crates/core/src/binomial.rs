//! Binomial point and tail probabilities.
//!
//! Exact results are computed over big integers: for `p = a/b` every
//! probability in the distribution shares the denominator `b^N`, so the core
//! quantity is the integer term `C(N, n) · a^n · (b - a)^(N - n)`. The
//! [`PmfCursor`] walks that term up and down the support with one small
//! multiplication and one exact division per step.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{BcvError, Result};
use crate::probability::ExactProbability;

/// Panel size `N` and per-respondent chance probability `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinomialParams {
    trials: u64,
    p: ExactProbability,
}

impl BinomialParams {
    pub fn new(trials: u64, p: ExactProbability) -> Result<Self> {
        if trials == 0 {
            return Err(BcvError::domain("binomial panel size N must be at least 1"));
        }
        if trials > u64::from(u32::MAX) {
            return Err(BcvError::domain(format!("panel size {trials} is too large")));
        }
        if p.is_zero() || p.is_one() {
            return Err(BcvError::domain(format!(
                "success probability {p} must lie strictly between 0 and 1"
            )));
        }
        Ok(BinomialParams { trials, p })
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn p(&self) -> &ExactProbability {
        &self.p
    }

    /// Exact comparison `n > N·p`.
    pub fn above_mean(&self, n: u64) -> bool {
        BigUint::from(n) * self.p.denom() > BigUint::from(self.trials) * self.p.numer()
    }

    /// Largest integer `n` with `n ≤ N·p`.
    pub fn floor_mean(&self) -> u64 {
        (BigUint::from(self.trials) * self.p.numer() / self.p.denom())
            .to_u64()
            .expect("N·p ≤ N fits in u64")
    }

    /// The shared denominator `b^N` of every pmf value.
    fn common_denominator(&self) -> BigUint {
        self.p.denom().pow(self.trials as u32)
    }

    fn failure_numer(&self) -> BigUint {
        self.p.denom() - self.p.numer()
    }

    fn check_support(&self, n: u64) -> Result<()> {
        if n > self.trials {
            return Err(BcvError::domain(format!(
                "count {n} lies outside the support 0..={}",
                self.trials
            )));
        }
        Ok(())
    }
}

/// `C(n, k)` by the multiplicative running product
/// `C(n, i + 1) = C(n, i) · (n - i) / (i + 1)`; every intermediate is exact.
pub fn binomial_coefficient(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Walks the unnormalized pmf term across the support.
#[derive(Clone, Debug)]
pub struct PmfCursor<'a> {
    params: &'a BinomialParams,
    n: u64,
    term: BigUint,
    denominator: BigUint,
    failure: BigUint,
}

impl<'a> PmfCursor<'a> {
    pub fn new(params: &'a BinomialParams, n: u64) -> Result<Self> {
        params.check_support(n)?;
        let failure = params.failure_numer();
        let trials = params.trials;
        let term = binomial_coefficient(trials, n) * params.p.numer().pow(n as u32) * failure.pow((trials - n) as u32);
        Ok(PmfCursor {
            params,
            n,
            term,
            denominator: params.common_denominator(),
            failure,
        })
    }

    pub fn position(&self) -> u64 {
        self.n
    }

    /// Moves to `n + 1`; returns `false` (and stays put) at the top of the support.
    pub fn step_up(&mut self) -> bool {
        let n = self.n;
        if n == self.params.trials {
            return false;
        }
        self.term *= self.params.trials - n;
        self.term *= self.params.p.numer();
        self.term /= n + 1;
        let (q, r) = self.term.div_rem(&self.failure);
        debug_assert!(r.is_zero());
        self.term = q;
        self.n = n + 1;
        true
    }

    /// Moves to `n - 1`; returns `false` (and stays put) at zero.
    pub fn step_down(&mut self) -> bool {
        let n = self.n;
        if n == 0 {
            return false;
        }
        // term(n-1) = term(n) · n · (b - a) / ((N - n + 1) · a)
        self.term *= n;
        self.term *= &self.failure;
        self.term /= self.params.trials - n + 1;
        let (q, r) = self.term.div_rem(self.params.p.numer());
        debug_assert!(r.is_zero());
        self.term = q;
        self.n = n - 1;
        true
    }

    pub fn probability(&self) -> ExactProbability {
        ExactProbability::from_ratio_unchecked(Ratio::new(self.term.clone(), self.denominator.clone()))
    }

    /// Exact test `pmf(n) ≤ threshold` without reducing any fraction.
    pub fn at_most(&self, threshold: &ExactProbability) -> bool {
        &self.term * threshold.denom() <= threshold.numer() * &self.denominator
    }

    pub(crate) fn term(&self) -> &BigUint {
        &self.term
    }

    pub(crate) fn denominator(&self) -> &BigUint {
        &self.denominator
    }
}

/// Exact `C(N, n) · p^n · (1 - p)^(N - n)`.
pub fn pmf(n: u64, params: &BinomialParams) -> Result<ExactProbability> {
    Ok(PmfCursor::new(params, n)?.probability())
}

/// Exact `Σ_{k = n}^{N} pmf(k)`.
pub fn upper_tail(n: u64, params: &BinomialParams) -> Result<ExactProbability> {
    let mut cursor = PmfCursor::new(params, n)?;
    let mut sum = cursor.term().clone();
    while cursor.step_up() {
        sum += cursor.term();
    }
    let denominator = params.common_denominator();
    Ok(ExactProbability::from_ratio_unchecked(Ratio::new(sum, denominator)))
}

/// The full distribution `(n, pmf(n))` for `n = 0..=N`.
pub fn pmf_series(params: &BinomialParams) -> Vec<(u64, ExactProbability)> {
    let mut cursor = PmfCursor::new(params, 0).expect("0 is always in the support");
    let mut out = Vec::with_capacity(params.trials as usize + 1);
    loop {
        out.push((cursor.position(), cursor.probability()));
        if !cursor.step_up() {
            break;
        }
    }
    out
}

/// Floating-point pmf via the saddle-point expansion (Loader 2000); stays
/// accurate to a few ulps in the exponent for very large `N`.
pub fn pmf_float(n: u64, params: &BinomialParams) -> Result<f64> {
    Ok(ln_pmf_float(n, params)?.exp())
}

/// Natural log of the pmf, same evaluation path as [`pmf_float`].
pub fn ln_pmf_float(n: u64, params: &BinomialParams) -> Result<f64> {
    params.check_support(n)?;
    let p = params.p.to_f64();
    let q = params.p.complement().to_f64();
    let big_n = params.trials as f64;
    let x = n as f64;
    if n == 0 {
        return Ok(if p < 0.1 {
            -bd0(big_n, big_n * q) - big_n * p
        } else {
            big_n * q.ln()
        });
    }
    if n == params.trials {
        return Ok(if q < 0.1 {
            -bd0(big_n, big_n * p) - big_n * q
        } else {
            big_n * p.ln()
        });
    }
    let lc = stirlerr(params.trials)
        - stirlerr(n)
        - stirlerr(params.trials - n)
        - bd0(x, big_n * p)
        - bd0(big_n - x, big_n * q);
    let lf = std::f64::consts::TAU.ln() + x.ln() + (-x / big_n).ln_1p();
    Ok(lc - 0.5 * lf)
}

/// `ln(n!) - ((n + 1/2) ln n - n + ln √(2π))`.
fn stirlerr(n: u64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

    if n <= 15 {
        // n! is exactly representable for n ≤ 18
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        let x = n as f64;
        return fact.ln() - (x + 0.5) * x.ln() + x - LN_SQRT_2PI;
    }
    let x = n as f64;
    let xx = x * x;
    if n > 500 {
        (S0 - S1 / xx) / x
    } else if n > 80 {
        (S0 - (S1 - S2 / xx) / xx) / x
    } else if n > 35 {
        (S0 - (S1 - (S2 - S3 / xx) / xx) / xx) / x
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / xx) / xx) / xx) / xx) / x
    }
}

/// Deviance term `x ln(x / np) + np - x`, evaluated without cancellation
/// when `x` is close to `np`.
fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / f64::from(2 * j + 1);
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / np).ln() + np - x
    }
}
