//! Exact probabilities as reduced big rationals in `[0, 1]`.

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{BcvError, Result};

/// A probability held as an arbitrary-precision rational in lowest terms.
///
/// Every probability produced by the binomial core is one of these; floating
/// point only appears when rendering or on the explicit `*_float` fast paths.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactProbability(Ratio<BigUint>);

impl ExactProbability {
    pub fn new(numer: BigUint, denom: BigUint) -> Result<Self> {
        if denom.is_zero() {
            return Err(BcvError::domain("probability denominator must be positive"));
        }
        if numer > denom {
            return Err(BcvError::domain(format!("probability {numer}/{denom} exceeds 1")));
        }
        Ok(ExactProbability(Ratio::new(numer, denom)))
    }

    pub fn from_ratio(numer: u64, denom: u64) -> Result<Self> {
        Self::new(BigUint::from(numer), BigUint::from(denom))
    }

    pub(crate) fn from_ratio_unchecked(r: Ratio<BigUint>) -> Self {
        debug_assert!(r <= Ratio::one());
        ExactProbability(r)
    }

    pub fn zero() -> Self {
        ExactProbability(Ratio::zero())
    }

    pub fn one() -> Self {
        ExactProbability(Ratio::one())
    }

    pub fn numer(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigUint {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &Ratio<BigUint> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        ExactProbability(Ratio::one() - &self.0)
    }

    /// Nearest `f64`; values below the subnormal range come out as `0.0`.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }
}

impl fmt::Display for ExactProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl Serialize for ExactProbability {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Mul for &ExactProbability {
    type Output = ExactProbability;

    fn mul(self, rhs: &ExactProbability) -> ExactProbability {
        ExactProbability(&self.0 * &rhs.0)
    }
}

/// Sums of probabilities may exceed one, so addition yields a plain ratio.
impl Add for &ExactProbability {
    type Output = Ratio<BigUint>;

    fn add(self, rhs: &ExactProbability) -> Ratio<BigUint> {
        &self.0 + &rhs.0
    }
}

/// Parses a non-negative rational written either as `a/b` or as a decimal
/// literal (`0.05`, `1`, `.01`). Decimals are taken at their literal expansion.
pub fn parse_rational(text: &str) -> Result<Ratio<BigUint>> {
    let s = text.trim();
    let bad = || BcvError::domain(format!("`{text}` is not a rational number"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigUint = n.trim().parse().map_err(|_| bad())?;
        let d: BigUint = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(BcvError::domain(format!("`{text}` has a zero denominator")));
        }
        return Ok(Ratio::new(n, d));
    }
    let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigUint = digits.parse().map_err(|_| bad())?;
    let denom = BigUint::from(10u32).pow(frac_part.len() as u32);
    Ok(Ratio::new(numer, denom))
}

impl FromStr for ExactProbability {
    type Err = BcvError;

    fn from_str(s: &str) -> Result<Self> {
        let r = parse_rational(s)?;
        ExactProbability::new(r.numer().clone(), r.denom().clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_to_lowest_terms() {
        let p = ExactProbability::from_ratio(10, 30).unwrap();
        assert_eq!(p.numer(), &BigUint::from(1u32));
        assert_eq!(p.denom(), &BigUint::from(3u32));
        assert_eq!(p.to_string(), "1/3");
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(ExactProbability::from_ratio(4, 3).is_err());
        assert!(ExactProbability::from_ratio(1, 0).is_err());
    }

    #[test]
    fn parses_decimal_and_fraction_forms() {
        let a: ExactProbability = "0.05".parse().unwrap();
        let b: ExactProbability = "1/20".parse().unwrap();
        assert_eq!(a, b);
        let c: ExactProbability = ".01".parse().unwrap();
        assert_eq!(c, ExactProbability::from_ratio(1, 100).unwrap());
        assert!("abc".parse::<ExactProbability>().is_err());
        assert!("1/0".parse::<ExactProbability>().is_err());
        assert!("-0.5".parse::<ExactProbability>().is_err());
        assert!("1.5".parse::<ExactProbability>().is_err());
        assert!(".".parse::<ExactProbability>().is_err());
    }

    #[test]
    fn to_f64_handles_huge_operands() {
        let three = BigUint::from(3u32);
        let p = ExactProbability::new(BigUint::one(), three.pow(600)).unwrap();
        let expected = (-600.0 * 3f64.ln()).exp();
        assert!(((p.to_f64() - expected) / expected).abs() < 1e-12);
        // far below the subnormal range
        let tiny = ExactProbability::new(BigUint::one(), three.pow(5000)).unwrap();
        assert_eq!(tiny.to_f64(), 0.0);
    }

    #[test]
    fn complement() {
        let p = ExactProbability::from_ratio(1, 4).unwrap();
        assert_eq!(p.complement(), ExactProbability::from_ratio(3, 4).unwrap());
    }
}
