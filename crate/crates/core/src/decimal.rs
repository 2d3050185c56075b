//! Decimal rendering of exact rationals.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

/// Significant digits used for every rendered probability.
pub const SIGNIFICANT_DIGITS: u32 = 6;

fn pow10(k: u32) -> BigUint {
    BigUint::from(10u32).pow(k)
}

fn digit_count(n: &BigUint) -> u32 {
    n.to_string().len() as u32
}

/// Round `numer / denom` to the nearest integer, ties to even.
fn round_half_even(numer: &BigUint, denom: &BigUint) -> BigUint {
    let (q, r) = numer.div_rem(denom);
    let twice = r << 1u32;
    if twice > *denom || (twice == *denom && q.is_odd()) {
        q + 1u32
    } else {
        q
    }
}

/// Renders a non-negative rational with `digits` significant digits,
/// rounding half to even. Magnitudes below `1e-4` switch to scientific
/// notation (`8.59955e-7`).
pub fn format_significant(value: &Ratio<BigUint>, digits: u32) -> String {
    assert!(digits >= 1);
    if value.is_zero() {
        return "0".to_string();
    }
    let numer = value.numer();
    let denom = value.denom();
    // decimal exponent e with 10^e ≤ value < 10^(e+1)
    let mut exp = i64::from(digit_count(numer)) - i64::from(digit_count(denom));
    let ge_pow = |e: i64| -> bool {
        if e >= 0 {
            numer >= &(denom * pow10(e as u32))
        } else {
            &(numer * pow10((-e) as u32)) >= denom
        }
    };
    if !ge_pow(exp) {
        exp -= 1;
    }
    debug_assert!(ge_pow(exp) && !ge_pow(exp + 1));

    let shift = i64::from(digits) - 1 - exp;
    let mut mantissa = if shift >= 0 {
        round_half_even(&(numer * pow10(shift as u32)), denom)
    } else {
        round_half_even(numer, &(denom * pow10((-shift) as u32)))
    };
    if mantissa == pow10(digits) {
        mantissa = pow10(digits - 1);
        exp += 1;
    }
    let m = mantissa.to_string();
    debug_assert_eq!(m.len() as u32, digits);

    if exp < -4 {
        let (head, tail) = m.split_at(1);
        if tail.is_empty() {
            format!("{head}e{exp}")
        } else {
            format!("{head}.{tail}e{exp}")
        }
    } else if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), m)
    } else if exp + 1 >= i64::from(digits) {
        format!("{}{}", m, "0".repeat((exp + 1 - i64::from(digits)) as usize))
    } else {
        let (head, tail) = m.split_at((exp + 1) as usize);
        format!("{head}.{tail}")
    }
}

/// Signed variant of [`format_significant`].
pub fn format_significant_signed(value: &Ratio<BigInt>, digits: u32) -> String {
    let magnitude = Ratio::new(
        value.numer().abs().to_biguint().expect("non-negative"),
        value.denom().abs().to_biguint().expect("non-negative"),
    );
    let body = format_significant(&magnitude, digits);
    if value.is_negative() {
        format!("-{body}")
    } else {
        body
    }
}

/// Exact decimal form when the rational terminates within `max_places`
/// fractional digits (`1/20` → `0.05`), otherwise `a/b`.
pub fn format_exact(value: &Ratio<BigUint>, max_places: u32) -> String {
    let denom = value.denom();
    for places in 0..=max_places {
        let scale = pow10(places);
        if (&scale % denom).is_zero() {
            let scaled = value.numer() * (scale / denom);
            let s = scaled.to_string();
            if places == 0 {
                return s;
            }
            let width = places as usize + 1;
            let padded = format!("{s:0>width$}");
            let (int, frac) = padded.split_at(padded.len() - places as usize);
            return format!("{int}.{frac}");
        }
    }
    format!("{}/{}", value.numer(), value.denom())
}
