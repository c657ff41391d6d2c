//! Exact rationals. Everything in the engine is computed over `Q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"7"`, `"-3/2"` or a finite decimal such as `"0.25"`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{whole_digits}{frac}");
        let mut numer: BigInt = digits.parse().ok()?;
        if negative {
            numer = -numer;
        }
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        return Some(Rational::new(numer, denom));
    }
    let n: BigInt = text.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Returns the value as a non-negative machine integer if it is one.
pub fn as_nonneg_integer(r: &Rational) -> Option<u32> {
    if !r.is_integer() || r.is_negative() {
        return None;
    }
    r.to_integer().to_u32()
}

/// Floor of `(a + sqrt(disc)) / 2` for `disc >= 0`, computed exactly.
pub fn floor_half_sum_sqrt(a: &Rational, disc: &Rational) -> BigInt {
    assert!(!disc.is_negative());
    // N <= (a + sqrt(disc))/2  <=>  2N - a <= sqrt(disc)
    let fits = |n: &BigInt| {
        let lhs = Rational::from_integer(n * 2) - a;
        !lhs.is_positive() || &(&lhs * &lhs) <= disc
    };
    let approx = (a.to_f64().unwrap_or(0.0) + disc.to_f64().unwrap_or(0.0).sqrt()) / 2.0;
    let mut n = BigInt::from(approx.floor() as i64);
    while !fits(&n) {
        n -= 1;
    }
    while fits(&(&n + 1)) {
        n += 1;
    }
    n
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Greatest common divisor of the numerators (zero if all are zero).
pub fn content<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v.numer()))
}
