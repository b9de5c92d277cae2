//! Exact rational helpers. Every inequality in the crate is decided here or
//! by integer cross-multiplication; floats only appear in Monte Carlo output.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn ratio_usize(num: usize, den: usize) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: usize) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `num/den < bound` without building a rational. `den` must be positive.
pub fn fraction_below(num: usize, den: usize, bound: &Rational) -> bool {
    BigInt::from(num) * bound.denom() < bound.numer() * BigInt::from(den)
}

/// `num/den >= bound`.
pub fn fraction_at_least(num: usize, den: usize, bound: &Rational) -> bool {
    !fraction_below(num, den, bound)
}

/// `a <= sqrt(b)` for `b >= 0`, decided by squaring.
pub fn at_most_sqrt(a: &Rational, b: &Rational) -> bool {
    if a.is_negative() || a.is_zero() {
        return true;
    }
    a * a <= *b
}

/// `a >= 1 - sqrt(eps)`, i.e. `sqrt(eps) >= 1 - a`.
pub fn at_least_one_minus_sqrt(a: &Rational, eps: &Rational) -> bool {
    let gap = Rational::one() - a;
    at_most_sqrt(&gap, eps)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `num/den`, with integers rendered as `n/1`.
pub fn exact(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

pub fn pow_usize(base: usize, exp: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), exp)
}
