//! Arbitrary precision rationals and the textual `p/q` format used at every
//! boundary of the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`. Decimal and exponent notation are
/// rejected: every value in this crate is exact.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if s.contains(['.', 'e', 'E']) {
        return Err(Error::Parse(format!(
            "exact rationals required, got `{s}` (write p/q)"
        )));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(num, den))
}

/// Parses a comma separated list of rationals, e.g. `1,0,-1/2`.
pub fn parse_list(text: &str) -> Result<Vec<Rational>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(parse_rational).collect()
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn is_integral(q: &Rational) -> bool {
    q.is_integer()
}

/// Greatest common divisor of a family of rationals: the positive generator
/// of the additive subgroup they span. Zero if every value is zero.
pub fn rational_gcd(values: &[Rational]) -> Rational {
    let lcm_den = values
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let g = values.iter().fold(BigInt::zero(), |acc, q| {
        let scaled = (q * Rational::from_integer(lcm_den.clone())).to_integer();
        acc.gcd(&scaled)
    });
    Rational::new(g, lcm_den)
}

/// Scales a rational vector to the primitive integral vector on the same ray.
/// Returns `None` for the zero vector.
pub fn primitive_integral(values: &[Rational]) -> Option<Vec<BigInt>> {
    let g = rational_gcd(values);
    if g.is_zero() {
        return None;
    }
    Some(values.iter().map(|q| (q / &g).to_integer()).collect())
}

/// Lossy rendering, only ever used for display fields and plot geometry.
pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}
