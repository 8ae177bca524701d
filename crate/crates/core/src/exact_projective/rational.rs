use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::GeometryError;

/// Exact rational numbers; the reduced form (`gcd = 1`, positive denominator)
/// is maintained by `num_rational`.
pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Formats as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, GeometryError> {
    let bad = || GeometryError::Parse(format!("invalid rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        None => BigInt::from_str(s).map(BigRational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// Clears denominators: returns integers proportional to `xs`.
pub fn clear_denominators(xs: &[Rational]) -> Vec<BigInt> {
    let l = xs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    xs.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_and_parses() {
        assert_eq!(format_rational(&rational(6, -4)), "-3/2");
        assert_eq!(format_rational(&integer(15)), "15");
        assert_eq!(parse_rational(" -3/2 ").unwrap(), rational(-3, 2));
        assert_eq!(parse_rational("56/3").unwrap(), rational(56, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn clears() {
        let v = clear_denominators(&[rational(1, 2), rational(-1, 3), integer(2)]);
        assert_eq!(v, vec![BigInt::from(3), BigInt::from(-2), BigInt::from(12)]);
    }
}
