//! Points and lines of the projective plane, and points of the projective line.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::{clear_denominators, Rational};
use super::GeometryError;

/// Primitive integer representative with first nonzero entry positive.
pub(crate) fn canonical3(v: [BigInt; 3]) -> Option<[BigInt; 3]> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    let first_negative = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let g = if first_negative { -g } else { g };
    Some(v.map(|x| x / &g))
}

pub(crate) fn cross(a: &[BigInt; 3], b: &[BigInt; 3]) -> [BigInt; 3] {
    [&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]]
}

pub(crate) fn dot(a: &[BigInt; 3], b: &[BigInt; 3]) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

macro_rules! homogeneous_triple {
    ($name:ident, $field:ident) => {
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name {
            $field: [BigInt; 3],
        }

        impl $name {
            pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Result<Self, GeometryError> {
                Self::from_integers([a.into(), b.into(), c.into()])
            }

            pub fn from_integers(v: [BigInt; 3]) -> Result<Self, GeometryError> {
                canonical3(v).map(|$field| Self { $field }).ok_or(GeometryError::ZeroVector)
            }

            pub fn from_rationals(v: &[Rational; 3]) -> Result<Self, GeometryError> {
                let ints = clear_denominators(v);
                let [a, b, c]: [BigInt; 3] = ints.try_into().expect("three entries");
                Self::from_integers([a, b, c])
            }

            pub fn $field(&self) -> &[BigInt; 3] {
                &self.$field
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let [a, b, c] = &self.$field;
                write!(f, "({a}:{b}:{c})")
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Debug::fmt(self, f)
            }
        }
    };
}

homogeneous_triple!(ProjectivePoint, coords);
homogeneous_triple!(ProjectiveLine, coeffs);

impl ProjectivePoint {
    /// Affine coordinates in the chart `z = 1`.
    pub fn affine(&self) -> Option<(Rational, Rational)> {
        let [x, y, z] = &self.coords;
        if z.is_zero() {
            return None;
        }
        Some((BigRational::new(x.clone(), z.clone()), BigRational::new(y.clone(), z.clone())))
    }

    /// The Veronese point `(b² : ab : a²)` of the parameter `(a : b)`, on `y² = xz`.
    pub fn veronese(t: &P1Point) -> Self {
        let [a, b] = t.coords();
        Self::from_integers([b * b, a * b, a * a]).expect("veronese of a nonzero pair")
    }
}

impl ProjectiveLine {
    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        dot(&self.coeffs, p.coords()).is_zero()
    }

    pub fn is_at_infinity(&self) -> bool {
        self.coeffs[0].is_zero() && self.coeffs[1].is_zero()
    }
}

/// The span of two distinct points.
pub fn line_through(p: &ProjectivePoint, q: &ProjectivePoint) -> Result<ProjectiveLine, GeometryError> {
    ProjectiveLine::from_integers(cross(p.coords(), q.coords())).map_err(|_| GeometryError::EqualPoints)
}

pub fn intersect_lines(l1: &ProjectiveLine, l2: &ProjectiveLine) -> Result<ProjectivePoint, GeometryError> {
    ProjectivePoint::from_integers(cross(l1.coeffs(), l2.coeffs())).map_err(|_| GeometryError::EqualLines)
}

/// A point `(a : b)` of the projective line, read as the value `a/b`.
///
/// Canonical form: `gcd(a, b) = 1` and `b > 0`, or `(1 : 0)` for infinity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct P1Point {
    coords: [BigInt; 2],
}

impl P1Point {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<Self, GeometryError> {
        Self::from_integers([a.into(), b.into()])
    }

    pub fn from_integers([a, b]: [BigInt; 2]) -> Result<Self, GeometryError> {
        let g = a.gcd(&b);
        if g.is_zero() {
            return Err(GeometryError::ZeroVector);
        }
        let g = if b.is_negative() || (b.is_zero() && a.is_negative()) { -g } else { g };
        Ok(Self { coords: [a / &g, b / &g] })
    }

    pub fn from_rational(t: &Rational) -> Self {
        Self { coords: [t.numer().clone(), t.denom().clone()] }
    }

    pub fn from_int(t: i64) -> Self {
        Self { coords: [BigInt::from(t), BigInt::one()] }
    }

    pub fn infinity() -> Self {
        Self { coords: [BigInt::one(), BigInt::zero()] }
    }

    pub fn is_infinity(&self) -> bool {
        self.coords[1].is_zero()
    }

    pub fn coords(&self) -> &[BigInt; 2] {
        &self.coords
    }

    pub fn to_rational(&self) -> Option<Rational> {
        (!self.is_infinity()).then(|| BigRational::new(self.coords[0].clone(), self.coords[1].clone()))
    }
}

/// `a₀b₁ − a₁b₀`; zero iff the two points coincide.
pub fn bracket(p: &P1Point, q: &P1Point) -> BigInt {
    &p.coords[0] * &q.coords[1] - &p.coords[1] * &q.coords[0]
}

impl fmt::Debug for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_rational() {
            None => write!(f, "inf"),
            Some(t) if t.denom().is_one() => write!(f, "{}", t.numer()),
            Some(t) => write!(f, "{}/{}", t.numer(), t.denom()),
        }
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_projective::rational::rational;

    fn pt(a: i64, b: i64, c: i64) -> ProjectivePoint {
        ProjectivePoint::new(a, b, c).unwrap()
    }

    fn ln(a: i64, b: i64, c: i64) -> ProjectiveLine {
        ProjectiveLine::new(a, b, c).unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(pt(-2, 4, 6), pt(1, -2, -3));
        assert_eq!(pt(0, -3, 0).coords(), pt(0, 1, 0).coords());
        assert!(ProjectivePoint::new(0, 0, 0).is_err());
        let p = ProjectivePoint::from_rationals(&[rational(1, 2), rational(-1, 3), rational(0, 1)]).unwrap();
        assert_eq!(p, pt(3, -2, 0));
    }

    #[test]
    fn line_through_examples() {
        assert_eq!(line_through(&pt(1, 0, 0), &pt(0, 0, 1)).unwrap(), ln(0, 1, 0));
        let l = line_through(&pt(1, 1, 1), &pt(1, 2, 4)).unwrap();
        assert_eq!(l, ln(2, -3, 1));
        assert!(l.contains(&pt(1, 1, 1)) && l.contains(&pt(1, 2, 4)));
        assert_eq!(line_through(&pt(1, 1, 1), &pt(1, 1, 1)), Err(GeometryError::EqualPoints));
    }

    #[test]
    fn intersect_examples() {
        assert_eq!(intersect_lines(&ln(0, 1, 0), &ln(0, 0, 1)).unwrap(), pt(1, 0, 0));
        let p = intersect_lines(&ln(1, 1, 0), &ln(1, 1, 1)).unwrap();
        assert_eq!(p, pt(1, -1, 0));
        assert!(ln(1, 1, 0).contains(&p) && ln(1, 1, 1).contains(&p));
        assert_eq!(intersect_lines(&ln(0, 1, 0), &ln(0, 1, 0)), Err(GeometryError::EqualLines));
    }

    #[test]
    fn p1_canonical() {
        assert_eq!(P1Point::new(2, -4).unwrap(), P1Point::from_rational(&rational(-1, 2)));
        assert_eq!(P1Point::new(-3, 0).unwrap(), P1Point::infinity());
        assert_eq!(format!("{:?}", P1Point::new(6, 4).unwrap()), "3/2");
        assert_eq!(bracket(&P1Point::from_int(3), &P1Point::new(6, 2).unwrap()), BigInt::zero());
    }

    #[test]
    fn veronese_lands_on_conic() {
        let p = ProjectivePoint::veronese(&P1Point::from_rational(&rational(2, 3)));
        assert_eq!(p, pt(9, 6, 4));
        assert_eq!(ProjectivePoint::veronese(&P1Point::infinity()), pt(0, 0, 1));
    }
}
