use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::linalg;
use super::point::{dot, line_through, ProjectiveLine, ProjectivePoint};
use super::rational::{clear_denominators, Rational};
use super::GeometryError;

/// The two components of a rank-2 conic and their intersection point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinePair {
    pub lines: [ProjectiveLine; 2],
    pub node: ProjectivePoint,
}

/// A plane conic `ax² + by² + cz² + dxy + exz + fyz = 0` of rank 2 or 3.
///
/// Coefficients are kept in the monomial order `[x², y², z², xy, xz, yz]`,
/// as a primitive integer vector whose first nonzero entry is positive.
/// Rank-2 conics carry their two (rational) components.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Conic {
    coeffs: [BigInt; 6],
    rank: u8,
    split: Option<LinePair>,
}

fn canonical6(v: Vec<BigInt>) -> Option<[BigInt; 6]> {
    use num_integer::Integer;
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    let first_negative = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let g = if first_negative { -g } else { g };
    let v: Vec<BigInt> = v.into_iter().map(|x| x / &g).collect();
    v.try_into().ok()
}

/// Evaluates the quadratic form with coefficients `c` at `p`.
fn eval_form(c: &[BigInt; 6], p: &[BigInt; 3]) -> BigInt {
    let [x, y, z] = p;
    &c[0] * x * x + &c[1] * y * y + &c[2] * z * z + &c[3] * x * y + &c[4] * x * z + &c[5] * y * z
}

/// Twice the symmetric matrix of the form; integral.
fn doubled_matrix(c: &[BigInt; 6]) -> [[BigInt; 3]; 3] {
    let two = BigInt::from(2);
    [
        [&two * &c[0], c[3].clone(), c[4].clone()],
        [c[3].clone(), &two * &c[1], c[5].clone()],
        [c[4].clone(), c[5].clone(), &two * &c[2]],
    ]
}

fn to_rows(m: &[[BigInt; 3]; 3]) -> Vec<Vec<BigRational>> {
    m.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect()
}

/// Splits a rank-2 form into its two lines, if they are rational.
fn split_rank_two(c: &[BigInt; 6], m2: &[[BigInt; 3]; 3]) -> Result<LinePair, GeometryError> {
    let kernel = linalg::nullspace(&to_rows(m2), 3);
    debug_assert_eq!(kernel.len(), 1);
    let ints = clear_denominators(&kernel[0]);
    let node = ProjectivePoint::from_integers(ints.try_into().expect("three entries"))?;
    // A coordinate line missing the node meets the conic in two distinct points.
    let i = (0..3).find(|&i| !node.coords()[i].is_zero()).expect("nonzero node");
    let unit = |j: usize| {
        let mut v = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
        v[j] = BigInt::from(1);
        v
    };
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    let (p, r) = (unit(j), unit(k));
    let pr = [&p[0] + &r[0], &p[1] + &r[1], &p[2] + &r[2]];
    let qp = eval_form(c, &p);
    let qr = eval_form(c, &r);
    let b2 = eval_form(c, &pr) - &qp - &qr;
    let disc = &b2 * &b2 - BigInt::from(4) * &qp * &qr;
    if !disc.is_positive() {
        return Err(GeometryError::IrrationalSplit);
    }
    let root = disc.sqrt();
    if &root * &root != disc {
        return Err(GeometryError::IrrationalSplit);
    }
    let roots: [(BigInt, BigInt); 2] = if qp.is_zero() {
        [(BigInt::from(1), BigInt::zero()), (-qr, b2)]
    } else {
        let den = BigInt::from(2) * &qp;
        [(-&b2 + &root, den.clone()), (-&b2 - &root, den)]
    };
    let mut lines = roots.map(|(s, t)| {
        let u = ProjectivePoint::from_integers([&s * &p[0] + &t * &r[0], &s * &p[1] + &t * &r[1], &s * &p[2] + &t * &r[2]])
            .expect("nonzero combination");
        line_through(&node, &u).expect("point off the node")
    });
    lines.sort();
    Ok(LinePair { lines, node })
}

impl Conic {
    /// Classifies six rational coefficients `[x², y², z², xy, xz, yz]`.
    pub fn from_coeffs(coeffs: &[Rational; 6]) -> Result<Self, GeometryError> {
        Self::from_integer_coeffs(clear_denominators(coeffs))
    }

    pub fn from_integer_coeffs(coeffs: Vec<BigInt>) -> Result<Self, GeometryError> {
        if coeffs.len() != 6 {
            return Err(GeometryError::Parse(format!("a conic needs 6 coefficients, got {}", coeffs.len())));
        }
        let coeffs = canonical6(coeffs).ok_or(GeometryError::ZeroVector)?;
        let m2 = doubled_matrix(&coeffs);
        match linalg::rank(&to_rows(&m2), 3) {
            3 => Ok(Self { coeffs, rank: 3, split: None }),
            2 => {
                let split = split_rank_two(&coeffs, &m2)?;
                Ok(Self { coeffs, rank: 2, split: Some(split) })
            }
            _ => Err(GeometryError::RankOne),
        }
    }

    /// The Veronese conic `y² − xz`.
    pub fn veronese() -> Self {
        Self::from_integer_coeffs([0, 1, 0, 0, -1, 0].map(BigInt::from).to_vec()).expect("smooth")
    }

    /// The reducible conic `l₁ · l₂`.
    pub fn from_lines(l1: &ProjectiveLine, l2: &ProjectiveLine) -> Result<Self, GeometryError> {
        let [a1, b1, c1] = l1.coeffs();
        let [a2, b2, c2] = l2.coeffs();
        Self::from_integer_coeffs(vec![a1 * a2, b1 * b2, c1 * c2, a1 * b2 + a2 * b1, a1 * c2 + a2 * c1, b1 * c2 + b2 * c1])
    }

    pub fn coeffs(&self) -> &[BigInt; 6] {
        &self.coeffs
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn is_smooth(&self) -> bool {
        self.rank == 3
    }

    pub fn components(&self) -> Option<&[ProjectiveLine; 2]> {
        self.split.as_ref().map(|s| &s.lines)
    }

    pub fn node(&self) -> Option<&ProjectivePoint> {
        self.split.as_ref().map(|s| &s.node)
    }

    /// The symmetric matrix `M` with `Q(p) = pᵀ M p`.
    pub fn matrix(&self) -> [[Rational; 3]; 3] {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        doubled_matrix(&self.coeffs).map(|row| row.map(|x| BigRational::from_integer(x) * &half))
    }

    pub fn eval(&self, p: &ProjectivePoint) -> BigInt {
        eval_form(&self.coeffs, p.coords())
    }

    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        self.eval(p).is_zero()
    }

    /// The gradient `2Mp` of the form at `p`.
    pub fn gradient(&self, p: &ProjectivePoint) -> [BigInt; 3] {
        let m2 = doubled_matrix(&self.coeffs);
        m2.map(|row| dot(&row, p.coords()))
    }
}

impl fmt::Debug for Conic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.coeffs;
        write!(f, "Conic[{} {} {} {} {} {}; rank {}]", c[0], c[1], c[2], c[3], c[4], c[5], self.rank)
    }
}

pub fn classify_conic(coeffs: &[Rational; 6]) -> Result<Conic, GeometryError> {
    Conic::from_coeffs(coeffs)
}

/// The tangent line at a point of the conic; for a line pair, the component through `p`.
pub fn tangent_at(c: &Conic, p: &ProjectivePoint) -> Result<ProjectiveLine, GeometryError> {
    if !c.contains(p) {
        return Err(GeometryError::NotOnConic);
    }
    ProjectiveLine::from_integers(c.gradient(p)).map_err(|_| GeometryError::AtNode)
}
