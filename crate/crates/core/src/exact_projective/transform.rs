use num_bigint::BigInt;
use num_traits::Zero;

use super::conic::Conic;
use super::point::{dot, ProjectiveLine, ProjectivePoint};
use super::GeometryError;

/// An invertible integer 3×3 matrix acting on the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projectivity {
    matrix: [[BigInt; 3]; 3],
    // Transpose of the adjugate; acts on line coordinates.
    dual: [[BigInt; 3]; 3],
}

fn adjugate(m: &[[BigInt; 3]; 3]) -> [[BigInt; 3]; 3] {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0];
    // adj[i][j] = cofactor(j, i)
    [
        [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
        [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
        [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
    ]
}

fn transpose(m: &[[BigInt; 3]; 3]) -> [[BigInt; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| m[j][i].clone()))
}

fn apply(m: &[[BigInt; 3]; 3], v: &[BigInt; 3]) -> [BigInt; 3] {
    std::array::from_fn(|i| dot(&m[i], v))
}

impl Projectivity {
    pub fn new(rows: [[i64; 3]; 3]) -> Result<Self, GeometryError> {
        Self::from_integers(rows.map(|r| r.map(BigInt::from)))
    }

    pub fn from_integers(matrix: [[BigInt; 3]; 3]) -> Result<Self, GeometryError> {
        let adj = adjugate(&matrix);
        let det = dot(&matrix[0], &[adj[0][0].clone(), adj[1][0].clone(), adj[2][0].clone()]);
        if det.is_zero() {
            return Err(GeometryError::Singular);
        }
        Ok(Self { dual: transpose(&adj), matrix })
    }

    pub fn matrix(&self) -> &[[BigInt; 3]; 3] {
        &self.matrix
    }

    pub fn point(&self, p: &ProjectivePoint) -> ProjectivePoint {
        ProjectivePoint::from_integers(apply(&self.matrix, p.coords())).expect("invertible")
    }

    /// Image of a line: `A^{-T} l` up to scale.
    pub fn line(&self, l: &ProjectiveLine) -> ProjectiveLine {
        ProjectiveLine::from_integers(apply(&self.dual, l.coeffs())).expect("invertible")
    }

    /// Image conic `Q ∘ A^{-1}`, i.e. matrix `adj(A)ᵀ M adj(A)` up to scale.
    pub fn conic(&self, c: &Conic) -> Result<Conic, GeometryError> {
        let [a, b, cc, d, e, f] = c.coeffs();
        let two = BigInt::from(2);
        let m2 = [[&two * a, d.clone(), e.clone()], [d.clone(), &two * b, f.clone()], [e.clone(), f.clone(), &two * cc]];
        let adj = transpose(&self.dual);
        let mul = |x: &[[BigInt; 3]; 3], y: &[[BigInt; 3]; 3]| -> [[BigInt; 3]; 3] {
            std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| &x[i][k] * &y[k][j]).sum()))
        };
        let n = mul(&mul(&self.dual, &m2), &adj);
        // Off-diagonal entries of the doubled matrix are the mixed coefficients; the
        // diagonal is even, so halve it.
        Conic::from_integer_coeffs(vec![
            &n[0][0] / &two,
            &n[1][1] / &two,
            &n[2][2] / &two,
            n[0][1].clone(),
            n[0][2].clone(),
            n[1][2].clone(),
        ])
    }
}
