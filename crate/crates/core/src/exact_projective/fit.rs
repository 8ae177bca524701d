use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::conic::Conic;
use super::linalg;
use super::point::{ProjectiveLine, ProjectivePoint};
use super::rational::clear_denominators;
use super::GeometryError;

fn q(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

// Each row is a linear condition on [a, b, c, d, e, f].
fn point_row(p: &ProjectivePoint) -> Vec<BigRational> {
    let [x, y, z] = p.coords();
    vec![q(&(x * x)), q(&(y * y)), q(&(z * z)), q(&(x * y)), q(&(x * z)), q(&(y * z))]
}

/// Rows of the gradient at `p` as linear functions of the coefficients.
fn gradient_rows(p: &ProjectivePoint) -> [Vec<BigInt>; 3] {
    let [x, y, z] = p.coords();
    let zero = BigInt::from(0);
    let two = BigInt::from(2);
    [
        vec![&two * x, zero.clone(), zero.clone(), y.clone(), z.clone(), zero.clone()],
        vec![zero.clone(), &two * y, zero.clone(), x.clone(), zero.clone(), z.clone()],
        vec![zero.clone(), zero.clone(), &two * z, zero.clone(), x.clone(), y.clone()],
    ]
}

/// Rows expressing `gradient(p) × l = 0`.
fn contact_rows(p: &ProjectivePoint, l: &ProjectiveLine) -> Vec<Vec<BigRational>> {
    let g = gradient_rows(p);
    let lc = l.coeffs();
    let comb = |i: usize, j: usize| -> Vec<BigRational> {
        // g_i l_j − g_j l_i
        (0..6).map(|k| q(&(&g[i][k] * &lc[j] - &g[j][k] * &lc[i]))).collect()
    };
    vec![comb(1, 2), comb(2, 0), comb(0, 1)]
}

/// Fits the conic through `points` that is tangent to each contact line at its point.
///
/// Each point imposes one linear condition and each contact two. The
/// conditions must number at least five and cut out a unique conic.
pub fn fit_conic(points: &[ProjectivePoint], contacts: &[(ProjectivePoint, ProjectiveLine)]) -> Result<Conic, GeometryError> {
    if points.len() + 2 * contacts.len() < 5 {
        return Err(GeometryError::Underdetermined);
    }
    if contacts.iter().any(|(p, l)| !l.contains(p)) {
        return Err(GeometryError::Inconsistent);
    }
    let mut rows: Vec<Vec<BigRational>> = points.iter().map(point_row).collect();
    for (p, l) in contacts {
        rows.push(point_row(p));
        rows.extend(contact_rows(p, l));
    }
    let kernel = linalg::nullspace(&rows, 6);
    match kernel.len() {
        0 => Err(GeometryError::Inconsistent),
        1 => {
            let conic = match Conic::from_integer_coeffs(clear_denominators(&kernel[0])) {
                Err(GeometryError::RankOne) => return Err(GeometryError::DegenerateRankOne),
                other => other?,
            };
            // A singular contact point satisfies the tangency rows vacuously.
            if contacts.iter().any(|(p, _)| conic.gradient(p).iter().all(|x| x.is_zero())) {
                return Err(GeometryError::Inconsistent);
            }
            Ok(conic)
        }
        _ => Err(GeometryError::Underdetermined),
    }
}
