//! The maps between pointed rational curves, configurations of lines and
//! binary forms, on explicit representatives.
//!
//! [`f_map`] contracts a curve to its central component, [`beta`] sends a
//! curve to the configuration of a principal part, and [`alpha`] reads a
//! binary form off a configuration. [`factorization_check`] compares
//! `alpha ∘ beta` with `f_map` up to Möbius transformations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::exact_projective::{bracket, line_through, tangent_at, P1Point, ProjectiveLine, ProjectivePoint};
use crate::marked_conic::{binom2, psi, LineConfig, MarkedConic};
use crate::reconstruction::{reconstruct, ReconstructionError};
use crate::stability::{BinaryForm, StabilityError};
use crate::stable_trees::{central_vertex, contract_to_conic, principal_parts, Part, PointedTree, Special, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuliError {
    #[error("binary forms of degrees {0} and {1}")]
    DegreeMismatch(u64, u64),
    #[error("coordinates are required")]
    MissingCoords,
    #[error("the curve has no principal part")]
    NoPrincipalPart,
    #[error("the curve has no central vertex")]
    NoCentralVertex,
    #[error(transparent)]
    Tree(TreeError),
    #[error(transparent)]
    Reconstruction(#[from] ReconstructionError),
    #[error(transparent)]
    Form(#[from] StabilityError),
}

impl From<TreeError> for ModuliError {
    fn from(e: TreeError) -> Self {
        match e {
            TreeError::MissingCoords => ModuliError::MissingCoords,
            other => ModuliError::Tree(other),
        }
    }
}

fn check_legs(t: &PointedTree, g: u32) -> Result<(), ModuliError> {
    let m = 2 * u64::from(g) + 2;
    if t.leg_count() != m {
        return Err(TreeError::LegCount { expected: m, found: t.leg_count() }.into());
    }
    Ok(())
}

/// Contract every component but the central one. Without a central vertex the
/// value is the class of `0^(g+1) ∞^(g+1)`, common to all forms with two
/// roots of multiplicity `g+1`.
pub fn f_map(t: &PointedTree, g: u32) -> Result<BinaryForm, ModuliError> {
    check_legs(t, g)?;
    let Some(v) = central_vertex(t) else {
        return Ok(BinaryForm::new([(P1Point::from_int(0), g + 1), (P1Point::infinity(), g + 1)])?);
    };
    let coords = t.coords().ok_or(ModuliError::MissingCoords)?.get(&v).ok_or(ModuliError::MissingCoords)?;
    let mut roots = Vec::new();
    for s in t.specials(v) {
        let mult = match s {
            Special::Leg(_) => 1,
            Special::Edge(u) => t.branch_legs(v, u).len() as u32,
        };
        roots.push((coords.get(&s).ok_or(ModuliError::MissingCoords)?.clone(), mult));
    }
    Ok(BinaryForm::new(roots)?)
}

/// Coordinates of `l` in the pencil spanned by `a` and `b`.
fn pencil_coordinate(l: &ProjectiveLine, a: &ProjectiveLine, b: &ProjectiveLine) -> P1Point {
    let (a, b, l) = (a.coeffs(), b.coeffs(), l.coeffs());
    let minor = |x: &[BigInt; 3], y: &[BigInt; 3], i: usize, j: usize| &x[i] * &y[j] - &x[j] * &y[i];
    let (i, j) =
        [(0, 1), (0, 2), (1, 2)].into_iter().find(|&(i, j)| !minor(a, b, i, j).is_zero()).expect("independent pencil basis");
    P1Point::from_integers([minor(l, b, i, j), minor(a, l, i, j)]).expect("line in the pencil")
}

/// Parametrize the support of `k` by the pencil of lines through its first
/// marking: each marking goes to its chord from that marking, and the first
/// marking to its tangent.
pub fn conic_parameters(k: &MarkedConic) -> Result<BinaryForm, ModuliError> {
    let mk = k.markings();
    let p0 = &mk[0].point;
    let axes = [[1, 0, 0], [0, 1, 0], [0, 0, 1]].map(|e| ProjectivePoint::new(e[0], e[1], e[2]).expect("nonzero"));
    let mut basis = axes.iter().filter(|e| *e != p0).map(|e| line_through(p0, e).expect("distinct points"));
    let la = basis.next().expect("two axes");
    let lb = basis.find(|l| *l != la).expect("independent pencil basis");
    let mut roots = Vec::new();
    for m in mk {
        let l = if m.point == *p0 {
            tangent_at(k.conic(), p0).map_err(|_| ReconstructionError::NotInV("singular support".into()))?
        } else {
            line_through(p0, &m.point).expect("distinct markings")
        };
        roots.push((pencil_coordinate(&l, &la, &lb), m.weight));
    }
    Ok(BinaryForm::new(roots)?)
}

/// The binary form of the marked conic reconstructed from `r`.
pub fn alpha(r: &LineConfig, g: u32) -> Result<BinaryForm, ModuliError> {
    let k = reconstruct(r, 2 * u64::from(g) + 2)?;
    conic_parameters(&k)
}

/// The principal part `beta` uses: the single vertex of smallest id if
/// there is one, otherwise the first adjacent pair.
pub fn beta_part(t: &PointedTree, g: u32) -> Result<Part, ModuliError> {
    check_legs(t, g)?;
    let parts = principal_parts(t, g, 0)?;
    parts
        .iter()
        .map(|p| p.part)
        .find(|p| matches!(p, Part::Vertex(_)))
        .or_else(|| parts.first().map(|p| p.part))
        .ok_or(ModuliError::NoPrincipalPart)
}

/// The configuration of lines of the embedded contraction of a principal part.
pub fn beta(t: &PointedTree, g: u32) -> Result<LineConfig, ModuliError> {
    if t.coords().is_none() {
        return Err(ModuliError::MissingCoords);
    }
    let part = beta_part(t, g)?;
    let k = contract_to_conic(t, part)?.embedded.expect("coordinates present");
    Ok(psi(&k))
}

/// `t ↦ ([t,a][b,c] : [t,c][b,a])`, sending `a, b, c` to `0, 1, ∞`.
fn normalize(form: &BinaryForm, a: &P1Point, b: &P1Point, c: &P1Point) -> BTreeMap<P1Point, u32> {
    let (ba, bc) = (bracket(b, a), bracket(b, c));
    form.roots()
        .map(|(t, w)| {
            let x = bracket(t, a) * &bc;
            let y = bracket(t, c) * &ba;
            (P1Point::from_integers([x, y]).expect("distinct roots"), w)
        })
        .collect()
}

/// Whether a projective transformation of the line carries the weighted
/// roots of `b1` onto those of `b2`.
pub fn mobius_equivalent(b1: &BinaryForm, b2: &BinaryForm) -> Result<bool, ModuliError> {
    if b1.degree() != b2.degree() {
        return Err(ModuliError::DegreeMismatch(b1.degree(), b2.degree()));
    }
    if b1.multiplicities() != b2.multiplicities() {
        return Ok(false);
    }
    let r1: Vec<(&P1Point, u32)> = b1.roots().collect();
    let r2: Vec<(&P1Point, u32)> = b2.roots().collect();
    if r2.len() < 3 {
        return Ok(true);
    }
    let target = normalize(b2, r2[0].0, r2[1].0, r2[2].0);
    let n = r1.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k || (r1[i].1, r1[j].1, r1[k].1) != (r2[0].1, r2[1].1, r2[2].1) {
                    continue;
                }
                if normalize(b1, r1[i].0, r1[j].0, r1[k].0) == target {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Whether `alpha(beta(t))` and `f_map(t)` agree up to Möbius transformations.
pub fn factorization_check(t: &PointedTree, g: u32) -> Result<bool, ModuliError> {
    if central_vertex(t).is_none() {
        return Err(ModuliError::NoCentralVertex);
    }
    let r = beta(t, g)?;
    let lhs = alpha(&r, g)?;
    mobius_equivalent(&lhs, &f_map(t, g)?)
}

/// Degree `h = m(m−1)/2` of the configurations for genus `g`.
pub fn line_degree(g: u32) -> u64 {
    binom2(2 * u64::from(g) + 2)
}
