//! GIT stability of line configurations (Hilbert–Mumford numerical
//! criterion) and of binary forms.
//!
//! A configuration `r` of total multiplicity `h` is semistable iff
//! `μ_p(r) ≤ 2h/3` for every point `p` and `μ_l(r) ≤ h/3` for every line `l`;
//! stable when both inequalities are strict. The maximum of `μ_p` is attained
//! at a crossing of two distinct lines, or anywhere on the line when the
//! configuration has a single distinct line. All comparisons are exact.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_projective::{intersect_lines, P1Point, ProjectiveLine, ProjectivePoint, Rational};
use crate::marked_conic::LineConfig;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilityError {
    #[error("configuration is empty")]
    EmptyConfig,
    #[error("binary form has degree {0} < 2")]
    DegreeTooSmall(u64),
    #[error("root multiplicities must be positive")]
    ZeroMultiplicity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl Status {
    pub fn is_semistable(self) -> bool {
        self != Status::Unstable
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Stable => "stable",
            Status::StrictlySemistable => "strictly_semistable",
            Status::Unstable => "unstable",
        }
    }
}

/// The object whose μ decides the verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Point(ProjectivePoint),
    Line(ProjectiveLine),
    Root(P1Point),
}

/// Verdict with the extremal witness, its exact μ, and the threshold it was compared against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub status: Status,
    pub witness: Witness,
    pub mu: Rational,
    pub threshold: Rational,
}

fn compare(value: u64, threshold_num: u64, threshold_den: u64) -> std::cmp::Ordering {
    // value vs threshold_num / threshold_den, in integers.
    (u128::from(value) * u128::from(threshold_den)).cmp(&u128::from(threshold_num))
}

fn ratio(n: u64, d: u64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn mu_point(r: &LineConfig, p: &ProjectivePoint) -> u64 {
    r.mu(p)
}

/// The line of largest multiplicity (smallest canonical key on ties).
pub fn max_line_mu(r: &LineConfig) -> Option<(ProjectiveLine, u64)> {
    let mut best: Option<(&ProjectiveLine, u64)> = None;
    for (l, k) in r.entries() {
        if best.is_none_or(|(_, b)| k > b) {
            best = Some((l, k));
        }
    }
    best.map(|(l, k)| (l.clone(), k))
}

/// A point maximizing `μ_p` (smallest canonical key on ties).
pub fn max_point_mu(r: &LineConfig) -> Option<(ProjectivePoint, u64)> {
    if r.len() == 1 {
        let (l, k) = r.entries().next().expect("one line");
        let p = (0..3)
            .find_map(|i| {
                let mut e = [0i64; 3];
                e[i] = 1;
                let axis = ProjectiveLine::new(e[0], e[1], e[2]).expect("unit vector");
                intersect_lines(l, &axis).ok()
            })
            .expect("a line differs from some coordinate line");
        return Some((p, k));
    }
    let mut best: Option<(ProjectivePoint, u64)> = None;
    for c in r.crossings() {
        if best.as_ref().is_none_or(|(_, b)| c.mu > *b) {
            best = Some((c.point, c.mu));
        }
    }
    best
}

fn status_from(point_cmp: std::cmp::Ordering, line_cmp: std::cmp::Ordering) -> Status {
    use std::cmp::Ordering::*;
    match (point_cmp, line_cmp) {
        (Greater, _) | (_, Greater) => Status::Unstable,
        (Less, Less) => Status::Stable,
        _ => Status::StrictlySemistable,
    }
}

pub fn config_verdict(r: &LineConfig) -> Result<StabilityVerdict, StabilityError> {
    if r.is_empty() {
        return Err(StabilityError::EmptyConfig);
    }
    let h = r.total();
    let (point, mu_p) = max_point_mu(r).expect("nonempty");
    let (line, mu_l) = max_line_mu(r).expect("nonempty");
    let status = status_from(compare(mu_p, 2 * h, 3), compare(mu_l, h, 3));
    // Report whichever quantity is closer to (or further past) its threshold;
    // μ_p/(2h/3) ≤ μ_l/(h/3) iff μ_p ≤ 2μ_l.
    if mu_p <= 2 * mu_l {
        Ok(StabilityVerdict { status, witness: Witness::Line(line), mu: ratio(mu_l, 1), threshold: ratio(h, 3) })
    } else {
        Ok(StabilityVerdict { status, witness: Witness::Point(point), mu: ratio(mu_p, 1), threshold: ratio(2 * h, 3) })
    }
}

/// A binary form, as the weighted multiset of its roots on the projective line.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryForm {
    roots: BTreeMap<P1Point, u32>,
    degree: u64,
}

impl BinaryForm {
    /// Builds a form; repeated roots accumulate multiplicity.
    pub fn new(roots: impl IntoIterator<Item = (P1Point, u32)>) -> Result<Self, StabilityError> {
        let mut map = BTreeMap::new();
        let mut degree = 0;
        for (p, k) in roots {
            if k == 0 {
                return Err(StabilityError::ZeroMultiplicity);
            }
            *map.entry(p).or_insert(0) += k;
            degree += u64::from(k);
        }
        Ok(Self { roots: map, degree })
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn roots(&self) -> impl Iterator<Item = (&P1Point, u32)> {
        self.roots.iter().map(|(p, &k)| (p, k))
    }

    pub fn multiplicity(&self, p: &P1Point) -> u32 {
        self.roots.get(p).copied().unwrap_or(0)
    }

    /// Root multiplicities in increasing order.
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.roots.values().copied().collect();
        v.sort_unstable();
        v
    }
}

/// Stable iff every root has multiplicity below `degree/2`; strictly
/// semistable when the largest equals it.
pub fn binary_form_verdict(b: &BinaryForm) -> Result<StabilityVerdict, StabilityError> {
    if b.degree() < 2 {
        return Err(StabilityError::DegreeTooSmall(b.degree()));
    }
    let mut best: Option<(&P1Point, u32)> = None;
    for (p, k) in b.roots() {
        if best.is_none_or(|(_, bk)| k > bk) {
            best = Some((p, k));
        }
    }
    let (root, k) = best.expect("positive degree");
    let status = match compare(u64::from(k), b.degree(), 2) {
        std::cmp::Ordering::Less => Status::Stable,
        std::cmp::Ordering::Equal => Status::StrictlySemistable,
        std::cmp::Ordering::Greater => Status::Unstable,
    };
    Ok(StabilityVerdict {
        status,
        witness: Witness::Root(root.clone()),
        mu: ratio(u64::from(k), 1),
        threshold: ratio(b.degree(), 2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_projective::{rational, Conic};
    use crate::marked_conic::{generic_realize, place_markings, psi, AbstractMarkedConic, MarkedConic, Marking};

    fn unit_octuple() -> LineConfig {
        psi(&generic_realize(&AbstractMarkedConic::smooth(vec![1; 8]).unwrap(), 3).unwrap())
    }

    #[test]
    fn mu_examples() {
        let k = generic_realize(&AbstractMarkedConic::smooth(vec![1; 8]).unwrap(), 3).unwrap();
        let r = psi(&k);
        assert_eq!(mu_point(&r, &k.markings()[0].point), 7);
        let off =
            (0..).map(|t| ProjectivePoint::new(1, t, 1_000_003).unwrap()).find(|p| r.lines().all(|l| !l.contains(p))).unwrap();
        assert_eq!(mu_point(&r, &off), 0);
        let two = r.crossings().into_iter().find(|c| c.lines == 2).unwrap();
        assert_eq!(two.mu, 2);
    }

    #[test]
    fn eight_unit_markings_are_stable() {
        let v = config_verdict(&unit_octuple()).unwrap();
        assert_eq!(v.status, Status::Stable);
        assert_eq!(max_point_mu(&unit_octuple()).unwrap().1, 7);
        assert_eq!(max_line_mu(&unit_octuple()).unwrap().1, 1);
    }

    #[test]
    fn weight_four_marking_is_unstable() {
        let mut w = vec![4];
        w.extend([1; 4]);
        let r = psi(&generic_realize(&AbstractMarkedConic::smooth(w).unwrap(), 0).unwrap());
        assert_eq!(r.total(), 28);
        let v = config_verdict(&r).unwrap();
        assert_eq!(v.status, Status::Unstable);
        assert!(matches!(v.witness, Witness::Point(_)));
        assert_eq!(v.mu, rational(22, 1));
        assert_eq!(v.threshold, rational(56, 3));
    }

    #[test]
    fn two_line_pair_sits_on_both_thresholds() {
        let a = AbstractMarkedConic::two_line(vec![1; 6], vec![1; 4]).unwrap();
        let r = psi(&generic_realize(&a, 1).unwrap());
        let v = config_verdict(&r).unwrap();
        assert_eq!(v.status, Status::StrictlySemistable);
        assert_eq!(v.mu, rational(15, 1));
        assert_eq!(v.threshold, rational(15, 1));
        assert_eq!(max_point_mu(&r).unwrap().1, 21);
    }

    #[test]
    fn single_line_configuration() {
        let mut r = LineConfig::new();
        r.add(ProjectiveLine::new(1, 2, 3).unwrap(), 10);
        let (p, mu) = max_point_mu(&r).unwrap();
        assert!(ProjectiveLine::new(1, 2, 3).unwrap().contains(&p));
        assert_eq!(mu, 10);
        assert_eq!(config_verdict(&r).unwrap().status, Status::Unstable);
        assert_eq!(config_verdict(&LineConfig::new()), Err(StabilityError::EmptyConfig));
    }

    #[test]
    fn lone_unit_marking_on_a_component() {
        // Lone weight-1 marking on x = 0 and seven on y = 0: μ at the node is 21 > 56/3.
        let a = AbstractMarkedConic::two_line(vec![1], vec![1; 7]).unwrap();
        let k = place_markings(&a, &[vec![5], vec![1, 2, 3, 4, 6, 7, 8]]).unwrap();
        let r = psi(&k);
        let node = k.conic().node().unwrap();
        assert!(mu_point(&r, node) >= 28 - 7);
        assert_eq!(config_verdict(&r).unwrap().status, Status::Unstable);
    }

    #[test]
    fn binary_form_examples() {
        let form = |ms: &[u32]| BinaryForm::new(ms.iter().enumerate().map(|(i, &k)| (P1Point::from_int(i as i64), k))).unwrap();
        assert_eq!(binary_form_verdict(&form(&[1; 8])).unwrap().status, Status::Stable);
        assert_eq!(binary_form_verdict(&form(&[4, 4])).unwrap().status, Status::StrictlySemistable);
        let v = binary_form_verdict(&form(&[5, 1, 1, 1])).unwrap();
        assert_eq!(v.status, Status::Unstable);
        assert_eq!(v.threshold, rational(4, 1));
        assert_eq!(binary_form_verdict(&form(&[1])), Err(StabilityError::DegreeTooSmall(1)));
    }

    #[test]
    fn verdict_is_projectively_invariant() {
        use crate::exact_projective::Projectivity;
        let a = Projectivity::new([[1, 2, 0], [0, 1, -3], [4, 0, 1]]).unwrap();
        let ks = [
            generic_realize(&AbstractMarkedConic::smooth(vec![3, 2, 1, 1, 1]).unwrap(), 7).unwrap(),
            MarkedConic::new(
                Conic::veronese(),
                (0..8).map(|t| Marking::new(ProjectivePoint::new(1, t, t * t).unwrap(), 1)).collect(),
            )
            .unwrap(),
        ];
        for k in ks {
            let r = psi(&k);
            let moved = LineConfig::from_entries(r.entries().map(|(l, m)| (a.line(l), m))).unwrap();
            let (v1, v2) = (config_verdict(&r).unwrap(), config_verdict(&moved).unwrap());
            assert_eq!(v1.status, v2.status);
            assert_eq!(v1.mu, v2.mu);
            assert_eq!(max_point_mu(&r).unwrap().1, max_point_mu(&moved).unwrap().1);
        }
    }
}
