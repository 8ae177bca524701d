use crate::exact_projective::{line_through, ProjectiveLine, ProjectivePoint};
use crate::marked_conic::{binom2, LineConfig, Marking};

use super::{check_total, not_in_domain, CaseLabel, PartialMarkings, ReconstructionError, ResidualCase};

/// The markings of maximal weight, read off from a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalMarkings {
    pub points: Vec<ProjectivePoint>,
    pub weight: u32,
}

/// `n ≥ 2` with `n(n−1)/2 = t`.
pub(crate) fn binom2_inverse(t: u64) -> Option<u64> {
    let n = ((1.0 + (1.0 + 8.0 * t as f64).sqrt()) / 2.0).round() as u64;
    (n.saturating_sub(1)..=n + 1).find(|&c| c >= 2 && binom2(c) == t)
}

pub(crate) fn through_any(l: &ProjectiveLine, pts: &[ProjectivePoint]) -> bool {
    pts.iter().any(|p| l.contains(p))
}

fn pattern_matches(r: &LineConfig, n: u64, w: u64, extra_unit: bool) -> bool {
    let mut expected: Vec<u64> = vec![w * w; binom2(n) as usize];
    if w >= 2 {
        expected.extend(std::iter::repeat_n(binom2(w), n as usize));
    }
    if extra_unit {
        expected.extend(std::iter::repeat_n(w, n as usize));
    }
    expected.sort_unstable();
    r.multiplicities() == expected
}

/// Markings of maximal weight in the configuration of a marked conic of
/// total weight `m` with at least two distinct lines.
///
/// They are the crossings of maximal `μ`. Their common weight comes from the
/// total of the lines avoiding them; when every line meets them the weight
/// is `m/N` or `(m−1)/N`, decided by the multiplicity pattern.
pub fn find_maximal_markings(r: &LineConfig, m: u64) -> Result<MaximalMarkings, ReconstructionError> {
    check_total(r, m)?;
    let crossings = r.crossings();
    let top = crossings.iter().map(|c| c.mu).max().ok_or_else(|| not_in_domain("fewer than two distinct lines"))?;
    let points: Vec<ProjectivePoint> = crossings.into_iter().filter(|c| c.mu == top).map(|c| c.point).collect();
    let n = points.len() as u64;
    let rest = r.filter(|l, _| !through_any(l, &points));
    let weight = if !rest.is_empty() {
        let m_rest = binom2_inverse(rest.total()).ok_or_else(|| not_in_domain("residual total is not binomial"))?;
        if m_rest >= m || !(m - m_rest).is_multiple_of(n) {
            return Err(not_in_domain("residual weight does not split evenly"));
        }
        (m - m_rest) / n
    } else {
        let all_equal = m.is_multiple_of(n) && pattern_matches(r, n, m / n, false);
        let one_unit = (m - 1).is_multiple_of(n) && (m - 1) / n >= 2 && pattern_matches(r, n, (m - 1) / n, true);
        match (all_equal, one_unit) {
            (true, false) => m / n,
            (false, true) => (m - 1) / n,
            (true, true) => return Err(ReconstructionError::AmbiguousWeight),
            (false, false) => return Err(not_in_domain("no weight fits the multiplicity pattern")),
        }
    };
    let weight = u32::try_from(weight).map_err(|_| not_in_domain("weight overflow"))?;
    Ok(MaximalMarkings { points, weight })
}

/// Point on exactly three distinct lines of `r`, if unique.
fn triple_point(r: &LineConfig) -> Result<ProjectivePoint, ReconstructionError> {
    let mut hits = r.crossings().into_iter().filter(|c| c.lines == 3);
    match (hits.next(), hits.next()) {
        (Some(c), None) => Ok(c.point),
        _ => Err(not_in_domain("expected a unique triple point")),
    }
}

/// Peel layers of maximal markings until at most one distinct line is left.
pub fn peel_markings(r: &LineConfig, m: u64) -> Result<PartialMarkings, ReconstructionError> {
    check_total(r, m)?;
    let mut recovered: Vec<Marking> = Vec::new();
    let mut cur = r.clone();
    let mut rem = m;
    let residual = loop {
        match cur.len() {
            0 => {
                break match rem {
                    0 => ResidualCase::Complete,
                    1 => ResidualCase::OneUnitMissing,
                    _ => return Err(not_in_domain("markings exhausted before the weight")),
                };
            }
            1 => {
                let (_, mult) = cur.entries().next().expect("one line");
                let single = rem >= 3 && mult == binom2(rem);
                let pair = rem == 2 && mult == 1;
                if !single && !pair {
                    return Err(not_in_domain("last line does not match the leftover weight"));
                }
                if recovered.len() < 2 {
                    return Err(not_in_domain("too few recovered markings to locate the last one"));
                }
                // Lines of r that avoid the recovered markings other than two of them.
                let (p1, p2) = (&recovered[0].point, &recovered[1].point);
                let others: Vec<ProjectivePoint> = recovered[2..].iter().map(|mk| mk.point.clone()).collect();
                let chord = line_through(p1, p2).expect("distinct markings");
                let reduced = r.filter(|l, _| *l != chord && !through_any(l, &others));
                if pair && reduced.len() == 7 {
                    break ResidualCase::TwoUnitsMissing;
                }
                if pair && reduced.len() != 5 {
                    return Err(not_in_domain("cannot tell a double marking from two units"));
                }
                let q = triple_point(&reduced)?;
                recovered.push(Marking::new(q, rem as u32));
                break ResidualCase::Complete;
            }
            _ => {
                let layer = find_maximal_markings(&cur, rem).map_err(|e| match e {
                    ReconstructionError::InconsistentTotal { .. } => not_in_domain("layer total is not binomial"),
                    other => other,
                })?;
                let used = layer.points.len() as u64 * u64::from(layer.weight);
                if used > rem {
                    return Err(not_in_domain("layer heavier than the leftover weight"));
                }
                rem -= used;
                cur = cur.filter(|l, _| !through_any(l, &layer.points));
                recovered.extend(layer.points.into_iter().map(|p| Marking::new(p, layer.weight)));
            }
        }
    };
    let case = if residual == ResidualCase::Complete { None } else { CaseLabel::classify(recovered.len(), residual) };
    Ok(PartialMarkings { recovered, residual, case, working_config: cur })
}
