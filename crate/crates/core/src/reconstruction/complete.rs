use std::collections::BTreeSet;

use crate::exact_projective::{fit_conic, intersect_lines, line_through, Conic, ProjectiveLine, ProjectivePoint};
use crate::marked_conic::{psi, LineConfig, MarkedConic, Marking};

use super::steps::through_any;
use super::{not_in_domain, CaseLabel, PartialMarkings, ReconstructionError, ResidualCase};

fn fit(points: &[ProjectivePoint], contacts: &[(ProjectivePoint, ProjectiveLine)]) -> Result<Conic, ReconstructionError> {
    fit_conic(points, contacts).map_err(|e| not_in_domain(format!("conic fit failed: {e}")))
}

fn assemble(conic: Conic, markings: Vec<Marking>) -> Result<MarkedConic, ReconstructionError> {
    MarkedConic::new(conic, markings).map_err(|e| not_in_domain(e.to_string()))
}

fn exactly<T>(items: Vec<T>, n: usize, what: &str) -> Result<Vec<T>, ReconstructionError> {
    if items.len() != n {
        return Err(not_in_domain(format!("expected {n} {what}, found {}", items.len())));
    }
    Ok(items)
}

fn points_of(markings: &[Marking]) -> Vec<ProjectivePoint> {
    markings.iter().map(|mk| mk.point.clone()).collect()
}

/// Crossings of `r` with the given `μ`, excluding `skip`.
fn crossings_with_mu(r: &LineConfig, mu: u64, skip: &[ProjectivePoint]) -> Vec<ProjectivePoint> {
    r.crossings().into_iter().filter(|c| c.mu == mu && !skip.contains(&c.point)).map(|c| c.point).collect()
}

/// The tangent at a recovered marking of weight at least 2 when every
/// marking is known: the only line of `r` through it meeting no other marking.
fn tangent_among(r: &LineConfig, p: &ProjectivePoint, all: &[ProjectivePoint]) -> Result<ProjectiveLine, ReconstructionError> {
    let others: Vec<ProjectivePoint> = all.iter().filter(|q| *q != p).cloned().collect();
    let cands: Vec<ProjectiveLine> = r.lines().filter(|l| l.contains(p) && !through_any(l, &others)).cloned().collect();
    Ok(exactly(cands, 1, "tangent candidates")?.remove(0))
}

fn fit_all_known(r: &LineConfig, markings: &[Marking]) -> Result<Conic, ReconstructionError> {
    let pts = points_of(markings);
    if pts.len() >= 5 {
        return fit(&pts, &[]);
    }
    let mut plain = Vec::new();
    let mut contacts = Vec::new();
    for mk in markings {
        if mk.weight >= 2 {
            contacts.push((mk.point.clone(), tangent_among(r, &mk.point, &pts)?));
        } else {
            plain.push(mk.point.clone());
        }
    }
    fit(&plain, &contacts)
}

fn with_units(known: &[Marking], units: Vec<ProjectivePoint>) -> Vec<Marking> {
    known.iter().cloned().chain(units.into_iter().map(|p| Marking::new(p, 1))).collect()
}

/// Finish a peeling: locate the missing unit markings and the conic.
pub fn complete_markings(r: &LineConfig, partial: &PartialMarkings, m: u64) -> Result<MarkedConic, ReconstructionError> {
    let known = &partial.recovered;
    let missing = partial.residual.missing();
    let result = if partial.residual == ResidualCase::Complete {
        let conic = fit_all_known(r, known)?;
        assemble(conic, known.clone())?
    } else if known.len() >= 5 {
        let conic = fit(&points_of(known), &[])?;
        let units: Vec<ProjectivePoint> =
            crossings_with_mu(r, m - 1, &points_of(known)).into_iter().filter(|p| conic.contains(p)).collect();
        assemble(conic, with_units(known, exactly(units, missing, "missing unit markings")?))?
    } else {
        let case = partial.case.ok_or_else(|| not_in_domain("too few recovered markings"))?;
        let markings = match case {
            CaseLabel::A => case_a(r, known, m)?,
            CaseLabel::B => case_b(r, known, m)?,
            CaseLabel::C | CaseLabel::E => case_c_e(r, known, m, missing)?,
            CaseLabel::D => case_d(r, known)?,
        };
        match markings {
            Some(mk) => {
                let conic = fit_all_known(r, &mk)?;
                assemble(conic, mk)?
            }
            None => constrained_search(r, known, m, missing)?,
        }
    };
    if psi(&result) != *r {
        return Err(not_in_domain("completion does not reproduce the configuration"));
    }
    Ok(result)
}

/// The line through `p` avoiding `q` whose multiplicity differs from the weight of `p`.
fn tangent_by_weight(r: &LineConfig, p: &Marking, q: &ProjectivePoint) -> Result<ProjectiveLine, ReconstructionError> {
    let w = u64::from(p.weight);
    let cands = r.entries().filter(|(l, k)| l.contains(&p.point) && !l.contains(q) && *k != w).map(|(l, _)| l.clone()).collect();
    Ok(exactly(cands, 1, "tangent candidates")?.remove(0))
}

type Completion = Result<Option<Vec<Marking>>, ReconstructionError>;

// Two known markings, two units missing. Without weight 3 the tangents are
// the lines through one known marking whose multiplicity is not its weight;
// the other four lines through them cross at the units.
fn case_a(r: &LineConfig, known: &[Marking], m: u64) -> Completion {
    if known.iter().any(|mk| mk.weight == 3) {
        return Ok(None);
    }
    let (p3, p4) = (&known[0], &known[1]);
    let t3 = tangent_by_weight(r, p3, &p4.point)?;
    let t4 = tangent_by_weight(r, p4, &p3.point)?;
    let chord = line_through(&p3.point, &p4.point).expect("distinct markings");
    let four: Vec<ProjectiveLine> = r
        .lines()
        .filter(|l| (l.contains(&p3.point) || l.contains(&p4.point)) && **l != t3 && **l != t4 && **l != chord)
        .cloned()
        .collect();
    let four = exactly(four, 4, "chords to the missing units")?;
    let skip = points_of(known);
    let mut units = BTreeSet::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let x = intersect_lines(&four[i], &four[j]).expect("distinct lines");
            if !skip.contains(&x) && r.mu(&x) == m - 1 {
                units.insert(x);
            }
        }
    }
    Ok(Some(with_units(known, exactly(units.into_iter().collect(), 2, "missing unit markings")?)))
}

// Three known markings, one unit missing. Drop the lines through a third
// marking and the chord of two markings of weight other than 3; the unit is
// where their chords to it cross.
fn case_b(r: &LineConfig, known: &[Marking], _m: u64) -> Completion {
    let non3: Vec<&Marking> = known.iter().filter(|mk| mk.weight != 3).collect();
    if non3.len() < 2 {
        return Ok(None);
    }
    let (a, b) = (non3[0], non3[1]);
    let c = known.iter().find(|mk| mk.point != a.point && mk.point != b.point).expect("three markings");
    let chord = line_through(&a.point, &b.point).expect("distinct markings");
    let sub = r.filter(|l, _| *l != chord && !l.contains(&c.point));
    let q = crossings_with_mu(&sub, u64::from(a.weight + b.weight), &[a.point.clone(), b.point.clone()]);
    Ok(Some(with_units(known, exactly(q, 1, "missing unit markings")?)))
}

// Three or four known markings with one or two units missing. Keeping only
// the lines through one marking of weight other than 3, the units are the
// crossings of `μ` equal to that weight plus one.
fn case_c_e(r: &LineConfig, known: &[Marking], _m: u64, missing: usize) -> Completion {
    let Some(a) = known.iter().find(|mk| mk.weight != 3) else {
        return Ok(None);
    };
    let others: Vec<ProjectivePoint> = known.iter().filter(|mk| mk.point != a.point).map(|mk| mk.point.clone()).collect();
    let sub = r.filter(|l, _| !through_any(l, &others));
    let q = crossings_with_mu(&sub, u64::from(a.weight) + 1, std::slice::from_ref(&a.point));
    Ok(Some(with_units(known, exactly(q, missing, "missing unit markings")?)))
}

// Four known markings, one unit missing: without the chords between known
// markings, the unit is the only point on four lines.
fn case_d(r: &LineConfig, known: &[Marking]) -> Completion {
    let pts = points_of(known);
    let sub = r.filter(|l, _| pts.iter().filter(|p| l.contains(p)).count() < 2);
    let q: Vec<ProjectivePoint> = sub.crossings().into_iter().filter(|c| c.lines == 4).map(|c| c.point).collect();
    Ok(Some(with_units(known, exactly(q, 1, "missing unit markings")?)))
}

/// Try every set of unit candidates (crossings with `μ = m−1`), fitting the
/// conic through the known points and, when short of five, a tangent taken
/// from the lines of `r`. Exactly one completion must reproduce `r`.
fn constrained_search(r: &LineConfig, known: &[Marking], m: u64, missing: usize) -> Result<MarkedConic, ReconstructionError> {
    let skip = points_of(known);
    let cands = crossings_with_mu(r, m - 1, &skip);
    let mut subsets: Vec<Vec<ProjectivePoint>> = Vec::new();
    for i in 0..cands.len() {
        if missing == 1 {
            subsets.push(vec![cands[i].clone()]);
        } else {
            for j in i + 1..cands.len() {
                subsets.push(vec![cands[i].clone(), cands[j].clone()]);
            }
        }
    }
    let mut found = BTreeSet::new();
    for units in subsets {
        let pts: Vec<ProjectivePoint> = skip.iter().chain(units.iter()).cloned().collect();
        let mut conics = Vec::new();
        if pts.len() >= 5 {
            conics.extend(fit_conic(&pts, &[]).ok());
        } else {
            for mk in known.iter().filter(|mk| mk.weight >= 2) {
                let rest: Vec<ProjectivePoint> = pts.iter().filter(|p| **p != mk.point).cloned().collect();
                for l in r.lines().filter(|l| l.contains(&mk.point) && !through_any(l, &rest)) {
                    conics.extend(fit_conic(&rest, &[(mk.point.clone(), l.clone())]).ok());
                }
            }
        }
        for conic in conics {
            if let Ok(k) = MarkedConic::new(conic, with_units(known, units.clone())) {
                if psi(&k) == *r {
                    found.insert(k);
                }
            }
        }
    }
    match found.len() {
        1 => Ok(found.into_iter().next().expect("one")),
        0 => Err(not_in_domain("no completion reproduces the configuration")),
        n => Err(ReconstructionError::AmbiguousCompletion(n)),
    }
}
