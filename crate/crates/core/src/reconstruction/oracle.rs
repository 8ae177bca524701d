use std::collections::BTreeSet;

use crate::exact_projective::{fit_conic, ProjectiveLine, ProjectivePoint};
use crate::marked_conic::{binom2, psi, LineConfig, MarkedConic, Marking};

use super::{check_total, ReconstructionError};

/// Every marked conic `k` of total weight `m` with `psi(k) = r`.
///
/// Exhaustive: markings are drawn from the crossings of `μ ≥ m−1`, weights
/// are bounded by `μ`, and the support is fitted through the points plus,
/// when there are fewer than five, tangents chosen among the lines of `r`.
/// Supports that these conditions leave undetermined are not found.
pub fn oracle_reconstruct(r: &LineConfig, m: u64) -> Result<BTreeSet<MarkedConic>, ReconstructionError> {
    check_total(r, m)?;
    let mut found = BTreeSet::new();
    if m < 2 || r.len() < 2 {
        return Ok(found);
    }
    let cands: Vec<(ProjectivePoint, u64)> = r
        .crossings()
        .into_iter()
        .filter(|c| c.mu + 1 >= m)
        .map(|c| {
            // A marking of weight w sees at least w(m−w) + C(w,2) through it.
            let cap = (1..m).take_while(|&w| w * (m - w) + binom2(w) <= c.mu).last().unwrap_or(0);
            (c.point, cap)
        })
        .filter(|(_, cap)| *cap >= 1)
        .collect();
    let mut chosen = Vec::new();
    assign(r, &cands, 0, m, &mut chosen, &mut found);
    Ok(found)
}

fn assign(
    r: &LineConfig,
    cands: &[(ProjectivePoint, u64)],
    i: usize,
    left: u64,
    chosen: &mut Vec<Marking>,
    found: &mut BTreeSet<MarkedConic>,
) {
    if left == 0 {
        try_support(r, chosen, found);
        return;
    }
    if i == cands.len() {
        return;
    }
    let (p, cap) = &cands[i];
    for w in (1..=(*cap).min(left)).rev() {
        chosen.push(Marking::new(p.clone(), w as u32));
        assign(r, cands, i + 1, left - w, chosen, found);
        chosen.pop();
    }
    assign(r, cands, i + 1, left, chosen, found);
}

fn try_support(r: &LineConfig, chosen: &[Marking], found: &mut BTreeSet<MarkedConic>) {
    let points: Vec<ProjectivePoint> = chosen.iter().map(|mk| mk.point.clone()).collect();
    let mut conics = Vec::new();
    if points.len() >= 5 {
        conics.extend(fit_conic(&points, &[]).ok());
    } else {
        let heavy: Vec<usize> = (0..chosen.len()).filter(|&i| chosen[i].weight >= 2).collect();
        let need = 5 - points.len();
        if heavy.len() < need {
            return;
        }
        let tangent_options: Vec<Vec<ProjectiveLine>> =
            heavy[..need].iter().map(|&i| r.lines().filter(|l| l.contains(&points[i])).cloned().collect()).collect();
        let mut pick = vec![0usize; need];
        loop {
            let contacts: Vec<(ProjectivePoint, ProjectiveLine)> =
                (0..need).map(|j| (points[heavy[j]].clone(), tangent_options[j][pick[j]].clone())).collect();
            let plain: Vec<ProjectivePoint> =
                (0..points.len()).filter(|i| !heavy[..need].contains(i)).map(|i| points[i].clone()).collect();
            conics.extend(fit_conic(&plain, &contacts).ok());
            // Odometer over the tangent choices.
            let mut j = 0;
            while j < need {
                pick[j] += 1;
                if pick[j] < tangent_options[j].len() {
                    break;
                }
                pick[j] = 0;
                j += 1;
            }
            if j == need {
                break;
            }
        }
    }
    for conic in conics {
        if let Ok(k) = MarkedConic::new(conic, chosen.to_vec()) {
            if psi(&k) == *r {
                found.insert(k);
            }
        }
    }
}
