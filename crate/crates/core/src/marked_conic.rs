//! Conics with weighted markings and their configurations of lines.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exact_projective::{intersect_lines, line_through, tangent_at, Conic, GeometryError, ProjectiveLine, ProjectivePoint};

pub const DEFAULT_REALIZE_ATTEMPTS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarkedConicError {
    #[error("marking weights must be positive")]
    ZeroWeight,
    #[error("markings must be distinct, {0} repeats")]
    DuplicateMarking(ProjectivePoint),
    #[error("marking {0} is not on the conic")]
    OffConic(ProjectivePoint),
    #[error("marking {0} is the node of the conic")]
    MarkingAtNode(ProjectivePoint),
    #[error("total weight {0} is below 2")]
    TotalWeightTooSmall(u64),
    #[error("line multiplicities must be positive")]
    ZeroMultiplicity,
    #[error("no certified generic realization after {0} attempts")]
    GenericityExhausted(u32),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub fn binom2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Marking {
    pub point: ProjectivePoint,
    pub weight: u32,
}

impl Marking {
    pub fn new(point: ProjectivePoint, weight: u32) -> Self {
        Self { point, weight }
    }
}

/// A conic together with distinct weighted markings on its smooth locus.
///
/// Markings are kept sorted by point, so two marked conics are equal exactly
/// when they have the same support and the same weighted points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedConic {
    conic: Conic,
    markings: Vec<Marking>,
}

impl MarkedConic {
    pub fn new(conic: Conic, mut markings: Vec<Marking>) -> Result<Self, MarkedConicError> {
        markings.sort();
        for w in markings.windows(2) {
            if w[0].point == w[1].point {
                return Err(MarkedConicError::DuplicateMarking(w[0].point.clone()));
            }
        }
        for mk in &markings {
            if mk.weight == 0 {
                return Err(MarkedConicError::ZeroWeight);
            }
            if !conic.contains(&mk.point) {
                return Err(MarkedConicError::OffConic(mk.point.clone()));
            }
            if conic.node() == Some(&mk.point) {
                return Err(MarkedConicError::MarkingAtNode(mk.point.clone()));
            }
        }
        let total: u64 = markings.iter().map(|m| u64::from(m.weight)).sum();
        if total < 2 {
            return Err(MarkedConicError::TotalWeightTooSmall(total));
        }
        Ok(Self { conic, markings })
    }

    pub fn conic(&self) -> &Conic {
        &self.conic
    }

    pub fn markings(&self) -> &[Marking] {
        &self.markings
    }

    pub fn total_weight(&self) -> u64 {
        self.markings.iter().map(|m| u64::from(m.weight)).sum()
    }

    /// Weights in increasing order.
    pub fn weight_profile(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.markings.iter().map(|m| m.weight).collect();
        w.sort_unstable();
        w
    }
}

/// A point where at least two distinct lines of a configuration cross.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    pub point: ProjectivePoint,
    /// Number of distinct lines through the point.
    pub lines: usize,
    /// Lines through the point counted with multiplicity.
    pub mu: u64,
}

/// A multiset of lines, keyed by canonical line.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineConfig {
    entries: BTreeMap<ProjectiveLine, u64>,
    total: u64,
}

impl LineConfig {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a configuration, merging repeated lines.
    pub fn from_entries(entries: impl IntoIterator<Item = (ProjectiveLine, u64)>) -> Result<Self, MarkedConicError> {
        let mut r = Self::new();
        for (l, k) in entries {
            if k == 0 {
                return Err(MarkedConicError::ZeroMultiplicity);
            }
            r.add(l, k);
        }
        Ok(r)
    }

    pub fn add(&mut self, line: ProjectiveLine, mult: u64) {
        if mult == 0 {
            return;
        }
        *self.entries.entry(line).or_insert(0) += mult;
        self.total += mult;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of distinct lines.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ProjectiveLine, u64)> {
        self.entries.iter().map(|(l, &k)| (l, k))
    }

    pub fn lines(&self) -> impl Iterator<Item = &ProjectiveLine> {
        self.entries.keys()
    }

    pub fn multiplicity(&self, line: &ProjectiveLine) -> u64 {
        self.entries.get(line).copied().unwrap_or(0)
    }

    /// Line multiplicities in increasing order.
    pub fn multiplicities(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.entries.values().copied().collect();
        v.sort_unstable();
        v
    }

    /// The subconfiguration of lines satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&ProjectiveLine, u64) -> bool) -> Self {
        let mut r = Self::new();
        for (l, k) in self.entries() {
            if keep(l, k) {
                r.add(l.clone(), k);
            }
        }
        r
    }

    /// Lines through `p`, with multiplicity.
    pub fn mu(&self, p: &ProjectivePoint) -> u64 {
        self.entries().filter(|(l, _)| l.contains(p)).map(|(_, k)| k).sum()
    }

    /// All points lying on two or more distinct lines, sorted by point.
    pub fn crossings(&self) -> Vec<Crossing> {
        let lines: Vec<(&ProjectiveLine, u64)> = self.entries().collect();
        let mut through: BTreeMap<ProjectivePoint, Vec<usize>> = BTreeMap::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let p = intersect_lines(lines[i].0, lines[j].0).expect("distinct keys");
                let v = through.entry(p).or_default();
                v.push(i);
                v.push(j);
            }
        }
        through
            .into_iter()
            .map(|(point, mut idx)| {
                idx.sort_unstable();
                idx.dedup();
                let mu = idx.iter().map(|&i| lines[i].1).sum();
                Crossing { point, lines: idx.len(), mu }
            })
            .collect()
    }
}

const fn weight_product(a: u32, b: u32) -> u64 {
    a as u64 * b as u64
}

/// The configuration of lines of a marked conic: every chord between two
/// markings with multiplicity `mᵢ·mⱼ`, and the tangent at each marking of
/// weight `m ≥ 2` with multiplicity `m(m−1)/2`.
pub fn psi(k: &MarkedConic) -> LineConfig {
    let mut r = LineConfig::new();
    let mk = k.markings();
    for (i, a) in mk.iter().enumerate() {
        for b in &mk[i + 1..] {
            let l = line_through(&a.point, &b.point).expect("distinct markings");
            r.add(l, weight_product(a.weight, b.weight));
        }
        if a.weight >= 2 {
            let t = tangent_at(k.conic(), &a.point).expect("smooth point of the support");
            r.add(t, binom2(u64::from(a.weight)));
        }
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConicKind {
    Smooth,
    TwoLine,
}

/// Weight data of a marked conic without coordinates: one weight group for a
/// smooth conic, two (one per component) for a line pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbstractMarkedConic {
    groups: Vec<Vec<u32>>,
}

impl AbstractMarkedConic {
    pub fn smooth(weights: Vec<u32>) -> Result<Self, MarkedConicError> {
        Self::validated(vec![weights])
    }

    pub fn two_line(first: Vec<u32>, second: Vec<u32>) -> Result<Self, MarkedConicError> {
        Self::validated(vec![first, second])
    }

    fn validated(groups: Vec<Vec<u32>>) -> Result<Self, MarkedConicError> {
        if groups.iter().flatten().any(|&w| w == 0) {
            return Err(MarkedConicError::ZeroWeight);
        }
        let a = Self { groups };
        if a.total_weight() < 2 {
            return Err(MarkedConicError::TotalWeightTooSmall(a.total_weight()));
        }
        Ok(a)
    }

    pub fn kind(&self) -> ConicKind {
        if self.groups.len() == 1 {
            ConicKind::Smooth
        } else {
            ConicKind::TwoLine
        }
    }

    pub fn groups(&self) -> &[Vec<u32>] {
        &self.groups
    }

    pub fn total_weight(&self) -> u64 {
        self.groups.iter().flatten().map(|&w| u64::from(w)).sum()
    }

    /// Same data with each group sorted; for comparisons up to relabeling.
    pub fn normalized(&self) -> Self {
        let mut groups = self.groups.clone();
        for g in &mut groups {
            g.sort_unstable();
        }
        Self { groups }
    }
}

/// Closed-form coincidence pattern of a marked conic in generic position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictedPattern {
    /// Line multiplicities in increasing order.
    pub line_multiplicities: Vec<u64>,
    /// Expected μ at each marking, parallel to the weight groups.
    pub marking_mu: Vec<Vec<u64>>,
    /// Expected μ at the node of a line pair.
    pub node_mu: Option<u64>,
}

pub fn predicted_pattern(a: &AbstractMarkedConic) -> PredictedPattern {
    let m = a.total_weight();
    let mut mults = Vec::new();
    match a.kind() {
        ConicKind::Smooth => {
            let w = &a.groups[0];
            for (i, &wi) in w.iter().enumerate() {
                for &wj in &w[i + 1..] {
                    mults.push(weight_product(wi, wj));
                }
                if wi >= 2 {
                    mults.push(binom2(u64::from(wi)));
                }
            }
            let mu = w.iter().map(|&x| u64::from(x) * (m - u64::from(x)) + binom2(u64::from(x))).collect();
            mults.sort_unstable();
            PredictedPattern { line_multiplicities: mults, marking_mu: vec![mu], node_mu: None }
        }
        ConicKind::TwoLine => {
            let totals: Vec<u64> = a.groups.iter().map(|g| g.iter().map(|&x| u64::from(x)).sum()).collect();
            for &t in &totals {
                if binom2(t) > 0 {
                    mults.push(binom2(t));
                }
            }
            for &wi in &a.groups[0] {
                for &wj in &a.groups[1] {
                    mults.push(weight_product(wi, wj));
                }
            }
            mults.sort_unstable();
            let marking_mu =
                (0..2).map(|c| a.groups[c].iter().map(|&w| binom2(totals[c]) + u64::from(w) * totals[1 - c]).collect()).collect();
            PredictedPattern { line_multiplicities: mults, marking_mu, node_mu: Some(binom2(totals[0]) + binom2(totals[1])) }
        }
    }
}

/// Places the markings of each group of `a` at the given parameters:
/// smooth groups at `(1 : t : t²)` on `y² = xz`, line-pair groups at
/// `(0 : 1 : t)` on `x = 0` and `(1 : 0 : t)` on `y = 0`.
pub fn place_markings(a: &AbstractMarkedConic, params: &[Vec<i64>]) -> Result<MarkedConic, MarkedConicError> {
    let mut markings = Vec::new();
    let conic = match a.kind() {
        ConicKind::Smooth => {
            for (&w, &t) in a.groups[0].iter().zip(&params[0]) {
                markings.push(Marking::new(ProjectivePoint::new(1, t, t * t)?, w));
            }
            Conic::veronese()
        }
        ConicKind::TwoLine => {
            for (&w, &t) in a.groups[0].iter().zip(&params[0]) {
                markings.push(Marking::new(ProjectivePoint::new(0, 1, t)?, w));
            }
            for (&w, &t) in a.groups[1].iter().zip(&params[1]) {
                markings.push(Marking::new(ProjectivePoint::new(1, 0, t)?, w));
            }
            Conic::from_lines(&ProjectiveLine::new(1, 0, 0)?, &ProjectiveLine::new(0, 1, 0)?)?
        }
    };
    MarkedConic::new(conic, markings)
}

/// Checks that `k` realizes `a` with no accidental coincidences: the line
/// multiplicities and the μ at every marking and node match the closed-form
/// pattern, and every point on three or more lines is a marking or the node.
pub fn is_certified_generic(a: &AbstractMarkedConic, params: &[Vec<i64>], k: &MarkedConic) -> bool {
    let pattern = predicted_pattern(a);
    let r = psi(k);
    if r.multiplicities() != pattern.line_multiplicities {
        return false;
    }
    let mut special: Vec<ProjectivePoint> = Vec::new();
    for (c, group) in params.iter().enumerate() {
        for (i, &t) in group.iter().enumerate() {
            let p = match (a.kind(), c) {
                (ConicKind::Smooth, _) => ProjectivePoint::new(1, t, t * t),
                (ConicKind::TwoLine, 0) => ProjectivePoint::new(0, 1, t),
                _ => ProjectivePoint::new(1, 0, t),
            }
            .expect("nonzero");
            if r.mu(&p) != pattern.marking_mu[c][i] {
                return false;
            }
            special.push(p);
        }
    }
    if let Some(node) = k.conic().node() {
        if Some(r.mu(node)) != pattern.node_mu {
            return false;
        }
        special.push(node.clone());
    }
    r.crossings().iter().all(|c| c.lines < 3 || special.contains(&c.point))
}

/// A marked conic realizing `a` in certified generic position, sampled
/// deterministically from `seed`.
pub fn generic_realize(a: &AbstractMarkedConic, seed: u64) -> Result<MarkedConic, MarkedConicError> {
    generic_realize_with(a, seed, DEFAULT_REALIZE_ATTEMPTS)
}

pub fn generic_realize_with(a: &AbstractMarkedConic, seed: u64, attempts: u32) -> Result<MarkedConic, MarkedConicError> {
    generic_realize_params(a, seed, attempts).map(|(k, _)| k)
}

/// Like [`generic_realize_with`], also returning the integer parameters used per group.
pub fn generic_realize_params(
    a: &AbstractMarkedConic,
    seed: u64,
    attempts: u32,
) -> Result<(MarkedConic, Vec<Vec<i64>>), MarkedConicError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count: usize = a.groups.iter().map(Vec::len).sum();
    for attempt in 0..attempts {
        // The sampling range grows with the attempt number.
        let bound = (2 * count as i64 + 2) * (i64::from(attempt) + 1);
        let params: Vec<Vec<i64>> = a
            .groups
            .iter()
            .map(|g| {
                let mut pool: Vec<i64> = (-bound..=bound).collect();
                pool.shuffle(&mut rng);
                pool.truncate(g.len());
                pool
            })
            .collect();
        let k = place_markings(a, &params)?;
        if is_certified_generic(a, &params, &k) {
            return Ok((k, params));
        }
    }
    Err(MarkedConicError::GenericityExhausted(attempts))
}
