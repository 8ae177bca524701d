//! Recovering a smooth marked conic from its configuration of lines.
//!
//! [`reconstruct`] peels the markings off layer by layer, from the heaviest
//! weight down ([`find_maximal_markings`], [`peel_markings`]), then locates
//! at most two missing unit markings and the conic ([`complete_markings`]).
//! [`oracle_reconstruct`] is an independent exhaustive search used to check it.

mod complete;
mod oracle;
mod steps;

use thiserror::Error;

use crate::marked_conic::{binom2, psi, LineConfig, MarkedConic, Marking};
use crate::stability::config_verdict;

pub use complete::complete_markings;
pub use oracle::oracle_reconstruct;
pub use steps::{find_maximal_markings, peel_markings, MaximalMarkings};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructionError {
    #[error("total multiplicity {total} differs from binom({m}, 2)")]
    InconsistentTotal { total: u64, m: u64 },
    /// An intermediate step found the input inconsistent with any
    /// configuration of a smooth marked conic.
    #[error("not the configuration of a smooth marked conic: {0}")]
    NotInDomain(String),
    #[error("configuration is outside the reconstruction locus: {0}")]
    NotInV(String),
    #[error("the weight of the maximal markings is ambiguous")]
    AmbiguousWeight,
    #[error("{0} distinct completions reproduce the configuration")]
    AmbiguousCompletion(usize),
}

impl ReconstructionError {
    /// Stable machine-readable code.
    pub fn reason_code(&self) -> &'static str {
        match self {
            ReconstructionError::InconsistentTotal { .. } => "inconsistent_total",
            ReconstructionError::NotInDomain(_) | ReconstructionError::NotInV(_) => "not_in_v",
            ReconstructionError::AmbiguousWeight | ReconstructionError::AmbiguousCompletion(_) => "ambiguous",
        }
    }
}

pub(crate) fn not_in_domain(msg: impl Into<String>) -> ReconstructionError {
    ReconstructionError::NotInDomain(msg.into())
}

/// How many unit markings the peeling could not locate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResidualCase {
    Complete,
    OneUnitMissing,
    TwoUnitsMissing,
}

impl ResidualCase {
    pub fn missing(self) -> usize {
        match self {
            ResidualCase::Complete => 0,
            ResidualCase::OneUnitMissing => 1,
            ResidualCase::TwoUnitsMissing => 2,
        }
    }
}

/// The five shapes of an incomplete peeling with at most four recovered markings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseLabel {
    /// Two recovered, weights `{1, 1, m₃, m₄}`.
    A,
    /// Three recovered, weights `{1, m₂, m₃, m₄}`.
    B,
    /// Three recovered, weights `{1, 1, m₃, m₄, m₅}`.
    C,
    /// Four recovered, weights `{1, m₂, …, m₅}`.
    D,
    /// Four recovered, weights `{1, 1, m₃, …, m₆}`.
    E,
}

impl CaseLabel {
    pub(crate) fn classify(recovered: usize, residual: ResidualCase) -> Option<Self> {
        use ResidualCase::*;
        match (recovered, residual) {
            (2, TwoUnitsMissing) => Some(CaseLabel::A),
            (3, OneUnitMissing) => Some(CaseLabel::B),
            (3, TwoUnitsMissing) => Some(CaseLabel::C),
            (4, OneUnitMissing) => Some(CaseLabel::D),
            (4, TwoUnitsMissing) => Some(CaseLabel::E),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMarkings {
    /// Recovered markings, heaviest layer first.
    pub recovered: Vec<Marking>,
    pub residual: ResidualCase,
    pub case: Option<CaseLabel>,
    /// The configuration left after removing every line through a recovered marking.
    pub working_config: LineConfig,
}

impl PartialMarkings {
    pub fn recovered_weight(&self) -> u64 {
        self.recovered.iter().map(|m| u64::from(m.weight)).sum()
    }
}

/// Outcome of [`reconstruct_traced`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub marked: MarkedConic,
    /// Set when the layer weights were ambiguous and the oracle decided.
    pub oracle_fallback: bool,
}

pub(crate) fn check_total(r: &LineConfig, m: u64) -> Result<(), ReconstructionError> {
    if r.total() != binom2(m) {
        return Err(ReconstructionError::InconsistentTotal { total: r.total(), m });
    }
    Ok(())
}

/// The unique smooth marked conic `k` of total weight `m` with `psi(k) = r`.
pub fn reconstruct(r: &LineConfig, m: u64) -> Result<MarkedConic, ReconstructionError> {
    reconstruct_traced(r, m).map(|x| x.marked)
}

pub fn reconstruct_traced(r: &LineConfig, m: u64) -> Result<Reconstruction, ReconstructionError> {
    check_total(r, m)?;
    let verdict = config_verdict(r).map_err(|e| ReconstructionError::NotInV(e.to_string()))?;
    if !verdict.status.is_semistable() {
        return Err(ReconstructionError::NotInV("configuration is unstable".into()));
    }
    let to_v = |e: ReconstructionError| match e {
        ReconstructionError::NotInDomain(msg) => ReconstructionError::NotInV(msg),
        other => other,
    };
    let (marked, oracle_fallback) = match peel_markings(r, m) {
        Ok(partial) => (complete_markings(r, &partial, m).map_err(to_v)?, false),
        Err(ReconstructionError::AmbiguousWeight) => {
            let found = oracle_reconstruct(r, m)?;
            let mut smooth = found.into_iter().filter(|k| k.conic().is_smooth());
            match (smooth.next(), smooth.next()) {
                (Some(k), None) => (k, true),
                (None, _) => return Err(ReconstructionError::NotInV("no smooth preimage".into())),
                (Some(_), Some(_)) => return Err(ReconstructionError::AmbiguousCompletion(2)),
            }
        }
        Err(e) => return Err(to_v(e)),
    };
    if !marked.conic().is_smooth() {
        return Err(ReconstructionError::NotInV("recovered support is reducible".into()));
    }
    if psi(&marked) != *r {
        return Err(ReconstructionError::NotInV("recovered marked conic does not reproduce the configuration".into()));
    }
    Ok(Reconstruction { marked, oracle_fallback })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    use crate::exact_projective::{ProjectiveLine, Projectivity};
    use crate::marked_conic::{generic_realize, place_markings, AbstractMarkedConic};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=max.min(n)).rev() {
            for mut rest in partitions(n - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }

    fn realize(w: &[u32], seed: u64) -> MarkedConic {
        generic_realize(&AbstractMarkedConic::smooth(w.to_vec()).unwrap(), seed).unwrap()
    }

    #[test]
    fn round_trip_over_profiles() {
        for g in 3..=5u32 {
            let m = 2 * g + 2;
            for w in partitions(m, g + 1) {
                let k = realize(&w, 7);
                let r = psi(&k);
                if !config_verdict(&r).unwrap().status.is_semistable() {
                    assert!(matches!(reconstruct(&r, u64::from(m)), Err(ReconstructionError::NotInV(_))));
                    continue;
                }
                match reconstruct(&r, u64::from(m)) {
                    Ok(back) => assert_eq!(back, k, "profile {w:?}"),
                    Err(e) => panic!("profile {w:?}: {e}"),
                }
            }
        }
    }

    fn transformed(k: &MarkedConic, a: &Projectivity) -> MarkedConic {
        let markings = k.markings().iter().map(|mk| Marking::new(a.point(&mk.point), mk.weight)).collect();
        MarkedConic::new(a.conic(k.conic()).unwrap(), markings).unwrap()
    }

    #[test]
    fn round_trip_in_special_position() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = Projectivity::new([[2, 1, 0], [0, 1, 3], [1, -1, 1]]).unwrap();
        for g in 3..=5u32 {
            let m = 2 * g + 2;
            let profiles = partitions(m, g + 1);
            let mut done = 0;
            while done < 60 {
                let w = profiles.choose(&mut rng).unwrap();
                let mut pool: Vec<i64> = (-6..=6).collect();
                pool.shuffle(&mut rng);
                let params = vec![pool[..w.len()].to_vec()];
                let k = place_markings(&AbstractMarkedConic::smooth(w.clone()).unwrap(), &params).unwrap();
                let k = transformed(&k, &a);
                let r = psi(&k);
                if !config_verdict(&r).unwrap().status.is_semistable() {
                    continue;
                }
                done += 1;
                match reconstruct(&r, u64::from(m)) {
                    Ok(back) => assert_eq!(back, k, "profile {w:?} params {params:?}"),
                    Err(e) => panic!("profile {w:?} params {params:?}: {e}"),
                }
            }
        }
    }

    fn peel_of(w: &[u32]) -> PartialMarkings {
        let k = realize(w, 3);
        peel_markings(&psi(&k), k.total_weight()).unwrap()
    }

    #[test]
    fn maximal_markings_examples() {
        let k = realize(&[2, 1, 1, 1, 1, 1, 1], 1);
        let r = psi(&k);
        let top = find_maximal_markings(&r, 8).unwrap();
        assert_eq!(top.weight, 2);
        assert_eq!(top.points.len(), 1);
        assert_eq!(r.mu(&top.points[0]), 13);

        let k = realize(&[3, 3, 1, 1], 1);
        let top = find_maximal_markings(&psi(&k), 8).unwrap();
        assert_eq!((top.points.len(), top.weight), (2, 3));
        assert!(top.points.iter().all(|p| psi(&k).mu(p) == 18));

        let k = realize(&[1; 8], 1);
        let top = find_maximal_markings(&psi(&k), 8).unwrap();
        assert_eq!((top.points.len(), top.weight), (8, 1));
    }

    #[test]
    fn peeling_cases() {
        let p = peel_of(&[2, 1, 1, 1, 1, 1, 1]);
        assert_eq!((p.residual, p.recovered.len()), (ResidualCase::Complete, 7));
        for w in [[3, 3, 1, 1], [4, 2, 1, 1]] {
            let p = peel_of(&w);
            assert_eq!(p.residual, ResidualCase::TwoUnitsMissing);
            assert_eq!(p.case, Some(CaseLabel::A));
            let mut got: Vec<u32> = p.recovered.iter().map(|mk| mk.weight).collect();
            got.sort_unstable();
            assert_eq!(got, vec![w[1], w[0]]);
        }
        assert_eq!(peel_of(&[3, 2, 2, 2, 1]).case, Some(CaseLabel::D));
        assert_eq!(peel_of(&[3, 3, 3, 1]).case, Some(CaseLabel::B));
        assert_eq!(peel_of(&[4, 2, 2, 1, 1]).case, Some(CaseLabel::C));
        assert_eq!(peel_of(&[3, 2, 2, 2, 1, 1, 1]).residual, ResidualCase::Complete);
    }

    #[test]
    fn special_subcases_complete() {
        for w in [vec![3, 3, 1, 1], vec![3, 3, 3, 1]] {
            let k = realize(&w, 5);
            assert_eq!(reconstruct(&psi(&k), k.total_weight()).unwrap(), k);
        }
    }

    #[test]
    fn agrees_with_oracle_at_genus_three() {
        for w in partitions(8, 4) {
            let k = realize(&w, 2);
            let r = psi(&k);
            let fast = reconstruct(&r, 8);
            let slow = oracle_reconstruct(&r, 8).unwrap();
            match fast {
                Ok(back) => assert_eq!(slow, BTreeSet::from([back]), "profile {w:?}"),
                Err(_) => {
                    assert!(!slow.iter().any(|k| k.conic().is_smooth()) || !config_verdict(&r).unwrap().status.is_semistable())
                }
            }
        }
    }

    #[test]
    fn two_line_support_is_outside() {
        let a = AbstractMarkedConic::two_line(vec![1; 6], vec![1; 4]).unwrap();
        let k = generic_realize(&a, 0).unwrap();
        let r = psi(&k);
        assert_eq!(r.total(), 45);
        assert!(matches!(reconstruct(&r, 10), Err(ReconstructionError::NotInV(_))));
    }

    #[test]
    fn rejects_wrong_total_and_unstable() {
        let k = realize(&[4, 4, 2], 0);
        let r = psi(&k);
        assert_eq!(reconstruct(&r, 8), Err(ReconstructionError::InconsistentTotal { total: 45, m: 8 }));
        assert!(matches!(reconstruct(&r, 10), Err(ReconstructionError::NotInV(_))));
        assert_eq!(oracle_reconstruct(&r, 8).unwrap_err().reason_code(), "inconsistent_total");
    }

    #[test]
    fn oracle_on_a_single_heavy_line() {
        let r = LineConfig::from_entries([(ProjectiveLine::new(0, 0, 1).unwrap(), 28)]).unwrap();
        assert!(oracle_reconstruct(&r, 8).unwrap().is_empty());
    }
}
