use lineconf::exact_projective::{
    fit_conic, intersect_lines, line_through, rational, tangent_at, Conic, P1Point, ProjectiveLine, ProjectivePoint,
    Projectivity, Rational,
};
use lineconf::marked_conic::{
    binom2, generic_realize, place_markings, predicted_pattern, psi, AbstractMarkedConic, LineConfig, MarkedConic,
};
use lineconf::moduli_maps::{alpha, mobius_equivalent};
use lineconf::reconstruction::{find_maximal_markings, reconstruct};
use lineconf::stability::{config_verdict, BinaryForm, Status};
use lineconf::stable_trees::{
    candidate_parts, check_stable_tree, contract_to_conic, dualizing_dual_degrees, enumerate_stable_trees, forget_leg,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use std::sync::OnceLock;

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

fn profile() -> impl Strategy<Value = (u32, Vec<u32>)> {
    (3u32..=5).prop_flat_map(|g| (Just(g), prop::sample::select(partitions(2 * g + 2, 2 * g + 2))))
}

fn semistable_profile() -> impl Strategy<Value = (u32, Vec<u32>)> {
    static PROFILES: OnceLock<Vec<(u32, Vec<u32>)>> = OnceLock::new();
    let all = PROFILES.get_or_init(|| {
        (3u32..=5)
            .flat_map(|g| partitions(2 * g + 2, g).into_iter().map(move |w| (g, w)))
            .filter(|(_, w)| config_verdict(&psi(&realize(w, 0))).unwrap().status.is_semistable())
            .collect()
    });
    prop::sample::select(all.clone())
}

fn realize(w: &[u32], seed: u64) -> MarkedConic {
    generic_realize(&AbstractMarkedConic::smooth(w.to_vec()).unwrap(), seed).unwrap()
}

fn nonzero_triple() -> impl Strategy<Value = [i64; 3]> {
    [-50i64..=50, -50i64..=50, -50i64..=50].prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
}

fn invertible() -> impl Strategy<Value = Projectivity> {
    [[-4i64..=4, -4i64..=4, -4i64..=4], [-4i64..=4, -4i64..=4, -4i64..=4], [-4i64..=4, -4i64..=4, -4i64..=4]]
        .prop_filter_map("singular", |rows| Projectivity::new(rows).ok())
}

fn transform_config(r: &LineConfig, a: &Projectivity) -> LineConfig {
    LineConfig::from_entries(r.entries().map(|(l, k)| (a.line(l), k))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn canonical_form_ignores_scaling(v in nonzero_triple(), num in -9i64..=9, den in 1i64..=9) {
        prop_assume!(num != 0);
        let p = ProjectivePoint::new(v[0], v[1], v[2]).unwrap();
        let s = rational(num, den);
        let scaled = v.map(|x| Rational::from_integer(x.into()) * &s);
        prop_assert_eq!(ProjectivePoint::from_rationals(&scaled).unwrap(), p.clone());
        prop_assert_eq!(ProjectivePoint::from_integers(p.coords().clone()).unwrap(), p.clone());
        let l = ProjectiveLine::from_rationals(&scaled).unwrap();
        prop_assert_eq!(l.coeffs(), p.coords());
    }

    #[test]
    fn p1_canonical_form(a in -30i64..=30, b in -30i64..=30, s in prop::sample::select(vec![-3i64, -1, 2, 5])) {
        prop_assume!(a != 0 || b != 0);
        let p = P1Point::new(a, b).unwrap();
        prop_assert_eq!(P1Point::new(a * s, b * s).unwrap(), p.clone());
        let [x, y] = p.coords();
        prop_assert!(*y > BigInt::from(0) || (*y == BigInt::from(0) && *x == BigInt::from(1)));
    }

    #[test]
    fn spans_and_intersections(p in nonzero_triple(), q in nonzero_triple(), s in nonzero_triple()) {
        let (p, q, s) = (
            ProjectivePoint::new(p[0], p[1], p[2]).unwrap(),
            ProjectivePoint::new(q[0], q[1], q[2]).unwrap(),
            ProjectivePoint::new(s[0], s[1], s[2]).unwrap(),
        );
        prop_assume!(p != q && p != s);
        let pq = line_through(&p, &q).unwrap();
        prop_assert_eq!(&pq, &line_through(&q, &p).unwrap());
        prop_assert!(pq.contains(&p) && pq.contains(&q));
        let ps = line_through(&p, &s).unwrap();
        prop_assume!(ps != pq);
        prop_assert_eq!(intersect_lines(&pq, &ps).unwrap(), p);
    }

    #[test]
    fn tangent_meets_only_at_the_point(t in -20i64..=20, a in invertible()) {
        let c = a.conic(&Conic::veronese()).unwrap();
        let p = a.point(&ProjectivePoint::new(1, t, t * t).unwrap());
        let l = tangent_at(&c, &p).unwrap();
        prop_assert!(l.contains(&p));
        // c(p + s·d) = c(p) + 2s·B(p, d) + s²·c(d) has a double root at s = 0.
        let d = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
            .iter()
            .filter_map(|e| intersect_lines(&l, &ProjectiveLine::new(e[0], e[1], e[2]).unwrap()).ok())
            .find(|d| *d != p)
            .unwrap();
        let [x, y, z] = [0usize, 1, 2].map(|i| Rational::from_integer(p.coords()[i].clone()));
        let [u, v, w] = [0usize, 1, 2].map(|i| Rational::from_integer(d.coords()[i].clone()));
        let m = c.matrix();
        let form = |a: &[Rational; 3], b: &[Rational; 3]| -> Rational {
            (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| &a[i] * &m[i][j] * &b[j]).sum()
        };
        let (pp, pd) = (form(&[x.clone(), y.clone(), z.clone()], &[x.clone(), y.clone(), z.clone()]), form(&[x, y, z], &[u, v, w]));
        prop_assert_eq!(pp, Rational::from_integer(0.into()));
        prop_assert_eq!(pd, Rational::from_integer(0.into()));
    }

    #[test]
    fn fit_recovers_the_conic(ts in prop::collection::btree_set(-15i64..=15, 5), a in invertible()) {
        let c = a.conic(&Conic::veronese()).unwrap();
        let points: Vec<ProjectivePoint> = ts.iter().map(|&t| a.point(&ProjectivePoint::new(1, t, t * t).unwrap())).collect();
        prop_assert_eq!(fit_conic(&points, &[]).unwrap(), c.clone());
        let contact = (points[0].clone(), tangent_at(&c, &points[0]).unwrap());
        prop_assert_eq!(fit_conic(&points[1..4], &[contact]).unwrap(), c);
    }

    #[test]
    fn psi_total_is_binomial((_, w) in profile(), seed in 0u64..1000) {
        let k = realize(&w, seed);
        prop_assert_eq!(psi(&k).total(), binom2(k.total_weight()));
    }

    #[test]
    fn psi_total_on_line_pairs(split in 1usize..9, seed in 0u64..1000) {
        let (first, second) = (vec![1u32; split], vec![1u32; 10 - split]);
        let k = generic_realize(&AbstractMarkedConic::two_line(first, second).unwrap(), seed).unwrap();
        prop_assert_eq!(psi(&k).total(), 45);
    }

    #[test]
    fn smooth_pattern_and_mu((_, w) in profile(), seed in 0u64..1000) {
        let a = AbstractMarkedConic::smooth(w.clone()).unwrap();
        let k = generic_realize(&a, seed).unwrap();
        prop_assert_eq!(&k, &generic_realize(&a, seed).unwrap());
        let r = psi(&k);
        let pattern = predicted_pattern(&a);
        prop_assert_eq!(r.multiplicities(), pattern.line_multiplicities);
        let m = k.total_weight();
        for mk in k.markings() {
            let wi = u64::from(mk.weight);
            prop_assert_eq!(r.mu(&mk.point), wi * (m - wi) + binom2(wi));
        }
    }

    #[test]
    fn heavy_marking_is_unstable(g in 3u32..=5, extra in 0u32..=2, seed in 0u64..100) {
        let heavy = g + 1 + extra;
        let mut w = vec![heavy];
        w.extend(std::iter::repeat_n(1, (2 * g + 2 - heavy) as usize));
        let v = config_verdict(&psi(&realize(&w, seed))).unwrap();
        prop_assert_eq!(v.status, Status::Unstable);
    }

    #[test]
    fn unit_weights_are_stable(g in 3u32..=5, seed in 0u64..100) {
        let v = config_verdict(&psi(&realize(&vec![1; 2 * g as usize + 2], seed))).unwrap();
        prop_assert_eq!(v.status, Status::Stable);
    }

    #[test]
    fn lone_marking_on_a_component_is_unstable(g in 3u32..=5, seed in 0u64..100) {
        let m = 2 * g + 2;
        let k = generic_realize(&AbstractMarkedConic::two_line(vec![1; m as usize - 1], vec![1]).unwrap(), seed).unwrap();
        let r = psi(&k);
        let h = binom2(u64::from(m));
        prop_assert!(r.mu(k.conic().node().unwrap()) >= h - u64::from(2 * g + 1));
        prop_assert_eq!(config_verdict(&r).unwrap().status, Status::Unstable);
    }

    #[test]
    fn verdict_is_projectively_invariant((_, w) in profile(), seed in 0u64..100, a in invertible()) {
        let r = psi(&realize(&w, seed));
        let (v, moved) = (config_verdict(&r).unwrap(), config_verdict(&transform_config(&r, &a)).unwrap());
        prop_assert_eq!(v.status, moved.status);
        prop_assert_eq!(v.mu, moved.mu);
        prop_assert_eq!(v.threshold, moved.threshold);
    }

    #[test]
    fn reconstruct_inverts_psi((g, w) in semistable_profile(), seed in 0u64..1000) {
        let k = realize(&w, seed);
        let r = psi(&k);
        let back = reconstruct(&r, u64::from(2 * g + 2)).unwrap();
        prop_assert_eq!(psi(&back), r);
        prop_assert_eq!(back, k);
    }

    #[test]
    fn maximal_markings_are_the_heaviest((_, w) in profile(), seed in 0u64..1000) {
        prop_assume!(w.len() >= 2);
        let k = realize(&w, seed);
        let heaviest = *w.iter().max().unwrap();
        let mut expected: Vec<ProjectivePoint> = k.markings().iter().filter(|mk| mk.weight == heaviest).map(|mk| mk.point.clone()).collect();
        expected.sort();
        let mut found = find_maximal_markings(&psi(&k), k.total_weight()).unwrap().points;
        found.sort();
        prop_assert_eq!(found, expected);
    }

    #[test]
    fn alpha_recovers_parameters((g, w) in semistable_profile(), ts in prop::collection::btree_set(-15i64..=15, 12), a in invertible()) {
        let ts: Vec<i64> = ts.into_iter().take(w.len()).collect();
        let k = place_markings(&AbstractMarkedConic::smooth(w.clone()).unwrap(), std::slice::from_ref(&ts)).unwrap();
        let moved = MarkedConic::new(
            a.conic(k.conic()).unwrap(),
            k.markings().iter().map(|mk| lineconf::marked_conic::Marking::new(a.point(&mk.point), mk.weight)).collect(),
        )
        .unwrap();
        let r = psi(&moved);
        prop_assume!(config_verdict(&r).unwrap().status.is_semistable());
        let expected = BinaryForm::new(ts.iter().zip(&w).map(|(&t, &wi)| (P1Point::from_int(t), wi))).unwrap();
        prop_assert!(mobius_equivalent(&alpha(&r, g).unwrap(), &expected).unwrap());
    }

    #[test]
    fn mobius_equivalence_is_an_equivalence(
        ts in prop::collection::btree_set(-10i64..=10, 6),
        m1 in [[-3i64..=3, -3i64..=3], [-3i64..=3, -3i64..=3]],
        m2 in [[-3i64..=3, -3i64..=3], [-3i64..=3, -3i64..=3]],
        weights in prop::collection::vec(1u32..=2, 6),
    ) {
        let det = |m: &[[i64; 2]; 2]| m[0][0] * m[1][1] - m[0][1] * m[1][0];
        prop_assume!(det(&m1) != 0 && det(&m2) != 0);
        let apply = |m: &[[i64; 2]; 2], t: &P1Point| {
            let [a, b] = t.coords();
            P1Point::from_integers([a * m[0][0] + b * m[0][1], a * m[1][0] + b * m[1][1]]).unwrap()
        };
        let roots: Vec<P1Point> = ts.iter().map(|&t| P1Point::from_int(t)).collect();
        let form = |pts: Vec<P1Point>| BinaryForm::new(pts.into_iter().zip(weights.iter().copied())).unwrap();
        let b0 = form(roots.clone());
        let b1 = form(roots.iter().map(|t| apply(&m1, t)).collect());
        let b2 = form(roots.iter().map(|t| apply(&m2, &apply(&m1, t))).collect());
        prop_assert!(mobius_equivalent(&b0, &b0).unwrap());
        prop_assert!(mobius_equivalent(&b0, &b1).unwrap() && mobius_equivalent(&b1, &b0).unwrap());
        prop_assert!(mobius_equivalent(&b1, &b2).unwrap() && mobius_equivalent(&b0, &b2).unwrap());
        let mut shifted = roots.clone();
        shifted[5] = P1Point::from_int(ts.iter().max().unwrap() + 7);
        let other = form(shifted);
        prop_assert_eq!(mobius_equivalent(&b0, &other).unwrap(), mobius_equivalent(&other, &b0).unwrap());
    }
}

#[test]
fn tree_budgets_and_weights() {
    for m in [4u32, 6, 8] {
        for t in enumerate_stable_trees(m, 4) {
            assert_eq!(dualizing_dual_degrees(&t).values().sum::<i64>(), 2);
            for (part, _) in candidate_parts(&t) {
                assert_eq!(contract_to_conic(&t, part).unwrap().abstract_conic.total_weight(), u64::from(m));
            }
            for leg in 1..=m {
                assert!(check_stable_tree(&forget_leg(&t, leg).unwrap()).unwrap());
            }
        }
    }
}
