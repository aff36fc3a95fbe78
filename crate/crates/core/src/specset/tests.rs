use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::num::{int, rat};

fn z(re: Rational) -> ComplexRational {
    ComplexRational::real(re)
}

fn origin() -> ComplexRational {
    ComplexRational::zero()
}

fn tower_at(anchor: ComplexRational, rank: Ordinal, scale: Rational) -> SpecSet {
    SpecSet::tower(anchor, rank, scale, Direction::east()).unwrap()
}

fn tower(rank: Ordinal) -> SpecSet {
    tower_at(origin(), rank, Rational::one())
}

fn fin(n: u64) -> Ordinal {
    Ordinal::finite(n)
}

fn w() -> Ordinal {
    Ordinal::omega()
}

fn iterate_acc(s: &SpecSet, n: u64) -> SpecSet {
    (0..n).fold(s.clone(), |acc, _| acc.acc())
}

/// Independent placement of a finite-rank tower truncated to slots below
/// `slots`, with each point's isolation radius (`None` for the anchor).
fn brute_tower(anchor: Rational, scale: Rational, rank: u64, slots: u64, out: &mut Vec<(Rational, Option<Rational>)>, radius: Option<Rational>) {
    out.push((anchor.clone(), radius));
    if rank == 0 {
        return;
    }
    for k in 1..slots {
        let kk = int(k as i64);
        let width = &scale / (&kk * (&kk + int(1)));
        let offset = &scale / (&kk + int(1)) + &width / int(4);
        brute_tower(&anchor + offset, &width / int(2), rank - 1, slots, out, Some(&width / int(8)));
    }
}

/// Brute-force derived sets on a truncated point cloud: a point survives a
/// stage when another surviving point lies within its isolation radius.
fn brute_stages(points: &[(Rational, Option<Rational>)], stages: usize) -> Vec<Vec<Rational>> {
    let mut current: Vec<(Rational, Option<Rational>)> = points.to_vec();
    let mut out = vec![current.iter().map(|p| p.0.clone()).collect()];
    for _ in 0..stages {
        let next: Vec<_> = current
            .iter()
            .filter(|(q, r)| {
                current.iter().any(|(p, _)| {
                    p != q && r.as_ref().is_none_or(|r| (p - q).abs() < *r)
                })
            })
            .cloned()
            .collect();
        out.push(next.iter().map(|p| p.0.clone()).collect());
        current = next;
    }
    out
}

#[test]
fn acc_examples() {
    assert_eq!(tower(fin(1)).acc(), SpecSet::point(origin()));
    let disk = SpecSet::disk(z(int(2)), int(1)).unwrap();
    assert_eq!(disk.acc(), disk);
    assert_eq!(tower(fin(3)).acc(), tower(fin(2)));
}

#[test]
fn acc_of_rank_three_matches_brute_force() {
    let mut pts = Vec::new();
    brute_tower(Rational::zero(), Rational::one(), 3, 7, &mut pts, None);
    let stages = brute_stages(&pts, 3);
    let s = tower(fin(3));
    for (j, stage) in stages.iter().enumerate() {
        let derived = iterate_acc(&s, j as u64);
        // Points in slots near the truncation edge lose their neighbours, so
        // brute force can only under-approximate.
        assert!(stage.iter().all(|q| derived.member(&z(q.clone()))), "stage {j}");
    }
    assert_eq!(stages[3], vec![Rational::zero()]);
    assert!(stages[1].contains(&rat(5, 8)));
}

#[test]
fn acc_alpha_examples() {
    let s = tower(fin(2));
    assert_eq!(s.acc_alpha(&Ordinal::zero()), s);
    let f = SpecSet::finite([z(int(1)), z(int(2))]);
    assert!(f.acc_alpha(&Ordinal::one()).is_empty());
    let t = tower(w());
    assert_eq!(t.acc_alpha(&w()), SpecSet::point(origin()));
}

#[test]
fn limit_stage_kills_every_child() {
    // Child k of the rank-w tower has rank k; its anchor survives exactly
    // k derivation stages.
    let t = tower(w());
    let c = Rational::one();
    for k in 1..=6u64 {
        let anchor = z(tower::child_offset(&c, k));
        for n in 1..=6u64 {
            let derived = iterate_acc(&t, n);
            assert_eq!(derived.member(&anchor), n <= k, "child {k} stage {n}");
        }
        assert!(!t.acc_alpha(&w()).member(&anchor));
    }
}

#[test]
fn cbr_examples() {
    assert_eq!(SpecSet::finite([z(int(1)), z(int(2)), z(int(3))]).cbr(), fin(1));
    let t = tower(fin(2));
    assert_eq!(t.cbr(), fin(3));
    assert!(iterate_acc(&t, 3).is_empty());
    assert!(!iterate_acc(&t, 2).is_empty());
    assert_eq!(SpecSet::disk(origin(), int(1)).unwrap().cbr(), Ordinal::zero());
    assert_eq!(SpecSet::empty().cbr(), Ordinal::zero());
}

#[test]
fn tower_ranks() {
    for a in [fin(1), fin(2), fin(3), w(), w().successor(), Ordinal::omega_pow(fin(2))] {
        let t = tower(a.clone());
        assert_eq!(t.cbr(), a.successor(), "{a}");
        assert_eq!(t.cbr_at(&origin()), PointRank::Finite(a.clone()));
    }
}

#[test]
fn cbr_at_examples() {
    assert_eq!(tower(fin(2)).cbr_at(&origin()), PointRank::Finite(fin(2)));
    assert!(iterate_acc(&tower(fin(2)), 2).member(&origin()));
    assert!(!iterate_acc(&tower(fin(2)), 3).member(&origin()));
    let disk = SpecSet::disk(origin(), int(1)).unwrap();
    assert_eq!(disk.cbr_at(&z(rat(1, 2))), PointRank::Infinite);
    assert_eq!(SpecSet::point(z(int(1))).cbr_at(&z(int(2))), PointRank::Absent);
}

#[test]
fn iso_examples() {
    let f = SpecSet::finite([z(int(1)), z(int(2))]);
    assert_eq!(f.iso_enumerate(5), vec![z(int(1)), z(int(2))]);
    assert!(SpecSet::disk(origin(), int(1)).unwrap().iso_enumerate(5).is_empty());
    let t = tower(fin(1));
    let iso = t.iso_enumerate(3);
    let c = Rational::one();
    let expected: Vec<_> = (1..=3).map(|k| z(tower::child_offset(&c, k))).collect();
    assert_eq!(iso, expected);
    for (k, q) in iso.iter().enumerate() {
        let k = k as u64 + 1;
        // Leaf k is at distance at least w_k/4 from every other point.
        let r = tower::slot_width(&c, k) / int(4);
        for p in t.enumerate(400) {
            if p != *q {
                assert!((&p - q).norm_sqr() >= &r * &r);
            }
        }
    }
}

#[test]
fn member_examples() {
    assert!(SpecSet::disk(origin(), int(1)).unwrap().member(&z(rat(1, 2))));
    assert!(tower(fin(1)).member(&origin()));
    assert!(!SpecSet::point(z(int(3))).member(&z(int(2))));
}

#[test]
fn perfect_kernel_examples() {
    assert!(tower(w()).perfect_kernel().is_empty());
    let disk = SpecSet::disk(z(int(2)), int(1)).unwrap();
    assert_eq!(disk.union(&SpecSet::point(origin())).perfect_kernel(), disk);
    let circle = SpecSet::circle(origin(), int(3)).unwrap();
    let s = circle.union(&tower(fin(2)));
    assert_eq!(s.perfect_kernel(), circle);
    assert_eq!(s.acc_alpha(&fin(3)), circle);
}

#[test]
fn avoiding_radius_examples() {
    let r = SpecSet::point(z(int(1))).find_avoiding_radius(&rat(1, 4), &rat(1, 2)).unwrap();
    assert!(r >= rat(1, 4) && r <= rat(1, 2));
    assert_eq!(
        SpecSet::disk(origin(), int(1)).unwrap().find_avoiding_radius(&rat(1, 4), &rat(1, 2)),
        None
    );
    let t = tower(fin(1));
    let r = t.find_avoiding_radius(&rat(1, 3), &rat(1, 2)).unwrap();
    assert!(r >= rat(1, 3) && r <= rat(1, 2));
    let mut pts = Vec::new();
    brute_tower(Rational::zero(), Rational::one(), 1, 100, &mut pts, None);
    assert!(pts.iter().all(|(p, _)| p.clone() != r));
}

#[test]
fn split_examples() {
    let f = SpecSet::finite([z(rat(1, 4)), z(int(2))]);
    let (i, o) = f.split_by_disk(&int(1)).unwrap();
    assert_eq!(i, SpecSet::point(z(rat(1, 4))));
    assert_eq!(o, SpecSet::point(z(int(2))));
    let t = tower_at(origin(), fin(2), rat(1, 8));
    let d = SpecSet::disk(z(int(3)), int(1)).unwrap();
    let (i, o) = t.union(&d).split_by_disk(&rat(1, 2)).unwrap();
    assert_eq!(i, t);
    assert_eq!(o, d);
    let (i, o) = SpecSet::empty().split_by_disk(&int(1)).unwrap();
    assert!(i.is_empty() && o.is_empty());
    assert!(tower(fin(1)).split_by_disk(&rat(5, 8)).is_err());
}

#[test]
fn split_through_tower_partitions_points() {
    let t = tower(fin(2));
    let r = t.find_avoiding_radius(&rat(1, 5), &rat(1, 2)).unwrap();
    let (i, o) = t.split_by_disk(&r).unwrap();
    let r2 = &r * &r;
    for p in t.enumerate(300) {
        let inside = p.norm_sqr() < r2;
        assert_eq!(i.member(&p), inside, "{p}");
        assert_eq!(o.member(&p), !inside, "{p}");
    }
    assert!(i.union(&o).equal(&t));
}

#[test]
fn plumbing_examples() {
    assert_eq!(SpecSet::point(z(int(1))).translate(&z(int(-1))), SpecSet::point(origin()));
    assert!(tower(fin(1)).acc().equal(&SpecSet::point(origin())));
    assert!(tower(fin(2)).acc_alpha(&fin(2)).subset_of_zero());
    assert!(SpecSet::empty().subset_of_zero());
}

#[test]
fn display_forms() {
    let s = tower(w().successor()).union(&SpecSet::disk(z(int(2)), int(1)).unwrap());
    assert_eq!(s.to_string(), "union(tower(rank=w+1, anchor=0, scale=1, dir=0), disk(2, 1))");
    assert_eq!(tower(w()).acc().to_string(), "tower(rank=w, anchor=0, scale=1, dir=0, stage=1)");
    let f = SpecSet::finite([z(int(1)), z(rat(1, 2)), ComplexRational::new(rat(3, 4), rat(1, 5))]);
    assert_eq!(f.to_string(), "finite{1/2, 3/4+1/5i, 1}");
}

#[test]
fn tower_inside_disk_is_absorbed() {
    let t = tower_at(origin(), fin(2), rat(1, 4));
    let d = SpecSet::disk(origin(), int(1)).unwrap();
    assert_eq!(t.union(&d), d);
    // Anchor on the boundary with the tail pointing out keeps the tower.
    let t = tower_at(z(int(1)), fin(2), rat(1, 4));
    let s = t.union(&d);
    assert_eq!(s.blocks().len(), 2);
    assert_eq!(s.cbr(), fin(2));
    assert_eq!(s.acc_alpha(&s.cbr()), d);
}

#[test]
fn descriptors() {
    let derived = tower(w()).acc();
    let Block::Tower(t) = &derived.blocks()[0] else { panic!() };
    assert_eq!(t.descriptor(), RankDescriptor::FundSeq { alpha: w(), offset: fin(1) });
    let plain = tower(fin(3));
    let Block::Tower(t) = &plain.blocks()[0] else { panic!() };
    assert_eq!(t.descriptor(), RankDescriptor::Const(fin(2)));
}

fn arb_ordinal() -> impl Strategy<Value = Ordinal> {
    prop_oneof![
        Just(fin(1)),
        Just(fin(2)),
        Just(fin(3)),
        Just(w()),
        Just(w().successor()),
        Just(Ordinal::monomial(fin(1), 2)),
        Just(Ordinal::omega_pow(fin(2))),
    ]
}

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-8i64..=8, prop_oneof![Just(1i64), Just(2), Just(4)]).prop_map(|(n, d)| rat(n, d))
}

fn arb_point() -> impl Strategy<Value = ComplexRational> {
    (arb_rational(), arb_rational()).prop_map(|(a, b)| ComplexRational::new(a, b))
}

fn arb_block() -> impl Strategy<Value = SpecSet> {
    let dir = prop_oneof![Just(0i64), Just(90), Just(180), Just(45)];
    let scale = prop_oneof![Just(rat(1, 8)), Just(rat(1, 2)), Just(int(1))];
    prop_oneof![
        proptest::collection::vec(arb_point(), 1..4).prop_map(SpecSet::finite),
        (arb_point(), arb_ordinal(), scale, dir).prop_map(|(a, r, s, d)| {
            SpecSet::tower(a, r, s, Direction::from_degrees(&int(d))).unwrap()
        }),
        (arb_point(), 1i64..3).prop_map(|(c, r)| SpecSet::disk(c, rat(r, 2)).unwrap()),
        (arb_point(), 1i64..3).prop_map(|(c, r)| SpecSet::circle(c, int(r)).unwrap()),
        (arb_point(), arb_point()).prop_map(|(a, b)| SpecSet::segment(a, b)),
    ]
}

fn arb_set() -> impl Strategy<Value = SpecSet> {
    proptest::collection::vec(arb_block(), 1..4).prop_map(|bs| SpecSet::union_all(&bs))
}

fn arb_stage() -> impl Strategy<Value = Ordinal> {
    prop_oneof![Just(fin(0)), Just(fin(1)), Just(fin(2)), Just(fin(3)), Just(w()), Just(w().successor())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn acc_is_additive(a in arb_set(), b in arb_set()) {
        prop_assert_eq!(a.union(&b).acc(), a.acc().union(&b.acc()));
    }

    #[test]
    fn finite_stages_agree_with_iteration(s in arb_set(), n in 0u64..5) {
        prop_assert_eq!(s.acc_alpha(&fin(n)), iterate_acc(&s, n));
    }

    #[test]
    fn derived_sets_decrease(s in arb_set(), a in arb_stage(), b in arb_stage()) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let big = s.acc_alpha(&lo);
        let small = s.acc_alpha(&hi);
        for q in small.enumerate(100) {
            prop_assert!(big.member(&q));
        }
    }

    #[test]
    fn rank_is_the_first_fixed_point(s in arb_set()) {
        let r = s.cbr();
        prop_assert_eq!(s.acc_alpha(&r), s.acc_alpha(&r.successor()));
        prop_assert_eq!(s.acc_alpha(&r), s.perfect_kernel());
        if let Some(n) = r.as_finite() {
            for m in 0..n {
                prop_assert_ne!(s.acc_alpha(&fin(m)), s.acc_alpha(&fin(m + 1)));
            }
        }
        let k = s.perfect_kernel();
        prop_assert_eq!(k.acc(), k);
    }

    #[test]
    fn translation_commutes(s in arb_set(), zz in arb_point(), a in arb_stage()) {
        prop_assert_eq!(s.translate(&zz).acc_alpha(&a), s.acc_alpha(&a).translate(&zz));
    }

    #[test]
    fn partition_identity(s in arb_set()) {
        let stages: Vec<Ordinal> = (0..4).map(fin).collect();
        let derived: Vec<SpecSet> = stages.iter().map(|g| s.acc_alpha(g)).collect();
        let at_w = s.acc_alpha(&w());
        for q in s.enumerate(150) {
            for alpha in 1..=3usize {
                let top = derived[alpha].member(&q) as usize;
                let iso = (0..alpha)
                    .filter(|&g| derived[g].cbr_at(&q) == PointRank::Finite(Ordinal::zero()))
                    .count();
                prop_assert_eq!(top + iso, 1, "{} alpha={}", q, alpha);
            }
            let in_w = at_w.member(&q);
            match s.cbr_at(&q) {
                PointRank::Finite(r) => match r.as_finite() {
                    Some(n) => {
                        prop_assert!(!in_w);
                        let d = s.acc_alpha(&fin(n));
                        prop_assert_eq!(d.cbr_at(&q), PointRank::Finite(Ordinal::zero()));
                    }
                    None => prop_assert!(in_w),
                },
                PointRank::Infinite => prop_assert!(in_w),
                PointRank::Absent => prop_assert!(false, "enumerated point absent"),
            }
        }
    }

    #[test]
    fn limit_stage_is_an_intersection(s in arb_set()) {
        for lam in [w(), Ordinal::monomial(fin(1), 2)] {
            let at_limit = s.acc_alpha(&lam);
            let approximants: Vec<SpecSet> =
                (1..=6).map(|k| s.acc_alpha(&lam.fundamental_sequence(k).unwrap())).collect();
            for q in s.enumerate(120) {
                if at_limit.member(&q) {
                    prop_assert!(approximants.iter().all(|a| a.member(&q)));
                } else {
                    let PointRank::Finite(r) = s.cbr_at(&q) else {
                        return Err(TestCaseError::fail("non-member of limit stage has no rank"));
                    };
                    prop_assert!(r < lam);
                    prop_assert!(!s.acc_alpha(&r.successor()).member(&q));
                }
            }
        }
    }

    #[test]
    fn split_is_a_clopen_partition(s in arb_set(), mu in 1i64..8) {
        let lo = rat(mu, 4);
        if let Some(r) = s.find_avoiding_radius(&lo, &(&lo + rat(1, 2))) {
            prop_assert!(!s.circle_meets(&r));
            let (i, o) = s.split_by_disk(&r).unwrap();
            let r2 = &r * &r;
            for q in s.enumerate(120) {
                let inside = q.norm_sqr() < r2;
                prop_assert_eq!(i.member(&q), inside);
                prop_assert_eq!(o.member(&q), !inside);
            }
            for q in i.enumerate(60) {
                prop_assert!(q.norm_sqr() < r2 && s.member(&q));
            }
            for q in o.enumerate(60) {
                prop_assert!(q.norm_sqr() > r2 && s.member(&q));
            }
        }
    }

    #[test]
    fn enumerated_points_are_members(s in arb_set()) {
        for q in s.enumerate(200) {
            prop_assert!(s.member(&q));
        }
        for q in s.iso_enumerate(10) {
            prop_assert_eq!(s.cbr_at(&q), PointRank::Finite(Ordinal::zero()));
        }
    }
}
