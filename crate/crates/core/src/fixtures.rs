//! Reference sets and models shared by tests and benchmarks.

use num_traits::One;

use crate::num::{int, rat, ComplexRational, Rational};
use crate::opmodel::{OperatorModel, SpectralProfile};
use crate::ordinal::Ordinal;
use crate::specset::{Direction, SpecSet};

fn z(re: i64, im: i64) -> ComplexRational {
    ComplexRational::from_ints(re, im)
}

fn omega_times(n: u64) -> Ordinal {
    Ordinal::monomial(Ordinal::one(), n)
}

/// Tower anchored at `anchor` pointing east with scale 1.
pub fn tower_at(anchor: ComplexRational, rank: Ordinal) -> SpecSet {
    SpecSet::tower(anchor, rank, Rational::one(), Direction::east()).expect("positive scale")
}

pub fn tower(rank: Ordinal) -> SpecSet {
    tower_at(ComplexRational::zero(), rank)
}

fn shaped(s: Result<SpecSet, crate::specset::SpecSetError>) -> SpecSet {
    s.expect("valid shape")
}

/// Tower ranks covered by the suites.
pub fn tower_ranks() -> Vec<Ordinal> {
    vec![
        Ordinal::finite(1),
        Ordinal::finite(2),
        Ordinal::finite(3),
        Ordinal::omega(),
        Ordinal::omega().successor(),
        omega_times(2),
        Ordinal::omega_pow(Ordinal::finite(2)),
    ]
}

/// Named sets: finite sets, towers of every suite rank, unions with
/// perfect shapes, and translated, scaled and rotated variants.
pub fn set_suite() -> Vec<(&'static str, SpecSet)> {
    let names = ["tower_1", "tower_2", "tower_3", "tower_w", "tower_w+1", "tower_w*2", "tower_w^2"];
    let mut out: Vec<(&'static str, SpecSet)> = vec![
        ("finite_three", SpecSet::finite([ComplexRational::real(rat(1, 2)), ComplexRational::new(rat(3, 4), rat(1, 5)), z(1, 0)])),
        ("finite_with_zero", SpecSet::finite([z(0, 0), z(1, 0), z(2, 0)])),
    ];
    out.extend(names.into_iter().zip(tower_ranks().into_iter().map(tower)));
    out.extend([
        ("disk_and_tower", shaped(SpecSet::disk(z(2, 0), int(1))).union(&tower(Ordinal::finite(2)))),
        ("circle_and_tower", shaped(SpecSet::circle(z(0, 0), int(3))).union(&tower(Ordinal::finite(2)))),
        ("segment_and_tower", SpecSet::segment(z(-2, -1), z(-2, 1)).union(&tower(Ordinal::one()))),
        ("shifted_tower_3", tower(Ordinal::finite(3)).translate(&z(1, 1))),
        ("scaled_tower_w", tower(Ordinal::omega()).scale(&rat(1, 2))),
        ("reflected_tower_2", tower(Ordinal::finite(2)).scale(&int(-2))),
        (
            "north_tower_2",
            SpecSet::tower(z(0, 1), Ordinal::finite(2), rat(1, 2), Direction::from_degrees(&int(90))).expect("positive scale"),
        ),
        (
            "two_towers",
            SpecSet::tower(z(0, 0), Ordinal::one(), rat(1, 4), Direction::east())
                .expect("positive scale")
                .union(&SpecSet::tower(z(1, 0), Ordinal::finite(2), rat(1, 4), Direction::east()).expect("positive scale")),
        ),
        ("tower_w+1_and_point", tower(Ordinal::omega().successor()).union(&SpecSet::point(z(5, 0)))),
        ("disk_and_far_tower", shaped(SpecSet::disk(z(0, 0), int(1))).union(&tower_at(z(2, 0), Ordinal::one()))),
        (
            "circle_and_small_tower_w",
            shaped(SpecSet::circle(z(0, 0), int(1))).union(&SpecSet::tower(z(0, 0), Ordinal::omega(), rat(1, 2), Direction::east()).expect("positive scale")),
        ),
        (
            "diagonal_tower_w*2",
            SpecSet::tower(z(0, 0), omega_times(2), rat(1, 3), Direction::from_degrees(&int(45))).expect("positive scale"),
        ),
        ("derived_tower_3", tower(Ordinal::finite(3)).acc()),
    ]);
    out
}

fn diag(s: SpecSet) -> OperatorModel {
    OperatorModel::diagonal(s).expect("countable")
}

fn explicit(sigma: SpecSet, e: Option<SpecSet>) -> OperatorModel {
    OperatorModel::explicit(SpectralProfile::explicit(sigma, e, None, None)).expect("valid profile")
}

/// Named valid operator models.
pub fn model_suite() -> Vec<(&'static str, OperatorModel)> {
    let disk2 = shaped(SpecSet::disk(z(2, 0), int(1)));
    let t2 = tower(Ordinal::finite(2));
    let leaf = ComplexRational::real(rat(5, 8));
    vec![
        ("diag_tower_1", diag(tower(Ordinal::one()))),
        ("diag_tower_2", diag(t2.clone())),
        ("diag_tower_3", diag(tower(Ordinal::finite(3)))),
        ("diag_tower_w", diag(tower(Ordinal::omega()))),
        ("diag_tower_w+1", diag(tower(Ordinal::omega().successor()))),
        ("diag_tower_w^2", diag(tower(Ordinal::omega_pow(Ordinal::finite(2))))),
        ("diag_finite", diag(SpecSet::finite([z(1, 0), z(2, 0)]))),
        ("qnil", OperatorModel::Quasinilpotent),
        ("invertible_finite", OperatorModel::invertible(SpecSet::finite([z(2, 0), z(3, 0)])).expect("valid")),
        ("invertible_circle", OperatorModel::invertible(shaped(SpecSet::circle(z(0, 0), int(2)))).expect("valid")),
        (
            "invertible_plus_qnil",
            OperatorModel::direct_sum(vec![
                OperatorModel::invertible(SpecSet::point(z(5, 0))).expect("valid"),
                OperatorModel::Quasinilpotent,
            ])
            .expect("valid"),
        ),
        ("explicit_disk_tower", explicit(disk2.union(&t2), Some(disk2.union(&t2.acc())))),
        ("explicit_disk_at_zero", explicit(shaped(SpecSet::disk(z(0, 0), int(1))), None)),
        ("shifted_leaf", diag(tower(Ordinal::one())).shifted(leaf)),
        ("dual_tower_w", diag(tower(Ordinal::omega())).dual()),
        (
            "tower_plus_disk",
            OperatorModel::direct_sum(vec![diag(tower(Ordinal::one())), explicit(shaped(SpecSet::disk(z(3, 0), int(1))), None)]).expect("valid"),
        ),
        (
            "tower_w+1_plus_invertible",
            OperatorModel::direct_sum(vec![
                diag(tower(Ordinal::omega().successor())),
                OperatorModel::invertible(SpecSet::point(z(-2, 0))).expect("valid"),
            ])
            .expect("valid"),
        ),
    ]
}

/// Models with 0 an accumulation point of the spectrum, with an order at
/// which they are g-invertible.
pub fn chain_models() -> Vec<(&'static str, OperatorModel, Ordinal)> {
    vec![
        ("diag_tower_1", diag(tower(Ordinal::one())), Ordinal::finite(2)),
        ("diag_tower_2", diag(tower(Ordinal::finite(2))), Ordinal::finite(3)),
        ("diag_tower_w", diag(tower(Ordinal::omega())), Ordinal::omega().successor()),
        (
            "tower_plus_disk",
            OperatorModel::direct_sum(vec![diag(tower(Ordinal::one())), explicit(shaped(SpecSet::disk(z(3, 0), int(1))), None)]).expect("valid"),
            Ordinal::finite(2),
        ),
    ]
}
