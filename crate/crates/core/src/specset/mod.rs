//! Compact subsets of the plane built from finite, tower and perfect blocks.

mod geometry;
mod radius;
mod tower;

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

pub use geometry::{on_segment, segment_max_norm_sqr, segment_min_norm_sqr, Direction, Shape};
pub use radius::GapRule;
pub use tower::Tower;

use crate::num::{fmt_rational, sqrt_bounds, ComplexRational, Rational};
use crate::ordinal::Ordinal;
use tower::Reduced;

/// Default depth for sampled set comparisons.
pub const DEFAULT_EQUAL_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecSetError {
    #[error("scale must be positive, got {0}")]
    NonPositiveScale(String),
    #[error("radius must be nonnegative, got {0}")]
    NegativeRadius(String),
    #[error("circle of radius {0} meets the set")]
    CircleMeetsSet(String),
    #[error("direction is not a unit vector: {0}")]
    NotUnit(String),
}

/// Rank of the `k`-th child of a tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankDescriptor {
    Const(Ordinal),
    FundSeq { alpha: Ordinal, offset: Ordinal },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    Finite(BTreeSet<ComplexRational>),
    Tower(Tower),
    Perfect(Shape),
}

/// Cantor–Bendixson rank of a point of a set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointRank {
    Absent,
    Finite(Ordinal),
    Infinite,
}

impl fmt::Display for PointRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointRank::Absent => f.write_str("absent"),
            PointRank::Finite(a) => write!(f, "{a}"),
            PointRank::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SpecSet {
    blocks: Vec<Block>,
}

impl Tower {
    pub fn from_slot(mut self, k: u64) -> Self {
        self.first_slot = k.max(1);
        self
    }

    pub fn at_stage(mut self, stage: Ordinal) -> Self {
        self.stage = stage;
        self
    }

    pub fn descriptor(&self) -> RankDescriptor {
        if self.rank.is_limit() {
            RankDescriptor::FundSeq {
                alpha: self.rank.clone(),
                offset: self.stage.clone(),
            }
        } else {
            let child = self.rank.predecessor().unwrap_or_default();
            RankDescriptor::Const(child.left_subtract(&self.stage).unwrap_or_default())
        }
    }
}

impl SpecSet {
    pub fn empty() -> Self {
        SpecSet::default()
    }

    pub fn point(z: ComplexRational) -> Self {
        SpecSet::finite([z])
    }

    pub fn finite<I: IntoIterator<Item = ComplexRational>>(points: I) -> Self {
        SpecSet::from_blocks(vec![Block::Finite(points.into_iter().collect())])
    }

    /// Canonical tower whose anchor has rank `rank`; rank 0 is the anchor alone.
    pub fn tower(anchor: ComplexRational, rank: Ordinal, scale: Rational, dir: Direction) -> Result<Self, SpecSetError> {
        SpecSet::from_tower(Tower::new(anchor, dir, scale, rank))
    }

    pub fn from_tower(t: Tower) -> Result<Self, SpecSetError> {
        if !t.scale.is_positive() {
            return Err(SpecSetError::NonPositiveScale(fmt_rational(&t.scale)));
        }
        Ok(SpecSet::from_blocks(vec![Block::Tower(t)]))
    }

    pub fn segment(a: ComplexRational, b: ComplexRational) -> Self {
        SpecSet::from_blocks(vec![Block::Perfect(Shape::Segment(a, b))])
    }

    pub fn circle(c: ComplexRational, r: Rational) -> Result<Self, SpecSetError> {
        if r.is_negative() {
            return Err(SpecSetError::NegativeRadius(fmt_rational(&r)));
        }
        Ok(SpecSet::from_blocks(vec![Block::Perfect(Shape::Circle(c, r))]))
    }

    pub fn disk(c: ComplexRational, r: Rational) -> Result<Self, SpecSetError> {
        if r.is_negative() {
            return Err(SpecSetError::NegativeRadius(fmt_rational(&r)));
        }
        Ok(SpecSet::from_blocks(vec![Block::Perfect(Shape::Disk(c, r))]))
    }

    pub fn from_blocks(blocks: Vec<Block>) -> Self {
        SpecSet {
            blocks: normalize(blocks),
        }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn union(&self, other: &SpecSet) -> SpecSet {
        SpecSet::from_blocks(self.blocks.iter().chain(&other.blocks).cloned().collect())
    }

    pub fn union_all<'a, I: IntoIterator<Item = &'a SpecSet>>(sets: I) -> SpecSet {
        SpecSet::from_blocks(sets.into_iter().flat_map(|s| s.blocks.iter().cloned()).collect())
    }

    pub fn translate(&self, z: &ComplexRational) -> SpecSet {
        let blocks = self
            .blocks
            .iter()
            .map(|b| match b {
                Block::Finite(ps) => Block::Finite(ps.iter().map(|p| p + z).collect()),
                Block::Tower(t) => Block::Tower(t.translate(z)),
                Block::Perfect(s) => Block::Perfect(s.translate(z)),
            })
            .collect();
        SpecSet::from_blocks(blocks)
    }

    /// Image under `z -> s z` for real `s`.
    pub fn scale(&self, s: &Rational) -> SpecSet {
        if s.is_zero() {
            return if self.is_empty() {
                SpecSet::empty()
            } else {
                SpecSet::point(ComplexRational::zero())
            };
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| match b {
                Block::Finite(ps) => Block::Finite(ps.iter().map(|p| p.scale(s)).collect()),
                Block::Tower(t) => Block::Tower(t.scaled(s)),
                Block::Perfect(sh) => Block::Perfect(sh.scale(s)),
            })
            .collect();
        SpecSet::from_blocks(blocks)
    }

    /// Derived set.
    pub fn acc(&self) -> SpecSet {
        self.acc_alpha(&Ordinal::one())
    }

    /// Transfinite derived set of order `alpha`.
    pub fn acc_alpha(&self, alpha: &Ordinal) -> SpecSet {
        if alpha.is_zero() {
            return self.clone();
        }
        let blocks = self
            .blocks
            .iter()
            .filter_map(|b| match b {
                Block::Finite(_) => None,
                Block::Tower(t) => Some(Block::Tower(t.clone().at_stage(t.stage.add(alpha)))),
                Block::Perfect(s) => Some(Block::Perfect(s.clone())),
            })
            .collect();
        SpecSet::from_blocks(blocks)
    }

    pub fn member(&self, q: &ComplexRational) -> bool {
        self.blocks.iter().any(|b| block_contains(b, q))
    }

    pub(crate) fn shapes(&self) -> Vec<&Shape> {
        self.blocks
            .iter()
            .filter_map(|b| match b {
                Block::Perfect(s) => Some(s),
                _ => None,
            })
            .collect()
    }

    pub(crate) fn towers(&self) -> impl Iterator<Item = &Tower> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Tower(t) => Some(t),
            _ => None,
        })
    }

    pub(crate) fn finite_points(&self) -> impl Iterator<Item = &ComplexRational> {
        self.blocks.iter().flat_map(|b| match b {
            Block::Finite(ps) => Some(ps.iter()),
            _ => None,
        }).flatten()
    }

    /// Cantor–Bendixson rank: the first stage at which derivation stabilizes.
    pub fn cbr(&self) -> Ordinal {
        let kernel = self.shapes();
        let mut best = if self.finite_points().next().is_some() {
            Ordinal::one()
        } else {
            Ordinal::zero()
        };
        for t in self.towers() {
            let r = t.rank_outside(&kernel);
            if r > best {
                best = r;
            }
        }
        best
    }

    pub fn cbr_at(&self, q: &ComplexRational) -> PointRank {
        if self.shapes().iter().any(|s| s.contains(q)) {
            return PointRank::Infinite;
        }
        let mut best: Option<Ordinal> = None;
        let mut raise = |r: Ordinal| {
            if best.as_ref().is_none_or(|b| r > *b) {
                best = Some(r);
            }
        };
        for b in &self.blocks {
            match b {
                Block::Finite(ps) if ps.contains(q) => raise(Ordinal::zero()),
                Block::Tower(t) => {
                    if let Some((r, _)) = t.locate(q) {
                        raise(r.left_subtract(&t.stage).unwrap_or_default());
                    }
                }
                _ => {}
            }
        }
        best.map_or(PointRank::Absent, PointRank::Finite)
    }

    pub fn perfect_kernel(&self) -> SpecSet {
        SpecSet::from_blocks(
            self.blocks
                .iter()
                .filter(|b| matches!(b, Block::Perfect(_)))
                .cloned()
                .collect(),
        )
    }

    pub fn is_countable(&self) -> bool {
        self.shapes().is_empty()
    }

    /// Whether the set is contained in `{0}`.
    pub fn subset_of_zero(&self) -> bool {
        self.blocks.iter().all(|b| match b {
            Block::Finite(ps) => ps.iter().all(ComplexRational::is_zero),
            _ => false,
        })
    }

    /// Whether the circle `|z| = r` meets the set.
    pub fn circle_meets(&self, r: &Rational) -> bool {
        let r2 = r * r;
        self.blocks.iter().any(|b| match b {
            Block::Finite(ps) => ps.iter().any(|p| p.norm_sqr() == r2),
            Block::Tower(t) => t.meets_circle(r),
            Block::Perfect(s) => s.meets_circle(r),
        })
    }

    /// Rational upper bound on `|z|` over the set; 0 for the empty set.
    pub fn modulus_upper(&self) -> Rational {
        let mut best = Rational::zero();
        for b in &self.blocks {
            let m = match b {
                Block::Finite(ps) => ps
                    .iter()
                    .map(|p| sqrt_bounds(&p.norm_sqr(), 32).1)
                    .max()
                    .unwrap_or_else(Rational::zero),
                Block::Tower(t) => {
                    let (a, far) = t.hull();
                    sqrt_bounds(&geometry::segment_max_norm_sqr(&a, &far), 32).1
                }
                Block::Perfect(s) => s.modulus_upper(),
            };
            if m > best {
                best = m;
            }
        }
        best
    }

    /// Splits along the circle `|z| = r` into the parts inside and outside.
    pub fn split_by_disk(&self, r: &Rational) -> Result<(SpecSet, SpecSet), SpecSetError> {
        if !r.is_positive() || self.circle_meets(r) {
            return Err(SpecSetError::CircleMeetsSet(fmt_rational(r)));
        }
        let r2 = r * r;
        let mut inside: Vec<Block> = Vec::new();
        let mut outside: Vec<Block> = Vec::new();
        let (mut tin, mut tout, mut pin, mut pout) = (vec![], vec![], vec![], vec![]);
        for b in &self.blocks {
            match b {
                Block::Finite(ps) => {
                    for p in ps {
                        if p.norm_sqr() < r2 {
                            pin.push(p.clone());
                        } else {
                            pout.push(p.clone());
                        }
                    }
                }
                Block::Tower(t) => t.split(&r2, &mut tin, &mut tout, &mut pin, &mut pout),
                Block::Perfect(s) => {
                    if s.sample_point().norm_sqr() < r2 {
                        inside.push(b.clone());
                    } else {
                        outside.push(b.clone());
                    }
                }
            }
        }
        inside.extend(tin.into_iter().map(Block::Tower));
        inside.push(Block::Finite(pin.into_iter().collect()));
        outside.extend(tout.into_iter().map(Block::Tower));
        outside.push(Block::Finite(pout.into_iter().collect()));
        Ok((SpecSet::from_blocks(inside), SpecSet::from_blocks(outside)))
    }

    /// The first `n` distinct points of the canonical enumeration.
    pub fn enumerate(&self, n: usize) -> Vec<ComplexRational> {
        self.tagged_points().take(n).map(|t| t.point).collect()
    }

    /// The first `n` isolated points of the canonical enumeration.
    pub fn iso_enumerate(&self, n: usize) -> Vec<ComplexRational> {
        let budget = 1000usize.max(50 * n);
        self.tagged_points()
            .take(budget)
            .filter(|t| !t.perfect && t.relative_rank_zero)
            .filter(|t| self.cbr_at(&t.point) == PointRank::Finite(Ordinal::zero()))
            .map(|t| t.point)
            .take(n)
            .collect()
    }

    /// Enumeration round-robin over blocks, without repetitions.
    pub(crate) fn tagged_points(&self) -> TaggedPoints<'_> {
        let sources = self
            .blocks
            .iter()
            .map(|b| -> Box<dyn Iterator<Item = Tagged> + Send + '_> {
                match b {
                    Block::Finite(ps) => Box::new(ps.iter().map(move |p| Tagged {
                        point: p.clone(),
                        perfect: false,
                        relative_rank_zero: true,
                    })),
                    Block::Tower(t) => Box::new(t.points().map(move |tp| Tagged {
                        relative_rank_zero: tp.rank == t.stage,
                        point: tp.point,
                        perfect: false,
                    })),
                    Block::Perfect(s) => Box::new(s.points().map(move |p| Tagged {
                        point: p,
                        perfect: true,
                        relative_rank_zero: false,
                    })),
                }
            })
            .collect();
        TaggedPoints {
            sources,
            cursor: 0,
            seen: BTreeSet::new(),
        }
    }

    /// Containment test: exact for finite points and for blocks covered by a
    /// single block of `other`, otherwise checked on `depth` sample points.
    pub fn subset_to_depth(&self, other: &SpecSet, depth: usize) -> bool {
        self.blocks.iter().all(|b| match b {
            Block::Finite(ps) => ps.iter().all(|p| other.member(p)),
            Block::Perfect(s) => {
                other.shapes().iter().any(|o| o.contains_shape(s))
                    || s.points().take(depth).all(|p| other.member(&p))
            }
            Block::Tower(t) => {
                let (a, far) = t.hull();
                other.towers().any(|u| tower_within(t, u))
                    || other.shapes().iter().any(|o| o.contains_segment(&a, &far))
                    || t.points().take(depth).all(|p| other.member(&p.point))
            }
        })
    }

    pub fn subset(&self, other: &SpecSet) -> bool {
        self.subset_to_depth(other, DEFAULT_EQUAL_DEPTH)
    }

    pub fn equal_to_depth(&self, other: &SpecSet, depth: usize) -> bool {
        self == other
            || (self.perfect_kernel() == other.perfect_kernel()
                && self.subset_to_depth(other, depth)
                && other.subset_to_depth(self, depth))
    }

    /// Set equality: exact on identical normal forms, sampled otherwise.
    pub fn equal(&self, other: &SpecSet) -> bool {
        self.equal_to_depth(other, DEFAULT_EQUAL_DEPTH)
    }

    /// Positive lower bound on `|z|` over the nonzero points, or `None` when
    /// the set is contained in `{0}`. Requires `0` to be isolated in the set.
    pub fn nonzero_modulus_floor(&self) -> Option<Rational> {
        if self.subset_of_zero() {
            return None;
        }
        radius::nonzero_floor(self)
    }
}

/// A point of the enumeration with provenance used by the finite-stage oracle.
#[derive(Debug, Clone)]
pub(crate) struct Tagged {
    pub point: ComplexRational,
    pub perfect: bool,
    pub relative_rank_zero: bool,
}

pub(crate) struct TaggedPoints<'a> {
    sources: Vec<Box<dyn Iterator<Item = Tagged> + Send + 'a>>,
    cursor: usize,
    seen: BTreeSet<ComplexRational>,
}

impl Iterator for TaggedPoints<'_> {
    type Item = Tagged;

    fn next(&mut self) -> Option<Tagged> {
        while !self.sources.is_empty() {
            let i = self.cursor % self.sources.len();
            match self.sources[i].next() {
                Some(t) => {
                    self.cursor = i + 1;
                    if self.seen.insert(t.point.clone()) {
                        return Some(t);
                    }
                }
                None => {
                    drop(self.sources.remove(i));
                    self.cursor = i;
                }
            }
        }
        None
    }
}

fn block_contains(b: &Block, q: &ComplexRational) -> bool {
    match b {
        Block::Finite(ps) => ps.contains(q),
        Block::Tower(t) => t.contains(q),
        Block::Perfect(s) => s.contains(q),
    }
}

/// `t ⊆ u` read off the parameters: same geometry, fewer slots, later stage.
fn tower_within(t: &Tower, u: &Tower) -> bool {
    t.anchor == u.anchor
        && t.dir == u.dir
        && t.scale == u.scale
        && t.rank == u.rank
        && t.first_slot >= u.first_slot
        && t.stage >= u.stage
}

fn normalize(blocks: Vec<Block>) -> Vec<Block> {
    let mut points: BTreeSet<ComplexRational> = BTreeSet::new();
    let mut towers: Vec<Tower> = Vec::new();
    let mut shapes: Vec<Shape> = Vec::new();
    for b in blocks {
        match b {
            Block::Finite(ps) => points.extend(ps),
            Block::Tower(t) => match t.reduce() {
                Reduced::Empty => {}
                Reduced::Point(p) => {
                    points.insert(p);
                }
                Reduced::Tower(t) => towers.push(*t),
            },
            Block::Perfect(s) => match canonical_shape(s) {
                Canonical::Shape(s) => shapes.push(s),
                Canonical::Point(p) => {
                    points.insert(p);
                }
            },
        }
    }
    shapes.sort();
    shapes.dedup();
    let shapes: Vec<Shape> = shapes
        .iter()
        .filter(|s| !shapes.iter().any(|o| o != *s && o.contains_shape(s)))
        .cloned()
        .collect();
    let kernel: Vec<&Shape> = shapes.iter().collect();
    towers.sort();
    towers.dedup();
    let towers: Vec<Tower> = towers
        .iter()
        .filter(|t| !t.rank_outside(&kernel).is_zero())
        .filter(|t| !towers.iter().any(|u| u != *t && tower_within(t, u)))
        .cloned()
        .collect();
    points.retain(|p| !shapes.iter().any(|s| s.contains(p)) && !towers.iter().any(|t| t.contains(p)));
    let mut out = Vec::new();
    if !points.is_empty() {
        out.push(Block::Finite(points));
    }
    out.extend(towers.into_iter().map(Block::Tower));
    out.extend(shapes.into_iter().map(Block::Perfect));
    out
}

enum Canonical {
    Shape(Shape),
    Point(ComplexRational),
}

/// Orders segment endpoints; degenerate shapes become their single point.
fn canonical_shape(s: Shape) -> Canonical {
    match s {
        Shape::Segment(a, b) if a == b => Canonical::Point(a),
        Shape::Segment(a, b) if b < a => Canonical::Shape(Shape::Segment(b, a)),
        Shape::Circle(c, r) | Shape::Disk(c, r) if r.is_zero() => Canonical::Point(c),
        s => Canonical::Shape(s),
    }
}

fn fmt_block(b: &Block, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match b {
        Block::Finite(ps) => {
            f.write_str("finite{")?;
            for (i, p) in ps.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str("}")
        }
        Block::Tower(t) => {
            write!(
                f,
                "tower(rank={}, anchor={}, scale={}, ",
                t.rank,
                t.anchor,
                fmt_rational(&t.scale)
            )?;
            match t.dir.axis_degrees() {
                Some(d) => write!(f, "dir={d}")?,
                None => write!(f, "dirv={}", t.dir.vector())?,
            }
            if t.first_slot != 1 {
                write!(f, ", from={}", t.first_slot)?;
            }
            if !t.stage.is_zero() {
                write!(f, ", stage={}", t.stage)?;
            }
            f.write_str(")")
        }
        Block::Perfect(Shape::Segment(a, b)) => write!(f, "seg({a}, {b})"),
        Block::Perfect(Shape::Circle(c, r)) => write!(f, "circle({c}, {})", fmt_rational(r)),
        Block::Perfect(Shape::Disk(c, r)) => write!(f, "disk({c}, {})", fmt_rational(r)),
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_block(self, f)
    }
}

impl fmt::Display for SpecSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.blocks.as_slice() {
            [] => f.write_str("empty"),
            [b] => fmt_block(b, f),
            bs => {
                f.write_str("union(")?;
                for (i, b) in bs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    fmt_block(b, f)?;
                }
                f.write_str(")")
            }
        }
    }
}

#[cfg(test)]
mod tests;
