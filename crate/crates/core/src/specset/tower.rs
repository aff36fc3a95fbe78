//! Canonical towers: countable compact sets of prescribed Cantor–Bendixson rank.
//!
//! A node with anchor `p`, scale `c` and rank `β > 0` owns the anchor plus one
//! child per slot `k >= first`. Slot `k` covers distances `(c/(k+1), c/k]` from
//! `p` along the tower direction; its child sits at offset `c/(k+1) + w/4` with
//! scale `w/2`, where `w = c/(k(k+1))` is the slot width. Children of a node of
//! rank `γ+1` have rank `γ`; children of a node of limit rank `λ` have rank
//! `λ[k]`, the fundamental sequence. A node of rank 0 is a single point.

use std::collections::VecDeque;

use num_traits::{Signed, ToPrimitive, Zero};
#[cfg(test)]
use num_traits::One;

use super::geometry::{segment_max_norm_sqr, segment_min_norm_sqr, Direction, Shape};
use crate::num::{int, sqrt_bounds, ComplexRational, Rational};
use crate::ordinal::{Ordinal, OrdinalKind};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tower {
    pub(crate) anchor: ComplexRational,
    pub(crate) dir: Direction,
    pub(crate) scale: Rational,
    /// Rank of the anchor in the underived tower.
    pub(crate) rank: Ordinal,
    pub(crate) first_slot: u64,
    /// Number of derivation stages already applied.
    pub(crate) stage: Ordinal,
}

/// Result of normalizing a tower.
pub(crate) enum Reduced {
    Empty,
    Point(ComplexRational),
    Tower(Box<Tower>),
}

#[derive(Debug, Clone)]
pub(crate) struct Node {
    pub anchor: ComplexRational,
    pub scale: Rational,
    pub rank: Ordinal,
    pub first: u64,
}

/// A point of a tower together with its rank in the underived tower.
#[derive(Debug, Clone)]
pub(crate) struct TowerPoint {
    pub point: ComplexRational,
    pub rank: Ordinal,
}

pub(crate) fn slot_width(c: &Rational, k: u64) -> Rational {
    c / int((k * (k + 1)) as i64)
}

pub(crate) fn child_offset(c: &Rational, k: u64) -> Rational {
    c / int(k as i64 + 1) + slot_width(c, k) / int(4)
}

pub(crate) fn child_scale(c: &Rational, k: u64) -> Rational {
    slot_width(c, k) / int(2)
}

/// Distance from the anchor beyond which no point of slots `>= first` lies.
pub(crate) fn extent(c: &Rational, first: u64) -> Rational {
    child_offset(c, first) + child_scale(c, first)
}

pub(crate) fn child_rank(rank: &Ordinal, k: u64) -> Option<Ordinal> {
    match rank.classify() {
        OrdinalKind::Zero => None,
        OrdinalKind::Successor => rank.predecessor().ok(),
        OrdinalKind::Limit => rank.fundamental_sequence(k).ok(),
    }
}

impl Node {
    pub fn child(&self, dir: &Direction, k: u64) -> Node {
        Node {
            anchor: dir.at(&self.anchor, &child_offset(&self.scale, k)),
            scale: child_scale(&self.scale, k),
            rank: child_rank(&self.rank, k).unwrap_or_default(),
            first: 1,
        }
    }

    /// Far end of the hull segment `[anchor, far]` of slots `>= first`.
    pub fn far(&self, dir: &Direction, first: u64) -> ComplexRational {
        dir.at(&self.anchor, &extent(&self.scale, first))
    }
}

impl Tower {
    pub fn new(anchor: ComplexRational, dir: Direction, scale: Rational, rank: Ordinal) -> Self {
        Tower {
            anchor,
            dir,
            scale,
            rank,
            first_slot: 1,
            stage: Ordinal::zero(),
        }
    }

    pub fn anchor(&self) -> &ComplexRational {
        &self.anchor
    }

    pub fn direction(&self) -> &Direction {
        &self.dir
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn rank(&self) -> &Ordinal {
        &self.rank
    }

    pub fn first_slot(&self) -> u64 {
        self.first_slot
    }

    pub fn stage(&self) -> &Ordinal {
        &self.stage
    }

    /// Rank of the anchor within the derived tower.
    pub fn anchor_rank(&self) -> Ordinal {
        self.rank.left_subtract(&self.stage).unwrap_or_default()
    }

    pub(crate) fn root(&self) -> Node {
        Node {
            anchor: self.anchor.clone(),
            scale: self.scale.clone(),
            rank: self.rank.clone(),
            first: self.first_slot,
        }
    }

    pub(crate) fn with_root(&self, node: Node) -> Tower {
        Tower {
            anchor: node.anchor,
            dir: self.dir.clone(),
            scale: node.scale,
            rank: node.rank,
            first_slot: node.first,
            stage: self.stage.clone(),
        }
    }

    pub(crate) fn present(&self, node_rank: &Ordinal) -> bool {
        *node_rank >= self.stage
    }

    pub(crate) fn reduce(mut self) -> Reduced {
        if self.stage > self.rank {
            return Reduced::Empty;
        }
        if self.stage == self.rank {
            return Reduced::Point(self.anchor);
        }
        if let (Some(r), Some(s)) = (self.rank.as_finite(), self.stage.as_finite()) {
            self.rank = Ordinal::finite(r - s);
            self.stage = Ordinal::zero();
        }
        if self.rank.is_limit() {
            let absent = |k: u64| self.rank.fundamental_sequence(k).map(|r| r < self.stage).unwrap_or(true);
            if absent(self.first_slot) {
                let mut lo = self.first_slot;
                let mut step = 1u64;
                let mut hi = lo.saturating_add(step);
                while absent(hi) {
                    lo = hi;
                    step = step.saturating_mul(2);
                    hi = lo.saturating_add(step);
                }
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if absent(mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                self.first_slot = hi;
            }
        }
        Reduced::Tower(Box::new(self))
    }

    /// Hull segment containing every point of the tower.
    pub(crate) fn hull(&self) -> (ComplexRational, ComplexRational) {
        (self.anchor.clone(), self.root().far(&self.dir, self.first_slot))
    }

    pub(crate) fn translate(&self, z: &ComplexRational) -> Tower {
        Tower {
            anchor: &self.anchor + z,
            ..self.clone()
        }
    }

    /// Image under `z -> s z` for nonzero real `s`.
    pub(crate) fn scaled(&self, s: &Rational) -> Tower {
        Tower {
            anchor: self.anchor.scale(s),
            dir: if s.is_negative() {
                self.dir.reversed()
            } else {
                self.dir.clone()
            },
            scale: &self.scale * s.abs(),
            ..self.clone()
        }
    }

    /// Underived rank of `q` in the tower together with its innermost slot
    /// width, or `None` when `q` is not a point of the (derived) tower.
    pub(crate) fn locate(&self, q: &ComplexRational) -> Option<(Ordinal, Option<Rational>)> {
        let d = self.dir.vector();
        let mut node = self.root();
        let mut width = None;
        loop {
            if !self.present(&node.rank) {
                return None;
            }
            let v = q - &node.anchor;
            let t = v.dot(d);
            if v != d.scale(&t) || t.is_negative() {
                return None;
            }
            if t.is_zero() {
                return Some((node.rank, width));
            }
            if node.rank.is_zero() {
                return None;
            }
            let k = (&node.scale / &t).floor().to_integer().to_u64()?;
            if k < node.first {
                return None;
            }
            let offset = child_offset(&node.scale, k);
            let t_in = &t - &offset;
            if t_in.is_negative() || t_in > child_scale(&node.scale, k) {
                return None;
            }
            width = Some(slot_width(&node.scale, k));
            node = node.child(&self.dir, k);
        }
    }

    pub(crate) fn contains(&self, q: &ComplexRational) -> bool {
        self.locate(q).is_some()
    }

    /// Points in order of increasing weight; the anchor has weight 1 and the
    /// child in slot `k` adds `k`. Infinite for reduced towers.
    pub(crate) fn points(&self) -> TowerPoints<'_> {
        TowerPoints {
            tower: self,
            weight: 0,
            buffer: VecDeque::new(),
        }
    }

    fn generate(&self, node: &Node, remaining: u64, out: &mut Vec<TowerPoint>) {
        if !self.present(&node.rank) {
            return;
        }
        if remaining == 0 {
            out.push(TowerPoint {
                point: node.anchor.clone(),
                rank: node.rank.clone(),
            });
            return;
        }
        if node.rank.is_zero() || remaining < node.first {
            return;
        }
        let leaf_children = node.rank == Ordinal::one();
        let lo = if leaf_children { remaining } else { node.first };
        for k in lo..=remaining {
            let child = node.child(&self.dir, k);
            if !self.present(&child.rank) {
                continue;
            }
            self.generate(&child, remaining - k, out);
        }
    }

    /// Circle test: whether some point of the tower has modulus exactly `r`.
    pub(crate) fn meets_circle(&self, r: &Rational) -> bool {
        let d = self.dir.vector();
        let p = &self.anchor;
        let pd = p.dot(d);
        let disc = &pd * &pd - p.norm_sqr() + r * r;
        if disc.is_negative() {
            return false;
        }
        let Some(root) = crate::num::exact_sqrt(&disc) else {
            return false;
        };
        [-&pd + &root, -&pd - &root].iter().any(|t| {
            !t.is_negative() && self.contains(&self.dir.at(p, t))
        })
    }

    /// Interval cover of the moduli `|z|` over the tower. Nodes whose hull
    /// meets `window` are refined `depth` levels with at most `budget`
    /// explicit children each.
    pub(crate) fn modulus_cover(&self, window: &(Rational, Rational), depth: u32, budget: u64, bits: u32, out: &mut Vec<Cover>) {
        self.cover_node(&self.root(), window, depth, budget, bits, out);
    }

    fn cover_node(&self, node: &Node, window: &(Rational, Rational), depth: u32, budget: u64, bits: u32, out: &mut Vec<Cover>) {
        if !self.present(&node.rank) {
            return;
        }
        let point = Cover::point(&node.anchor, bits);
        if node.rank.is_zero() {
            out.push(point);
            return;
        }
        let hull = Cover::segment(&node.anchor, &node.far(&self.dir, node.first), bits);
        let misses = hull.hi < window.0 || hull.lo > window.1;
        if depth == 0 || misses {
            out.push(hull);
            return;
        }
        out.push(point);
        let end = node.first.saturating_add(budget);
        for k in node.first..end {
            let child = node.child(&self.dir, k);
            self.cover_node(&child, window, depth - 1, budget, bits, out);
        }
        out.push(Cover::segment(&node.anchor, &node.far(&self.dir, end), bits));
    }

    /// Split along the circle `|z| = r`, which must miss the tower.
    pub(crate) fn split(&self, r2: &Rational, inside: &mut Vec<Tower>, outside: &mut Vec<Tower>, points_in: &mut Vec<ComplexRational>, points_out: &mut Vec<ComplexRational>) {
        let (a, far) = self.hull();
        if segment_max_norm_sqr(&a, &far) < *r2 {
            inside.push(self.clone());
            return;
        }
        if segment_min_norm_sqr(&a, &far) > *r2 {
            outside.push(self.clone());
            return;
        }
        let anchor_in = a.norm_sqr() < *r2;
        let root = self.root();
        let tail_ok = |k: u64| {
            let f = root.far(&self.dir, k);
            if anchor_in {
                segment_max_norm_sqr(&a, &f) < *r2
            } else {
                segment_min_norm_sqr(&a, &f) > *r2
            }
        };
        let mut lo = self.first_slot;
        let mut step = 1u64;
        let mut hi = lo + step;
        while !tail_ok(hi) {
            lo = hi;
            step = step.saturating_mul(2);
            hi = lo.saturating_add(step);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if tail_ok(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let tail = Tower {
            first_slot: hi,
            ..self.clone()
        };
        if anchor_in {
            inside.push(tail);
        } else {
            outside.push(tail);
        }
        for k in self.first_slot..hi {
            let child = root.child(&self.dir, k);
            match self.with_root(child).reduce() {
                Reduced::Empty => {}
                Reduced::Point(p) => {
                    if p.norm_sqr() < *r2 {
                        points_in.push(p);
                    } else {
                        points_out.push(p);
                    }
                }
                Reduced::Tower(t) => (*t).split(r2, inside, outside, points_in, points_out),
            }
        }
    }

    /// Supremum of `rank + 1` over tower points lying outside every shape in
    /// `kernel`, with ranks taken in the derived tower.
    pub(crate) fn rank_outside(&self, kernel: &[&Shape]) -> Ordinal {
        self.rank_outside_node(&self.root(), kernel)
    }

    fn rank_outside_node(&self, node: &Node, kernel: &[&Shape]) -> Ordinal {
        if !self.present(&node.rank) {
            return Ordinal::zero();
        }
        let relative = node.rank.left_subtract(&self.stage).unwrap_or_default();
        if !kernel.iter().any(|s| s.contains(&node.anchor)) {
            return relative.successor();
        }
        if node.rank.is_zero() {
            return Ordinal::zero();
        }
        let far = node.far(&self.dir, node.first);
        if kernel.iter().any(|s| s.contains_segment(&node.anchor, &far)) {
            return Ordinal::zero();
        }
        let covering = kernel.iter().find(|s| covers_initial_ray(s, &node.anchor, &self.dir));
        let Some(shape) = covering else {
            return relative;
        };
        let covered = |k: u64| shape.contains_segment(&node.anchor, &node.far(&self.dir, k));
        let mut end = node.first;
        while !covered(end) {
            end = end.saturating_mul(2);
        }
        let mut best = Ordinal::zero();
        for k in node.first..end {
            let child = node.child(&self.dir, k);
            let r = self.rank_outside_node(&child, kernel);
            if r > best {
                best = r;
            }
        }
        best
    }
}

/// Whether `shape` contains `[p, p + t d]` for some `t > 0`.
fn covers_initial_ray(shape: &Shape, p: &ComplexRational, dir: &Direction) -> bool {
    let d = dir.vector();
    match shape {
        Shape::Circle(..) => false,
        Shape::Disk(c, r) => {
            let v = p - c;
            let n = v.norm_sqr();
            let r2 = r * r;
            n < r2 || (n == r2 && v.dot(d).is_negative())
        }
        Shape::Segment(a, b) => {
            let e = b - a;
            if !e.cross(d).is_zero() || !shape.contains(p) {
                return false;
            }
            let toward = if e.dot(d).is_positive() { b } else { a };
            toward != p
        }
    }
}

/// Rational interval containing the moduli of a point or a segment.
#[derive(Debug, Clone)]
pub(crate) struct Cover {
    pub lo: Rational,
    pub hi: Rational,
    /// Exact point `0`, as opposed to an interval that merely reaches it.
    pub origin: bool,
}

impl Cover {
    pub fn point(p: &ComplexRational, bits: u32) -> Cover {
        let (lo, hi) = sqrt_bounds(&p.norm_sqr(), bits);
        Cover { lo, hi, origin: p.is_zero() }
    }

    pub fn segment(a: &ComplexRational, b: &ComplexRational, bits: u32) -> Cover {
        Cover {
            lo: sqrt_bounds(&segment_min_norm_sqr(a, b), bits).0,
            hi: sqrt_bounds(&segment_max_norm_sqr(a, b), bits).1,
            origin: false,
        }
    }
}

pub(crate) struct TowerPoints<'a> {
    tower: &'a Tower,
    weight: u64,
    buffer: VecDeque<TowerPoint>,
}

impl Iterator for TowerPoints<'_> {
    type Item = TowerPoint;

    fn next(&mut self) -> Option<TowerPoint> {
        while self.buffer.is_empty() {
            let root = self.tower.root();
            let mut out = Vec::new();
            self.tower.generate(&root, self.weight, &mut out);
            self.weight += 1;
            self.buffer.extend(out);
        }
        self.buffer.pop_front()
    }
}
