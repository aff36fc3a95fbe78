//! Searching for circles `|z| = r` that miss a set.

use num_traits::{One, Signed, Zero};

use super::tower::Cover;
use super::{Block, SpecSet};
use crate::num::{int, Rational, Surd};

/// Which modulus gap to take the radius from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapRule {
    /// Midpoint of the widest gap, ties to the outermost.
    Widest,
    /// Midpoint of the outermost gap.
    Highest,
}

/// Refinement schedule `(depth, budget, bits)` for countable parts.
const ROUNDS: [(u32, u64, u32); 3] = [(1, 8, 32), (2, 16, 48), (3, 16, 64)];

impl SpecSet {
    /// A rational `r` in `[mu, v]` whose circle misses the set, if one exists.
    pub fn find_avoiding_radius(&self, mu: &Rational, v: &Rational) -> Option<Rational> {
        self.avoiding_radius(mu, v, GapRule::Widest)
    }

    pub fn avoiding_radius(&self, lo: &Rational, hi: &Rational, rule: GapRule) -> Option<Rational> {
        if lo > hi || hi.is_negative() {
            return None;
        }
        let lo = if lo.is_negative() { Rational::zero() } else { lo.clone() };
        if perfect_cover(self, &lo, hi) {
            return None;
        }
        let window = (lo.clone(), hi.clone());
        for (depth, budget, bits) in ROUNDS {
            let cover = modulus_cover(self, &window, depth, budget, bits);
            let mut gaps = gaps(&cover, &lo, hi);
            match rule {
                GapRule::Widest => gaps.sort_by(|a, b| {
                    (&b.1 - &b.0).cmp(&(&a.1 - &a.0)).then_with(|| b.1.cmp(&a.1))
                }),
                GapRule::Highest => gaps.sort_by(|a, b| b.1.cmp(&a.1)),
            }
            for (x, y) in &gaps {
                for (n, d) in [(1, 2), (1, 3), (2, 3)] {
                    let r = x + (y - x) * Rational::new(n.into(), d.into());
                    if r >= lo && r <= *hi && r.is_positive() && !self.circle_meets(&r) {
                        return Some(r);
                    }
                }
            }
        }
        None
    }
}

/// Whether the moduli of the perfect blocks cover `[lo, hi]`.
fn perfect_cover(s: &SpecSet, lo: &Rational, hi: &Rational) -> bool {
    let mut ranges: Vec<(Surd, Surd)> = s.shapes().iter().map(|sh| sh.modulus_range()).collect();
    ranges.sort_by(|a, b| a.0.cmp(&b.0));
    let mut reach = Surd::rational(lo.clone());
    for (a, b) in ranges {
        if a > reach {
            break;
        }
        if b > reach {
            reach = b;
        }
    }
    reach.cmp_rational(hi).is_ge()
}

pub(crate) fn modulus_cover(s: &SpecSet, window: &(Rational, Rational), depth: u32, budget: u64, bits: u32) -> Vec<Cover> {
    let mut out = Vec::new();
    for b in s.blocks() {
        match b {
            Block::Finite(ps) => out.extend(ps.iter().map(|p| Cover::point(p, bits))),
            Block::Tower(t) => t.modulus_cover(window, depth, budget, bits, &mut out),
            Block::Perfect(sh) => {
                let (lo, hi) = sh.modulus_range();
                out.push(Cover {
                    lo: lo.lower_bound(bits),
                    hi: hi.upper_bound(bits),
                    origin: false,
                });
            }
        }
    }
    out
}

/// Open gaps of `[lo, hi]` left by the cover.
fn gaps(cover: &[Cover], lo: &Rational, hi: &Rational) -> Vec<(Rational, Rational)> {
    let mut iv: Vec<(&Rational, &Rational)> = cover.iter().map(|c| (&c.lo, &c.hi)).collect();
    iv.sort();
    let mut out = Vec::new();
    let mut cur = lo.clone();
    for (a, b) in iv {
        if *a > cur {
            let end = if a < hi { a.clone() } else { hi.clone() };
            if end > cur {
                out.push((cur.clone(), end));
            }
        }
        if *b > cur {
            cur = b.clone();
        }
        if cur >= *hi {
            return out;
        }
    }
    if cur < *hi {
        out.push((cur, hi.clone()));
    }
    out
}

/// Positive lower bound on the moduli of the nonzero points.
pub(crate) fn nonzero_floor(s: &SpecSet) -> Option<Rational> {
    let upper = s.modulus_upper() + Rational::one();
    let window = (Rational::zero(), upper);
    for (depth, budget, bits) in ROUNDS {
        let cover = modulus_cover(s, &window, depth, budget, bits);
        let relevant: Vec<&Cover> = cover.iter().filter(|c| !c.origin).collect();
        if relevant.is_empty() {
            return None;
        }
        if relevant.iter().all(|c| c.lo.is_positive()) {
            return relevant.iter().map(|c| c.lo.clone()).min();
        }
    }
    // Fall back to a strictly smaller bound from the deepest round.
    let (depth, budget, bits) = ROUNDS[ROUNDS.len() - 1];
    let cover = modulus_cover(s, &window, depth + 2, budget, bits);
    cover
        .iter()
        .filter(|c| !c.origin && c.lo.is_positive())
        .map(|c| c.lo.clone() / int(2))
        .min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, ComplexRational};
    use crate::ordinal::Ordinal;
    use crate::specset::Direction;

    fn tower1() -> SpecSet {
        SpecSet::tower(ComplexRational::zero(), Ordinal::one(), Rational::one(), Direction::east()).unwrap()
    }

    #[test]
    fn finite_point_outside_window() {
        let s = SpecSet::point(ComplexRational::one());
        let r = s.find_avoiding_radius(&rat(1, 4), &rat(1, 2)).unwrap();
        assert!(r >= rat(1, 4) && r <= rat(1, 2));
    }

    #[test]
    fn disk_blocks_every_radius() {
        let s = SpecSet::disk(ComplexRational::zero(), Rational::one()).unwrap();
        assert_eq!(s.find_avoiding_radius(&rat(1, 4), &rat(1, 2)), None);
    }

    #[test]
    fn tower_leaves_are_avoided() {
        // Leaves of slots 1 and 2 sit at 5/8 and 3/8.
        let s = tower1();
        let r = s.find_avoiding_radius(&rat(1, 3), &rat(1, 2)).unwrap();
        assert_eq!(r, rat(7, 16));
        let r = s.avoiding_radius(&Rational::zero(), &rat(1, 2), GapRule::Highest).unwrap();
        assert!(r > rat(3, 8) && r < rat(1, 2));
    }

    #[test]
    fn annulus_gap_between_disks() {
        let s = SpecSet::disk(ComplexRational::zero(), rat(1, 2))
            .unwrap()
            .union(&SpecSet::circle(ComplexRational::zero(), int(2)).unwrap());
        let r = s.find_avoiding_radius(&rat(1, 4), &int(3)).unwrap();
        assert!(r > rat(1, 2) && r < int(2));
    }

    #[test]
    fn floor_of_nonzero_points() {
        let t = SpecSet::tower(ComplexRational::one(), Ordinal::one(), rat(1, 2), Direction::east()).unwrap();
        let s = t.union(&SpecSet::point(ComplexRational::zero()));
        let f = s.nonzero_modulus_floor().unwrap();
        assert!(f.is_positive() && f <= Rational::one());
        assert_eq!(SpecSet::point(ComplexRational::zero()).nonzero_modulus_floor(), None);
    }
}
