//! Plane geometry over exact rationals: directions, perfect shapes, segments.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::num::{int, ComplexRational, Rational, Surd};

/// An exact unit vector.
///
/// Rational points on the unit circle are dense, so any angle can be
/// approximated by one through the half-angle tangent parametrization
/// `((1 - t^2) / (1 + t^2), 2t / (1 + t^2))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction(ComplexRational);

const TAN_DENOM_BITS: u32 = 20;

impl Direction {
    pub fn east() -> Self {
        Direction(ComplexRational::one())
    }

    pub fn from_unit(v: ComplexRational) -> Option<Self> {
        if v.norm_sqr().is_one() {
            Some(Direction(v))
        } else {
            None
        }
    }

    /// Unit vector for the half-angle tangent `t`.
    pub fn from_half_tangent(t: &Rational) -> Self {
        let t2 = t * t;
        let den = Rational::one() + &t2;
        Direction(ComplexRational::new(
            (Rational::one() - &t2) / &den,
            int(2) * t / den,
        ))
    }

    /// Direction at an angle given in degrees. Multiples of 90 are exact; any
    /// other angle maps to a nearby rational unit vector.
    pub fn from_degrees(deg: &Rational) -> Self {
        let full = int(360);
        let d = deg - &full * (deg / &full).floor();
        if d.is_zero() {
            return Direction::east();
        }
        if d == int(90) {
            return Direction(ComplexRational::from_ints(0, 1));
        }
        if d == int(180) {
            return Direction(ComplexRational::from_ints(-1, 0));
        }
        if d == int(270) {
            return Direction(ComplexRational::from_ints(0, -1));
        }
        if d > int(90) && d < int(270) {
            return Direction::from_degrees(&(d - int(180))).reversed();
        }
        let theta = if d > int(270) { d - full } else { d };
        let radians = theta.to_f64().unwrap_or(0.0).to_radians();
        let t = (radians / 2.0).tan();
        let scale = f64::from(1u32 << TAN_DENOM_BITS);
        let num = (t * scale).round() as i64;
        let tq = Rational::new(num.into(), (1i64 << TAN_DENOM_BITS).into());
        Direction::from_half_tangent(&tq)
    }

    /// Degrees when the direction is axis-aligned.
    pub fn axis_degrees(&self) -> Option<i64> {
        let v = &self.0;
        match (v.re.to_i64(), v.im.to_i64()) {
            _ if !v.re.is_integer() || !v.im.is_integer() => None,
            (Some(1), Some(0)) => Some(0),
            (Some(0), Some(1)) => Some(90),
            (Some(-1), Some(0)) => Some(180),
            (Some(0), Some(-1)) => Some(270),
            _ => None,
        }
    }

    pub fn vector(&self) -> &ComplexRational {
        &self.0
    }

    pub fn reversed(&self) -> Self {
        Direction(-&self.0)
    }

    /// Point at distance `t` from `origin`.
    pub fn at(&self, origin: &ComplexRational, t: &Rational) -> ComplexRational {
        origin + &self.0.scale(t)
    }
}

/// Squared distance from the origin to the segment `[a, b]`.
pub fn segment_min_norm_sqr(a: &ComplexRational, b: &ComplexRational) -> Rational {
    let d = b - a;
    let dd = d.norm_sqr();
    if dd.is_zero() {
        return a.norm_sqr();
    }
    let t = -a.dot(&d) / &dd;
    let t = if t.is_negative() {
        Rational::zero()
    } else if t > Rational::one() {
        Rational::one()
    } else {
        t
    };
    (a + &d.scale(&t)).norm_sqr()
}

pub fn segment_max_norm_sqr(a: &ComplexRational, b: &ComplexRational) -> Rational {
    let x = a.norm_sqr();
    let y = b.norm_sqr();
    if x > y {
        x
    } else {
        y
    }
}

pub fn on_segment(q: &ComplexRational, a: &ComplexRational, b: &ComplexRational) -> bool {
    let d = b - a;
    let v = q - a;
    if !v.cross(&d).is_zero() {
        return false;
    }
    let t = v.dot(&d);
    !t.is_negative() && t <= d.norm_sqr()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    Segment(ComplexRational, ComplexRational),
    Circle(ComplexRational, Rational),
    Disk(ComplexRational, Rational),
}

impl Shape {
    pub fn contains(&self, q: &ComplexRational) -> bool {
        match self {
            Shape::Segment(a, b) => on_segment(q, a, b),
            Shape::Circle(c, r) => (q - c).norm_sqr() == r * r,
            Shape::Disk(c, r) => (q - c).norm_sqr() <= r * r,
        }
    }

    /// Whether the shape contains the whole segment `[a, b]`.
    pub fn contains_segment(&self, a: &ComplexRational, b: &ComplexRational) -> bool {
        match self {
            Shape::Segment(..) | Shape::Disk(..) => self.contains(a) && self.contains(b),
            Shape::Circle(..) => a == b && self.contains(a),
        }
    }

    /// Exact single-shape containment `other ⊆ self`.
    pub fn contains_shape(&self, other: &Shape) -> bool {
        match (self, other) {
            (_, Shape::Segment(a, b)) => self.contains_segment(a, b),
            (Shape::Disk(c1, r1), Shape::Disk(c2, r2) | Shape::Circle(c2, r2)) => {
                let slack = r1 - r2;
                !slack.is_negative() && (c1 - c2).norm_sqr() <= &slack * &slack
            }
            (Shape::Circle(c1, r1), Shape::Circle(c2, r2)) => c1 == c2 && r1 == r2,
            _ => false,
        }
    }

    pub fn translate(&self, z: &ComplexRational) -> Shape {
        match self {
            Shape::Segment(a, b) => Shape::Segment(a + z, b + z),
            Shape::Circle(c, r) => Shape::Circle(c + z, r.clone()),
            Shape::Disk(c, r) => Shape::Disk(c + z, r.clone()),
        }
    }

    pub fn scale(&self, s: &Rational) -> Shape {
        match self {
            Shape::Segment(a, b) => Shape::Segment(a.scale(s), b.scale(s)),
            Shape::Circle(c, r) => Shape::Circle(c.scale(s), r * s.abs()),
            Shape::Disk(c, r) => Shape::Disk(c.scale(s), r * s.abs()),
        }
    }

    /// Exact range of `|z|` over the shape.
    pub fn modulus_range(&self) -> (Surd, Surd) {
        match self {
            Shape::Segment(a, b) => (
                Surd::sqrt(segment_min_norm_sqr(a, b)),
                Surd::sqrt(segment_max_norm_sqr(a, b)),
            ),
            Shape::Disk(c, r) => {
                let m = c.norm_sqr();
                (
                    Surd::new(-r, Rational::one(), m.clone()).max_zero(),
                    Surd::new(r.clone(), Rational::one(), m),
                )
            }
            Shape::Circle(c, r) => {
                let m = c.norm_sqr();
                (
                    Surd::new(-r, Rational::one(), m.clone()).abs(),
                    Surd::new(r.clone(), Rational::one(), m),
                )
            }
        }
    }

    /// Whether the circle `|z| = r` meets the shape.
    pub fn meets_circle(&self, r: &Rational) -> bool {
        let (lo, hi) = self.modulus_range();
        lo.cmp_rational(r).is_le() && hi.cmp_rational(r).is_ge()
    }

    /// Any point of the shape.
    pub fn sample_point(&self) -> ComplexRational {
        match self {
            Shape::Segment(a, _) => a.clone(),
            Shape::Circle(c, r) => c + &ComplexRational::real(r.clone()),
            Shape::Disk(c, _) => c.clone(),
        }
    }

    /// Rational upper bound on `|z|` over the shape.
    pub fn modulus_upper(&self) -> Rational {
        self.modulus_range().1.upper_bound(32)
    }

    /// The i-th point of a deterministic dense enumeration of the shape.
    pub fn points(&self) -> Box<dyn Iterator<Item = ComplexRational> + Send + '_> {
        match self {
            Shape::Segment(a, b) => {
                let d = b - a;
                Box::new(dyadic_unit_interval().map(move |t| a + &d.scale(&t)))
            }
            Shape::Circle(c, r) => Box::new(
                circle_half_tangents()
                    .map(move |u| c + &unit_point(&u).scale(r)),
            ),
            Shape::Disk(c, r) => Box::new(disk_grid().map(move |p| c + &p.scale(r))),
        }
    }
}

/// 0, 1, 1/2, 1/4, 3/4, 1/8, ...
fn dyadic_unit_interval() -> impl Iterator<Item = Rational> {
    let head = [Rational::zero(), Rational::one()].into_iter();
    let tail = (1u32..).flat_map(|level| {
        let den: i64 = 1 << level.min(62);
        (0..den / 2).map(move |j| Rational::new((2 * j + 1).into(), den.into()))
    });
    head.chain(tail)
}

/// Half-angle tangent parameters; `None` is the antipode of the east point.
fn circle_half_tangents() -> impl Iterator<Item = Option<Rational>> {
    let level0 = [Some(Rational::zero()), None].into_iter();
    let rest = (0u32..).flat_map(|level| {
        let den: i64 = 1 << level.min(62);
        (0..den).filter(move |j| level == 0 || j % 2 == 1).flat_map(move |j| {
            let u = Rational::new((j + den).into(), (2 * den).into());
            // u in (1/2, 1] when level 0, refining; mirror across the four
            // quadrants through t, -t, 1/t, -1/t.
            let inv = Rational::one() / &u;
            [Some(u.clone()), Some(-u), Some(inv.clone()), Some(-inv)]
        })
    });
    level0.chain(rest)
}

fn unit_point(t: &Option<Rational>) -> ComplexRational {
    match t {
        None => ComplexRational::from_ints(-1, 0),
        Some(t) => Direction::from_half_tangent(t).vector().clone(),
    }
}

/// Grid points of the closed unit disk, coarse to fine.
fn disk_grid() -> impl Iterator<Item = ComplexRational> {
    let center = std::iter::once(ComplexRational::zero());
    let rest = (0u32..).flat_map(|level| {
        let den: i64 = 1 << level.min(30);
        (-den..=den).flat_map(move |i| {
            (-den..=den).filter_map(move |j| {
                if level > 0 && i % 2 == 0 && j % 2 == 0 {
                    return None;
                }
                if i == 0 && j == 0 {
                    return None;
                }
                if i * i + j * j > den * den {
                    return None;
                }
                Some(ComplexRational::new(
                    Rational::new(i.into(), den.into()),
                    Rational::new(j.into(), den.into()),
                ))
            })
        })
    });
    center.chain(rest)
}
