//! Exact scalar arithmetic: rationals, complex rationals and quadratic surds.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact square root when `q` is the square of a rational.
pub fn exact_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Rational bounds `lo <= sqrt(q) <= hi` with `hi - lo <= 2^-bits / denom(q)`.
pub fn sqrt_bounds(q: &Rational, bits: u32) -> (Rational, Rational) {
    assert!(!q.is_negative(), "sqrt of negative rational");
    if let Some(r) = exact_sqrt(q) {
        return (r.clone(), r);
    }
    let scale = BigInt::one() << bits;
    // sqrt(n/d) = sqrt(n*d)/d
    let nd = q.numer() * q.denom() * &scale * &scale;
    let root = nd.sqrt();
    let den = q.denom() * &scale;
    (
        Rational::new(root.clone(), den.clone()),
        Rational::new(root + BigInt::one(), den),
    )
}

pub fn floor_to_u64(q: &Rational) -> Option<u64> {
    q.floor().to_integer().to_u64()
}

/// `floor(q)` as an unbounded integer.
pub fn floor_int(q: &Rational) -> BigInt {
    let (d, _) = q.numer().div_mod_floor(q.denom());
    d
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComplexRational {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        ComplexRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        ComplexRational::new(re, Rational::zero())
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        ComplexRational::new(int(re), int(im))
    }

    pub fn zero() -> Self {
        ComplexRational::real(Rational::zero())
    }

    pub fn one() -> Self {
        ComplexRational::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Squared modulus, always exact.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, s: &Rational) -> Self {
        ComplexRational::new(&self.re * s, &self.im * s)
    }

    /// Real dot product of the two points seen as plane vectors.
    pub fn dot(&self, other: &Self) -> Rational {
        &self.re * &other.re + &self.im * &other.im
    }

    /// z-component of the plane cross product.
    pub fn cross(&self, other: &Self) -> Rational {
        &self.re * &other.im - &self.im * &other.re
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(ComplexRational::new(&self.re / &n, -&self.im / &n))
    }

    pub fn pow(&self, m: u32) -> Self {
        let mut acc = ComplexRational::one();
        for _ in 0..m {
            acc = &acc * self;
        }
        acc
    }

    /// Sup-norm of the coordinates; used as an exact defect measure.
    pub fn max_abs_coord(&self) -> Rational {
        let a = self.re.abs();
        let b = self.im.abs();
        if a > b {
            a
        } else {
            b
        }
    }
}

impl fmt::Display for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&fmt_rational(&self.re));
        }
        let im_abs = self.im.abs();
        let im = if im_abs.is_one() {
            String::new()
        } else {
            fmt_rational(&im_abs)
        };
        if self.re.is_zero() {
            let sign = if self.im.is_negative() { "-" } else { "" };
            return write!(f, "{sign}{im}i");
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{sign}{im}i", fmt_rational(&self.re))
    }
}

impl Add for &ComplexRational {
    type Output = ComplexRational;
    fn add(self, rhs: Self) -> ComplexRational {
        ComplexRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &ComplexRational {
    type Output = ComplexRational;
    fn sub(self, rhs: Self) -> ComplexRational {
        ComplexRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &ComplexRational {
    type Output = ComplexRational;
    fn mul(self, rhs: Self) -> ComplexRational {
        ComplexRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &ComplexRational {
    type Output = ComplexRational;
    fn neg(self) -> ComplexRational {
        ComplexRational::new(-&self.re, -&self.im)
    }
}

fn sign_of(q: &Rational) -> i8 {
    match q.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// sign(p + q*sqrt(m)), m >= 0.
fn sign_surd(p: &Rational, q: &Rational, m: &Rational) -> i8 {
    let sp = sign_of(p);
    let sq = if m.is_zero() { 0 } else { sign_of(q) };
    if sq == 0 {
        return sp;
    }
    if sp == 0 || sp == sq {
        return sq;
    }
    // Opposite signs: compare p^2 with q^2 m.
    match (p * p).cmp(&(q * q * m)) {
        Ordering::Greater => sp,
        Ordering::Less => sq,
        Ordering::Equal => 0,
    }
}

/// sign(p + q1*sqrt(m1) + q2*sqrt(m2)), m1, m2 >= 0.
fn sign_surd2(p: &Rational, q1: &Rational, m1: &Rational, q2: &Rational, m2: &Rational) -> i8 {
    let s1 = sign_surd(p, q1, m1);
    let s2 = if m2.is_zero() { 0 } else { sign_of(q2) };
    if s2 == 0 {
        return s1;
    }
    if s1 == 0 || s1 == s2 {
        return s2;
    }
    // |p + q1 sqrt(m1)|^2 - q2^2 m2 = (p^2 + q1^2 m1 - q2^2 m2) + 2 p q1 sqrt(m1)
    let base = p * p + q1 * q1 * m1 - q2 * q2 * m2;
    let t = sign_surd(&base, &(int(2) * p * q1), m1);
    if s1 > 0 {
        t
    } else {
        -t
    }
}

/// A real number `a + b*sqrt(m)` with rational `a`, `b` and `m >= 0`.
#[derive(Debug, Clone)]
pub struct Surd {
    pub a: Rational,
    pub b: Rational,
    pub m: Rational,
}

impl Surd {
    pub fn rational(a: Rational) -> Self {
        Surd {
            a,
            b: Rational::zero(),
            m: Rational::zero(),
        }
    }

    /// `sqrt(m)`.
    pub fn sqrt(m: Rational) -> Self {
        Surd {
            a: Rational::zero(),
            b: Rational::one(),
            m,
        }
    }

    pub fn new(a: Rational, b: Rational, m: Rational) -> Self {
        assert!(!m.is_negative());
        Surd { a, b, m }
    }

    pub fn sign(&self) -> i8 {
        sign_surd(&self.a, &self.b, &self.m)
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        match sign_surd(&(&self.a - r), &self.b, &self.m) {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn max_zero(self) -> Surd {
        if self.sign() < 0 {
            Surd::rational(Rational::zero())
        } else {
            self
        }
    }

    pub fn abs(self) -> Surd {
        if self.sign() < 0 {
            Surd {
                a: -self.a,
                b: -self.b,
                m: self.m,
            }
        } else {
            self
        }
    }

    pub fn lower_bound(&self, bits: u32) -> Rational {
        let (lo, hi) = sqrt_bounds(&self.m, bits);
        if self.b.is_negative() {
            &self.a + &self.b * hi
        } else {
            &self.a + &self.b * lo
        }
    }

    pub fn upper_bound(&self, bits: u32) -> Rational {
        let (lo, hi) = sqrt_bounds(&self.m, bits);
        if self.b.is_negative() {
            &self.a + &self.b * lo
        } else {
            &self.a + &self.b * hi
        }
    }
}

impl PartialEq for Surd {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Surd {}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        let s = sign_surd2(
            &(&self.a - &other.a),
            &self.b,
            &self.m,
            &(-&other.b),
            &other.m,
        );
        s.cmp(&0)
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
