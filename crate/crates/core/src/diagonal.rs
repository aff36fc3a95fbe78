//! Lazy diagonal operators with exact rational entries, entrywise identity
//! checks, and a finite-stage derived-set oracle.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::num::{fmt_rational, int, sqrt_bounds, ComplexRational, Rational};
use crate::opmodel::SpectrumKind;
use crate::ordinal::Ordinal;
use crate::specset::{segment_min_norm_sqr, Block, SpecSet};

/// Verification depth for identity checks.
pub const DEFAULT_IDENTITY_DEPTH: usize = 1000;
/// Depth for closure and oracle checks.
pub const DEFAULT_ORACLE_DEPTH: usize = 200;

const MAX_WITNESSES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagonalError {
    #[error("NotCountable: a diagonal realization needs a countable set")]
    Uncountable,
    #[error("EmptySpectrum: a diagonal realization needs a nonempty set")]
    Empty,
    #[error("CircleMeetsSet: the circle of radius {0} meets the entries")]
    CircleMeetsSource(String),
    #[error("NotZeroloid: acc of the {0} entries is not inside {{0}}")]
    NotZeroloid(&'static str),
    #[error("OverlappingSupport: both operators are nonzero at index {0}")]
    OverlappingSupport(usize),
    #[error("power must be at least 1")]
    ZeroPower,
    #[error("radius must be positive")]
    NonPositiveRadius,
}

type EntryFn = Arc<dyn Fn(usize) -> ComplexRational + Send + Sync>;

#[derive(Clone)]
enum Source {
    List(Vec<ComplexRational>),
    Set(SpecSet),
    Sequence(EntryFn),
    /// Entries of `base` on indices of the given parity, zero elsewhere.
    Parity(Box<DiagonalOperator>, usize),
}

/// Entrywise map applied after the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntryOp {
    /// `1/t` when `|t| > r`, else `0`.
    CutInverse(Rational),
    /// `1` when `|t| <= r`, else `0`.
    Indicator(Rational),
    Power(u32),
}

impl EntryOp {
    fn apply(&self, t: ComplexRational) -> ComplexRational {
        match self {
            EntryOp::CutInverse(r) => {
                if t.norm_sqr() > r * r {
                    t.inv().unwrap_or_else(ComplexRational::zero)
                } else {
                    ComplexRational::zero()
                }
            }
            EntryOp::Indicator(r) => {
                if t.norm_sqr() <= r * r {
                    ComplexRational::one()
                } else {
                    ComplexRational::zero()
                }
            }
            EntryOp::Power(m) => t.pow(*m),
        }
    }
}

/// A diagonal operator given by a lazily computed entry sequence.
#[derive(Clone)]
pub struct DiagonalOperator {
    source: Source,
    ops: Vec<EntryOp>,
    source_set: Option<SpecSet>,
}

impl fmt::Debug for DiagonalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let src = match &self.source {
            Source::List(v) => format!("list({})", v.len()),
            Source::Set(s) => format!("set({s})"),
            Source::Sequence(_) => "sequence".to_string(),
            Source::Parity(b, p) => format!("parity({p}, {b:?})"),
        };
        f.debug_struct("DiagonalOperator")
            .field("source", &src)
            .field("ops", &self.ops)
            .finish()
    }
}

impl DiagonalOperator {
    /// Canonical realization of a countable set: the entries follow the
    /// canonical enumeration, and a finite set gives a finite operator.
    pub fn realize(s: &SpecSet) -> Result<Self, DiagonalError> {
        if s.is_empty() {
            return Err(DiagonalError::Empty);
        }
        if !s.is_countable() {
            return Err(DiagonalError::Uncountable);
        }
        let finite = s.blocks().iter().all(|b| matches!(b, Block::Finite(_)));
        let source = if finite {
            Source::List(s.enumerate(usize::MAX))
        } else {
            Source::Set(s.clone())
        };
        Ok(DiagonalOperator {
            source,
            ops: Vec::new(),
            source_set: Some(s.clone()),
        })
    }

    /// Finite diagonal operator with the given entries.
    pub fn from_list(entries: Vec<ComplexRational>) -> Self {
        let set = SpecSet::finite(entries.iter().cloned());
        DiagonalOperator {
            source: Source::List(entries),
            ops: Vec::new(),
            source_set: Some(set),
        }
    }

    /// Infinite operator with entries `f(0), f(1), ...`. `closure`, when
    /// known, is the closure of the entry set.
    pub fn sequence(f: impl Fn(usize) -> ComplexRational + Send + Sync + 'static, closure: Option<SpecSet>) -> Self {
        DiagonalOperator {
            source: Source::Sequence(Arc::new(f)),
            ops: Vec::new(),
            source_set: closure,
        }
    }

    /// The zero operator on an infinite index set.
    pub fn zero() -> Self {
        Self::sequence(|_| ComplexRational::zero(), Some(SpecSet::point(ComplexRational::zero())))
    }

    /// Places the entries of `base` on the indices `2i + parity`, with zeros
    /// on the other indices.
    pub fn on_parity(base: DiagonalOperator, parity: usize) -> Self {
        let source_set = base
            .source_set
            .as_ref()
            .map(|s| s.union(&SpecSet::point(ComplexRational::zero())));
        DiagonalOperator {
            source: Source::Parity(Box::new(base), parity % 2),
            ops: Vec::new(),
            source_set,
        }
    }

    fn with_op(&self, op: EntryOp, source_set: Option<SpecSet>) -> Self {
        let mut out = self.clone();
        out.ops.push(op);
        out.source_set = source_set;
        out
    }

    pub fn source_set(&self) -> Option<&SpecSet> {
        self.source_set.as_ref()
    }

    pub fn ops(&self) -> &[EntryOp] {
        &self.ops
    }

    /// Number of entries, or `None` for an infinite index set.
    pub fn len(&self) -> Option<usize> {
        match &self.source {
            Source::List(v) => Some(v.len()),
            Source::Parity(b, _) => b.len().map(|n| 2 * n),
            Source::Set(_) | Source::Sequence(_) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// The first `depth` entries, fewer for a finite operator.
    pub fn prefix(&self, depth: usize) -> Vec<ComplexRational> {
        let raw: Vec<ComplexRational> = match &self.source {
            Source::List(v) => v.iter().take(depth).cloned().collect(),
            Source::Set(s) => s.enumerate(depth),
            Source::Sequence(f) => (0..depth).map(|i| f(i)).collect(),
            Source::Parity(base, parity) => {
                let inner = base.prefix(depth.div_ceil(2));
                let mut out = Vec::with_capacity(2 * inner.len());
                for e in inner {
                    if *parity == 0 {
                        out.push(e);
                        out.push(ComplexRational::zero());
                    } else {
                        out.push(ComplexRational::zero());
                        out.push(e);
                    }
                }
                out.truncate(depth);
                out
            }
        };
        raw.into_iter()
            .map(|t| self.ops.iter().fold(t, |acc, op| op.apply(acc)))
            .collect()
    }

    /// Indicator of the entries inside the closed disk of radius `r`.
    pub fn indicator(&self, r: &Rational) -> Self {
        let set = SpecSet::finite([ComplexRational::zero(), ComplexRational::one()]);
        self.with_op(EntryOp::Indicator(r.clone()), Some(set))
    }

    /// Entries raised to the power `m`.
    pub fn power(&self, m: u32) -> Result<Self, DiagonalError> {
        if m == 0 {
            return Err(DiagonalError::ZeroPower);
        }
        Ok(self.with_op(EntryOp::Power(m), None))
    }
}

/// Inverts the entries outside the disk of radius `r` and zeroes the rest.
pub fn drazin_like_inverse(t: &DiagonalOperator, r: &Rational) -> Result<DiagonalOperator, DiagonalError> {
    if r <= &Rational::zero() {
        return Err(DiagonalError::NonPositiveRadius);
    }
    if let Some(s) = t.source_set() {
        if s.circle_meets(r) {
            return Err(DiagonalError::CircleMeetsSource(fmt_rational(r)));
        }
    }
    Ok(t.with_op(EntryOp::CutInverse(r.clone()), None))
}

pub fn power_entries(t: &DiagonalOperator, m: u32) -> Result<DiagonalOperator, DiagonalError> {
    t.power(m)
}

/// Largest entrywise defect of one identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectCheck {
    pub name: &'static str,
    pub max_defect: Rational,
    /// Indices with a nonzero defect, at most sixteen.
    pub witnesses: Vec<usize>,
}

impl DefectCheck {
    fn new(name: &'static str) -> Self {
        DefectCheck {
            name,
            max_defect: Rational::zero(),
            witnesses: Vec::new(),
        }
    }

    fn record(&mut self, i: usize, diff: &ComplexRational) {
        let d = diff.max_abs_coord();
        if d.is_zero() {
            return;
        }
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(i);
        }
        if d > self.max_defect {
            self.max_defect = d;
        }
    }

    pub fn passed(&self) -> bool {
        self.max_defect.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub depth: usize,
    /// Entries actually compared; smaller than `depth` for finite operators.
    pub checked: usize,
    pub defects: Vec<DefectCheck>,
    pub symbolic: Vec<(&'static str, bool)>,
}

impl IdentityReport {
    pub fn defect_free(&self) -> bool {
        self.defects.iter().all(DefectCheck::passed)
    }

    pub fn symbolic_ok(&self, name: &str) -> bool {
        self.symbolic.iter().any(|(n, ok)| *n == name && *ok)
    }

    pub fn ok(&self) -> bool {
        self.defect_free() && self.symbolic.iter().all(|(_, ok)| *ok)
    }

    pub fn witnesses(&self) -> Vec<usize> {
        let mut w: Vec<usize> = self.defects.iter().flat_map(|d| d.witnesses.iter().copied()).collect();
        w.sort_unstable();
        w.dedup();
        w
    }
}

fn entry_set(t: &DiagonalOperator, depth: usize) -> SpecSet {
    t.source_set()
        .cloned()
        .unwrap_or_else(|| SpecSet::finite(t.prefix(depth)))
}

/// `σ_*` of a diagonal operator whose spectrum is `s`.
fn star_of_diagonal(s: &SpecSet, kind: SpectrumKind) -> SpecSet {
    match kind {
        SpectrumKind::Sigma => s.clone(),
        SpectrumKind::Browder | SpectrumKind::Drazin => s.acc(),
    }
}

fn predecessor_or_self(alpha: &Ordinal) -> Ordinal {
    alpha.predecessor().unwrap_or_else(|_| alpha.clone())
}

fn inside_outside(t: &DiagonalOperator, r: &Rational, depth: usize) -> (SpecSet, SpecSet) {
    let set = entry_set(t, depth);
    set.split_by_disk(r).unwrap_or_else(|_| (set.clone(), SpecSet::empty()))
}

/// Checks `s²t = s`, `(ts)² = ts` and `t - t²s = t·[|t| <= r]` entrywise,
/// then that `acc^{α-1}` of the inner part of `σ_*` lies in `{0}` and that
/// the closure of the defect entries is countable.
pub fn verify_identities(
    t: &DiagonalOperator,
    s: &DiagonalOperator,
    r: &Rational,
    alpha: &Ordinal,
    kind: SpectrumKind,
    depth: usize,
) -> IdentityReport {
    let ts = t.prefix(depth);
    let ss = s.prefix(depth);
    let mut s2t = DefectCheck::new("s2t_eq_s");
    let mut idem = DefectCheck::new("ts_idempotent");
    let mut cut = DefectCheck::new("defect_in_cut");
    let r2 = r * r;
    for (i, (t, s)) in ts.iter().zip(&ss).enumerate() {
        let st = s * t;
        s2t.record(i, &(&(s * &st) - s));
        idem.record(i, &(&(&st * &st) - &st));
        let defect = t - &(t * &st);
        let expected = if t.norm_sqr() <= r2 { t.clone() } else { ComplexRational::zero() };
        cut.record(i, &(&defect - &expected));
    }
    let (inside, _) = inside_outside(t, r, depth);
    let small = star_of_diagonal(&inside, kind).acc_alpha(&predecessor_or_self(alpha)).subset_of_zero();
    let closure = inside.union(&SpecSet::point(ComplexRational::zero()));
    IdentityReport {
        depth,
        checked: ts.len().min(ss.len()),
        defects: vec![s2t, idem, cut],
        symbolic: vec![("inside_acc_small", small), ("defect_closure_countable", closure.is_countable())],
    }
}

/// Checks the projection `P` onto the entries inside the cut: `P² = P`,
/// `TP = PT`, `T + P` is g^{α-1}-invertible and `acc^{α-1} σ_*(TP) ⊆ {0}`.
pub fn projection_clause(t: &DiagonalOperator, r: &Rational, alpha: &Ordinal, kind: SpectrumKind, depth: usize) -> IdentityReport {
    let p = t.indicator(r);
    let ts = t.prefix(depth);
    let ps = p.prefix(depth);
    let mut idem = DefectCheck::new("p_idempotent");
    let mut commute = DefectCheck::new("tp_commute");
    for (i, (t, p)) in ts.iter().zip(&ps).enumerate() {
        idem.record(i, &(&(p * p) - p));
        commute.record(i, &(&(t * p) - &(p * t)));
    }
    let pred = predecessor_or_self(alpha);
    let (inside, outside) = inside_outside(t, r, depth);
    let t_plus_p = outside.union(&inside.translate(&ComplexRational::one()));
    let invertible = !star_of_diagonal(&t_plus_p, kind)
        .acc_alpha(&pred)
        .member(&ComplexRational::zero());
    let tp = inside.union(&SpecSet::point(ComplexRational::zero()));
    let small = star_of_diagonal(&tp, kind).acc_alpha(&pred).subset_of_zero();
    IdentityReport {
        depth,
        checked: ts.len(),
        defects: vec![idem, commute],
        symbolic: vec![("t_plus_p", invertible), ("tp_small", small)],
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroloidReport {
    pub eps: Rational,
    /// `(depth, count of |t_i u_i| >= eps below depth)` at each checkpoint.
    pub counts: Vec<(usize, usize)>,
    pub stabilized: bool,
    /// Every product is bounded by the product of the largest moduli.
    pub bounded: bool,
    /// Every nonzero product below `eps` has a factor with `|·|² < eps`.
    pub factors_small: bool,
    /// Indices of small nonzero products with the factor (0 for `t`, 1 for
    /// `u`) found below the threshold.
    pub factor_witnesses: Vec<(usize, u8)>,
}

impl ZeroloidReport {
    pub fn final_count(&self) -> usize {
        self.counts.last().map(|c| c.1).unwrap_or(0)
    }

    pub fn ok(&self) -> bool {
        self.stabilized && self.bounded && self.factors_small
    }
}

fn require_zeroloid(t: &DiagonalOperator, name: &'static str) -> Result<(), DiagonalError> {
    match t.source_set() {
        Some(s) if !s.acc().subset_of_zero() => Err(DiagonalError::NotZeroloid(name)),
        _ => Ok(()),
    }
}

/// Counts the products `t_i u_i` of modulus at least `eps` at four
/// checkpoints up to `depth`.
pub fn zeroloid_product_test(t: &DiagonalOperator, u: &DiagonalOperator, eps: &Rational, depth: usize) -> Result<ZeroloidReport, DiagonalError> {
    if eps <= &Rational::zero() {
        return Err(DiagonalError::NonPositiveRadius);
    }
    require_zeroloid(t, "first")?;
    require_zeroloid(u, "second")?;
    let ts = t.prefix(depth);
    let us = u.prefix(depth);
    let n = ts.len().min(us.len());
    let eps2 = eps * eps;
    let products: Vec<ComplexRational> = (0..n).map(|i| &ts[i] * &us[i]).collect();
    let big: Vec<bool> = products.iter().map(|p| p.norm_sqr() >= eps2).collect();
    let checkpoints: Vec<usize> = [depth / 4, depth / 2, 3 * depth / 4, depth]
        .into_iter()
        .map(|d| d.min(n))
        .collect();
    let counts: Vec<(usize, usize)> = checkpoints
        .iter()
        .map(|&d| (d, big[..d].iter().filter(|b| **b).count()))
        .collect();
    let stabilized = counts.len() >= 2 && counts[counts.len() - 1].1 == counts[counts.len() - 2].1;
    let max_t = ts.iter().map(ComplexRational::norm_sqr).max().unwrap_or_default();
    let max_u = us.iter().map(ComplexRational::norm_sqr).max().unwrap_or_default();
    let bound = &max_t * &max_u;
    let bounded = products.iter().all(|p| p.norm_sqr() <= bound);
    let mut factors_small = true;
    let mut factor_witnesses = Vec::new();
    for i in 0..n {
        if big[i] || products[i].is_zero() {
            continue;
        }
        let which = if ts[i].norm_sqr() < *eps {
            Some(0)
        } else if us[i].norm_sqr() < *eps {
            Some(1)
        } else {
            None
        };
        match which {
            Some(w) if factor_witnesses.len() < MAX_WITNESSES => factor_witnesses.push((i, w)),
            Some(_) => {}
            None => factors_small = false,
        }
    }
    Ok(ZeroloidReport {
        eps: eps.clone(),
        counts,
        stabilized,
        bounded,
        factors_small,
        factor_witnesses,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalReport {
    pub identities: IdentityReport,
    /// Closure of the sum entries equals the union of the closures.
    pub closure_union: bool,
    pub radii: (Rational, Rational),
}

impl OrthogonalReport {
    pub fn ok(&self) -> bool {
        self.identities.defect_free() && self.closure_union
    }
}

fn cut_radius_for(t: &DiagonalOperator) -> Rational {
    let half = Rational::new(1.into(), 2.into());
    t.source_set()
        .and_then(crate::analysis::countable_spectral_set)
        .unwrap_or(half)
}

/// Checks `TR = RT = 0` and `(S + S')²(T + R) = S + S'` entrywise, where
/// `S` and `S'` are the cut inverses of `T` and `R`.
pub fn orthogonal_sum_test(t: &DiagonalOperator, r: &DiagonalOperator, depth: usize) -> Result<OrthogonalReport, DiagonalError> {
    let mut ts = t.prefix(depth);
    let mut rs = r.prefix(depth);
    let n = ts.len().max(rs.len());
    ts.resize(n, ComplexRational::zero());
    rs.resize(n, ComplexRational::zero());
    if let Some(i) = (0..n).find(|&i| !ts[i].is_zero() && !rs[i].is_zero()) {
        return Err(DiagonalError::OverlappingSupport(i));
    }
    let (rt, rr) = (cut_radius_for(t), cut_radius_for(r));
    let inverse = |x: &ComplexRational, radius: &Rational| EntryOp::CutInverse(radius.clone()).apply(x.clone());
    let mut product = DefectCheck::new("tr_zero");
    let mut sum = DefectCheck::new("sum_identity");
    for i in 0..n {
        product.record(i, &(&ts[i] * &rs[i]));
        let s = &inverse(&ts[i], &rt) + &inverse(&rs[i], &rr);
        let total = &ts[i] + &rs[i];
        sum.record(i, &(&(&(&s * &s) * &total) - &s));
    }
    let closure_union = match (t.source_set(), r.source_set()) {
        (Some(a), Some(b)) => {
            let u = a.union(b);
            (0..n).all(|i| u.member(&(&ts[i] + &rs[i])))
        }
        _ => true,
    };
    Ok(OrthogonalReport {
        identities: IdentityReport {
            depth,
            checked: n,
            defects: vec![product, sum],
            symbolic: Vec::new(),
        },
        closure_union,
        radii: (rt, rr),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerReport {
    pub m: u32,
    /// Power entries agree with repeated multiplication.
    pub exact: bool,
    /// `(j, #{|t_i| < 2^-j}, #{|t_i^m| < 2^-jm})` over the nonzero entries.
    pub counts: Vec<(u32, usize, usize)>,
}

impl PowerReport {
    pub fn ok(&self) -> bool {
        self.exact && self.counts.iter().all(|(_, a, b)| a == b)
    }

    /// Whether the base prefix has nonzero entries in every tested ball.
    pub fn base_accumulates(&self) -> bool {
        self.counts.iter().all(|(_, a, _)| *a > 0)
    }
}

/// Compares `T^m` with `T` near 0 at the radii `2^-j`, `j = 1..=levels`.
pub fn power_check(t: &DiagonalOperator, m: u32, depth: usize, levels: u32) -> Result<PowerReport, DiagonalError> {
    let p = power_entries(t, m)?;
    let base = t.prefix(depth);
    let pow = p.prefix(depth);
    let exact = base.len() == pow.len()
        && base.iter().zip(&pow).all(|(b, q)| {
            let mut acc = ComplexRational::one();
            for _ in 0..m {
                acc = &acc * b;
            }
            acc == *q
        });
    let counts = (1..=levels)
        .map(|j| {
            let eps2 = Rational::new(1.into(), num_bigint::BigInt::from(2).pow(2 * j));
            let eps2m = Rational::new(1.into(), num_bigint::BigInt::from(2).pow(2 * j * m));
            let a = base.iter().filter(|x| !x.is_zero() && x.norm_sqr() < eps2).count();
            let b = pow.iter().filter(|x| !x.is_zero() && x.norm_sqr() < eps2m).count();
            (j, a, b)
        })
        .collect();
    Ok(PowerReport { m, exact, counts })
}

/// Isolation radius of `q` within one block, `None` meaning unbounded.
/// A zero radius marks `q` as undecidable and never retained.
fn block_radius(b: &Block, q: &ComplexRational) -> Option<Rational> {
    let half = |d2: Rational| sqrt_bounds(&d2, 40).0 / int(2);
    match b {
        Block::Finite(ps) => ps
            .iter()
            .filter(|p| *p != q)
            .map(|p| half((p - q).norm_sqr()))
            .min(),
        Block::Tower(t) => {
            if let Some((_, width)) = t.locate(q) {
                return width.map(|w| w / int(8));
            }
            let (a, far) = t.hull();
            Some(half(segment_min_norm_sqr(&(&a - q), &(&far - q))))
        }
        Block::Perfect(sh) => {
            if sh.contains(q) {
                return None;
            }
            let lo = sh.translate(&-q).modulus_range().0.lower_bound(40);
            Some(lo / int(2))
        }
    }
}

/// Brute-force derived sets of the first `depth` enumerated points: stage
/// `j + 1` keeps the stage-`j` points that have another stage-`j` point
/// within their certified isolation radius. Points of perfect blocks are
/// always kept.
pub fn finite_stage_acc_oracle(s: &SpecSet, stages: usize, depth: usize) -> Vec<Vec<ComplexRational>> {
    let points = s.enumerate(depth);
    let info: Vec<(bool, Option<Rational>)> = points
        .iter()
        .map(|q| {
            let perfect = s.blocks().iter().any(|b| matches!(b, Block::Perfect(sh) if sh.contains(q)));
            let tau = s.blocks().iter().filter_map(|b| block_radius(b, q)).min();
            (perfect, tau)
        })
        .collect();
    let mut current: Vec<usize> = (0..points.len()).collect();
    let mut out = vec![points.clone()];
    for _ in 0..stages {
        let next: Vec<usize> = current
            .iter()
            .copied()
            .filter(|&i| {
                let (perfect, tau) = &info[i];
                if *perfect {
                    return true;
                }
                let tau2 = tau.as_ref().map(|t| t * t);
                if tau2.as_ref().is_some_and(Zero::is_zero) {
                    return false;
                }
                current.iter().any(|&j| {
                    j != i && tau2.as_ref().is_none_or(|t2| (&points[j] - &points[i]).norm_sqr() < *t2)
                })
            })
            .collect();
        out.push(next.iter().map(|&i| points[i].clone()).collect());
        current = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;
    use num_traits::One;
    use crate::specset::Direction;

    fn z(n: i64) -> ComplexRational {
        ComplexRational::from_ints(n, 0)
    }

    fn q(n: i64, d: i64) -> ComplexRational {
        ComplexRational::real(rat(n, d))
    }

    fn tower(rank: u64) -> SpecSet {
        SpecSet::tower(z(0), Ordinal::finite(rank), Rational::one(), Direction::east()).unwrap()
    }

    fn harmonic() -> DiagonalOperator {
        DiagonalOperator::sequence(|i| q(1, i as i64 + 1), None)
    }

    #[test]
    fn realize_examples() {
        let t = DiagonalOperator::realize(&SpecSet::finite([z(1), z(2)])).unwrap();
        assert_eq!(t.prefix(10), vec![z(1), z(2)]);
        let s = tower(1);
        let t = DiagonalOperator::realize(&s).unwrap();
        let entries = t.prefix(500);
        assert_eq!(entries.len(), 500);
        assert!(entries.contains(&z(0)));
        assert!(entries.iter().all(|e| s.member(e)));
        assert_eq!(DiagonalOperator::realize(&SpecSet::empty()).unwrap_err(), DiagonalError::Empty);
        let disk = SpecSet::disk(z(0), int(1)).unwrap();
        assert_eq!(DiagonalOperator::realize(&disk).unwrap_err(), DiagonalError::Uncountable);
    }

    #[test]
    fn cut_inverse_examples() {
        let t = DiagonalOperator::realize(&SpecSet::finite([z(2), q(1, 8)])).unwrap();
        let s = drazin_like_inverse(&t, &int(1)).unwrap();
        let pairs: Vec<_> = t.prefix(2).into_iter().zip(s.prefix(2)).collect();
        assert!(pairs.contains(&(z(2), q(1, 2))));
        assert!(pairs.contains(&(q(1, 8), z(0))));
        assert!(matches!(
            drazin_like_inverse(&t, &int(2)),
            Err(DiagonalError::CircleMeetsSource(_))
        ));
        let s = drazin_like_inverse(&t, &rat(1, 16)).unwrap();
        for (a, b) in t.prefix(2).iter().zip(s.prefix(2)) {
            assert_eq!(&(a * &b), &ComplexRational::one());
        }
    }

    #[test]
    fn tower_cut_inverts_outer_slots() {
        // Slot 1 leaf of the rank-1 tower sits at 5/8, the slot 2 leaf at 3/8.
        let t = DiagonalOperator::realize(&tower(1)).unwrap();
        let s = drazin_like_inverse(&t, &rat(1, 2)).unwrap();
        for (a, b) in t.prefix(50).iter().zip(s.prefix(50)) {
            if a.norm_sqr() > rat(1, 4) {
                assert_eq!(&(a * &b), &ComplexRational::one());
            } else {
                assert!(b.is_zero());
            }
        }
    }

    #[test]
    fn identities_hold_on_tower() {
        let t = DiagonalOperator::realize(&tower(2)).unwrap();
        let r = rat(3, 2);
        let s = drazin_like_inverse(&t, &r).unwrap();
        let rep = verify_identities(&t, &s, &r, &Ordinal::finite(3), SpectrumKind::Sigma, 1000);
        assert!(rep.ok(), "{rep:?}");
        assert_eq!(rep.checked, 1000);
        let rep = verify_identities(&t, &s, &r, &Ordinal::finite(2), SpectrumKind::Sigma, 100);
        assert!(rep.defect_free());
        assert!(!rep.symbolic_ok("inside_acc_small"));
    }

    #[test]
    fn invertible_diagonal_has_no_defect_part() {
        let t = DiagonalOperator::realize(&SpecSet::finite([z(2), z(3)])).unwrap();
        let s = drazin_like_inverse(&t, &int(1)).unwrap();
        let rep = verify_identities(&t, &s, &int(1), &Ordinal::one(), SpectrumKind::Sigma, 10);
        assert!(rep.ok());
        let rep = verify_identities(&t, &s, &int(1), &Ordinal::one(), SpectrumKind::Sigma, 0);
        assert!(rep.ok());
        assert_eq!(rep.checked, 0);
    }

    #[test]
    fn broken_inverse_is_reported() {
        let t = DiagonalOperator::realize(&SpecSet::finite([z(2), z(3)])).unwrap();
        let s = DiagonalOperator::from_list(vec![q(1, 2), q(1, 2)]);
        let rep = verify_identities(&t, &s, &int(1), &Ordinal::one(), SpectrumKind::Sigma, 10);
        assert!(!rep.defect_free());
        assert_eq!(rep.witnesses(), vec![1]);
    }

    #[test]
    fn projection_examples() {
        let t = DiagonalOperator::realize(&tower(1)).unwrap();
        let rep = projection_clause(&t, &rat(1, 2), &Ordinal::finite(2), SpectrumKind::Sigma, 200);
        assert!(rep.ok(), "{rep:?}");
        let inv = DiagonalOperator::realize(&SpecSet::finite([z(2), z(3)])).unwrap();
        let rep = projection_clause(&inv, &int(1), &Ordinal::one(), SpectrumKind::Sigma, 10);
        assert!(rep.ok());
        // Everything inside: T + P = T + I.
        let rep = projection_clause(&t, &int(2), &Ordinal::finite(2), SpectrumKind::Sigma, 200);
        assert!(rep.ok());
    }

    #[test]
    fn zeroloid_counts_match_inverse_square_root() {
        for (n, d) in [(1, 100), (1, 50), (3, 1000), (1, 7)] {
            let eps = rat(n, d);
            let rep = zeroloid_product_test(&harmonic(), &harmonic(), &eps, 1000).unwrap();
            // Count of i >= 1 with 1/i² >= eps, computed by integer search.
            let oracle = (1..).take_while(|i: &i64| rat(1, i * i) >= eps).count();
            assert_eq!(rep.final_count(), oracle);
            assert!(rep.ok());
        }
        let rep = zeroloid_product_test(&harmonic(), &DiagonalOperator::zero(), &rat(1, 100), 200).unwrap();
        assert_eq!(rep.final_count(), 0);
        let disk_like = DiagonalOperator::realize(&tower(2)).unwrap();
        assert_eq!(
            zeroloid_product_test(&disk_like, &harmonic(), &rat(1, 10), 10).unwrap_err(),
            DiagonalError::NotZeroloid("first")
        );
    }

    #[test]
    fn small_products_have_small_factors() {
        let rep = zeroloid_product_test(&harmonic(), &DiagonalOperator::sequence(|_| z(1), None), &rat(1, 10), 100).unwrap();
        assert!(rep.factors_small);
        assert!(rep.factor_witnesses.iter().all(|(_, w)| *w == 0));
    }

    #[test]
    fn orthogonal_sums() {
        let t = DiagonalOperator::on_parity(DiagonalOperator::realize(&tower(1)).unwrap(), 0);
        let r = DiagonalOperator::on_parity(DiagonalOperator::realize(&SpecSet::finite([z(2), z(3)])).unwrap(), 1);
        let rep = orthogonal_sum_test(&t, &r, 1000).unwrap();
        assert!(rep.ok(), "{rep:?}");
        let rep = orthogonal_sum_test(&t, &DiagonalOperator::zero(), 200).unwrap();
        assert!(rep.ok());
        let a = DiagonalOperator::from_list(vec![z(1), z(0)]);
        let b = DiagonalOperator::from_list(vec![z(0), z(2)]);
        assert!(orthogonal_sum_test(&a, &b, 10).unwrap().ok());
        assert_eq!(
            orthogonal_sum_test(&a, &a, 10).unwrap_err(),
            DiagonalError::OverlappingSupport(0)
        );
    }

    #[test]
    fn power_examples() {
        let rep = power_check(&harmonic(), 2, 300, 6).unwrap();
        assert!(rep.ok());
        assert!(rep.base_accumulates());
        let far = DiagonalOperator::from_list(vec![z(1), z(2), ComplexRational::from_ints(0, 3)]);
        let rep = power_check(&far, 3, 10, 4).unwrap();
        assert!(rep.ok());
        assert!(rep.counts.iter().all(|(_, a, b)| *a == 0 && *b == 0));
        assert_eq!(power_check(&far, 0, 10, 4).unwrap_err(), DiagonalError::ZeroPower);
    }

    #[test]
    fn oracle_examples() {
        let stages = finite_stage_acc_oracle(&SpecSet::finite([z(1), z(2)]), 1, 200);
        assert!(stages[1].is_empty());
        let stages = finite_stage_acc_oracle(&tower(1), 2, 200);
        assert_eq!(stages[1], vec![z(0)]);
        assert!(stages[2].is_empty());
        let s = tower(2);
        let stages = finite_stage_acc_oracle(&s, 3, 200);
        let acc = s.acc();
        assert!(stages[1].len() > 1);
        assert!(stages[1].iter().all(|p| acc.member(p)));
        assert_eq!(stages[2], vec![z(0)]);
        assert!(stages[3].is_empty());
    }

    #[test]
    fn oracle_keeps_perfect_points() {
        let s = SpecSet::disk(z(3), int(1)).unwrap().union(&tower(1));
        let stages = finite_stage_acc_oracle(&s, 2, 100);
        let kernel = s.perfect_kernel();
        assert!(stages[2].iter().all(|p| kernel.member(p) || p.is_zero()));
        assert!(stages[2].iter().any(|p| kernel.member(p)));
    }
}
