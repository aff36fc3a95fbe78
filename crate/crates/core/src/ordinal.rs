//! Ordinals below epsilon-zero in Cantor normal form.
//!
//! An [`Ordinal`] is a finite sum `w^(e1)*c1 + w^(e2)*c2 + ...` with strictly
//! decreasing exponents (themselves ordinals) and positive coefficients. The
//! empty sum is zero. Every value has exactly one representation, so derived
//! equality and hashing are structural.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("{0} has no predecessor")]
    NoPredecessor(Ordinal),
    #[error("cannot subtract {subtrahend} from the left of smaller ordinal {minuend}")]
    SubtractTooLarge { minuend: Ordinal, subtrahend: Ordinal },
    #[error("{0} is not a limit ordinal")]
    NotLimit(Ordinal),
    #[error("fundamental sequences are indexed from 1")]
    ZeroIndex,
}

/// Shape of an ordinal with respect to the successor operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrdinalKind {
    Zero,
    Successor,
    Limit,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Term {
    exp: Ordinal,
    coeff: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::finite(1)
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![Term {
                    exp: Ordinal::zero(),
                    coeff: n,
                }],
            }
        }
    }

    /// The first infinite ordinal.
    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `w^(exp)`.
    pub fn omega_pow(exp: Ordinal) -> Self {
        Ordinal::monomial(exp, 1)
    }

    /// `w^(exp)*coeff`; zero when `coeff == 0`.
    pub fn monomial(exp: Ordinal, coeff: u64) -> Self {
        if coeff == 0 {
            return Ordinal::zero();
        }
        Ordinal {
            terms: vec![Term { exp, coeff }],
        }
    }

    /// Builds an ordinal from `(exponent, coefficient)` pairs, which may be in
    /// any order and may contain zero coefficients; the result is the ordinal
    /// sum of the monomials taken in the given order.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Ordinal, u64)>,
    {
        terms
            .into_iter()
            .fold(Ordinal::zero(), |acc, (e, c)| acc.add(&Ordinal::monomial(e, c)))
    }

    /// The `(exponent, coefficient)` pairs, highest exponent first.
    pub fn terms(&self) -> impl Iterator<Item = (&Ordinal, u64)> {
        self.terms.iter().map(|t| (&t.exp, t.coeff))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.as_finite().is_some()
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exp.is_zero() => Some(t.coeff),
            _ => None,
        }
    }

    pub fn classify(&self) -> OrdinalKind {
        match self.terms.last() {
            None => OrdinalKind::Zero,
            Some(t) if t.exp.is_zero() => OrdinalKind::Successor,
            Some(_) => OrdinalKind::Limit,
        }
    }

    pub fn is_limit(&self) -> bool {
        self.classify() == OrdinalKind::Limit
    }

    pub fn is_successor(&self) -> bool {
        self.classify() == OrdinalKind::Successor
    }

    pub fn successor(&self) -> Ordinal {
        let mut out = self.clone();
        match out.terms.last_mut() {
            Some(t) if t.exp.is_zero() => t.coeff = t.coeff.checked_add(1).expect("coefficient overflow"),
            _ => out.terms.push(Term {
                exp: Ordinal::zero(),
                coeff: 1,
            }),
        }
        out
    }

    pub fn predecessor(&self) -> Result<Ordinal, OrdinalError> {
        if !self.is_successor() {
            return Err(OrdinalError::NoPredecessor(self.clone()));
        }
        let mut out = self.clone();
        let last = out.terms.last_mut().expect("successor is nonempty");
        last.coeff -= 1;
        if last.coeff == 0 {
            out.terms.pop();
        }
        Ok(out)
    }

    /// Ordinal addition `self + rhs` (not commutative).
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let mut rest = rhs.terms.iter();
        for t in &self.terms {
            match t.exp.cmp(&lead.exp) {
                Ordering::Greater => terms.push(t.clone()),
                Ordering::Equal => {
                    terms.push(Term {
                        exp: t.exp.clone(),
                        coeff: t.coeff.checked_add(lead.coeff).expect("coefficient overflow"),
                    });
                    rest.next();
                    break;
                }
                Ordering::Less => break,
            }
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    /// The unique `d` with `g + d == self`.
    pub fn left_subtract(&self, g: &Ordinal) -> Result<Ordinal, OrdinalError> {
        if g > self {
            return Err(OrdinalError::SubtractTooLarge {
                minuend: self.clone(),
                subtrahend: g.clone(),
            });
        }
        for (i, a) in self.terms.iter().enumerate() {
            let Some(b) = g.terms.get(i) else {
                return Ok(Ordinal {
                    terms: self.terms[i..].to_vec(),
                });
            };
            if a == b {
                continue;
            }
            if a.exp > b.exp {
                return Ok(Ordinal {
                    terms: self.terms[i..].to_vec(),
                });
            }
            // Same exponent, larger coefficient on our side (g <= self).
            let mut terms = vec![Term {
                exp: a.exp.clone(),
                coeff: a.coeff - b.coeff,
            }];
            terms.extend_from_slice(&self.terms[i + 1..]);
            return Ok(Ordinal { terms });
        }
        Ok(Ordinal::zero())
    }

    /// The k-th element (k >= 1) of the standard fundamental sequence of a
    /// limit ordinal.
    pub fn fundamental_sequence(&self, k: u64) -> Result<Ordinal, OrdinalError> {
        if !self.is_limit() {
            return Err(OrdinalError::NotLimit(self.clone()));
        }
        if k == 0 {
            return Err(OrdinalError::ZeroIndex);
        }
        let mut prefix = self.clone();
        let last = prefix.terms.pop().expect("limit is nonempty");
        if last.coeff > 1 {
            prefix.terms.push(Term {
                exp: last.exp.clone(),
                coeff: last.coeff - 1,
            });
        }
        let tail = if last.exp.is_successor() {
            Ordinal::monomial(last.exp.predecessor()?, k)
        } else {
            Ordinal::omega_pow(last.exp.fundamental_sequence(k)?)
        };
        Ok(prefix.add(&tail))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::finite(n)
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a.exp.cmp(&b.exp).then(a.coeff.cmp(&b.coeff));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if t.exp.is_zero() {
                write!(f, "{}", t.coeff)?;
                continue;
            }
            if t.exp == Ordinal::one() {
                f.write_str("w")?;
            } else {
                write!(f, "w^({})", t.exp)?;
            }
            if t.coeff > 1 {
                write!(f, "*{}", t.coeff)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w() -> Ordinal {
        Ordinal::omega()
    }

    fn n(k: u64) -> Ordinal {
        Ordinal::finite(k)
    }

    fn w_pow(k: u64) -> Ordinal {
        Ordinal::omega_pow(n(k))
    }

    // Independent addition oracle: expand into unit monomials and repeatedly
    // absorb any w^e that is immediately followed by a strictly larger w^f.
    fn unit_terms(a: &Ordinal) -> Vec<Ordinal> {
        a.terms()
            .flat_map(|(e, c)| std::iter::repeat_n(e.clone(), c as usize))
            .collect()
    }

    fn oracle_add(a: &Ordinal, b: &Ordinal) -> Vec<Ordinal> {
        let mut units = unit_terms(a);
        units.extend(unit_terms(b));
        loop {
            let pos = units.windows(2).position(|p| p[0] < p[1]);
            match pos {
                Some(i) => {
                    units.remove(i);
                }
                None => return units,
            }
        }
    }

    #[test]
    fn compare_examples() {
        assert!(w() > n(5));
        let a = w_pow(2).add(&n(1));
        assert_eq!(a.cmp(&a.clone()), Ordering::Equal);
        let lhs = Ordinal::monomial(n(1), 3).add(&n(2));
        let rhs = Ordinal::monomial(n(1), 3).add(&n(7));
        assert!(lhs < rhs);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(n(0).classify(), OrdinalKind::Zero);
        assert_eq!(w().add(&n(3)).classify(), OrdinalKind::Successor);
        assert_eq!(w_pow(2).classify(), OrdinalKind::Limit);
    }

    #[test]
    fn successor_and_predecessor() {
        assert_eq!(w().add(&n(1)).predecessor().unwrap(), w());
        assert_eq!(n(0).successor(), n(1));
        assert!(matches!(w().predecessor(), Err(OrdinalError::NoPredecessor(_))));
        assert!(n(0).predecessor().is_err());
    }

    #[test]
    fn add_examples() {
        assert_eq!(n(1).add(&w()), w());
        assert_eq!(w().add(&n(1)).to_string(), "w+1");
        let lhs = w_pow(2).add(&w());
        let rhs = Ordinal::monomial(n(1), 2);
        let sum = lhs.add(&rhs);
        assert_eq!(sum, w_pow(2).add(&Ordinal::monomial(n(1), 3)));
        assert_eq!(unit_terms(&sum), oracle_add(&lhs, &rhs));
    }

    #[test]
    fn left_subtract_examples() {
        assert_eq!(w().add(&n(3)).left_subtract(&w()).unwrap(), n(3));
        let a = w_pow(2).add(&n(4));
        assert_eq!(a.left_subtract(&n(0)).unwrap(), a);
        let five_w = Ordinal::monomial(n(1), 5);
        assert_eq!(w_pow(2).left_subtract(&five_w).unwrap(), w_pow(2));
        assert_eq!(five_w.add(&w_pow(2)), w_pow(2));
        assert!(n(3).left_subtract(&w()).is_err());
    }

    #[test]
    fn fundamental_sequence_examples() {
        for k in 1..10 {
            assert_eq!(w().fundamental_sequence(k).unwrap(), n(k));
        }
        let x = w_pow(2).fundamental_sequence(3).unwrap();
        assert_eq!(x, Ordinal::monomial(n(1), 3));
        assert!(x < w_pow(2));
        assert!(x < w_pow(2).fundamental_sequence(4).unwrap());
        let y = Ordinal::monomial(n(1), 2).fundamental_sequence(4).unwrap();
        assert_eq!(y, w().add(&n(4)));
        assert!(y < Ordinal::monomial(n(1), 2));
        let ww = Ordinal::omega_pow(w());
        assert_eq!(ww.fundamental_sequence(3).unwrap(), w_pow(3));
        assert!(w().add(&n(1)).fundamental_sequence(1).is_err());
        assert!(w().fundamental_sequence(0).is_err());
    }

    #[test]
    fn display() {
        let a = Ordinal::monomial(w(), 2)
            .add(&Ordinal::monomial(n(1), 3))
            .add(&n(5));
        assert_eq!(a.to_string(), "w^(w)*2+w*3+5");
        assert_eq!(w_pow(2).add(&n(3)).to_string(), "w^(2)+3");
        assert_eq!(n(0).to_string(), "0");
    }

    pub(crate) fn arb_ordinal() -> impl Strategy<Value = Ordinal> {
        let leaf = (0u64..4).prop_map(Ordinal::finite);
        leaf.prop_recursive(3, 16, 4, |inner| {
            prop::collection::vec((inner, 0u64..4), 0..4).prop_map(Ordinal::from_terms)
        })
    }

    proptest! {
        #[test]
        fn compare_is_a_total_order(a in arb_ordinal(), b in arb_ordinal(), c in arb_ordinal()) {
            let ab = a.cmp(&b);
            prop_assert_eq!(ab.reverse(), b.cmp(&a));
            if a <= b && b <= c {
                prop_assert!(a <= c);
            }
        }

        #[test]
        fn add_is_associative(a in arb_ordinal(), b in arb_ordinal(), c in arb_ordinal()) {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.add(&Ordinal::zero()), a.clone());
            prop_assert_eq!(Ordinal::zero().add(&a), a);
        }

        #[test]
        fn add_matches_unit_oracle(a in arb_ordinal(), b in arb_ordinal()) {
            prop_assert_eq!(unit_terms(&a.add(&b)), oracle_add(&a, &b));
        }

        #[test]
        fn left_subtract_inverts_add(g in arb_ordinal(), d in arb_ordinal()) {
            prop_assert_eq!(g.add(&d).left_subtract(&g).unwrap(), d);
        }

        #[test]
        fn fundamental_sequences_are_increasing(a in arb_ordinal(), k in 1u64..20) {
            if a.is_limit() {
                let x = a.fundamental_sequence(k).unwrap();
                let y = a.fundamental_sequence(k + 1).unwrap();
                prop_assert!(x < y);
                prop_assert!(x < a);
            }
        }

        #[test]
        fn predecessor_inverts_successor(a in arb_ordinal()) {
            prop_assert_eq!(a.successor().predecessor().unwrap(), a);
        }
    }
}
