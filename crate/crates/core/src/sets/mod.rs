//! Set-level gyrogroup operations.
//!
//! Finite carriers use exact index sets; the disk uses balls and sampled
//! clouds (see [`disk`]). Chain validation for both lanes lives in
//! [`chain`].

pub mod chain;
pub mod disk;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::carriers::table::FiniteGyrogroupTable;
use crate::report::{CheckStatus, Counterexample, PropertyCheck};
use crate::subgyro::{self, SubgyroHandle};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SetError {
    #[error("element {index} out of range for universe of size {n}")]
    OutOfRange { index: usize, n: usize },
    #[error("set over universe {set} used with carrier of order {carrier}")]
    CarrierMismatch { set: usize, carrier: usize },
    #[error("set must be nonempty")]
    EmptySet,
    #[error("chain must be nonempty")]
    EmptyChain,
    #[error("family conditions violated at index {index}: {reason}")]
    ConditionsViolated { index: usize, reason: String },
}

/// An exact subset of a finite carrier, as a bitset over element indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElemSet {
    n: usize,
    bits: Vec<u64>,
}

impl std::fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl ElemSet {
    pub fn empty(n: usize) -> Self {
        ElemSet {
            n,
            bits: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = ElemSet::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn singleton(n: usize, i: usize) -> Result<Self, SetError> {
        Self::from_indices(n, &[i])
    }

    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self, SetError> {
        let mut s = ElemSet::empty(n);
        for &i in indices {
            if i >= n {
                return Err(SetError::OutOfRange { index: i, n });
            }
            s.insert(i);
        }
        Ok(s)
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.n);
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.bits[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.contains(i))
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        debug_assert_eq!(self.n, other.n);
        ElemSet {
            n: self.n,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn intersect(&self, other: &ElemSet) -> ElemSet {
        debug_assert_eq!(self.n, other.n);
        ElemSet {
            n: self.n,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.n == other.n && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &ElemSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & b == 0)
    }
}

fn check_match(c: &FiniteGyrogroupTable, s: &ElemSet) -> Result<(), SetError> {
    if s.universe() != c.order() {
        return Err(SetError::CarrierMismatch {
            set: s.universe(),
            carrier: c.order(),
        });
    }
    Ok(())
}

/// `A ⊕ B = {a ⊕ b : a ∈ A, b ∈ B}`, exactly.
pub fn set_add(c: &FiniteGyrogroupTable, a: &ElemSet, b: &ElemSet) -> Result<ElemSet, SetError> {
    check_match(c, a)?;
    check_match(c, b)?;
    let mut out = ElemSet::empty(c.order());
    for x in a.iter() {
        for y in b.iter() {
            out.insert(c.op(x, y));
        }
    }
    Ok(out)
}

/// `⊖A = {⊖a : a ∈ A}`.
pub fn set_inv(c: &FiniteGyrogroupTable, a: &ElemSet) -> Result<ElemSet, SetError> {
    check_match(c, a)?;
    let mut out = ElemSet::empty(c.order());
    for x in a.iter() {
        out.insert(c.inv_of(x));
    }
    Ok(out)
}

/// Both sides of the disjointness equivalence
/// `(A ⊕ B) ∩ C = ∅  ⟺  B ∩ ((⊖A) ⊕ C) = ∅`, with the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointnessCheck {
    pub left_empty: bool,
    pub right_empty: bool,
    pub equivalent: bool,
}

/// Evaluates the disjointness equivalence exactly. Exact sets only; sampled
/// representations cannot decide emptiness.
pub fn disjointness_equivalence(
    c: &FiniteGyrogroupTable,
    a: &ElemSet,
    b: &ElemSet,
    set_c: &ElemSet,
) -> Result<DisjointnessCheck, SetError> {
    let left_empty = set_add(c, a, b)?.is_disjoint(set_c);
    let right_empty = b.is_disjoint(&set_add(c, &set_inv(c, a)?, set_c)?);
    Ok(DisjointnessCheck {
        left_empty,
        right_empty,
        equivalent: left_empty == right_empty,
    })
}

/// `⋂ₙ (Uₙ ⊕ A)` over the available chain levels — the closure of `A` in
/// the topology generated by the chain. For chains ending in `{0}` this is
/// `A` itself.
pub fn closure_via_chain(
    c: &FiniteGyrogroupTable,
    a: &ElemSet,
    chain: &chain::FiniteChain,
) -> Result<ElemSet, SetError> {
    check_match(c, a)?;
    let mut acc = ElemSet::full(c.order());
    for level in chain.sets() {
        check_match(c, level)?;
        acc = acc.intersect(&set_add(c, level, a)?);
    }
    Ok(acc)
}

/// Intersects a family of symmetric neighborhoods into a subgyrogroup.
///
/// Conditions: for every set `U` in the family there must be a companion
/// `V` with `V ⊕ V ⊆ U` and `⊖V ⊆ U`. The companion of each entry is the
/// next one; the last entry must pair with itself.
pub fn intersection_subgyrogroup(
    c: &FiniteGyrogroupTable,
    family: &[ElemSet],
) -> Result<SubgyroHandle, SetError> {
    if family.is_empty() {
        return Err(SetError::EmptyChain);
    }
    for (i, u) in family.iter().enumerate() {
        check_match(c, u)?;
        let v = family.get(i + 1).unwrap_or(&family[family.len() - 1]);
        let vv = set_add(c, v, v)?;
        if !vv.is_subset(u) {
            return Err(SetError::ConditionsViolated {
                index: i,
                reason: format!("companion sum {vv:?} escapes {u:?}"),
            });
        }
        if !set_inv(c, v)?.is_subset(u) {
            return Err(SetError::ConditionsViolated {
                index: i,
                reason: "companion inverse escapes".to_string(),
            });
        }
    }
    let mut h = family[0].clone();
    for u in &family[1..] {
        h = h.intersect(u);
    }
    let (ok, violation) = subgyro::is_subgyrogroup(c, &h).map_err(|_| SetError::EmptySet)?;
    if !ok {
        // The companion conditions force closure of the intersection, so a
        // violation here means the inputs were inconsistent.
        return Err(SetError::ConditionsViolated {
            index: 0,
            reason: format!("intersection is not closed: {violation:?}"),
        });
    }
    Ok(SubgyroHandle::verified(h))
}

/// Builds a pass/fail entry from an optional counterexample.
pub(crate) fn property_from(
    name: &str,
    checks: u64,
    cex: Option<Counterexample>,
    note: Option<String>,
) -> PropertyCheck {
    PropertyCheck {
        property: name.to_string(),
        status: if cex.is_some() {
            CheckStatus::Fail
        } else {
            CheckStatus::Pass
        },
        checks,
        counterexample: cex,
        max_residual: None,
        note,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carriers::table::cyclic_group;

    #[test]
    fn set_add_on_z4() {
        let z4 = cyclic_group(4).unwrap();
        let h = ElemSet::from_indices(4, &[0, 2]).unwrap();
        let sum = set_add(&z4, &h, &h).unwrap();
        assert_eq!(sum, h);
    }

    #[test]
    fn adding_identity_set_is_identity() {
        let z4 = cyclic_group(4).unwrap();
        let a = ElemSet::from_indices(4, &[1, 2]).unwrap();
        let zero = ElemSet::singleton(4, 0).unwrap();
        assert_eq!(set_add(&z4, &a, &zero).unwrap(), a);
    }

    #[test]
    fn set_inv_on_z4() {
        let z4 = cyclic_group(4).unwrap();
        let a = ElemSet::singleton(4, 1).unwrap();
        let expected = ElemSet::singleton(4, 3).unwrap();
        assert_eq!(set_inv(&z4, &a).unwrap(), expected);
    }

    #[test]
    fn disjointness_equivalence_examples() {
        let z4 = cyclic_group(4).unwrap();
        let a = ElemSet::singleton(4, 1).unwrap();
        let b = ElemSet::singleton(4, 1).unwrap();
        let c3 = ElemSet::singleton(4, 3).unwrap();
        let r = disjointness_equivalence(&z4, &a, &b, &c3).unwrap();
        assert!(r.left_empty && r.right_empty && r.equivalent);

        let c2 = ElemSet::singleton(4, 2).unwrap();
        let r = disjointness_equivalence(&z4, &a, &b, &c2).unwrap();
        assert!(!r.left_empty && !r.right_empty && r.equivalent);
    }

    #[test]
    fn closure_of_singleton_under_discrete_chain() {
        let z4 = cyclic_group(4).unwrap();
        let chain = chain::FiniteChain::new(vec![
            ElemSet::full(4),
            ElemSet::from_indices(4, &[0, 2]).unwrap(),
            ElemSet::singleton(4, 0).unwrap(),
        ])
        .unwrap();
        let a = ElemSet::singleton(4, 1).unwrap();
        assert_eq!(closure_via_chain(&z4, &a, &chain).unwrap(), a);

        let whole = ElemSet::full(4);
        assert_eq!(closure_via_chain(&z4, &whole, &chain).unwrap(), whole);
    }

    #[test]
    fn intersection_family_on_z4() {
        let z4 = cyclic_group(4).unwrap();
        let family = vec![ElemSet::full(4), ElemSet::from_indices(4, &[0, 2]).unwrap()];
        let h = intersection_subgyrogroup(&z4, &family).unwrap();
        assert_eq!(h.members().indices(), vec![0, 2]);

        let singleton = vec![ElemSet::singleton(4, 0).unwrap()];
        let h = intersection_subgyrogroup(&z4, &singleton).unwrap();
        assert_eq!(h.members().indices(), vec![0]);

        let bad = vec![ElemSet::from_indices(4, &[0, 1]).unwrap()];
        assert!(matches!(
            intersection_subgyrogroup(&z4, &bad),
            Err(SetError::ConditionsViolated { index: 0, .. })
        ));
    }

    #[test]
    fn mismatched_universe_is_rejected() {
        let z4 = cyclic_group(4).unwrap();
        let wrong = ElemSet::singleton(5, 0).unwrap();
        assert!(matches!(
            set_inv(&z4, &wrong),
            Err(SetError::CarrierMismatch { .. })
        ));
    }

    #[test]
    fn bitset_spans_multiple_words() {
        let mut s = ElemSet::empty(100);
        for i in [0usize, 1, 63, 64, 65, 99] {
            s.insert(i);
        }
        assert_eq!(s.len(), 6);
        assert_eq!(s.indices(), vec![0, 1, 63, 64, 65, 99]);
        assert!(s.contains(64) && !s.contains(62));

        let other = ElemSet::from_indices(100, &[63, 64, 98]).unwrap();
        assert_eq!(s.intersect(&other).indices(), vec![63, 64]);
        assert_eq!(s.union(&other).len(), 7);
        assert!(other.is_subset(&s.union(&other)));
        assert!(!s.is_disjoint(&other));
        assert!(s.is_disjoint(&ElemSet::from_indices(100, &[2, 66]).unwrap()));
    }

    #[test]
    fn set_ops_on_a_large_cyclic_carrier() {
        // Order 100 exercises the multi-word bitset through the table ops.
        let z100 = cyclic_group(100).unwrap();
        let evens = ElemSet::from_indices(100, &(0..100).step_by(2).collect::<Vec<_>>()).unwrap();
        let sum = set_add(&z100, &evens, &evens).unwrap();
        assert_eq!(sum, evens);
        assert_eq!(set_inv(&z100, &evens).unwrap(), evens);
    }
}
