//! Coordinatewise products of gyrogroup carriers.

use rand_chacha::ChaCha8Rng;

use crate::carrier::{CarrierDescriptor, Gyrogroup};
use crate::carriers::table::{FiniteGyrogroupTable, TableError};

/// `G = X × Y` with the coordinatewise operation and gyrations.
#[derive(Debug, Clone)]
pub struct ProductCarrier<L, R> {
    left: L,
    right: R,
}

impl<L: Gyrogroup, R: Gyrogroup> ProductCarrier<L, R> {
    pub fn new(left: L, right: R) -> Self {
        ProductCarrier { left, right }
    }

    pub fn left(&self) -> &L {
        &self.left
    }

    pub fn right(&self) -> &R {
        &self.right
    }
}

impl<L: Gyrogroup, R: Gyrogroup> Gyrogroup for ProductCarrier<L, R> {
    type Elem = (L::Elem, R::Elem);

    fn zero(&self) -> Self::Elem {
        (self.left.zero(), self.right.zero())
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.left.add(&a.0, &b.0), self.right.add(&a.1, &b.1))
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        (self.left.neg(&a.0), self.right.neg(&a.1))
    }

    fn distance(&self, a: &Self::Elem, b: &Self::Elem) -> f64 {
        self.left
            .distance(&a.0, &b.0)
            .max(self.right.distance(&a.1, &b.1))
    }

    fn tolerance(&self) -> f64 {
        self.left.tolerance().max(self.right.tolerance())
    }

    fn elems_eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.left.elems_eq(&a.0, &b.0) && self.right.elems_eq(&a.1, &b.1)
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        self.left.contains(&a.0) && self.right.contains(&a.1)
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Elem {
        let l = self.left.sample(rng);
        let r = self.right.sample(rng);
        (l, r)
    }

    fn elements(&self) -> Option<Vec<Self::Elem>> {
        let ls = self.left.elements()?;
        let rs = self.right.elements()?;
        let mut out = Vec::with_capacity(ls.len() * rs.len());
        for l in &ls {
            for r in &rs {
                out.push((l.clone(), r.clone()));
            }
        }
        Some(out)
    }

    fn gyr(&self, a: &Self::Elem, b: &Self::Elem, z: &Self::Elem) -> Self::Elem {
        (
            self.left.gyr(&a.0, &b.0, &z.0),
            self.right.gyr(&a.1, &b.1, &z.1),
        )
    }

    fn has_closed_gyr(&self) -> bool {
        self.left.has_closed_gyr() || self.right.has_closed_gyr()
    }

    fn label(&self, e: &Self::Elem) -> String {
        format!("({}, {})", self.left.label(&e.0), self.right.label(&e.1))
    }

    fn descriptor(&self) -> CarrierDescriptor {
        CarrierDescriptor::new("product")
            .with("left", self.left.descriptor().kind)
            .with("right", self.right.descriptor().kind)
    }
}

/// Largest combined order for which a product of finite tables is
/// materialized into a single table (validation is quartic in the order).
pub const MATERIALIZE_CAP: usize = 128;

/// Flattens a product of two finite tables into one validated table, with
/// `(i, j)` encoded as `i * |right| + j`. The identity `(0, 0)` maps to 0.
pub fn materialize_product(
    left: &FiniteGyrogroupTable,
    right: &FiniteGyrogroupTable,
) -> Result<FiniteGyrogroupTable, TableError> {
    let (nl, nr) = (left.order(), right.order());
    let n = nl * nr;
    if n > MATERIALIZE_CAP {
        return Err(TableError::TooLarge {
            n,
            cap: MATERIALIZE_CAP,
        });
    }
    let rows = (0..n)
        .map(|a| {
            let (a1, a2) = (a / nr, a % nr);
            (0..n)
                .map(|b| {
                    let (b1, b2) = (b / nr, b % nr);
                    left.op(a1, b1) * nr + right.op(a2, b2)
                })
                .collect()
        })
        .collect();
    FiniteGyrogroupTable::from_table(rows)
}
