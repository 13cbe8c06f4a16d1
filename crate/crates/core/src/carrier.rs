//! The carrier abstraction shared by every concrete gyrogroup.

use std::collections::BTreeMap;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A gyrogroup carrier: a domain of elements together with the gyrogroup
/// operation, inversion, equality, and a deterministic sampler.
///
/// Implementations must guarantee that `zero` is representable and that
/// `add`/`neg` keep valid elements inside the domain. Equality is exact for
/// discrete carriers and tolerance-based for continuous ones; `distance`
/// backs both and doubles as the residual magnitude in reports.
pub trait Gyrogroup {
    type Elem: Clone + std::fmt::Debug;

    /// The identity element.
    fn zero(&self) -> Self::Elem;

    /// The gyrogroup operation `a ⊕ b`.
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// The inverse `⊖a`.
    fn neg(&self, a: &Self::Elem) -> Self::Elem;

    /// Distance between two elements; zero means identical.
    fn distance(&self, a: &Self::Elem, b: &Self::Elem) -> f64;

    /// Equality tolerance. Exact carriers use `0.0`.
    fn tolerance(&self) -> f64 {
        0.0
    }

    /// Element equality at the carrier's tolerance.
    fn elems_eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.distance(a, b) <= self.tolerance()
    }

    /// Whether `a` lies in the carrier's domain.
    fn contains(&self, a: &Self::Elem) -> bool;

    /// Draw one element, uniformly over the sampling region.
    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Elem;

    /// Every element, for finite carriers; `None` when the domain is
    /// infinite.
    fn elements(&self) -> Option<Vec<Self::Elem>>;

    /// The gyration `gyr[a, b](z)`. The default is the derived form; carriers
    /// with a closed form override this and report it via `has_closed_gyr`.
    fn gyr(&self, a: &Self::Elem, b: &Self::Elem, z: &Self::Elem) -> Self::Elem {
        derived_gyration(self, a, b, z)
    }

    /// True when `gyr` is backed by something other than the derived form.
    fn has_closed_gyr(&self) -> bool {
        false
    }

    /// Deterministic display form of an element, used in reports.
    fn label(&self, e: &Self::Elem) -> String {
        format!("{e:?}")
    }

    /// Machine-readable description of the carrier for report headers.
    fn descriptor(&self) -> CarrierDescriptor;
}

/// The gyration expressed through the operation itself:
/// `gyr[a, b](z) = ⊖(a ⊕ b) ⊕ (a ⊕ (b ⊕ z))`.
///
/// This is the single source of truth; closed forms are optimizations that
/// must agree with it (see [`crate::verify::gyr_consistency_check`]).
pub fn derived_gyration<C: Gyrogroup + ?Sized>(
    c: &C,
    a: &C::Elem,
    b: &C::Elem,
    z: &C::Elem,
) -> C::Elem {
    let ab = c.add(a, b);
    let inner = c.add(a, &c.add(b, z));
    c.add(&c.neg(&ab), &inner)
}

/// Identifies a carrier in serialized reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarrierDescriptor {
    pub kind: String,
    pub params: BTreeMap<String, String>,
}

impl CarrierDescriptor {
    pub fn new(kind: &str) -> Self {
        CarrierDescriptor {
            kind: kind.to_string(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}
