//! Gyrogroup computational algebra.
//!
//! A gyrogroup is a magma with a two-sided identity, two-sided inverses,
//! left gyroassociativity through a family of automorphisms `gyr[a, b]`,
//! and the left loop property. This crate provides:
//!
//! * concrete carriers: the complex unit disk under Möbius addition,
//!   finite Cayley tables, group adapters, and coordinatewise products;
//! * a seeded verification engine that checks the axioms and the standard
//!   cancellation identities, exhaustively on small finite carriers and by
//!   sampling elsewhere;
//! * subgyrogroup detection, generated closures, left-coset decompositions,
//!   quotient tables, and an escape probe for the no-small-subgyrogroup
//!   property;
//! * set-level operations (`A ⊕ B`, `⊖A`), neighborhood-chain validation,
//!   and the dyadic prenorm construction with the induced pseudometric and
//!   coset-space metric;
//! * a backtracking search for small gyrogroup tables.
//!
//! All randomized routines take an explicit seed and produce identical
//! results on identical inputs.
//!
//! ```
//! use gyrolab_core::subgyro::{left_cosets, quotient, subgyro_handle};
//! use gyrolab_core::{cyclic_group, verify_axioms, ElemSet, VerifyConfig};
//!
//! let z4 = cyclic_group(4)?;
//! assert!(verify_axioms(&z4, &VerifyConfig::default()).all_pass());
//!
//! let h = subgyro_handle(&z4, ElemSet::from_indices(4, &[0, 2])?)?;
//! let cosets = left_cosets(&z4, &h)?;
//! assert_eq!(cosets.blocks, vec![vec![0, 2], vec![1, 3]]);
//!
//! let q = quotient(&z4, &h)?;
//! assert_eq!(q.table.rows(), vec![vec![0, 1], vec![1, 0]]);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod carrier;
pub mod carriers;
pub mod prenorm;
pub mod report;
pub mod sets;
pub mod subgyro;
pub mod verify;

pub use carrier::{derived_gyration, CarrierDescriptor, Gyrogroup};
pub use carriers::mobius::MobiusDisk;
pub use carriers::product::ProductCarrier;
pub use carriers::search::{search_small, SearchOutcome};
pub use carriers::table::{
    cyclic_group, group_from_table, klein_four, FiniteGyrogroupTable, TableError,
};
pub use report::{CheckStatus, Counterexample, PropertyCheck, VerificationReport};
pub use sets::chain::{BallChain, ChainMode, FiniteChain};
pub use sets::disk::DiskSet;
pub use sets::ElemSet;
pub use subgyro::{CosetDecomposition, SubgyroHandle, TriState};
pub use verify::{gyr_consistency_check, is_degenerate_group, verify_axioms, VerifyConfig};
