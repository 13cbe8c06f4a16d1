//! Axiom verification across carriers, fault injection, and determinism.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use gyrolab_core::carrier::CarrierDescriptor;
use gyrolab_core::carriers::product::materialize_product;
use gyrolab_core::carriers::table::cyclic_group;
use gyrolab_core::sets::disk::radius_add;
use gyrolab_core::{
    derived_gyration, gyr_consistency_check, is_degenerate_group, klein_four, verify_axioms,
    FiniteGyrogroupTable, Gyrogroup, MobiusDisk, ProductCarrier, VerifyConfig,
};

#[test]
fn mobius_passes_the_full_suite() {
    let disk = MobiusDisk::standard();
    let report = verify_axioms(&disk, &VerifyConfig::new(10_000, 7));
    assert!(report.all_pass(), "{}", report.summary());
    assert!(!report.exhaustive);
    for name in [
        "identity",
        "inverses",
        "gyroassociativity",
        "gyration_homomorphism",
        "gyration_bijectivity",
        "left_loop",
        "left_cancellation",
        "right_cancellation_a",
        "right_cancellation_b",
        "gyration_preserves_norm",
    ] {
        assert!(report.get(name).is_some(), "missing property {name}");
    }
}

#[test]
fn small_tables_are_verified_exhaustively() {
    for n in 1..=8 {
        let c = cyclic_group(n).unwrap();
        let report = verify_axioms(&c, &VerifyConfig::default());
        assert!(report.exhaustive);
        assert!(report.all_pass(), "Z{n}: {}", report.summary());
    }
    let k4 = klein_four();
    assert!(verify_axioms(&k4, &VerifyConfig::default()).all_pass());
}

#[test]
fn products_verify_and_report_degeneracy() {
    let z4 = cyclic_group(4).unwrap();
    let z2 = cyclic_group(2).unwrap();
    let table = materialize_product(&z4, &z2).unwrap();
    assert_eq!(table.order(), 8);
    assert!(verify_axioms(&table, &VerifyConfig::default()).all_pass());
    assert!(is_degenerate_group(&table, 1000, 0).degenerate);

    let mixed = ProductCarrier::new(cyclic_group(4).unwrap(), MobiusDisk::standard());
    let report = verify_axioms(&mixed, &VerifyConfig::new(2_000, 3));
    assert!(report.all_pass(), "{}", report.summary());
    let verdict = is_degenerate_group(&mixed, 2_000, 3);
    assert!(!verdict.degenerate);
    let (a, b, z) = verdict.witness.expect("witness for non-degeneracy");
    // The disagreement sits in the disk coordinate.
    let g = mixed.gyr(&a, &b, &z);
    assert_eq!(g.0, z.0);
    assert!((g.1 - z.1).norm() > 1e-9);
}

#[test]
fn corrupted_table_fails_with_counterexample() {
    // Swap two entries inside row 1 of Z4; rows stay permutations.
    let rows = vec![
        vec![0, 1, 2, 3],
        vec![1, 3, 2, 0],
        vec![2, 3, 0, 1],
        vec![3, 0, 1, 2],
    ];
    let bad = FiniteGyrogroupTable::new_unchecked(rows);
    let report = verify_axioms(&bad, &VerifyConfig::default());
    assert!(!report.all_pass());
    let failing: Vec<_> = report.failures().collect();
    assert!(!failing.is_empty());
    for f in failing {
        assert!(
            f.counterexample.is_some(),
            "failing property {} lacks a counterexample",
            f.property
        );
    }
}

/// A Möbius carrier whose closed-form gyration has the conjugate (wrong)
/// rotation factor.
struct BadGyrMobius(MobiusDisk);

impl Gyrogroup for BadGyrMobius {
    type Elem = Complex64;

    fn zero(&self) -> Complex64 {
        self.0.zero()
    }
    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        self.0.add(a, b)
    }
    fn neg(&self, a: &Complex64) -> Complex64 {
        self.0.neg(a)
    }
    fn distance(&self, a: &Complex64, b: &Complex64) -> f64 {
        self.0.distance(a, b)
    }
    fn tolerance(&self) -> f64 {
        self.0.tolerance()
    }
    fn contains(&self, a: &Complex64) -> bool {
        self.0.contains(a)
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Complex64 {
        self.0.sample(rng)
    }
    fn elements(&self) -> Option<Vec<Complex64>> {
        None
    }
    fn gyr(&self, a: &Complex64, b: &Complex64, z: &Complex64) -> Complex64 {
        MobiusDisk::gyr_factor(*a, *b).conj() * z
    }
    fn has_closed_gyr(&self) -> bool {
        true
    }
    fn descriptor(&self) -> CarrierDescriptor {
        CarrierDescriptor::new("mobius-disk-corrupted")
    }
}

#[test]
fn gyr_consistency_detects_fault_injection() {
    let good = MobiusDisk::standard();
    let report = gyr_consistency_check(&good, 10_000, 11, 1e-12);
    let check = report.get("gyration_closed_form_consistency").unwrap();
    assert!(check.passed());
    assert!(check.max_residual.unwrap() < 1e-12);

    let bad = BadGyrMobius(MobiusDisk::standard());
    let report = gyr_consistency_check(&bad, 10_000, 11, 1e-12);
    let check = report.get("gyration_closed_form_consistency").unwrap();
    assert!(!check.passed());
    assert!(check.counterexample.is_some());

    // Table carriers: the precomputed permutations agree with the formula.
    let z4 = cyclic_group(4).unwrap();
    assert!(gyr_consistency_check(&z4, 100, 0, 0.0).all_pass());
}

#[test]
fn identical_seed_and_budget_reproduce_the_report() {
    let disk = MobiusDisk::standard();
    let a = verify_axioms(&disk, &VerifyConfig::new(3_000, 42));
    let b = verify_axioms(&disk, &VerifyConfig::new(3_000, 42));
    assert_eq!(a, b);
    let c = verify_axioms(&disk, &VerifyConfig::new(3_000, 43));
    assert_ne!(a, c);
}

#[test]
fn mobius_gyration_hand_value() {
    let disk = MobiusDisk::standard();
    let a = Complex64::new(0.0, 0.5);
    let b = Complex64::new(0.5, 0.0);
    let z = Complex64::new(0.3, 0.0);
    let expected = Complex64::new(0.3 * 15.0 / 17.0, 0.3 * 8.0 / 17.0);
    assert!((disk.gyr(&a, &b, &z) - expected).norm() < 1e-12);
    assert!((derived_gyration(&disk, &a, &b, &z) - expected).norm() < 1e-12);
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn disk_point() -> impl Strategy<Value = Complex64> {
        // Polar sampling keeps points inside the guard region.
        (0.0f64..0.95, 0.0f64..std::f64::consts::TAU)
            .prop_map(|(r, theta)| Complex64::from_polar(r, theta))
    }

    proptest! {
        #[test]
        fn mobius_modulus_bound(a in disk_point(), b in disk_point()) {
            let sum = MobiusDisk::mobius_add(a, b);
            let bound = radius_add(a.norm(), b.norm());
            prop_assert!(sum.norm() <= bound + 1e-12);
        }

        #[test]
        fn mobius_left_cancellation(a in disk_point(), b in disk_point()) {
            let disk = MobiusDisk::standard();
            let back = disk.add(&disk.neg(&a), &disk.add(&a, &b));
            prop_assert!((back - b).norm() < 1e-9);
        }

        #[test]
        fn gyration_is_unimodular(a in disk_point(), b in disk_point(), z in disk_point()) {
            let disk = MobiusDisk::standard();
            let g = disk.gyr(&a, &b, &z);
            prop_assert!((g.norm() - z.norm()).abs() < 1e-12);
        }

        #[test]
        fn doubling_moduli_increase_and_stay_inside(r in 1e-6f64..0.999) {
            // r < 2r/(1 + r²) < 1 on (0, 1): the escape probe's recurrence
            // is strictly increasing and bounded.
            let doubled = 2.0 * r / (1.0 + r * r);
            prop_assert!(doubled > r);
            prop_assert!(doubled < 1.0);
        }

        #[test]
        fn product_gyration_is_coordinatewise(
            a in (0usize..4, disk_point()),
            b in (0usize..4, disk_point()),
            z in (0usize..4, disk_point()),
        ) {
            let p = ProductCarrier::new(cyclic_group(4).unwrap(), MobiusDisk::standard());
            let g = p.gyr(&a, &b, &z);
            let left = p.left().gyr(&a.0, &b.0, &z.0);
            let right = p.right().gyr(&a.1, &b.1, &z.1);
            prop_assert_eq!(g.0, left);
            prop_assert!((g.1 - right).norm() < 1e-15);
        }
    }
}
