//! The Möbius gyrogroup: the complex open unit disk under
//! `a ⊕ b = (a + b) / (1 + conj(a) b)`.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::carrier::{CarrierDescriptor, Gyrogroup};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MobiusError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("point {re}{im:+}i lies outside the open unit disk")]
    OutsideDisk { re: f64, im: f64 },
}

/// The complex open unit disk with Möbius addition.
///
/// `tolerance` drives element equality; `guard_radius` bounds the sampling
/// region away from the boundary, where the formulas lose conditioning.
#[derive(Debug, Clone)]
pub struct MobiusDisk {
    tolerance: f64,
    guard_radius: f64,
}

impl MobiusDisk {
    pub const DEFAULT_TOLERANCE: f64 = 1e-9;
    pub const DEFAULT_GUARD_RADIUS: f64 = 0.95;

    pub fn new(tolerance: f64, guard_radius: f64) -> Result<Self, MobiusError> {
        if !(tolerance > 0.0 && tolerance < 1.0) {
            return Err(MobiusError::InvalidParams(format!(
                "tolerance {tolerance} must lie in (0, 1)"
            )));
        }
        if !(guard_radius > 0.0 && guard_radius < 1.0) {
            return Err(MobiusError::InvalidParams(format!(
                "guard radius {guard_radius} must lie in (0, 1)"
            )));
        }
        Ok(MobiusDisk {
            tolerance,
            guard_radius,
        })
    }

    pub fn standard() -> Self {
        MobiusDisk::new(Self::DEFAULT_TOLERANCE, Self::DEFAULT_GUARD_RADIUS)
            .expect("default parameters are valid")
    }

    pub fn guard_radius(&self) -> f64 {
        self.guard_radius
    }

    /// Validates that `(re, im)` lies in the open unit disk.
    pub fn element(&self, re: f64, im: f64) -> Result<Complex64, MobiusError> {
        let z = Complex64::new(re, im);
        if z.norm() >= 1.0 || !z.re.is_finite() || !z.im.is_finite() {
            return Err(MobiusError::OutsideDisk { re, im });
        }
        Ok(z)
    }

    /// Möbius addition on raw complex numbers.
    pub fn mobius_add(a: Complex64, b: Complex64) -> Complex64 {
        (a + b) / (Complex64::new(1.0, 0.0) + a.conj() * b)
    }

    /// The closed-form gyration factor `(1 + a conj(b)) / (1 + conj(a) b)`.
    ///
    /// The factor is unimodular, so gyrations act as rotations.
    pub fn gyr_factor(a: Complex64, b: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        (one + a * b.conj()) / (one + a.conj() * b)
    }
}

impl Gyrogroup for MobiusDisk {
    type Elem = Complex64;

    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        Self::mobius_add(*a, *b)
    }

    fn neg(&self, a: &Complex64) -> Complex64 {
        -a
    }

    fn distance(&self, a: &Complex64, b: &Complex64) -> f64 {
        (a - b).norm()
    }

    fn tolerance(&self) -> f64 {
        self.tolerance
    }

    fn contains(&self, a: &Complex64) -> bool {
        a.norm() < 1.0
    }

    /// Rejection sampling, uniform over the closed disk of the guard radius.
    fn sample(&self, rng: &mut ChaCha8Rng) -> Complex64 {
        let g = self.guard_radius;
        loop {
            let re = rng.random_range(-g..=g);
            let im = rng.random_range(-g..=g);
            let z = Complex64::new(re, im);
            if z.norm() <= g {
                return z;
            }
        }
    }

    fn elements(&self) -> Option<Vec<Complex64>> {
        None
    }

    fn gyr(&self, a: &Complex64, b: &Complex64, z: &Complex64) -> Complex64 {
        Self::gyr_factor(*a, *b) * z
    }

    fn has_closed_gyr(&self) -> bool {
        true
    }

    fn label(&self, e: &Complex64) -> String {
        format!("{}{:+}i", e.re, e.im)
    }

    fn descriptor(&self) -> CarrierDescriptor {
        CarrierDescriptor::new("mobius-disk")
            .with("tolerance", self.tolerance)
            .with("guard_radius", self.guard_radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_plus_half() {
        let d = MobiusDisk::standard();
        let a = Complex64::new(0.5, 0.0);
        let sum = d.add(&a, &a);
        assert!((sum - Complex64::new(0.8, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_is_identity() {
        let d = MobiusDisk::standard();
        let b = Complex64::new(0.3, -0.2);
        assert_eq!(d.add(&d.zero(), &b), b);
        assert_eq!(d.add(&b, &d.zero()), b);
    }

    #[test]
    fn negation_is_inverse() {
        let d = MobiusDisk::standard();
        let z = Complex64::new(0.4, 0.1);
        let s = d.add(&z, &d.neg(&z));
        assert!(s.norm() < 1e-15);
    }

    #[test]
    fn gyr_factor_on_real_pair_is_one() {
        let a = Complex64::new(0.5, 0.0);
        let f = MobiusDisk::gyr_factor(a, a);
        assert!((f - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn gyr_factor_hand_value() {
        // a = 0.5i, b = 0.5 gives (1 + 0.25i) / (1 - 0.25i) = (15 + 8i) / 17.
        let a = Complex64::new(0.0, 0.5);
        let b = Complex64::new(0.5, 0.0);
        let f = MobiusDisk::gyr_factor(a, b);
        let expected = Complex64::new(15.0 / 17.0, 8.0 / 17.0);
        assert!((f - expected).norm() < 1e-15);
        assert!((f.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_boundary_points() {
        let d = MobiusDisk::standard();
        assert!(d.element(1.0, 0.0).is_err());
        assert!(d.element(0.8, 0.8).is_err());
        assert!(d.element(0.3, 0.2).is_ok());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(MobiusDisk::new(0.0, 0.95).is_err());
        assert!(MobiusDisk::new(1e-9, 1.0).is_err());
        assert!(MobiusDisk::new(1e-9, 0.0).is_err());
    }
}
