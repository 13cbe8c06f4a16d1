//! Subsets of the Möbius disk: centered balls with exact radius arithmetic
//! and sampled clouds with tolerance membership.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::carrier::Gyrogroup;
use crate::carriers::mobius::MobiusDisk;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DiskSetError {
    #[error("ball radius {0} must lie in (0, 1]")]
    BadRadius(f64),
    #[error("cloud must be nonempty")]
    EmptyCloud,
}

/// The modulus of the extremal Möbius sum of two centered balls:
/// `|a ⊕ b| ≤ (|a| + |b|) / (1 + |a||b|)`, attained on aligned real points.
/// Centered balls therefore compose exactly: `B(r) ⊕ B(s) = B(radd(r, s))`.
pub fn radius_add(r: f64, s: f64) -> f64 {
    ((r + s) / (1.0 + r * s)).min(1.0)
}

/// A subset of the disk.
///
/// `Ball` is the closed centered ball `{ |z| <= radius }` with exact
/// membership and exact behavior under `⊕` and `⊖`. `Cloud` is a sampled
/// set; membership means lying within the carrier tolerance of some cloud
/// point, and every verdict derived from a cloud is one-sided.
#[derive(Debug, Clone, PartialEq)]
pub enum DiskSet {
    Ball { radius: f64 },
    Cloud { points: Vec<Complex64> },
}

impl DiskSet {
    pub fn ball(radius: f64) -> Result<Self, DiskSetError> {
        if !(radius > 0.0 && radius <= 1.0) {
            return Err(DiskSetError::BadRadius(radius));
        }
        Ok(DiskSet::Ball { radius })
    }

    pub fn cloud(mut points: Vec<Complex64>) -> Result<Self, DiskSetError> {
        if points.is_empty() {
            return Err(DiskSetError::EmptyCloud);
        }
        sort_points(&mut points);
        Ok(DiskSet::Cloud { points })
    }

    pub fn radius(&self) -> Option<f64> {
        match self {
            DiskSet::Ball { radius } => Some(*radius),
            DiskSet::Cloud { .. } => None,
        }
    }

    pub fn contains(&self, disk: &MobiusDisk, z: Complex64) -> bool {
        match self {
            DiskSet::Ball { radius } => z.norm() <= radius + disk.tolerance(),
            DiskSet::Cloud { points } => points.iter().any(|p| (p - z).norm() <= disk.tolerance()),
        }
    }

    /// A deterministic sample cloud of this set: `count` seeded draws plus
    /// the identity (and the exact points for clouds).
    pub fn sample_cloud(&self, count: usize, seed: u64) -> Vec<Complex64> {
        match self {
            DiskSet::Ball { radius } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut pts = Vec::with_capacity(count + 1);
                pts.push(Complex64::new(0.0, 0.0));
                while pts.len() < count + 1 {
                    let re = rand::Rng::random_range(&mut rng, -radius..=*radius);
                    let im = rand::Rng::random_range(&mut rng, -radius..=*radius);
                    let z = Complex64::new(re, im);
                    if z.norm() <= *radius {
                        pts.push(z);
                    }
                }
                sort_points(&mut pts);
                pts
            }
            DiskSet::Cloud { points } => points.clone(),
        }
    }
}

fn sort_points(points: &mut [Complex64]) {
    points.sort_by(|a, b| {
        a.norm()
            .total_cmp(&b.norm())
            .then(a.arg().total_cmp(&b.arg()))
    });
}

/// `A ⊕ B` on the disk. Two balls combine exactly; any cloud operand
/// produces a cloud of pairwise sums (`resolution` draws per ball).
pub fn disk_set_add(
    disk: &MobiusDisk,
    a: &DiskSet,
    b: &DiskSet,
    resolution: usize,
    seed: u64,
) -> DiskSet {
    if let (DiskSet::Ball { radius: r }, DiskSet::Ball { radius: s }) = (a, b) {
        return DiskSet::Ball {
            radius: radius_add(*r, *s),
        };
    }
    let pa = a.sample_cloud(resolution, seed);
    let pb = b.sample_cloud(resolution, seed.wrapping_add(1));
    let mut sums = Vec::with_capacity(pa.len() * pb.len());
    for x in &pa {
        for y in &pb {
            sums.push(MobiusDisk::mobius_add(*x, *y));
        }
    }
    sort_points(&mut sums);
    sums.dedup_by(|a, b| (*a - *b).norm() <= disk.tolerance());
    DiskSet::Cloud { points: sums }
}

/// `⊖A`; balls are symmetric, clouds negate pointwise.
pub fn disk_set_inv(a: &DiskSet) -> DiskSet {
    match a {
        DiskSet::Ball { radius } => DiskSet::Ball { radius: *radius },
        DiskSet::Cloud { points } => {
            let mut negated: Vec<Complex64> = points.iter().map(|p| -p).collect();
            sort_points(&mut negated);
            DiskSet::Cloud { points: negated }
        }
    }
}

/// Sampled closure of `A` through a chain of balls: intersects
/// `Uₙ ⊕ A` over the chain levels, acting on a cloud of `A`. One-sided,
/// like every cloud verdict: the result is a superset of the cloud of `A`
/// up to the chain tolerance.
pub fn disk_closure_via_chain(
    disk: &MobiusDisk,
    a: &DiskSet,
    chain_radii: &[f64],
    resolution: usize,
    seed: u64,
) -> Result<DiskSet, DiskSetError> {
    if chain_radii.is_empty() {
        return Err(DiskSetError::EmptyCloud);
    }
    let base = a.sample_cloud(resolution, seed);
    let mut kept = base;
    for (i, &r) in chain_radii.iter().enumerate() {
        let level = DiskSet::ball(r)?;
        let shifted = disk_set_add(
            disk,
            &level,
            &DiskSet::cloud(kept.clone())?,
            resolution,
            seed.wrapping_add(i as u64 + 1),
        );
        kept.retain(|z| shifted.contains(disk, *z));
        if kept.is_empty() {
            break;
        }
    }
    DiskSet::cloud(kept).map_err(|_| DiskSetError::EmptyCloud)
}
