//! Subgyrogroups, generated closures, left cosets, quotients, and the
//! no-small-subgyrogroup escape probe.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::carrier::Gyrogroup;
use crate::carriers::mobius::MobiusDisk;
use crate::carriers::table::{FiniteGyrogroupTable, TableError};
use crate::sets::disk::DiskSet;
use crate::sets::{ElemSet, SetError};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SubgyroError {
    #[error(transparent)]
    Set(#[from] SetError),
    #[error("the member set is not a verified subgyrogroup")]
    NotASubgyrogroup,
    #[error("coset blocks do not partition the carrier: {reason}")]
    PartitionFailure { reason: String },
    #[error("quotient operation ill-defined: representatives ({a}, {b}) vs ({a_alt}, {b_alt})")]
    IllDefined {
        a: usize,
        a_alt: usize,
        b: usize,
        b_alt: usize,
    },
    #[error("quotient table failed validation: {0}")]
    QuotientInvalid(TableError),
    #[error("probe precondition violated: {reason}")]
    ProbeRejected { reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    Yes,
    No,
    Unchecked,
}

/// A subset of a finite carrier with its verification flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgyroHandle {
    members: ElemSet,
    pub is_subgyrogroup: TriState,
    pub is_l_subgyrogroup: TriState,
}

impl SubgyroHandle {
    pub fn unchecked(members: ElemSet) -> Self {
        SubgyroHandle {
            members,
            is_subgyrogroup: TriState::Unchecked,
            is_l_subgyrogroup: TriState::Unchecked,
        }
    }

    pub(crate) fn verified(members: ElemSet) -> Self {
        SubgyroHandle {
            members,
            is_subgyrogroup: TriState::Yes,
            is_l_subgyrogroup: TriState::Unchecked,
        }
    }

    pub fn members(&self) -> &ElemSet {
        &self.members
    }
}

/// Why a subset fails to be a subgyrogroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubgyroViolation {
    /// `⊖x` leaves the set.
    InverseEscapes { x: usize, inv: usize },
    /// `x ⊕ y` leaves the set.
    SumEscapes { x: usize, y: usize, sum: usize },
}

/// Closure test: a nonempty subset is a subgyrogroup exactly when it is
/// closed under `⊖` and `⊕`.
pub fn is_subgyrogroup(
    c: &FiniteGyrogroupTable,
    s: &ElemSet,
) -> Result<(bool, Option<SubgyroViolation>), SetError> {
    if s.universe() != c.order() {
        return Err(SetError::CarrierMismatch {
            set: s.universe(),
            carrier: c.order(),
        });
    }
    if s.is_empty() {
        return Err(SetError::EmptySet);
    }
    for x in s.iter() {
        for y in s.iter() {
            let sum = c.op(x, y);
            if !s.contains(sum) {
                return Ok((false, Some(SubgyroViolation::SumEscapes { x, y, sum })));
            }
        }
    }
    for x in s.iter() {
        let inv = c.inv_of(x);
        if !s.contains(inv) {
            return Ok((false, Some(SubgyroViolation::InverseEscapes { x, inv })));
        }
    }
    Ok((true, None))
}

/// Builds a handle with the subgyrogroup flag filled in.
pub fn subgyro_handle(c: &FiniteGyrogroupTable, s: ElemSet) -> Result<SubgyroHandle, SetError> {
    let (ok, _) = is_subgyrogroup(c, &s)?;
    Ok(SubgyroHandle {
        members: s,
        is_subgyrogroup: if ok { TriState::Yes } else { TriState::No },
        is_l_subgyrogroup: TriState::Unchecked,
    })
}

/// The least subset containing `seeds` closed under `⊕` and `⊖`. Finite
/// carriers always reach the fixpoint.
pub fn generated(c: &FiniteGyrogroupTable, seeds: &ElemSet) -> Result<SubgyroHandle, SetError> {
    if seeds.universe() != c.order() {
        return Err(SetError::CarrierMismatch {
            set: seeds.universe(),
            carrier: c.order(),
        });
    }
    if seeds.is_empty() {
        return Err(SetError::EmptySet);
    }
    let mut s = seeds.clone();
    loop {
        let mut next = s.clone();
        for x in s.iter() {
            next.insert(c.inv_of(x));
        }
        for x in s.iter() {
            for y in s.iter() {
                next.insert(c.op(x, y));
            }
        }
        if next == s {
            break;
        }
        s = next;
    }
    Ok(SubgyroHandle {
        members: s,
        is_subgyrogroup: TriState::Yes,
        is_l_subgyrogroup: TriState::Unchecked,
    })
}

/// Partial generated closure on the disk. Iterates
/// `S ← S ∪ ⊖S ∪ (S ⊕ S)` with tolerance deduplication, stopping before
/// the element count would exceed `cap`; `complete` is true only if a
/// fixpoint was reached.
#[derive(Debug, Clone)]
pub struct GeneratedDisk {
    pub elements: Vec<Complex64>,
    pub complete: bool,
    pub iterations: u32,
}

pub fn generated_disk(disk: &MobiusDisk, seeds: &[Complex64], cap: usize) -> GeneratedDisk {
    let mut current: Vec<Complex64> = Vec::new();
    for &z in seeds {
        push_dedup(disk, &mut current, z);
    }
    let mut iterations = 0;
    loop {
        let mut next = current.clone();
        for &x in &current {
            push_dedup(disk, &mut next, -x);
        }
        for &x in &current {
            for &y in &current {
                push_dedup(disk, &mut next, MobiusDisk::mobius_add(x, y));
            }
        }
        if next.len() == current.len() {
            return GeneratedDisk {
                elements: current,
                complete: true,
                iterations,
            };
        }
        if next.len() > cap {
            return GeneratedDisk {
                elements: current,
                complete: false,
                iterations,
            };
        }
        current = next;
        iterations += 1;
    }
}

fn push_dedup(disk: &MobiusDisk, cloud: &mut Vec<Complex64>, z: Complex64) {
    // Keep the cloud sorted by (modulus, argument) for determinism.
    if cloud.iter().any(|p| (p - z).norm() <= disk.tolerance()) {
        return;
    }
    let pos = cloud.partition_point(|p| (p.norm(), p.arg()) < (z.norm(), z.arg()));
    cloud.insert(pos, z);
}

/// Exhaustive L-subgyrogroup test: `gyr[a, h](H) = H` for every `a` in the
/// carrier and `h ∈ H`. Returns a witness `(a, h, x)` with
/// `gyr[a, h](x) ∉ H` on failure.
pub fn is_l_subgyrogroup(
    c: &FiniteGyrogroupTable,
    h: &ElemSet,
) -> (bool, Option<(usize, usize, usize)>) {
    for a in 0..c.order() {
        for hh in h.iter() {
            for x in h.iter() {
                if !h.contains(c.gyr_of(a, hh, x)) {
                    return (false, Some((a, hh, x)));
                }
            }
        }
    }
    (true, None)
}

/// Fills in the L flag of a handle (requires the subgyrogroup flag).
pub fn l_subgyro_handle(
    c: &FiniteGyrogroupTable,
    mut h: SubgyroHandle,
) -> Result<SubgyroHandle, SubgyroError> {
    if h.is_subgyrogroup != TriState::Yes {
        return Err(SubgyroError::NotASubgyrogroup);
    }
    let (ok, _) = is_l_subgyrogroup(c, &h.members);
    h.is_l_subgyrogroup = if ok { TriState::Yes } else { TriState::No };
    Ok(h)
}

/// One-sided sampled L-subgyrogroup verdict for disk subsets. Infinite
/// carriers never earn a definite "yes".
#[derive(Debug, Clone)]
pub enum LSubVerdictDisk {
    NoCounterexampleFound {
        samples: u64,
    },
    No {
        witness: (Complex64, Complex64, Complex64),
    },
}

pub fn l_sub_check_disk(
    disk: &MobiusDisk,
    h: &DiskSet,
    samples: u64,
    seed: u64,
) -> LSubVerdictDisk {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cloud = h.sample_cloud((samples as usize).min(512), seed);
    let mut done = 0u64;
    while done < samples {
        let a = disk.sample(&mut rng);
        for &hh in &cloud {
            for &x in &cloud {
                let image = disk.gyr(&a, &hh, &x);
                done += 1;
                if !h.contains(disk, image) {
                    return LSubVerdictDisk::No {
                        witness: (a, hh, x),
                    };
                }
                if done >= samples {
                    return LSubVerdictDisk::NoCounterexampleFound { samples: done };
                }
            }
        }
    }
    LSubVerdictDisk::NoCounterexampleFound { samples: done }
}

/// The left-coset partition `{a ⊕ H}` of a finite carrier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetDecomposition {
    pub subgroup: Vec<usize>,
    /// Minimal element index of each block, in ascending order.
    pub representatives: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
    /// Element index to block index.
    pub block_of: Vec<usize>,
}

impl CosetDecomposition {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

/// Decomposes the carrier into left cosets of `h`, choosing minimal element
/// indices as representatives. Fails with `PartitionFailure` when blocks
/// overlap or have unequal sizes.
pub fn left_cosets(
    c: &FiniteGyrogroupTable,
    h: &SubgyroHandle,
) -> Result<CosetDecomposition, SubgyroError> {
    if h.is_subgyrogroup != TriState::Yes {
        return Err(SubgyroError::NotASubgyrogroup);
    }
    let n = c.order();
    let h_size = h.members.len();
    let mut block_of = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        if block_of[a] != usize::MAX {
            continue;
        }
        let idx = blocks.len();
        let mut block = Vec::with_capacity(h_size);
        for hh in h.members.iter() {
            let e = c.op(a, hh);
            if block_of[e] != usize::MAX {
                return Err(SubgyroError::PartitionFailure {
                    reason: format!("element {e} lies in block {} and in {a} ⊕ H", block_of[e]),
                });
            }
            block_of[e] = idx;
            block.push(e);
        }
        if block.len() != h_size {
            return Err(SubgyroError::PartitionFailure {
                reason: format!(
                    "block of {a} has {} elements, expected {h_size}",
                    block.len()
                ),
            });
        }
        block.sort_unstable();
        debug_assert_eq!(block[0], a, "minimal unassigned index leads its own coset");
        representatives.push(a);
        blocks.push(block);
    }
    Ok(CosetDecomposition {
        subgroup: h.members.indices(),
        representatives,
        blocks,
        block_of,
    })
}

/// The quotient table on cosets together with the count of representative
/// pairs verified for well-definedness.
#[derive(Debug, Clone)]
pub struct QuotientResult {
    pub table: FiniteGyrogroupTable,
    pub decomposition: CosetDecomposition,
    pub pairs_verified: u64,
}

/// Builds the quotient `(a ⊕ H) ⊕ (b ⊕ H) = (a ⊕ b) ⊕ H` and verifies,
/// over every representative choice, that the block of `a' ⊕ b'` does not
/// depend on the choice.
pub fn quotient(
    c: &FiniteGyrogroupTable,
    h: &SubgyroHandle,
) -> Result<QuotientResult, SubgyroError> {
    let dec = left_cosets(c, h)?;
    let k = dec.block_count();
    let mut rows = vec![vec![0usize; k]; k];
    for (i, &ra) in dec.representatives.iter().enumerate() {
        for (j, &rb) in dec.representatives.iter().enumerate() {
            rows[i][j] = dec.block_of[c.op(ra, rb)];
        }
    }
    let mut pairs_verified = 0u64;
    for (i, block_a) in dec.blocks.iter().enumerate() {
        for (j, block_b) in dec.blocks.iter().enumerate() {
            let expected = rows[i][j];
            for &a_alt in block_a {
                for &b_alt in block_b {
                    pairs_verified += 1;
                    if dec.block_of[c.op(a_alt, b_alt)] != expected {
                        return Err(SubgyroError::IllDefined {
                            a: dec.representatives[i],
                            a_alt,
                            b: dec.representatives[j],
                            b_alt,
                        });
                    }
                }
            }
        }
    }
    let table = FiniteGyrogroupTable::from_table(rows).map_err(SubgyroError::QuotientInvalid)?;
    Ok(QuotientResult {
        table,
        decomposition: dec,
        pairs_verified,
    })
}

/// Outcome of the escape probe on a finite carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NssFiniteOutcome {
    /// The closure of `{x}` left `U` at this iteration.
    Escaped { step: u32, element: usize },
    /// The closure stabilized inside `U`; its value is a subgyrogroup.
    Contained { subgyrogroup: ElemSet },
}

/// Iterates the generated closure of `{x}` inside `u`, reporting the first
/// escape or the subgyrogroup it stabilizes to.
pub fn nss_probe_finite(
    c: &FiniteGyrogroupTable,
    x: usize,
    u: &ElemSet,
) -> Result<NssFiniteOutcome, SubgyroError> {
    if x == 0 {
        return Err(SubgyroError::ProbeRejected {
            reason: "probe point must differ from the identity".to_string(),
        });
    }
    if x >= c.order() || u.universe() != c.order() {
        return Err(SubgyroError::Set(SetError::CarrierMismatch {
            set: u.universe(),
            carrier: c.order(),
        }));
    }
    let mut s = ElemSet::singleton(c.order(), x)?;
    if !u.contains(x) {
        return Ok(NssFiniteOutcome::Escaped {
            step: 0,
            element: x,
        });
    }
    let mut step = 0;
    loop {
        step += 1;
        let mut next = s.clone();
        for a in s.iter() {
            next.insert(c.inv_of(a));
        }
        for a in s.iter() {
            for b in s.iter() {
                next.insert(c.op(a, b));
            }
        }
        if let Some(escape) = next.iter().find(|&e| !u.contains(e)) {
            return Ok(NssFiniteOutcome::Escaped {
                step,
                element: escape,
            });
        }
        if next == s {
            return Ok(NssFiniteOutcome::Contained { subgyrogroup: s });
        }
        s = next;
    }
}

/// Outcome of the escape probe on the disk.
#[derive(Debug, Clone, PartialEq)]
pub enum NssDiskOutcome {
    /// Escape at `step`; `moduli[k]` is the modulus after `k + 1` doublings.
    Escaped { step: u32, moduli: Vec<f64> },
    /// The cap was reached before escaping; inconclusive.
    CapExhausted { moduli: Vec<f64> },
}

/// Escape probe against the open ball of `radius`.
///
/// The extremal element of the step-k closure of `{x}` is the k-fold
/// self-double, whose modulus follows `r ↦ 2r / (1 + r²)` exactly, so the
/// escape step is decided by that recurrence. The sequence is strictly
/// increasing toward 1, hence every nonzero point escapes any radius
/// below 1 given enough steps.
pub fn nss_probe_disk(
    disk: &MobiusDisk,
    x: Complex64,
    radius: f64,
    cap: u32,
) -> Result<NssDiskOutcome, SubgyroError> {
    if !disk.contains(&x) {
        return Err(SubgyroError::ProbeRejected {
            reason: "probe point must lie inside the disk".to_string(),
        });
    }
    if x.norm() <= disk.tolerance() {
        return Err(SubgyroError::ProbeRejected {
            reason: "probe point must differ from the identity".to_string(),
        });
    }
    if !(radius > 0.0 && radius < 1.0) {
        return Err(SubgyroError::ProbeRejected {
            reason: format!("radius {radius} must lie in (0, 1)"),
        });
    }
    let mut r = x.norm();
    if r >= radius {
        return Ok(NssDiskOutcome::Escaped {
            step: 0,
            moduli: vec![],
        });
    }
    let mut moduli = Vec::new();
    for step in 1..=cap {
        r = 2.0 * r / (1.0 + r * r);
        moduli.push(r);
        if r >= radius {
            return Ok(NssDiskOutcome::Escaped { step, moduli });
        }
    }
    Ok(NssDiskOutcome::CapExhausted { moduli })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carriers::table::cyclic_group;

    #[test]
    fn subgyrogroup_detection_on_z4() {
        let z4 = cyclic_group(4).unwrap();
        let good = ElemSet::from_indices(4, &[0, 2]).unwrap();
        assert_eq!(is_subgyrogroup(&z4, &good).unwrap(), (true, None));

        let bad = ElemSet::from_indices(4, &[0, 1]).unwrap();
        let (ok, witness) = is_subgyrogroup(&z4, &bad).unwrap();
        assert!(!ok);
        assert_eq!(
            witness,
            Some(SubgyroViolation::SumEscapes { x: 1, y: 1, sum: 2 })
        );

        let trivial = ElemSet::singleton(4, 0).unwrap();
        assert_eq!(is_subgyrogroup(&z4, &trivial).unwrap(), (true, None));
    }

    #[test]
    fn empty_set_is_rejected() {
        let z4 = cyclic_group(4).unwrap();
        let empty = ElemSet::empty(4);
        assert!(matches!(
            is_subgyrogroup(&z4, &empty),
            Err(SetError::EmptySet)
        ));
    }

    #[test]
    fn generated_closures_in_z4() {
        let z4 = cyclic_group(4).unwrap();
        let from_one = generated(&z4, &ElemSet::singleton(4, 1).unwrap()).unwrap();
        assert_eq!(from_one.members().indices(), vec![0, 1, 2, 3]);
        let from_two = generated(&z4, &ElemSet::singleton(4, 2).unwrap()).unwrap();
        assert_eq!(from_two.members().indices(), vec![0, 2]);
    }

    #[test]
    fn generated_disk_partial_chain() {
        let disk = MobiusDisk::standard();
        let out = generated_disk(&disk, &[Complex64::new(0.1, 0.0)], 10);
        assert!(!out.complete);
        let moduli: Vec<f64> = out.elements.iter().map(|z| z.norm()).collect();
        let has = |target: f64| moduli.iter().any(|m| (m - target).abs() < 1e-4);
        assert!(has(0.1));
        assert!(has(0.19802));
        assert!(has(0.38110));
    }

    #[test]
    fn l_subgyrogroups_of_groups_are_trivial_checks() {
        let z4 = cyclic_group(4).unwrap();
        let h = ElemSet::from_indices(4, &[0, 2]).unwrap();
        assert!(is_l_subgyrogroup(&z4, &h).0);
        let trivial = ElemSet::singleton(4, 0).unwrap();
        assert!(is_l_subgyrogroup(&z4, &trivial).0);
    }

    #[test]
    fn cosets_of_z4_mod_two() {
        let z4 = cyclic_group(4).unwrap();
        let h = subgyro_handle(&z4, ElemSet::from_indices(4, &[0, 2]).unwrap()).unwrap();
        let dec = left_cosets(&z4, &h).unwrap();
        assert_eq!(dec.blocks, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(dec.representatives, vec![0, 1]);
    }

    #[test]
    fn whole_group_gives_single_block() {
        let z4 = cyclic_group(4).unwrap();
        let h = subgyro_handle(&z4, ElemSet::full(4)).unwrap();
        let dec = left_cosets(&z4, &h).unwrap();
        assert_eq!(dec.block_count(), 1);
    }

    #[test]
    fn trivial_subgroup_gives_singletons() {
        let z4 = cyclic_group(4).unwrap();
        let h = subgyro_handle(&z4, ElemSet::singleton(4, 0).unwrap()).unwrap();
        let dec = left_cosets(&z4, &h).unwrap();
        assert_eq!(dec.block_count(), 4);
        assert!(dec.blocks.iter().all(|b| b.len() == 1));
    }

    #[test]
    fn quotient_z4_by_two_is_z2() {
        let z4 = cyclic_group(4).unwrap();
        let h = subgyro_handle(&z4, ElemSet::from_indices(4, &[0, 2]).unwrap()).unwrap();
        let q = quotient(&z4, &h).unwrap();
        assert_eq!(q.table.rows(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(q.pairs_verified, 16);
    }

    #[test]
    fn quotient_by_whole_group_is_trivial() {
        let z4 = cyclic_group(4).unwrap();
        let h = subgyro_handle(&z4, ElemSet::full(4)).unwrap();
        let q = quotient(&z4, &h).unwrap();
        assert_eq!(q.table.order(), 1);
    }

    #[test]
    fn quotient_by_trivial_subgroup_is_the_carrier() {
        let z4 = cyclic_group(4).unwrap();
        let h = subgyro_handle(&z4, ElemSet::singleton(4, 0).unwrap()).unwrap();
        let q = quotient(&z4, &h).unwrap();
        assert_eq!(q.table.rows(), z4.rows());
    }

    #[test]
    fn nss_probe_contained_in_z4() {
        let z4 = cyclic_group(4).unwrap();
        let u = ElemSet::from_indices(4, &[0, 2]).unwrap();
        match nss_probe_finite(&z4, 2, &u).unwrap() {
            NssFiniteOutcome::Contained { subgyrogroup } => {
                assert_eq!(subgyrogroup.indices(), vec![0, 2]);
            }
            other => panic!("expected containment, got {other:?}"),
        }
    }

    #[test]
    fn nss_probe_escape_in_z4() {
        let z4 = cyclic_group(4).unwrap();
        let u = ElemSet::from_indices(4, &[0, 1]).unwrap();
        match nss_probe_finite(&z4, 1, &u).unwrap() {
            NssFiniteOutcome::Escaped { element, .. } => assert_eq!(element, 2),
            other => panic!("expected escape, got {other:?}"),
        }
    }

    #[test]
    fn nss_probe_disk_escapes_at_step_three() {
        let disk = MobiusDisk::standard();
        match nss_probe_disk(&disk, Complex64::new(0.1, 0.0), 0.5, 64).unwrap() {
            NssDiskOutcome::Escaped { step, moduli } => {
                assert_eq!(step, 3);
                assert!((moduli[0] - 0.19802).abs() < 1e-4);
                assert!((moduli[1] - 0.38110).abs() < 1e-4);
                assert!((moduli[2] - 0.66554).abs() < 1e-4);
            }
            other => panic!("expected escape, got {other:?}"),
        }
    }

    #[test]
    fn nss_probe_disk_rejects_identity() {
        let disk = MobiusDisk::standard();
        assert!(nss_probe_disk(&disk, Complex64::new(0.0, 0.0), 0.5, 8).is_err());
    }
}
