//! Neighborhood chains at the identity and their validation.
//!
//! A chain is a nested list `U₀ ⊇ U₁ ⊇ …` of symmetric sets containing 0.
//! Validation checks the structural conditions plus a mode-specific
//! multiplicative condition:
//!
//! * prenorm mode: `Uₙ₊₁ ⊕ Uₙ₊₁ ⊆ Uₙ` — the hypothesis of the dyadic
//!   prenorm construction;
//! * base-at-H mode: `Vₙ₊₁ ⊕ Vₙ₊₁ ⊆ Vₙ ∩ Uₙ` against a reference chain,
//!   whose intersection then yields a subgyrogroup the chain is a base at;
//! * invariant-set mode: `Vₙ₊₁ ⊕ Vₙ₊₁ ⊆ Vₙ` plus `F ⊕ Vₙ ⊆ Uₙ`, whose
//!   intersection `P` satisfies `0 ∈ P` and `F ⊕ P ⊆ F`.
//!
//! Finite chains are validated exactly; ball chains on the disk use exact
//! radius arithmetic for the inclusion conditions and seeded samples for
//! gyration invariance.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::carrier::Gyrogroup;
use crate::carriers::mobius::MobiusDisk;
use crate::carriers::table::FiniteGyrogroupTable;
use crate::report::{Counterexample, VerificationReport};
use crate::sets::disk::{radius_add, DiskSet, DiskSetError};
use crate::sets::{property_from, set_add, set_inv, ElemSet, SetError};
use crate::subgyro;

/// A stabilizing chain of exact sets: levels past the end repeat the last
/// set forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteChain {
    sets: Vec<ElemSet>,
}

impl FiniteChain {
    pub fn new(sets: Vec<ElemSet>) -> Result<Self, SetError> {
        if sets.is_empty() {
            return Err(SetError::EmptyChain);
        }
        Ok(FiniteChain { sets })
    }

    pub fn sets(&self) -> &[ElemSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Level `n`, with the stabilized tail extended indefinitely.
    pub fn level(&self, n: usize) -> &ElemSet {
        self.sets.get(n).unwrap_or_else(|| self.bottom())
    }

    /// The stabilized final set; the construction's `P = ⋂ₙ Uₙ`.
    pub fn bottom(&self) -> &ElemSet {
        self.sets.last().expect("chain is nonempty")
    }
}

/// A chain of centered closed balls on the disk, one radius per level.
/// Disk chains do not stabilize, so levels beyond the stored depth are
/// unavailable rather than repeated.
#[derive(Debug, Clone, PartialEq)]
pub struct BallChain {
    radii: Vec<f64>,
}

impl BallChain {
    pub fn new(radii: Vec<f64>) -> Result<Self, DiskSetError> {
        if radii.is_empty() {
            return Err(DiskSetError::EmptyCloud);
        }
        for &r in &radii {
            if !(r > 0.0 && r <= 1.0) {
                return Err(DiskSetError::BadRadius(r));
            }
        }
        Ok(BallChain { radii })
    }

    /// Radii `r₀ · ratioⁿ`.
    pub fn geometric(r0: f64, ratio: f64, len: usize) -> Result<Self, DiskSetError> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(DiskSetError::BadRadius(ratio));
        }
        BallChain::new((0..len.max(1)).map(|n| r0 * ratio.powi(n as i32)).collect())
    }

    /// Radii `1/n` (with the level-0 ball spanning the whole disk).
    pub fn harmonic(len: usize) -> Self {
        BallChain {
            radii: (0..len.max(1))
                .map(|n| if n == 0 { 1.0 } else { 1.0 / n as f64 })
                .collect(),
        }
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn radius(&self, n: usize) -> Option<f64> {
        self.radii.get(n).copied()
    }
}

/// What a chain is validated for.
#[derive(Debug, Clone, Copy)]
pub enum ChainMode<'a, Chain, Set> {
    Prenorm,
    BaseAt { base: &'a Chain },
    InvariantSet { base: &'a Chain, f: &'a Set },
}

pub type FiniteChainMode<'a> = ChainMode<'a, FiniteChain, ElemSet>;
pub type BallChainMode<'a> = ChainMode<'a, BallChain, DiskSet>;

/// Exact validation of a finite chain, one report entry per condition.
pub fn validate_finite_chain(
    c: &FiniteGyrogroupTable,
    chain: &FiniteChain,
    mode: FiniteChainMode<'_>,
) -> VerificationReport {
    let mut report = VerificationReport::new(0, true);
    let n_levels = chain.len();

    // 0 ∈ Uₙ for every level.
    let mut cex = None;
    for (i, u) in chain.sets().iter().enumerate() {
        if !u.contains(0) {
            cex = Some(Counterexample {
                elements: vec![format!("level {i}")],
                residual: 1.0,
            });
            break;
        }
    }
    report.push(property_from("contains_zero", n_levels as u64, cex, None));

    // ⊖Uₙ = Uₙ.
    let mut cex = None;
    for (i, u) in chain.sets().iter().enumerate() {
        match set_inv(c, u) {
            Ok(inv) if inv == *u => {}
            _ => {
                cex = Some(Counterexample {
                    elements: vec![format!("level {i}")],
                    residual: 1.0,
                });
                break;
            }
        }
    }
    report.push(property_from("symmetric", n_levels as u64, cex, None));

    // Uₙ₊₁ ⊆ Uₙ.
    let mut cex = None;
    for i in 0..n_levels.saturating_sub(1) {
        if !chain.level(i + 1).is_subset(chain.level(i)) {
            cex = Some(Counterexample {
                elements: vec![format!("level {}", i + 1)],
                residual: 1.0,
            });
            break;
        }
    }
    report.push(property_from(
        "nested",
        n_levels.saturating_sub(1) as u64,
        cex,
        None,
    ));

    // Mode-specific multiplicative condition. The final set must absorb
    // itself: finite chains stabilize, so the wrap-around check covers the
    // repeated tail.
    let square_target = |i: usize| -> Result<ElemSet, SetError> {
        match mode {
            ChainMode::Prenorm => Ok(chain.level(i).clone()),
            ChainMode::BaseAt { base } => Ok(chain.level(i).intersect(base.level(i))),
            ChainMode::InvariantSet { .. } => Ok(chain.level(i).clone()),
        }
    };
    let mut cex = None;
    let mut checks = 0u64;
    for i in 0..n_levels {
        checks += 1;
        let v = chain.level(i + 1);
        let target = match square_target(i) {
            Ok(t) => t,
            Err(_) => {
                cex = Some(Counterexample {
                    elements: vec![format!("level {i}")],
                    residual: 1.0,
                });
                break;
            }
        };
        match set_add(c, v, v) {
            Ok(vv) if vv.is_subset(&target) => {}
            _ => {
                cex = Some(Counterexample {
                    elements: vec![format!("level {}", i + 1), format!("target level {i}")],
                    residual: 1.0,
                });
                break;
            }
        }
    }
    report.push(property_from("square_condition", checks, cex, None));

    // Invariant-set mode: F ⊕ Vₙ ⊆ Uₙ and the conclusion 0 ∈ P, F ⊕ P ⊆ F.
    if let ChainMode::InvariantSet { base, f } = mode {
        let mut cex = None;
        let mut checks = 0u64;
        for i in 0..n_levels {
            checks += 1;
            match set_add(c, f, chain.level(i)) {
                Ok(fv) if fv.is_subset(base.level(i)) => {}
                _ => {
                    cex = Some(Counterexample {
                        elements: vec![format!("level {i}")],
                        residual: 1.0,
                    });
                    break;
                }
            }
        }
        report.push(property_from("translate_condition", checks, cex, None));

        let p = chain.bottom();
        let conclusion =
            p.contains(0) && set_add(c, f, p).map(|fp| fp.is_subset(f)).unwrap_or(false);
        report.push(property_from(
            "invariant_conclusion",
            2,
            (!conclusion).then(|| Counterexample {
                elements: vec!["P = chain bottom".to_string()],
                residual: 1.0,
            }),
            Some("0 ∈ P and F ⊕ P ⊆ F".to_string()),
        ));
    }

    // Base-at-H mode conclusions: H = ⋂Vₙ is an L-subgyrogroup inside ⋂Uₙ.
    if let ChainMode::BaseAt { base } = mode {
        let mut h = chain.sets()[0].clone();
        for u in &chain.sets()[1..] {
            h = h.intersect(u);
        }
        let sub_ok = subgyro::is_subgyrogroup(c, &h)
            .map(|(ok, _)| ok)
            .unwrap_or(false);
        report.push(property_from(
            "intersection_subgyrogroup",
            1,
            (!sub_ok).then(|| Counterexample {
                elements: vec![format!("{h:?}")],
                residual: 1.0,
            }),
            None,
        ));

        let mut f = base.sets()[0].clone();
        for u in &base.sets()[1..] {
            f = f.intersect(u);
        }
        report.push(property_from(
            "intersection_inside_base",
            1,
            (!h.is_subset(&f)).then(|| Counterexample {
                elements: vec![format!("{h:?}"), format!("{f:?}")],
                residual: 1.0,
            }),
            None,
        ));

        let l_ok = sub_ok && subgyro::is_l_subgyrogroup(c, &h).0;
        report.push(property_from(
            "intersection_l_subgyrogroup",
            1,
            (!l_ok).then(|| Counterexample {
                elements: vec![format!("{h:?}")],
                residual: 1.0,
            }),
            None,
        ));
    }

    // Strongly-topological base check: gyr[x, y](Uₙ) = Uₙ for all pairs.
    let order = c.order();
    let mut cex = None;
    let mut checks = 0u64;
    'levels: for (i, u) in chain.sets().iter().enumerate() {
        for x in 0..order {
            for y in 0..order {
                checks += 1;
                for z in u.iter() {
                    if !u.contains(c.gyr_of(x, y, z)) {
                        cex = Some(Counterexample {
                            elements: vec![
                                format!("level {i}"),
                                x.to_string(),
                                y.to_string(),
                                z.to_string(),
                            ],
                            residual: 1.0,
                        });
                        break 'levels;
                    }
                }
            }
        }
    }
    report.push(property_from("gyration_invariance", checks, cex, None));

    report
}

/// Validation of a ball chain on the disk. Inclusion conditions reduce to
/// exact radius arithmetic; gyration invariance is checked on seeded
/// samples and reported one-sidedly.
pub fn validate_ball_chain(
    disk: &MobiusDisk,
    chain: &BallChain,
    mode: BallChainMode<'_>,
    samples: u64,
    seed: u64,
) -> VerificationReport {
    let mut report = VerificationReport::new(samples, false);
    let n_levels = chain.len();
    let slack = 1e-12;

    // Balls contain 0 and are symmetric by construction.
    report.push(property_from(
        "contains_zero",
        n_levels as u64,
        None,
        Some("centered balls".to_string()),
    ));
    report.push(property_from(
        "symmetric",
        n_levels as u64,
        None,
        Some("centered balls".to_string()),
    ));

    let mut cex = None;
    for i in 0..n_levels - 1 {
        if chain.radii()[i + 1] > chain.radii()[i] + slack {
            cex = Some(Counterexample {
                elements: vec![
                    format!("{}", i + 1),
                    format!("{}", chain.radii()[i + 1]),
                    format!("{}", chain.radii()[i]),
                ],
                residual: chain.radii()[i + 1] - chain.radii()[i],
            });
            break;
        }
    }
    report.push(property_from(
        "nested",
        n_levels.saturating_sub(1) as u64,
        cex,
        None,
    ));

    // Multiplicative condition via the extremal-modulus radius arithmetic:
    // the sum of two centered balls is the centered ball of the combined
    // radius, so inclusions are decided exactly.
    let mut cex = None;
    let mut checks = 0u64;
    for i in 0..n_levels - 1 {
        checks += 1;
        let v = chain.radii()[i + 1];
        let combined = radius_add(v, v);
        let bound = match mode {
            ChainMode::Prenorm | ChainMode::InvariantSet { .. } => chain.radii()[i],
            ChainMode::BaseAt { base } => match base.radius(i) {
                Some(u) => chain.radii()[i].min(u),
                None => chain.radii()[i],
            },
        };
        if combined > bound + slack {
            cex = Some(Counterexample {
                elements: vec![format!("{i}"), format!("{combined}"), format!("{bound}")],
                residual: combined - bound,
            });
            break;
        }
    }
    report.push(property_from(
        "square_condition",
        checks,
        cex,
        Some("witness: level n, |U(n+1) ⊕ U(n+1)|, |U(n)|".to_string()),
    ));

    if let ChainMode::InvariantSet { base, f } = mode {
        let mut cex = None;
        let mut checks = 0u64;
        match f {
            DiskSet::Ball { radius } => {
                for i in 0..n_levels {
                    let Some(u) = base.radius(i) else { break };
                    checks += 1;
                    let combined = radius_add(*radius, chain.radii()[i]);
                    if combined > u + slack {
                        cex = Some(Counterexample {
                            elements: vec![format!("{i}"), format!("{combined}"), format!("{u}")],
                            residual: combined - u,
                        });
                        break;
                    }
                }
            }
            DiskSet::Cloud { points } => {
                let per_level = (samples as usize / n_levels.max(1)).max(1);
                'levels: for i in 0..n_levels {
                    let Some(u) = base.radius(i) else { break };
                    let v_cloud = DiskSet::ball(chain.radii()[i]).expect("validated radius");
                    for (k, p) in points.iter().enumerate() {
                        for v in v_cloud.sample_cloud(per_level, seed.wrapping_add(k as u64)) {
                            checks += 1;
                            let s = MobiusDisk::mobius_add(*p, v);
                            if s.norm() > u + disk.tolerance() {
                                cex = Some(Counterexample {
                                    elements: vec![format!("{i}"), disk.label(p), disk.label(&v)],
                                    residual: s.norm() - u,
                                });
                                break 'levels;
                            }
                        }
                    }
                }
            }
        }
        report.push(property_from("translate_condition", checks, cex, None));
    }

    // Sampled gyration invariance: gyrations are unimodular rotations, so
    // centered balls should be carried onto themselves.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_level = (samples / n_levels as u64).max(1);
    let mut cex = None;
    let mut checks = 0u64;
    'outer: for (i, &r) in chain.radii().iter().enumerate() {
        let ball = DiskSet::ball(r).expect("validated radius");
        let cloud = ball.sample_cloud(per_level as usize, seed.wrapping_add(i as u64));
        for u in cloud {
            checks += 1;
            let x = disk.sample(&mut rng);
            let y = disk.sample(&mut rng);
            let image = disk.gyr(&x, &y, &u);
            if !ball.contains(disk, image) {
                cex = Some(Counterexample {
                    elements: vec![
                        format!("level {i}"),
                        disk.label(&x),
                        disk.label(&y),
                        disk.label(&u),
                    ],
                    residual: image.norm() - r,
                });
                break 'outer;
            }
        }
    }
    report.push(property_from(
        "gyration_invariance",
        checks,
        cex,
        Some("sampled: no counterexample found is one-sided".to_string()),
    ));

    report
}
