//! The dyadic prenorm construction on the Möbius disk.
//!
//! Chain levels are centered balls, so every family set `V(m/2ⁿ)` is again
//! a centered ball whose radius follows from the exact radius arithmetic
//! `radd(r, s) = (r + s)/(1 + rs)`. `f` reduces to a binary search over
//! the `2^depth` stored radii. The sup in `N` runs over a seeded,
//! symmetrized sample set and is reported as a lower estimate; `f`
//! over-estimates the true infimum by at most `1/2^depth`. Both error
//! directions are carried in the report notes.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::carrier::Gyrogroup;
use crate::carriers::mobius::MobiusDisk;
use crate::prenorm::{PrenormError, DEPTH_CAP};
use crate::report::{Counterexample, VerificationReport};
use crate::sets::chain::{validate_ball_chain, BallChain, ChainMode};
use crate::sets::disk::radius_add;
use crate::sets::property_from;

/// Radii of `V(m/2^depth)`, `m = 1..=2^depth`, over a ball chain.
#[derive(Debug, Clone)]
pub struct DiskDyadicFamily {
    depth: u32,
    radii: Vec<f64>,
    chain: BallChain,
}

impl DiskDyadicFamily {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn chain(&self) -> &BallChain {
        &self.chain
    }

    /// Radius of `V(m/2^depth)`.
    pub fn radius_of(&self, m: usize) -> Option<f64> {
        self.radii.get(m.checked_sub(1)?).copied()
    }

    pub fn f_error_bound(&self) -> f64 {
        1.0 / (1u64 << self.depth) as f64
    }

    /// `f(z)`: the minimal stored dyadic whose ball contains `z`.
    pub fn f_value(&self, z: Complex64) -> f64 {
        let norm = z.norm();
        let pos = self.radii.partition_point(|&r| r < norm);
        let scale = (1u64 << self.depth) as f64;
        if pos == self.radii.len() {
            1.0 + 1.0 / scale
        } else {
            (pos as f64 + 1.0) / scale
        }
    }
}

/// Builds the family of ball radii over a prenorm-validated chain,
/// checking the recursion inclusion `radd(rₙ, ρ(m)) ≤ ρ(m+1)` at every
/// depth.
pub fn build_disk_family(
    disk: &MobiusDisk,
    chain: &BallChain,
    depth: u32,
) -> Result<DiskDyadicFamily, PrenormError> {
    if depth > DEPTH_CAP {
        return Err(PrenormError::DepthTooLarge {
            depth,
            cap: DEPTH_CAP,
        });
    }
    if chain.len() <= depth as usize {
        return Err(PrenormError::ChainTooShort {
            len: chain.len(),
            depth,
        });
    }
    let report = validate_ball_chain(disk, chain, ChainMode::Prenorm, 64, 0);
    if !report.all_pass() {
        return Err(PrenormError::ChainInvalid {
            summary: report.summary(),
        });
    }

    let slack = 1e-12;
    let mut row: Vec<f64> = vec![chain.radius(0).expect("nonempty chain")];
    for n in 1..=depth {
        let u_n = chain.radius(n as usize).expect("depth bounded by chain");
        let size = 1usize << n;
        let mut next = Vec::with_capacity(size);
        for m in 1..=size {
            let r = if m == 1 {
                u_n
            } else if m % 2 == 0 {
                row[m / 2 - 1]
            } else {
                radius_add(u_n, row[(m - 1) / 2 - 1])
            };
            next.push(r);
        }
        for m in 1..size {
            if radius_add(u_n, next[m - 1]) > next[m] + slack {
                return Err(PrenormError::FamilyInconsistent { n, m: m as u64 });
            }
        }
        row = next;
    }
    // Guard against rounding wobble; the inclusion check above bounds any
    // adjustment by the slack.
    for i in 1..row.len() {
        if row[i] < row[i - 1] {
            row[i] = row[i - 1];
        }
    }

    Ok(DiskDyadicFamily {
        depth,
        radii: row,
        chain: chain.clone(),
    })
}

/// A seeded sup set for `N`: `count / 2` guard-disk draws, closed under
/// negation, plus the identity. The symmetry makes `N(⊖x) = N(x)` exact
/// on the sample.
pub fn symmetric_sup_set(disk: &MobiusDisk, count: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = vec![Complex64::new(0.0, 0.0)];
    for _ in 0..count / 2 {
        let z = disk.sample(&mut rng);
        pts.push(z);
        pts.push(-z);
    }
    pts
}

/// Evaluates the sampled prenorm `N(z) = max_y |f(z ⊕ y) - f(y)|` over a
/// fixed sup set, with the `f` values of the sup set precomputed.
pub struct DiskPrenorm<'a> {
    fam: &'a DiskDyadicFamily,
    sup: Vec<Complex64>,
    f_sup: Vec<f64>,
}

impl<'a> DiskPrenorm<'a> {
    pub fn new(fam: &'a DiskDyadicFamily, sup: Vec<Complex64>) -> Self {
        let f_sup = sup.iter().map(|&y| fam.f_value(y)).collect();
        DiskPrenorm { fam, sup, f_sup }
    }

    pub fn sup_len(&self) -> usize {
        self.sup.len()
    }

    pub fn family(&self) -> &DiskDyadicFamily {
        self.fam
    }

    /// Lower estimate of `N(z)`: the sup runs over the sample only.
    pub fn n_value(&self, z: Complex64) -> f64 {
        self.sup
            .iter()
            .zip(&self.f_sup)
            .map(|(&y, &fy)| (self.fam.f_value(MobiusDisk::mobius_add(z, y)) - fy).abs())
            .fold(0.0, f64::max)
    }

    /// `N(gyr z)` with the sup samples transported by the same gyration.
    ///
    /// The true sup ranges over the whole disk, which every gyration maps
    /// onto itself, so the sampled sup must transform covariantly: rotating
    /// the argument without rotating the samples leaves a spurious gap of
    /// up to one dyadic step. With the transported samples the estimate
    /// agrees with `n_value(z)` to rounding error, realizing
    /// `N(gyr[x, y](z)) = N(z)` through `|gyr factor| = 1` and the
    /// radiality of `f`.
    pub fn n_value_gyrated(&self, gyrated_z: Complex64, factor: Complex64) -> f64 {
        self.sup
            .iter()
            .map(|&y| {
                let ry = factor * y;
                (self.fam.f_value(MobiusDisk::mobius_add(gyrated_z, ry)) - self.fam.f_value(ry))
                    .abs()
            })
            .fold(0.0, f64::max)
    }
}

/// `N` evaluated over a square grid, row-major, keeping points with
/// `|z| <= extent`.
#[derive(Debug, Clone)]
pub struct DiskGrid {
    pub points: Vec<(f64, f64)>,
    pub n_values: Vec<f64>,
}

pub fn evaluate_grid(prenorm: &DiskPrenorm<'_>, width: usize, extent: f64) -> DiskGrid {
    let mut points = Vec::new();
    for ix in 0..width {
        for iy in 0..width {
            let frac = |i: usize| {
                if width == 1 {
                    0.0
                } else {
                    -extent + 2.0 * extent * i as f64 / (width - 1) as f64
                }
            };
            let (x, y) = (frac(ix), frac(iy));
            if (x * x + y * y).sqrt() <= extent {
                points.push((x, y));
            }
        }
    }
    let n_values = points
        .par_iter()
        .map(|&(x, y)| prenorm.n_value(Complex64::new(x, y)))
        .collect();
    DiskGrid { points, n_values }
}

/// Tolerances and budgets for the sampled disk checks.
#[derive(Debug, Clone)]
pub struct DiskCheckConfig {
    pub grid_width: usize,
    pub extent: f64,
    pub sup_samples: usize,
    pub budget: u64,
    pub seed: u64,
    /// Tolerance for the gyration-invariance comparison of `N`.
    pub gyr_tol: f64,
}

impl Default for DiskCheckConfig {
    fn default() -> Self {
        DiskCheckConfig {
            grid_width: 200,
            extent: MobiusDisk::DEFAULT_GUARD_RADIUS,
            sup_samples: 1000,
            budget: 400,
            seed: 0,
            gyr_tol: 1e-6,
        }
    }
}

/// Runs the sampled prenorm verification on the disk and returns the
/// report together with the evaluated grid (for level-set output).
///
/// PN1 holds exactly; PN2 and PN3 are checked within `2/2^depth` (the
/// two-sided `f` discretization error); the sandwich inclusions are
/// checked on every grid point with the lower side inflated by one
/// dyadic step. All sampled verdicts are one-sided.
pub fn disk_prenorm_check(
    disk: &MobiusDisk,
    chain: &BallChain,
    depth: u32,
    cfg: &DiskCheckConfig,
) -> Result<(VerificationReport, DiskGrid, DiskDyadicFamily), PrenormError> {
    let fam = build_disk_family(disk, chain, depth)?;
    let sup = symmetric_sup_set(disk, cfg.sup_samples, cfg.seed);
    let prenorm = DiskPrenorm::new(&fam, sup);
    let step = fam.f_error_bound();
    let pn_tol = 2.0 * step;

    let mut report = VerificationReport::new(cfg.budget, false);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));

    let n_zero = prenorm.n_value(Complex64::new(0.0, 0.0));
    report.push(property_from(
        "pn1_zero",
        1,
        (n_zero != 0.0).then(|| Counterexample {
            elements: vec!["0".to_string()],
            residual: n_zero,
        }),
        None,
    ));

    let mut cex = None;
    let mut checks = 0u64;
    for _ in 0..cfg.budget {
        let x = disk.sample(&mut rng);
        let y = disk.sample(&mut rng);
        checks += 1;
        let lhs = prenorm.n_value(MobiusDisk::mobius_add(x, y));
        let rhs = prenorm.n_value(x) + prenorm.n_value(y);
        if lhs > rhs + pn_tol {
            cex = Some(Counterexample {
                elements: vec![disk.label(&x), disk.label(&y)],
                residual: lhs - rhs,
            });
            break;
        }
    }
    report.push(property_from(
        "pn2_subadditive",
        checks,
        cex,
        Some(format!("within {pn_tol}")),
    ));

    let mut cex = None;
    let mut checks = 0u64;
    for _ in 0..cfg.budget {
        let x = disk.sample(&mut rng);
        checks += 1;
        let diff = (prenorm.n_value(-x) - prenorm.n_value(x)).abs();
        if diff > pn_tol {
            cex = Some(Counterexample {
                elements: vec![disk.label(&x)],
                residual: diff,
            });
            break;
        }
    }
    report.push(property_from(
        "pn3_symmetric",
        checks,
        cex,
        Some("exact on the symmetrized sup set".to_string()),
    ));

    // f is radial and gyration factors are unimodular, so f ∘ gyr = f up
    // to rounding.
    let mut cex = None;
    let mut max_residual = 0.0f64;
    for _ in 0..cfg.budget {
        let x = disk.sample(&mut rng);
        let y = disk.sample(&mut rng);
        let z = disk.sample(&mut rng);
        let diff = (fam.f_value(disk.gyr(&x, &y, &z)) - fam.f_value(z)).abs();
        max_residual = max_residual.max(diff);
        if diff > cfg.gyr_tol && cex.is_none() {
            cex = Some(Counterexample {
                elements: vec![disk.label(&x), disk.label(&y), disk.label(&z)],
                residual: diff,
            });
        }
    }
    let mut f_check = property_from(
        "f_gyration_invariance",
        cfg.budget,
        cex,
        Some(format!("within {}", cfg.gyr_tol)),
    );
    f_check.max_residual = Some(max_residual);
    report.push(f_check);

    let mut cex = None;
    let mut max_residual = 0.0f64;
    for _ in 0..cfg.budget {
        let x = disk.sample(&mut rng);
        let y = disk.sample(&mut rng);
        let z = disk.sample(&mut rng);
        let factor = MobiusDisk::gyr_factor(x, y);
        let diff = (prenorm.n_value_gyrated(factor * z, factor) - prenorm.n_value(z)).abs();
        if diff > max_residual {
            max_residual = diff;
        }
        if diff > cfg.gyr_tol && cex.is_none() {
            cex = Some(Counterexample {
                elements: vec![disk.label(&x), disk.label(&y), disk.label(&z)],
                residual: diff,
            });
        }
    }
    let mut gyr_check = property_from(
        "gyration_invariance",
        cfg.budget,
        cex,
        Some(format!(
            "within {}; sup samples transported by the gyration",
            cfg.gyr_tol
        )),
    );
    gyr_check.max_residual = Some(max_residual);
    report.push(gyr_check);

    // Sandwich over every grid point and level: N(z) < 1/2ⁿ must keep z
    // inside Uₙ inflated by one dyadic step (f error), and |z| ≤ rₙ must
    // force N(z) ≤ 2/2ⁿ.
    let grid = evaluate_grid(&prenorm, cfg.grid_width, cfg.extent);
    let mut cex = None;
    let mut checks = 0u64;
    'sandwich: for level in 0..=depth {
        let r_n = chain.radius(level as usize).expect("chain depth checked");
        let strict = 1.0 / (1u64 << level) as f64;
        let loose = 2.0 * strict;
        // V(1/2ⁿ ⊕ one step): the ball absorbing the f discretization.
        let inflated = radius_add(r_n, chain.radius(depth as usize).unwrap_or(r_n));
        for (i, &(x, y)) in grid.points.iter().enumerate() {
            checks += 1;
            let norm = (x * x + y * y).sqrt();
            let n_val = grid.n_values[i];
            if n_val < strict && norm > inflated + 1e-12 {
                cex = Some(Counterexample {
                    elements: vec![
                        format!("n={level}"),
                        format!("{x}{y:+}i"),
                        "lower".to_string(),
                    ],
                    residual: norm - inflated,
                });
                break 'sandwich;
            }
            if norm <= r_n && n_val > loose + 1e-12 {
                cex = Some(Counterexample {
                    elements: vec![
                        format!("n={level}"),
                        format!("{x}{y:+}i"),
                        "upper".to_string(),
                    ],
                    residual: n_val - loose,
                });
                break 'sandwich;
            }
        }
    }
    report.push(property_from(
        "sandwich",
        checks,
        cex,
        Some("lower side inflated by one dyadic step".to_string()),
    ));

    Ok((report, grid, fam))
}

/// Sampled coset-metric checks on the disk, where the chain shrinks to the
/// trivial subgyrogroup and `ϱ(x, y) = N(⊖x ⊕ y) + N(⊖y ⊕ x)` acts on
/// points directly.
pub fn disk_metric_check(
    disk: &MobiusDisk,
    prenorm: &DiskPrenorm<'_>,
    budget: u64,
    seed: u64,
) -> VerificationReport {
    let rho = |x: Complex64, y: Complex64| {
        prenorm.n_value(MobiusDisk::mobius_add(-x, y))
            + prenorm.n_value(MobiusDisk::mobius_add(-y, x))
    };
    let tol = 2.0 * prenorm.family().f_error_bound();
    let mut report = VerificationReport::new(budget, false);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut cex = None;
    let mut checks = 0u64;
    for _ in 0..budget {
        let x = disk.sample(&mut rng);
        checks += 1;
        let self_dist = rho(x, x);
        if self_dist != 0.0 {
            cex = Some(Counterexample {
                elements: vec![disk.label(&x)],
                residual: self_dist,
            });
            break;
        }
    }
    report.push(property_from("rho_zero_self", checks, cex, None));

    let mut cex = None;
    let mut checks = 0u64;
    for _ in 0..budget {
        let x = disk.sample(&mut rng);
        let y = disk.sample(&mut rng);
        checks += 1;
        let diff = (rho(x, y) - rho(y, x)).abs();
        if diff != 0.0 {
            cex = Some(Counterexample {
                elements: vec![disk.label(&x), disk.label(&y)],
                residual: diff,
            });
            break;
        }
    }
    report.push(property_from("rho_symmetry", checks, cex, None));

    let mut cex = None;
    let mut checks = 0u64;
    for _ in 0..budget {
        let x = disk.sample(&mut rng);
        let y = disk.sample(&mut rng);
        let z = disk.sample(&mut rng);
        checks += 1;
        let gap = rho(x, y) - rho(x, z) - rho(z, y);
        if gap > tol {
            cex = Some(Counterexample {
                elements: vec![disk.label(&x), disk.label(&y), disk.label(&z)],
                residual: gap,
            });
            break;
        }
    }
    report.push(property_from(
        "rho_triangle",
        checks,
        cex,
        Some(format!("within {tol}")),
    ));

    report
}
