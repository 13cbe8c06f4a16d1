//! The axiom and identity verification engine.
//!
//! Finite carriers up to a configurable order are checked exhaustively over
//! all element tuples; everything else is checked on seeded samples. Runs
//! with identical seed and budget produce identical reports.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::carrier::{derived_gyration, Gyrogroup};
use crate::report::{CheckStatus, Counterexample, PropertyCheck, VerificationReport};

/// Knobs for a verification run.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Tuples checked per property in sampled mode.
    pub budget: u64,
    pub seed: u64,
    /// Finite carriers up to this order are enumerated exhaustively.
    pub exhaustive_cap: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            budget: 10_000,
            seed: 0,
            exhaustive_cap: 32,
        }
    }
}

impl VerifyConfig {
    pub fn new(budget: u64, seed: u64) -> Self {
        VerifyConfig {
            budget,
            seed,
            ..VerifyConfig::default()
        }
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

enum Domain<E> {
    All(Vec<E>),
    Sampled,
}

fn domain_of<C: Gyrogroup>(c: &C, cfg: &VerifyConfig) -> Domain<C::Elem> {
    match c.elements() {
        Some(all) if all.len() <= cfg.exhaustive_cap && !all.is_empty() => Domain::All(all),
        _ => Domain::Sampled,
    }
}

/// Runs one tuple-indexed property: exhaustively over `all^arity` or on
/// `budget` seeded draws. `eval` returns (passed, residual).
fn run_tuple_check<C: Gyrogroup>(
    c: &C,
    cfg: &VerifyConfig,
    domain: &Domain<C::Elem>,
    name: &str,
    stream: u64,
    arity: usize,
    eval: impl Fn(&C, &[C::Elem]) -> (bool, f64),
) -> PropertyCheck {
    let mut checks = 0u64;
    let mut max_residual = 0.0f64;
    let mut cex: Option<Counterexample> = None;

    let mut record = |c: &C, tuple: &[C::Elem], ok: bool, residual: f64| {
        checks += 1;
        if residual > max_residual {
            max_residual = residual;
        }
        if !ok && cex.is_none() {
            cex = Some(Counterexample {
                elements: tuple.iter().map(|e| c.label(e)).collect(),
                residual,
            });
        }
    };

    match domain {
        Domain::All(all) => {
            let n = all.len();
            let mut idx = vec![0usize; arity];
            let mut tuple: Vec<C::Elem> = Vec::with_capacity(arity);
            'outer: loop {
                tuple.clear();
                tuple.extend(idx.iter().map(|&i| all[i].clone()));
                let (ok, residual) = eval(c, &tuple);
                record(c, &tuple, ok, residual);
                let mut k = arity;
                loop {
                    if k == 0 {
                        break 'outer;
                    }
                    idx[k - 1] += 1;
                    if idx[k - 1] < n {
                        break;
                    }
                    idx[k - 1] = 0;
                    k -= 1;
                }
            }
        }
        Domain::Sampled => {
            let mut rng = stream_rng(cfg.seed, stream);
            for _ in 0..cfg.budget {
                let tuple: Vec<C::Elem> = (0..arity).map(|_| c.sample(&mut rng)).collect();
                let (ok, residual) = eval(c, &tuple);
                record(c, &tuple, ok, residual);
            }
        }
    }

    PropertyCheck {
        property: name.to_string(),
        status: if cex.is_some() {
            CheckStatus::Fail
        } else {
            CheckStatus::Pass
        },
        checks,
        counterexample: cex,
        max_residual: Some(max_residual),
        note: None,
    }
}

/// Exhaustive mode: for every pair (a, b) the images of all z under
/// `gyr[a, b]` must be pairwise distinct and stay in the domain. Sampled
/// mode falls back to injectivity on distinct sampled pairs.
fn bijectivity_check<C: Gyrogroup>(
    c: &C,
    cfg: &VerifyConfig,
    domain: &Domain<C::Elem>,
) -> PropertyCheck {
    match domain {
        Domain::All(all) => {
            let mut checks = 0u64;
            let mut cex: Option<Counterexample> = None;
            'pairs: for a in all {
                for b in all {
                    checks += 1;
                    let images: Vec<C::Elem> = all.iter().map(|z| c.gyr(a, b, z)).collect();
                    for (i, im) in images.iter().enumerate() {
                        if !c.contains(im) {
                            cex = Some(Counterexample {
                                elements: vec![c.label(a), c.label(b), c.label(&all[i])],
                                residual: 1.0,
                            });
                            break 'pairs;
                        }
                        for (j, other) in images.iter().enumerate().skip(i + 1) {
                            if c.elems_eq(im, other) {
                                cex = Some(Counterexample {
                                    elements: vec![
                                        c.label(a),
                                        c.label(b),
                                        c.label(&all[i]),
                                        c.label(&all[j]),
                                    ],
                                    residual: 1.0,
                                });
                                break 'pairs;
                            }
                        }
                    }
                }
            }
            PropertyCheck {
                property: "gyration_bijectivity".to_string(),
                status: if cex.is_some() {
                    CheckStatus::Fail
                } else {
                    CheckStatus::Pass
                },
                checks,
                counterexample: cex,
                max_residual: None,
                note: Some("permutation check per (a, b) pair".to_string()),
            }
        }
        Domain::Sampled => {
            let mut check =
                run_tuple_check(c, cfg, domain, "gyration_bijectivity", 6, 4, |c, t| {
                    let (a, b, x, y) = (&t[0], &t[1], &t[2], &t[3]);
                    if c.elems_eq(x, y) {
                        return (true, 0.0);
                    }
                    let gx = c.gyr(a, b, x);
                    let gy = c.gyr(a, b, y);
                    (!c.elems_eq(&gx, &gy), c.distance(x, y))
                });
            check.max_residual = None;
            check.note = Some("sampled injectivity on distinct pairs".to_string());
            check
        }
    }
}

/// Checks G1-G4 together with the cancellation identities and
/// norm-preservation of gyrations, one report entry per property.
pub fn verify_axioms<C: Gyrogroup>(c: &C, cfg: &VerifyConfig) -> VerificationReport {
    let domain = domain_of(c, cfg);
    let exhaustive = matches!(domain, Domain::All(_));
    let mut report = VerificationReport::new(cfg.budget, exhaustive);

    report.push(run_tuple_check(
        c,
        cfg,
        &domain,
        "identity",
        1,
        1,
        |c, t| {
            let a = &t[0];
            let zero = c.zero();
            let left = c.add(&zero, a);
            let right = c.add(a, &zero);
            let residual = c.distance(&left, a).max(c.distance(&right, a));
            (c.elems_eq(&left, a) && c.elems_eq(&right, a), residual)
        },
    ));

    report.push(run_tuple_check(
        c,
        cfg,
        &domain,
        "inverses",
        2,
        1,
        |c, t| {
            let a = &t[0];
            let na = c.neg(a);
            let zero = c.zero();
            let left = c.add(&na, a);
            let right = c.add(a, &na);
            let residual = c.distance(&left, &zero).max(c.distance(&right, &zero));
            (
                c.contains(&na) && c.elems_eq(&left, &zero) && c.elems_eq(&right, &zero),
                residual,
            )
        },
    ));

    report.push(run_tuple_check(
        c,
        cfg,
        &domain,
        "gyroassociativity",
        3,
        3,
        |c, t| {
            let (a, b, z) = (&t[0], &t[1], &t[2]);
            let lhs = c.add(a, &c.add(b, z));
            let rhs = c.add(&c.add(a, b), &c.gyr(a, b, z));
            (c.elems_eq(&lhs, &rhs), c.distance(&lhs, &rhs))
        },
    ));

    report.push(run_tuple_check(
        c,
        cfg,
        &domain,
        "gyration_fixes_zero",
        4,
        2,
        |c, t| {
            let (a, b) = (&t[0], &t[1]);
            let zero = c.zero();
            let g = c.gyr(a, b, &zero);
            (c.elems_eq(&g, &zero), c.distance(&g, &zero))
        },
    ));

    report.push(run_tuple_check(
        c,
        cfg,
        &domain,
        "gyration_homomorphism",
        5,
        4,
        |c, t| {
            let (a, b, x, y) = (&t[0], &t[1], &t[2], &t[3]);
            let lhs = c.gyr(a, b, &c.add(x, y));
            let rhs = c.add(&c.gyr(a, b, x), &c.gyr(a, b, y));
            (c.elems_eq(&lhs, &rhs), c.distance(&lhs, &rhs))
        },
    ));

    report.push(bijectivity_check(c, cfg, &domain));

    report.push(run_tuple_check(
        c,
        cfg,
        &domain,
        "left_loop",
        7,
        3,
        |c, t| {
            let (a, b, z) = (&t[0], &t[1], &t[2]);
            let lhs = c.gyr(&c.add(a, b), b, z);
            let rhs = c.gyr(a, b, z);
            (c.elems_eq(&lhs, &rhs), c.distance(&lhs, &rhs))
        },
    ));

    report.push(run_tuple_check(
        c,
        cfg,
        &domain,
        "left_cancellation",
        8,
        2,
        |c, t| {
            let (a, b) = (&t[0], &t[1]);
            let lhs = c.add(&c.neg(a), &c.add(a, b));
            (c.elems_eq(&lhs, b), c.distance(&lhs, b))
        },
    ));

    report.push(run_tuple_check(
        c,
        cfg,
        &domain,
        "right_cancellation_a",
        9,
        2,
        |c, t| {
            let (a, b) = (&t[0], &t[1]);
            let nb = c.neg(b);
            let lhs = c.add(&c.add(a, &nb), &c.gyr(a, &nb, b));
            (c.elems_eq(&lhs, a), c.distance(&lhs, a))
        },
    ));

    report.push(run_tuple_check(
        c,
        cfg,
        &domain,
        "right_cancellation_b",
        10,
        2,
        |c, t| {
            let (a, b) = (&t[0], &t[1]);
            let lhs = c.add(&c.add(a, &c.gyr(a, b, &c.neg(b))), b);
            (c.elems_eq(&lhs, a), c.distance(&lhs, a))
        },
    ));

    report.push(run_tuple_check(
        c,
        cfg,
        &domain,
        "gyration_preserves_norm",
        11,
        3,
        |c, t| {
            let (a, b, z) = (&t[0], &t[1], &t[2]);
            let zero = c.zero();
            let before = c.distance(z, &zero);
            let after = c.distance(&c.gyr(a, b, z), &zero);
            let residual = (before - after).abs();
            (residual <= c.tolerance(), residual)
        },
    ));

    report
}

/// Confirms that a carrier's closed-form gyration matches the derived form
/// `⊖(a ⊕ b) ⊕ (a ⊕ (b ⊕ z))` to within `tol` on sampled (or all) triples.
pub fn gyr_consistency_check<C: Gyrogroup>(
    c: &C,
    budget: u64,
    seed: u64,
    tol: f64,
) -> VerificationReport {
    let cfg = VerifyConfig::new(budget, seed);
    let domain = domain_of(c, &cfg);
    let exhaustive = matches!(domain, Domain::All(_));
    let mut report = VerificationReport::new(budget, exhaustive);
    if !c.has_closed_gyr() {
        report.push(PropertyCheck::skipped(
            "gyration_closed_form_consistency",
            "carrier has no closed-form gyration",
        ));
        return report;
    }
    report.push(run_tuple_check(
        c,
        &cfg,
        &domain,
        "gyration_closed_form_consistency",
        12,
        3,
        move |c, t| {
            let (a, b, z) = (&t[0], &t[1], &t[2]);
            let closed = c.gyr(a, b, z);
            let derived = derived_gyration(c, a, b, z);
            let residual = c.distance(&closed, &derived);
            (residual <= tol, residual)
        },
    ));
    report
}

/// Verdict of the degeneracy probe: a carrier is a plain group exactly when
/// every gyration acts as the identity.
#[derive(Debug, Clone)]
pub struct DegeneracyVerdict<E> {
    pub degenerate: bool,
    /// A triple (a, b, z) with `gyr[a, b](z) != z`, when one was found.
    pub witness: Option<(E, E, E)>,
    pub checks: u64,
    pub exhaustive: bool,
}

/// Decides (exhaustively or on samples) whether every checked gyration is
/// the identity map.
pub fn is_degenerate_group<C: Gyrogroup>(
    c: &C,
    budget: u64,
    seed: u64,
) -> DegeneracyVerdict<C::Elem> {
    let cfg = VerifyConfig::new(budget, seed);
    let domain = domain_of(c, &cfg);
    let mut checks = 0u64;
    let mut witness = None;
    match &domain {
        Domain::All(all) => {
            'outer: for a in all {
                for b in all {
                    for z in all {
                        checks += 1;
                        let g = c.gyr(a, b, z);
                        if !c.elems_eq(&g, z) {
                            witness = Some((a.clone(), b.clone(), z.clone()));
                            break 'outer;
                        }
                    }
                }
            }
        }
        Domain::Sampled => {
            let mut rng = stream_rng(seed, 13);
            for _ in 0..budget {
                let a = c.sample(&mut rng);
                let b = c.sample(&mut rng);
                let z = c.sample(&mut rng);
                checks += 1;
                let g = c.gyr(&a, &b, &z);
                if !c.elems_eq(&g, &z) {
                    witness = Some((a, b, z));
                    break;
                }
            }
        }
    }
    DegeneracyVerdict {
        degenerate: witness.is_none(),
        witness,
        checks,
        exhaustive: matches!(domain, Domain::All(_)),
    }
}
