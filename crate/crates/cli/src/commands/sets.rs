//! Set-level commands: the disjointness equivalence and chain validation.

use anyhow::{anyhow, bail, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use gyrolab_core::sets::chain::{validate_ball_chain, validate_finite_chain, ChainMode};
use gyrolab_core::sets::disk::DiskSet;
use gyrolab_core::sets::{disjointness_equivalence, ElemSet};
use gyrolab_core::{BallChain, FiniteChain, Gyrogroup, VerificationReport};

use crate::args::{parse_chain_sets, parse_elem_set, parse_radii, ChainArgs, SetcheckArgs};
use crate::output::{out_dir, write_json, Envelope, ReportPayload};

#[derive(Serialize)]
struct SetcheckPayload {
    mode: &'static str,
    triples_checked: u64,
    all_equivalent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    left_empty: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    right_empty: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<Vec<String>>,
}

pub fn setcheck(args: &SetcheckArgs) -> Result<bool> {
    let t = args.carrier.load_finite()?;
    let n = t.order();
    let dir = out_dir(&args.common.out)?;

    let payload = if args.exhaustive {
        if n > 4 {
            bail!("--exhaustive sweeps 8^(2^n) triples; supported for order <= 4 (got {n}). Use sampled mode.");
        }
        let subsets: Vec<ElemSet> = (0u32..1 << n)
            .map(|mask| {
                let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                ElemSet::from_indices(n, &idx).unwrap()
            })
            .collect();
        let mut checked = 0u64;
        let mut violation = None;
        'outer: for a in &subsets {
            for b in &subsets {
                for c in &subsets {
                    checked += 1;
                    let r = disjointness_equivalence(&t, a, b, c).map_err(|e| anyhow!(e))?;
                    if !r.equivalent {
                        violation =
                            Some(vec![format!("{a:?}"), format!("{b:?}"), format!("{c:?}")]);
                        break 'outer;
                    }
                }
            }
        }
        SetcheckPayload {
            mode: "exhaustive",
            triples_checked: checked,
            all_equivalent: violation.is_none(),
            left_empty: None,
            right_empty: None,
            violation,
        }
    } else if let (Some(a), Some(b), Some(c)) = (&args.a, &args.b, &args.c) {
        let a = parse_elem_set(a, n)?;
        let b = parse_elem_set(b, n)?;
        let c = parse_elem_set(c, n)?;
        let r = disjointness_equivalence(&t, &a, &b, &c).map_err(|e| anyhow!(e))?;
        SetcheckPayload {
            mode: "single",
            triples_checked: 1,
            all_equivalent: r.equivalent,
            left_empty: Some(r.left_empty),
            right_empty: Some(r.right_empty),
            violation: (!r.equivalent)
                .then(|| vec![format!("{a:?}"), format!("{b:?}"), format!("{c:?}")]),
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(args.common.seed);
        let mut violation = None;
        let mut checked = 0u64;
        for _ in 0..args.common.samples {
            let draw = |rng: &mut ChaCha8Rng| {
                let idx: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
                ElemSet::from_indices(n, &idx).unwrap()
            };
            let (a, b, c) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
            checked += 1;
            let r = disjointness_equivalence(&t, &a, &b, &c).map_err(|e| anyhow!(e))?;
            if !r.equivalent {
                violation = Some(vec![format!("{a:?}"), format!("{b:?}"), format!("{c:?}")]);
                break;
            }
        }
        SetcheckPayload {
            mode: "sampled",
            triples_checked: checked,
            all_equivalent: violation.is_none(),
            left_empty: None,
            right_empty: None,
            violation,
        }
    };

    println!(
        "{}: {} triple(s), equivalence {}",
        payload.mode,
        payload.triples_checked,
        if payload.all_equivalent {
            "holds"
        } else {
            "VIOLATED"
        }
    );
    let ok = payload.all_equivalent;
    write_json(
        &dir.join("setcheck.json"),
        &Envelope::new(args.common.seed, t.descriptor(), payload),
    )?;
    Ok(ok)
}

fn print_report(report: &VerificationReport) {
    print!("{}", report.summary());
    println!(
        "verdict: {}",
        if report.all_pass() { "pass" } else { "FAIL" }
    );
}

pub fn chain(args: &ChainArgs) -> Result<bool> {
    let dir = out_dir(&args.common.out)?;

    if args.carrier.mobius {
        let disk = args.carrier.disk()?;
        let chain = match &args.radii {
            Some(spec) => parse_radii(spec, args.len)?,
            None => BallChain::geometric(1.0 / 3.0, 1.0 / 3.0, args.len).map_err(|e| anyhow!(e))?,
        };
        let base = match &args.base_radii {
            Some(spec) => Some(parse_radii(spec, args.len)?),
            None => None,
        };
        let f_ball = match args.f_ball {
            Some(r) => Some(DiskSet::ball(r).map_err(|e| anyhow!(e))?),
            None => None,
        };
        let report = match args.check.as_str() {
            "prenorm" => validate_ball_chain(
                &disk,
                &chain,
                ChainMode::Prenorm,
                args.common.samples,
                args.common.seed,
            ),
            "base" => {
                let base = base
                    .as_ref()
                    .ok_or_else(|| anyhow!("--check base needs --base-radii"))?;
                validate_ball_chain(
                    &disk,
                    &chain,
                    ChainMode::BaseAt { base },
                    args.common.samples,
                    args.common.seed,
                )
            }
            "invariant" => {
                let base = base
                    .as_ref()
                    .ok_or_else(|| anyhow!("--check invariant needs --base-radii"))?;
                let f = f_ball
                    .as_ref()
                    .ok_or_else(|| anyhow!("--check invariant needs --f-ball"))?;
                validate_ball_chain(
                    &disk,
                    &chain,
                    ChainMode::InvariantSet { base, f },
                    args.common.samples,
                    args.common.seed,
                )
            }
            other => bail!("unknown check mode {other}"),
        };
        print_report(&report);
        let ok = report.all_pass();
        write_json(
            &dir.join("chain.json"),
            &Envelope::new(
                args.common.seed,
                disk.descriptor(),
                ReportPayload::new(report),
            ),
        )?;
        return Ok(ok);
    }

    let t = args.carrier.load_finite()?;
    let sets = args
        .sets
        .as_ref()
        .ok_or_else(|| anyhow!("finite chains need --sets \"…;…\""))?;
    let chain = FiniteChain::new(parse_chain_sets(sets, t.order())?).map_err(|e| anyhow!(e))?;
    let base = match &args.base_sets {
        Some(spec) => {
            Some(FiniteChain::new(parse_chain_sets(spec, t.order())?).map_err(|e| anyhow!(e))?)
        }
        None => None,
    };
    let f_set = match &args.f_set {
        Some(list) => Some(parse_elem_set(list, t.order())?),
        None => None,
    };
    let report = match args.check.as_str() {
        "prenorm" => validate_finite_chain(&t, &chain, ChainMode::Prenorm),
        "base" => {
            let base = base
                .as_ref()
                .ok_or_else(|| anyhow!("--check base needs --base-sets"))?;
            validate_finite_chain(&t, &chain, ChainMode::BaseAt { base })
        }
        "invariant" => {
            let base = base
                .as_ref()
                .ok_or_else(|| anyhow!("--check invariant needs --base-sets"))?;
            let f = f_set
                .as_ref()
                .ok_or_else(|| anyhow!("--check invariant needs --f-set"))?;
            validate_finite_chain(&t, &chain, ChainMode::InvariantSet { base, f })
        }
        other => bail!("unknown check mode {other}"),
    };
    print_report(&report);
    let ok = report.all_pass();
    write_json(
        &dir.join("chain.json"),
        &Envelope::new(args.common.seed, t.descriptor(), ReportPayload::new(report)),
    )?;
    Ok(ok)
}
