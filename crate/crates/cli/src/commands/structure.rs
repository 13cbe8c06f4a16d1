//! Finite-structure commands: gyration tables, subgyrogroup checks,
//! coset decompositions, and quotients.

use anyhow::{anyhow, bail, Result};
use serde::Serialize;

use gyrolab_core::sets::disk::DiskSet;
use gyrolab_core::subgyro::{
    generated, generated_disk, is_l_subgyrogroup, l_sub_check_disk, left_cosets,
    quotient as quotient_of, subgyro_handle, LSubVerdictDisk, SubgyroError,
};
use gyrolab_core::{CosetDecomposition, Gyrogroup, TriState};

use crate::args::{
    parse_complex, parse_elem_set, CosetsArgs, GyrTableArgs, QuotientArgs, SubgyroArgs,
};
use crate::output::{out_dir, write_json, Envelope};
use crate::tablefile;

#[derive(Serialize)]
struct GyrTablePayload {
    order: usize,
    degenerate: bool,
    /// `gyrations[a][b]` is the permutation `z ↦ gyr[a, b](z)`.
    gyrations: Vec<Vec<Vec<usize>>>,
}

pub fn gyr_table(args: &GyrTableArgs) -> Result<bool> {
    let t = args.carrier.load_finite()?;
    if t.order() > 64 {
        bail!("gyr-table supports orders up to 64, got {}", t.order());
    }
    let n = t.order();
    let gyrations = (0..n)
        .map(|a| (0..n).map(|b| t.gyr_perm(a, b)).collect())
        .collect();
    let payload = GyrTablePayload {
        order: n,
        degenerate: t.is_degenerate(),
        gyrations,
    };
    println!(
        "order {n}, {}",
        if payload.degenerate {
            "all gyrations are the identity"
        } else {
            "carrier has nontrivial gyrations"
        }
    );
    let dir = out_dir(&args.common.out)?;
    write_json(
        &dir.join("gyr-table.json"),
        &Envelope::new(args.common.seed, t.descriptor(), payload),
    )?;
    Ok(true)
}

#[derive(Serialize)]
struct SubgyroPayload {
    mode: &'static str,
    members: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    is_subgyrogroup: Option<TriState>,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    is_l_subgyrogroup: Option<TriState>,
    #[serde(skip_serializing_if = "Option::is_none")]
    l_witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    complete: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

pub fn subgyro(args: &SubgyroArgs) -> Result<bool> {
    let dir = out_dir(&args.common.out)?;
    let seed = args.common.seed;

    if args.carrier.mobius {
        let disk = args.carrier.disk()?;
        let (payload, ok) = if let Some(r) = args.ball {
            let ball = DiskSet::ball(r).map_err(|e| anyhow!(e))?;
            match l_sub_check_disk(&disk, &ball, args.common.samples, seed) {
                LSubVerdictDisk::NoCounterexampleFound { samples } => (
                    SubgyroPayload {
                        mode: "l-check-sampled",
                        members: vec![format!("ball r={r}")],
                        is_subgyrogroup: None,
                        violation: None,
                        is_l_subgyrogroup: Some(TriState::Unchecked),
                        l_witness: None,
                        complete: None,
                        note: Some(format!(
                            "sampled: no counterexample found among {samples} checks"
                        )),
                    },
                    true,
                ),
                LSubVerdictDisk::No { witness: (a, h, x) } => (
                    SubgyroPayload {
                        mode: "l-check-sampled",
                        members: vec![format!("ball r={r}")],
                        is_subgyrogroup: None,
                        violation: None,
                        is_l_subgyrogroup: Some(TriState::No),
                        l_witness: Some(vec![disk.label(&a), disk.label(&h), disk.label(&x)]),
                        complete: None,
                        note: None,
                    },
                    false,
                ),
            }
        } else if let Some(seeds) = &args.seeds {
            let points: Result<Vec<_>> = seeds.split(';').map(parse_complex).collect();
            let points = points?;
            for p in &points {
                if !disk.contains(p) {
                    bail!("seed {} lies outside the disk", disk.label(p));
                }
            }
            let gen = generated_disk(&disk, &points, args.cap);
            let complete = gen.complete;
            (
                SubgyroPayload {
                    mode: "generated",
                    members: gen.elements.iter().map(|z| disk.label(z)).collect(),
                    is_subgyrogroup: None,
                    violation: None,
                    is_l_subgyrogroup: None,
                    l_witness: None,
                    complete: Some(complete),
                    note: (!complete).then(|| {
                        format!(
                            "cap {} exhausted after {} iterations",
                            args.cap, gen.iterations
                        )
                    }),
                },
                complete || !args.common.strict,
            )
        } else {
            bail!("disk mode needs --ball <r> or --seeds <points>");
        };
        match payload.mode {
            "generated" => println!(
                "generated: {} element(s){}",
                payload.members.len(),
                payload
                    .note
                    .as_deref()
                    .map(|n| format!(" [{n}]"))
                    .unwrap_or_default()
            ),
            _ => println!(
                "{} on {}: {}",
                payload.mode,
                payload.members.join(", "),
                match payload.is_l_subgyrogroup {
                    Some(TriState::No) => "counterexample found".to_string(),
                    _ => payload.note.clone().unwrap_or_default(),
                }
            ),
        }
        write_json(
            &dir.join("subgyro.json"),
            &Envelope::new(seed, disk.descriptor(), payload),
        )?;
        return Ok(ok);
    }

    let t = args.carrier.load_finite()?;
    let (payload, ok) = if let Some(set) = &args.set {
        let s = parse_elem_set(set, t.order())?;
        let handle = subgyro_handle(&t, s).map_err(|e| anyhow!(e))?;
        let is_sub = handle.is_subgyrogroup == TriState::Yes;
        let (l_state, l_witness) = if is_sub {
            let (ok, w) = is_l_subgyrogroup(&t, handle.members());
            (
                Some(if ok { TriState::Yes } else { TriState::No }),
                w.map(|(a, h, x)| vec![a.to_string(), h.to_string(), x.to_string()]),
            )
        } else {
            (Some(TriState::Unchecked), None)
        };
        (
            SubgyroPayload {
                mode: "check",
                members: handle.members().iter().map(|i| i.to_string()).collect(),
                is_subgyrogroup: Some(handle.is_subgyrogroup),
                violation: None,
                is_l_subgyrogroup: l_state,
                l_witness,
                complete: None,
                note: None,
            },
            is_sub,
        )
    } else if let Some(seeds) = &args.seeds {
        let s = parse_elem_set(seeds, t.order())?;
        let handle = generated(&t, &s).map_err(|e| anyhow!(e))?;
        (
            SubgyroPayload {
                mode: "generated",
                members: handle.members().iter().map(|i| i.to_string()).collect(),
                is_subgyrogroup: Some(handle.is_subgyrogroup),
                violation: None,
                is_l_subgyrogroup: None,
                l_witness: None,
                complete: Some(true),
                note: None,
            },
            true,
        )
    } else {
        bail!("need --set <list> to check or --seeds <list> to generate");
    };
    println!(
        "{}: members {{{}}}{}",
        payload.mode,
        payload.members.join(", "),
        match payload.is_subgyrogroup {
            Some(TriState::Yes) => " (subgyrogroup)",
            Some(TriState::No) => " (NOT a subgyrogroup)",
            _ => "",
        }
    );
    write_json(
        &dir.join("subgyro.json"),
        &Envelope::new(seed, t.descriptor(), payload),
    )?;
    Ok(ok)
}

#[derive(Serialize)]
struct CosetsPayload {
    verdict: &'static str,
    is_l_subgyrogroup: TriState,
    #[serde(skip_serializing_if = "Option::is_none")]
    decomposition: Option<CosetDecomposition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

pub fn cosets(args: &CosetsArgs) -> Result<bool> {
    let t = args.carrier.load_finite()?;
    let s = parse_elem_set(&args.sub, t.order())?;
    let handle = subgyro_handle(&t, s).map_err(|e| anyhow!(e))?;
    if handle.is_subgyrogroup != TriState::Yes {
        bail!("{{{}}} is not a subgyrogroup", args.sub);
    }
    let (l_ok, _) = is_l_subgyrogroup(&t, handle.members());
    let l_state = if l_ok { TriState::Yes } else { TriState::No };

    let dir = out_dir(&args.common.out)?;
    let (payload, ok) = match left_cosets(&t, &handle) {
        Ok(dec) => {
            println!("{} block(s): {:?}", dec.block_count(), dec.blocks);
            (
                CosetsPayload {
                    verdict: "pass",
                    is_l_subgyrogroup: l_state,
                    decomposition: Some(dec),
                    error: None,
                },
                true,
            )
        }
        Err(e @ SubgyroError::PartitionFailure { .. }) => {
            println!("partition failure: {e}");
            (
                CosetsPayload {
                    verdict: "fail",
                    is_l_subgyrogroup: l_state,
                    decomposition: None,
                    error: Some(e.to_string()),
                },
                false,
            )
        }
        Err(e) => return Err(anyhow!(e)),
    };
    write_json(
        &dir.join("cosets.json"),
        &Envelope::new(args.common.seed, t.descriptor(), payload),
    )?;
    Ok(ok)
}

#[derive(Serialize)]
struct QuotientPayload {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    quotient_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pairs_verified: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decomposition: Option<CosetDecomposition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ill_defined_witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

pub fn quotient(args: &QuotientArgs) -> Result<bool> {
    let t = args.carrier.load_finite()?;
    let s = parse_elem_set(&args.sub, t.order())?;
    let handle = subgyro_handle(&t, s).map_err(|e| anyhow!(e))?;
    if handle.is_subgyrogroup != TriState::Yes {
        bail!("{{{}}} is not a subgyrogroup", args.sub);
    }
    let dir = out_dir(&args.common.out)?;
    let (payload, ok) = match quotient_of(&t, &handle) {
        Ok(q) => {
            let named = q.table.clone().with_name("quotient");
            tablefile::write_plain(&dir.join("quotient.tbl"), &named)?;
            tablefile::write_json(&dir.join("quotient.json"), &named)?;
            println!(
                "quotient of order {} written; {} representative pairs verified",
                q.table.order(),
                q.pairs_verified
            );
            (
                QuotientPayload {
                    verdict: "pass",
                    quotient_order: Some(q.table.order()),
                    pairs_verified: Some(q.pairs_verified),
                    decomposition: Some(q.decomposition),
                    ill_defined_witness: None,
                    error: None,
                },
                true,
            )
        }
        Err(e @ SubgyroError::IllDefined { a, a_alt, b, b_alt }) => {
            println!("quotient ill-defined: {e}");
            (
                QuotientPayload {
                    verdict: "fail",
                    quotient_order: None,
                    pairs_verified: None,
                    decomposition: None,
                    ill_defined_witness: Some(vec![a, a_alt, b, b_alt]),
                    error: Some(e.to_string()),
                },
                false,
            )
        }
        Err(e @ SubgyroError::PartitionFailure { .. }) => {
            println!("partition failure: {e}");
            (
                QuotientPayload {
                    verdict: "fail",
                    quotient_order: None,
                    pairs_verified: None,
                    decomposition: None,
                    ill_defined_witness: None,
                    error: Some(e.to_string()),
                },
                false,
            )
        }
        Err(e) => return Err(anyhow!(e)),
    };
    write_json(
        &dir.join("quotient-report.json"),
        &Envelope::new(args.common.seed, t.descriptor(), payload),
    )?;
    Ok(ok)
}
