use std::time::Instant;

use anyhow::Result;
use serde::Serialize;

use gyrolab_core::{
    gyr_consistency_check, is_degenerate_group, verify_axioms, FiniteGyrogroupTable, Gyrogroup,
    VerificationReport, VerifyConfig,
};

use crate::args::{with_carrier, AnyCarrier, VerifyArgs};
use crate::output::{out_dir, write_json, Envelope};
use crate::tablefile;

#[derive(Serialize)]
struct VerifyPayload {
    verdict: &'static str,
    degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    degeneracy_witness: Option<Vec<String>>,
    report: VerificationReport,
}

pub fn run(args: &VerifyArgs) -> Result<bool> {
    // Table files are verified even when invalid: parse without validation
    // and let the engine surface the violated axiom in the report.
    let any = if let Some(path) = &args.carrier.table {
        let (rows, name) = tablefile::parse_table_file(path)?;
        let mut t = FiniteGyrogroupTable::new_unchecked(rows);
        if let Some(n) = name {
            t = t.with_name(&n);
        }
        AnyCarrier::Finite(t)
    } else {
        args.carrier.load()?
    };
    with_carrier!(&any, |c| run_on(c, args))
}

fn run_on<C: Gyrogroup>(c: &C, args: &VerifyArgs) -> Result<bool> {
    let start = Instant::now();
    let cfg = VerifyConfig::new(args.common.samples, args.common.seed);
    let mut report = verify_axioms(c, &cfg);
    for p in gyr_consistency_check(c, cfg.budget, cfg.seed, args.consistency_tol).properties {
        report.push(p);
    }
    let degeneracy = is_degenerate_group(c, cfg.budget, cfg.seed);
    let all_pass = report.all_pass();

    print!("{}", report.summary());
    println!(
        "carrier is {} ({})",
        if degeneracy.degenerate {
            "degenerate (a group on the checked sample)"
        } else {
            "a genuine gyrogroup"
        },
        if degeneracy.exhaustive {
            "exhaustive"
        } else {
            "sampled"
        },
    );
    println!("verdict: {}", if all_pass { "pass" } else { "FAIL" });
    eprintln!("elapsed: {:?}", start.elapsed());

    let payload = VerifyPayload {
        verdict: if all_pass { "pass" } else { "fail" },
        degenerate: degeneracy.degenerate,
        degeneracy_witness: degeneracy
            .witness
            .map(|(a, b, z)| vec![c.label(&a), c.label(&b), c.label(&z)]),
        report,
    };
    let dir = out_dir(&args.common.out)?;
    write_json(
        &dir.join("verify.json"),
        &Envelope::new(args.common.seed, c.descriptor(), payload),
    )?;
    Ok(all_pass)
}
