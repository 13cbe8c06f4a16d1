//! Prenorm and metric commands, finite and disk lanes.

use std::fmt::Write as _;
use std::fs;
use std::time::Instant;

use anyhow::{anyhow, Result};
use serde::Serialize;

use gyrolab_core::prenorm::disk::{
    build_disk_family, disk_metric_check, disk_prenorm_check, symmetric_sup_set, DiskCheckConfig,
    DiskPrenorm,
};
use gyrolab_core::prenorm::{
    build_dyadic_family, coset_metric, metric_check, prenorm_check, prenorm_table,
};
use gyrolab_core::subgyro::subgyro_handle;
use gyrolab_core::{BallChain, FiniteChain, Gyrogroup, VerificationReport};

use crate::args::{parse_chain_sets, parse_radii, MetricArgs, PrenormArgs};
use crate::output::{fmt_sig12, out_dir, write_json, Envelope, ReportPayload};

fn default_ball_chain(spec: &Option<String>, len: usize) -> Result<BallChain> {
    match spec {
        Some(s) => parse_radii(s, len),
        None => BallChain::geometric(1.0 / 3.0, 1.0 / 3.0, len).map_err(|e| anyhow!(e)),
    }
}

fn print_report(report: &VerificationReport) {
    print!("{}", report.summary());
    println!(
        "verdict: {}",
        if report.all_pass() { "pass" } else { "FAIL" }
    );
}

#[derive(Serialize)]
struct FinitePrenormPayload {
    verdict: &'static str,
    depth: u32,
    f_values: Vec<f64>,
    n_values: Vec<f64>,
    report: VerificationReport,
}

#[derive(Serialize)]
struct DiskPrenormPayload {
    verdict: &'static str,
    depth: u32,
    /// `f` over-estimates the true infimum by at most this much; the
    /// sampled sup under-estimates `N` one-sidedly.
    f_error_bound: f64,
    sup_set_size: usize,
    grid_points: usize,
    report: VerificationReport,
}

pub fn prenorm(args: &PrenormArgs) -> Result<bool> {
    let dir = out_dir(&args.common.out)?;
    let start = Instant::now();

    if args.carrier.mobius {
        let disk = args.carrier.disk()?;
        let chain = default_ball_chain(&args.radii, args.depth as usize + 1)?;
        let cfg = DiskCheckConfig {
            grid_width: args.grid,
            extent: args.extent,
            sup_samples: args.sup_samples,
            budget: args.budget,
            seed: args.common.seed,
            gyr_tol: args.gyr_tol,
        };
        let (report, grid, fam) =
            disk_prenorm_check(&disk, &chain, args.depth, &cfg).map_err(|e| anyhow!(e))?;

        let mut csv = String::from("x,y,N\n");
        for (i, &(x, y)) in grid.points.iter().enumerate() {
            let _ = writeln!(
                csv,
                "{},{},{}",
                fmt_sig12(x),
                fmt_sig12(y),
                fmt_sig12(grid.n_values[i])
            );
        }
        fs::write(dir.join("prenorm-grid.csv"), csv)?;

        print_report(&report);
        eprintln!("elapsed: {:?}", start.elapsed());
        let ok = report.all_pass();
        let payload = DiskPrenormPayload {
            verdict: if ok { "pass" } else { "fail" },
            depth: args.depth,
            f_error_bound: fam.f_error_bound(),
            sup_set_size: 2 * (args.sup_samples / 2) + 1,
            grid_points: grid.points.len(),
            report,
        };
        write_json(
            &dir.join("prenorm.json"),
            &Envelope::new(args.common.seed, disk.descriptor(), payload),
        )?;
        return Ok(ok);
    }

    let t = args.carrier.load_finite()?;
    let sets = args
        .sets
        .as_ref()
        .ok_or_else(|| anyhow!("finite prenorm needs --sets \"…;…\""))?;
    let chain = FiniteChain::new(parse_chain_sets(sets, t.order())?).map_err(|e| anyhow!(e))?;
    let (report, tab) = prenorm_check(&t, &chain, args.depth).map_err(|e| anyhow!(e))?;
    print_report(&report);
    eprintln!("elapsed: {:?}", start.elapsed());
    let ok = report.all_pass();
    let payload = FinitePrenormPayload {
        verdict: if ok { "pass" } else { "fail" },
        depth: args.depth,
        f_values: tab.f_values.clone(),
        n_values: tab.n_values.clone(),
        report,
    };
    write_json(
        &dir.join("prenorm.json"),
        &Envelope::new(args.common.seed, t.descriptor(), payload),
    )?;
    Ok(ok)
}

#[derive(Serialize)]
struct FiniteMetricPayload {
    verdict: &'static str,
    subgroup: Vec<usize>,
    representatives: Vec<usize>,
    /// `rho[i][j]` between the i-th and j-th coset representatives.
    rho: Vec<Vec<f64>>,
    report: VerificationReport,
}

pub fn metric(args: &MetricArgs) -> Result<bool> {
    let dir = out_dir(&args.common.out)?;

    if args.carrier.mobius {
        let disk = args.carrier.disk()?;
        let chain = default_ball_chain(&args.radii, args.depth as usize + 1)?;
        let fam = build_disk_family(&disk, &chain, args.depth).map_err(|e| anyhow!(e))?;
        let sup = symmetric_sup_set(&disk, args.sup_samples, args.common.seed);
        let pren = DiskPrenorm::new(&fam, sup);
        let report = disk_metric_check(&disk, &pren, args.budget, args.common.seed);
        print_report(&report);
        let ok = report.all_pass();
        write_json(
            &dir.join("metric.json"),
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
        .ok_or_else(|| anyhow!("finite metric needs --sets \"…;…\""))?;
    let chain = FiniteChain::new(parse_chain_sets(sets, t.order())?).map_err(|e| anyhow!(e))?;
    let fam = build_dyadic_family(&t, &chain, args.depth).map_err(|e| anyhow!(e))?;
    let tab = prenorm_table(&t, &fam);
    let p = subgyro_handle(&t, chain.bottom().clone()).map_err(|e| anyhow!(e))?;
    let report = metric_check(&t, &p, &tab).map_err(|e| anyhow!(e))?;

    let dec = gyrolab_core::subgyro::left_cosets(&t, &p).map_err(|e| anyhow!(e))?;
    let rho: Result<Vec<Vec<f64>>> = dec
        .representatives
        .iter()
        .map(|&a| {
            dec.representatives
                .iter()
                .map(|&b| coset_metric(&t, &p, &tab, a, b).map_err(|e| anyhow!(e)))
                .collect()
        })
        .collect();
    let rho = rho?;

    print_report(&report);
    let ok = report.all_pass();
    let payload = FiniteMetricPayload {
        verdict: if ok { "pass" } else { "fail" },
        subgroup: p.members().indices(),
        representatives: dec.representatives.clone(),
        rho,
        report,
    };
    write_json(
        &dir.join("metric.json"),
        &Envelope::new(args.common.seed, t.descriptor(), payload),
    )?;
    Ok(ok)
}
