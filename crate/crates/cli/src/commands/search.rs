//! Table search: enumerate gyrogroups of a given order within a node
//! budget and write each find as a table file.

use anyhow::{anyhow, Result};
use serde::Serialize;

use gyrolab_core::{search_small, CarrierDescriptor, Gyrogroup};

use crate::args::SearchArgs;
use crate::output::{out_dir, write_json, Envelope};
use crate::tablefile;

#[derive(Serialize)]
struct SearchPayload {
    order: usize,
    budget: u64,
    nodes_used: u64,
    complete: bool,
    count: usize,
    degenerate_count: usize,
    tables: Vec<Vec<Vec<usize>>>,
}

pub fn run(args: &SearchArgs) -> Result<bool> {
    let out = search_small(args.order, args.budget).map_err(|e| anyhow!(e))?;
    let dir = out_dir(&args.common.out)?;

    let mut tables = Vec::with_capacity(out.tables.len());
    let mut degenerate_count = 0;
    for (k, table) in out.tables.iter().enumerate() {
        if table.is_degenerate() {
            degenerate_count += 1;
        }
        let named = table
            .clone()
            .with_name(&format!("search-{}-{k}", args.order));
        tablefile::write_plain(&dir.join(format!("search-{}-{k}.tbl", args.order)), &named)?;
        tables.push(table.rows());
    }

    println!(
        "order {}: {} table(s) ({} degenerate, {} non-degenerate), {} nodes, {}",
        args.order,
        out.tables.len(),
        degenerate_count,
        out.tables.len() - degenerate_count,
        out.nodes_used,
        if out.complete {
            "enumeration complete"
        } else {
            "budget exhausted (partial)"
        }
    );

    let descriptor = out
        .tables
        .first()
        .map(|t| t.descriptor())
        .unwrap_or_else(|| CarrierDescriptor::new("finite-table"));
    let complete = out.complete;
    let payload = SearchPayload {
        order: args.order,
        budget: args.budget,
        nodes_used: out.nodes_used,
        complete,
        count: out.tables.len(),
        degenerate_count,
        tables,
    };
    write_json(
        &dir.join("search.json"),
        &Envelope::new(args.common.seed, descriptor, payload),
    )?;
    Ok(complete || !args.common.strict)
}
