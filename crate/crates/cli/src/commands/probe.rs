//! The no-small-subgyrogroup escape probe.

use anyhow::{anyhow, bail, Result};
use serde::Serialize;

use gyrolab_core::subgyro::{nss_probe_disk, nss_probe_finite, NssDiskOutcome, NssFiniteOutcome};
use gyrolab_core::Gyrogroup;

use crate::args::{parse_complex, parse_elem_set, ProbeArgs};
use crate::output::{out_dir, write_json, Envelope};

#[derive(Serialize)]
struct ProbePayload {
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    step: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    moduli: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    escape_element: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    contained_subgyrogroup: Option<Vec<usize>>,
    cap: u32,
}

pub fn run(args: &ProbeArgs) -> Result<bool> {
    let dir = out_dir(&args.common.out)?;

    if args.carrier.mobius {
        let disk = args.carrier.disk()?;
        let x = parse_complex(&args.x)?;
        let radius = args
            .radius
            .ok_or_else(|| anyhow!("disk probe needs --radius"))?;
        let outcome = nss_probe_disk(&disk, x, radius, args.cap).map_err(|e| anyhow!(e))?;
        let (payload, ok) = match outcome {
            NssDiskOutcome::Escaped { step, moduli } => {
                println!(
                    "escaped the open ball of radius {radius} at step {step}; moduli {moduli:?}"
                );
                (
                    ProbePayload {
                        outcome: "escaped",
                        step: Some(step),
                        moduli: Some(moduli),
                        escape_element: None,
                        contained_subgyrogroup: None,
                        cap: args.cap,
                    },
                    true,
                )
            }
            NssDiskOutcome::CapExhausted { moduli } => {
                println!(
                    "cap {} exhausted; inconclusive (moduli reach {:?})",
                    args.cap,
                    moduli.last()
                );
                (
                    ProbePayload {
                        outcome: "cap_exhausted",
                        step: None,
                        moduli: Some(moduli),
                        escape_element: None,
                        contained_subgyrogroup: None,
                        cap: args.cap,
                    },
                    !args.common.strict,
                )
            }
        };
        write_json(
            &dir.join("probe.json"),
            &Envelope::new(args.common.seed, disk.descriptor(), payload),
        )?;
        return Ok(ok);
    }

    let t = args.carrier.load_finite()?;
    let x: usize = args
        .x
        .trim()
        .parse()
        .map_err(|_| anyhow!("finite probe point must be an element index"))?;
    let Some(set) = &args.set else {
        bail!("finite probe needs --set <list> as the neighborhood U");
    };
    let u = parse_elem_set(set, t.order())?;
    let outcome = nss_probe_finite(&t, x, &u).map_err(|e| anyhow!(e))?;
    let payload = match outcome {
        NssFiniteOutcome::Escaped { step, element } => {
            println!("escaped U at iteration {step} through element {element}");
            ProbePayload {
                outcome: "escaped",
                step: Some(step),
                moduli: None,
                escape_element: Some(element.to_string()),
                contained_subgyrogroup: None,
                cap: args.cap,
            }
        }
        NssFiniteOutcome::Contained { subgyrogroup } => {
            let members = subgyrogroup.indices();
            println!("closure stabilized inside U: subgyrogroup {{{members:?}}}");
            ProbePayload {
                outcome: "contained",
                step: None,
                moduli: None,
                escape_element: None,
                contained_subgyrogroup: Some(members),
                cap: args.cap,
            }
        }
    };
    write_json(
        &dir.join("probe.json"),
        &Envelope::new(args.common.seed, t.descriptor(), payload),
    )?;
    Ok(true)
}
