//! Artifact output: directory resolution, report envelopes, JSON and CSV
//! writing. Reports are byte-reproducible: the elapsed field is normalized
//! to zero and real timings go to stderr.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use gyrolab_core::{CarrierDescriptor, VerificationReport};

pub const OUT_ENV: &str = "GYROLAB_OUT";

/// The output directory: `--out`, else `$GYROLAB_OUT`, else the working
/// directory. Created if missing.
pub fn out_dir(flag: &Option<PathBuf>) -> Result<PathBuf> {
    let dir = flag
        .clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    Ok(dir)
}

/// Common report header plus a command-specific payload.
#[derive(Serialize)]
pub struct Envelope<T: Serialize> {
    /// The invoked command line, echoed verbatim.
    pub command: String,
    pub seed: u64,
    pub carrier: CarrierDescriptor,
    /// Normalized to 0 so reruns are byte-identical.
    pub elapsed_ms: u64,
    #[serde(flatten)]
    pub payload: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(seed: u64, carrier: CarrierDescriptor, payload: T) -> Self {
        Envelope {
            command: command_echo(),
            seed,
            carrier,
            elapsed_ms: 0,
            payload,
        }
    }
}

pub fn command_echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

/// Serialized form of a verification report with a one-word verdict.
#[derive(Serialize)]
pub struct ReportPayload {
    pub verdict: &'static str,
    pub report: VerificationReport,
}

impl ReportPayload {
    pub fn new(report: VerificationReport) -> Self {
        ReportPayload {
            verdict: if report.all_pass() { "pass" } else { "fail" },
            report,
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Fixed 12-significant-digit decimal formatting for grid output.
pub fn fmt_sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v:.11}");
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::fmt_sig12;

    #[test]
    fn sig12_examples() {
        assert_eq!(fmt_sig12(0.95), "0.950000000000");
        assert_eq!(fmt_sig12(1.0), "1.00000000000");
        assert_eq!(fmt_sig12(0.0078125), "0.00781250000000");
        assert_eq!(fmt_sig12(0.0), "0.00000000000");
        assert_eq!(fmt_sig12(-0.5), "-0.500000000000");
    }
}
