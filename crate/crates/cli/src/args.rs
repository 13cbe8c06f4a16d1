//! Argument surface: subcommands, carrier selection, and shared flags.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use gyrolab_core::carriers::product::materialize_product;
use gyrolab_core::carriers::table::cyclic_group;
use gyrolab_core::{klein_four, ElemSet, FiniteGyrogroupTable, MobiusDisk, ProductCarrier};

use crate::tablefile;

#[derive(Parser)]
#[command(
    name = "gyrolab",
    version,
    about = "Gyrogroup verification, coset spaces, and prenorm metrics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Verify the gyrogroup axioms and cancellation identities
    Verify(VerifyArgs),
    /// Emit the gyration permutation tables of a finite carrier
    GyrTable(GyrTableArgs),
    /// Check, generate, or sample subgyrogroups
    Subgyro(SubgyroArgs),
    /// Decompose a finite carrier into left cosets
    Cosets(CosetsArgs),
    /// Build and verify the quotient table over a subgyrogroup
    Quotient(QuotientArgs),
    /// Check the set-level disjointness equivalence
    Setcheck(SetcheckArgs),
    /// Validate a neighborhood chain at the identity
    Chain(ChainArgs),
    /// Build the dyadic prenorm and verify its properties
    Prenorm(PrenormArgs),
    /// Build the coset-space metric and verify the metric axioms
    Metric(MetricArgs),
    /// Run the escape probe for small subgyrogroups
    Probe(ProbeArgs),
    /// Enumerate gyrogroup tables of a given order
    Search(SearchArgs),
}

/// Carrier selection, shared by most subcommands.
#[derive(Args, Debug, Clone, Default)]
pub struct CarrierArgs {
    /// Use the Möbius disk carrier
    #[arg(long)]
    pub mobius: bool,
    /// Cyclic group of order N
    #[arg(long, value_name = "N")]
    pub cyclic: Option<usize>,
    /// Klein four-group
    #[arg(long)]
    pub klein: bool,
    /// Load a gyrotable file (plain text or JSON mirror)
    #[arg(long, value_name = "PATH")]
    pub table: Option<PathBuf>,
    /// Product of two base carriers, e.g. "cyclic:4,mobius" or
    /// "table:z4.tbl,cyclic:2"
    #[arg(long, value_name = "A,B")]
    pub product: Option<String>,
    /// Disk equality tolerance
    #[arg(long, default_value_t = MobiusDisk::DEFAULT_TOLERANCE)]
    pub tol: f64,
    /// Disk sampling guard radius
    #[arg(long, default_value_t = MobiusDisk::DEFAULT_GUARD_RADIUS)]
    pub guard: f64,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Seed for every randomized check
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sample budget per property on infinite carriers
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    /// Output directory (default: $GYROLAB_OUT or ".")
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Treat budget or cap exhaustion as failure
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub carrier: CarrierArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Tolerance for the closed-form vs derived gyration comparison
    #[arg(long, default_value_t = 1e-12)]
    pub consistency_tol: f64,
}

#[derive(Args)]
pub struct GyrTableArgs {
    #[command(flatten)]
    pub carrier: CarrierArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args)]
pub struct SubgyroArgs {
    #[command(flatten)]
    pub carrier: CarrierArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Candidate member set, e.g. "0,2" (finite carriers)
    #[arg(long, value_name = "LIST")]
    pub set: Option<String>,
    /// Seeds for the generated closure, e.g. "1" or "0.1" on the disk
    #[arg(long, value_name = "LIST")]
    pub seeds: Option<String>,
    /// Candidate ball radius for the sampled disk check
    #[arg(long, value_name = "R")]
    pub ball: Option<f64>,
    /// Element cap for generated closures on the disk
    #[arg(long, default_value_t = 64)]
    pub cap: usize,
}

#[derive(Args)]
pub struct CosetsArgs {
    #[command(flatten)]
    pub carrier: CarrierArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Subgyrogroup members, e.g. "0,2"
    #[arg(long, value_name = "LIST")]
    pub sub: String,
}

#[derive(Args)]
pub struct QuotientArgs {
    #[command(flatten)]
    pub carrier: CarrierArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Subgyrogroup members, e.g. "0,2"
    #[arg(long, value_name = "LIST")]
    pub sub: String,
}

#[derive(Args)]
pub struct SetcheckArgs {
    #[command(flatten)]
    pub carrier: CarrierArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// First set, e.g. "1"
    #[arg(long, value_name = "LIST")]
    pub a: Option<String>,
    /// Second set
    #[arg(long, value_name = "LIST")]
    pub b: Option<String>,
    /// Third set
    #[arg(long, value_name = "LIST")]
    pub c: Option<String>,
    /// Check all subset triples (order ≤ 4)
    #[arg(long)]
    pub exhaustive: bool,
}

#[derive(Args)]
pub struct ChainArgs {
    #[command(flatten)]
    pub carrier: CarrierArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Which conditions to validate
    #[arg(long, default_value = "prenorm", value_parser = ["prenorm", "base", "invariant"])]
    pub check: String,
    /// Disk radii: "harmonic", "geometric:R0,RATIO", or "list:r0,r1,…"
    #[arg(long, value_name = "SPEC")]
    pub radii: Option<String>,
    /// Chain length for generated radii
    #[arg(long, default_value_t = 8)]
    pub len: usize,
    /// Finite chain levels, e.g. "0,1,2,3;0,2;0"
    #[arg(long, value_name = "SETS")]
    pub sets: Option<String>,
    /// Reference chain for base/invariant modes (same grammar)
    #[arg(long, value_name = "SPEC")]
    pub base_radii: Option<String>,
    #[arg(long, value_name = "SETS")]
    pub base_sets: Option<String>,
    /// Invariant set F: ball radius on the disk
    #[arg(long, value_name = "R")]
    pub f_ball: Option<f64>,
    /// Invariant set F: member list on finite carriers
    #[arg(long, value_name = "LIST")]
    pub f_set: Option<String>,
}

#[derive(Args)]
pub struct PrenormArgs {
    #[command(flatten)]
    pub carrier: CarrierArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Dyadic depth (f is resolved to 1/2^depth)
    #[arg(long, default_value_t = 12)]
    pub depth: u32,
    /// Finite chain levels, e.g. "0,1,2,3;0,2;0"
    #[arg(long, value_name = "SETS")]
    pub sets: Option<String>,
    /// Disk radii (default geometric:1/3,1/3)
    #[arg(long, value_name = "SPEC")]
    pub radii: Option<String>,
    /// Level-set grid width (disk)
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    /// Grid extent (disk)
    #[arg(long, default_value_t = 0.95)]
    pub extent: f64,
    /// Sup-set sample count (disk)
    #[arg(long, default_value_t = 1000)]
    pub sup_samples: usize,
    /// Sampled checks per property (disk)
    #[arg(long, default_value_t = 400)]
    pub budget: u64,
    /// Tolerance for the gyration-invariance comparison (disk)
    #[arg(long, default_value_t = 1e-6)]
    pub gyr_tol: f64,
}

#[derive(Args)]
pub struct MetricArgs {
    #[command(flatten)]
    pub carrier: CarrierArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 12)]
    pub depth: u32,
    #[arg(long, value_name = "SETS")]
    pub sets: Option<String>,
    #[arg(long, value_name = "SPEC")]
    pub radii: Option<String>,
    /// Sup-set sample count (disk)
    #[arg(long, default_value_t = 1000)]
    pub sup_samples: usize,
    /// Sampled checks per property (disk)
    #[arg(long, default_value_t = 400)]
    pub budget: u64,
}

#[derive(Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub carrier: CarrierArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Probe point: an index on finite carriers, "re,im" or "re" on the disk
    #[arg(long, value_name = "ELEM")]
    pub x: String,
    /// Open-ball radius (disk)
    #[arg(long, value_name = "R")]
    pub radius: Option<f64>,
    /// Explicit neighborhood U (finite), e.g. "0,2"
    #[arg(long, value_name = "LIST")]
    pub set: Option<String>,
    /// Iteration cap
    #[arg(long, default_value_t = 64)]
    pub cap: u32,
}

#[derive(Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Table order to enumerate
    #[arg(long, value_name = "N")]
    pub order: usize,
    /// Backtracking node budget
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
}

/// A loaded carrier of any supported shape.
pub enum AnyCarrier {
    Finite(FiniteGyrogroupTable),
    Mobius(MobiusDisk),
    FinFin(ProductCarrier<FiniteGyrogroupTable, FiniteGyrogroupTable>),
    FinDisk(ProductCarrier<FiniteGyrogroupTable, MobiusDisk>),
    DiskFin(ProductCarrier<MobiusDisk, FiniteGyrogroupTable>),
    DiskDisk(ProductCarrier<MobiusDisk, MobiusDisk>),
}

/// Runs a generic closure against whatever carrier was selected.
macro_rules! with_carrier {
    ($any:expr, |$c:ident| $body:expr) => {
        match $any {
            $crate::args::AnyCarrier::Finite($c) => $body,
            $crate::args::AnyCarrier::Mobius($c) => $body,
            $crate::args::AnyCarrier::FinFin($c) => $body,
            $crate::args::AnyCarrier::FinDisk($c) => $body,
            $crate::args::AnyCarrier::DiskFin($c) => $body,
            $crate::args::AnyCarrier::DiskDisk($c) => $body,
        }
    };
}
pub(crate) use with_carrier;

enum BaseCarrier {
    Finite(FiniteGyrogroupTable),
    Mobius(MobiusDisk),
}

impl CarrierArgs {
    fn base_count(&self) -> usize {
        usize::from(self.mobius)
            + usize::from(self.cyclic.is_some())
            + usize::from(self.klein)
            + usize::from(self.table.is_some())
            + usize::from(self.product.is_some())
    }

    pub fn disk(&self) -> Result<MobiusDisk> {
        MobiusDisk::new(self.tol, self.guard).map_err(|e| anyhow!(e))
    }

    fn base_from_spec(&self, spec: &str) -> Result<BaseCarrier> {
        if spec == "mobius" {
            return Ok(BaseCarrier::Mobius(self.disk()?));
        }
        if spec == "klein" {
            return Ok(BaseCarrier::Finite(klein_four()));
        }
        if let Some(n) = spec.strip_prefix("cyclic:") {
            let n: usize = n.parse().context("cyclic order")?;
            return Ok(BaseCarrier::Finite(
                cyclic_group(n).map_err(|e| anyhow!(e))?,
            ));
        }
        if let Some(path) = spec.strip_prefix("table:") {
            return Ok(BaseCarrier::Finite(tablefile::read_table(path.as_ref())?));
        }
        bail!("unknown carrier spec '{spec}' (want mobius, klein, cyclic:N, table:PATH)")
    }

    /// Loads whatever carrier the flags select.
    pub fn load(&self) -> Result<AnyCarrier> {
        if self.base_count() != 1 {
            bail!("select exactly one carrier: --mobius, --cyclic N, --klein, --table PATH, or --product A,B");
        }
        if self.mobius {
            return Ok(AnyCarrier::Mobius(self.disk()?));
        }
        if let Some(n) = self.cyclic {
            return Ok(AnyCarrier::Finite(cyclic_group(n).map_err(|e| anyhow!(e))?));
        }
        if self.klein {
            return Ok(AnyCarrier::Finite(klein_four()));
        }
        if let Some(path) = &self.table {
            return Ok(AnyCarrier::Finite(tablefile::read_table(path)?));
        }
        let spec = self.product.as_ref().expect("checked by base_count");
        let (left, right) = spec
            .split_once(',')
            .ok_or_else(|| anyhow!("--product wants two comma-separated specs"))?;
        let left = self.base_from_spec(left.trim())?;
        let right = self.base_from_spec(right.trim())?;
        Ok(match (left, right) {
            (BaseCarrier::Finite(l), BaseCarrier::Finite(r)) => {
                AnyCarrier::FinFin(ProductCarrier::new(l, r))
            }
            (BaseCarrier::Finite(l), BaseCarrier::Mobius(r)) => {
                AnyCarrier::FinDisk(ProductCarrier::new(l, r))
            }
            (BaseCarrier::Mobius(l), BaseCarrier::Finite(r)) => {
                AnyCarrier::DiskFin(ProductCarrier::new(l, r))
            }
            (BaseCarrier::Mobius(l), BaseCarrier::Mobius(r)) => {
                AnyCarrier::DiskDisk(ProductCarrier::new(l, r))
            }
        })
    }

    /// Loads a single finite table, materializing finite products.
    pub fn load_finite(&self) -> Result<FiniteGyrogroupTable> {
        match self.load()? {
            AnyCarrier::Finite(t) => Ok(t),
            AnyCarrier::FinFin(p) => {
                materialize_product(p.left(), p.right()).map_err(|e| anyhow!(e))
            }
            _ => bail!("this command needs a finite carrier"),
        }
    }
}

/// Parses "0,2,3" into an exact set over a carrier of order `n`.
pub fn parse_elem_set(list: &str, n: usize) -> Result<ElemSet> {
    let indices = parse_indices(list)?;
    ElemSet::from_indices(n, &indices).map_err(|e| anyhow!(e))
}

pub fn parse_indices(list: &str) -> Result<Vec<usize>> {
    list.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .with_context(|| format!("bad element index '{tok}'"))
        })
        .collect()
}

/// Parses "0,1,2,3;0,2;0" into chain levels.
pub fn parse_chain_sets(spec: &str, n: usize) -> Result<Vec<ElemSet>> {
    spec.split(';')
        .map(|part| parse_elem_set(part, n))
        .collect()
}

/// Parses "re" or "re,im" into a disk point.
pub fn parse_complex(spec: &str) -> Result<Complex64> {
    let (re, im) = match spec.split_once(',') {
        Some((re, im)) => (re.trim(), im.trim()),
        None => (spec.trim(), "0"),
    };
    Ok(Complex64::new(
        re.parse::<f64>()
            .with_context(|| format!("bad real part '{re}'"))?,
        im.parse::<f64>()
            .with_context(|| format!("bad imaginary part '{im}'"))?,
    ))
}

/// Parses a radii spec: "harmonic", "geometric:R0,RATIO", or
/// "list:r0,r1,…". `len` applies to the generated forms.
pub fn parse_radii(spec: &str, len: usize) -> Result<gyrolab_core::BallChain> {
    use gyrolab_core::BallChain;
    if spec == "harmonic" {
        return Ok(BallChain::harmonic(len));
    }
    if let Some(rest) = spec.strip_prefix("geometric:") {
        let (r0, ratio) = rest
            .split_once(',')
            .ok_or_else(|| anyhow!("geometric wants <r0>,<ratio>"))?;
        return BallChain::geometric(
            r0.trim().parse().context("r0")?,
            ratio.trim().parse().context("ratio")?,
            len,
        )
        .map_err(|e| anyhow!(e));
    }
    if let Some(rest) = spec.strip_prefix("list:") {
        let radii: Result<Vec<f64>> = rest
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .with_context(|| format!("bad radius '{t}'"))
            })
            .collect();
        return BallChain::new(radii?).map_err(|e| anyhow!(e));
    }
    bail!("unknown radii spec '{spec}' (want harmonic, geometric:<r0>,<ratio>, or list:…)")
}
