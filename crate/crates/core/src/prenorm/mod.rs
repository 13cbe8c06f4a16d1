//! The dyadic prenorm construction and the induced (pseudo)metrics.
//!
//! From a validated neighborhood chain `U₀ ⊇ U₁ ⊇ …` a family of sets
//! `V(m/2ⁿ)` is assembled by the rules
//!
//! * `V(1) = U₀`, `V(1/2ⁿ) = Uₙ`,
//! * `V(2m/2ⁿ) = V(m/2ⁿ⁻¹)`,
//! * `V((2m+1)/2ⁿ) = Uₙ ⊕ V(m/2ⁿ⁻¹)`,
//! * `V(m/2ⁿ) = G` for `m > 2ⁿ`,
//!
//! after which `f(x) = inf { r : x ∈ V(r) }` and
//! `N(x) = sup_y |f(x ⊕ y) - f(y)|`. On a finite carrier with a
//! stabilizing chain both are computed exactly; `N` is then subadditive,
//! symmetric, invariant under gyrations (when the chain is), and squeezes
//! the chain levels between its sublevel sets. `d(x, y) = |N(x) - N(y)|`
//! is a pseudometric and
//! `ϱ(π(x), π(y)) = d(⊖x ⊕ y, 0) + d(⊖y ⊕ x, 0)` is a metric on the
//! coset space over the chain bottom.
//!
//! This module is the exact finite-carrier lane; [`disk`] holds the
//! sampled Möbius-disk lane.
//!
//! ```
//! use gyrolab_core::prenorm::{build_dyadic_family, prenorm_table};
//! use gyrolab_core::{cyclic_group, ElemSet, FiniteChain};
//!
//! let z4 = cyclic_group(4)?;
//! let chain = FiniteChain::new(vec![
//!     ElemSet::full(4),
//!     ElemSet::from_indices(4, &[0, 2])?,
//!     ElemSet::singleton(4, 0)?,
//! ])?;
//! let family = build_dyadic_family(&z4, &chain, 12)?;
//! let table = prenorm_table(&z4, &family);
//! assert_eq!(table.f_values, vec![0.0, 1.0, 0.5, 1.0]);
//! assert_eq!(table.n_values, vec![0.0, 1.0, 0.5, 1.0]);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod disk;

use thiserror::Error;

use crate::carriers::table::FiniteGyrogroupTable;
use crate::report::{Counterexample, VerificationReport};
use crate::sets::chain::{validate_finite_chain, ChainMode, FiniteChain};
use crate::sets::{property_from, set_add, ElemSet, SetError};
use crate::subgyro::{left_cosets, SubgyroError, SubgyroHandle};

/// Hard cap on the dyadic depth (the family holds `2^depth` sets).
pub const DEPTH_CAP: u32 = 16;
/// Default depth; `f` over-estimates the true infimum by at most
/// `1/2^depth` on non-stabilized chains.
pub const DEFAULT_DEPTH: u32 = 12;

#[derive(Debug, Clone, Error)]
pub enum PrenormError {
    #[error("chain failed prenorm validation:\n{}", summary)]
    ChainInvalid { summary: String },
    #[error("family recursion violated V(1/2^{n}) ⊕ V({m}/2^{n}) ⊆ V({}/2^{n})", m + 1)]
    FamilyInconsistent { n: u32, m: u64 },
    #[error("depth {depth} exceeds cap {cap}")]
    DepthTooLarge { depth: u32, cap: u32 },
    #[error("chain holds {len} levels but depth {depth} requires {}", depth + 1)]
    ChainTooShort { len: usize, depth: u32 },
    #[error("subgyrogroup does not equal the chain bottom the table was built over")]
    ChainMismatch,
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Subgyro(#[from] SubgyroError),
}

/// The sets `V(m/2^depth)`, `m = 1..=2^depth`, over a finite carrier.
#[derive(Debug, Clone)]
pub struct DyadicFamily {
    depth: u32,
    sets: Vec<ElemSet>,
    bottom: ElemSet,
}

impl DyadicFamily {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `V(m/2^depth)` for `m = 1..=2^depth`.
    pub fn level_set(&self, m: usize) -> Option<&ElemSet> {
        self.sets.get(m.checked_sub(1)?)
    }

    /// The stabilized chain bottom `P = ⋂ₙ Uₙ`.
    pub fn bottom(&self) -> &ElemSet {
        &self.bottom
    }

    /// `f(x)`: the minimal stored dyadic `r` with `x ∈ V(r)`. Elements of
    /// the stabilized bottom lie in every level, so their infimum is 0
    /// exactly. Values never exceed `1 + 1/2^depth`.
    pub fn f_value(&self, x: usize) -> f64 {
        if self.bottom.contains(x) {
            return 0.0;
        }
        let pos = self.sets.partition_point(|s| !s.contains(x));
        let scale = (1u64 << self.depth) as f64;
        if pos == self.sets.len() {
            1.0 + 1.0 / scale
        } else {
            (pos as f64 + 1.0) / scale
        }
    }

    pub fn f_error_bound(&self) -> f64 {
        1.0 / (1u64 << self.depth) as f64
    }
}

/// Assembles the dyadic family over a prenorm-validated chain and checks
/// the recursion's inclusion `V(1/2ⁿ) ⊕ V(m/2ⁿ) ⊆ V((m+1)/2ⁿ)` exactly at
/// every depth.
pub fn build_dyadic_family(
    c: &FiniteGyrogroupTable,
    chain: &FiniteChain,
    depth: u32,
) -> Result<DyadicFamily, PrenormError> {
    if depth > DEPTH_CAP {
        return Err(PrenormError::DepthTooLarge {
            depth,
            cap: DEPTH_CAP,
        });
    }
    let report = validate_finite_chain(c, chain, ChainMode::Prenorm);
    if !report.all_pass() {
        return Err(PrenormError::ChainInvalid {
            summary: report.summary(),
        });
    }

    let mut row: Vec<ElemSet> = vec![chain.level(0).clone()];
    for n in 1..=depth {
        let u_n = chain.level(n as usize);
        let size = 1usize << n;
        let mut next = Vec::with_capacity(size);
        for m in 1..=size {
            let v = if m == 1 {
                u_n.clone()
            } else if m % 2 == 0 {
                row[m / 2 - 1].clone()
            } else {
                set_add(c, u_n, &row[(m - 1) / 2 - 1])?
            };
            next.push(v);
        }
        for m in 1..size {
            let lhs = set_add(c, u_n, &next[m - 1])?;
            if !lhs.is_subset(&next[m]) {
                return Err(PrenormError::FamilyInconsistent { n, m: m as u64 });
            }
        }
        row = next;
    }

    Ok(DyadicFamily {
        depth,
        sets: row,
        bottom: chain.bottom().clone(),
    })
}

/// Exact `f` and `N` values for every element of a finite carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct PrenormTable {
    pub f_values: Vec<f64>,
    pub n_values: Vec<f64>,
    depth: u32,
    bottom: ElemSet,
}

impl PrenormTable {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn bottom(&self) -> &ElemSet {
        &self.bottom
    }

    pub fn n_of(&self, x: usize) -> f64 {
        self.n_values[x]
    }

    pub fn f_of(&self, x: usize) -> f64 {
        self.f_values[x]
    }
}

/// `N(x) = max_y |f(x ⊕ y) - f(y)|` over an explicit sup set.
pub fn prenorm(
    c: &FiniteGyrogroupTable,
    fam: &DyadicFamily,
    x: usize,
    sup_set: impl IntoIterator<Item = usize>,
) -> f64 {
    sup_set
        .into_iter()
        .map(|y| (fam.f_value(c.op(x, y)) - fam.f_value(y)).abs())
        .fold(0.0, f64::max)
}

/// Tabulates `f` and `N` exactly (the sup ranges over the whole carrier).
pub fn prenorm_table(c: &FiniteGyrogroupTable, fam: &DyadicFamily) -> PrenormTable {
    let n = c.order();
    let f_values: Vec<f64> = (0..n).map(|x| fam.f_value(x)).collect();
    let n_values = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| (f_values[c.op(x, y)] - f_values[y]).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    PrenormTable {
        f_values,
        n_values,
        depth: fam.depth(),
        bottom: fam.bottom().clone(),
    }
}

/// Verifies the prenorm conclusions exhaustively: `N(0) = 0`,
/// subadditivity, symmetry, gyration invariance, the threshold property of
/// `f`, and the sandwich `{N < 1/2ⁿ} ⊆ Uₙ ⊆ {N ≤ 2/2ⁿ}` for every
/// `n ≤ depth`.
pub fn prenorm_check(
    c: &FiniteGyrogroupTable,
    chain: &FiniteChain,
    depth: u32,
) -> Result<(VerificationReport, PrenormTable), PrenormError> {
    let fam = build_dyadic_family(c, chain, depth)?;
    let tab = prenorm_table(c, &fam);
    let n = c.order();
    let mut report = VerificationReport::new(0, true);

    report.push(property_from(
        "pn1_zero",
        1,
        (tab.n_of(0) != 0.0).then(|| Counterexample {
            elements: vec!["0".to_string()],
            residual: tab.n_of(0),
        }),
        None,
    ));

    let mut cex = None;
    let mut checks = 0u64;
    'pn2: for x in 0..n {
        for y in 0..n {
            checks += 1;
            let lhs = tab.n_of(c.op(x, y));
            let rhs = tab.n_of(x) + tab.n_of(y);
            if lhs > rhs {
                cex = Some(Counterexample {
                    elements: vec![x.to_string(), y.to_string()],
                    residual: lhs - rhs,
                });
                break 'pn2;
            }
        }
    }
    report.push(property_from("pn2_subadditive", checks, cex, None));

    let mut cex = None;
    for x in 0..n {
        let diff = (tab.n_of(c.inv_of(x)) - tab.n_of(x)).abs();
        if diff != 0.0 {
            cex = Some(Counterexample {
                elements: vec![x.to_string()],
                residual: diff,
            });
            break;
        }
    }
    report.push(property_from("pn3_symmetric", n as u64, cex, None));

    let mut cex = None;
    let mut checks = 0u64;
    'gyr: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                checks += 1;
                let diff = (tab.n_of(c.gyr_of(x, y, z)) - tab.n_of(z)).abs();
                if diff != 0.0 {
                    cex = Some(Counterexample {
                        elements: vec![x.to_string(), y.to_string(), z.to_string()],
                        residual: diff,
                    });
                    break 'gyr;
                }
            }
        }
    }
    report.push(property_from("gyration_invariance", checks, cex, None));

    // f(x) < r implies x ∈ V(r) for every stored dyadic r.
    let mut cex = None;
    let mut checks = 0u64;
    let scale = (1u64 << depth) as f64;
    'thresh: for x in 0..n {
        for m in 1..=(1usize << depth) {
            checks += 1;
            let r = m as f64 / scale;
            if tab.f_of(x) < r && !fam.level_set(m).unwrap().contains(x) {
                cex = Some(Counterexample {
                    elements: vec![x.to_string(), format!("m={m}")],
                    residual: r - tab.f_of(x),
                });
                break 'thresh;
            }
        }
    }
    report.push(property_from("f_threshold", checks, cex, None));

    let mut cex = None;
    let mut checks = 0u64;
    'sandwich: for level in 0..=depth {
        let u = chain.level(level as usize);
        let strict = 1.0 / (1u64 << level) as f64;
        let loose = 2.0 * strict;
        for x in 0..n {
            checks += 1;
            if tab.n_of(x) < strict && !u.contains(x) {
                cex = Some(Counterexample {
                    elements: vec![format!("n={level}"), x.to_string(), "lower".to_string()],
                    residual: strict - tab.n_of(x),
                });
                break 'sandwich;
            }
            if u.contains(x) && tab.n_of(x) > loose {
                cex = Some(Counterexample {
                    elements: vec![format!("n={level}"), x.to_string(), "upper".to_string()],
                    residual: tab.n_of(x) - loose,
                });
                break 'sandwich;
            }
        }
    }
    report.push(property_from("sandwich", checks, cex, None));

    Ok((report, tab))
}

/// `d(x, y) = |N(x) - N(y)|`.
pub fn pseudometric_d(tab: &PrenormTable, x: usize, y: usize) -> f64 {
    (tab.n_of(x) - tab.n_of(y)).abs()
}

/// `ϱ(π(x), π(y)) = d(⊖x ⊕ y, 0) + d(⊖y ⊕ x, 0)` on cosets over the chain
/// bottom `P`.
pub fn coset_metric(
    c: &FiniteGyrogroupTable,
    p: &SubgyroHandle,
    tab: &PrenormTable,
    x: usize,
    y: usize,
) -> Result<f64, PrenormError> {
    if p.members() != tab.bottom() {
        return Err(PrenormError::ChainMismatch);
    }
    let xy = c.op(c.inv_of(x), y);
    let yx = c.op(c.inv_of(y), x);
    Ok(pseudometric_d(tab, xy, 0) + pseudometric_d(tab, yx, 0))
}

/// Exhaustively verifies that `d` is a pseudometric, that `N` does not
/// depend on the representative within a coset of `P`, and that `ϱ`
/// satisfies the metric axioms on `G/P` with `ϱ = 0` exactly on equal
/// cosets.
pub fn metric_check(
    c: &FiniteGyrogroupTable,
    p: &SubgyroHandle,
    tab: &PrenormTable,
) -> Result<VerificationReport, PrenormError> {
    if p.members() != tab.bottom() {
        return Err(PrenormError::ChainMismatch);
    }
    let dec = left_cosets(c, p)?;
    let n = c.order();
    let mut report = VerificationReport::new(0, true);

    let mut cex = None;
    let mut checks = 0u64;
    'rep: for x in 0..n {
        for pp in p.members().iter() {
            checks += 1;
            let diff = (tab.n_of(c.op(x, pp)) - tab.n_of(x)).abs();
            if diff != 0.0 {
                cex = Some(Counterexample {
                    elements: vec![x.to_string(), pp.to_string()],
                    residual: diff,
                });
                break 'rep;
            }
        }
    }
    report.push(property_from(
        "representative_independence",
        checks,
        cex,
        None,
    ));

    // d is a pseudometric: d(x, x) = 0, symmetry, triangle.
    let mut cex = None;
    let mut checks = 0u64;
    'dcheck: for x in 0..n {
        if pseudometric_d(tab, x, x) != 0.0 {
            cex = Some(Counterexample {
                elements: vec![x.to_string()],
                residual: pseudometric_d(tab, x, x),
            });
            break;
        }
        for y in 0..n {
            if pseudometric_d(tab, x, y) != pseudometric_d(tab, y, x) {
                cex = Some(Counterexample {
                    elements: vec![x.to_string(), y.to_string()],
                    residual: 1.0,
                });
                break 'dcheck;
            }
            for z in 0..n {
                checks += 1;
                let gap = pseudometric_d(tab, x, y)
                    - pseudometric_d(tab, x, z)
                    - pseudometric_d(tab, z, y);
                if gap > 0.0 {
                    cex = Some(Counterexample {
                        elements: vec![x.to_string(), y.to_string(), z.to_string()],
                        residual: gap,
                    });
                    break 'dcheck;
                }
            }
        }
    }
    report.push(property_from("d_pseudometric", checks, cex, None));

    // ϱ = 0 exactly on equal cosets.
    let mut cex = None;
    let mut checks = 0u64;
    'zero: for x in 0..n {
        for y in 0..n {
            checks += 1;
            let rho = coset_metric(c, p, tab, x, y)?;
            let same = dec.block_of[x] == dec.block_of[y];
            if (rho == 0.0) != same {
                cex = Some(Counterexample {
                    elements: vec![x.to_string(), y.to_string()],
                    residual: rho,
                });
                break 'zero;
            }
        }
    }
    report.push(property_from(
        "coset_identity_of_indiscernibles",
        checks,
        cex,
        None,
    ));

    let mut cex = None;
    let mut checks = 0u64;
    'sym: for x in 0..n {
        for y in 0..n {
            checks += 1;
            let forward = coset_metric(c, p, tab, x, y)?;
            let backward = coset_metric(c, p, tab, y, x)?;
            if forward != backward {
                cex = Some(Counterexample {
                    elements: vec![x.to_string(), y.to_string()],
                    residual: (forward - backward).abs(),
                });
                break 'sym;
            }
        }
    }
    report.push(property_from("coset_symmetry", checks, cex, None));

    let mut cex = None;
    let mut checks = 0u64;
    'tri: for x in 0..n {
        for y in 0..n {
            let direct = coset_metric(c, p, tab, x, y)?;
            for z in 0..n {
                checks += 1;
                let via = coset_metric(c, p, tab, x, z)? + coset_metric(c, p, tab, z, y)?;
                if direct > via {
                    cex = Some(Counterexample {
                        elements: vec![x.to_string(), y.to_string(), z.to_string()],
                        residual: direct - via,
                    });
                    break 'tri;
                }
            }
        }
    }
    report.push(property_from("coset_triangle", checks, cex, None));

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carriers::table::cyclic_group;
    use crate::subgyro::subgyro_handle;

    fn z4_setup() -> (FiniteGyrogroupTable, FiniteChain) {
        let z4 = cyclic_group(4).unwrap();
        let chain = FiniteChain::new(vec![
            ElemSet::full(4),
            ElemSet::from_indices(4, &[0, 2]).unwrap(),
            ElemSet::singleton(4, 0).unwrap(),
        ])
        .unwrap();
        (z4, chain)
    }

    #[test]
    fn z4_family_levels() {
        // Depth 2 over (G, {0,2}, {0}): V(1/4) = {0}, V(1/2) = {0,2},
        // V(3/4) = {0} ⊕ {0,2} = {0,2}, V(1) = G.
        let (z4, chain) = z4_setup();
        let fam = build_dyadic_family(&z4, &chain, 2).unwrap();
        assert_eq!(fam.level_set(1).unwrap().indices(), vec![0]);
        assert_eq!(fam.level_set(2).unwrap().indices(), vec![0, 2]);
        assert_eq!(fam.level_set(3).unwrap().indices(), vec![0, 2]);
        assert_eq!(fam.level_set(4).unwrap().indices(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn depth_zero_family_is_just_u0() {
        let (z4, chain) = z4_setup();
        let fam = build_dyadic_family(&z4, &chain, 0).unwrap();
        assert_eq!(fam.level_set(1).unwrap().len(), 4);
        assert!(fam.level_set(2).is_none());
    }

    #[test]
    fn z4_f_and_n_values() {
        let (z4, chain) = z4_setup();
        let fam = build_dyadic_family(&z4, &chain, 12).unwrap();
        let tab = prenorm_table(&z4, &fam);
        assert_eq!(tab.f_values, vec![0.0, 1.0, 0.5, 1.0]);
        assert_eq!(tab.n_values, vec![0.0, 1.0, 0.5, 1.0]);
    }

    #[test]
    fn z4_prenorm_check_passes() {
        let (z4, chain) = z4_setup();
        let (report, _) = prenorm_check(&z4, &chain, 12).unwrap();
        assert!(report.all_pass(), "{}", report.summary());
    }

    #[test]
    fn invalid_chain_is_rejected() {
        let z4 = cyclic_group(4).unwrap();
        // {0, 1} is not symmetric, and {0,1} ⊕ {0,1} escapes it.
        let chain = FiniteChain::new(vec![
            ElemSet::full(4),
            ElemSet::from_indices(4, &[0, 1]).unwrap(),
        ])
        .unwrap();
        assert!(matches!(
            build_dyadic_family(&z4, &chain, 4),
            Err(PrenormError::ChainInvalid { .. })
        ));
    }

    #[test]
    fn z4_pseudometric_and_coset_metric() {
        let (z4, chain) = z4_setup();
        let fam = build_dyadic_family(&z4, &chain, 12).unwrap();
        let tab = prenorm_table(&z4, &fam);
        assert_eq!(pseudometric_d(&tab, 1, 2), 0.5);
        assert_eq!(pseudometric_d(&tab, 1, 1), 0.0);

        let p = subgyro_handle(&z4, ElemSet::singleton(4, 0).unwrap()).unwrap();
        // ⊖0 ⊕ 1 = 1 and ⊖1 ⊕ 0 = 3, so ϱ(π(0), π(1)) = N(1) + N(3) = 2.
        assert_eq!(coset_metric(&z4, &p, &tab, 0, 1).unwrap(), 2.0);
        assert_eq!(coset_metric(&z4, &p, &tab, 1, 1).unwrap(), 0.0);
    }

    #[test]
    fn z4_metric_check_passes() {
        let (z4, chain) = z4_setup();
        let fam = build_dyadic_family(&z4, &chain, 12).unwrap();
        let tab = prenorm_table(&z4, &fam);
        let p = subgyro_handle(&z4, ElemSet::singleton(4, 0).unwrap()).unwrap();
        let report = metric_check(&z4, &p, &tab).unwrap();
        assert!(report.all_pass(), "{}", report.summary());
    }

    #[test]
    fn chain_need_not_start_at_the_whole_carrier() {
        // U0 = {0, 2}: elements outside every level get f = 1 + 1/2^depth,
        // still bounded by 2, and the sandwich keeps holding.
        let z4 = cyclic_group(4).unwrap();
        let chain = FiniteChain::new(vec![
            ElemSet::from_indices(4, &[0, 2]).unwrap(),
            ElemSet::singleton(4, 0).unwrap(),
        ])
        .unwrap();
        let (report, tab) = prenorm_check(&z4, &chain, 6).unwrap();
        assert!(report.all_pass(), "{}", report.summary());
        let outside = 1.0 + 1.0 / 64.0;
        assert_eq!(tab.f_values, vec![0.0, outside, 1.0, outside]);
        assert!(tab.f_values.iter().all(|&f| f <= 2.0));
    }

    #[test]
    fn mismatched_bottom_is_rejected() {
        let (z4, chain) = z4_setup();
        let fam = build_dyadic_family(&z4, &chain, 4).unwrap();
        let tab = prenorm_table(&z4, &fam);
        let wrong = subgyro_handle(&z4, ElemSet::from_indices(4, &[0, 2]).unwrap()).unwrap();
        assert!(matches!(
            coset_metric(&z4, &wrong, &tab, 0, 1),
            Err(PrenormError::ChainMismatch)
        ));
    }
}
