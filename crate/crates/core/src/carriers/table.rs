//! Finite gyrogroup carriers backed by explicit Cayley tables.
//!
//! Index 0 is the identity by convention. Construction validates the table
//! exhaustively and precomputes inverses and gyration permutations.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::carrier::{CarrierDescriptor, Gyrogroup};

/// Gyration permutations are precomputed up to this order; beyond it they
/// are derived per call.
const GYR_TABLE_CAP: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    G1,
    G2,
    G3,
    G4,
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axiom::G1 => write!(f, "G1"),
            Axiom::G2 => write!(f, "G2"),
            Axiom::G3 => write!(f, "G3"),
            Axiom::G4 => write!(f, "G4"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("malformed table: {reason}")]
    Malformed { reason: String },
    #[error("not a gyrogroup: {axiom} fails at ({})", witness.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(", "))]
    NotAGyrogroup { axiom: Axiom, witness: Vec<usize> },
    #[error("not a group: {reason}")]
    NotAGroup { reason: String },
    #[error("order {n} exceeds cap {cap}")]
    TooLarge { n: usize, cap: usize },
}

/// An order-`n` gyrogroup given by its full operation table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGyrogroupTable {
    n: usize,
    /// Row-major: `table[a * n + b] = a ⊕ b`.
    table: Vec<usize>,
    inv: Vec<usize>,
    /// `gyr_tables[(a * n + b) * n + z] = gyr[a, b](z)`, when precomputed.
    gyr_tables: Option<Vec<usize>>,
    name: Option<String>,
}

impl FiniteGyrogroupTable {
    /// Validates `rows` as a gyrogroup table (exhaustively, axiom by axiom)
    /// and builds the carrier. Fails with the first violated axiom and a
    /// witness tuple.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self, TableError> {
        let n = rows.len();
        if n == 0 {
            return Err(TableError::Malformed {
                reason: "empty table".to_string(),
            });
        }
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(TableError::Malformed {
                    reason: format!("row {a} has {} entries, expected {n}", row.len()),
                });
            }
            for (b, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(TableError::Malformed {
                        reason: format!("entry ({a}, {b}) = {v} out of range 0..{n}"),
                    });
                }
            }
        }
        for (a, row) in rows.iter().enumerate() {
            let mut seen = vec![false; n];
            for &v in row {
                if seen[v] {
                    return Err(TableError::Malformed {
                        reason: format!("row {a} is not a permutation (duplicate {v})"),
                    });
                }
                seen[v] = true;
            }
        }

        let table: Vec<usize> = rows.into_iter().flatten().collect();
        validate_axioms(n, &table)?;
        Ok(Self::build(n, table, None))
    }

    /// Builds the carrier without validation. Intended for trusted callers
    /// and fault-injection tests; all invariants are the caller's problem.
    pub fn new_unchecked(rows: Vec<Vec<usize>>) -> Self {
        let n = rows.len();
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        Self::build(n, table, None)
    }

    fn build(n: usize, table: Vec<usize>, name: Option<String>) -> Self {
        let inv = (0..n)
            .map(|a| (0..n).find(|&b| table[a * n + b] == 0).unwrap_or(0))
            .collect();
        let mut carrier = FiniteGyrogroupTable {
            n,
            table,
            inv,
            gyr_tables: None,
            name,
        };
        if n <= GYR_TABLE_CAP {
            let mut gyr = vec![0usize; n * n * n];
            for a in 0..n {
                for b in 0..n {
                    for z in 0..n {
                        gyr[(a * n + b) * n + z] = carrier.derived_gyr(a, b, z);
                    }
                }
            }
            carrier.gyr_tables = Some(gyr);
        }
        carrier
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// `a ⊕ b` by table lookup.
    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    #[inline]
    pub fn inv_of(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `gyr[a, b](z)` from the precomputed tables when available.
    #[inline]
    pub fn gyr_of(&self, a: usize, b: usize, z: usize) -> usize {
        match &self.gyr_tables {
            Some(g) => g[(a * self.n + b) * self.n + z],
            None => self.derived_gyr(a, b, z),
        }
    }

    #[inline]
    fn derived_gyr(&self, a: usize, b: usize, z: usize) -> usize {
        let ab = self.op(a, b);
        self.op(self.inv[ab], self.op(a, self.op(b, z)))
    }

    /// The gyration `gyr[a, b]` as a permutation of `0..n`.
    pub fn gyr_perm(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.n).map(|z| self.gyr_of(a, b, z)).collect()
    }

    /// True when every gyration is the identity permutation.
    pub fn is_degenerate(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| (0..self.n).all(|z| self.gyr_of(a, b, z) == z)))
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|a| self.table[a * self.n..(a + 1) * self.n].to_vec())
            .collect()
    }

    pub fn flat(&self) -> &[usize] {
        &self.table
    }
}

/// Exhaustive axiom validation over a raw row-major table whose rows are
/// already known to be permutations.
fn validate_axioms(n: usize, t: &[usize]) -> Result<(), TableError> {
    let op = |a: usize, b: usize| t[a * n + b];

    // G1: index 0 is a two-sided identity.
    for a in 0..n {
        if op(0, a) != a {
            return Err(TableError::NotAGyrogroup {
                axiom: Axiom::G1,
                witness: vec![0, a],
            });
        }
        if op(a, 0) != a {
            return Err(TableError::NotAGyrogroup {
                axiom: Axiom::G1,
                witness: vec![a, 0],
            });
        }
    }

    // G2: the right inverse from each row must also be a left inverse.
    // Uniqueness follows from rows being permutations.
    let mut inv = vec![0usize; n];
    for (a, slot) in inv.iter_mut().enumerate() {
        let b = (0..n)
            .find(|&b| op(a, b) == 0)
            .expect("row is a permutation");
        if op(b, a) != 0 {
            return Err(TableError::NotAGyrogroup {
                axiom: Axiom::G2,
                witness: vec![a, b],
            });
        }
        *slot = b;
    }

    let gyr = |a: usize, b: usize, z: usize| {
        let ab = op(a, b);
        op(inv[ab], op(a, op(b, z)))
    };

    // G3, equation part: a ⊕ (b ⊕ z) = (a ⊕ b) ⊕ gyr[a, b](z).
    for a in 0..n {
        for b in 0..n {
            for z in 0..n {
                if op(a, op(b, z)) != op(op(a, b), gyr(a, b, z)) {
                    return Err(TableError::NotAGyrogroup {
                        axiom: Axiom::G3,
                        witness: vec![a, b, z],
                    });
                }
            }
        }
    }

    // G3, automorphism part: each gyr[a, b] is bijective and preserves ⊕.
    for a in 0..n {
        for b in 0..n {
            let perm: Vec<usize> = (0..n).map(|z| gyr(a, b, z)).collect();
            let mut seen = vec![false; n];
            for (z, &p) in perm.iter().enumerate() {
                if seen[p] {
                    return Err(TableError::NotAGyrogroup {
                        axiom: Axiom::G3,
                        witness: vec![a, b, z],
                    });
                }
                seen[p] = true;
            }
            for x in 0..n {
                for y in 0..n {
                    if perm[op(x, y)] != op(perm[x], perm[y]) {
                        return Err(TableError::NotAGyrogroup {
                            axiom: Axiom::G3,
                            witness: vec![a, b, x, y],
                        });
                    }
                }
            }
        }
    }

    // G4: left loop property, gyr[a ⊕ b, b] = gyr[a, b].
    for a in 0..n {
        for b in 0..n {
            let ab = op(a, b);
            for z in 0..n {
                if gyr(ab, b, z) != gyr(a, b, z) {
                    return Err(TableError::NotAGyrogroup {
                        axiom: Axiom::G4,
                        witness: vec![a, b, z],
                    });
                }
            }
        }
    }

    Ok(())
}

impl Gyrogroup for FiniteGyrogroupTable {
    type Elem = usize;

    fn zero(&self) -> usize {
        0
    }

    fn add(&self, a: &usize, b: &usize) -> usize {
        self.op(*a, *b)
    }

    fn neg(&self, a: &usize) -> usize {
        self.inv[*a]
    }

    fn distance(&self, a: &usize, b: &usize) -> f64 {
        if a == b {
            0.0
        } else {
            1.0
        }
    }

    fn contains(&self, a: &usize) -> bool {
        *a < self.n
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        rng.random_range(0..self.n)
    }

    fn elements(&self) -> Option<Vec<usize>> {
        Some((0..self.n).collect())
    }

    fn gyr(&self, a: &usize, b: &usize, z: &usize) -> usize {
        self.gyr_of(*a, *b, *z)
    }

    fn has_closed_gyr(&self) -> bool {
        // Lookup tables stand in for a closed form; the consistency check
        // recomputes the derived formula against them.
        self.gyr_tables.is_some()
    }

    fn label(&self, e: &usize) -> String {
        e.to_string()
    }

    fn descriptor(&self) -> CarrierDescriptor {
        let mut d = CarrierDescriptor::new("finite-table").with("order", self.n);
        if let Some(name) = &self.name {
            d = d.with("name", name);
        }
        d
    }
}

/// The cyclic group of order `n` as a (degenerate) gyrogroup.
pub fn cyclic_group(n: usize) -> Result<FiniteGyrogroupTable, TableError> {
    if n == 0 {
        return Err(TableError::Malformed {
            reason: "cyclic group order must be at least 1".to_string(),
        });
    }
    let rows = (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect();
    Ok(FiniteGyrogroupTable::from_table(rows)?.with_name(&format!("Z{n}")))
}

/// The Klein four-group.
pub fn klein_four() -> FiniteGyrogroupTable {
    let rows = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
    FiniteGyrogroupTable::from_table(rows)
        .expect("xor table is a group")
        .with_name("K4")
}

/// Adapts an explicit group table. Rejects tables without identity at
/// index 0 or with a non-associative operation, then validates the result
/// as a gyrogroup (all gyrations come out trivial).
pub fn group_from_table(rows: Vec<Vec<usize>>) -> Result<FiniteGyrogroupTable, TableError> {
    let n = rows.len();
    for (a, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(TableError::Malformed {
                reason: format!("row {a} has {} entries, expected {n}", row.len()),
            });
        }
        for &v in row {
            if v >= n {
                return Err(TableError::Malformed {
                    reason: format!("entry out of range in row {a}"),
                });
            }
        }
    }
    for (a, row) in rows.iter().enumerate() {
        if rows[0][a] != a || row[0] != a {
            return Err(TableError::NotAGroup {
                reason: format!("index 0 is not a two-sided identity (element {a})"),
            });
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if rows[rows[a][b]][c] != rows[a][rows[b][c]] {
                    return Err(TableError::NotAGroup {
                        reason: format!("not associative at ({a}, {b}, {c})"),
                    });
                }
            }
        }
    }
    FiniteGyrogroupTable::from_table(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_four_basics() {
        let z4 = cyclic_group(4).unwrap();
        assert_eq!(z4.op(1, 3), 0);
        assert_eq!(z4.inv_of(1), 3);
        assert_eq!(z4.inv_of(0), 0);
        assert!(z4.is_degenerate());
    }

    #[test]
    fn trivial_group() {
        let z1 = cyclic_group(1).unwrap();
        assert_eq!(z1.order(), 1);
        assert_eq!(z1.op(0, 0), 0);
    }

    #[test]
    fn klein_is_degenerate() {
        let k4 = klein_four();
        assert!(k4.is_degenerate());
        assert_eq!(k4.op(1, 2), 3);
        assert_eq!(k4.inv_of(3), 3);
    }

    #[test]
    fn rejects_non_permutation_row() {
        let rows = vec![vec![0, 1], vec![1, 1]];
        match FiniteGyrogroupTable::from_table(rows) {
            Err(TableError::Malformed { reason }) => {
                assert!(reason.contains("not a permutation"), "{reason}");
            }
            other => panic!("expected Malformed, got {other:?}"),
        }
    }

    #[test]
    fn rejects_out_of_range_entry() {
        let rows = vec![vec![0, 1], vec![1, 2]];
        assert!(matches!(
            FiniteGyrogroupTable::from_table(rows),
            Err(TableError::Malformed { .. })
        ));
    }

    #[test]
    fn rejects_shifted_identity() {
        // Z2 relabeled so that 1 is the identity.
        let rows = vec![vec![1, 0], vec![0, 1]];
        match FiniteGyrogroupTable::from_table(rows) {
            Err(TableError::NotAGyrogroup { axiom, .. }) => assert_eq!(axiom, Axiom::G1),
            other => panic!("expected G1 failure, got {other:?}"),
        }
    }

    #[test]
    fn single_corrupted_entry_fails_validation() {
        // Z4 with entry (1,1) changed from 2 to 3 duplicates 3 in row 1.
        let rows = vec![
            vec![0, 1, 2, 3],
            vec![1, 3, 3, 0],
            vec![2, 3, 0, 1],
            vec![3, 0, 1, 2],
        ];
        assert!(matches!(
            FiniteGyrogroupTable::from_table(rows),
            Err(TableError::Malformed { .. })
        ));
    }

    #[test]
    fn row_latin_corruption_fails_an_axiom() {
        // Swapping two entries inside row 1 keeps the row a permutation but
        // breaks the gyrogroup structure.
        let rows = vec![
            vec![0, 1, 2, 3],
            vec![1, 3, 2, 0],
            vec![2, 3, 0, 1],
            vec![3, 0, 1, 2],
        ];
        match FiniteGyrogroupTable::from_table(rows) {
            Err(TableError::NotAGyrogroup { axiom, .. }) => {
                assert!(matches!(axiom, Axiom::G2 | Axiom::G3 | Axiom::G4));
            }
            other => panic!("expected NotAGyrogroup, got {other:?}"),
        }
    }

    #[test]
    fn group_adapter_rejects_non_associative() {
        // A Latin square with identity that is not a group.
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 3, 4, 0, 1],
            vec![3, 4, 1, 2, 0],
            vec![4, 2, 0, 1, 3],
        ];
        assert!(matches!(
            group_from_table(rows),
            Err(TableError::NotAGroup { .. })
        ));
    }
}
