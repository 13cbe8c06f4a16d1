//! Backtracking search for gyrogroup tables of small order.
//!
//! Cells are filled in row-major order with index 0 fixed as the identity.
//! The search prunes on Latin constraints for rows and columns (left and
//! right translations in a gyrogroup are bijections), two-sidedness of
//! inverses, and, at each row boundary, gyroassociativity and the left loop
//! property restricted to the rows fixed so far. Completed tables go
//! through full validation and are deduplicated up to relabelings fixing 0.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::carriers::table::FiniteGyrogroupTable;

const UNSET: usize = usize::MAX;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("search supports orders 1..=16, got {n}")]
    InvalidOrder { n: usize },
}

/// Result of a table search. `complete` is false when the node budget ran
/// out, in which case `tables` is a partial enumeration.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub tables: Vec<FiniteGyrogroupTable>,
    pub nodes_used: u64,
    pub complete: bool,
}

struct Searcher {
    n: usize,
    table: Vec<usize>,
    row_used: Vec<u32>,
    col_used: Vec<u32>,
    cells: Vec<(usize, usize)>,
    budget: u64,
    nodes: u64,
    aborted: bool,
    found: BTreeSet<Vec<usize>>,
}

impl Searcher {
    fn new(n: usize, budget: u64) -> Self {
        let mut table = vec![UNSET; n * n];
        let mut row_used = vec![0u32; n];
        let mut col_used = vec![0u32; n];
        for a in 0..n {
            table[a] = a; // row 0
            table[a * n] = a; // column 0
            row_used[0] |= 1 << a;
            col_used[0] |= 1 << a;
            if a > 0 {
                row_used[a] |= 1 << a;
                col_used[a] |= 1 << a;
            }
        }
        let cells = (1..n).flat_map(|r| (1..n).map(move |c| (r, c))).collect();
        Searcher {
            n,
            table,
            row_used,
            col_used,
            cells,
            budget,
            nodes: 0,
            aborted: false,
            found: BTreeSet::new(),
        }
    }

    #[inline]
    fn at(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    fn dfs(&mut self, pos: usize) {
        if self.aborted {
            return;
        }
        if pos == self.cells.len() {
            self.record_candidate();
            return;
        }
        let (r, c) = self.cells[pos];
        let n = self.n;
        let used = self.row_used[r] | self.col_used[c];
        for v in 0..n {
            if used & (1 << v) != 0 {
                continue;
            }
            // Two-sided inverses: a ⊕ b = 0 exactly when b ⊕ a = 0.
            let mirror = self.at(c, r);
            if v == 0 && mirror != UNSET && mirror != 0 {
                continue;
            }
            if v != 0 && mirror == 0 {
                continue;
            }
            if self.nodes >= self.budget {
                self.aborted = true;
                return;
            }
            self.nodes += 1;
            self.table[r * n + c] = v;
            self.row_used[r] |= 1 << v;
            self.col_used[c] |= 1 << v;
            let row_complete = c == n - 1;
            if !row_complete || self.prefix_consistent(r) {
                self.dfs(pos + 1);
            }
            self.table[r * n + c] = UNSET;
            self.row_used[r] &= !(1 << v);
            self.col_used[c] &= !(1 << v);
            if self.aborted {
                return;
            }
        }
    }

    /// Checks gyroassociativity, the automorphism property, and the left
    /// loop property over the completed rows `0..=r`.
    fn prefix_consistent(&self, r: usize) -> bool {
        let n = self.n;
        // Inverse positions for completed rows.
        let mut inv = vec![UNSET; n];
        for (a, slot) in inv.iter_mut().enumerate().take(r + 1) {
            *slot = (0..n).find(|&b| self.at(a, b) == 0).unwrap_or(UNSET);
        }

        // gyr[x, y] is computable when rows x, y, x ⊕ y, and ⊖(x ⊕ y) are
        // all complete.
        let gyr_perm = |x: usize, y: usize| -> Option<Vec<usize>> {
            if x > r || y > r {
                return None;
            }
            let ab = self.at(x, y);
            if ab > r {
                return None;
            }
            let ic = inv[ab];
            if ic == UNSET || ic > r {
                return None;
            }
            Some(
                (0..n)
                    .map(|z| self.at(ic, self.at(x, self.at(y, z))))
                    .collect(),
            )
        };

        for x in 0..=r {
            for y in 0..=r {
                let Some(p) = gyr_perm(x, y) else { continue };
                let ab = self.at(x, y);
                // G3 equation: x ⊕ (y ⊕ z) = (x ⊕ y) ⊕ gyr[x, y](z).
                for (z, &pz) in p.iter().enumerate() {
                    if self.at(x, self.at(y, z)) != self.at(ab, pz) {
                        return false;
                    }
                }
                // Automorphism on settled rows.
                for u in 0..=r {
                    let pu = p[u];
                    if pu > r {
                        continue;
                    }
                    for v in 0..n {
                        if p[self.at(u, v)] != self.at(pu, p[v]) {
                            return false;
                        }
                    }
                }
                // G4: gyr[x ⊕ y, y] = gyr[x, y] when the former is settled.
                if let Some(q) = gyr_perm(ab, y) {
                    if p != q {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn record_candidate(&mut self) {
        let n = self.n;
        let rows: Vec<Vec<usize>> = (0..n)
            .map(|a| self.table[a * n..(a + 1) * n].to_vec())
            .collect();
        if FiniteGyrogroupTable::from_table(rows).is_ok() {
            self.found.insert(canonical_form(n, &self.table));
        }
    }
}

/// Lexicographically minimal table among relabelings fixing 0. Orders
/// above 9 are returned as-is: enumerating all relabelings is factorial,
/// and budgeted searches at those orders are partial anyway.
pub fn canonical_form(n: usize, flat: &[usize]) -> Vec<usize> {
    if n <= 2 || n > 9 {
        return flat.to_vec();
    }
    let mut best = flat.to_vec();
    let mut sigma: Vec<usize> = (0..n).collect();
    let mut labels: Vec<usize> = (1..n).collect();
    permute(&mut labels, 0, &mut |perm| {
        for (i, &p) in perm.iter().enumerate() {
            sigma[i + 1] = p;
        }
        let mut relabeled = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                relabeled[sigma[a] * n + sigma[b]] = sigma[flat[a * n + b]];
            }
        }
        if relabeled < best {
            best = relabeled;
        }
    });
    best
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Enumerates all gyrogroup tables of order `n` within a node budget,
/// deduplicated up to relabeling fixing the identity.
pub fn search_small(n: usize, budget: u64) -> Result<SearchOutcome, SearchError> {
    if n == 0 || n > 16 {
        return Err(SearchError::InvalidOrder { n });
    }
    let mut searcher = Searcher::new(n, budget);
    searcher.dfs(0);
    let tables = searcher
        .found
        .iter()
        .map(|flat| {
            let rows = (0..n).map(|a| flat[a * n..(a + 1) * n].to_vec()).collect();
            FiniteGyrogroupTable::from_table(rows).expect("candidate was validated")
        })
        .collect();
    Ok(SearchOutcome {
        tables,
        nodes_used: searcher.nodes,
        complete: !searcher.aborted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_one_is_trivial() {
        let out = search_small(1, 1000).unwrap();
        assert!(out.complete);
        assert_eq!(out.tables.len(), 1);
        assert_eq!(out.tables[0].rows(), vec![vec![0]]);
    }

    #[test]
    fn order_two_is_z2() {
        let out = search_small(2, 1000).unwrap();
        assert!(out.complete);
        assert_eq!(out.tables.len(), 1);
        assert_eq!(out.tables[0].rows(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn order_three_is_z3() {
        let out = search_small(3, 10_000).unwrap();
        assert!(out.complete);
        assert_eq!(out.tables.len(), 1);
        assert_eq!(
            out.tables[0].rows(),
            vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]
        );
    }

    #[test]
    fn order_four_finds_both_groups() {
        let out = search_small(4, 1_000_000).unwrap();
        assert!(out.complete);
        // Z4 and the Klein four-group, up to relabeling.
        assert_eq!(out.tables.len(), 2);
        assert!(out.tables.iter().all(|t| t.is_degenerate()));
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let out = search_small(5, 10).unwrap();
        assert!(!out.complete);
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(search_small(0, 10).is_err());
        assert!(search_small(17, 10).is_err());
    }
}
