//! Cross-checks the backtracking search against an independent brute-force
//! enumerator, and pins down what exists at small orders.

use gyrolab_core::carriers::search::canonical_form;
use gyrolab_core::search_small;
use std::collections::BTreeSet;

/// Independent gyrogroup test on a raw row-major table. Written from the
/// axioms directly; shares no code with the library's validator.
fn brute_is_gyrogroup(n: usize, t: &[usize]) -> bool {
    let op = |a: usize, b: usize| t[a * n + b];
    // Two-sided identity at 0.
    for a in 0..n {
        if op(0, a) != a || op(a, 0) != a {
            return false;
        }
    }
    // Unique two-sided inverse per element.
    let mut inv = vec![usize::MAX; n];
    for (a, slot) in inv.iter_mut().enumerate() {
        let candidates: Vec<usize> = (0..n).filter(|&b| op(a, b) == 0 && op(b, a) == 0).collect();
        if candidates.len() != 1 {
            return false;
        }
        *slot = candidates[0];
    }
    let gyr = |a: usize, b: usize, z: usize| op(inv[op(a, b)], op(a, op(b, z)));
    // Left gyroassociativity with gyr an automorphism and a bijection.
    for a in 0..n {
        for b in 0..n {
            for z in 0..n {
                if op(a, op(b, z)) != op(op(a, b), gyr(a, b, z)) {
                    return false;
                }
            }
            let image: BTreeSet<usize> = (0..n).map(|z| gyr(a, b, z)).collect();
            if image.len() != n {
                return false;
            }
            for x in 0..n {
                for y in 0..n {
                    if gyr(a, b, op(x, y)) != op(gyr(a, b, x), gyr(a, b, y)) {
                        return false;
                    }
                }
            }
        }
    }
    // Left loop property.
    for a in 0..n {
        for b in 0..n {
            for z in 0..n {
                if gyr(op(a, b), b, z) != gyr(a, b, z) {
                    return false;
                }
            }
        }
    }
    true
}

/// Enumerates every identity-respecting table of order `n` (free cells run
/// over all values, no pruning) and collects the gyrogroups up to
/// relabeling fixing 0.
fn brute_force_tables(n: usize) -> BTreeSet<Vec<usize>> {
    let free = (n - 1) * (n - 1);
    let mut out = BTreeSet::new();
    let mut assignment = vec![0usize; free];
    loop {
        let mut t = vec![0usize; n * n];
        for a in 0..n {
            t[a] = a;
            t[a * n] = a;
        }
        for (k, &v) in assignment.iter().enumerate() {
            let (r, c) = (1 + k / (n - 1), 1 + k % (n - 1));
            t[r * n + c] = v;
        }
        if brute_is_gyrogroup(n, &t) {
            out.insert(canonical_form(n, &t));
        }
        // Odometer over the free cells.
        let mut k = 0;
        loop {
            if k == free {
                return out;
            }
            assignment[k] += 1;
            if assignment[k] < n {
                break;
            }
            assignment[k] = 0;
            k += 1;
        }
    }
}

#[test]
fn search_matches_brute_force_up_to_order_three() {
    for n in 1..=3usize {
        let brute = if n == 1 {
            BTreeSet::from([vec![0usize]])
        } else {
            brute_force_tables(n)
        };
        let searched: BTreeSet<Vec<usize>> = search_small(n, 1_000_000)
            .unwrap()
            .tables
            .iter()
            .map(|t| t.flat().to_vec())
            .collect();
        assert_eq!(brute, searched, "order {n}");
    }
}

#[test]
fn search_matches_brute_force_at_order_four() {
    let brute = brute_force_tables(4);
    let searched: BTreeSet<Vec<usize>> = search_small(4, 1_000_000)
        .unwrap()
        .tables
        .iter()
        .map(|t| t.flat().to_vec())
        .collect();
    assert_eq!(brute.len(), 2);
    assert_eq!(brute, searched);
}

#[test]
fn orders_up_to_seven_hold_only_groups() {
    for n in 1..=7usize {
        let out = search_small(n, 50_000_000).unwrap();
        assert!(out.complete, "order {n} should enumerate fully");
        assert!(
            out.tables.iter().all(|t| t.is_degenerate()),
            "order {n} produced a non-degenerate table"
        );
    }
}

#[test]
fn order_eight_yields_nondegenerate_gyrogroups() {
    let out = search_small(8, 1_000_000).unwrap();
    assert!(!out.complete, "the full order-8 space exceeds this budget");
    let nondeg: Vec<_> = out.tables.iter().filter(|t| !t.is_degenerate()).collect();
    assert!(
        !nondeg.is_empty(),
        "expected non-degenerate order-8 tables within the budget"
    );
    for t in nondeg {
        assert_eq!(t.order(), 8);
    }
}
