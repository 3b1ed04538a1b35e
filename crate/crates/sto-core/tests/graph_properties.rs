use std::collections::BTreeSet;

use sto_core::graphs::*;

/// Sorted degree sequences realized by some simple graph on `n` points.
fn realizable(n: u8) -> BTreeSet<Vec<u32>> {
    let pairs = max_correlation_terms(n as u64) as u32;
    (0u32..(1 << pairs)).map(|m| SimpleGraph::from_mask(n, m).unwrap().degrees().sorted().degrees).collect()
}

#[test]
fn graphicality_matches_exhaustive_realization() {
    for n in 1..=6u8 {
        let real = realizable(n);
        // Every composition with degrees up to n (one past feasible).
        let mut d = vec![0u32; n as usize];
        loop {
            let c = DegreeComposition::new(d.clone());
            assert_eq!(is_graphical(&c), real.contains(&c.sorted().degrees), "{d:?}");
            let Some(i) = d.iter().position(|&x| x < n as u32) else { break };
            d[i] += 1;
            d[..i].iter_mut().for_each(|x| *x = 0);
        }
    }
}

#[test]
fn unlabeled_connected_totals() {
    let totals: Vec<usize> = (1..=6).map(|n| connected_counts(n).unwrap().iter().map(|c| c.1).sum()).collect();
    assert_eq!(totals, [1, 1, 2, 6, 21, 112]);
    let trees = [1, 1, 1, 2, 3, 6];
    for n in 1..=6u8 {
        let top = max_correlation_terms(n as u64) as u32;
        assert_eq!(enumerate_connected(n, top).unwrap().len(), 1);
        assert_eq!(enumerate_connected(n, n as u32 - 1).unwrap().len(), trees[n as usize - 1]);
        // Labels: one per feasible m.
        if n >= 2 {
            assert_eq!(connected_counts(n).unwrap().len() as u64, nm_label_count(n as u64).unwrap());
        }
    }
}

#[test]
fn orbit_counting_reconciles_labeled_and_unlabeled() {
    for n in 1..=5u8 {
        let fact: u64 = (1..=n as u64).product();
        let mut total = 0u64;
        for (m, _) in connected_counts(n).unwrap() {
            for g in enumerate_connected(n, m).unwrap() {
                total += fact / g.automorphism_count();
            }
        }
        assert_eq!(labeled_connected_count(n as u32).unwrap(), total as i64);
    }
}

#[test]
fn labeled_counts_by_brute_force() {
    for n in 1..=5u8 {
        let pairs = max_correlation_terms(n as u64) as u32;
        let c = (0u32..(1 << pairs)).filter(|&m| SimpleGraph::from_mask(n, m).unwrap().is_connected()).count();
        assert_eq!(labeled_connected_count(n as u32).unwrap(), c as i64);
    }
}

#[test]
fn labeled_fraction_increases() {
    let f: Vec<f64> = (4..=10).map(|n| labeled_connected_fraction(n).unwrap()).collect();
    assert!(f.windows(2).all(|w| w[0] < w[1]), "{f:?}");
    assert!(labeled_connected_fraction(8).unwrap() > 0.93);
}

#[test]
fn composition_collisions_start_at_five_points_five_lines() {
    for n in 1..=4u8 {
        for m in 0..=6 {
            assert!(composition_collisions(n, m).unwrap().is_empty());
        }
    }
    assert!(composition_collisions(5, 4).unwrap().is_empty());
    let w55 = composition_collisions(5, 5).unwrap();
    assert_eq!(w55.len(), 1);
    assert_eq!(w55[0].0.degrees().sorted().degrees, [3, 2, 2, 2, 1]);
    let w56 = composition_collisions(5, 6).unwrap();
    assert!(!w56.is_empty());
    for (a, b) in w56 {
        assert_ne!(a.canonical(), b.canonical());
        assert_eq!(a.degrees().sorted(), b.degrees().sorted());
    }
}

#[test]
fn components_agree_with_traversal_from_the_first_point() {
    for mask in 0u32..(1 << 10) {
        let g = SimpleGraph::from_mask(5, mask).unwrap();
        let comps = connected_components(&g);
        let parts: usize = comps.iter().map(Vec::len).sum();
        assert_eq!(parts, 5);
        assert_eq!(comps.len() == 1, comps[0].len() == 5);
    }
}

#[test]
fn enumeration_is_deterministic() {
    assert_eq!(enumerate_connected(6, 8).unwrap(), enumerate_connected(6, 8).unwrap());
}
