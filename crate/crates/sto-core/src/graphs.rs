//! Correlation-graph combinatorics: points are electrons, lines are the
//! interelectronic distances present in a correlated term.
//!
//! Graphs are stored as edge bitmasks over the `n(n-1)/2` point pairs, so
//! isomorphism reduction is a minimum over permuted masks.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::specfun::{binom, ExactInteger};

/// Largest point count a [`SimpleGraph`] can hold.
pub const MAX_POINTS: u8 = 8;
/// Largest point count accepted by the isomorphism enumerator.
pub const MAX_ENUMERATE: u8 = 6;

/// Bit index of the pair `i < j`.
fn pair_index(i: u8, j: u8) -> u32 {
    let (i, j) = if i < j { (i as u32, j as u32) } else { (j as u32, i as u32) };
    // Pairs ordered (0,1), (0,2), (1,2), (0,3), ...
    j * (j - 1) / 2 + i
}

fn pair_of(index: u32) -> (u8, u8) {
    let mut j = 1;
    while (j + 1) * j / 2 <= index {
        j += 1;
    }
    ((index - j * (j - 1) / 2) as u8, j as u8)
}

/// Simple undirected graph on points `0..n`; `m = mask.count_ones()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimpleGraph {
    n: u8,
    mask: u32,
}

impl SimpleGraph {
    pub fn empty(n: u8) -> Result<Self> {
        if !(1..=MAX_POINTS).contains(&n) {
            return Err(Error::Domain(format!("graphs need 1..={MAX_POINTS} points, got {n}")));
        }
        Ok(SimpleGraph { n, mask: 0 })
    }

    /// Zero-based endpoints; self-loops and out-of-range points are rejected,
    /// repeated edges collapse.
    pub fn from_edges(n: u8, edges: &[(u8, u8)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(Error::Domain(format!("invalid edge ({a}, {b}) on {n} points")));
            }
            g.mask |= 1 << pair_index(a, b);
        }
        Ok(g)
    }

    pub fn from_mask(n: u8, mask: u32) -> Result<Self> {
        let g = Self::empty(n)?;
        if mask >> max_correlation_terms(n as u64) != 0 {
            return Err(Error::Domain(format!("edge mask {mask:#x} exceeds {n} points")));
        }
        Ok(SimpleGraph { mask, ..g })
    }

    pub fn points(&self) -> u8 {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn edge_count(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn has_edge(&self, a: u8, b: u8) -> bool {
        a != b && a < self.n && b < self.n && self.mask & (1 << pair_index(a, b)) != 0
    }

    /// Edges as zero-based pairs `(i, j)`, `i < j`, in mask order.
    pub fn edges(&self) -> Vec<(u8, u8)> {
        (0..32).filter(|b| self.mask & (1 << b) != 0).map(pair_of).collect()
    }

    pub fn degrees(&self) -> DegreeComposition {
        let mut d = vec![0u32; self.n as usize];
        for (a, b) in self.edges() {
            d[a as usize] += 1;
            d[b as usize] += 1;
        }
        DegreeComposition { degrees: d }
    }

    /// Relabels point `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[u8]) -> Self {
        let mut mask = 0;
        for (a, b) in self.edges() {
            mask |= 1 << pair_index(perm[a as usize], perm[b as usize]);
        }
        SimpleGraph { n: self.n, mask }
    }

    /// Isomorphism-class representative: the minimum mask over relabelings.
    pub fn canonical(&self) -> Self {
        let mut best = *self;
        for_each_permutation(self.n, |p| {
            let g = self.permuted(p);
            if g.mask < best.mask {
                best = g;
            }
        });
        best
    }

    /// Number of relabelings fixing the graph.
    pub fn automorphism_count(&self) -> u64 {
        let mut c = 0;
        for_each_permutation(self.n, |p| {
            if self.permuted(p).mask == self.mask {
                c += 1;
            }
        });
        c
    }

    pub fn is_connected(&self) -> bool {
        connected_components(self).len() == 1
    }
}

/// Calls `f` on every permutation of `0..n` in lexicographic order.
fn for_each_permutation(n: u8, mut f: impl FnMut(&[u8])) {
    let mut p: Vec<u8> = (0..n).collect();
    loop {
        f(&p);
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap_or(i);
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Point degrees `(m_1, …, m_n)`; realizable ones sum to twice the line count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreeComposition {
    pub degrees: Vec<u32>,
}

impl DegreeComposition {
    pub fn new(degrees: Vec<u32>) -> Self {
        DegreeComposition { degrees }
    }

    /// Non-increasing order: the composition up to relabeling.
    pub fn sorted(&self) -> Self {
        let mut d = self.degrees.clone();
        d.sort_unstable_by(|a, b| b.cmp(a));
        DegreeComposition { degrees: d }
    }
}

/// Erdős–Gallai test.
pub fn is_graphical(c: &DegreeComposition) -> bool {
    let d = c.sorted().degrees;
    let n = d.len() as u64;
    let total: u64 = d.iter().map(|&x| x as u64).sum();
    if total % 2 != 0 || d.first().is_some_and(|&x| x as u64 >= n) {
        return false;
    }
    let mut prefix = 0u64;
    for k in 1..=n {
        prefix += d[k as usize - 1] as u64;
        let tail: u64 = d[k as usize..].iter().map(|&x| (x as u64).min(k)).sum();
        if prefix > k * (k - 1) + tail {
            return false;
        }
    }
    true
}

/// Maximal connected point sets, each sorted, ordered by smallest point.
pub fn connected_components(g: &SimpleGraph) -> Vec<Vec<u8>> {
    let n = g.n as usize;
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s as u8];
        let mut part = Vec::new();
        while let Some(v) = stack.pop() {
            part.push(v);
            for w in 0..g.n {
                if !seen[w as usize] && g.has_edge(v, w) {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        part.sort_unstable();
        out.push(part);
    }
    out
}

/// `(n² - 3n + 4)/2`: the `(n, m)` labels with `n-1 ≤ m ≤ n(n-1)/2`.
pub fn nm_label_count(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::Domain(format!("label count needs n >= 2, got {n}")));
    }
    Ok((n * n + 4 - 3 * n) / 2)
}

/// `n(n-1)/2`.
pub fn max_correlation_terms(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// One canonical representative per isomorphism class of connected graphs
/// with `n` points and `m` lines, ascending by mask.
pub fn enumerate_connected(n: u8, m: u32) -> Result<Vec<SimpleGraph>> {
    if !(1..=MAX_ENUMERATE).contains(&n) {
        return Err(Error::Domain(format!("enumeration supports 1..={MAX_ENUMERATE} points, got {n}")));
    }
    let pairs = max_correlation_terms(n as u64) as u32;
    if m > pairs {
        return Ok(Vec::new());
    }
    let mut seen = BTreeSet::new();
    for mask in 0u32..(1 << pairs) {
        if mask.count_ones() != m {
            continue;
        }
        let g = SimpleGraph { n, mask };
        if g.is_connected() {
            seen.insert(g.canonical());
        }
    }
    Ok(seen.into_iter().collect())
}

/// `C(n, m)` for every `m`, as `(m, count)` pairs with non-zero counts.
pub fn connected_counts(n: u8) -> Result<Vec<(u32, usize)>> {
    let top = max_correlation_terms(n as u64) as u32;
    let mut out = Vec::new();
    for m in 0..=top {
        let c = enumerate_connected(n, m)?.len();
        if c > 0 {
            out.push((m, c));
        }
    }
    Ok(out)
}

/// Pairs of non-isomorphic connected `(n, m)` graphs sharing a degree composition.
pub fn composition_collisions(n: u8, m: u32) -> Result<Vec<(SimpleGraph, SimpleGraph)>> {
    let mut by_comp: BTreeMap<DegreeComposition, Vec<SimpleGraph>> = BTreeMap::new();
    for g in enumerate_connected(n, m)? {
        by_comp.entry(g.degrees().sorted()).or_default().push(g);
    }
    let mut out = Vec::new();
    for gs in by_comp.values() {
        for (i, a) in gs.iter().enumerate() {
            for b in &gs[i + 1..] {
                out.push((*a, *b));
            }
        }
    }
    Ok(out)
}

/// Connected labeled graphs on `n` points by the subtraction recurrence
/// `c(n) = 2^{C(n,2)} - Σ_{k<n} C(n-1,k-1) c(k) 2^{C(n-k,2)}`.
pub fn labeled_connected_count(n: u32) -> Result<ExactInteger> {
    if !(1..=10).contains(&n) {
        return Err(Error::Domain(format!("labeled count supports 1..=10 points, got {n}")));
    }
    let all = |k: u32| BigInt::one() << max_correlation_terms(k as u64);
    let mut c: Vec<BigInt> = vec![BigInt::zero()];
    for k in 1..=n {
        let mut v = all(k);
        for j in 1..k {
            v -= binom(k as i64 - 1, j as i64 - 1) * &c[j as usize] * all(k - j);
        }
        c.push(v);
    }
    Ok(ExactInteger(c.swap_remove(n as usize)))
}

/// `labeled_connected_count(n) / 2^{n(n-1)/2}`.
pub fn labeled_connected_fraction(n: u32) -> Result<f64> {
    let c = labeled_connected_count(n)?;
    Ok(c.to_f64() / libm::ldexp(1.0, max_correlation_terms(n as u64) as i32))
}

/// `2^{n(n-1)/2}/n!`, the asymptotic connected-graph estimate.
pub fn asymptotic_connected_estimate(n: u32) -> f64 {
    let f: f64 = (2..=n).map(|k| k as f64).product();
    libm::ldexp(1.0, max_correlation_terms(n as u64) as i32) / f
}
