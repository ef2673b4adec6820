//! Exact evaluation of
//! `phi(m, n) = Σ_{π ∈ S_n} P(X(i,j) = X(π(i), π(j)) for all i < j < m)`
//! for a `G(n, 1/2)` graph `X`.
//!
//! For one permutation the constraints `X(e) = X(π(e))` link pairs of vertex
//! pairs. Each connected component of that constraint graph must be
//! monochromatic, so the probability is `2^-(pairs - components)`.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Union-find over `0..n` with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns `false` if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
        self.size.fill(1);
    }
}

/// `phi(m, n)` as the dyadic rational `numerator / 2^denominator_log2`,
/// reduced so that the numerator is odd or the exponent is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiResult {
    pub m: usize,
    pub n: usize,
    pub numerator: u128,
    pub denominator_log2: u32,
}

impl PhiResult {
    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / (self.denominator_log2 as f64).exp2()
    }
}

impl fmt::Display for PhiResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator_log2 == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.denominator_log2)
        }
    }
}

/// Exact `phi(m, n)` by enumerating `S_n`; requires `m <= n <= 8`.
pub fn phi_exact(m: usize, n: usize) -> Result<PhiResult> {
    if n > 8 {
        return Err(Error::invalid(format!(
            "phi_exact enumerates S_n and needs n <= 8, got {n}"
        )));
    }
    if m > n {
        return Err(Error::invalid(format!(
            "phi_exact needs m <= n, got m = {m}, n = {n}"
        )));
    }
    let pair = |i: usize, j: usize| if i < j { i * n + j } else { j * n + i };
    let constrained: Vec<(usize, usize)> = (0..m).tuple_combinations().collect();
    let exponent = constrained.len() as u32;

    let mut sets = DisjointSets::new(n * n);
    let mut touched = vec![false; n * n];
    let mut total = 0u128;
    for perm in (0..n).permutations(n) {
        sets.reset();
        touched.fill(false);
        let mut distinct = 0u32;
        let mut merges = 0u32;
        for &(i, j) in &constrained {
            let a = pair(i, j);
            let b = pair(perm[i], perm[j]);
            for x in [a, b] {
                if !touched[x] {
                    touched[x] = true;
                    distinct += 1;
                }
            }
            if sets.union(a, b) {
                merges += 1;
            }
        }
        // components = distinct - merges, so pairs - components = merges
        debug_assert!(merges <= distinct);
        total += 1u128 << (exponent - merges);
    }

    let shift = total.trailing_zeros().min(exponent);
    Ok(PhiResult {
        m,
        n,
        numerator: total >> shift,
        denominator_log2: exponent - shift,
    })
}

/// Constants with `phi(m, n) <= k1 * exp(k2 * (n - m) ln(n - m))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiBound {
    pub k1: f64,
    pub k2: f64,
}

/// Grid step for `k2`.
pub const PHI_K2_STEP: f64 = 1.0 / 16.0;
/// Largest `k2` tried before giving up.
pub const PHI_K2_CAP: f64 = 64.0;

/// Finds `(k1, k2)` bounding `phi(m, n)` over `1 <= n <= n_max`,
/// `2n/3 <= m <= n`.
///
/// Where `n - m <= 1` the exponential factor is 1, so `k1` is forced to be
/// the largest `phi` there. `k2` is then the smallest multiple of
/// [`PHI_K2_STEP`] that covers the remaining points, up to [`PHI_K2_CAP`].
pub fn phi_bound_witness(n_max: usize) -> Result<PhiBound> {
    if !(1..=8).contains(&n_max) {
        return Err(Error::invalid(format!(
            "phi_bound_witness needs 1 <= n_max <= 8, got {n_max}"
        )));
    }
    let mut points = Vec::new();
    for n in 1..=n_max {
        for m in (2 * n).div_ceil(3).max(1)..=n {
            points.push((n - m, phi_exact(m, n)?.to_f64()));
        }
    }
    let k1 = points
        .iter()
        .filter(|(gap, _)| *gap <= 1)
        .map(|&(_, v)| v)
        .fold(0.0, f64::max);
    let growth = |gap: usize| {
        let t = gap as f64;
        if gap <= 1 {
            0.0
        } else {
            t * t.ln()
        }
    };
    let steps = (PHI_K2_CAP / PHI_K2_STEP) as u32;
    for s in 0..=steps {
        let k2 = s as f64 * PHI_K2_STEP;
        if points
            .iter()
            .all(|&(gap, v)| v <= k1 * (k2 * growth(gap)).exp())
        {
            return Ok(PhiBound { k1, k2 });
        }
    }
    Err(Error::PropertyViolation(format!(
        "no k2 <= {PHI_K2_CAP} bounds phi for n <= {n_max} with k1 = {k1}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: usize) -> u128 {
        (1..=n as u128).product()
    }

    /// phi(m, n) by summing, over every graph on n vertices, the number of
    /// permutations under which it agrees with itself on pairs inside 0..m.
    fn phi_by_graph_enumeration(m: usize, n: usize) -> f64 {
        let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
        let index = |i: usize, j: usize| {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            pairs.iter().position(|&p| p == (a, b)).unwrap()
        };
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        let mut agreeing = 0u64;
        for mask in 0u64..(1 << pairs.len()) {
            let edge = |i: usize, j: usize| mask >> index(i, j) & 1 == 1;
            for p in &perms {
                if (0..m)
                    .tuple_combinations()
                    .all(|(i, j)| edge(i, j) == edge(p[i], p[j]))
                {
                    agreeing += 1;
                }
            }
        }
        agreeing as f64 / (pairs.len() as f64).exp2()
    }

    #[test]
    fn degenerate_m_gives_factorial() {
        for n in 0..=8 {
            for m in [0, 1] {
                if m > n {
                    continue;
                }
                let r = phi_exact(m, n).unwrap();
                assert_eq!(
                    (r.numerator, r.denominator_log2),
                    (factorial(n), 0),
                    "m={m} n={n}"
                );
            }
        }
    }

    #[test]
    fn hand_checked_values() {
        let r = phi_exact(2, 2).unwrap();
        assert_eq!((r.numerator, r.denominator_log2), (2, 0));
        let r = phi_exact(2, 3).unwrap();
        assert_eq!((r.numerator, r.denominator_log2), (4, 0));
    }

    #[test]
    fn matches_graph_enumeration() {
        for n in 1..=5 {
            for m in 0..=n {
                let exact = phi_exact(m, n).unwrap().to_f64();
                let oracle = phi_by_graph_enumeration(m, n);
                assert!(
                    (exact - oracle).abs() < 1e-12,
                    "m={m} n={n}: {exact} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn bounded_and_monotone_in_m() {
        for n in 1..=6 {
            let mut prev = f64::INFINITY;
            for m in 0..=n {
                let v = phi_exact(m, n).unwrap().to_f64();
                assert!(v > 0.0 && v <= factorial(n) as f64);
                assert!(v <= prev, "m={m} n={n}");
                prev = v;
            }
        }
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(phi_exact(3, 9).is_err());
        assert!(phi_exact(4, 3).is_err());
        assert!(phi_bound_witness(9).is_err());
        assert!(phi_bound_witness(0).is_err());
    }

    #[test]
    fn bound_witness_covers_domain() {
        let b = phi_bound_witness(6).unwrap();
        assert!(b.k1 >= phi_exact(2, 3).unwrap().to_f64());
        for n in 1..=6 {
            assert!(b.k1 >= phi_exact(n, n).unwrap().to_f64());
            for m in (2 * n).div_ceil(3)..=n {
                let t = (n - m) as f64;
                let g = if n - m <= 1 { 0.0 } else { t * t.ln() };
                assert!(phi_exact(m, n).unwrap().to_f64() <= b.k1 * (b.k2 * g).exp());
            }
        }
    }

    #[test]
    fn disjoint_sets_basics() {
        let mut d = DisjointSets::new(5);
        assert!(d.union(0, 1));
        assert!(d.union(3, 4));
        assert!(!d.union(1, 0));
        assert_eq!(d.find(0), d.find(1));
        assert_ne!(d.find(0), d.find(3));
        d.reset();
        assert_ne!(d.find(0), d.find(1));
    }
}
