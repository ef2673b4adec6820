//! Induced subgraph isomorphism: does `target` contain `pattern` as an
//! induced subgraph, and in how many ordered ways?
//!
//! Backtracking over pattern vertices, always extending the one with the
//! fewest remaining candidates (ties by a fixed static order). Every unassigned
//! pattern vertex keeps a bitset of admissible target vertices; assigning
//! `u -> v` intersects each remaining set with `N(v)` if `u` and the other
//! vertex are adjacent in the pattern and with the co-neighbourhood of `v`
//! otherwise. Both sets exclude `v`, which keeps the map injective.

use std::time::Duration;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::budget::{Meter, SearchBudget, Verdict};
use crate::graph::Graph;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SisResult {
    pub found: Verdict,
    /// `witness[u]` is the target vertex assigned to pattern vertex `u`.
    pub witness: Option<Vec<usize>>,
    pub nodes_explored: u64,
    #[serde(with = "crate::serde_millis")]
    pub elapsed: Duration,
}

impl SisResult {
    /// The witness as `(pattern vertex, target vertex)` pairs.
    pub fn witness_pairs(&self) -> Option<Vec<(usize, usize)>> {
        self.witness
            .as_ref()
            .map(|w| w.iter().copied().enumerate().collect())
    }
}

/// Searches for one induced copy of `pattern` in `target`.
pub fn contains_induced(pattern: &Graph, target: &Graph, budget: SearchBudget) -> SisResult {
    let mut m = Matcher::new(pattern, target, Mode::Decide, &budget);
    m.run();
    let found = if m.witness.is_some() {
        Verdict::True
    } else if m.meter.exhausted {
        Verdict::Unknown
    } else {
        Verdict::False
    };
    SisResult {
        found,
        witness: m.witness.take(),
        nodes_explored: m.meter.nodes,
        elapsed: m.meter.elapsed(),
    }
}

/// Number of injective maps `pattern -> target` that preserve edges and
/// non-edges. Counts ordered embeddings, so automorphic copies are distinct.
pub fn count_induced_embeddings(pattern: &Graph, target: &Graph) -> u128 {
    let mut m = Matcher::new(pattern, target, Mode::Count, &SearchBudget::unlimited());
    m.run();
    m.count
}

/// Decision and ordered-embedding count by trying every injection.
/// Limited to patterns of at most 6 and targets of at most 10 vertices.
pub fn brute_force_sis(pattern: &Graph, target: &Graph) -> Result<(bool, u128)> {
    if pattern.n() > 6 || target.n() > 10 {
        return Err(Error::invalid(
            "brute_force_sis takes patterns of at most 6 and targets of at most 10 vertices",
        ));
    }
    let n = pattern.n();
    let mut count = 0u128;
    for image in (0..target.n()).permutations(n) {
        let ok = (0..n).all(|i| {
            (i + 1..n).all(|j| pattern.has_edge(i, j) == target.has_edge(image[i], image[j]))
        });
        if ok {
            count += 1;
        }
    }
    Ok((count > 0, count))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Decide,
    Count,
}

struct Matcher<'a> {
    target: &'a Graph,
    pattern: &'a Graph,
    non_adj: Graph,
    /// Rank of each pattern vertex in the static order; breaks size ties.
    rank: Vec<usize>,
    /// Unassigned pattern vertices, in static order.
    free: Vec<usize>,
    /// Candidate sets: `level * n + u` holds the set of pattern vertex `u`
    /// after `level` assignments.
    domains: Vec<u64>,
    sizes: Vec<u32>,
    stride: usize,
    assigned: Vec<usize>,
    mode: Mode,
    meter: Meter,
    stop: bool,
    witness: Option<Vec<usize>>,
    count: u128,
}

/// Highest degree first; among equal degrees prefer a vertex adjacent to one
/// already placed, then the lowest id.
fn static_order(p: &Graph) -> Vec<usize> {
    let n = p.n();
    let mut placed = vec![false; n];
    let mut touches = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let u = (0..n)
            .filter(|&u| !placed[u])
            .min_by_key(|&u| (std::cmp::Reverse(p.degree(u)), !touches[u], u))
            .expect("an unplaced vertex remains");
        placed[u] = true;
        order.push(u);
        for w in p.neighbors(u) {
            touches[w] = true;
        }
    }
    order
}

impl<'a> Matcher<'a> {
    fn new(pattern: &'a Graph, target: &'a Graph, mode: Mode, budget: &SearchBudget) -> Self {
        let n = pattern.n();
        let big_n = target.n();
        let stride = target.stride();
        let order = static_order(pattern);
        let mut rank = vec![0; n];
        for (i, &u) in order.iter().enumerate() {
            rank[u] = i;
        }

        let mut domains = vec![0u64; (n + 1) * n * stride];
        let mut sizes = vec![0u32; (n + 1) * n];
        for u in 0..n {
            let du = pattern.degree(u);
            let non_du = n - 1 - du;
            let dom = &mut domains[u * stride..(u + 1) * stride];
            for v in 0..big_n {
                let dv = target.degree(v);
                if dv >= du && big_n - 1 - dv >= non_du {
                    bits::set(dom, v);
                }
            }
            sizes[u] = bits::count(dom) as u32;
        }

        Matcher {
            target,
            pattern,
            non_adj: target.complement(),
            rank,
            free: order,
            domains,
            sizes,
            stride,
            assigned: vec![usize::MAX; n],
            mode,
            meter: Meter::new(budget),
            stop: false,
            witness: None,
            count: 0,
        }
    }

    fn run(&mut self) {
        let n = self.pattern.n();
        if n == 0 {
            self.meter.tick();
            self.found_one();
            return;
        }
        if n > self.target.n() || self.sizes[..n].contains(&0) {
            self.meter.tick();
            return;
        }
        self.descend(0);
    }

    #[inline]
    fn domain(&self, level: usize, u: usize) -> &[u64] {
        let at = (level * self.pattern.n() + u) * self.stride;
        &self.domains[at..at + self.stride]
    }

    fn found_one(&mut self) {
        match self.mode {
            Mode::Decide => {
                self.witness = Some(self.assigned.clone());
                self.stop = true;
            }
            Mode::Count => self.count += 1,
        }
    }

    /// Position in `free` of the vertex with the fewest candidates.
    fn pick(&self, depth: usize) -> usize {
        let n = self.pattern.n();
        let sizes = &self.sizes[depth * n..(depth + 1) * n];
        (0..self.free.len())
            .min_by_key(|&i| (sizes[self.free[i]], self.rank[self.free[i]]))
            .expect("a free vertex remains")
    }

    fn descend(&mut self, depth: usize) {
        if !self.meter.tick() {
            self.stop = true;
            return;
        }
        let n = self.pattern.n();
        if depth + 1 == n && self.mode == Mode::Count {
            let u = self.free[0];
            self.count += self.sizes[depth * n + u] as u128;
            return;
        }

        let slot = self.pick(depth);
        let u = self.free.remove(slot);
        let candidates: Vec<usize> = bits::ones(self.domain(depth, u)).collect();
        for v in candidates {
            self.assigned[u] = v;
            if depth + 1 == n {
                self.found_one();
            } else if self.propagate(depth, u, v) {
                self.descend(depth + 1);
            }
            if self.stop {
                break;
            }
        }
        self.assigned[u] = usize::MAX;
        self.free.insert(slot, u);
    }

    /// Fills level `depth + 1` from level `depth` given `u -> v`. Returns
    /// `false` as soon as some free vertex has no candidate left.
    fn propagate(&mut self, depth: usize, u: usize, v: usize) -> bool {
        let n = self.pattern.n();
        let s = self.stride;
        let adj = self.target.row(v);
        let non = self.non_adj.row(v);
        let (lo, hi) = self.domains.split_at_mut((depth + 1) * n * s);
        let from = &lo[depth * n * s..];
        let sizes = &mut self.sizes[(depth + 1) * n..(depth + 2) * n];
        for &w in &self.free {
            let mask = if self.pattern.has_edge(u, w) {
                adj
            } else {
                non
            };
            let src = &from[w * s..(w + 1) * s];
            let dst = &mut hi[w * s..(w + 1) * s];
            let mut c = 0u32;
            for k in 0..s {
                let x = src[k] & mask[k];
                dst[k] = x;
                c += x.count_ones();
            }
            if c == 0 {
                return false;
            }
            sizes[w] = c;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gnp_sample, is_induced_isomorphism};
    use crate::rng::Seed;

    fn decide(p: &Graph, t: &Graph) -> SisResult {
        let r = contains_induced(p, t, SearchBudget::unlimited());
        if r.found.is_true() {
            assert!(is_induced_isomorphism(p, t, &r.witness_pairs().unwrap()).unwrap());
        }
        r
    }

    #[test]
    fn empty_pattern_always_found() {
        let r = decide(&Graph::empty(0), &Graph::complete(3));
        assert_eq!(r.found, Verdict::True);
        assert_eq!(r.witness, Some(vec![]));
        assert_eq!(
            count_induced_embeddings(&Graph::empty(0), &Graph::complete(3)),
            1
        );
    }

    #[test]
    fn triangle_not_in_path() {
        assert_eq!(
            decide(&Graph::complete(3), &Graph::path(3)).found,
            Verdict::False
        );
    }

    #[test]
    fn path_in_clique_plus_isolated() {
        // K4 on 0..4 and an isolated vertex 4
        let mut edges = vec![];
        for i in 0..4 {
            for j in i + 1..4 {
                edges.push((i, j));
            }
        }
        let t = Graph::from_edges(5, &edges).unwrap();
        let p = Graph::path(3);
        let r = decide(&p, &t);
        let (bf, bf_count) = brute_force_sis(&p, &t).unwrap();
        assert_eq!(r.found.is_true(), bf);
        assert_eq!(count_induced_embeddings(&p, &t), bf_count);
    }

    #[test]
    fn counting_examples() {
        assert_eq!(
            count_induced_embeddings(&Graph::complete(2), &Graph::complete(3)),
            6
        );
        let t = gnp_sample(17, 0.5, Seed::new(1, 1)).unwrap();
        assert_eq!(count_induced_embeddings(&Graph::empty(1), &t), 17);
        assert_eq!(
            count_induced_embeddings(&Graph::path(3), &Graph::complete(3)),
            0
        );
    }

    #[test]
    fn clique_self_count_is_factorial() {
        let mut f = 1u128;
        for n in 1..=7 {
            f *= n as u128;
            assert_eq!(
                count_induced_embeddings(&Graph::complete(n), &Graph::complete(n)),
                f
            );
        }
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(
            brute_force_sis(&Graph::complete(2), &Graph::complete(3)).unwrap(),
            (true, 6)
        );
        assert_eq!(
            brute_force_sis(&Graph::cycle(4), &Graph::complete(4)).unwrap(),
            (false, 0)
        );
        assert!(brute_force_sis(&Graph::empty(7), &Graph::empty(7)).is_err());
        assert!(brute_force_sis(&Graph::empty(2), &Graph::empty(11)).is_err());
    }

    #[test]
    fn pattern_larger_than_target() {
        assert_eq!(
            decide(&Graph::empty(4), &Graph::empty(3)).found,
            Verdict::False
        );
        assert_eq!(
            count_induced_embeddings(&Graph::empty(4), &Graph::empty(3)),
            0
        );
    }

    #[test]
    fn budget_gives_unknown() {
        let p = gnp_sample(16, 0.5, Seed::new(3, 0)).unwrap();
        let t = gnp_sample(150, 0.5, Seed::new(3, 1)).unwrap();
        let r = contains_induced(&p, &t, SearchBudget::unlimited().with_max_nodes(1024));
        assert!(r.found != Verdict::False);
        assert!(r.nodes_explored <= 1024);
    }

    #[test]
    fn order_prefers_high_degree() {
        let star = Graph::from_edges(5, &[(3, 0), (3, 1), (3, 2), (3, 4), (0, 1)]).unwrap();
        let order = static_order(&star);
        assert_eq!(order[0], 3);
        assert_eq!(&order[1..3], &[0, 1]);
    }
}
