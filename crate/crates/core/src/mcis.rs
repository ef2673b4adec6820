//! Maximum common induced subgraph by label-class partitioning.
//!
//! The search keeps the unmapped vertices of both graphs split into label
//! classes: a class `(L, R)` holds the vertices of `g1` and `g2` whose
//! adjacency to every mapped pair is identical. Mapping `v -> w` splits each
//! class into its neighbours and non-neighbours of `v` / `w`, so the common
//! subgraph stays induced and need not be connected. `Σ min(|L|, |R|)` over
//! the classes bounds how many more pairs can be added.

use std::time::Duration;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::budget::{Meter, SearchBudget, Verdict};
use crate::graph::{is_induced_isomorphism, Graph};
use crate::{Error, Result};

/// Outcome of a maximum common induced subgraph search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub size: usize,
    /// `(g1 vertex, g2 vertex)` pairs, sorted by the `g1` vertex.
    pub mapping: Vec<(usize, usize)>,
    pub nodes_explored: u64,
    /// `false` iff the search stopped before proving `size` maximum.
    pub optimal: bool,
    #[serde(with = "crate::serde_millis")]
    pub elapsed: Duration,
}

/// Outcome of a "common induced subgraph of size at least k" query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionResult {
    pub verdict: Verdict,
    /// Exactly `k` pairs when `verdict` is `True`.
    pub witness: Option<Vec<(usize, usize)>>,
    pub nodes_explored: u64,
    #[serde(with = "crate::serde_millis")]
    pub elapsed: Duration,
}

/// Finds a largest common induced subgraph of `g1` and `g2`.
pub fn max_common_induced_subgraph(g1: &Graph, g2: &Graph, budget: SearchBudget) -> SolveResult {
    let out = Search::run(g1, g2, &budget, 0);
    let mapping = out.mapping;
    let bound = g1.n().min(g2.n());
    SolveResult {
        size: mapping.len(),
        optimal: out.complete || mapping.len() == bound,
        mapping,
        nodes_explored: out.nodes,
        elapsed: out.elapsed,
    }
}

/// Decides whether `g1` and `g2` share an induced subgraph on `k` vertices.
pub fn decision_common(g1: &Graph, g2: &Graph, k: usize, budget: SearchBudget) -> DecisionResult {
    if k > g1.n().min(g2.n()) {
        return DecisionResult {
            verdict: Verdict::False,
            witness: None,
            nodes_explored: 0,
            elapsed: Duration::ZERO,
        };
    }
    let budget = SearchBudget {
        target: Some(k),
        ..budget
    };
    let out = Search::run(g1, g2, &budget, k);
    let (verdict, witness) = if out.mapping.len() >= k {
        let mut w = out.mapping;
        w.truncate(k);
        (Verdict::True, Some(w))
    } else if out.complete {
        (Verdict::False, None)
    } else {
        (Verdict::Unknown, None)
    };
    DecisionResult {
        verdict,
        witness,
        nodes_explored: out.nodes,
        elapsed: out.elapsed,
    }
}

/// Largest common induced subgraph by exhaustive enumeration of subset pairs
/// and bijections. Both graphs must have at most 8 vertices.
pub fn brute_force_mcis(g1: &Graph, g2: &Graph) -> Result<SolveResult> {
    if g1.n() > 8 || g2.n() > 8 {
        return Err(Error::invalid(
            "brute_force_mcis takes graphs with at most 8 vertices",
        ));
    }
    let start = std::time::Instant::now();
    let mut checked = 0u64;
    for k in (0..=g1.n().min(g2.n())).rev() {
        for a in (0..g1.n()).combinations(k) {
            for b in (0..g2.n()).combinations(k) {
                for perm in b.iter().copied().permutations(k) {
                    checked += 1;
                    let map: Vec<_> = a.iter().copied().zip(perm).collect();
                    if is_induced_isomorphism(g1, g2, &map)? {
                        return Ok(SolveResult {
                            size: k,
                            mapping: map,
                            nodes_explored: checked,
                            optimal: true,
                            elapsed: start.elapsed(),
                        });
                    }
                }
            }
        }
    }
    unreachable!("the empty mapping always matches")
}

#[derive(Clone, Copy, Debug)]
struct LabelClass {
    l: u32,
    r: u32,
    left_len: u32,
    right_len: u32,
}

impl LabelClass {
    #[inline]
    fn bound(&self) -> usize {
        self.left_len.min(self.right_len) as usize
    }
}

struct SearchOutcome {
    mapping: Vec<(usize, usize)>,
    complete: bool,
    nodes: u64,
    elapsed: Duration,
}

/// Search state over relabelled copies of the inputs in which vertex `i` is
/// the `i`-th vertex by (degree descending, id ascending). The smallest label
/// in a class is then its highest-degree vertex, lowest id on ties.
struct Search {
    g1: Graph,
    g2: Graph,
    left: Vec<u32>,
    right: Vec<u32>,
    current: Vec<(u32, u32)>,
    incumbent: Vec<(u32, u32)>,
    /// Branches whose bound is below this cannot reach the decision target.
    floor: usize,
    target: Option<usize>,
    meter: Meter,
    stop: bool,
    /// Reusable class lists, one per search depth.
    pool: Vec<Vec<LabelClass>>,
}

fn degree_order(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    order
}

impl Search {
    fn run(g1: &Graph, g2: &Graph, budget: &SearchBudget, floor: usize) -> SearchOutcome {
        let order1 = degree_order(g1);
        let order2 = degree_order(g2);
        let mut s = Search {
            g1: g1
                .induced_subgraph(&order1)
                .expect("a permutation is a valid vertex list"),
            g2: g2
                .induced_subgraph(&order2)
                .expect("a permutation is a valid vertex list"),
            left: (0..g1.n() as u32).collect(),
            right: (0..g2.n() as u32).collect(),
            current: Vec::new(),
            incumbent: Vec::new(),
            floor,
            target: budget.target,
            meter: Meter::new(budget),
            stop: false,
            pool: Vec::new(),
        };
        let mut classes = Vec::new();
        if g1.n() > 0 && g2.n() > 0 {
            classes.push(LabelClass {
                l: 0,
                r: 0,
                left_len: g1.n() as u32,
                right_len: g2.n() as u32,
            });
        }
        if s.target != Some(0) {
            s.expand(&mut classes);
        }
        let mut mapping: Vec<(usize, usize)> = s
            .incumbent
            .iter()
            .map(|&(v, w)| (order1[v as usize], order2[w as usize]))
            .collect();
        mapping.sort_unstable();
        SearchOutcome {
            mapping,
            complete: !s.stop,
            nodes: s.meter.nodes,
            elapsed: s.meter.elapsed(),
        }
    }

    fn expand(&mut self, classes: &mut Vec<LabelClass>) {
        if !self.meter.tick() {
            self.stop = true;
            return;
        }
        if self.current.len() > self.incumbent.len() {
            self.incumbent.clone_from(&self.current);
            if self.target.is_some_and(|t| self.incumbent.len() >= t) {
                self.stop = true;
                return;
            }
        }

        let bound = self.current.len() + classes.iter().map(LabelClass::bound).sum::<usize>();
        if bound <= self.incumbent.len() || bound < self.floor {
            return;
        }

        let Some(ci) = self.select_class(classes) else {
            return;
        };
        let mut class = classes[ci];

        // Branch vertex: smallest label in L, moved past the end of the class.
        let (vi, v) = min_label(&self.left[class.l as usize..(class.l + class.left_len) as usize]);
        let last = (class.l + class.left_len - 1) as usize;
        self.left.swap(class.l as usize + vi, last);
        class.left_len -= 1;
        class.right_len -= 1;
        classes[ci] = class;

        // Candidates in ascending label order; the chosen one sits just past
        // the shortened class while it is tried.
        let mut prev: Option<u32> = None;
        for _ in 0..=class.right_len {
            let seg = (class.r as usize)..(class.r + class.right_len + 1) as usize;
            let (wi, w) = next_label_after(&self.right[seg.clone()], prev);
            prev = Some(w);
            self.right.swap(seg.start + wi, seg.end - 1);

            let mut next = self.pool.pop().unwrap_or_default();
            self.split(classes, v, w, &mut next);
            self.current.push((v, w));
            self.expand(&mut next);
            self.current.pop();
            self.pool.push(next);
            if self.stop {
                return;
            }
        }

        // Leave v unmapped.
        classes[ci].right_len += 1;
        if classes[ci].left_len == 0 {
            classes.remove(ci);
        }
        self.expand(classes);
    }

    /// Class minimising `max(|L|, |R|)`, ties to the smallest label in `L`.
    fn select_class(&self, classes: &[LabelClass]) -> Option<usize> {
        let live = |c: &LabelClass| c.left_len > 0 && c.right_len > 0;
        let best = classes
            .iter()
            .filter(|c| live(c))
            .map(|c| c.left_len.max(c.right_len))
            .min()?;
        classes
            .iter()
            .enumerate()
            .filter(|(_, c)| live(c) && c.left_len.max(c.right_len) == best)
            .min_by_key(|(_, c)| min_label(&self.left[c.l as usize..(c.l + c.left_len) as usize]).1)
            .map(|(i, _)| i)
    }

    /// Refines every class by adjacency to `v` in `g1` and `w` in `g2`.
    fn split(&mut self, classes: &[LabelClass], v: u32, w: u32, out: &mut Vec<LabelClass>) {
        out.clear();
        let row1 = self.g1.row(v as usize);
        let row2 = self.g2.row(w as usize);
        for c in classes {
            let l_adj = partition(
                &mut self.left[c.l as usize..(c.l + c.left_len) as usize],
                row1,
            );
            let r_adj = partition(
                &mut self.right[c.r as usize..(c.r + c.right_len) as usize],
                row2,
            );
            let l_non = c.left_len - l_adj;
            let r_non = c.right_len - r_adj;
            if l_non > 0 && r_non > 0 {
                out.push(LabelClass {
                    l: c.l + l_adj,
                    r: c.r + r_adj,
                    left_len: l_non,
                    right_len: r_non,
                });
            }
            if l_adj > 0 && r_adj > 0 {
                out.push(LabelClass {
                    l: c.l,
                    r: c.r,
                    left_len: l_adj,
                    right_len: r_adj,
                });
            }
        }
    }
}

/// Moves the neighbours (per `row`) to the front; returns how many there are.
/// Branch-free: every element is swapped into the boundary slot and the
/// boundary only advances past neighbours.
#[inline]
fn partition(seg: &mut [u32], row: &[u64]) -> u32 {
    let mut i = 0usize;
    for j in 0..seg.len() {
        let x = seg[j];
        let hit = (row[x as usize / 64] >> (x % 64)) & 1;
        seg[j] = seg[i];
        seg[i] = x;
        i += hit as usize;
    }
    i as u32
}

#[inline]
fn min_label(seg: &[u32]) -> (usize, u32) {
    seg.iter()
        .copied()
        .enumerate()
        .min_by_key(|&(_, x)| x)
        .expect("classes are non-empty")
}

#[inline]
fn next_label_after(seg: &[u32], prev: Option<u32>) -> (usize, u32) {
    seg.iter()
        .copied()
        .enumerate()
        .filter(|&(_, x)| prev.is_none_or(|p| x > p))
        .min_by_key(|&(_, x)| x)
        .expect("one untried candidate remains")
}
