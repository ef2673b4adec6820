//! Simple undirected graphs with word-packed adjacency rows.

use std::fmt;

use crate::bits::{self, WORD_BITS};
use crate::rng::Seed;
use crate::{Error, Result};

/// Largest vertex count accepted by any constructor.
pub const MAX_VERTICES: usize = 1 << 16;

/// An immutable simple undirected graph on vertices `0..n`.
///
/// Row `i` holds one bit per vertex; bit `j` is set iff `{i, j}` is an edge.
/// Rows are symmetric, the diagonal is clear, and each row's popcount is
/// cached as the vertex degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
    degrees: Vec<u32>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Builder::new(n).finish()
    }

    pub fn complete(n: usize) -> Self {
        let mut b = Builder::new(n);
        for i in 0..n {
            for j in i + 1..n {
                b.add_edge(i, j);
            }
        }
        b.finish()
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let mut b = Builder::new(n);
        for i in 1..n {
            b.add_edge(i - 1, i);
        }
        b.finish()
    }

    /// Cycle on `n >= 3` vertices; smaller `n` gives the path.
    pub fn cycle(n: usize) -> Self {
        let mut b = Builder::new(n);
        for i in 1..n {
            b.add_edge(i - 1, i);
        }
        if n >= 3 {
            b.add_edge(n - 1, 0);
        }
        b.finish()
    }

    /// Builds a graph from an edge list. Repeated edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::invalid(format!(
                "{n} vertices exceeds the supported maximum of {MAX_VERTICES}"
            )));
        }
        let mut b = Builder::new(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            b.add_edge(u, v);
        }
        Ok(b.finish())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of 64-bit words in each adjacency row.
    #[inline]
    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        bits::test(self.row(u), v)
    }

    /// The packed neighbourhood of `u`.
    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.stride..(u + 1) * self.stride]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.degrees[u] as usize
    }

    pub fn edge_count(&self) -> usize {
        self.degrees.iter().map(|&d| d as usize).sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        bits::ones(self.row(u))
    }

    /// Edges `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// The graph with every off-diagonal pair flipped.
    pub fn complement(&self) -> Graph {
        let mut rows = self.rows.clone();
        let tail = bits::tail_mask(self.n);
        for u in 0..self.n {
            let row = &mut rows[u * self.stride..(u + 1) * self.stride];
            for w in row.iter_mut() {
                *w = !*w;
            }
            if let Some(last) = row.last_mut() {
                *last &= tail;
            }
            bits::clear(row, u);
        }
        let last = self.n.saturating_sub(1) as u32;
        let degrees = self.degrees.iter().map(|&d| last - d).collect();
        Graph {
            n: self.n,
            stride: self.stride,
            rows,
            degrees,
        }
    }

    /// The subgraph induced by `vertices`, relabelled `0..vertices.len()` in
    /// the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut seen = vec![0u64; self.stride];
        for &v in vertices {
            if v >= self.n {
                return Err(Error::invalid(format!(
                    "vertex {v} out of range for {} vertices",
                    self.n
                )));
            }
            if bits::test(&seen, v) {
                return Err(Error::invalid(format!("vertex {v} listed twice")));
            }
            bits::set(&mut seen, v);
        }
        let mut b = Builder::new(vertices.len());
        for (a, &u) in vertices.iter().enumerate() {
            for (c, &w) in vertices.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, w) {
                    b.add_edge(a, c);
                }
            }
        }
        Ok(b.finish())
    }

    /// Checks the structural invariants word by word.
    pub fn check_invariants(&self) -> bool {
        let tail = bits::tail_mask(self.n);
        (0..self.n).all(|u| {
            let row = self.row(u);
            !bits::test(row, u)
                && row.last().is_none_or(|&w| w & !tail == 0)
                && bits::count(row) == self.degree(u)
                && bits::ones(row).all(|v| self.has_edge(v, u))
        })
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Mutable staging area; the only way to set adjacency bits.
pub(crate) struct Builder {
    pub(crate) n: usize,
    stride: usize,
    rows: Vec<u64>,
}

impl Builder {
    pub(crate) fn new(n: usize) -> Self {
        let stride = bits::words_for(n);
        Builder {
            n,
            stride,
            rows: vec![0; n * stride],
        }
    }

    #[inline]
    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.rows[u * self.stride + v / WORD_BITS] |= 1 << (v % WORD_BITS);
        self.rows[v * self.stride + u / WORD_BITS] |= 1 << (u % WORD_BITS);
    }

    #[inline]
    pub(crate) fn has_edge(&self, u: usize, v: usize) -> bool {
        bits::test(&self.rows[u * self.stride..(u + 1) * self.stride], v)
    }

    pub(crate) fn finish(self) -> Graph {
        let degrees = self
            .rows
            .chunks(self.stride.max(1))
            .take(self.n)
            .map(|r| bits::count(r) as u32)
            .collect();
        Graph {
            n: self.n,
            stride: self.stride,
            rows: self.rows,
            degrees,
        }
    }
}

/// Samples `G(n, p)`.
///
/// Pairs are visited in row-major order (`(0,1), (0,2), ..., (0,n-1), (1,2),
/// ...`) and each consumes exactly one 64-bit draw from the seeded stream.
pub fn gnp_sample(n: usize, p: f64, seed: Seed) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!(
            "edge probability {p} not in [0, 1]"
        )));
    }
    if n > MAX_VERTICES {
        return Err(Error::invalid(format!(
            "{n} vertices exceeds the supported maximum of {MAX_VERTICES}"
        )));
    }
    let mut rng = seed.rng();
    let mut b = Builder::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.flip(p) {
                b.add_edge(i, j);
            }
        }
    }
    Ok(b.finish())
}

/// The first `n` vertices of the binary-digit Rado graph: for `i < j`,
/// `{i, j}` is an edge iff bit `i` of `j` is set.
pub fn rado_prefix(n: usize) -> Result<Graph> {
    if n > MAX_VERTICES {
        return Err(Error::invalid(format!(
            "{n} vertices exceeds the supported maximum of {MAX_VERTICES}"
        )));
    }
    let mut b = Builder::new(n);
    for j in 0..n {
        for i in 0..j.min(usize::BITS as usize) {
            if (j >> i) & 1 == 1 {
                b.add_edge(i, j);
            }
        }
    }
    Ok(b.finish())
}

/// Whether `map` (pairs `(g1 vertex, g2 vertex)`) preserves both edges and
/// non-edges between every two mapped vertices.
pub fn is_induced_isomorphism(g1: &Graph, g2: &Graph, map: &[(usize, usize)]) -> Result<bool> {
    let mut left = vec![0u64; g1.stride()];
    let mut right = vec![0u64; g2.stride()];
    for &(u, v) in map {
        if u >= g1.n() || v >= g2.n() {
            return Err(Error::invalid(format!("pair ({u}, {v}) out of range")));
        }
        if bits::test(&left, u) || bits::test(&right, v) {
            return Err(Error::invalid(format!(
                "pair ({u}, {v}) breaks injectivity"
            )));
        }
        bits::set(&mut left, u);
        bits::set(&mut right, v);
    }
    Ok(map.iter().enumerate().all(|(a, &(u1, v1))| {
        map[a + 1..]
            .iter()
            .all(|&(u2, v2)| g1.has_edge(u1, u2) == g2.has_edge(v1, v2))
    }))
}
