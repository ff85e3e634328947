//! Simple undirected graphs on the vertex set `{0, .., n-1}`.
//!
//! Adjacency is stored as one bitset per vertex. Every operation here is a
//! pure function of its inputs; a [`Graph`] is never mutated once it has been
//! handed to another module.

use std::collections::VecDeque;
use std::fmt;

use fixedbitset::FixedBitSet;
use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Shortest-path length, with a dedicated variant for unreachable pairs.
///
/// `Finite(_) < Infinite`, so eccentricities can be compared directly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

/// An ordered set of distinct vertices.
///
/// The order matters for [`Graph::induced_subgraph`], which relabels the
/// `i`-th element to `i`. Sets produced by this crate are always ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(items: Vec<usize>, n: usize) -> Result<Self> {
        let mut seen = FixedBitSet::with_capacity(n);
        for &v in &items {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if seen.put(v) {
                return Err(Error::DuplicateVertex(v));
            }
        }
        Ok(VertexSet(items))
    }

    pub(crate) fn from_sorted(items: Vec<usize>) -> Self {
        debug_assert!(items.windows(2).all(|w| w[0] < w[1]));
        VertexSet(items)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl std::ops::Deref for VertexSet {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<FixedBitSet>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: (0..n).map(|_| FixedBitSet::with_capacity(n)).collect(),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub(crate) fn set_edge_unchecked(&mut self, u: usize, v: usize) {
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.count_ones(..)).sum::<usize>() / 2
    }

    /// `false` for out-of-range vertices.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].ones()
    }

    pub fn neighbor_set(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.adj[u].ones() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn adjacency_matrix(&self) -> DMatrix<i64> {
        DMatrix::from_fn(self.n, self.n, |i, j| i64::from(self.has_edge(i, j)))
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for u in 0..self.n {
            let mut row = self.adj[u].clone();
            row.toggle_range(..);
            row.set(u, false);
            g.adj[u] = row;
        }
        g
    }

    /// `d` disjoint copies of `self`.
    pub fn repeat(&self, d: usize) -> Graph {
        disjoint_sum(&vec![self.clone(); d])
    }

    /// Relabels vertex `v` to `images[v]`.
    pub fn relabel(&self, images: &[usize]) -> Result<Graph> {
        if images.len() != self.n {
            return Err(Error::InvalidPermutation(format!(
                "length {} for a graph on {} vertices",
                images.len(),
                self.n
            )));
        }
        VertexSet::new(images.to_vec(), self.n)?;
        let mut g = Graph::new(self.n);
        for (u, v) in self.edges() {
            g.set_edge_unchecked(images[u], images[v]);
        }
        Ok(g)
    }

    /// Component index of every vertex; components are numbered in order of
    /// their least vertex.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for w in self.adj[u].ones() {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().into_iter().max().map_or(0, |m| m + 1)
    }

    /// Connected in the usual sense; the graph with no vertices counts as
    /// connected.
    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    pub fn connected_components(&self) -> Vec<(VertexSet, Graph)> {
        let labels = self.component_labels();
        let k = labels.iter().max().map_or(0, |m| m + 1);
        let mut parts = vec![Vec::new(); k];
        for (v, &c) in labels.iter().enumerate() {
            parts[c].push(v);
        }
        parts
            .into_iter()
            .map(|p| {
                let h = self.induced_unchecked(&p);
                (VertexSet::from_sorted(p), h)
            })
            .collect()
    }

    pub fn bfs_distances(&self, source: usize) -> Result<Vec<Distance>> {
        self.check_vertex(source)?;
        let mut dist = vec![Distance::Infinite; self.n];
        dist[source] = Distance::Finite(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let Distance::Finite(du) = dist[u] else { unreachable!() };
            for w in self.adj[u].ones() {
                if dist[w] == Distance::Infinite {
                    dist[w] = Distance::Finite(du + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    pub fn distance(&self, u: usize, v: usize) -> Result<Distance> {
        self.check_vertex(v)?;
        Ok(self.bfs_distances(u)?[v])
    }

    pub fn eccentricity(&self, v: usize) -> Result<Distance> {
        if self.n == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(self
            .bfs_distances(v)?
            .into_iter()
            .max()
            .expect("non-empty graph"))
    }

    pub fn eccentricities(&self) -> Result<Vec<Distance>> {
        (0..self.n).map(|v| self.eccentricity(v)).collect()
    }

    /// Vertices of minimal eccentricity. For a disconnected graph every
    /// eccentricity is infinite, so the center is the whole vertex set.
    pub fn center(&self) -> Result<VertexSet> {
        if self.n == 0 {
            return Err(Error::EmptyGraph);
        }
        let ecc = self.eccentricities()?;
        let min = *ecc.iter().min().expect("non-empty graph");
        Ok(VertexSet::from_sorted(
            (0..self.n).filter(|&v| ecc[v] == min).collect(),
        ))
    }

    /// Subgraph induced by `s`, relabelled so that `s[i]` becomes `i`.
    pub fn induced_subgraph(&self, s: &[usize]) -> Result<Graph> {
        VertexSet::new(s.to_vec(), self.n)?;
        Ok(self.induced_unchecked(s))
    }

    pub(crate) fn induced_unchecked(&self, s: &[usize]) -> Graph {
        let mut g = Graph::new(s.len());
        for (i, &u) in s.iter().enumerate() {
            for (j, &v) in s.iter().enumerate().skip(i + 1) {
                if self.adj[u].contains(v) {
                    g.set_edge_unchecked(i, j);
                }
            }
        }
        g
    }

    /// Removes the listed vertices; the remaining ones keep their relative
    /// order.
    pub fn remove_vertices(&self, removed: &[usize]) -> Result<Graph> {
        VertexSet::new(removed.to_vec(), self.n)?;
        let keep: Vec<usize> = (0..self.n).filter(|v| !removed.contains(v)).collect();
        Ok(self.induced_unchecked(&keep))
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.edge_count() + 1 == self.n && self.is_connected()
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.component_count() == self.n
    }

    pub fn is_complete(&self) -> bool {
        2 * self.edge_count() == self.n * self.n.saturating_sub(1)
    }

    pub fn is_edgeless(&self) -> bool {
        self.adj.iter().all(|s| s.is_clear())
    }

    /// Number of walks of length `k` from `u` to `v` is `A^k[u][v]`.
    pub fn walk_counts(&self, k: u32) -> DMatrix<i64> {
        let a = self.adjacency_matrix();
        let mut out = DMatrix::<i64>::identity(self.n, self.n);
        for _ in 0..k {
            out = &out * &a;
        }
        out
    }
}

/// Disjoint union; the vertices of `gs[0]` come first, then `gs[1]`, and so on.
pub fn disjoint_sum(gs: &[Graph]) -> Graph {
    let total = gs.iter().map(Graph::n).sum();
    let mut out = Graph::new(total);
    let mut offset = 0;
    for g in gs {
        for (u, v) in g.edges() {
            out.set_edge_unchecked(u + offset, v + offset);
        }
        offset += g.n();
    }
    out
}

/// Named graphs used throughout tests and the command line.
pub mod families {
    use super::Graph;

    pub fn complete(n: usize) -> Graph {
        Graph::new(n).complement()
    }

    pub fn edgeless(n: usize) -> Graph {
        Graph::new(n)
    }

    pub fn path(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.set_edge_unchecked(v - 1, v);
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        let mut g = path(n);
        if n >= 3 {
            g.set_edge_unchecked(0, n - 1);
        }
        g
    }

    /// `K_{1,k}` with the center at vertex 0.
    pub fn star(k: usize) -> Graph {
        let mut g = Graph::new(k + 1);
        for v in 1..=k {
            g.set_edge_unchecked(0, v);
        }
        g
    }

    /// Triangle `{0,1,2}` with pendant vertices 3 (on 0) and 4 (on 1).
    pub fn bull() -> Graph {
        Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (0, 3), (1, 4)]).unwrap()
    }

    /// Four-cycle `0-1-2-3` with a pendant vertex 4 on 0.
    pub fn pan() -> Graph {
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)]).unwrap()
    }

    /// Path `0-1-2-3` with a pendant vertex 4 on 1.
    pub fn chair() -> Graph {
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (1, 4)]).unwrap()
    }
}
