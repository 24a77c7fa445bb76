//! Simple undirected graphs on dense vertex ids.

use std::collections::VecDeque;
use std::sync::OnceLock;

use crate::error::{Result, SfvsError};
use crate::set::VertexSet;

/// A simple undirected graph on vertices `0..n`.
///
/// Neighbour lists are sorted and duplicate-free. Bitset adjacency rows are
/// built on first use and cached.
#[derive(Clone)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
    rows: OnceLock<Vec<VertexSet>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Eq for Graph {}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
            rows: OnceLock::new(),
        }
    }

    /// Builds a graph from an edge list. Repeated edges collapse to one.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(SfvsError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(SfvsError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut m2 = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            m2 += list.len();
        }
        Ok(Graph {
            adj,
            m: m2 / 2,
            rows: OnceLock::new(),
        })
    }

    /// Builds a graph from bitset adjacency rows (assumed symmetric, loop-free).
    pub fn from_rows(rows: Vec<VertexSet>) -> Self {
        let adj: Vec<Vec<usize>> = rows.iter().map(|r| r.to_vec()).collect();
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        Graph {
            adj,
            m,
            rows: OnceLock::from(rows),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        if let Some(rows) = self.rows.get() {
            return rows[u].contains(v);
        }
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Neighbourhood of `v` as a bitset.
    pub fn neighbor_set(&self, v: usize) -> &VertexSet {
        &self.rows()[v]
    }

    pub fn rows(&self) -> &[VertexSet] {
        self.rows.get_or_init(|| {
            let n = self.n();
            self.adj
                .iter()
                .map(|l| VertexSet::from_iter_with_capacity(n, l.iter().copied()))
                .collect()
        })
    }

    /// Edges `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// Open neighbourhood of a set: vertices outside `s` adjacent to some member.
    pub fn neighborhood_of(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new(self.n());
        for v in s.iter() {
            out.union_with(self.neighbor_set(v));
        }
        out.difference_with(s);
        out
    }

    fn check_set(&self, s: &VertexSet) -> Result<()> {
        match s.iter().find(|&v| v >= self.n()) {
            Some(v) => Err(SfvsError::VertexOutOfRange { vertex: v, n: self.n() }),
            None => Ok(()),
        }
    }

    /// The subgraph induced by `keep`, plus the old-id to new-id map.
    ///
    /// New ids follow the ascending order of the kept old ids.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Result<(Graph, Vec<Option<usize>>)> {
        self.check_set(keep)?;
        let mut map = vec![None; self.n()];
        for (new, old) in keep.iter().enumerate() {
            map[old] = Some(new);
        }
        let k = keep.len();
        let mut adj = vec![Vec::new(); k];
        let mut m2 = 0;
        for old in keep.iter() {
            let new = map[old].unwrap();
            // sorted old ids map to sorted new ids
            adj[new] = self.adj[old].iter().filter_map(|&w| map[w]).collect();
            m2 += adj[new].len();
        }
        Ok((
            Graph {
                adj,
                m: m2 / 2,
                rows: OnceLock::new(),
            },
            map,
        ))
    }

    /// Connected components ordered by their smallest vertex.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        self.components_within(&self.vertex_set())
    }

    /// Connected components of the subgraph induced by `alive`.
    pub fn components_within(&self, alive: &VertexSet) -> Vec<VertexSet> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in alive.iter() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = VertexSet::new(n);
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                comp.insert(v);
                for &w in &self.adj[v] {
                    if !seen[w] && alive.contains(w) {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Whether `a` and `b` are connected in the subgraph induced by `alive`.
    pub fn connected_within(&self, alive: &VertexSet, a: usize, b: usize) -> bool {
        if !alive.contains(a) || !alive.contains(b) {
            return false;
        }
        let mut seen = VertexSet::new(self.n());
        let mut stack = vec![a];
        seen.insert(a);
        while let Some(v) = stack.pop() {
            if v == b {
                return true;
            }
            for &w in &self.adj[v] {
                if alive.contains(w) && !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        false
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| self.neighbor_set(v).is_disjoint(s))
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        let k = s.len();
        s.iter().all(|v| self.neighbor_set(v).intersection_len(s) + 1 == k)
    }

    /// Number of edges with both endpoints in `s`.
    pub fn edges_within(&self, s: &VertexSet) -> usize {
        s.iter().map(|v| self.neighbor_set(v).intersection_len(s)).sum::<usize>() / 2
    }
}
