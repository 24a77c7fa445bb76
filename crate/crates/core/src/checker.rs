//! T-forest recognition.
//!
//! A graph `F` is a T-forest when no cycle of `F` passes through a vertex of
//! `T`. Three routes are provided:
//!
//! * block-based (the main one, linear time, with a witness on rejection):
//!   `F` is a T-forest iff every T-vertex lies only in blocks that are single
//!   edges;
//! * contraction-based: collapse each component of `F - T` to a node, keep
//!   parallel edges (capped at two) and test the quotient for acyclicity;
//! * a bitmask counting routine for graphs with at most 64 vertices, used by
//!   the exhaustive oracle.

use std::collections::VecDeque;

use crate::graph::Graph;
use crate::set::VertexSet;

/// A cycle through a terminal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TCycleWitness {
    pub cycle: Vec<usize>,
    pub t_vertex: usize,
}

impl TCycleWitness {
    /// Checks that the witness is a genuine T-cycle of `g` inside `alive`.
    pub fn is_valid(&self, g: &Graph, terminals: &VertexSet, alive: Option<&VertexSet>) -> bool {
        let k = self.cycle.len();
        if k < 3 || !terminals.contains(self.t_vertex) || !self.cycle.contains(&self.t_vertex) {
            return false;
        }
        let mut seen = VertexSet::new(g.n());
        for (i, &v) in self.cycle.iter().enumerate() {
            if v >= g.n() || seen.contains(v) || alive.is_some_and(|a| !a.contains(v)) {
                return false;
            }
            seen.insert(v);
            if !g.is_adjacent(v, self.cycle[(i + 1) % k]) {
                return false;
            }
        }
        true
    }
}

/// Whether `f` is a T-forest.
pub fn is_t_forest(f: &Graph, terminals: &VertexSet) -> bool {
    find_t_cycle_within(f, terminals, None).is_none()
}

/// A T-cycle of `f`, or `None` when `f` is a T-forest. Runs in `O(n + m)`.
pub fn find_t_cycle(f: &Graph, terminals: &VertexSet) -> Option<TCycleWitness> {
    find_t_cycle_within(f, terminals, None)
}

/// Whether `g[alive]` is a T-forest, without materializing the subgraph.
pub fn is_t_forest_within(g: &Graph, terminals: &VertexSet, alive: &VertexSet) -> bool {
    find_t_cycle_within(g, terminals, Some(alive)).is_none()
}

/// Block-based search for a T-cycle in `g[alive]` (all of `g` if `alive` is `None`).
pub fn find_t_cycle_within(
    g: &Graph,
    terminals: &VertexSet,
    alive: Option<&VertexSet>,
) -> Option<TCycleWitness> {
    let n = g.n();
    let is_alive = |v: usize| alive.is_none_or(|a| a.contains(v));
    const UNSEEN: u32 = u32::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut next_edge = vec![0usize; n];
    let mut parent = vec![usize::MAX; n];
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut call_stack: Vec<usize> = Vec::new();
    let mut stamp = vec![0u32; n];
    let mut block_id = 0u32;
    let mut block: Vec<usize> = Vec::new();
    let mut time = 0u32;

    for root in 0..n {
        if disc[root] != UNSEEN || !is_alive(root) {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        call_stack.push(root);
        while let Some(&v) = call_stack.last() {
            let nbrs = g.neighbors(v);
            if next_edge[v] < nbrs.len() {
                let w = nbrs[next_edge[v]];
                next_edge[v] += 1;
                if !is_alive(w) {
                    continue;
                }
                if disc[w] == UNSEEN {
                    parent[w] = v;
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    edge_stack.push((v, w));
                    call_stack.push(w);
                } else if w != parent[v] && disc[w] < disc[v] {
                    low[v] = low[v].min(disc[w]);
                    edge_stack.push((v, w));
                }
                continue;
            }
            call_stack.pop();
            let Some(&p) = call_stack.last() else { continue };
            low[p] = low[p].min(low[v]);
            if low[v] < disc[p] {
                continue;
            }
            // p separates the block ending in edge (p, v)
            block_id += 1;
            block.clear();
            let mut terminal_in_block = None;
            while let Some((a, b)) = edge_stack.pop() {
                for x in [a, b] {
                    if stamp[x] != block_id {
                        stamp[x] = block_id;
                        block.push(x);
                        if terminal_in_block.is_none() && terminals.contains(x) {
                            terminal_in_block = Some(x);
                        }
                    }
                }
                if (a, b) == (p, v) {
                    break;
                }
            }
            if block.len() >= 3 {
                if let Some(t) = terminal_in_block {
                    return Some(witness_in_block(g, t, &stamp, block_id));
                }
            }
        }
    }
    None
}

/// Two block neighbours of `t` joined by a path inside the block that avoids `t`.
fn witness_in_block(g: &Graph, t: usize, stamp: &[u32], block_id: u32) -> TCycleWitness {
    let in_block = |x: usize| stamp[x] == block_id;
    let mut tn = g.neighbors(t).iter().copied().filter(|&x| in_block(x));
    let a = tn.next().expect("block vertex of a 2-connected block has two block neighbours");
    let targets: Vec<usize> = tn.collect();
    let mut pred = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::from([a]);
    pred[a] = a;
    let mut found = None;
    while let Some(v) = queue.pop_front() {
        if v != a && targets.binary_search(&v).is_ok() {
            found = Some(v);
            break;
        }
        for &w in g.neighbors(v) {
            if w != t && in_block(w) && pred[w] == usize::MAX {
                pred[w] = v;
                queue.push_back(w);
            }
        }
    }
    let b = found.expect("block minus a vertex stays connected");
    let mut path = vec![b];
    let mut cur = b;
    while cur != a {
        cur = pred[cur];
        path.push(cur);
    }
    path.reverse();
    let mut cycle = Vec::with_capacity(path.len() + 1);
    cycle.push(t);
    cycle.extend(path);
    TCycleWitness { cycle, t_vertex: t }
}

/// Node of the contraction quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientNode {
    Terminal(usize),
    /// A connected component of `F - T`, as its sorted vertex list.
    Component(Vec<usize>),
}

/// `F` with every component of `F - T` contracted to a single node.
///
/// Edges carry their multiplicity, capped at 2.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub nodes: Vec<QuotientNode>,
    pub edges: Vec<(usize, usize, u8)>,
}

impl Quotient {
    /// A multi-edge counts as a cycle.
    pub fn is_acyclic(&self) -> bool {
        if self.edges.iter().any(|&(_, _, mult)| mult >= 2) {
            return false;
        }
        let mut uf = UnionFind::new(self.nodes.len());
        self.edges.iter().all(|&(a, b, _)| uf.union(a, b))
    }
}

/// Contracts the components of `f - T`.
pub fn contract_non_t(f: &Graph, terminals: &VertexSet) -> Quotient {
    let n = f.n();
    let mut uf = UnionFind::new(n);
    for (u, v) in f.edges() {
        if !terminals.contains(u) && !terminals.contains(v) {
            uf.union(u, v);
        }
    }
    let mut node_of = vec![usize::MAX; n];
    let mut nodes = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if terminals.contains(v) {
            node_of[v] = nodes.len();
            nodes.push(QuotientNode::Terminal(v));
            members.push(Vec::new());
        } else {
            let r = uf.find(v);
            if node_of[r] == usize::MAX {
                node_of[r] = nodes.len();
                nodes.push(QuotientNode::Component(Vec::new()));
                members.push(Vec::new());
            }
            node_of[v] = node_of[r];
            members[node_of[v]].push(v);
        }
    }
    for (node, list) in nodes.iter_mut().zip(members) {
        if let QuotientNode::Component(c) = node {
            *c = list;
        }
    }
    let mut pairs: Vec<(usize, usize)> = f
        .edges()
        .filter(|&(u, v)| terminals.contains(u) || terminals.contains(v))
        .map(|(u, v)| {
            let (a, b) = (node_of[u], node_of[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    pairs.sort_unstable();
    let mut edges: Vec<(usize, usize, u8)> = Vec::new();
    for (a, b) in pairs {
        match edges.last_mut() {
            Some(last) if (last.0, last.1) == (a, b) => last.2 = 2,
            _ => edges.push((a, b, 1)),
        }
    }
    Quotient { nodes, edges }
}

/// Contraction-based T-forest test.
pub fn is_t_forest_by_contraction(f: &Graph, terminals: &VertexSet) -> bool {
    contract_non_t(f, terminals).is_acyclic()
}

/// T-forest test on a graph of at most 64 vertices given as adjacency masks.
///
/// Uses the cycle-rank identity of the contraction quotient:
/// `F` is a T-forest iff the number of edges of `F` with a terminal endpoint
/// equals `|T ∩ F| + comp(F - T) - comp(F)`.
pub fn is_t_forest_mask(adj: &[u64], terminals: u64, forest: u64) -> bool {
    let tf = terminals & forest;
    if tf == 0 {
        return true;
    }
    let mut t_edges2 = 0u32;
    let mut tt_edges2 = 0u32;
    let mut rest = tf;
    while rest != 0 {
        let t = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        t_edges2 += (adj[t] & forest).count_ones();
        tt_edges2 += (adj[t] & tf).count_ones();
    }
    // edges counted once from each terminal endpoint, T-T edges twice
    let t_edges = t_edges2 - tt_edges2 / 2;
    let rank = tf.count_ones() as i64 + mask_components(adj, forest & !terminals) as i64
        - mask_components(adj, forest) as i64;
    t_edges as i64 == rank
}

fn mask_components(adj: &[u64], set: u64) -> u32 {
    let mut left = set;
    let mut count = 0;
    while left != 0 {
        let start = left & left.wrapping_neg();
        let mut comp = start;
        let mut frontier = start;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = adj[v] & set & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        left &= !comp;
        count += 1;
    }
    count
}

/// Adjacency masks of a graph with at most 64 vertices.
pub fn adjacency_masks(g: &Graph) -> Vec<u64> {
    assert!(g.n() <= 64, "mask routines need n <= 64");
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect()
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}
