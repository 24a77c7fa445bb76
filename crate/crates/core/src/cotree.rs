//! Cograph recognition, cotrees and induced `sP1 + P4` detection.

use crate::error::{Result, SfvsError};
use crate::graph::Graph;
use crate::set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CotreeNode {
    Leaf(usize),
    Union(usize, usize),
    Join(usize, usize),
}

/// A binarized cotree over a subset of a host graph's vertices.
///
/// Children always have smaller node ids than their parent, so ascending
/// node order is a post-order.
#[derive(Clone, Debug)]
pub struct Cotree {
    nodes: Vec<CotreeNode>,
    root: Option<usize>,
    capacity: usize,
    parent: Vec<usize>,
    depth: Vec<u32>,
    leaf_of: Vec<Option<usize>>,
}

/// Four vertices `a, b, c, d` inducing the path `a - b - c - d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InducedP4(pub [usize; 4]);

/// `s` pairwise non-adjacent vertices followed by an induced P4, with no
/// edges between the two groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternWitness {
    pub vertices: Vec<usize>,
}

impl PatternWitness {
    pub fn s(&self) -> usize {
        self.vertices.len() - 4
    }

    /// Checks that exactly the edges of `sP1 + P4` are present.
    pub fn is_valid(&self, g: &Graph) -> bool {
        let k = self.vertices.len();
        if k < 4 {
            return false;
        }
        let s = k - 4;
        let mut sorted = self.vertices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != k || sorted.iter().any(|&v| v >= g.n()) {
            return false;
        }
        for i in 0..k {
            for j in i + 1..k {
                let expected = i >= s && j == i + 1;
                if g.is_adjacent(self.vertices[i], self.vertices[j]) != expected {
                    return false;
                }
            }
        }
        true
    }
}

impl Cotree {
    /// Assembles a cotree from nodes listed children-first.
    pub fn from_nodes(nodes: Vec<CotreeNode>, root: Option<usize>, capacity: usize) -> Result<Cotree> {
        let bad = |msg: String| SfvsError::CotreeMismatch(msg);
        let mut parent = vec![usize::MAX; nodes.len()];
        let mut leaf_of = vec![None; capacity];
        for (id, node) in nodes.iter().enumerate() {
            match *node {
                CotreeNode::Leaf(v) => {
                    if v >= capacity {
                        return Err(bad(format!("leaf vertex {v} out of range")));
                    }
                    if leaf_of[v].replace(id).is_some() {
                        return Err(bad(format!("vertex {v} appears twice")));
                    }
                }
                CotreeNode::Union(a, b) | CotreeNode::Join(a, b) => {
                    for c in [a, b] {
                        if c >= id || parent[c] != usize::MAX {
                            return Err(bad(format!("node {id} has invalid child {c}")));
                        }
                        parent[c] = id;
                    }
                }
            }
        }
        match root {
            None if !nodes.is_empty() => return Err(bad("nodes without a root".into())),
            Some(r) if r >= nodes.len() || parent[r] != usize::MAX => {
                return Err(bad(format!("invalid root {r}")))
            }
            _ => {}
        }
        let orphans = parent.iter().filter(|&&p| p == usize::MAX).count();
        if orphans > usize::from(root.is_some()) {
            return Err(bad("cotree is not connected".into()));
        }
        let mut depth = vec![0u32; nodes.len()];
        for id in (0..nodes.len()).rev() {
            if parent[id] != usize::MAX {
                depth[id] = depth[parent[id]] + 1;
            }
        }
        Ok(Cotree { nodes, root, capacity, parent, depth, leaf_of })
    }

    pub fn nodes(&self) -> &[CotreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    /// Size of the host vertex id space.
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::from_iter_with_capacity(
            self.capacity,
            (0..self.capacity).filter(|&v| self.leaf_of[v].is_some()),
        )
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_of.iter().filter(|l| l.is_some()).count()
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.capacity && self.leaf_of[v].is_some()
    }

    /// Adjacency as encoded by the tree: the lowest common ancestor is a join.
    pub fn adjacent_by_lca(&self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        let (Some(mut a), Some(mut b)) = (self.leaf_of[u], self.leaf_of[v]) else {
            return false;
        };
        while self.depth[a] > self.depth[b] {
            a = self.parent[a];
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b];
        }
        while a != b {
            a = self.parent[a];
            b = self.parent[b];
        }
        matches!(self.nodes[a], CotreeNode::Join(..))
    }

    /// The graph on `0..capacity` whose edges the cotree encodes.
    pub fn realize(&self) -> Graph {
        let n = self.capacity;
        let mut rows = vec![VertexSet::new(n); n];
        let mut leaves: Vec<VertexSet> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let set = match *node {
                CotreeNode::Leaf(v) => VertexSet::from_iter_with_capacity(n, [v]),
                CotreeNode::Union(a, b) => leaves[a].union(&leaves[b]),
                CotreeNode::Join(a, b) => {
                    for u in leaves[a].iter() {
                        rows[u].union_with(&leaves[b]);
                    }
                    for u in leaves[b].iter() {
                        rows[u].union_with(&leaves[a]);
                    }
                    leaves[a].union(&leaves[b])
                }
            };
            leaves.push(set);
        }
        Graph::from_rows(rows)
    }
}

/// Builds a cotree of `g`, or returns an induced P4.
pub fn build_cotree(g: &Graph) -> std::result::Result<Cotree, InducedP4> {
    build_cotree_within(g, &g.vertex_set())
}

/// Builds a cotree of `g[alive]` with leaves labelled by host vertex ids.
///
/// Recursion: a disconnected graph is the union of its components, a graph
/// with disconnected complement is the join of its co-components, and a
/// graph where both are connected contains an induced P4.
pub fn build_cotree_within(g: &Graph, alive: &VertexSet) -> std::result::Result<Cotree, InducedP4> {
    let mut nodes = Vec::new();
    let root = if alive.is_empty() {
        None
    } else {
        Some(build_rec(g, alive.clone(), &mut nodes)?)
    };
    Ok(Cotree::from_nodes(nodes, root, g.n()).expect("construction yields a valid cotree"))
}

fn build_rec(g: &Graph, set: VertexSet, nodes: &mut Vec<CotreeNode>) -> std::result::Result<usize, InducedP4> {
    if set.len() == 1 {
        nodes.push(CotreeNode::Leaf(set.first().unwrap()));
        return Ok(nodes.len() - 1);
    }
    let comps = parts(g, &set, false);
    let (parts, join) = if comps.len() > 1 {
        (comps, false)
    } else {
        let co = parts(g, &set, true);
        if co.len() == 1 {
            return Err(find_p4_within(g, &set).expect("connected and co-connected graph has a P4"));
        }
        (co, true)
    };
    let mut acc: Option<usize> = None;
    for p in parts {
        let child = build_rec(g, p, nodes)?;
        acc = Some(match acc {
            None => child,
            Some(left) => {
                nodes.push(if join {
                    CotreeNode::Join(left, child)
                } else {
                    CotreeNode::Union(left, child)
                });
                nodes.len() - 1
            }
        });
    }
    Ok(acc.unwrap())
}

/// Components of `g[set]` (or of its complement), ordered by smallest vertex.
fn parts(g: &Graph, set: &VertexSet, complement: bool) -> Vec<VertexSet> {
    let mut unvisited = set.clone();
    let mut out = Vec::new();
    while let Some(start) = unvisited.first() {
        unvisited.remove(start);
        let mut comp = VertexSet::from_iter_with_capacity(g.n(), [start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let fresh = if complement {
                unvisited.difference(g.neighbor_set(v))
            } else {
                unvisited.intersection(g.neighbor_set(v))
            };
            for w in fresh.iter() {
                stack.push(w);
            }
            unvisited.difference_with(&fresh);
            comp.union_with(&fresh);
        }
        out.push(comp);
    }
    out
}

/// Some induced P4 of `g[set]`, found through its middle edge.
pub fn find_p4_within(g: &Graph, set: &VertexSet) -> Option<InducedP4> {
    p4s_within(g, set).next()
}

/// All induced P4s `a-b-c-d` of `g[set]`, each reported once (`a < d`).
fn p4s_within<'a>(g: &'a Graph, set: &'a VertexSet) -> impl Iterator<Item = InducedP4> + 'a {
    set.iter().flat_map(move |b| {
        g.neighbors(b)
            .iter()
            .copied()
            .filter(move |&c| set.contains(c))
            .flat_map(move |c| {
                let nb = g.neighbor_set(b);
                let nc = g.neighbor_set(c);
                let mut ends_a = nb.intersection(set);
                ends_a.difference_with(nc);
                ends_a.remove(c);
                let mut ends_d = nc.intersection(set);
                ends_d.difference_with(nb);
                ends_d.remove(b);
                ends_a
                    .iter()
                    .flat_map(move |a| {
                        let na = g.neighbor_set(a).clone();
                        ends_d
                            .iter()
                            .filter(move |&d| a < d && !na.contains(d))
                            .map(move |d| InducedP4([a, b, c, d]))
                            .collect::<Vec<_>>()
                    })
                    .collect::<Vec<_>>()
            })
    })
}

/// Searches for an induced `sP1 + P4`. Exhaustive.
pub fn find_induced_sp1_p4(g: &Graph, s: usize) -> Option<PatternWitness> {
    let all = g.vertex_set();
    for InducedP4(p) in p4s_within(g, &all) {
        let mut blocked = VertexSet::from_iter_with_capacity(g.n(), p);
        for &v in &p {
            blocked.union_with(g.neighbor_set(v));
        }
        let free = all.difference(&blocked);
        if let Some(mut iso) = independent_set_of_size(g, &free, s) {
            iso.extend(p);
            return Some(PatternWitness { vertices: iso });
        }
    }
    None
}

pub fn is_sp1_p4_free(g: &Graph, s: usize) -> bool {
    find_induced_sp1_p4(g, s).is_none()
}

/// An independent set of exactly `k` vertices inside `within`, if one exists.
///
/// Branches on the closed neighbourhood of a minimum-degree vertex: some
/// independent set of size `k` meets it whenever one exists.
pub fn independent_set_of_size(g: &Graph, within: &VertexSet, k: usize) -> Option<Vec<usize>> {
    if k == 0 {
        return Some(Vec::new());
    }
    if within.len() < k {
        return None;
    }
    let v = within
        .iter()
        .min_by_key(|&v| g.neighbor_set(v).intersection_len(within))
        .unwrap();
    let mut closed = g.neighbor_set(v).intersection(within);
    closed.insert(v);
    for u in closed.iter() {
        let mut rest = within.difference(g.neighbor_set(u));
        rest.remove(u);
        if let Some(mut found) = independent_set_of_size(g, &rest, k - 1) {
            found.insert(0, u);
            found.sort_unstable();
            return Some(found);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::test_graphs::*;

    #[test]
    fn p4_is_rejected_with_itself() {
        let g = path(4);
        let InducedP4(w) = build_cotree(&g).unwrap_err();
        let mut sorted = w;
        sorted.sort();
        assert_eq!(sorted, [0, 1, 2, 3]);
        assert!(g.is_adjacent(w[0], w[1]) && g.is_adjacent(w[1], w[2]) && g.is_adjacent(w[2], w[3]));
    }

    #[test]
    fn k2_is_a_join_of_leaves() {
        let t = build_cotree(&complete(2)).unwrap();
        assert_eq!(t.nodes(), &[CotreeNode::Leaf(0), CotreeNode::Leaf(1), CotreeNode::Join(0, 1)]);
    }

    #[test]
    fn c4_is_join_of_two_unions() {
        let t = build_cotree(&cycle(4)).unwrap();
        let root = t.root().unwrap();
        let CotreeNode::Join(a, b) = t.nodes()[root] else { panic!("root should be a join") };
        assert!(matches!(t.nodes()[a], CotreeNode::Union(..)));
        assert!(matches!(t.nodes()[b], CotreeNode::Union(..)));
        assert_eq!(t.realize(), cycle(4));
    }

    #[test]
    fn pattern_examples() {
        // 2P1 + P4: isolated 0, 1 and path 2-3-4-5
        let g = Graph::from_edges(6, [(2, 3), (3, 4), (4, 5)]).unwrap();
        let w = find_induced_sp1_p4(&g, 2).unwrap();
        assert_eq!(w.vertices.len(), 6);
        assert!(w.is_valid(&g));
        assert!(find_induced_sp1_p4(&complete(7), 1).is_none());
        assert!(find_induced_sp1_p4(&cycle(5), 2).is_none());
        assert!(find_induced_sp1_p4(&cycle(5), 0).is_some());
    }

    #[test]
    fn empty_and_single_vertex() {
        let t = build_cotree_within(&path(3), &VertexSet::new(3)).unwrap();
        assert_eq!(t.root(), None);
        let t = build_cotree(&Graph::empty(1)).unwrap();
        assert_eq!(t.nodes(), &[CotreeNode::Leaf(0)]);
    }

    #[test]
    fn independent_set_search() {
        let g = cycle(6);
        let all = g.vertex_set();
        assert_eq!(independent_set_of_size(&g, &all, 3).unwrap().len(), 3);
        assert!(independent_set_of_size(&g, &all, 4).is_none());
    }

    #[test]
    fn from_nodes_validation() {
        let bad = Cotree::from_nodes(vec![CotreeNode::Leaf(0), CotreeNode::Leaf(0)], Some(1), 2);
        assert!(bad.is_err());
        let bad = Cotree::from_nodes(vec![CotreeNode::Leaf(0), CotreeNode::Leaf(1)], Some(1), 2);
        assert!(bad.is_err());
    }
}
