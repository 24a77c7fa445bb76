//! Maximum-weight T-forests with at most one terminal, of degree at most 1,
//! exactly 2 or exactly 3 (the ≤1-part, 2-part and 3-part solutions).
//!
//! All searches run inside a set of live vertices, so callers can pass a
//! reduced instance without copying the graph. Terminals outside the live
//! set are simply absent. Every candidate goes through the checker.

use rayon::prelude::*;

use crate::audit;
use crate::flow_cut::min_cut_within;
use crate::graph::Graph;
use crate::instance::{Instance, Solution};
use crate::set::VertexSet;
use crate::stats::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartKind {
    Le1,
    TwoPart,
    ThreePart,
}

/// The shape of a solution with at most one terminal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartSolutionKind {
    pub kind: PartKind,
    pub center: Option<usize>,
    pub center_neighbours: Vec<usize>,
}

impl PartSolutionKind {
    /// Classifies a T-forest; `None` if it holds two terminals or its
    /// terminal has more than three neighbours in it.
    pub fn classify(inst: &Instance, forest: &VertexSet) -> Option<PartSolutionKind> {
        let in_t = forest.intersection(inst.terminals());
        match in_t.len() {
            0 => Some(PartSolutionKind { kind: PartKind::Le1, center: None, center_neighbours: Vec::new() }),
            1 => {
                let u = in_t.first().unwrap();
                let nb = inst.graph().neighbor_set(u).intersection(forest).to_vec();
                let kind = match nb.len() {
                    0 | 1 => PartKind::Le1,
                    2 => PartKind::TwoPart,
                    3 => PartKind::ThreePart,
                    _ => return None,
                };
                Some(PartSolutionKind { kind, center: Some(u), center_neighbours: nb })
            }
            _ => None,
        }
    }
}

/// Best ≤1-part solution; with a fixed center only solutions containing it.
pub fn best_le1_part(inst: &Instance, fixed_center: Option<usize>) -> Option<Solution> {
    le1_part_within(inst, &inst.graph().vertex_set(), fixed_center, false).best
}

/// Best 2-part solution, optionally with a fixed center.
pub fn best_2part(inst: &Instance, fixed_center: Option<usize>) -> Option<Solution> {
    two_part_within(inst, &inst.graph().vertex_set(), fixed_center, false).best
}

/// Best 3-part solution. Optimal on (2P1+P4)-free graphs, valid on all.
pub fn best_3part(inst: &Instance) -> Option<Solution> {
    three_part_within(inst, &inst.graph().vertex_set(), false).best
}

fn centers(inst: &Instance, alive: &VertexSet, fixed: Option<usize>) -> Vec<usize> {
    match fixed {
        Some(u) if alive.contains(u) && inst.is_terminal(u) => vec![u],
        Some(_) => Vec::new(),
        None => alive.intersection(inst.terminals()).to_vec(),
    }
}

/// Live non-terminal neighbours of `u`, ascending.
fn free_neighbours(inst: &Instance, alive: &VertexSet, u: usize) -> Vec<usize> {
    let mut nb = inst.graph().neighbor_set(u).intersection(alive);
    nb.difference_with(inst.terminals());
    nb.to_vec()
}

pub fn le1_part_within(inst: &Instance, alive: &VertexSet, fixed_center: Option<usize>, _audit: bool) -> Outcome {
    const BRANCH: &str = "le1";
    let g = inst.graph();
    let mut out = Outcome::new();
    let free = alive.difference(inst.terminals());
    if fixed_center.is_none() {
        out.offer(BRANCH, inst, free.clone());
    }
    let per_center = centers(inst, alive, fixed_center).into_par_iter().map(|u| {
        let mut out = Outcome::new();
        let mut base = free.difference(g.neighbor_set(u));
        base.insert(u);
        out.offer(BRANCH, inst, base.clone());
        for v in free_neighbours(inst, alive, u) {
            let mut f = base.clone();
            f.insert(v);
            out.offer(BRANCH, inst, f);
        }
        out
    });
    out.merge(per_center.reduce(Outcome::new, Outcome::merge))
}

/// Live vertices minus the other terminals and the neighbours of `u` outside `keep`.
fn restrict_around(inst: &Instance, alive: &VertexSet, u: usize, keep: &[usize]) -> VertexSet {
    let g = inst.graph();
    let mut live = alive.difference(inst.terminals());
    live.difference_with(g.neighbor_set(u));
    for &v in keep {
        live.insert(v);
    }
    live.insert(u);
    live
}

/// `G[live] - cut` where the cut separates `a` from `b` in `G[live - u]`.
fn cut_candidate(inst: &Instance, live: &VertexSet, skip: &[usize], a: usize, b: usize) -> Option<VertexSet> {
    let mut inner = live.clone();
    for &s in skip {
        inner.remove(s);
    }
    let cut = min_cut_within(inst.graph(), &inner, a, b, inst.scaled()).ok()?;
    Some(live.difference(&cut))
}

pub fn two_part_within(inst: &Instance, alive: &VertexSet, fixed_center: Option<usize>, audit: bool) -> Outcome {
    const BRANCH: &str = "two_part";
    let g = inst.graph();
    centers(inst, alive, fixed_center)
        .into_par_iter()
        .map(|u| {
            let mut out = Outcome::new();
            let nb = free_neighbours(inst, alive, u);
            for (i, &v1) in nb.iter().enumerate() {
                for &v2 in &nb[i + 1..] {
                    if g.is_adjacent(v1, v2) {
                        out.discard(BRANCH);
                        continue;
                    }
                    let live = restrict_around(inst, alive, u, &[v1, v2]);
                    let Some(f) = cut_candidate(inst, &live, &[u], v1, v2) else {
                        out.discard(BRANCH);
                        continue;
                    };
                    if let Some(sol) = out.offer(BRANCH, inst, f) {
                        if audit {
                            out.stats.audit.record(audit::center_split(inst, sol.forest(), u, &[v1, v2]));
                        }
                    }
                }
            }
            out
        })
        .reduce(Outcome::new, Outcome::merge)
}

pub fn three_part_within(inst: &Instance, alive: &VertexSet, audit: bool) -> Outcome {
    let g = inst.graph();
    centers(inst, alive, None)
        .into_par_iter()
        .map(|u| {
            let mut out = Outcome::new();
            let nb = free_neighbours(inst, alive, u);
            for (i, &v1) in nb.iter().enumerate() {
                for (j, &v2) in nb.iter().enumerate().skip(i + 1) {
                    if g.is_adjacent(v1, v2) {
                        continue;
                    }
                    for &v3 in &nb[j + 1..] {
                        if g.is_adjacent(v1, v3) || g.is_adjacent(v2, v3) {
                            out.discard("three_part");
                            continue;
                        }
                        let vs = [v1, v2, v3];
                        let live = restrict_around(inst, alive, u, &vs);
                        non_full(inst, &live, u, vs, audit, &mut out);
                        full(inst, &live, u, vs, audit, &mut out);
                    }
                }
            }
            out
        })
        .reduce(Outcome::new, Outcome::merge)
}

/// Some `v_i` is a leaf of the solution: drop it with its neighbourhood and
/// separate the other two.
fn non_full(inst: &Instance, live: &VertexSet, u: usize, vs: [usize; 3], audit: bool, out: &mut Outcome) {
    const BRANCH: &str = "three_part_non_full";
    let g = inst.graph();
    for i in 0..3 {
        let (a, b) = match i {
            0 => (vs[1], vs[2]),
            1 => (vs[0], vs[2]),
            _ => (vs[0], vs[1]),
        };
        let mut rest = live.difference(g.neighbor_set(vs[i]));
        rest.remove(u);
        rest.remove(vs[i]);
        // `a` and `b` are not neighbours of `vs[i]`, so they survive
        let Some(mut f) = cut_candidate(inst, &rest, &[], a, b) else {
            out.discard(BRANCH);
            continue;
        };
        f.insert(u);
        f.insert(vs[i]);
        if let Some(sol) = out.offer(BRANCH, inst, f) {
            if audit {
                out.stats.audit.record(audit::center_split(inst, sol.forest(), u, &vs));
            }
        }
    }
}

/// Every `v_i` has a neighbour `x_i` in its piece; the pieces are cliques and
/// the solution is the center component.
fn full(inst: &Instance, live: &VertexSet, u: usize, vs: [usize; 3], audit: bool, out: &mut Outcome) {
    const BRANCH: &str = "three_part_full";
    let g = inst.graph();
    let n = g.n();
    let vset = VertexSet::from_iter_with_capacity(n, vs);
    // G'': keep vertices seeing exactly one of the v_i
    let mut core = VertexSet::from_iter_with_capacity(n, [u, vs[0], vs[1], vs[2]]);
    for w in live.iter() {
        if !core.contains(w) && g.neighbor_set(w).intersection_len(&vset) == 1 {
            core.insert(w);
        }
    }
    let side = |i: usize| -> Vec<usize> {
        let mut s = g.neighbor_set(vs[i]).intersection(&core);
        s.remove(u);
        s.to_vec()
    };
    let sides = [side(0), side(1), side(2)];
    for &x1 in &sides[0] {
        for &x2 in &sides[1] {
            for &x3 in &sides[2] {
                let xs = [x1, x2, x3];
                if g.is_adjacent(x1, x2) || g.is_adjacent(x1, x3) || g.is_adjacent(x2, x3) {
                    out.discard(BRANCH);
                    continue;
                }
                let f = prune_pieces(g, &core, &sides, xs);
                if let Some(sol) = out.offer(BRANCH, inst, f) {
                    if audit {
                        out.stats.audit.record(audit::center_split(inst, sol.forest(), u, &vs));
                        out.stats.audit.record(audit::full_three_part(inst, sol.forest(), u));
                    }
                }
            }
        }
    }
}

/// Drops each `v_i`-neighbour that sees a foreign `x_j` or misses `x_i`.
fn prune_pieces(g: &Graph, core: &VertexSet, sides: &[Vec<usize>; 3], xs: [usize; 3]) -> VertexSet {
    let mut f = core.clone();
    for i in 0..3 {
        for &w in &sides[i] {
            if w == xs[i] {
                continue;
            }
            let foreign = (0..3).any(|j| j != i && g.is_adjacent(w, xs[j]));
            if foreign || !g.is_adjacent(w, xs[i]) {
                f.remove(w);
            }
        }
    }
    f
}
