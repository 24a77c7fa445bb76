//! Structural checks on certified candidates.
//!
//! The solvers run these when auditing is switched on. Some of them only hold
//! when the input is in the promised graph class; callers decide when to ask.

use crate::graph::Graph;
use crate::instance::Instance;
use crate::set::VertexSet;

fn degree_in(g: &Graph, forest: &VertexSet, v: usize) -> usize {
    g.neighbor_set(v).intersection_len(forest)
}

fn component_of(g: &Graph, alive: &VertexSet, v: usize) -> VertexSet {
    g.components_within(alive)
        .into_iter()
        .find(|c| c.contains(v))
        .unwrap_or_else(|| VertexSet::new(g.n()))
}

/// Deleting `center` splits its component of `F` into exactly one piece per
/// listed neighbour, each piece holding a different one of them.
pub fn center_split(inst: &Instance, forest: &VertexSet, center: usize, neighbours: &[usize]) -> Result<(), String> {
    let g = inst.graph();
    let mut comp = component_of(g, forest, center);
    comp.remove(center);
    let pieces = g.components_within(&comp);
    if pieces.len() != neighbours.len() {
        return Err(format!(
            "center {center}: {} pieces after deletion, expected {}",
            pieces.len(),
            neighbours.len()
        ));
    }
    for piece in &pieces {
        let hits = neighbours.iter().filter(|&&v| piece.contains(v)).count();
        if hits != 1 {
            return Err(format!("center {center}: a piece holds {hits} center neighbours"));
        }
    }
    Ok(())
}

/// A full 3-part solution is its center component, and that component minus
/// the center is a disjoint union of cliques.
pub fn full_three_part(inst: &Instance, forest: &VertexSet, center: usize) -> Result<(), String> {
    let g = inst.graph();
    let comp = component_of(g, forest, center);
    if &comp != forest {
        return Err(format!("full 3-part with center {center} is not connected"));
    }
    let mut rest = comp;
    rest.remove(center);
    for piece in g.components_within(&rest) {
        if !g.is_clique(&piece) {
            return Err(format!("full 3-part with center {center} has a non-clique piece {piece:?}"));
        }
    }
    Ok(())
}

/// The terminals of `F` are exactly `u1` and `u2`, adjacent, each with at
/// most three neighbours in `F`.
pub fn two_terminal_core(inst: &Instance, forest: &VertexSet, u1: usize, u2: usize) -> Result<(), String> {
    let g = inst.graph();
    let in_t = forest.intersection(inst.terminals());
    if in_t.to_vec() != [u1.min(u2), u1.max(u2)] {
        return Err(format!("terminals in F are {:?}, expected {{{u1}, {u2}}}", in_t.to_vec()));
    }
    if !g.is_adjacent(u1, u2) {
        return Err(format!("core terminals {u1} and {u2} are not adjacent"));
    }
    for u in [u1, u2] {
        let d = degree_in(g, forest, u);
        if d > 3 {
            return Err(format!("core terminal {u} has degree {d} in F"));
        }
    }
    Ok(())
}

/// `witness` is an independent set of `s` vertices of `F`, each with at most
/// `2s - 1` neighbours in `F`, so the core of `F` is not complete.
pub fn core_incomplete(inst: &Instance, forest: &VertexSet, s: usize, witness: &[usize]) -> Result<(), String> {
    let g = inst.graph();
    let set = VertexSet::from_iter_with_capacity(g.n(), witness.iter().copied());
    if set.len() != s || !set.is_subset(forest) || !g.is_independent(&set) {
        return Err(format!("core witness {witness:?} is not an independent {s}-subset of F"));
    }
    for &u in witness {
        let d = degree_in(g, forest, u);
        if d + 1 > 2 * s {
            return Err(format!("core witness vertex {u} has degree {d} in F"));
        }
    }
    Ok(())
}

/// Vertices of `F` with at most `2s - 1` neighbours in `F`.
pub fn core_of(g: &Graph, forest: &VertexSet, s: usize) -> VertexSet {
    VertexSet::from_iter_with_capacity(
        g.n(),
        forest.iter().filter(|&v| degree_in(g, forest, v) < 2 * s),
    )
}
