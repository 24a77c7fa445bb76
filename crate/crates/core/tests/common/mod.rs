//! Slow reference implementations shared by the integration tests. Nothing
//! here calls into the library's checkers or solvers.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use sfvs_core::{Graph, Instance, VertexSet, Weight};

pub fn masks(g: &Graph) -> Vec<u64> {
    (0..g.n()).map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w)).collect()
}

/// Depth-first search for a simple path from `t` back to itself of length at
/// least three inside `forest`.
pub fn enumerated_cycle_through(adj: &[u64], forest: u64, t: usize) -> bool {
    fn walk(adj: &[u64], forest: u64, t: usize, v: usize, visited: u64, len: usize) -> bool {
        let next = adj[v] & forest;
        if len >= 3 && next & 1 << t != 0 {
            return true;
        }
        let mut rest = next & !visited;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if walk(adj, forest, t, w, visited | 1 << w, len + 1) {
                return true;
            }
        }
        false
    }
    forest & 1 << t != 0 && walk(adj, forest, t, t, 1 << t, 1)
}

/// Cycle-enumeration test: some cycle passes through a terminal.
pub fn enumerated_is_t_forest(adj: &[u64], terminals: u64, forest: u64) -> bool {
    (0..adj.len()).all(|t| terminals & 1 << t == 0 || !enumerated_cycle_through(adj, forest, t))
}

fn reach(adj: &[u64], within: u64, from: usize) -> u64 {
    let mut seen = 1u64 << from;
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = adj[v] & within & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen
}

/// `t` lies on a cycle iff two of its neighbours stay connected without it.
pub fn naive_is_t_forest(adj: &[u64], terminals: u64, forest: u64) -> bool {
    let mut ts = terminals & forest;
    while ts != 0 {
        let t = ts.trailing_zeros() as usize;
        ts &= ts - 1;
        let within = forest & !(1 << t);
        let mut nb = adj[t] & forest;
        while nb != 0 {
            let a = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            if reach(adj, within, a) & nb != 0 {
                return false;
            }
        }
    }
    true
}

/// Same test on an arbitrary graph, for sizes beyond 64 vertices.
pub fn naive_is_t_forest_graph(g: &Graph, terminals: &VertexSet) -> bool {
    for t in terminals.iter() {
        let mut label = vec![usize::MAX; g.n()];
        for &a in g.neighbors(t) {
            if label[a] != usize::MAX {
                return false;
            }
            let mut stack = vec![a];
            label[a] = a;
            while let Some(v) = stack.pop() {
                for &w in g.neighbors(v) {
                    if w != t && label[w] == usize::MAX {
                        label[w] = a;
                        stack.push(w);
                    }
                }
            }
        }
    }
    true
}

/// Weights as integers over a common denominator.
pub fn integer_weights(weights: &[Weight]) -> (Vec<i64>, BigInt) {
    let lcm = weights.iter().fold(BigInt::one(), |l, w| l.lcm(w.denom()));
    let ints = weights
        .iter()
        .map(|w| (w.numer() * (&lcm / w.denom())).to_i64().expect("small weights"))
        .collect();
    (ints, lcm)
}

fn to_weight(total: i64, lcm: &BigInt) -> Weight {
    Weight::from_ratio(num_rational::BigRational::new(total.into(), lcm.clone()))
}

/// Maximum weight of a T-forest subset of `alive` holding `required`.
pub fn naive_max_tforest_within(inst: &Instance, alive: u64, required: u64) -> Option<Weight> {
    let n = inst.n();
    assert!(n <= 24);
    let adj = masks(inst.graph());
    let t = inst.terminals().iter().fold(0u64, |m, v| m | 1 << v);
    let (w, lcm) = integer_weights(inst.weights());
    let free: Vec<usize> = (0..n).filter(|&v| alive & 1 << v != 0 && required & 1 << v == 0).collect();
    let best = (0u64..1 << free.len())
        .into_par_iter()
        .filter_map(|bits| {
            let mut f = required;
            let mut weight: i64 = 0;
            for (i, &v) in free.iter().enumerate() {
                if bits & 1 << i != 0 {
                    f |= 1 << v;
                }
            }
            if !naive_is_t_forest(&adj, t, f) {
                return None;
            }
            let mut rest = f;
            while rest != 0 {
                weight += w[rest.trailing_zeros() as usize];
                rest &= rest - 1;
            }
            Some(weight)
        })
        .max()?;
    Some(to_weight(best, &lcm))
}

pub fn naive_max_tforest(inst: &Instance) -> Weight {
    let all = if inst.n() == 64 { u64::MAX } else { (1u64 << inst.n()) - 1 };
    naive_max_tforest_within(inst, all, 0).expect("the empty set always qualifies")
}

/// Minimum weight of a set of vertices other than `t1`, `t2` separating them.
pub fn naive_min_cut(g: &Graph, t1: usize, t2: usize, weights: &[Weight]) -> Weight {
    let n = g.n();
    let adj = masks(g);
    let (w, lcm) = integer_weights(weights);
    let others: Vec<usize> = (0..n).filter(|&v| v != t1 && v != t2).collect();
    let full = (1u64 << n) - 1;
    let best = (0u64..1 << others.len())
        .filter_map(|bits| {
            let mut cut = 0u64;
            let mut weight = 0;
            for (i, &v) in others.iter().enumerate() {
                if bits & 1 << i != 0 {
                    cut |= 1 << v;
                    weight += w[v];
                }
            }
            (reach(&adj, full & !cut, t1) & 1 << t2 == 0).then_some(weight)
        })
        .min()
        .expect("non-adjacent terminals can always be separated");
    to_weight(best, &lcm)
}

pub fn mask_of(s: &VertexSet) -> u64 {
    s.iter().fold(0u64, |m, v| m | 1 << v)
}
