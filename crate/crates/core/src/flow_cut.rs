//! Minimum-weight vertex cuts between two non-adjacent terminals.
//!
//! Every non-terminal `v` is split into `v_in -> v_out` with capacity `w(v)`;
//! each edge `uv` becomes the two arcs `u_out -> v_in` and `v_out -> u_in` of
//! "infinite" capacity. A max flow from `t1` to `t2` (Dinic) then yields a
//! minimum vertex cut: the split arcs leaving the residual-reachable side.
//! Rational weights are scaled to integers by the common denominator first.

use std::collections::VecDeque;
use std::ops::{AddAssign, SubAssign};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Result, SfvsError};
use crate::graph::Graph;
use crate::set::VertexSet;
use crate::weight::{ScaledWeights, Weight};

#[derive(Clone, Debug)]
pub struct CutInstance {
    pub graph: Graph,
    pub t1: usize,
    pub t2: usize,
    /// One weight per vertex; the terminals' entries are ignored.
    pub weights: Vec<Weight>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutResult {
    pub cut: VertexSet,
    pub weight: Weight,
}

/// Minimum-weight set of non-terminals separating `t1` from `t2`.
pub fn min_weight_vertex_cut(inst: &CutInstance) -> Result<CutResult> {
    let g = &inst.graph;
    for t in [inst.t1, inst.t2] {
        if t >= g.n() {
            return Err(SfvsError::VertexOutOfRange { vertex: t, n: g.n() });
        }
    }
    if inst.weights.len() != g.n() {
        return Err(SfvsError::InvalidWeight(format!(
            "expected {} weights, got {}",
            g.n(),
            inst.weights.len()
        )));
    }
    if let Some(w) = inst.weights.iter().find(|w| !w.is_positive()) {
        return Err(SfvsError::InvalidWeight(format!("non-positive weight {w}")));
    }
    let scaled = ScaledWeights::new(&inst.weights);
    let cut = min_cut_within(g, &g.vertex_set(), inst.t1, inst.t2, &scaled)?;
    let weight = scaled.unscale(scaled.sum_of(cut.iter()));
    Ok(CutResult { cut, weight })
}

/// Minimum vertex cut in `g[alive]` using pre-scaled integer weights.
///
/// Returns `InfeasibleCut` when the terminals coincide or are adjacent; a
/// terminal outside `alive` leaves nothing to separate and yields the empty cut.
pub fn min_cut_within(
    g: &Graph,
    alive: &VertexSet,
    t1: usize,
    t2: usize,
    weights: &ScaledWeights,
) -> Result<VertexSet> {
    if t1 == t2 || g.is_adjacent(t1, t2) {
        return Err(SfvsError::InfeasibleCut { t1, t2 });
    }
    if !alive.contains(t1) || !alive.contains(t2) || !g.connected_within(alive, t1, t2) {
        return Ok(VertexSet::new(g.n()));
    }
    match weights.small() {
        Some(small) => {
            let caps: Vec<i64> = small.to_vec();
            let total: i64 = alive.iter().map(|v| caps[v]).sum();
            Ok(cut_with_capacities(g, alive, t1, t2, &caps, total + 1))
        }
        None => {
            let caps = weights.values();
            let total: BigInt = alive.iter().map(|v| &caps[v]).sum();
            Ok(cut_with_capacities(g, alive, t1, t2, caps, total + 1))
        }
    }
}

fn cut_with_capacities<C: Capacity>(
    g: &Graph,
    alive: &VertexSet,
    t1: usize,
    t2: usize,
    caps: &[C],
    infinity: C,
) -> VertexSet {
    let n = g.n();
    let mut net = Dinic::new(2 * n);
    for v in alive.iter() {
        let c = if v == t1 || v == t2 { infinity.clone() } else { caps[v].clone() };
        net.add_arc(2 * v, 2 * v + 1, c);
        for &w in g.neighbors(v) {
            if alive.contains(w) {
                net.add_arc(2 * v + 1, 2 * w, infinity.clone());
            }
        }
    }
    let source = 2 * t1 + 1;
    let sink = 2 * t2;
    net.max_flow(source, sink);
    let reach = net.residual_reachable(source);
    VertexSet::from_iter_with_capacity(
        n,
        alive
            .iter()
            .filter(|&v| v != t1 && v != t2 && reach[2 * v] && !reach[2 * v + 1]),
    )
}

pub(crate) trait Capacity:
    Clone + Ord + Zero + for<'a> AddAssign<&'a Self> + for<'a> SubAssign<&'a Self>
{
}

impl<T> Capacity for T where
    T: Clone + Ord + Zero + for<'a> AddAssign<&'a T> + for<'a> SubAssign<&'a T>
{
}

struct Arc<C> {
    to: usize,
    cap: C,
}

/// Dinic's blocking-flow max-flow over a generic integer capacity.
struct Dinic<C> {
    arcs: Vec<Arc<C>>,
    out: Vec<Vec<usize>>,
    level: Vec<u32>,
    cursor: Vec<usize>,
}

impl<C: Capacity> Dinic<C> {
    fn new(nodes: usize) -> Self {
        Dinic {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
            level: vec![0; nodes],
            cursor: vec![0; nodes],
        }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: C) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: C::zero() });
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(u32::MAX);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.out[v] {
                let arc = &self.arcs[a];
                if !arc.cap.is_zero() && self.level[arc.to] == u32::MAX {
                    self.level[arc.to] = self.level[v] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[t] != u32::MAX
    }

    fn dfs(&mut self, v: usize, t: usize, limit: &C) -> C {
        if v == t {
            return limit.clone();
        }
        while self.cursor[v] < self.out[v].len() {
            let a = self.out[v][self.cursor[v]];
            let to = self.arcs[a].to;
            if !self.arcs[a].cap.is_zero() && self.level[to] == self.level[v] + 1 {
                let room = if self.arcs[a].cap < *limit {
                    self.arcs[a].cap.clone()
                } else {
                    limit.clone()
                };
                let pushed = self.dfs(to, t, &room);
                if !pushed.is_zero() {
                    self.arcs[a].cap -= &pushed;
                    self.arcs[a ^ 1].cap += &pushed;
                    return pushed;
                }
            }
            self.cursor[v] += 1;
        }
        C::zero()
    }

    fn max_flow(&mut self, s: usize, t: usize) -> C {
        let mut flow = C::zero();
        let mut unbounded = C::zero();
        for arc in &self.arcs {
            unbounded += &arc.cap;
        }
        while self.bfs(s, t) {
            self.cursor.fill(0);
            loop {
                let pushed = self.dfs(s, t, &unbounded);
                if pushed.is_zero() {
                    break;
                }
                flow += &pushed;
            }
        }
        flow
    }

    fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &a in &self.out[v] {
                let arc = &self.arcs[a];
                if !arc.cap.is_zero() && !seen[arc.to] {
                    seen[arc.to] = true;
                    stack.push(arc.to);
                }
            }
        }
        seen
    }
}
