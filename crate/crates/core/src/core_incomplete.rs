//! Maximum-weight core-incomplete solutions.
//!
//! The core of a T-forest `F` (for a parameter `s`) is the set of vertices
//! with at most `2s - 1` neighbours in `F`. `F` is core-incomplete when its
//! core holds an independent set of size `s`.
//!
//! We guess such an independent set `U` and `Z = N(U) ∩ F`, delete the rest
//! of `N(U)`, and solve the reduced instance with `U ∪ Z` forced into the
//! solution. What remains outside `U ∪ Z` is `G - N[U]`, a cograph whenever
//! `G` is (sP1+P4)-free, so `U ∪ Z` is a small modulator.

use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;

use crate::audit;
use crate::config::SolverConfig;
use crate::cotree::{build_cotree_within, Cotree, InducedP4};
use crate::error::Result;
use crate::graph::Graph;
use crate::instance::Instance;
use crate::reduced_solver::{max_tforest_with_required, ModulatorDecomposition};
use crate::set::VertexSet;
use crate::stats::Outcome;

const BRANCH: &str = "core_incomplete";

/// One guess: the independent set `U` and the kept part `Z` of `N(U)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreGuess {
    pub u: Vec<usize>,
    pub z: Vec<usize>,
}

/// Independent sets of exactly `k` vertices, in lexicographic order.
pub fn independent_sets(g: &Graph, k: usize) -> Vec<Vec<usize>> {
    fn rec(g: &Graph, start: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..g.n() {
            if cur.iter().all(|&c| !g.is_adjacent(c, v)) {
                cur.push(v);
                rec(g, v + 1, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(g, 0, k, &mut Vec::new(), &mut out);
    out
}

/// Subsets `Z` of `N(U)` meeting each `N(u)` in at most `limit` vertices.
fn kept_neighbourhoods(g: &Graph, u: &[usize], nu: &[usize], limit: usize) -> Vec<Vec<usize>> {
    #[allow(clippy::too_many_arguments)]
    fn rec(g: &Graph, u: &[usize], nu: &[usize], i: usize, limit: usize, load: &mut [usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == nu.len() {
            out.push(cur.clone());
            return;
        }
        rec(g, u, nu, i + 1, limit, load, cur, out);
        let v = nu[i];
        let hit: Vec<usize> = (0..u.len()).filter(|&j| g.is_adjacent(u[j], v)).collect();
        if hit.iter().all(|&j| load[j] < limit) {
            for &j in &hit {
                load[j] += 1;
            }
            cur.push(v);
            rec(g, u, nu, i + 1, limit, load, cur, out);
            cur.pop();
            for &j in &hit {
                load[j] -= 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(g, u, nu, 0, limit, &mut vec![0; u.len()], &mut Vec::new(), &mut out);
    out
}

/// Best core-incomplete solution for parameter `s` (raised to 2 if smaller).
pub fn best_core_incomplete(inst: &Instance, s: usize) -> Result<Option<crate::Solution>> {
    Ok(core_incomplete_search(inst, s, &SolverConfig::default())?.best)
}

struct Task {
    guess: CoreGuess,
    alive: VertexSet,
    modulator: VertexSet,
    cotree: Arc<Cotree>,
}

pub fn core_incomplete_search(inst: &Instance, s: usize, cfg: &SolverConfig) -> Result<Outcome> {
    let s = s.max(2);
    let g = inst.graph();
    let n = g.n();
    let mut out = Outcome::new();
    let mut tasks = Vec::new();
    let mut seen: HashSet<(VertexSet, VertexSet)> = HashSet::new();
    for u in independent_sets(g, s) {
        let uset = VertexSet::from_iter_with_capacity(n, u.iter().copied());
        let nu = g.neighborhood_of(&uset);
        let rest = nu.union(&uset).complement();
        let zs = kept_neighbourhoods(g, &u, &nu.to_vec(), 2 * s - 1);
        let cotree = match build_cotree_within(g, &rest) {
            Ok(t) => Arc::new(t),
            Err(InducedP4(w)) => {
                log::warn!("G - N[{u:?}] contains the induced P4 {w:?}; input is outside the class");
                for _ in &zs {
                    out.discard(BRANCH);
                }
                continue;
            }
        };
        for z in zs {
            let zset = VertexSet::from_iter_with_capacity(n, z.iter().copied());
            let deleted = nu.difference(&zset);
            let modulator = uset.union(&zset);
            if !seen.insert((deleted.clone(), modulator.clone())) {
                let c = out.stats.counter(BRANCH);
                c.tried += 1;
                c.reused += 1;
                continue;
            }
            tasks.push(Task {
                guess: CoreGuess { u: u.clone(), z },
                alive: deleted.complement(),
                modulator,
                cotree: cotree.clone(),
            });
        }
    }
    let solved: Result<Outcome> = tasks
        .into_par_iter()
        .map(|task| {
            let mut local = Outcome::new();
            let dec = ModulatorDecomposition::from_parts(task.alive, task.modulator.clone(), (*task.cotree).clone())?;
            match max_tforest_with_required(&dec, inst, &task.modulator, &cfg.reduced_solver)? {
                None => local.discard(BRANCH),
                Some(sol) => {
                    let c = local.stats.counter(BRANCH);
                    c.tried += 1;
                    c.certified += 1;
                    if cfg.audit {
                        local
                            .stats
                            .audit
                            .record(audit::core_incomplete(inst, sol.forest(), s, &task.guess.u));
                    }
                    local.accept(Some(sol));
                }
            }
            Ok(local)
        })
        .try_reduce(Outcome::new, |a, b| Ok(a.merge(b)));
    Ok(out.merge(solved?))
}
