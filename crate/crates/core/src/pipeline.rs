//! End-to-end solvers: weighted on (2P1+P4)-free graphs, unweighted on
//! (sP1+P4)-free graphs.
//!
//! Each branch yields certified candidates only, so outside the promised
//! class the answer is still a valid T-forest, just possibly not optimal.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::audit;
use crate::config::SolverConfig;
use crate::core_incomplete::core_incomplete_search;
use crate::cotree::find_induced_sp1_p4;
use crate::error::{Result, SfvsError};
use crate::flow_cut::min_cut_within;
use crate::instance::{Instance, Solution};
use crate::part_solvers::{le1_part_within, three_part_within, two_part_within};
use crate::set::VertexSet;
use crate::stats::{BranchStats, Outcome};
use crate::weight::Weight;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ClassCheck {
    Skipped,
    Satisfied { s: usize },
    /// `witness` lists the `s` isolated vertices, then the path.
    Violated { s: usize, witness: Vec<usize> },
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub best: Solution,
    pub branch_stats: BranchStats,
    pub class_check: ClassCheck,
    /// Whether some T-feedback vertex set weighs at most the threshold.
    pub decision: Option<bool>,
}

fn class_check(inst: &Instance, s: usize, cfg: &SolverConfig) -> ClassCheck {
    if !cfg.should_validate(inst.n()) {
        return ClassCheck::Skipped;
    }
    match find_induced_sp1_p4(inst.graph(), s) {
        None => ClassCheck::Satisfied { s },
        Some(w) => {
            log::warn!("input contains an induced {s}P1+P4 on {:?}; the result may be sub-optimal", w.vertices);
            ClassCheck::Violated { s, witness: w.vertices }
        }
    }
}

const WEIGHTED_BRANCHES: [&str; 7] = [
    "core_incomplete",
    "le1",
    "two_part",
    "three_part_non_full",
    "three_part_full",
    "pendant_terminal",
    "both_degree_two",
];
const UNWEIGHTED_BRANCHES: [&str; 2] = ["core_incomplete", "core_complete"];

fn finish(
    inst: &Instance,
    mut outcome: Outcome,
    branches: &[&str],
    class_check: ClassCheck,
    threshold: Option<&Weight>,
) -> SolveReport {
    // every branch shows up in the stats, even when it had nothing to try
    for b in branches {
        outcome.stats.counter(b);
    }
    let best = outcome.best.unwrap_or_else(|| {
        Solution::certify(inst, VertexSet::new(inst.n())).expect("the empty set is a T-forest")
    });
    let decision = threshold.map(|k| &inst.total_weight() - best.weight() <= *k);
    SolveReport { best, branch_stats: outcome.stats, class_check, decision }
}

/// Maximum-weight T-forest, optimal when the graph is (2P1+P4)-free.
pub fn solve_weighted_2p1p4(inst: &Instance, cfg: &SolverConfig, threshold: Option<&Weight>) -> Result<SolveReport> {
    let check = class_check(inst, 2, cfg);
    // audits of class-dependent properties only make sense inside the class
    let audit = cfg.audit && !matches!(check, ClassCheck::Violated { .. });
    let all = inst.graph().vertex_set();

    let (incomplete, complete) = rayon::join(
        || core_incomplete_search(inst, 2, cfg),
        || {
            let parts = le1_part_within(inst, &all, None, audit)
                .merge(two_part_within(inst, &all, None, audit))
                .merge(three_part_within(inst, &all, audit));
            parts.merge(two_terminal_branches(inst, audit))
        },
    );
    Ok(finish(inst, incomplete?.merge(complete), &WEIGHTED_BRANCHES, check, threshold))
}

/// Core-complete solutions holding two adjacent terminals `u1`, `u2`.
fn two_terminal_branches(inst: &Instance, audit: bool) -> Outcome {
    let g = inst.graph();
    let pairs: Vec<(usize, usize)> = g
        .edges()
        .filter(|&(a, b)| inst.is_terminal(a) && inst.is_terminal(b))
        .collect();
    pairs
        .into_par_iter()
        .map(|(u1, u2)| {
            let mut out = Outcome::new();
            for (leaf, center) in [(u1, u2), (u2, u1)] {
                pendant_terminal(inst, leaf, center, audit, &mut out);
            }
            both_degree_two(inst, u1, u2, audit, &mut out);
            out
        })
        .reduce(Outcome::new, Outcome::merge)
}

/// `leaf` has degree one in `F`: solve around `center` without it, then
/// hang it back on.
fn pendant_terminal(inst: &Instance, leaf: usize, center: usize, audit: bool, out: &mut Outcome) {
    const BRANCH: &str = "pendant_terminal";
    let g = inst.graph();
    let mut alive = g.vertex_set().difference(g.neighbor_set(leaf));
    alive.remove(leaf);
    alive.insert(center);
    let inner = le1_part_within(inst, &alive, Some(center), false).merge(two_part_within(inst, &alive, Some(center), false));
    let Some(sol) = inner.best else {
        out.discard(BRANCH);
        return;
    };
    let mut f = sol.forest().clone();
    f.insert(leaf);
    if let Some(sol) = out.offer(BRANCH, inst, f) {
        if audit {
            out.stats.audit.record(audit::two_terminal_core(inst, sol.forest(), leaf, center));
        }
    }
}

/// Both terminals have exactly one further neighbour, `v1` and `v2`; the
/// rest is a vertex cut between those two.
fn both_degree_two(inst: &Instance, u1: usize, u2: usize, audit: bool, out: &mut Outcome) {
    const BRANCH: &str = "both_degree_two";
    let g = inst.graph();
    let free = |u: usize| g.neighbor_set(u).difference(inst.terminals()).to_vec();
    for v1 in free(u1) {
        for v2 in free(u2) {
            if v1 == v2 || g.is_adjacent(v1, v2) || g.is_adjacent(v1, u2) || g.is_adjacent(v2, u1) {
                out.discard(BRANCH);
                continue;
            }
            let mut live = g.vertex_set().difference(inst.terminals());
            live.difference_with(g.neighbor_set(u1));
            live.difference_with(g.neighbor_set(u2));
            live.insert(v1);
            live.insert(v2);
            let Ok(cut) = min_cut_within(g, &live, v1, v2, inst.scaled()) else {
                out.discard(BRANCH);
                continue;
            };
            let mut f = live.difference(&cut);
            f.insert(u1);
            f.insert(u2);
            if let Some(sol) = out.offer(BRANCH, inst, f) {
                if audit {
                    out.stats.audit.record(audit::two_terminal_core(inst, sol.forest(), u1, u2));
                }
            }
        }
    }
}

/// Maximum-size T-forest, optimal when the graph is (sP1+P4)-free. Weights
/// must all be one.
pub fn solve_unweighted_sp1p4(
    inst: &Instance,
    s: usize,
    cfg: &SolverConfig,
    threshold: Option<&Weight>,
) -> Result<SolveReport> {
    if !inst.is_unit_weighted() {
        return Err(SfvsError::NonUnitWeights);
    }
    let s = s.max(2);
    let check = class_check(inst, s, cfg);
    let (incomplete, complete) = rayon::join(|| core_incomplete_search(inst, s, cfg), || core_complete_unweighted(inst, s));
    Ok(finish(inst, incomplete?.merge(complete), &UNWEIGHTED_BRANCHES, check, threshold))
}

/// `F = W ∪ ((V \ T) \ X)` with `W ⊆ T`, `|W| ≤ 2s - 2` and `|X| ≤ |W|`.
fn core_complete_unweighted(inst: &Instance, s: usize) -> Outcome {
    const BRANCH: &str = "core_complete";
    let g = inst.graph();
    let terminals = inst.terminals().to_vec();
    let others = g.vertex_set().difference(inst.terminals());
    let other_list = others.to_vec();
    let ws = subsets_up_to(&terminals, 2 * s - 2);
    ws.into_par_iter()
        .map(|w| {
            let mut out = Outcome::new();
            let wset = VertexSet::from_iter_with_capacity(g.n(), w.iter().copied());
            if !crate::checker::is_t_forest_within(g, inst.terminals(), &wset) {
                out.discard(BRANCH);
                return out;
            }
            for x in subsets_up_to(&other_list, w.len()) {
                let mut f = others.union(&wset);
                for v in x {
                    f.remove(v);
                }
                out.offer(BRANCH, inst, f);
            }
            out
        })
        .reduce(Outcome::new, Outcome::merge)
}

/// All subsets of `items` with at most `k` elements, smallest first.
fn subsets_up_to(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], start: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if cur.len() == k {
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, i + 1, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, 0, k, &mut Vec::new(), &mut out);
    out
}
