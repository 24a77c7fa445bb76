//! Per-branch counters and the outcome type shared by the guess loops.
//!
//! Everything here merges associatively and commutatively, so parallel
//! reductions produce the same result for any thread count.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::instance::{best_of, Instance, Solution};
use crate::set::VertexSet;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchCounter {
    pub tried: u64,
    /// Guesses rejected by a guard, an infeasible cut or the checker.
    pub discarded: u64,
    pub certified: u64,
    /// Guesses whose reduced instance had already been solved.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub reused: u64,
}

fn is_zero(v: &u64) -> bool {
    *v == 0
}

impl BranchCounter {
    fn absorb(&mut self, o: &BranchCounter) {
        self.tried += o.tried;
        self.discarded += o.discarded;
        self.certified += o.certified;
        self.reused += o.reused;
    }
}

/// How many audited candidates were inspected and how many broke a
/// structural property. Keeps the smallest few messages.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub checked: u64,
    pub violations: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub examples: Vec<String>,
}

const MAX_EXAMPLES: usize = 5;

impl AuditSummary {
    pub fn record(&mut self, result: std::result::Result<(), String>) {
        self.checked += 1;
        if let Err(msg) = result {
            self.violations += 1;
            self.examples.push(msg);
            self.trim();
        }
    }

    fn trim(&mut self) {
        self.examples.sort();
        self.examples.dedup();
        self.examples.truncate(MAX_EXAMPLES);
    }

    fn absorb(&mut self, o: &AuditSummary) {
        self.checked += o.checked;
        self.violations += o.violations;
        self.examples.extend(o.examples.iter().cloned());
        self.trim();
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchStats {
    pub branches: BTreeMap<String, BranchCounter>,
    pub audit: AuditSummary,
}

impl BranchStats {
    pub fn counter(&mut self, branch: &str) -> &mut BranchCounter {
        self.branches.entry(branch.to_string()).or_default()
    }

    pub fn absorb(&mut self, o: &BranchStats) {
        for (name, c) in &o.branches {
            self.counter(name).absorb(c);
        }
        self.audit.absorb(&o.audit);
    }

    pub fn total(&self) -> BranchCounter {
        let mut t = BranchCounter::default();
        for c in self.branches.values() {
            t.absorb(c);
        }
        t
    }
}

/// Best certified candidate of a search plus its counters.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub best: Option<Solution>,
    pub stats: BranchStats,
}

impl Outcome {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn merge(mut self, o: Outcome) -> Outcome {
        self.best = best_of(self.best, o.best);
        self.stats.absorb(&o.stats);
        self
    }

    /// A guess that failed before producing a candidate.
    pub fn discard(&mut self, branch: &str) {
        let c = self.stats.counter(branch);
        c.tried += 1;
        c.discarded += 1;
    }

    /// Certifies `forest` and keeps it if it beats the current best.
    /// Returns the certified solution for auditing.
    pub fn offer(&mut self, branch: &str, inst: &Instance, forest: VertexSet) -> Option<Solution> {
        let sol = Solution::certify(inst, forest);
        let c = self.stats.counter(branch);
        c.tried += 1;
        match &sol {
            Some(_) => c.certified += 1,
            None => c.discarded += 1,
        }
        self.best = best_of(self.best.take(), sol.clone());
        sol
    }

    /// Adds an already certified solution from a nested search.
    pub fn accept(&mut self, sol: Option<Solution>) {
        self.best = best_of(self.best.take(), sol);
    }
}
