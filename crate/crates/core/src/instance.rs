//! Problem instances and certified solutions.

use std::cmp::Ordering;

use crate::checker;
use crate::error::{Result, SfvsError};
use crate::graph::Graph;
use crate::set::VertexSet;
use crate::weight::{ScaledWeights, Weight};

/// A graph with a terminal set and positive rational vertex weights.
#[derive(Clone, Debug)]
pub struct Instance {
    graph: Graph,
    terminals: VertexSet,
    weights: Vec<Weight>,
    scaled: ScaledWeights,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph && self.terminals == other.terminals && self.weights == other.weights
    }
}

impl Instance {
    pub fn new(graph: Graph, terminals: VertexSet, weights: Vec<Weight>) -> Result<Self> {
        let n = graph.n();
        if let Some(t) = terminals.iter().find(|&t| t >= n) {
            return Err(SfvsError::VertexOutOfRange { vertex: t, n });
        }
        if weights.len() != n {
            return Err(SfvsError::InvalidWeight(format!(
                "expected {n} weights, got {}",
                weights.len()
            )));
        }
        if let Some((v, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_positive()) {
            return Err(SfvsError::InvalidWeight(format!("vertex {v} has weight {w}")));
        }
        let terminals_sized = VertexSet::from_iter_with_capacity(n, terminals.iter());
        let scaled = ScaledWeights::new(&weights);
        Ok(Instance {
            graph,
            terminals: terminals_sized,
            weights,
            scaled,
        })
    }

    pub fn unit(graph: Graph, terminals: VertexSet) -> Result<Self> {
        let n = graph.n();
        Self::new(graph, terminals, vec![Weight::one(); n])
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn terminals(&self) -> &VertexSet {
        &self.terminals
    }

    #[inline]
    pub fn is_terminal(&self, v: usize) -> bool {
        self.terminals.contains(v)
    }

    pub fn weight(&self, v: usize) -> &Weight {
        &self.weights[v]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn scaled(&self) -> &ScaledWeights {
        &self.scaled
    }

    pub fn weight_of(&self, s: &VertexSet) -> Weight {
        self.scaled.unscale(self.scaled.sum_of(s.iter()))
    }

    pub fn total_weight(&self) -> Weight {
        self.weight_of(&self.graph.vertex_set())
    }

    pub fn is_unit_weighted(&self) -> bool {
        self.weights.iter().all(Weight::is_one)
    }

    /// Same graph and terminals, all weights reset to one.
    pub fn with_unit_weights(&self) -> Instance {
        Instance::unit(self.graph.clone(), self.terminals.clone()).expect("valid instance")
    }

    /// Same graph and weights, different terminal set.
    pub fn with_terminals(&self, terminals: VertexSet) -> Result<Instance> {
        Instance::new(self.graph.clone(), terminals, self.weights.clone())
    }
}

/// A vertex set certified to induce a T-forest, with its exact weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    forest: VertexSet,
    weight: Weight,
    certified: bool,
}

impl Solution {
    /// Runs the checker on `forest`; `None` if it contains a T-cycle.
    pub fn certify(inst: &Instance, forest: VertexSet) -> Option<Solution> {
        if !checker::is_t_forest_within(inst.graph(), inst.terminals(), &forest) {
            return None;
        }
        let weight = inst.weight_of(&forest);
        Some(Solution {
            forest,
            weight,
            certified: true,
        })
    }

    pub fn forest(&self) -> &VertexSet {
        &self.forest
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// The deleted set, i.e. the T-feedback vertex set `V \ F`.
    pub fn deleted(&self) -> VertexSet {
        self.forest.complement()
    }

    /// Quality order: heavier is better; on equal weight the lexicographically
    /// smaller vertex list wins. `Greater` means `self` is better.
    pub fn quality_cmp(&self, other: &Solution) -> Ordering {
        self.weight
            .cmp(&other.weight)
            .then_with(|| other.forest.cmp(&self.forest))
    }
}

/// Keeps the better of two optional solutions under [`Solution::quality_cmp`].
pub fn best_of(a: Option<Solution>, b: Option<Solution>) -> Option<Solution> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if b.quality_cmp(&a) == Ordering::Greater {
                Some(b)
            } else {
                Some(a)
            }
        }
    }
}
