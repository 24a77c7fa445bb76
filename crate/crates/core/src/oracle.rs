//! Brute-force ground truth and seeded instance generators.

use std::cmp::Ordering;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checker::is_t_forest_mask;
use crate::cotree::{find_induced_sp1_p4, Cotree, CotreeNode};
use crate::error::{Result, SfvsError};
use crate::graph::Graph;
use crate::instance::{Instance, Solution};
use crate::set::VertexSet;
use crate::weight::Weight;

/// Largest vertex count the subset enumeration accepts.
pub const BRUTE_FORCE_CAP: usize = 26;

/// Maximum-weight T-forest by enumerating all `2^n` vertex subsets.
pub fn brute_force_max_tforest(inst: &Instance) -> Result<Solution> {
    let all = inst.graph().vertex_set();
    let empty = VertexSet::new(inst.n());
    Ok(search(inst, &all, &empty, None)?.expect("the empty set is a T-forest"))
}

/// Best T-forest `F` with `required ⊆ F ⊆ alive`; `None` if `required` itself
/// is not a T-forest.
pub fn brute_force_within(inst: &Instance, alive: &VertexSet, required: &VertexSet) -> Result<Option<Solution>> {
    search(inst, alive, required, None)
}

/// Best T-forest among those accepted by `filter`.
pub fn brute_force_where<P>(inst: &Instance, filter: P) -> Result<Option<Solution>>
where
    P: Fn(&VertexSet) -> bool + Sync,
{
    let all = inst.graph().vertex_set();
    let empty = VertexSet::new(inst.n());
    search(inst, &all, &empty, Some(&filter))
}

type Filter<'a> = Option<&'a (dyn Fn(&VertexSet) -> bool + Sync)>;

#[derive(Clone)]
struct Best {
    weight: BigInt,
    mask: u64,
}

/// Equal weights never occur between a set and its proper subset, so the
/// lexicographic order reduces to: the set holding the smallest differing
/// vertex wins.
fn better(a: &Best, b: &Best) -> bool {
    match a.weight.cmp(&b.weight) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => {
            let diff = a.mask ^ b.mask;
            diff != 0 && a.mask & diff & diff.wrapping_neg() != 0
        }
    }
}

fn search(inst: &Instance, alive: &VertexSet, required: &VertexSet, filter: Filter<'_>) -> Result<Option<Solution>> {
    let k = alive.len();
    if k > BRUTE_FORCE_CAP {
        return Err(SfvsError::Capacity { what: "brute-force vertex count", limit: BRUTE_FORCE_CAP, actual: k });
    }
    let ids: Vec<usize> = alive.iter().collect();
    let mut local = vec![usize::MAX; inst.n()];
    for (i, &v) in ids.iter().enumerate() {
        local[v] = i;
    }
    let g = inst.graph();
    let adj: Vec<u64> = ids
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter(|&&w| local[w] != usize::MAX)
                .fold(0u64, |m, &w| m | 1 << local[w])
        })
        .collect();
    let to_mask = |s: &VertexSet| s.iter().filter(|&v| local[v] != usize::MAX).fold(0u64, |m, v| m | 1 << local[v]);
    let terminals = to_mask(inst.terminals());
    if !required.is_subset(alive) {
        return Ok(None);
    }
    let req = to_mask(required);
    let free: Vec<usize> = (0..k).filter(|&i| req & 1 << i == 0).collect();
    let weights: Vec<BigInt> = ids.iter().map(|&v| inst.scaled().get(v).clone()).collect();
    let small: Option<Vec<i64>> = inst.scaled().small().map(|s| ids.iter().map(|&v| s[v]).collect());
    let to_set = |mask: u64| {
        VertexSet::from_iter_with_capacity(inst.n(), (0..k).filter(|&i| mask & 1 << i != 0).map(|i| ids[i]))
    };
    let weigh = |mask: u64| -> BigInt {
        let mut rest = mask;
        match &small {
            Some(sw) => {
                let mut total = 0i64;
                while rest != 0 {
                    total += sw[rest.trailing_zeros() as usize];
                    rest &= rest - 1;
                }
                BigInt::from(total)
            }
            None => {
                let mut total = BigInt::from(0);
                while rest != 0 {
                    total += &weights[rest.trailing_zeros() as usize];
                    rest &= rest - 1;
                }
                total
            }
        }
    };

    // The top free bits are split across tasks, the rest enumerated inline.
    let high_bits = free.len().min(6);
    let (low, high) = free.split_at(free.len() - high_bits);
    let low_mask = low.iter().fold(0u64, |m, &i| m | 1 << i);
    let best = (0u64..1 << high_bits)
        .into_par_iter()
        .filter_map(|h| {
            let base = high
                .iter()
                .enumerate()
                .filter(|(j, _)| h & 1 << j != 0)
                .fold(req, |m, (_, &i)| m | 1 << i);
            let mut best: Option<Best> = None;
            let mut sub = 0u64;
            loop {
                let mask = base | sub;
                if is_t_forest_mask(&adj, terminals, mask) {
                    let cand = Best { weight: weigh(mask), mask };
                    if best.as_ref().is_none_or(|b| better(&cand, b)) && filter.is_none_or(|f| f(&to_set(mask))) {
                        best = Some(cand);
                    }
                }
                sub = sub.wrapping_sub(low_mask) & low_mask;
                if sub == 0 {
                    break;
                }
            }
            best
        })
        .reduce_with(|a, b| if better(&b, &a) { b } else { a });
    Ok(best.map(|b| Solution::certify(inst, to_set(b.mask)).expect("mask checker and checker agree")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    RandomGnp,
    RandomCograph,
    CographPlusModulator,
    Sp1p4FreeFiltered,
    SplitLike,
    PaperFig1Like,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::RandomGnp,
        Family::RandomCograph,
        Family::CographPlusModulator,
        Family::Sp1p4FreeFiltered,
        Family::SplitLike,
        Family::PaperFig1Like,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::RandomGnp => "random_gnp",
            Family::RandomCograph => "random_cograph",
            Family::CographPlusModulator => "cograph_plus_modulator",
            Family::Sp1p4FreeFiltered => "sp1p4_free_filtered",
            Family::SplitLike => "split_like",
            Family::PaperFig1Like => "paper_fig1_like",
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family '{s}'"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    Unit,
    /// Numerators in `1..=9`, denominators in `1..=5`.
    Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    /// Edge probability; for `sp1p4_free_filtered` it is resampled per attempt.
    pub p: f64,
    pub modulator: usize,
    pub s: usize,
    pub terminal_p: f64,
    pub weights: WeightMode,
    pub max_attempts: usize,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        GeneratorSpec {
            family,
            n,
            seed,
            p: 0.4,
            modulator: 2,
            s: 2,
            terminal_p: 0.4,
            weights: WeightMode::Unit,
            max_attempts: 20_000,
        }
    }
}

/// Builds the instance described by `spec`. Same spec, same instance.
pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    generate_with_modulator(spec).map(|(inst, _)| inst)
}

/// Like [`generate`], also returning the modulator for
/// `cograph_plus_modulator` (empty for the other families).
pub fn generate_with_modulator(spec: &GeneratorSpec) -> Result<(Instance, VertexSet)> {
    if !(0.0..=1.0).contains(&spec.p) || !(0.0..=1.0).contains(&spec.terminal_p) {
        return Err(SfvsError::Generation("probabilities must lie in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let mut modulator = VertexSet::new(n);
    let graph = match spec.family {
        Family::RandomGnp => gnp(&mut rng, n, spec.p),
        Family::RandomCograph => random_cograph(&mut rng, n, 0.5),
        Family::CographPlusModulator => {
            if spec.modulator > n {
                return Err(SfvsError::Generation(format!("modulator {} exceeds n = {n}", spec.modulator)));
            }
            let (g, p) = cograph_plus_modulator(&mut rng, n, spec.modulator, spec.p);
            modulator = p;
            g
        }
        Family::Sp1p4FreeFiltered => sp1p4_free(&mut rng, n, spec.s, spec.max_attempts)?,
        Family::SplitLike => split_like(&mut rng, n, spec.p),
        Family::PaperFig1Like => fig1_like(),
    };
    let n = graph.n();
    let terminals = if spec.family == Family::PaperFig1Like {
        VertexSet::from_iter_with_capacity(n, [0, 2, 6, 10])
    } else {
        VertexSet::from_iter_with_capacity(n, (0..n).filter(|_| rng.gen_bool(spec.terminal_p)))
    };
    let weights = match spec.weights {
        WeightMode::Unit => vec![Weight::one(); n],
        WeightMode::Rational => (0..n)
            .map(|_| Weight::new(rng.gen_range(1..=9), rng.gen_range(1..=5)))
            .collect(),
    };
    Ok((Instance::new(graph, terminals, weights)?, modulator))
}

pub fn gnp<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("generated edges are valid")
}

/// A uniformly random simple graph with exactly `m` edges.
pub fn gnm<R: Rng>(rng: &mut R, n: usize, m: usize) -> Graph {
    assert!(n < 2 && m == 0 || m <= n * (n - 1) / 2, "too many edges for {n} vertices");
    let mut seen = std::collections::HashSet::with_capacity(m);
    while seen.len() < m {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            seen.insert((u.min(v), u.max(v)));
        }
    }
    let mut edges: Vec<(usize, usize)> = seen.into_iter().collect();
    edges.sort_unstable();
    Graph::from_edges(n, edges).expect("generated edges are valid")
}

/// A random cotree over `0..n`, merging random pairs of subtrees.
pub fn random_cotree<R: Rng>(rng: &mut R, n: usize, join_p: f64) -> Cotree {
    let mut nodes: Vec<CotreeNode> = (0..n).map(CotreeNode::Leaf).collect();
    let mut pool: Vec<usize> = (0..n).collect();
    while pool.len() > 1 {
        let a = pool.swap_remove(rng.gen_range(0..pool.len()));
        let b = pool.swap_remove(rng.gen_range(0..pool.len()));
        nodes.push(if rng.gen_bool(join_p) {
            CotreeNode::Join(a, b)
        } else {
            CotreeNode::Union(a, b)
        });
        pool.push(nodes.len() - 1);
    }
    let root = pool.first().copied();
    Cotree::from_nodes(nodes, root, n).expect("generated cotree is valid")
}

pub fn random_cograph<R: Rng>(rng: &mut R, n: usize, join_p: f64) -> Graph {
    random_cotree(rng, n, join_p).realize()
}

/// A cograph on `n - k` random vertices plus a `k`-vertex modulator whose
/// internal and cross edges appear with probability `p`.
pub fn cograph_plus_modulator<R: Rng>(rng: &mut R, n: usize, k: usize, p: f64) -> (Graph, VertexSet) {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let (mods, rest) = order.split_at(k);
    let base = random_cograph(rng, rest.len(), 0.5);
    let mut edges: Vec<(usize, usize)> = base.edges().map(|(a, b)| (rest[a], rest[b])).collect();
    for (i, &q) in mods.iter().enumerate() {
        for &v in mods[i + 1..].iter().chain(rest) {
            if rng.gen_bool(p) {
                edges.push((q, v));
            }
        }
    }
    let g = Graph::from_edges(n, edges).expect("generated edges are valid");
    (g, VertexSet::from_iter_with_capacity(n, mods.iter().copied()))
}

fn sp1p4_free<R: Rng>(rng: &mut R, n: usize, s: usize, attempts: usize) -> Result<Graph> {
    for _ in 0..attempts {
        let g = if rng.gen_bool(0.5) {
            let p = rng.gen_range(0.1..0.95);
            gnp(rng, n, p)
        } else {
            let join_p = rng.gen_range(0.2..0.8);
            let base = random_cograph(rng, n, join_p);
            let flips = rng.gen_range(1..=3);
            flip_edges(rng, &base, flips)
        };
        if find_induced_sp1_p4(&g, s).is_none() {
            return Ok(g);
        }
    }
    Err(SfvsError::Generation(format!(
        "no ({s}P1+P4)-free graph on {n} vertices within {attempts} attempts"
    )))
}

fn flip_edges<R: Rng>(rng: &mut R, g: &Graph, flips: usize) -> Graph {
    let n = g.n();
    let mut rows = g.rows().to_vec();
    if n >= 2 {
        for _ in 0..flips {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                if rows[u].contains(v) {
                    rows[u].remove(v);
                    rows[v].remove(u);
                } else {
                    rows[u].insert(v);
                    rows[v].insert(u);
                }
            }
        }
    }
    Graph::from_rows(rows)
}

/// A clique on the first half, an independent set on the rest, random
/// edges in between.
pub fn split_like<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let k = n / 2;
    let mut edges = Vec::new();
    for u in 0..k {
        for v in u + 1..k {
            edges.push((u, v));
        }
        for v in k..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("generated edges are valid")
}

/// Petersen graph with the edge 0-1 subdivided by vertex 10.
pub fn fig1_like() -> Graph {
    let mut edges = vec![(0, 10), (10, 1)];
    for i in 0..5 {
        if i != 0 {
            edges.push((i, (i + 1) % 5));
        }
        edges.push((i, i + 5));
        edges.push((i + 5, (i + 2) % 5 + 5));
    }
    Graph::from_edges(11, edges).expect("fixed edge list is valid")
}
