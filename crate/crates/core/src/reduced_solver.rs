//! Exact maximum-weight T-forests on cographs, and on cographs plus a small
//! modulator.
//!
//! The pure cograph DP keeps one best partial solution per [`Signature`].
//! In a cograph every cycle through a vertex passes through a chordless cycle
//! on it, and chordless cycles are triangles or 4-cycles crossing a join, so
//! the three join rules below catch exactly the T-cycles.
//!
//! The modulator DP fixes the kept modulator part `M` and runs a cotree DP
//! whose states describe a partial solution `S` in two ways:
//!
//! * as a side of a future join: the signature, capped counts of non-terminal
//!   neighbours per `q ∈ M`, and the `M`-neighbourhood patterns of its
//!   terminals (and of all its vertices while `S` is independent);
//! * as a final set of components: two partitions of `M`, by connectivity in
//!   `F - T` (`beta`) and in `F` (`gamma`), where `F = M ∪ S`.
//!
//! For two non-adjacent parts `A` and `B`, each forming a T-forest with `M`,
//! the cycle rank of the contracted graph of `M ∪ A ∪ B` equals
//! `Δgamma - Δbeta`, where `Δp = #(p_A ∨ p_B) - #p_A - #p_B + #p_M`. So a union
//! is feasible iff the two deltas agree. A join produces one connected
//! component, which is evaluated directly on a small contracted gadget.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::checker::UnionFind;
use crate::config::ReducedSolverConfig;
use crate::cotree::{build_cotree_within, Cotree, CotreeNode, InducedP4};
use crate::error::{Result, SfvsError};
use crate::graph::Graph;
use crate::instance::{best_of, Instance, Solution};
use crate::oracle;
use crate::set::VertexSet;

/// Summary of a vertex set `S` inside a cograph.
///
/// `c` is `|S|` capped at 2, `e` says `G[S]` has an edge, `t` that `S` meets
/// `T`, `x` that some edge of `G[S]` has a terminal endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub c: u8,
    pub e: bool,
    pub t: bool,
    pub x: bool,
}

impl Signature {
    pub const EMPTY: Signature = Signature { c: 0, e: false, t: false, x: false };

    pub fn leaf(is_terminal: bool) -> Signature {
        Signature { c: 1, e: false, t: is_terminal, x: false }
    }

    pub fn union(self, o: Signature) -> Signature {
        Signature {
            c: (self.c + o.c).min(2),
            e: self.e || o.e,
            t: self.t || o.t,
            x: self.x || o.x,
        }
    }

    /// `None` when joining the two sides closes a T-cycle.
    pub fn join(self, o: Signature) -> Option<Signature> {
        if self.c == 0 {
            return Some(o);
        }
        if o.c == 0 {
            return Some(self);
        }
        if self.c == 2 && o.c == 2 && (self.t || o.t) {
            return None;
        }
        if (self.e && (self.x || o.t)) || (o.e && (o.x || self.t)) {
            return None;
        }
        Some(Signature {
            c: 2,
            e: true,
            t: self.t || o.t,
            x: self.x || o.x || self.t || o.t,
        })
    }

    fn index(self) -> usize {
        self.c as usize * 8 + usize::from(self.e) * 4 + usize::from(self.t) * 2 + usize::from(self.x)
    }
}

/// Best partial solution: scaled weight and vertex set.
type Entry = (BigInt, VertexSet);

fn improves(w: &BigInt, s: &VertexSet, current: Option<&Entry>) -> bool {
    match current {
        None => true,
        Some((cw, cs)) => w > cw || (w == cw && s < cs),
    }
}

fn check_capacity(cotree: &Cotree, inst: &Instance) -> Result<()> {
    if cotree.capacity() != inst.n() {
        return Err(SfvsError::CotreeMismatch(format!(
            "cotree covers ids 0..{} but the instance has {} vertices",
            cotree.capacity(),
            inst.n()
        )));
    }
    Ok(())
}

/// Maximum-weight T-forest among the cotree's vertices.
pub fn max_tforest_cograph(cotree: &Cotree, inst: &Instance) -> Result<Solution> {
    check_capacity(cotree, inst)?;
    let n = inst.n();
    let scaled = inst.scaled();
    let mut tables: Vec<Option<Vec<Option<Entry>>>> = Vec::with_capacity(cotree.nodes().len());
    for node in cotree.nodes() {
        let table = match *node {
            CotreeNode::Leaf(v) => {
                let mut t = vec![None; 24];
                t[Signature::EMPTY.index()] = Some((BigInt::from(0), VertexSet::new(n)));
                t[Signature::leaf(inst.is_terminal(v)).index()] =
                    Some((scaled.get(v).clone(), VertexSet::from_iter_with_capacity(n, [v])));
                t
            }
            CotreeNode::Union(a, b) | CotreeNode::Join(a, b) => {
                let join = matches!(node, CotreeNode::Join(..));
                let left = tables[a].take().expect("child table present");
                let right = tables[b].take().expect("child table present");
                let sigs = all_signatures();
                let mut t: Vec<Option<Entry>> = vec![None; 24];
                for &sa in &sigs {
                    let Some((wa, xa)) = &left[sa.index()] else { continue };
                    for &sb in &sigs {
                        let Some((wb, xb)) = &right[sb.index()] else { continue };
                        let merged = if join { sa.join(sb) } else { Some(sa.union(sb)) };
                        let Some(sig) = merged else { continue };
                        let w = wa + wb;
                        let s = xa.union(xb);
                        if improves(&w, &s, t[sig.index()].as_ref()) {
                            t[sig.index()] = Some((w, s));
                        }
                    }
                }
                t
            }
        };
        tables.push(Some(table));
    }
    let best = match cotree.root() {
        None => VertexSet::new(n),
        Some(r) => {
            let root = tables[r].take().expect("root table present");
            let mut best: Option<Entry> = None;
            for (w, s) in root.into_iter().flatten() {
                if improves(&w, &s, best.as_ref()) {
                    best = Some((w, s));
                }
            }
            best.expect("the empty set is always feasible").1
        }
    };
    Ok(Solution::certify(inst, best).expect("cograph DP output is a T-forest"))
}

fn all_signatures() -> Vec<Signature> {
    let mut out = Vec::new();
    for c in 0..3u8 {
        for bits in 0..8u8 {
            let s = Signature { c, e: bits & 4 != 0, t: bits & 2 != 0, x: bits & 1 != 0 };
            let valid = (!s.x || (s.e && s.t)) && (!s.e || s.c == 2) && (!s.t || s.c >= 1);
            if valid {
                out.push(s);
            }
        }
    }
    out
}

/// The DP's verdict on a fixed subset: its signature, or `None` if some join
/// on the way up is rejected.
pub fn signature_of(cotree: &Cotree, terminals: &VertexSet, subset: &VertexSet) -> Option<Signature> {
    let mut sigs: Vec<Signature> = Vec::with_capacity(cotree.nodes().len());
    for node in cotree.nodes() {
        let sig = match *node {
            CotreeNode::Leaf(v) if subset.contains(v) => Signature::leaf(terminals.contains(v)),
            CotreeNode::Leaf(_) => Signature::EMPTY,
            CotreeNode::Union(a, b) => sigs[a].union(sigs[b]),
            CotreeNode::Join(a, b) => sigs[a].join(sigs[b])?,
        };
        sigs.push(sig);
    }
    Some(cotree.root().map_or(Signature::EMPTY, |r| sigs[r]))
}

/// A vertex set `P` of the live part of a graph, plus a cotree of the rest.
#[derive(Clone, Debug)]
pub struct ModulatorDecomposition {
    alive: VertexSet,
    modulator: VertexSet,
    cotree: Cotree,
}

impl ModulatorDecomposition {
    /// Builds the cotree of `g[alive \ modulator]`.
    pub fn new(g: &Graph, alive: VertexSet, modulator: VertexSet) -> Result<Self> {
        if !modulator.is_subset(&alive) {
            return Err(SfvsError::CotreeMismatch("modulator must lie inside the live vertices".into()));
        }
        let rest = alive.difference(&modulator);
        let cotree = build_cotree_within(g, &rest).map_err(|InducedP4(w)| {
            SfvsError::CotreeMismatch(format!("remainder contains the induced P4 {w:?}"))
        })?;
        Ok(ModulatorDecomposition { alive, modulator, cotree })
    }

    /// Decomposition of the whole graph.
    pub fn of_graph(g: &Graph, modulator: VertexSet) -> Result<Self> {
        Self::new(g, g.vertex_set(), modulator)
    }

    pub fn from_parts(alive: VertexSet, modulator: VertexSet, cotree: Cotree) -> Result<Self> {
        if !modulator.is_subset(&alive) || cotree.vertices() != alive.difference(&modulator) {
            return Err(SfvsError::CotreeMismatch("cotree leaves differ from alive minus modulator".into()));
        }
        Ok(ModulatorDecomposition { alive, modulator, cotree })
    }

    pub fn alive(&self) -> &VertexSet {
        &self.alive
    }

    pub fn modulator(&self) -> &VertexSet {
        &self.modulator
    }

    pub fn cotree(&self) -> &Cotree {
        &self.cotree
    }
}

/// Exact maximum-weight T-forest of the live part of the graph.
pub fn max_tforest_with_modulator(
    dec: &ModulatorDecomposition,
    inst: &Instance,
    cfg: &ReducedSolverConfig,
) -> Result<Solution> {
    let none = VertexSet::new(inst.n());
    Ok(max_tforest_with_required(dec, inst, &none, cfg)?.expect("the empty set is always feasible"))
}

/// Best T-forest `F` of the live part with `required ⊆ F`, where `required`
/// lies inside the modulator. `None` if `required` is not a T-forest.
pub fn max_tforest_with_required(
    dec: &ModulatorDecomposition,
    inst: &Instance,
    required: &VertexSet,
    cfg: &ReducedSolverConfig,
) -> Result<Option<Solution>> {
    check_capacity(&dec.cotree, inst)?;
    if !required.is_subset(&dec.modulator) {
        return Err(SfvsError::CotreeMismatch("required vertices must lie in the modulator".into()));
    }
    if cfg.use_brute(dec.alive.len()) {
        return oracle::brute_force_within(inst, &dec.alive, required);
    }
    let p: Vec<usize> = dec.modulator.iter().collect();
    let limit = cfg.max_modulator.min(64);
    if p.len() > limit {
        return Err(SfvsError::Capacity { what: "modulator size", limit, actual: p.len() });
    }
    let forced = p
        .iter()
        .enumerate()
        .filter(|(_, &v)| required.contains(v))
        .fold(0u64, |m, (i, _)| m | 1 << i);
    let subsets: u64 = if p.is_empty() { 1 } else { 1 << p.len() as u64 };
    let best = (0..subsets)
        .into_par_iter()
        .filter(|mask| mask & forced == forced)
        .map(|mask| {
            let kept: Vec<usize> = (0..p.len()).filter(|&i| mask & 1 << i != 0).map(|i| p[i]).collect();
            ModulatorDp::new(inst, &dec.cotree, &kept).and_then(|dp| dp.solve())
        })
        .reduce(|| None, best_of);
    Ok(best)
}

/// An extra node of the contracted gadget used to evaluate one component.
enum Extra {
    /// A non-terminal blob with capped neighbour counts per kept vertex.
    Blob(Vec<u8>),
    /// A terminal adjacent to the kept vertices in the mask.
    Term(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Key {
    sig: Signature,
    /// Capped counts of non-terminal neighbours in `S`, per kept vertex.
    attach: Vec<u8>,
    /// Sorted neighbourhood patterns of the terminals of `S`; `None` once two
    /// of them overlap.
    pt: Option<Vec<u64>>,
    /// Patterns of all vertices of an independent `S`, flagged by terminality.
    pa: Option<Vec<(bool, u64)>>,
    beta: Vec<u8>,
    gamma: Vec<u8>,
}

struct ModulatorDp<'a> {
    inst: &'a Instance,
    cotree: &'a Cotree,
    kept: Vec<usize>,
    kept_is_t: Vec<bool>,
    kept_adj: Vec<u64>,
    base_beta: Vec<u8>,
    base_gamma: Vec<u8>,
}

impl<'a> ModulatorDp<'a> {
    /// `None` when the kept part already contains a T-cycle.
    fn new(inst: &'a Instance, cotree: &'a Cotree, kept: &[usize]) -> Option<Self> {
        let g = inst.graph();
        let kept_is_t = kept.iter().map(|&q| inst.is_terminal(q)).collect();
        let kept_adj = kept
            .iter()
            .map(|&a| {
                kept.iter()
                    .enumerate()
                    .filter(|(_, &b)| g.is_adjacent(a, b))
                    .fold(0u64, |m, (j, _)| m | 1 << j)
            })
            .collect();
        let mut dp = ModulatorDp {
            inst,
            cotree,
            kept: kept.to_vec(),
            kept_is_t,
            kept_adj,
            base_beta: Vec::new(),
            base_gamma: Vec::new(),
        };
        let (beta, gamma) = dp.eval(&[], &[])?;
        dp.base_beta = beta;
        dp.base_gamma = gamma;
        Some(dp)
    }

    fn k(&self) -> usize {
        self.kept.len()
    }

    fn pattern(&self, v: usize) -> u64 {
        let g = self.inst.graph();
        self.kept
            .iter()
            .enumerate()
            .filter(|(_, &q)| g.is_adjacent(v, q))
            .fold(0u64, |m, (i, _)| m | 1 << i)
    }

    fn solve(self) -> Option<Solution> {
        let n = self.inst.n();
        let scaled = self.inst.scaled();
        let mut tables: Vec<Option<HashMap<Key, Entry>>> = Vec::with_capacity(self.cotree.nodes().len());
        for node in self.cotree.nodes() {
            let table = match *node {
                CotreeNode::Leaf(v) => {
                    let mut t = HashMap::new();
                    t.insert(self.empty_key(), (BigInt::from(0), VertexSet::new(n)));
                    if let Some(key) = self.leaf_key(v) {
                        t.insert(key, (scaled.get(v).clone(), VertexSet::from_iter_with_capacity(n, [v])));
                    }
                    t
                }
                CotreeNode::Union(a, b) | CotreeNode::Join(a, b) => {
                    let join = matches!(node, CotreeNode::Join(..));
                    let left = tables[a].take().expect("child table present");
                    let right = tables[b].take().expect("child table present");
                    let mut t: HashMap<Key, Entry> = HashMap::new();
                    for (ka, (wa, sa)) in &left {
                        for (kb, (wb, sb)) in &right {
                            let merged = if join { self.join_keys(ka, kb) } else { self.union_keys(ka, kb) };
                            let Some(key) = merged else { continue };
                            let w = wa + wb;
                            let s = sa.union(sb);
                            if improves(&w, &s, t.get(&key)) {
                                t.insert(key, (w, s));
                            }
                        }
                    }
                    t
                }
            };
            tables.push(Some(table));
        }
        let mut best: Option<Entry> = None;
        match self.cotree.root() {
            None => best = Some((BigInt::from(0), VertexSet::new(n))),
            Some(r) => {
                for (_, (w, s)) in tables[r].take().expect("root table present") {
                    if improves(&w, &s, best.as_ref()) {
                        best = Some((w, s));
                    }
                }
            }
        }
        let mut forest = best?.1;
        for &q in &self.kept {
            forest.insert(q);
        }
        let sol = Solution::certify(self.inst, forest);
        if sol.is_none() {
            log::error!("modulator DP produced a set rejected by the checker");
        }
        sol
    }

    fn empty_key(&self) -> Key {
        Key {
            sig: Signature::EMPTY,
            attach: vec![0; self.k()],
            pt: Some(Vec::new()),
            pa: Some(Vec::new()),
            beta: self.base_beta.clone(),
            gamma: self.base_gamma.clone(),
        }
    }

    fn leaf_key(&self, v: usize) -> Option<Key> {
        let is_t = self.inst.is_terminal(v);
        let pat = self.pattern(v);
        let attach: Vec<u8> = (0..self.k()).map(|i| u8::from(!is_t && pat & 1 << i != 0)).collect();
        let extra = if is_t { Extra::Term(pat) } else { Extra::Blob(attach.clone()) };
        let (beta, gamma) = self.eval(&[extra], &[])?;
        Some(Key {
            sig: Signature::leaf(is_t),
            attach,
            pt: Some(if is_t && pat != 0 { vec![pat] } else { Vec::new() }),
            pa: Some(if pat != 0 { vec![(is_t, pat)] } else { Vec::new() }),
            beta,
            gamma,
        })
    }

    fn union_keys(&self, a: &Key, b: &Key) -> Option<Key> {
        let beta = join_partitions(&a.beta, &b.beta);
        let gamma = join_partitions(&a.gamma, &b.gamma);
        let delta = |j: &[u8], x: &[u8], y: &[u8], base: &[u8]| {
            classes(j) as isize - classes(x) as isize - classes(y) as isize + classes(base) as isize
        };
        if delta(&beta, &a.beta, &b.beta, &self.base_beta) != delta(&gamma, &a.gamma, &b.gamma, &self.base_gamma) {
            return None;
        }
        Some(normalize(Key {
            sig: a.sig.union(b.sig),
            attach: add_capped(&a.attach, &b.attach),
            pt: merge_disjoint(&a.pt, &b.pt, |&p| p),
            pa: merge_disjoint(&a.pa, &b.pa, |&(_, p)| p),
            beta,
            gamma,
        }))
    }

    fn join_keys(&self, a: &Key, b: &Key) -> Option<Key> {
        if a.sig.c == 0 {
            return Some(b.clone());
        }
        if b.sig.c == 0 {
            return Some(a.clone());
        }
        let sig = a.sig.join(b.sig)?;
        let attach = add_capped(&a.attach, &b.attach);
        let mut extras = Vec::new();
        let mut links = Vec::new();
        if !sig.t {
            extras.push(Extra::Blob(attach.clone()));
        } else {
            // With a terminal present one side is a single vertex, the hub.
            let (hub, other) = match (a.sig.c, b.sig.c) {
                (1, _) => (a, b),
                (_, 1) => (b, a),
                _ => return None,
            };
            if hub.sig.t {
                // a terminal star: the other side is independent
                let hub_pat = hub.pa.as_ref()?.first().map_or(0, |&(_, p)| p);
                extras.push(Extra::Term(hub_pat));
                for &(is_t, p) in other.pa.as_ref()? {
                    extras.push(if is_t { Extra::Term(p) } else { Extra::Blob(ones(p, self.k())) });
                    links.push((0, extras.len() - 1));
                }
            } else {
                // the hub and all non-terminals form one blob, terminals hang off it
                extras.push(Extra::Blob(attach.clone()));
                for &p in other.pt.as_ref()? {
                    extras.push(Extra::Term(p));
                    links.push((0, extras.len() - 1));
                }
            }
        }
        let (beta, gamma) = self.eval(&extras, &links)?;
        Some(normalize(Key {
            sig,
            attach,
            pt: merge_disjoint(&a.pt, &b.pt, |&p| p),
            pa: None,
            beta,
            gamma,
        }))
    }

    /// Contracts the kept vertices plus `extras` and checks acyclicity.
    /// Returns the `beta` and `gamma` partitions of the kept vertices.
    fn eval(&self, extras: &[Extra], links: &[(usize, usize)]) -> Option<(Vec<u8>, Vec<u8>)> {
        let k = self.k();
        let total = k + extras.len();
        let is_t = |i: usize| {
            if i < k {
                self.kept_is_t[i]
            } else {
                matches!(extras[i - k], Extra::Term(_))
            }
        };
        let links: Vec<(usize, usize)> = links.iter().map(|&(a, b)| (a + k, b + k)).collect();
        let mut blob = UnionFind::new(total);
        for i in 0..k {
            for j in i + 1..k {
                if self.kept_adj[i] & 1 << j != 0 && !is_t(i) && !is_t(j) {
                    blob.union(i, j);
                }
            }
        }
        for (x, extra) in extras.iter().enumerate() {
            if let Extra::Blob(counts) = extra {
                for (q, &c) in counts.iter().enumerate().take(k) {
                    if c > 0 && !self.kept_is_t[q] {
                        blob.union(k + x, q);
                    }
                }
            }
        }
        for &(a, b) in &links {
            if !is_t(a) && !is_t(b) {
                blob.union(a, b);
            }
        }
        let mut quotient = UnionFind::new(total);
        let mut add_edge = |a: usize, b: usize, blob: &mut UnionFind| {
            let (ra, rb) = (blob.find(a), blob.find(b));
            quotient.union(ra, rb)
        };
        for i in 0..k {
            for j in i + 1..k {
                if self.kept_adj[i] & 1 << j != 0 && (is_t(i) || is_t(j)) && !add_edge(i, j, &mut blob) {
                    return None;
                }
            }
        }
        for (x, extra) in extras.iter().enumerate() {
            match extra {
                Extra::Blob(counts) => {
                    for q in (0..k).filter(|&q| self.kept_is_t[q]) {
                        for _ in 0..counts[q] {
                            if !add_edge(k + x, q, &mut blob) {
                                return None;
                            }
                        }
                    }
                }
                Extra::Term(p) => {
                    for q in (0..k).filter(|&q| p & 1 << q != 0) {
                        if !add_edge(k + x, q, &mut blob) {
                            return None;
                        }
                    }
                }
            }
        }
        for &(a, b) in &links {
            if (is_t(a) || is_t(b)) && !add_edge(a, b, &mut blob) {
                return None;
            }
        }
        let blob_roots: Vec<usize> = (0..k).map(|i| blob.find(i)).collect();
        let beta = canonical(blob_roots.iter().copied());
        let gamma = canonical(blob_roots.iter().map(|&r| quotient.find(r)));
        Some((beta, gamma))
    }
}

fn normalize(mut key: Key) -> Key {
    // a side with an edge at a terminal can never be joined again
    if key.sig.x {
        key.attach.fill(0);
        key.pt = None;
    }
    if key.sig.e {
        key.pa = None;
    }
    key
}

fn ones(mask: u64, k: usize) -> Vec<u8> {
    (0..k).map(|i| u8::from(mask & 1 << i != 0)).collect()
}

fn add_capped(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| (x + y).min(2)).collect()
}

fn merge_disjoint<T: Copy + Ord>(a: &Option<Vec<T>>, b: &Option<Vec<T>>, mask: impl Fn(&T) -> u64) -> Option<Vec<T>> {
    let (a, b) = (a.as_ref()?, b.as_ref()?);
    let mut seen = 0u64;
    for item in a.iter().chain(b) {
        let m = mask(item);
        if seen & m != 0 {
            return None;
        }
        seen |= m;
    }
    let mut out: Vec<T> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    Some(out)
}

/// Relabels classes in order of first appearance.
fn canonical(labels: impl Iterator<Item = usize>) -> Vec<u8> {
    let mut seen: Vec<usize> = Vec::new();
    labels
        .map(|l| match seen.iter().position(|&s| s == l) {
            Some(i) => i as u8,
            None => {
                seen.push(l);
                (seen.len() - 1) as u8
            }
        })
        .collect()
}

fn classes(p: &[u8]) -> usize {
    p.iter().max().map_or(0, |&m| m as usize + 1)
}

fn join_partitions(a: &[u8], b: &[u8]) -> Vec<u8> {
    let k = a.len();
    let mut uf = UnionFind::new(k);
    for p in [a, b] {
        let mut first: Vec<Option<usize>> = vec![None; k];
        for (i, &l) in p.iter().enumerate() {
            match first[l as usize] {
                Some(f) => {
                    uf.union(f, i);
                }
                None => first[l as usize] = Some(i),
            }
        }
    }
    canonical((0..k).map(|i| uf.find(i)))
}
