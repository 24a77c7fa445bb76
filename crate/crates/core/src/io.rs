//! Instance files and result records.
//!
//! Files use 1-indexed vertex ids; everything in memory is 0-indexed. The
//! shift happens here and nowhere else.
//!
//! ```text
//! c a triangle with one terminal
//! p sfvs 3 3
//! e 1 2
//! e 1 3
//! e 2 3
//! t 1
//! w 2 3/2
//! k 1/1
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::checker::find_t_cycle_within;
use crate::error::{Result, SfvsError};
use crate::graph::Graph;
use crate::instance::Instance;
use crate::pipeline::{ClassCheck, SolveReport};
use crate::set::VertexSet;
use crate::stats::BranchStats;
use crate::weight::Weight;

/// A parsed instance file.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub threshold: Option<Weight>,
}

fn parse_err(line: usize, message: impl Into<String>) -> SfvsError {
    SfvsError::Parse { line, message: message.into() }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut seen_edges = std::collections::HashSet::new();
    let mut terminals: Vec<usize> = Vec::new();
    let mut weights: BTreeMap<usize, Weight> = BTreeMap::new();
    let mut threshold = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut tok = raw.split_whitespace();
        let Some(kind) = tok.next() else { continue };
        if kind == "c" {
            continue;
        }
        let args: Vec<&str> = tok.collect();
        let want = |k: usize| {
            if args.len() == k {
                Ok(())
            } else {
                Err(parse_err(line, format!("`{kind}` takes {k} fields, found {}", args.len())))
            }
        };
        if kind == "p" {
            want(3)?;
            if header.is_some() {
                return Err(parse_err(line, "second `p` line"));
            }
            if args[0] != "sfvs" {
                return Err(parse_err(line, format!("unknown problem `{}`", args[0])));
            }
            let n = parse_count(line, args[1])?;
            let m = parse_count(line, args[2])?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(parse_err(line, format!("`{kind}` before the `p` line")));
        };
        let vertex = |s: &str| -> Result<usize> {
            let v = parse_count(line, s)?;
            if v == 0 || v > n {
                return Err(parse_err(line, format!("vertex {v} outside 1..{n}")));
            }
            Ok(v - 1)
        };
        match kind {
            "e" => {
                want(2)?;
                let (u, v) = (vertex(args[0])?, vertex(args[1])?);
                if u == v {
                    return Err(parse_err(line, format!("self-loop at {}", u + 1)));
                }
                if !seen_edges.insert((u.min(v), u.max(v))) {
                    return Err(parse_err(line, format!("duplicate edge {} {}", u + 1, v + 1)));
                }
                edges.push((u, v));
            }
            "t" => {
                want(1)?;
                let u = vertex(args[0])?;
                if terminals.contains(&u) {
                    return Err(parse_err(line, format!("duplicate terminal {}", u + 1)));
                }
                terminals.push(u);
            }
            "w" => {
                want(2)?;
                let u = vertex(args[0])?;
                let w = Weight::parse_positive(args[1]).map_err(|e| parse_err(line, e.to_string()))?;
                if weights.insert(u, w).is_some() {
                    return Err(parse_err(line, format!("duplicate weight for {}", u + 1)));
                }
            }
            "k" => {
                want(1)?;
                if threshold.is_some() {
                    return Err(parse_err(line, "second `k` line"));
                }
                let k: Weight = args[0].parse().map_err(|e: SfvsError| parse_err(line, e.to_string()))?;
                if k < Weight::zero() {
                    return Err(parse_err(line, "negative threshold"));
                }
                threshold = Some(k);
            }
            other => return Err(parse_err(line, format!("unknown line type `{other}`"))),
        }
    }

    let last = text.lines().count().max(1);
    let Some((n, m)) = header else {
        return Err(parse_err(last, "missing `p sfvs <n> <m>` line"));
    };
    if edges.len() != m {
        return Err(parse_err(last, format!("header declares {m} edges, found {}", edges.len())));
    }
    let graph = Graph::from_edges(n, edges).map_err(|e| parse_err(last, e.to_string()))?;
    let mut w = vec![Weight::one(); n];
    for (v, x) in weights {
        w[v] = x;
    }
    let instance = Instance::new(graph, VertexSet::from_iter_with_capacity(n, terminals), w)
        .map_err(|e| parse_err(last, e.to_string()))?;
    Ok(InstanceFile { instance, threshold })
}

fn parse_count(line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| parse_err(line, format!("expected a non-negative integer, found `{s}`")))
}

/// Canonical text: header, edges sorted with `u < v`, sorted terminals,
/// weights only where they differ from one, then the threshold.
pub fn write_instance(inst: &Instance, threshold: Option<&Weight>) -> String {
    let g = inst.graph();
    let mut out = String::new();
    let _ = writeln!(out, "p sfvs {} {}", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    for t in inst.terminals().iter() {
        let _ = writeln!(out, "t {}", t + 1);
    }
    for (v, w) in inst.weights().iter().enumerate() {
        if !w.is_one() {
            let _ = writeln!(out, "w {} {}", v + 1, w);
        }
    }
    if let Some(k) = threshold {
        let _ = writeln!(out, "k {k}");
    }
    out
}

/// The machine-readable answer printed by `solve`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub n: usize,
    pub optimum_weight: String,
    pub forest: Vec<usize>,
    pub deleted: Vec<usize>,
    pub deleted_weight: String,
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decision: Option<bool>,
    pub branch_stats: BranchStats,
    pub class_check: ClassCheck,
    /// Wall-clock milliseconds per phase. Left out unless asked for, so the
    /// rest of the record stays byte-stable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

fn one_indexed(s: &VertexSet) -> Vec<usize> {
    s.iter().map(|v| v + 1).collect()
}

impl ResultRecord {
    pub fn from_report(inst: &Instance, report: &SolveReport) -> ResultRecord {
        let deleted = report.best.deleted();
        ResultRecord {
            n: inst.n(),
            optimum_weight: report.best.weight().to_string(),
            forest: one_indexed(report.best.forest()),
            deleted: one_indexed(&deleted),
            deleted_weight: inst.weight_of(&deleted).to_string(),
            certified: report.best.is_certified(),
            decision: report.decision,
            branch_stats: report.branch_stats.clone(),
            class_check: report.class_check.clone(),
            timings: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records always serialize")
    }

    pub fn from_json(text: &str) -> Result<ResultRecord> {
        serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))
    }
}

/// Why a record does not match its instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyError {
    /// The record was produced for a different vertex count.
    Mismatch(String),
    /// The record is for this instance but breaks an invariant.
    Violation(String),
}

/// Re-checks a record against the instance it claims to solve.
pub fn verify_record(file: &InstanceFile, rec: &ResultRecord) -> std::result::Result<(), VerifyError> {
    let inst = &file.instance;
    let n = inst.n();
    if rec.n != n {
        return Err(VerifyError::Mismatch(format!("record has n = {}, instance has n = {n}", rec.n)));
    }
    let bad = |m: String| Err(VerifyError::Violation(m));
    let mut forest = VertexSet::new(n);
    let mut deleted = VertexSet::new(n);
    for (name, ids, set) in [("forest", &rec.forest, &mut forest), ("deleted", &rec.deleted, &mut deleted)] {
        for &id in ids {
            if id == 0 || id > n {
                return bad(format!("{name} id {id} outside 1..{n}"));
            }
            if set.contains(id - 1) {
                return bad(format!("{name} lists {id} twice"));
            }
            set.insert(id - 1);
        }
    }
    if let Some(v) = forest.intersection(&deleted).first() {
        return bad(format!("vertex {} is in both forest and deleted", v + 1));
    }
    if let Some(v) = forest.union(&deleted).complement().first() {
        return bad(format!("vertex {} is in neither forest nor deleted", v + 1));
    }
    if let Some(w) = find_t_cycle_within(inst.graph(), inst.terminals(), Some(&forest)) {
        let ids: Vec<usize> = w.cycle.iter().map(|v| v + 1).collect();
        return bad(format!("forest has a cycle through terminal {}: {ids:?}", w.t_vertex + 1));
    }
    let fw = inst.weight_of(&forest);
    if rec.optimum_weight.parse::<Weight>().ok().as_ref() != Some(&fw) {
        return bad(format!("optimum_weight {} but the forest weighs {fw}", rec.optimum_weight));
    }
    let dw = inst.weight_of(&deleted);
    if rec.deleted_weight.parse::<Weight>().ok().as_ref() != Some(&dw) {
        return bad(format!("deleted_weight {} but the deleted set weighs {dw}", rec.deleted_weight));
    }
    if !rec.certified {
        return bad("record is not marked certified".into());
    }
    if let (Some(k), Some(d)) = (&file.threshold, rec.decision) {
        // the record only witnesses `true`; `false` is an optimality claim
        if d && dw > *k {
            return bad(format!("decision true but deleted weight {dw} exceeds k = {k}"));
        }
    }
    Ok(())
}
