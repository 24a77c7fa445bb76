//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use sfvs_core::checker::{is_t_forest, is_t_forest_by_contraction, is_t_forest_mask};
use sfvs_core::config::{Backend, ReducedSolverConfig, SolverConfig};
use sfvs_core::cotree::{build_cotree, is_sp1_p4_free};
use sfvs_core::flow_cut::{min_weight_vertex_cut, CutInstance};
use sfvs_core::io::ResultRecord;
use sfvs_core::oracle::{generate, generate_with_modulator, gnm, gnp, random_cotree, Family, GeneratorSpec, WeightMode};
use sfvs_core::pipeline::{solve_unweighted_sp1p4, solve_weighted_2p1p4};
use sfvs_core::reduced_solver::{max_tforest_cograph, max_tforest_with_modulator, signature_of, ModulatorDecomposition};
use sfvs_core::stats::AuditSummary;
use sfvs_core::{Graph, Instance, VertexSet, Weight};

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_terminals(rng: &mut ChaCha8Rng, n: usize, p: f64) -> VertexSet {
    VertexSet::from_iter_with_capacity(n, (0..n).filter(|_| rng.gen_bool(p)))
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<Weight> {
    (0..n).map(|_| Weight::new(rng.gen_range(1..10), rng.gen_range(1..6))).collect()
}

fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask & 1 << k != 0 {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

fn checkers_agree(g: &Graph, t: &VertexSet, enumerate: bool) -> std::result::Result<bool, String> {
    let adj = common::masks(g);
    let tm = common::mask_of(t);
    let all = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let want = if enumerate {
        common::enumerated_is_t_forest(&adj, tm, all)
    } else {
        common::naive_is_t_forest(&adj, tm, all)
    };
    let got = [
        is_t_forest(g, t),
        is_t_forest_by_contraction(g, t),
        is_t_forest_mask(&adj, tm, all),
    ];
    ensure(got.iter().all(|&x| x == want), || format!("checkers {got:?} vs oracle {want} on {g:?}, T = {t:?}"))?;
    Ok(want)
}

fn criterion_checker() -> Check {
    let mut exhaustive = 0u64;
    for n in 1..=7usize {
        let pairs = n * (n - 1) / 2;
        exhaustive += (0u64..1 << pairs)
            .into_par_iter()
            .map(|mask| -> std::result::Result<u64, String> {
                let g = graph_from_mask(n, mask);
                checkers_agree(&g, &g.vertex_set(), true)?;
                let mut rng = ChaCha8Rng::seed_from_u64(mask ^ (n as u64) << 40);
                checkers_agree(&g, &random_terminals(&mut rng, n, 0.4), true)?;
                Ok(2)
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sampled: Vec<u64> = (0..200).map(|_| rng.gen_range(0..1u64 << 21)).collect();
    let all_t = sampled
        .into_par_iter()
        .map(|mask| -> std::result::Result<u64, String> {
            let g = graph_from_mask(7, mask);
            for tm in 0u32..128 {
                checkers_agree(&g, &VertexSet::from_iter_with_capacity(7, (0..7).filter(|&v| tm & 1 << v != 0)), true)?;
            }
            Ok(128)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let (yes, no) = (0..10_000u64)
        .into_par_iter()
        .map(|i| -> std::result::Result<(u64, u64), String> {
            let mut rng = ChaCha8Rng::seed_from_u64(100_000 + i);
            let n = rng.gen_range(1..=40);
            // sparse enough that both answers are common
            let p = rng.gen_range(0.0..3.0) / n as f64;
            let g = gnp(&mut rng, n, p.min(1.0));
            let tp = rng.gen_range(0.05..0.6);
            let t = random_terminals(&mut rng, n, tp);
            Ok(if checkers_agree(&g, &t, false)? { (1, 0) } else { (0, 1) })
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    ensure(yes > 1000 && no > 1000, || format!("random cases too one-sided: {yes} yes, {no} no"))?;
    Ok(format!("{exhaustive} exhaustive + {all_t} all-T + 10000 random ({yes} T-forests)"))
}

fn criterion_cut() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut cases = Vec::new();
    while cases.len() < 1000 {
        let n = rng.gen_range(2..=12);
        let p = rng.gen_range(0.1..0.7);
        let g = gnp(&mut rng, n, p);
        let (t1, t2) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if t1 != t2 && !g.is_adjacent(t1, t2) {
            let weights = random_weights(&mut rng, n);
            cases.push(CutInstance { graph: g, t1, t2, weights });
        }
    }
    cases.par_iter().enumerate().try_for_each(|(i, c)| {
        let got = min_weight_vertex_cut(c).map_err(|e| e.to_string())?;
        let want = common::naive_min_cut(&c.graph, c.t1, c.t2, &c.weights);
        ensure(got.weight == want, || format!("case {i}: flow {} vs brute {want}", got.weight))?;
        let alive = c.graph.vertex_set().difference(&got.cut);
        ensure(!c.graph.connected_within(&alive, c.t1, c.t2), || format!("case {i}: cut does not separate"))
    })?;
    Ok("1000 cuts, n <= 12, rational weights".into())
}

/// Cotree shapes up to isomorphism: a union or join node with its children
/// flattened and sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Shape {
    Leaf,
    Node(bool, Vec<Shape>),
}

fn combine(join: bool, a: &Shape, b: &Shape) -> Shape {
    let mut kids = Vec::new();
    for s in [a, b] {
        match s {
            Shape::Node(j, inner) if *j == join => kids.extend(inner.iter().cloned()),
            other => kids.push(other.clone()),
        }
    }
    kids.sort();
    Shape::Node(join, kids)
}

fn realize(shape: &Shape, next: &mut usize, edges: &mut Vec<(usize, usize)>) -> Vec<usize> {
    match shape {
        Shape::Leaf => {
            *next += 1;
            vec![*next - 1]
        }
        Shape::Node(join, kids) => {
            let mut all: Vec<usize> = Vec::new();
            for k in kids {
                let part = realize(k, next, edges);
                if *join {
                    for &a in &all {
                        for &b in &part {
                            edges.push((a, b));
                        }
                    }
                }
                all.extend(part);
            }
            all
        }
    }
}

fn all_cographs(max_n: usize) -> Vec<Graph> {
    let mut by_size: Vec<Vec<Shape>> = vec![Vec::new(), vec![Shape::Leaf]];
    for n in 2..=max_n {
        let mut set = BTreeSet::new();
        for k in 1..=n / 2 {
            for a in &by_size[k] {
                for b in &by_size[n - k] {
                    set.insert(combine(false, a, b));
                    set.insert(combine(true, a, b));
                }
            }
        }
        by_size.push(set.into_iter().collect());
    }
    let mut out = Vec::new();
    for (n, shapes) in by_size.iter().enumerate() {
        for s in shapes {
            let mut edges = Vec::new();
            realize(s, &mut 0, &mut edges);
            out.push(Graph::from_edges(n, edges).unwrap());
        }
    }
    out
}

fn criterion_cograph_dp(det: &Mutex<Vec<String>>) -> Check {
    let outputs = (0..1000u64)
        .into_par_iter()
        .map(|i| -> std::result::Result<String, String> {
            let mut rng = ChaCha8Rng::seed_from_u64(300_000 + i);
            let n = rng.gen_range(1..=16);
            let join_p = rng.gen_range(0.2..0.8);
            let tree = random_cotree(&mut rng, n, join_p);
            let tp = rng.gen_range(0.1..0.9);
            let t = random_terminals(&mut rng, n, tp);
            let inst = Instance::new(tree.realize(), t, random_weights(&mut rng, n)).unwrap();
            let got = max_tforest_cograph(&tree, &inst).map_err(|e| e.to_string())?;
            let want = common::naive_max_tforest(&inst);
            ensure(got.weight() == &want, || format!("cograph {i}: dp {} vs brute {want}", got.weight()))?;
            Ok(format!("{:?}", got.forest().to_vec()))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    det.lock().unwrap().extend(outputs);

    let graphs = all_cographs(8);
    let counts: Vec<usize> = (1..=8).map(|n| graphs.iter().filter(|g| g.n() == n).count()).collect();
    ensure(counts == [1, 2, 4, 10, 24, 66, 180, 522], || format!("cograph counts {counts:?}"))?;
    let checked = graphs
        .par_iter()
        .map(|g| -> std::result::Result<u64, String> {
            let n = g.n();
            let tree = build_cotree(g).map_err(|p| format!("not a cograph: {p:?}"))?;
            let adj = common::masks(g);
            let set = |m: u64| VertexSet::from_iter_with_capacity(n, (0..n).filter(|&v| m & 1 << v != 0));
            for tm in 0u64..1 << n {
                let t = set(tm);
                for fm in 0u64..1 << n {
                    let dp = signature_of(&tree, &t, &set(fm)).is_some();
                    ensure(dp == common::naive_is_t_forest(&adj, tm, fm), || {
                        format!("predicate mismatch on {g:?}, T = {tm:b}, F = {fm:b}")
                    })?;
                }
            }
            Ok(1u64 << (2 * n))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(format!("1000 cographs n <= 16; predicate on {} (T, F) pairs over all {} cographs n <= 8", checked, graphs.len()))
}

fn criterion_modulator_dp(det: &Mutex<Vec<String>>) -> Check {
    let dp = ReducedSolverConfig::with_backend(Backend::Dp);
    let outputs = (0..1000u64)
        .into_par_iter()
        .map(|i| -> std::result::Result<String, String> {
            let c = 1 + (i as usize % 12);
            let k = (i as usize / 12) % 5;
            let mut spec = GeneratorSpec::new(Family::CographPlusModulator, c + k, 400_000 + i);
            spec.modulator = k;
            spec.p = [0.2, 0.4, 0.6][(i % 3) as usize];
            spec.terminal_p = [0.2, 0.5, 0.8][((i / 3) % 3) as usize];
            spec.weights = WeightMode::Rational;
            let (inst, p) = generate_with_modulator(&spec).map_err(|e| e.to_string())?;
            let dec = ModulatorDecomposition::of_graph(inst.graph(), p).map_err(|e| e.to_string())?;
            let got = max_tforest_with_modulator(&dec, &inst, &dp).map_err(|e| e.to_string())?;
            let want = common::naive_max_tforest(&inst);
            ensure(got.weight() == &want, || format!("instance {i}: dp {} vs brute {want}", got.weight()))?;
            Ok(format!("{:?}", got.forest().to_vec()))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    det.lock().unwrap().extend(outputs);
    Ok("1000 instances, cograph n <= 12 plus modulator |P| <= 4, dp backend".into())
}

fn class_instance(s: usize, n: usize, seed: u64, weights: WeightMode) -> Instance {
    let mut spec = GeneratorSpec::new(Family::Sp1p4FreeFiltered, n, seed);
    spec.s = s;
    spec.weights = weights;
    spec.terminal_p = [0.15, 0.35, 0.6, 0.85][(seed % 4) as usize];
    generate(&spec).unwrap()
}

fn audited(backend: Backend) -> SolverConfig {
    SolverConfig {
        audit: true,
        validate_class: Some(true),
        reduced_solver: ReducedSolverConfig::with_backend(backend),
        ..SolverConfig::default()
    }
}

/// (instance, s, weighted) for the pipeline suites.
fn pipeline_suite() -> Vec<(Instance, usize, bool)> {
    let mut out = Vec::new();
    for i in 0..200u64 {
        out.push((class_instance(2, 3 + (i as usize % 8), 500_000 + i, WeightMode::Rational), 2, true));
    }
    for i in 0..200u64 {
        out.push((class_instance(2, 3 + (i as usize % 8), 600_000 + i, WeightMode::Unit), 2, false));
    }
    for i in 0..50u64 {
        out.push((class_instance(3, 3 + (i as usize % 6), 700_000 + i, WeightMode::Unit), 3, false));
    }
    out
}

/// Solves the suite with both reduced-solver backends and returns the JSON
/// records, failing if the backends disagree.
fn run_pipelines(suite: &[(Instance, usize, bool)], audit: &Mutex<AuditSummary>) -> std::result::Result<Vec<String>, String> {
    suite
        .par_iter()
        .enumerate()
        .map(|(i, (inst, s, weighted))| {
            let mut records = Vec::new();
            for backend in [Backend::Dp, Backend::Brute] {
                let cfg = audited(backend);
                let report = if *weighted {
                    solve_weighted_2p1p4(inst, &cfg, None)
                } else {
                    solve_unweighted_sp1p4(inst, *s, &cfg, None)
                }
                .map_err(|e| format!("instance {i}: {e}"))?;
                {
                    let mut a = audit.lock().unwrap();
                    a.checked += report.branch_stats.audit.checked;
                    a.violations += report.branch_stats.audit.violations;
                    a.examples.extend(report.branch_stats.audit.examples.iter().cloned());
                }
                records.push(ResultRecord::from_report(inst, &report).to_json());
            }
            let forest = |r: &str| serde_json::from_str::<serde_json::Value>(r).unwrap()["forest"].clone();
            ensure(forest(&records[0]) == forest(&records[1]), || format!("instance {i}: backends disagree"))?;
            Ok(records.swap_remove(0))
        })
        .collect()
}

fn criterion_pipeline(suite: &[(Instance, usize, bool)], records: &[String], weighted: bool, s: usize) -> Check {
    let mut count = 0;
    for (i, ((inst, si, w), rec)) in suite.iter().zip(records).enumerate() {
        if *w != weighted || *si != s {
            continue;
        }
        ensure(is_sp1_p4_free(inst.graph(), s), || format!("instance {i} is outside the class"))?;
        let want = common::naive_max_tforest(inst);
        let rec = ResultRecord::from_json(rec).map_err(|e| e.to_string())?;
        ensure(rec.optimum_weight == want.to_string(), || {
            format!("instance {i}: pipeline {} vs brute {want}", rec.optimum_weight)
        })?;
        count += 1;
    }
    Ok(format!("{count}"))
}

fn criterion_audits(pipeline: &AuditSummary) -> Check {
    // part solvers on their own, so that every candidate of every branch is inspected
    let mut total = pipeline.clone();
    for i in 0..300u64 {
        let inst = class_instance(2, 5 + (i as usize % 8), 800_000 + i, WeightMode::Rational);
        let all = inst.graph().vertex_set();
        let out = sfvs_core::part_solvers::two_part_within(&inst, &all, None, true)
            .merge(sfvs_core::part_solvers::three_part_within(&inst, &all, true));
        total.checked += out.stats.audit.checked;
        total.violations += out.stats.audit.violations;
        total.examples.extend(out.stats.audit.examples);
    }
    ensure(total.violations == 0, || format!("{} violations, e.g. {:?}", total.violations, &total.examples[..total.examples.len().min(3)]))?;
    ensure(total.checked > 1000, || format!("only {} candidates audited", total.checked))?;
    Ok(format!("{} certified candidates audited, 0 violations", total.checked))
}

fn criterion_determinism(suite: &[(Instance, usize, bool)], records: &[String], dp_outputs: &[String]) -> Check {
    for threads in [1, 3] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let (again, dp_again) = pool.install(|| -> std::result::Result<_, String> {
            let scratch = Mutex::new(Vec::new());
            criterion_cograph_dp_outputs(&scratch)?;
            criterion_modulator_dp(&scratch)?;
            let recs = run_pipelines(suite, &Mutex::new(AuditSummary::default()))?;
            Ok((recs, scratch.into_inner().unwrap()))
        })?;
        ensure(again == records, || format!("pipeline records differ with {threads} threads"))?;
        ensure(dp_again == dp_outputs, || format!("dp outputs differ with {threads} threads"))?;
    }
    Ok(format!("{} records and {} dp outputs identical with 1 and 3 threads", records.len(), dp_outputs.len()))
}

/// The cograph part of the DP suite without the exhaustive predicate sweep.
fn criterion_cograph_dp_outputs(det: &Mutex<Vec<String>>) -> std::result::Result<(), String> {
    let outputs: Vec<String> = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(300_000 + i);
            let n = rng.gen_range(1..=16);
            let join_p = rng.gen_range(0.2..0.8);
            let tree = random_cotree(&mut rng, n, join_p);
            let tp = rng.gen_range(0.1..0.9);
            let t = random_terminals(&mut rng, n, tp);
            let inst = Instance::new(tree.realize(), t, random_weights(&mut rng, n)).unwrap();
            format!("{:?}", max_tforest_cograph(&tree, &inst).unwrap().forest().to_vec())
        })
        .collect();
    det.lock().unwrap().extend(outputs);
    Ok(())
}

fn criterion_performance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let n = 2000;
    let tree = random_cotree(&mut rng, n, 0.5);
    let t = random_terminals(&mut rng, n, 0.3);
    let inst = Instance::new(tree.realize(), t, random_weights(&mut rng, n)).unwrap();
    let start = Instant::now();
    let sol = max_tforest_cograph(&tree, &inst).map_err(|e| e.to_string())?;
    let dp_time = start.elapsed();
    ensure(sol.is_certified(), || "cograph solution not certified".into())?;
    ensure(dp_time < Duration::from_secs(10), || format!("cograph DP at n = 2000 took {dp_time:?}"))?;

    let (n, m) = (100_000, 300_000);
    let g = gnm(&mut rng, n, m);
    let mut worst = Duration::ZERO;
    for p in [0.0, 0.01, 0.5] {
        let t = random_terminals(&mut rng, n, p);
        let start = Instant::now();
        std::hint::black_box(is_t_forest(&g, &t));
        worst = worst.max(start.elapsed());
    }
    ensure(worst < Duration::from_secs(1), || format!("checker on n = 1e5, m = 3e5 took {worst:?}"))?;
    Ok(format!("cograph DP n = 2000 in {dp_time:.2?}; checker n = 1e5, m = 3e5 in {worst:.2?}"))
}

fn run(id: usize, name: &str, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into()))
    });
    let secs = start.elapsed().as_secs_f64();
    match &result {
        Ok(detail) => println!("PASS  {id}. {name}: {detail} [{secs:.1}s]"),
        Err(why) => println!("FAIL  {id}. {name}: {why} [{secs:.1}s]"),
    }
    result.is_ok()
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        // `cargo test -- --list` probes every test binary
        println!("acceptance: test");
        return;
    }
    let det = Mutex::new(Vec::new());
    let audit = Mutex::new(AuditSummary::default());
    let suite = pipeline_suite();
    let mut ok = vec![
        run(1, "checker equivalence", criterion_checker),
        run(2, "vertex cut exactness", criterion_cut),
        run(3, "cograph DP exactness", || criterion_cograph_dp(&det)),
        run(4, "modulator DP exactness", || criterion_modulator_dp(&det)),
    ];

    let records = run_pipelines(&suite, &audit);
    let (records, pipeline_error) = match records {
        Ok(r) => (r, None),
        Err(e) => (Vec::new(), Some(e)),
    };
    let pipeline_check = |weighted: bool, s: usize| -> Check {
        if let Some(e) = &pipeline_error {
            return Err(e.clone());
        }
        criterion_pipeline(&suite, &records, weighted, s)
    };
    ok.push(run(5, "weighted pipeline vs brute force", || {
        pipeline_check(true, 2).map(|c| format!("{c} (2P1+P4)-free instances, n <= 10, rational weights"))
    }));
    ok.push(run(6, "unweighted pipeline vs brute force", || {
        let a = pipeline_check(false, 2)?;
        let b = pipeline_check(false, 3)?;
        Ok(format!("{a} instances with s = 2 (n <= 10), {b} with s = 3 (n <= 8)"))
    }));
    ok.push(run(7, "structural audits", || criterion_audits(&audit.lock().unwrap())));
    let dp_outputs = det.lock().unwrap().clone();
    ok.push(run(8, "determinism across thread counts", || {
        if let Some(e) = &pipeline_error {
            return Err(e.clone());
        }
        criterion_determinism(&suite, &records, &dp_outputs)
    }));
    ok.push(run(9, "polynomial-behaviour smoke", criterion_performance));

    let passed = ok.iter().filter(|&&x| x).count();
    println!("acceptance: {passed}/{} criteria passed", ok.len());
    if passed != ok.len() {
        std::process::exit(1);
    }
}
