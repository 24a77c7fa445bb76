//! `sfvs`: solve, verify, generate and recognize Subset Feedback Vertex Set
//! instances.
//!
//! Exit codes: 0 ok or affirmative, 1 negative or violation, 2 input error,
//! 3 capacity exceeded.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use sfvs_core::checker::is_t_forest;
use sfvs_core::config::{Backend, SolverConfig};
use sfvs_core::cotree::find_induced_sp1_p4;
use sfvs_core::io::{parse_instance, verify_record, write_instance, InstanceFile, ResultRecord, VerifyError};
use sfvs_core::oracle::{generate, gnm, random_cotree, Family, GeneratorSpec, WeightMode};
use sfvs_core::pipeline::{solve_unweighted_sp1p4, solve_weighted_2p1p4};
use sfvs_core::reduced_solver::max_tforest_cograph;
use sfvs_core::{Instance, SfvsError, VertexSet, Weight};

#[derive(Parser)]
#[command(name = "sfvs", version, about = "Exact Subset Feedback Vertex Set on (sP1+P4)-free graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print a JSON result record.
    Solve(SolveArgs),
    /// Check a result record against its instance.
    Verify { instance: PathBuf, result: PathBuf },
    /// Print a generated instance file.
    Gen(GenArgs),
    /// Look for an induced sP1+P4.
    Recognize {
        #[arg(long, default_value_t = 2)]
        s: usize,
        file: PathBuf,
    },
    /// Run a fixed benchmark suite and print one JSON line per case.
    Bench {
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(clap::Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, conflicts_with = "unweighted")]
    weighted: bool,
    /// Maximise the number of kept vertices; any weights in the file are
    /// replaced by one.
    #[arg(long)]
    unweighted: bool,
    /// Pattern parameter for the unweighted solver.
    #[arg(long, default_value_t = 2)]
    s: usize,
    #[arg(long)]
    backend: Option<Backend>,
    /// Always check the input against the graph class.
    #[arg(long, conflicts_with = "no_validate_class")]
    validate_class: bool,
    #[arg(long)]
    no_validate_class: bool,
    /// Run structural audits on every certified candidate.
    #[arg(long)]
    audit: bool,
    #[arg(long)]
    threads: Option<usize>,
    /// TOML solver configuration; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Add per-phase wall-clock times to the record.
    #[arg(long)]
    timings: bool,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long)]
    family: Family,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 0.4)]
    p: f64,
    #[arg(long, default_value_t = 0.4)]
    terminal_p: f64,
    #[arg(long, default_value_t = 2)]
    s: usize,
    #[arg(long, default_value_t = 2)]
    modulator: usize,
    #[arg(long, value_enum, default_value_t = Weights::Unit)]
    weights: Weights,
}

#[derive(Clone, Copy, ValueEnum)]
enum Weights {
    Unit,
    Rational,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Cograph,
    Checker,
    Pipeline,
}

/// `println!` that stops quietly when the reader has gone away.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

/// A failure with its exit code.
struct Failure(u8, String);

impl From<SfvsError> for Failure {
    fn from(e: SfvsError) -> Self {
        let code = match e {
            SfvsError::Capacity { .. } => 3,
            _ => 2,
        };
        Failure(code, e.to_string())
    }
}

fn read_instance(path: &Path) -> Result<InstanceFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(2, format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| Failure(2, format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => solve(args),
        Command::Verify { instance, result } => verify(&instance, &result),
        Command::Gen(args) => gen(args),
        Command::Recognize { s, file } => recognize(s, &file),
        Command::Bench { suite, seed } => bench(suite, seed),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn solve(args: SolveArgs) -> Result<u8, Failure> {
    let start = Instant::now();
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure(2, format!("{}: {e}", path.display())))?;
            SolverConfig::from_toml(&text).map_err(|e| Failure(2, format!("{}: {e}", path.display())))?
        }
        None => SolverConfig::default(),
    };
    if let Some(b) = args.backend {
        cfg.reduced_solver.backend = b;
    }
    if args.validate_class {
        cfg.validate_class = Some(true);
    }
    if args.no_validate_class {
        cfg.validate_class = Some(false);
    }
    cfg.audit |= args.audit;

    let file = read_instance(&args.file)?;
    let parsed = start.elapsed();
    let mut inst = file.instance;
    if args.unweighted && !inst.is_unit_weighted() {
        log::warn!("--unweighted: replacing the weights in {} by one", args.file.display());
        inst = inst.with_unit_weights();
    }

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = args.threads {
        pool = pool.num_threads(t);
    }
    let pool = pool.build().map_err(|e| Failure(2, e.to_string()))?;
    let k = file.threshold.as_ref();
    let report = pool.install(|| {
        if args.unweighted {
            solve_unweighted_sp1p4(&inst, args.s, &cfg, k)
        } else {
            solve_weighted_2p1p4(&inst, &cfg, k)
        }
    })?;
    let mut record = ResultRecord::from_report(&inst, &report);
    if args.timings {
        let ms = |d: std::time::Duration| d.as_secs_f64() * 1e3;
        record.timings = Some(BTreeMap::from([
            ("parse_ms".to_string(), ms(parsed)),
            ("solve_ms".to_string(), ms(start.elapsed() - parsed)),
        ]));
    }
    out!("{}", record.to_json());
    Ok(0)
}

fn verify(instance: &Path, result: &Path) -> Result<u8, Failure> {
    let file = read_instance(instance)?;
    let text = std::fs::read_to_string(result).map_err(|e| Failure(2, format!("{}: {e}", result.display())))?;
    let record = ResultRecord::from_json(&text).map_err(|e| Failure(2, format!("{}: {e}", result.display())))?;
    match verify_record(&file, &record) {
        Ok(()) => {
            out!("ok");
            Ok(0)
        }
        Err(VerifyError::Violation(msg)) => {
            out!("violation: {msg}");
            Ok(1)
        }
        Err(VerifyError::Mismatch(msg)) => Err(Failure(2, msg)),
    }
}

fn gen(args: GenArgs) -> Result<u8, Failure> {
    let mut spec = GeneratorSpec::new(args.family, args.n, args.seed);
    spec.p = args.p;
    spec.terminal_p = args.terminal_p;
    spec.s = args.s;
    spec.modulator = args.modulator;
    spec.weights = match args.weights {
        Weights::Unit => WeightMode::Unit,
        Weights::Rational => WeightMode::Rational,
    };
    let inst = generate(&spec)?;
    out!("c {} n={} seed={}\n{}", args.family.name(), args.n, args.seed, write_instance(&inst, None).trim_end());
    Ok(0)
}

fn recognize(s: usize, path: &Path) -> Result<u8, Failure> {
    let inst = read_instance(path)?.instance;
    match find_induced_sp1_p4(inst.graph(), s) {
        None => {
            out!("free");
            Ok(0)
        }
        Some(w) => {
            let ids: Vec<String> = w.vertices.iter().map(|v| (v + 1).to_string()).collect();
            out!("{}", ids.join(" "));
            Ok(1)
        }
    }
}

#[derive(Serialize)]
struct BenchLine {
    suite: &'static str,
    n: usize,
    m: usize,
    ms: f64,
    result: String,
}

fn bench(suite: Suite, seed: u64) -> Result<u8, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let emit = |suite, n, m, start: Instant, result: String| {
        let line = BenchLine { suite, n, m, ms: start.elapsed().as_secs_f64() * 1e3, result };
        out!("{}", serde_json::to_string(&line).expect("bench lines serialize"));
    };
    match suite {
        Suite::Cograph => {
            for n in [250, 500, 1000, 2000] {
                let cotree = random_cotree(&mut rng, n, 0.5);
                let g = cotree.realize();
                let t = VertexSet::from_iter_with_capacity(n, (0..n).filter(|_| rng.gen_bool(0.3)));
                let w = (0..n).map(|_| Weight::new(rng.gen_range(1..10), rng.gen_range(1..6))).collect();
                let m = g.m();
                let inst = Instance::new(g, t, w)?;
                let start = Instant::now();
                let sol = max_tforest_cograph(&cotree, &inst)?;
                emit("cograph", n, m, start, sol.weight().to_string());
            }
        }
        Suite::Checker => {
            let (n, m) = (100_000, 300_000);
            let g = gnm(&mut rng, n, m);
            let t = VertexSet::from_iter_with_capacity(n, (0..n).filter(|_| rng.gen_bool(0.01)));
            let start = Instant::now();
            let ok = is_t_forest(&g, &t);
            emit("checker", n, m, start, ok.to_string());
        }
        Suite::Pipeline => {
            for i in 0..20 {
                let mut spec = GeneratorSpec::new(Family::Sp1p4FreeFiltered, 10, seed.wrapping_add(i));
                spec.weights = WeightMode::Rational;
                let inst = generate(&spec)?;
                let start = Instant::now();
                let report = solve_weighted_2p1p4(&inst, &SolverConfig::default(), None)?;
                emit("pipeline", inst.n(), inst.graph().m(), start, report.best.weight().to_string());
            }
        }
    }
    Ok(0)
}
