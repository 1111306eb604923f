use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use fmclp_core::solver::{ideal_point_with, solve_scalar_with};
use fmclp_core::{
    default_weights, BudgetMode, Criterion, Problem, ScalarObjective, Solution, WeightVector,
};

use fmclp::bench::{self, BenchConfig, Costs};
use fmclp::canonical::{self, parse_budget_mode, SolutionRecord};
use fmclp::input::{self, Format, Setup};
use fmclp::{frontier, verify, FormatError};

#[derive(Parser)]
#[command(name = "fmclp", version, about = "Exact solver for the fuzzy maximal covering location problem")]
struct Cli {
    /// Worker threads for parallel work (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Print one line per search node (depth, bound, incumbent) to stderr.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a fuzzified instance per seed.
    Fuzzify(FuzzifyArgs),
    /// Solve one scalarization.
    Solve(SolveArgs),
    /// Run the weight loop and list the certified Pareto solutions.
    Frontier(FrontierArgs),
    /// Run a benchmark grid and write raw and grouped tables.
    Bench(BenchArgs),
    /// Cross-check the solver against exhaustive enumeration.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Point file, canonical instance file, or `standin:N[:SEED]`.
    #[arg(long)]
    input: String,
    /// auto, plain or canonical.
    #[arg(long, default_value = "auto")]
    format: Format,
    /// Coverage radius; builds one facility per point.
    #[arg(long)]
    radius: Option<f64>,
    /// unit, normal, normal:SEED or file:PATH.
    #[arg(long)]
    costs: Option<String>,
    /// card:P, smallest:P or value:B.
    #[arg(long, value_parser = parse_budget_mode)]
    budget: Option<BudgetMode>,
}

impl InputArgs {
    fn setup(&self, seed: u64) -> Result<Setup, FormatError> {
        Ok(Setup {
            radius: self.radius,
            costs: self
                .costs
                .as_deref()
                .map(|c| input::parse_costs(c, seed))
                .transpose()?,
            budget: self.budget,
        })
    }
}

#[derive(Args)]
struct FuzzifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Relative spread of the triangular numbers, in (0, 1].
    #[arg(long, value_parser = parse_spread)]
    spread: f64,
    /// Seeds, comma separated; one file each.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    seed: Vec<u64>,
    /// Output directory (default: $FMCLP_OUT_DIR or the current directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    /// crisp, single:R, csp1, cspinf or tcheby:L1,L2,L3,RHO.
    #[arg(long, default_value = "crisp")]
    mode: String,
    /// Fuzzify a crisp input with this spread; without it the crisp data is
    /// embedded as degenerate triangular numbers.
    #[arg(long, value_parser = parse_spread)]
    spread: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Solution file (default: solution.fmclp in the output directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FrontierArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_parser = parse_spread)]
    spread: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Weight vector L1,L2,L3,RHO; repeat for several (default: the nine
    /// standard vectors).
    #[arg(long = "weight", value_parser = parse_weight)]
    weights: Vec<WeightVector>,
    /// Keep going after a solution reaches the ideal point.
    #[arg(long)]
    no_early_stop: bool,
    /// Check every solution against the enumerated frontier.
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = fmclp_core::pareto::DEFAULT_ORACLE_CAP)]
    oracle_cap: usize,
    /// Run file (default: frontier.fmclp in the output directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Point sets (files or `standin:N[:SEED]`); repeat for several.
    #[arg(long, required = true)]
    input: Vec<String>,
    #[arg(long, default_value = "auto")]
    format: Format,
    #[arg(long)]
    radius: f64,
    /// unit, normal (seeded per cell) or file:PATH.
    #[arg(long, default_value = "unit")]
    costs: String,
    /// Budget kind and parameter list, e.g. card:2,3,4 or smallest:5,10.
    #[arg(long, default_value = "card:2,3,4,5,6,7,8,9,10,15,20")]
    budget: String,
    #[arg(long, default_value_t = 0.2, value_parser = parse_spread)]
    spread: f64,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    seeds: Vec<u64>,
    /// Stop each weight loop at the first solution reaching the ideal.
    #[arg(long)]
    early_stop: bool,
    /// Output directory (default: $FMCLP_OUT_DIR or the current directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_parser = parse_spread)]
    spread: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = fmclp_core::pareto::DEFAULT_ORACLE_CAP)]
    oracle_cap: usize,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

fn parse_spread(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(format!("spread must lie in (0, 1], got {v}"))
    }
}

fn parse_weight(s: &str) -> Result<WeightVector, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("bad weight component {t:?}")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        [a, b, c, r] => WeightVector::new(*a, *b, *c, *r).map_err(|e| e.to_string()),
        _ => Err(format!("expected L1,L2,L3,RHO, got {s:?}")),
    }
}

enum Mode {
    Crisp,
    Scalar(String, Objective),
}

enum Objective {
    Single(Criterion),
    Weights(WeightVector),
}

fn parse_mode(s: &str) -> Result<Mode, FormatError> {
    let bad = || FormatError::Config(format!("unknown mode {s:?}"));
    Ok(match s.split_once(':') {
        None if s == "crisp" => Mode::Crisp,
        None if s == "csp1" => Mode::Scalar(s.into(), Objective::Weights(WeightVector { lambda: [0.0; 3], rho: 1.0 })),
        None if s == "cspinf" => Mode::Scalar(s.into(), Objective::Weights(WeightVector { lambda: [1.0; 3], rho: 0.0 })),
        Some(("single", r)) => {
            let r = r.parse().ok().and_then(Criterion::from_number).ok_or_else(bad)?;
            Mode::Scalar(s.into(), Objective::Single(r))
        }
        Some(("tcheby", w)) => Mode::Scalar(s.into(), Objective::Weights(parse_weight(w).map_err(FormatError::Config)?)),
        _ => return Err(bad()),
    })
}

fn out_dir() -> PathBuf {
    std::env::var_os("FMCLP_OUT_DIR").map_or_else(|| PathBuf::from("."), PathBuf::from)
}

fn out_file(explicit: Option<PathBuf>, name: &str) -> io::Result<PathBuf> {
    let path = explicit.unwrap_or_else(|| out_dir().join(name));
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    Ok(path)
}

fn stderr_log(depth: usize, bound: f64, incumbent: f64) {
    eprintln!("node depth {depth} bound {bound} incumbent {incumbent}");
}

fn pct(v: f64, total: f64) -> f64 {
    if total > 0.0 {
        100.0 * v / total
    } else {
        0.0
    }
}

fn summarize(label: &str, sol: &Solution, problem: &Problem, wall: f64) {
    let total = problem.total_demand().triplet();
    let f = sol.objectives.0;
    println!("mode       {label}");
    println!("open       {:?} ({} facilities)", sol.open, sol.open.len());
    println!("covered    {} of {} points", sol.covered_points(), sol.z.len());
    println!("objectives {}", sol.objectives);
    println!("served     {}", sol.served);
    println!(
        "coverage   {:.2}% / {:.2}% / {:.2}%",
        pct(f[0], total[0]),
        pct(f[1], total[1]),
        pct(f[2], total[2])
    );
    println!("scalar     {}", sol.scalar_value);
    println!("feasible   {}", sol.feasible);
    println!("wall       {wall:.3} s");
}

fn cmd_fuzzify(a: FuzzifyArgs) -> Result<(), FormatError> {
    let dir = a.out.unwrap_or_else(out_dir);
    fs::create_dir_all(&dir)?;
    let source = input::read_source(&a.input.input, a.input.format)?;
    let stem = Path::new(&a.input.input)
        .file_stem()
        .map_or_else(|| "instance".to_string(), |s| s.to_string_lossy().replace(':', "-"));
    let first = *a.seed.first().unwrap_or(&1);
    let crisp = input::crisp_of(source, &a.input.setup(first)?)?;
    for seed in a.seed {
        let fz = fmclp_core::fuzzify(&crisp, a.spread, seed)?;
        let path = dir.join(format!("{stem}-s{seed}.fmclp"));
        fs::write(&path, canonical::write_fuzzy(&fz))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_solve(a: SolveArgs, verbose: bool) -> Result<(), FormatError> {
    let mode = parse_mode(&a.mode)?;
    let source = input::read_source(&a.input.input, a.input.format)?;
    let setup = a.input.setup(a.seed)?;
    let mut quiet = ();
    let mut loud = stderr_log;
    let log: &mut dyn fmclp_core::NodeLog = if verbose { &mut loud } else { &mut quiet };
    let (label, problem, objective) = match mode {
        Mode::Crisp => {
            if a.spread.is_some() {
                return Err(FormatError::Config("crisp mode takes no --spread".into()));
            }
            let crisp = input::crisp_of(source, &setup)?;
            let p = Problem::from_crisp(&crisp)?;
            ("crisp".to_string(), p, ScalarObjective::Single(Criterion::Center))
        }
        Mode::Scalar(label, obj) => {
            let fz = input::prepare_fuzzy(source, &setup, a.spread, a.seed)?;
            let p = Problem::from_fuzzy(&fz)?;
            let objective = match obj {
                Objective::Single(r) => ScalarObjective::Single(r),
                Objective::Weights(weights) => {
                    let ideal = ideal_point_with(&p, log).point;
                    ScalarObjective::AugTcheby { weights, ideal }
                }
            };
            (label, p, objective)
        }
    };
    let t = Instant::now();
    let (sol, stats) = solve_scalar_with(&problem, &objective, &[], log);
    let wall = t.elapsed().as_secs_f64();
    let path = out_file(a.out, "solution.fmclp")?;
    let rec = SolutionRecord {
        solution: sol,
        objective: label.clone(),
        wall_s: Some(wall),
    };
    fs::write(&path, canonical::write_solution(&rec))?;
    summarize(&label, &rec.solution, &problem, wall);
    println!("nodes      {}", stats.nodes);
    println!("written    {}", path.display());
    Ok(())
}

fn cmd_frontier(a: FrontierArgs) -> Result<(), FormatError> {
    let source = input::read_source(&a.input.input, a.input.format)?;
    let fz = input::prepare_fuzzy(source, &a.input.setup(a.seed)?, a.spread, a.seed)?;
    let problem = Problem::from_fuzzy(&fz)?;
    let weights = if a.weights.is_empty() {
        default_weights()
    } else {
        a.weights
    };
    let t = Instant::now();
    let run = frontier::run(&problem, &weights, !a.no_early_stop)?;
    let wall = t.elapsed().as_secs_f64();
    let checks = if a.oracle {
        Some(frontier::oracle_check(&problem, &run, a.oracle_cap)?)
    } else {
        None
    };
    let path = out_file(a.out, "frontier.fmclp")?;
    fs::write(&path, canonical::write_run(&run))?;

    let total = problem.total_demand().mid();
    let mut out = io::stdout().lock();
    writeln!(out, "ideal {}", run.ideal)?;
    write!(out, "{:>3}  {:<28} {:<48} {:>22}  paths", "#", "open", "served", "coverage % (lo/mid/hi)")?;
    if checks.is_some() {
        write!(out, "  oracle")?;
    }
    writeln!(out)?;
    for (k, sol) in run.solutions.iter().enumerate() {
        let mut paths: Vec<&str> = run
            .trace
            .iter()
            .filter(|t| t.solution == k)
            .map(|t| t.path.label())
            .collect();
        paths.dedup();
        let [lo, mid, hi] = sol.served.triplet();
        write!(
            out,
            "{k:>3}  {:<28} {:<48} {:>6.2}/{:>6.2}/{:>6.2}  {}",
            format!("{:?}", sol.open),
            sol.served.to_string(),
            pct(lo, total),
            pct(mid, total),
            pct(hi, total),
            paths.join(",")
        )?;
        if let Some(c) = &checks {
            write!(out, "  {}", if c[k].passed() { "verified" } else { "FAILED" })?;
        }
        writeln!(out)?;
    }
    writeln!(
        out,
        "weights {} processed {} stopped-early {} reach-ideal {}",
        run.weights.len(),
        run.trace.len(),
        run.stopped_early,
        if run.reached_ideal() { "yes" } else { "no" }
    )?;
    writeln!(out, "wall {wall:.3} s")?;
    writeln!(out, "written {}", path.display())?;
    if let Some(c) = checks {
        if c.iter().any(|c| !c.passed()) {
            return Err(FormatError::Incomplete("oracle check failed".into()));
        }
    }
    Ok(())
}

fn parse_bench_budgets(s: &str) -> Result<Vec<BudgetMode>, FormatError> {
    let bad = |m: String| FormatError::Config(format!("--budget {s:?}: {m}"));
    let (kind, list) = s.split_once(':').ok_or_else(|| bad("expected KIND:LIST".into()))?;
    list.split(',')
        .map(|v| parse_budget_mode(&format!("{kind}:{}", v.trim())).map_err(bad))
        .collect()
}

fn cmd_bench(a: BenchArgs) -> Result<(), FormatError> {
    let costs = match a.costs.as_str() {
        "unit" => Costs::Unit,
        "normal" => Costs::Normal,
        other => match input::parse_costs(other, 0)? {
            fmclp_core::CostSpec::Explicit(c) => Costs::Explicit(c),
            _ => return Err(FormatError::Config(format!("unknown cost mode {other:?}"))),
        },
    };
    let mut instances = Vec::new();
    for name in &a.input {
        let inst = match input::read_source(name, a.format)? {
            canonical::Instance::Crisp(c) => c,
            canonical::Instance::Fuzzy(f) => f.center,
        };
        instances.push((name.clone(), inst));
    }
    let cfg = BenchConfig {
        instances,
        radius: a.radius,
        costs,
        budgets: parse_bench_budgets(&a.budget)?,
        spread: a.spread,
        seeds: a.seeds,
        weights: default_weights(),
        early_stop: a.early_stop,
    };
    let cells = bench::run(&cfg);
    let dir = a.out.unwrap_or_else(out_dir);
    bench::write_tables(&dir, &cells)?;
    let mut w = csv::WriterBuilder::new().delimiter(b'\t').from_writer(io::stdout());
    w.write_record(bench::GROUP_COLUMNS).map_err(io::Error::from)?;
    for r in bench::group_rows(&cells) {
        w.write_record(&r).map_err(io::Error::from)?;
    }
    w.flush()?;
    let failed: Vec<_> = cells.iter().filter(|c| c.outcome.is_err()).collect();
    for c in &failed {
        eprintln!(
            "cell {} p={} seed={}: {}",
            c.instance,
            bench::param_label(&c.budget),
            c.seed,
            c.outcome.as_ref().unwrap_err()
        );
    }
    println!("tables written to {}", dir.display());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(FormatError::Incomplete(format!("{} cells failed", failed.len())))
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<(), FormatError> {
    let source = input::read_source(&a.input.input, a.input.format)?;
    let fz = input::prepare_fuzzy(source, &a.input.setup(a.seed)?, a.spread, a.seed)?;
    let problem = Problem::from_fuzzy(&fz)?;
    let checks = verify::verify(&problem, a.oracle_cap, a.tol)?;
    let mut failed = 0;
    for c in &checks {
        println!("{} {:<40} {}", if c.ok { "ok  " } else { "FAIL" }, c.name, c.detail);
        failed += !c.ok as usize;
    }
    println!("{} checks, {failed} failed", checks.len());
    if failed == 0 {
        Ok(())
    } else {
        Err(FormatError::Incomplete(format!("{failed} checks failed")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Fuzzify(a) => cmd_fuzzify(a),
        Command::Solve(a) => cmd_solve(a, cli.verbose),
        Command::Frontier(a) => cmd_frontier(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ FormatError::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
