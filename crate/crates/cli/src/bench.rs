//! Benchmark grid: crisp and fuzzy solves per (instance, budget, seed)
//! cell, reduced into raw and grouped tables.

use std::io;
use std::path::Path;
use std::time::Instant;

use fmclp_core::{
    fuzzify, solve_scalar, BudgetMode, CertificationPath, CostSpec, Criterion, CrispInstance,
    FacilityMode, Problem, ScalarObjective, WeightVector,
};
use rayon::prelude::*;

use crate::frontier;

pub const GROUP_COLUMNS: [&str; 13] = [
    "n",
    "param",
    "cpu_fuzzy_s",
    "cpu_crisp_s",
    "distinct_pareto",
    "check_pareto_pct",
    "reach_ideal_pct",
    "cov_crisp_pct",
    "cov_fuzzy_lo_pct",
    "cov_fuzzy_mid_pct",
    "cov_fuzzy_hi_pct",
    "open_crisp",
    "open_fuzzy",
];

pub const RAW_COLUMNS: [&str; 17] = [
    "instance",
    "n",
    "param",
    "seed",
    "cpu_fuzzy_s",
    "cpu_crisp_s",
    "distinct_pareto",
    "check_pareto_pct",
    "check_pareto_tested_pct",
    "reach_ideal_pct",
    "cov_crisp_pct",
    "cov_fuzzy_lo_pct",
    "cov_fuzzy_mid_pct",
    "cov_fuzzy_hi_pct",
    "open_crisp",
    "open_fuzzy",
    "error",
];

/// How facility costs are drawn in every cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Costs {
    Unit,
    /// Normal(100, 10) draws seeded by the cell seed.
    Normal,
    Explicit(Vec<f64>),
}

impl Costs {
    fn spec(&self, seed: u64) -> CostSpec {
        match self {
            Costs::Unit => CostSpec::Unit,
            Costs::Normal => CostSpec::normal(seed),
            Costs::Explicit(c) => CostSpec::Explicit(c.clone()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// Named point sets; facilities are co-located with the points.
    pub instances: Vec<(String, CrispInstance)>,
    pub radius: f64,
    pub costs: Costs,
    pub budgets: Vec<BudgetMode>,
    pub spread: f64,
    pub seeds: Vec<u64>,
    pub weights: Vec<WeightVector>,
    pub early_stop: bool,
}

/// Sums over one cell's weights, kept unaveraged so groups can pool them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CellStats {
    pub cpu_fuzzy_s: f64,
    pub cpu_crisp_s: f64,
    pub distinct: usize,
    pub weights: usize,
    pub reached: usize,
    pub improved: usize,
    pub tested: usize,
    pub cov_crisp_pct: f64,
    /// Sum over weights of the served triplet as a percentage of the
    /// center total demand.
    pub cov_fuzzy_pct: [f64; 3],
    pub open_crisp: usize,
    pub open_fuzzy: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub instance: String,
    pub n: usize,
    pub budget: BudgetMode,
    pub seed: u64,
    pub outcome: Result<CellStats, String>,
}

pub fn param_label(b: &BudgetMode) -> String {
    match b {
        BudgetMode::Cardinality(p) | BudgetMode::SumSmallest(p) => p.to_string(),
        BudgetMode::Explicit(v) => v.to_string(),
    }
}

fn cell(cfg: &BenchConfig, base: &CrispInstance, budget: BudgetMode, seed: u64) -> Result<CellStats, String> {
    let crisp = base
        .clone()
        .make_facilities(FacilityMode::CoLocated, cfg.radius, cfg.costs.spec(seed))
        .and_then(|c| c.set_budget(budget))
        .map_err(|e| e.to_string())?;
    let crisp_problem = Problem::from_crisp(&crisp).map_err(|e| e.to_string())?;
    let total = crisp.total_demand();
    let pct = |v: f64| if total > 0.0 { 100.0 * v / total } else { 0.0 };

    let t = Instant::now();
    let crisp_sol = solve_scalar(&crisp_problem, &ScalarObjective::Single(Criterion::Center));
    let cpu_crisp_s = t.elapsed().as_secs_f64();

    let fz = fuzzify(&crisp, cfg.spread, seed).map_err(|e| e.to_string())?;
    let problem = Problem::from_fuzzy(&fz).map_err(|e| e.to_string())?;
    let t = Instant::now();
    let run = frontier::run(&problem, &cfg.weights, cfg.early_stop).map_err(|e| e.to_string())?;
    let cpu_fuzzy_s = t.elapsed().as_secs_f64();

    let mut stats = CellStats {
        cpu_fuzzy_s,
        cpu_crisp_s,
        distinct: run.solutions.len(),
        weights: run.trace.len(),
        cov_crisp_pct: pct(crisp_sol.objectives.0[1]),
        open_crisp: crisp_sol.open.len(),
        ..CellStats::default()
    };
    for t in &run.trace {
        let sol = &run.solutions[t.solution];
        stats.reached += t.reached_ideal as usize;
        stats.improved += (t.path == CertificationPath::Improved) as usize;
        stats.tested += matches!(t.path, CertificationPath::Improved | CertificationPath::CheckedZero)
            as usize;
        for (acc, v) in stats.cov_fuzzy_pct.iter_mut().zip(sol.served.triplet()) {
            *acc += pct(v);
        }
        stats.open_fuzzy += sol.open.len();
    }
    Ok(stats)
}

/// Runs every (instance, budget, seed) cell on the current rayon pool.
/// A failing cell records its error and the rest of the grid continues.
pub fn run(cfg: &BenchConfig) -> Vec<CellResult> {
    let mut grid = Vec::new();
    for (name, inst) in &cfg.instances {
        for b in &cfg.budgets {
            for s in &cfg.seeds {
                grid.push((name, inst, *b, *s));
            }
        }
    }
    grid.into_par_iter()
        .map(|(name, inst, budget, seed)| CellResult {
            instance: name.clone(),
            n: inst.points.len(),
            budget,
            seed,
            outcome: cell(cfg, inst, budget, seed),
        })
        .collect()
}

fn ratio(num: f64, den: usize) -> Option<f64> {
    (den > 0).then(|| num / den as f64)
}

fn fmt_opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(String::new, |x| format!("{x:.digits$}"))
}

pub fn raw_rows(cells: &[CellResult]) -> Vec<Vec<String>> {
    cells
        .iter()
        .map(|c| {
            let mut row = vec![
                c.instance.clone(),
                c.n.to_string(),
                param_label(&c.budget),
                c.seed.to_string(),
            ];
            match &c.outcome {
                Ok(s) => {
                    let w = s.weights;
                    row.extend([
                        format!("{:.3}", s.cpu_fuzzy_s),
                        format!("{:.3}", s.cpu_crisp_s),
                        s.distinct.to_string(),
                        fmt_opt(ratio(100.0 * s.improved as f64, w), 4),
                        fmt_opt(ratio(100.0 * s.improved as f64, s.tested), 4),
                        fmt_opt(ratio(100.0 * s.reached as f64, w), 4),
                        format!("{:.4}", s.cov_crisp_pct),
                        fmt_opt(ratio(s.cov_fuzzy_pct[0], w), 4),
                        fmt_opt(ratio(s.cov_fuzzy_pct[1], w), 4),
                        fmt_opt(ratio(s.cov_fuzzy_pct[2], w), 4),
                        s.open_crisp.to_string(),
                        fmt_opt(ratio(s.open_fuzzy as f64, w), 4),
                        String::new(),
                    ]);
                }
                Err(e) => {
                    row.extend(std::iter::repeat_n(String::new(), 12));
                    row.push(e.clone());
                }
            }
            row
        })
        .collect()
}

/// One row per (instance, budget): per-seed quantities averaged over
/// seeds, per-weight quantities over seeds × weights. Failed cells are
/// left out of the averages.
pub fn group_rows(cells: &[CellResult]) -> Vec<Vec<String>> {
    let mut keys: Vec<(&str, usize, String)> = Vec::new();
    for c in cells {
        let key = (c.instance.as_str(), c.n, param_label(&c.budget));
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(inst, n, param)| {
            let ok: Vec<&CellStats> = cells
                .iter()
                .filter(|c| c.instance == inst && param_label(&c.budget) == param)
                .filter_map(|c| c.outcome.as_ref().ok())
                .collect();
            let seeds = ok.len();
            let w: usize = ok.iter().map(|s| s.weights).sum();
            let per_seed = |f: &dyn Fn(&CellStats) -> f64| ratio(ok.iter().map(|s| f(s)).sum(), seeds);
            let per_weight = |f: &dyn Fn(&CellStats) -> f64| ratio(ok.iter().map(|s| f(s)).sum(), w);
            vec![
                n.to_string(),
                param,
                fmt_opt(per_seed(&|s| s.cpu_fuzzy_s), 3),
                fmt_opt(per_seed(&|s| s.cpu_crisp_s), 3),
                fmt_opt(per_seed(&|s| s.distinct as f64), 4),
                fmt_opt(per_weight(&|s| 100.0 * s.improved as f64), 4),
                fmt_opt(per_weight(&|s| 100.0 * s.reached as f64), 4),
                fmt_opt(per_seed(&|s| s.cov_crisp_pct), 4),
                fmt_opt(per_weight(&|s| s.cov_fuzzy_pct[0]), 4),
                fmt_opt(per_weight(&|s| s.cov_fuzzy_pct[1]), 4),
                fmt_opt(per_weight(&|s| s.cov_fuzzy_pct[2]), 4),
                fmt_opt(per_seed(&|s| s.open_crisp as f64), 4),
                fmt_opt(per_weight(&|s| s.open_fuzzy as f64), 4),
            ]
        })
        .collect()
}

pub const GROUPS_FILE: &str = "bench_groups.csv";
pub const RAW_FILE: &str = "bench_raw.csv";

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()
}

/// Writes both tables into `dir`.
pub fn write_tables(dir: &Path, cells: &[CellResult]) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    write_csv(&dir.join(GROUPS_FILE), &GROUP_COLUMNS, &group_rows(cells))?;
    write_csv(&dir.join(RAW_FILE), &RAW_COLUMNS, &raw_rows(cells))
}
