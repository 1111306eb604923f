//! Pareto solutions through the augmented weighted Tchebycheff method.
//!
//! [`run_algorithm1`] computes the ideal point, then solves one
//! Tchebycheff scalarization per weight vector. Strictly positive weights
//! yield Pareto solutions directly. Any other weight only guarantees weak
//! Pareto optimality, so the solution goes through [`pareto_test`], which
//! either certifies it or replaces it with a dominating Pareto solution.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::problem::{evaluate, ObjectiveTriple, Problem, ScalarObjective, Solution, WeightVector};
use crate::solver::{self, ideal_point_with, Ideal};

/// Default cap on facilities for [`brute_force_frontier`].
pub const DEFAULT_ORACLE_CAP: usize = 20;

/// Absolute tolerance when matching a solution against the ideal point.
pub const IDEAL_TOL: f64 = 1e-9;

/// Slack below which a pareto-test improvement counts as zero.
pub const DELTA_TOL: f64 = 1e-9;

/// `a >= b` componentwise with `a != b`.
pub fn dominates(a: &ObjectiveTriple, b: &ObjectiveTriple) -> bool {
    a.dominates(b)
}

/// The nine weight vectors `(λ₁, λ₂, λ₃, ρ)` of the experiment protocol.
pub fn default_weights() -> Vec<WeightVector> {
    const RAW: [[f64; 4]; 9] = [
        [0.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [1.0, 1.0, 1.0, 0.001],
        [1.0, 1.0, 1.0, 0.0],
        [1.0, 1.0, 0.0, 0.001],
        [1.0, 0.0, 1.0, 0.001],
        [0.0, 1.0, 1.0, 0.001],
    ];
    RAW.iter()
        .map(|w| WeightVector {
            lambda: [w[0], w[1], w[2]],
            rho: w[3],
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParetoTestResult {
    /// `F(S*) - F(candidate)`.
    pub delta: [f64; 3],
    /// A dominating Pareto solution, when some `δ_r > 0`.
    pub improved: Option<Solution>,
}

impl ParetoTestResult {
    pub fn is_certified(&self) -> bool {
        self.improved.is_none()
    }
}

/// Maximizes `Σ δ_r` over feasible open sets with `F(S) = F(candidate) + δ`,
/// `δ >= 0`. A zero optimum certifies the candidate as Pareto; otherwise
/// the maximizer is itself Pareto and dominates the candidate.
pub fn pareto_test(problem: &Problem, candidate: &Solution) -> Result<ParetoTestResult> {
    let fresh = evaluate(problem, &candidate.open)?;
    if !fresh.feasible {
        return Err(Error::InfeasibleCandidate(format!(
            "open set {:?} violates the budget",
            candidate.open
        )));
    }
    if fresh.z != candidate.z || fresh.objectives != candidate.objectives {
        return Err(Error::InfeasibleCandidate(
            "coverage or objectives do not match the open set".into(),
        ));
    }
    let best = solver::maximize_dominating(problem, fresh.objectives, &fresh.open);
    let f = &fresh.objectives.0;
    let delta = [
        best.objectives.0[0] - f[0],
        best.objectives.0[1] - f[1],
        best.objectives.0[2] - f[2],
    ];
    let improved = delta.iter().any(|d| *d > DELTA_TOL).then_some(best);
    Ok(ParetoTestResult { delta, improved })
}

/// How a stored solution was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CertificationPath {
    /// The scalarization attained the ideal point.
    Ideal,
    /// Strictly positive weights; Pareto by construction.
    Direct,
    /// The pareto test returned `δ = 0`.
    CheckedZero,
    /// The pareto test returned a dominating solution, stored instead.
    Improved,
}

impl CertificationPath {
    pub fn label(self) -> &'static str {
        match self {
            CertificationPath::Ideal => "ideal",
            CertificationPath::Direct => "direct",
            CertificationPath::CheckedZero => "checked-d0",
            CertificationPath::Improved => "improved",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        [Self::Ideal, Self::Direct, Self::CheckedZero, Self::Improved]
            .into_iter()
            .find(|p| p.label() == s)
    }
}

/// Outcome of one weight vector, before deduplication.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub weights: WeightVector,
    /// Solution of the scalarization itself.
    pub scalarized: Solution,
    /// Solution stored in the Pareto set.
    pub stored: Solution,
    pub path: CertificationPath,
    pub reached_ideal: bool,
}

impl StepOutcome {
    pub fn tested(&self) -> bool {
        matches!(
            self.path,
            CertificationPath::CheckedZero | CertificationPath::Improved
        )
    }
}

/// Solves one Tchebycheff scalarization and certifies its solution.
pub fn weight_step(problem: &Problem, ideal: &Ideal, weights: WeightVector) -> Result<StepOutcome> {
    let hints: Vec<Vec<usize>> = ideal.optimizers.iter().map(|s| s.open.clone()).collect();
    let objective = ScalarObjective::AugTcheby {
        weights,
        ideal: ideal.point,
    };
    let (scalarized, _) = solver::solve_scalar_with(problem, &objective, &hints, &mut ());
    let reached_ideal = scalarized.objectives.approx_eq(&ideal.point, IDEAL_TOL);
    let (stored, path) = if reached_ideal {
        (scalarized.clone(), CertificationPath::Ideal)
    } else if weights.is_strictly_positive() {
        (scalarized.clone(), CertificationPath::Direct)
    } else {
        match pareto_test(problem, &scalarized)?.improved {
            Some(better) => (better, CertificationPath::Improved),
            None => (scalarized.clone(), CertificationPath::CheckedZero),
        }
    };
    Ok(StepOutcome {
        weights,
        scalarized,
        stored,
        path,
        reached_ideal,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightTrace {
    pub weights: WeightVector,
    /// Index into [`ParetoRun::solutions`].
    pub solution: usize,
    pub reached_ideal: bool,
    pub path: CertificationPath,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParetoRun {
    pub weights: Vec<WeightVector>,
    pub ideal: ObjectiveTriple,
    /// Distinct Pareto solutions, keyed by open set, in discovery order.
    pub solutions: Vec<Solution>,
    /// One entry per processed weight; shorter than `weights` after an
    /// early stop.
    pub trace: Vec<WeightTrace>,
    pub stopped_early: bool,
}

impl ParetoRun {
    pub fn reached_ideal(&self) -> bool {
        self.trace.iter().any(|t| t.reached_ideal)
    }

    /// Whether any pareto test replaced its candidate.
    pub fn improved_any(&self) -> bool {
        self.trace
            .iter()
            .any(|t| t.path == CertificationPath::Improved)
    }
}

/// Collects step outcomes into a run, deduplicating by open set.
pub fn assemble(weights: Vec<WeightVector>, ideal: ObjectiveTriple, steps: Vec<StepOutcome>, stopped_early: bool) -> ParetoRun {
    let mut solutions: Vec<Solution> = Vec::new();
    let mut trace = Vec::with_capacity(steps.len());
    for step in steps {
        let idx = match solutions.iter().position(|s| s.open == step.stored.open) {
            Some(k) => k,
            None => {
                solutions.push(step.stored);
                solutions.len() - 1
            }
        };
        trace.push(WeightTrace {
            weights: step.weights,
            solution: idx,
            reached_ideal: step.reached_ideal,
            path: step.path,
        });
    }
    ParetoRun {
        weights,
        ideal,
        solutions,
        trace,
        stopped_early,
    }
}

/// Ideal point, then one certified solution per weight vector in order.
///
/// With `early_stop`, the loop ends at the first solution attaining the
/// ideal point.
pub fn run_algorithm1(problem: &Problem, weights: &[WeightVector], early_stop: bool) -> Result<ParetoRun> {
    if weights.is_empty() {
        return Err(Error::EmptyWeightSet);
    }
    if let Some(w) = weights
        .iter()
        .find(|w| w.components().iter().any(|c| !(*c >= 0.0)))
    {
        return Err(Error::DomainViolation(format!("negative weight vector {w}")));
    }
    let ideal = ideal_point_with(problem, &mut ());
    let mut steps = Vec::with_capacity(weights.len());
    let mut stopped_early = false;
    for (k, w) in weights.iter().enumerate() {
        let step = weight_step(problem, &ideal, *w)?;
        let reached = step.reached_ideal;
        steps.push(step);
        if reached && early_stop {
            stopped_early = k + 1 < weights.len();
            break;
        }
    }
    Ok(assemble(weights.to_vec(), ideal.point, steps, stopped_early))
}

/// Every budget-feasible open set whose objectives no other feasible set
/// dominates, in lexicographic order of the open set.
pub fn brute_force_frontier(problem: &Problem, cap: usize) -> Result<Vec<Solution>> {
    let m = problem.num_facilities();
    if m > cap || m >= usize::BITS as usize {
        return Err(Error::TooLarge { facilities: m, cap });
    }
    let mut feasible = Vec::new();
    for mask in 0u64..(1u64 << m) {
        let open: Vec<usize> = (0..m).filter(|j| mask >> j & 1 == 1).collect();
        if problem.is_budget_feasible(&open) {
            feasible.push(evaluate(problem, &open)?);
        }
    }
    // Sweep distinct objective vectors in decreasing lexicographic order;
    // anything that dominates a vector comes before it.
    let mut values: Vec<ObjectiveTriple> = feasible.iter().map(|s| s.objectives).collect();
    values.sort_by(|a, b| {
        b.0.iter()
            .zip(&a.0)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    values.dedup();
    let mut front: Vec<ObjectiveTriple> = Vec::new();
    for v in values {
        if !front.iter().any(|f| f.dominates(&v)) {
            front.push(v);
        }
    }
    let mut out: Vec<Solution> = feasible
        .into_iter()
        .filter(|s| front.contains(&s.objectives))
        .collect();
    out.sort_by(|a, b| a.open.cmp(&b.open));
    Ok(out)
}
