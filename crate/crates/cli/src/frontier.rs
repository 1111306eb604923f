//! Weight loop driver with a parallel path and an enumeration cross-check.

use fmclp_core::pareto::{assemble, weight_step, DELTA_TOL};
use fmclp_core::solver::ideal_point_with;
use fmclp_core::{
    brute_force_frontier, pareto_test, run_algorithm1, Error, ObjectiveTriple, ParetoRun, Problem,
    WeightVector,
};
use rayon::prelude::*;

/// Runs the weight loop. Without early stop the weights are independent
/// once the ideal point is known, so they are solved in parallel; the
/// result is identical to the sequential run.
pub fn run(problem: &Problem, weights: &[WeightVector], early_stop: bool) -> Result<ParetoRun, Error> {
    if early_stop {
        return run_algorithm1(problem, weights, true);
    }
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
    let steps = weights
        .par_iter()
        .map(|w| weight_step(problem, &ideal, *w))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(assemble(weights.to_vec(), ideal.point, steps, false))
}

/// How one emitted solution fares against full enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleCheck {
    /// Its objective vector is a non-dominated feasible vector.
    pub on_frontier: bool,
    /// Largest slack the pareto test found.
    pub delta: f64,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.on_frontier && self.delta <= DELTA_TOL
    }
}

/// Checks every solution of `run` against [`brute_force_frontier`].
pub fn oracle_check(problem: &Problem, run: &ParetoRun, cap: usize) -> Result<Vec<OracleCheck>, Error> {
    let front: Vec<ObjectiveTriple> = brute_force_frontier(problem, cap)?
        .into_iter()
        .map(|s| s.objectives)
        .collect();
    run.solutions
        .iter()
        .map(|s| {
            let test = pareto_test(problem, s)?;
            Ok(OracleCheck {
                on_frontier: front.contains(&s.objectives),
                delta: test.delta.iter().fold(0.0f64, |a, d| a.max(*d)),
            })
        })
        .collect()
}
