//! Cross-checks a problem against exhaustive enumeration.

use fmclp_core::{
    default_weights, evaluate, ideal_point, solve_scalar, Criterion, Error, Problem,
    ScalarObjective, WeightVector,
};

use crate::frontier;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

/// Scalar objectives exercised by [`verify`], with display names.
pub fn objectives(problem: &Problem) -> Vec<(String, ScalarObjective)> {
    let mut out: Vec<(String, ScalarObjective)> = Criterion::ALL
        .iter()
        .map(|r| (format!("single:{}", r.number()), ScalarObjective::Single(*r)))
        .collect();
    let ideal = ideal_point(problem);
    let named = [
        ("csp1".to_string(), WeightVector { lambda: [0.0; 3], rho: 1.0 }),
        ("cspinf".to_string(), WeightVector { lambda: [1.0; 3], rho: 0.0 }),
    ];
    let weighted = default_weights()
        .into_iter()
        .map(|w| (format!("tcheby:{w}"), w));
    for (name, weights) in named.into_iter().chain(weighted) {
        out.push((name, ScalarObjective::AugTcheby { weights, ideal }));
    }
    out
}

fn scalar(objective: &ScalarObjective, f: &fmclp_core::ObjectiveTriple) -> f64 {
    match objective {
        ScalarObjective::Single(r) => f.get(*r),
        // Negated so that larger is better throughout.
        ScalarObjective::AugTcheby { weights, ideal } => -weights.tchebycheff(ideal, f),
    }
}

/// Best scalar value over all feasible open sets, larger is better.
fn enumerate(problem: &Problem, objective: &ScalarObjective, cap: usize) -> Result<f64, Error> {
    let m = problem.num_facilities();
    if m > cap {
        return Err(Error::TooLarge { facilities: m, cap });
    }
    let mut best = f64::NEG_INFINITY;
    for mask in 0u64..(1u64 << m) {
        let open: Vec<usize> = (0..m).filter(|j| mask >> j & 1 == 1).collect();
        if problem.is_budget_feasible(&open) {
            let sol = evaluate(problem, &open)?;
            best = best.max(scalar(objective, &sol.objectives));
        }
    }
    Ok(best)
}

/// Compares every scalar solve with enumeration, checks each returned
/// coverage vector against the open set, and checks the default weight
/// run against the enumerated frontier.
pub fn verify(problem: &Problem, cap: usize, tol: f64) -> Result<Vec<Check>, Error> {
    let mut checks = Vec::new();
    for (name, objective) in objectives(problem) {
        let sol = solve_scalar(problem, &objective);
        let got = scalar(&objective, &sol.objectives);
        let want = enumerate(problem, &objective, cap)?;
        let fresh = evaluate(problem, &sol.open)?;
        checks.push(Check {
            ok: (got - want).abs() <= tol && fresh.z == sol.z && sol.feasible,
            detail: format!("solver {got} enumeration {want} open {:?}", sol.open),
            name,
        });
    }
    let run = frontier::run(problem, &default_weights(), false)?;
    let oracle = frontier::oracle_check(problem, &run, cap)?;
    for (k, (sol, c)) in run.solutions.iter().zip(oracle).enumerate() {
        checks.push(Check {
            name: format!("frontier solution {k}"),
            ok: c.passed(),
            detail: format!(
                "open {:?} F {} on frontier {} delta {}",
                sol.open, sol.objectives, c.on_frontier, c.delta
            ),
        });
    }
    Ok(checks)
}
