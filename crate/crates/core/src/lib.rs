//! Exact solver for the fuzzy maximal covering location problem.
//!
//! Every parameter (demands, distances, radii, set-up costs and the budget)
//! is a triangular fuzzy number. Because the LU order on triangular numbers
//! is componentwise on their triplets, the fuzzy model is equivalent to a
//! three-objective mixed-binary problem maximizing the served lower,
//! center and upper demand under three budget rows. Pareto solutions come
//! from augmented weighted Tchebycheff scalarizations, each solved to
//! optimality by branch-and-bound over open facility sets.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, the command
//! line and the benchmark harness live in the `fmclp` crate.

#![no_std]

extern crate alloc;

pub mod error;
pub mod fuzzy;
pub mod instance;
pub mod pareto;
pub mod problem;
pub mod solver;

pub use error::{Error, Result};
pub use fuzzy::{Interval, OrderRelation, Tfn};
pub use instance::{
    fuzzify, BudgetMode, CostSpec, CoverageMap, CrispInstance, DemandPoint, Facility,
    FacilityMode, FuzzyInstance, Grid, Provenance,
};
pub use pareto::{
    brute_force_frontier, default_weights, dominates, pareto_test, run_algorithm1,
    CertificationPath, ParetoRun, ParetoTestResult, StepOutcome, WeightTrace,
};
pub use problem::{
    evaluate, Criterion, ObjectiveTriple, Problem, ScalarObjective, Solution, WeightVector,
};
pub use solver::{csp1, cspinf, ideal_point, solve_scalar, NodeLog, SearchStats};
