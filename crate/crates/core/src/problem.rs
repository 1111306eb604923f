//! The three-objective mixed-binary model and its solutions.
//!
//! Once the open set `S` is fixed, every coverage variable is forced:
//! `z_i = 1` exactly when some open facility covers `i`. Objectives are the
//! served lower, center and upper demands `F = (w⁻z, wz, w⁺z)`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::fuzzy::Tfn;
use crate::instance::{CoverageMap, CrispInstance, FuzzyInstance};

/// Absolute slack on every budget row.
pub const BUDGET_TOL: f64 = 1e-9;

/// Tolerance used when two scalar values count as equal.
pub fn tie_tolerance(value: f64) -> f64 {
    (1e-6 * value.abs()).max(1e-9)
}

/// `(F₁, F₂, F₃)`: served lower, center and upper demand.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ObjectiveTriple(pub [f64; 3]);

impl ObjectiveTriple {
    pub fn get(&self, r: Criterion) -> f64 {
        self.0[r.index()]
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// `self >= other` componentwise and `self != other`.
    pub fn dominates(&self, other: &ObjectiveTriple) -> bool {
        let ge = self.0.iter().zip(&other.0).all(|(a, b)| a >= b);
        ge && self.0 != other.0
    }

    /// Componentwise `self >= other - tol`.
    pub fn at_least(&self, other: &ObjectiveTriple, tol: f64) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a >= *b - tol)
    }

    pub fn approx_eq(&self, other: &ObjectiveTriple, tol: f64) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| (a - b).abs() <= tol)
    }

    pub fn to_tfn(&self) -> Result<Tfn> {
        Tfn::new(self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Display for ObjectiveTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// One of the three objective components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    Lower,
    Center,
    Upper,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [Criterion::Lower, Criterion::Center, Criterion::Upper];

    /// 1-based objective number, `1 => Lower`, `2 => Center`, `3 => Upper`.
    pub fn from_number(r: usize) -> Option<Criterion> {
        Self::ALL.get(r.checked_sub(1)?).copied()
    }

    pub fn number(self) -> usize {
        self.index() + 1
    }

    pub fn index(self) -> usize {
        match self {
            Criterion::Lower => 0,
            Criterion::Center => 1,
            Criterion::Upper => 2,
        }
    }

    pub(crate) fn unit(self) -> [f64; 3] {
        let mut c = [0.0; 3];
        c[self.index()] = 1.0;
        c
    }
}

/// Augmented Tchebycheff weights `(λ₁, λ₂, λ₃, ρ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightVector {
    pub lambda: [f64; 3],
    pub rho: f64,
}

impl WeightVector {
    pub const DEFAULT_RHO: f64 = 0.001;

    pub fn new(l1: f64, l2: f64, l3: f64, rho: f64) -> Result<Self> {
        let w = Self {
            lambda: [l1, l2, l3],
            rho,
        };
        if w.components().iter().all(|c| *c >= 0.0 && c.is_finite()) {
            Ok(w)
        } else {
            Err(Error::DomainViolation(format!(
                "weights ({l1}, {l2}, {l3}, {rho}) must be finite and nonnegative"
            )))
        }
    }

    pub fn components(&self) -> [f64; 4] {
        [self.lambda[0], self.lambda[1], self.lambda[2], self.rho]
    }

    /// All four weights strictly positive.
    pub fn is_strictly_positive(&self) -> bool {
        self.components().iter().all(|c| *c > 0.0)
    }

    /// `max(0, max_r λ_r (F^I_r - F_r)) + ρ Σ_r (F^I_r - F_r)`.
    pub fn tchebycheff(&self, ideal: &ObjectiveTriple, f: &ObjectiveTriple) -> f64 {
        let mut worst = 0.0f64;
        let mut total = 0.0;
        for r in 0..3 {
            let dev = ideal.0[r] - f.0[r];
            worst = worst.max(self.lambda[r] * dev);
            total += dev;
        }
        worst + self.rho * total
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.components();
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// Which scalarization to optimize.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarObjective {
    /// Maximize a single component of `F`.
    Single(Criterion),
    /// Minimize the augmented weighted Tchebycheff distance to `ideal`.
    AugTcheby {
        weights: WeightVector,
        ideal: ObjectiveTriple,
    },
}

/// A covering model over a fixed coverage map with triplet demands, costs
/// and budget. Crisp instances use degenerate triplets.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    coverage: CoverageMap,
    demands: Vec<Tfn>,
    costs: Vec<Tfn>,
    budget: Tfn,
}

impl Problem {
    pub fn new(coverage: CoverageMap, demands: Vec<Tfn>, costs: Vec<Tfn>, budget: Tfn) -> Result<Self> {
        if demands.len() != coverage.points() || costs.len() != coverage.facilities() {
            return Err(Error::DomainViolation(format!(
                "{} demands / {} costs for a {}x{} coverage map",
                demands.len(),
                costs.len(),
                coverage.points(),
                coverage.facilities()
            )));
        }
        if demands
            .iter()
            .chain(costs.iter())
            .chain(core::iter::once(&budget))
            .any(|t| !t.is_nonnegative())
        {
            return Err(Error::NegativityViolation);
        }
        Ok(Self {
            coverage,
            demands,
            costs,
            budget,
        })
    }

    /// The fuzzy model: triplet-wise coverage sets and three budget rows.
    pub fn from_fuzzy(inst: &FuzzyInstance) -> Result<Self> {
        Self::new(
            inst.coverage(),
            inst.demands.clone(),
            inst.costs.clone(),
            inst.budget,
        )
    }

    /// The classical crisp model embedded with degenerate triplets.
    pub fn from_crisp(inst: &CrispInstance) -> Result<Self> {
        inst.validate()?;
        Self::new(
            inst.coverage(),
            inst.points.iter().map(|p| Tfn::crisp(p.demand)).collect(),
            inst.facilities.iter().map(|f| Tfn::crisp(f.cost)).collect(),
            Tfn::crisp(inst.budget),
        )
    }

    pub fn coverage(&self) -> &CoverageMap {
        &self.coverage
    }

    pub fn demands(&self) -> &[Tfn] {
        &self.demands
    }

    pub fn costs(&self) -> &[Tfn] {
        &self.costs
    }

    pub fn budget(&self) -> Tfn {
        self.budget
    }

    pub fn num_points(&self) -> usize {
        self.demands.len()
    }

    pub fn num_facilities(&self) -> usize {
        self.costs.len()
    }

    /// Sum of every demand triplet.
    pub fn total_demand(&self) -> Tfn {
        self.demands.iter().copied().sum()
    }

    /// Whether the open set satisfies all three budget rows.
    pub fn is_budget_feasible(&self, open: &[usize]) -> bool {
        let used: Tfn = open.iter().map(|&j| self.costs[j]).sum();
        used.triplet()
            .iter()
            .zip(self.budget.triplet())
            .all(|(u, b)| *u <= b + BUDGET_TOL)
    }
}

/// Open set with its forced coverage vector and objective values.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Sorted open facility indices.
    pub open: Vec<usize>,
    /// `z_i`, forced to 1 exactly when some open facility covers `i`.
    pub z: Vec<bool>,
    pub objectives: ObjectiveTriple,
    /// Optimized scalar: `F_r` for single objectives, `H` for Tchebycheff.
    /// Zero for plain evaluations.
    pub scalar_value: f64,
    /// Served demand `Σ w̃_i z_i` as a fuzzy number.
    pub served: Tfn,
    pub feasible: bool,
}

impl Solution {
    pub fn covered_points(&self) -> usize {
        self.z.iter().filter(|z| **z).count()
    }
}

/// Evaluates an open set; budget violations are flagged, not rejected.
pub fn evaluate(problem: &Problem, open: &[usize]) -> Result<Solution> {
    let m = problem.num_facilities();
    if let Some(&j) = open.iter().find(|&&j| j >= m) {
        return Err(Error::UnknownFacility(j));
    }
    let mut is_open = alloc::vec![false; m];
    for &j in open {
        is_open[j] = true;
    }
    let mut sorted: Vec<usize> = open.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let z: Vec<bool> = problem
        .coverage
        .iter()
        .map(|cov| cov.iter().any(|&j| is_open[j]))
        .collect();
    let served: Tfn = problem
        .demands
        .iter()
        .zip(&z)
        .filter(|(_, z)| **z)
        .map(|(w, _)| *w)
        .sum();
    Ok(Solution {
        feasible: problem.is_budget_feasible(&sorted),
        open: sorted,
        z,
        objectives: ObjectiveTriple(served.triplet()),
        scalar_value: 0.0,
        served,
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use alloc::vec;

    pub fn tfn(lo: f64, mid: f64, hi: f64) -> Tfn {
        Tfn::new(lo, mid, hi).unwrap()
    }

    /// Three points; facility 0 covers points 0 and 1, facility 1 covers point 2.
    pub fn toy(budget: Tfn) -> Problem {
        Problem::new(
            CoverageMap::new(2, vec![vec![0], vec![0], vec![1]]).unwrap(),
            vec![tfn(1.0, 2.0, 3.0), tfn(2.0, 4.0, 6.0), tfn(1.0, 1.0, 1.0)],
            vec![Tfn::crisp(1.0), Tfn::crisp(1.0)],
            budget,
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn evaluate_empty_and_full() {
        let p = toy(Tfn::crisp(1.0));
        let empty = evaluate(&p, &[]).unwrap();
        assert!(empty.z.iter().all(|z| !z));
        assert_eq!(empty.objectives, ObjectiveTriple([0.0; 3]));
        assert!(empty.feasible);

        let all = evaluate(&p, &[1, 0]).unwrap();
        assert_eq!(all.open, [0, 1]);
        assert_eq!(all.objectives, ObjectiveTriple([4.0, 7.0, 10.0]));
        assert!(!all.feasible);
    }

    #[test]
    fn evaluate_toy() {
        let p = toy(Tfn::crisp(1.0));
        let s = evaluate(&p, &[0]).unwrap();
        assert_eq!(s.objectives, ObjectiveTriple([3.0, 6.0, 9.0]));
        assert_eq!(s.served, tfn(3.0, 6.0, 9.0));
        assert_eq!(s.z, [true, true, false]);
        assert_eq!(evaluate(&p, &[2]), Err(Error::UnknownFacility(2)));
    }

    #[test]
    fn dominance() {
        let a = ObjectiveTriple([3.0, 6.0, 9.0]);
        assert!(!a.dominates(&a));
        assert!(a.dominates(&ObjectiveTriple([2.0, 6.0, 9.0])));
        assert!(!a.dominates(&ObjectiveTriple([4.0, 5.0, 9.0])));
    }

    #[test]
    fn tchebycheff_value() {
        let ideal = ObjectiveTriple([3.0, 6.0, 9.0]);
        let w = WeightVector::new(1.0, 1.0, 1.0, 0.001).unwrap();
        assert_eq!(w.tchebycheff(&ideal, &ideal), 0.0);
        let f = ObjectiveTriple([1.0, 5.0, 9.0]);
        assert!((w.tchebycheff(&ideal, &f) - (2.0 + 0.003)).abs() < 1e-12);
        let l1 = WeightVector::new(0.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(l1.tchebycheff(&ideal, &f), 3.0);
        assert!(WeightVector::new(-1.0, 0.0, 0.0, 0.0).is_err());
        assert!(w.is_strictly_positive());
        assert!(!l1.is_strictly_positive());
    }

    #[test]
    fn negative_data_rejected() {
        let r = Problem::new(
            CoverageMap::new(1, alloc::vec![alloc::vec![0]]).unwrap(),
            alloc::vec![tfn(-1.0, 0.0, 1.0)],
            alloc::vec![Tfn::crisp(1.0)],
            Tfn::crisp(1.0),
        );
        assert_eq!(r, Err(Error::NegativityViolation));
    }

    #[test]
    fn criterion_numbers() {
        assert_eq!(Criterion::from_number(2), Some(Criterion::Center));
        assert_eq!(Criterion::from_number(0), None);
        assert_eq!(Criterion::from_number(4), None);
        assert_eq!(Criterion::Upper.number(), 3);
    }
}
