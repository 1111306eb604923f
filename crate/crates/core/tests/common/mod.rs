// Shared fixtures and exhaustive oracles. They deliberately avoid the
// solver and evaluation code of the crate: coverage, budget checks and
// scalar values are recomputed from the raw problem data.
#![allow(dead_code)]

use fmclp_core::{
    fuzzify, CrispInstance, DemandPoint, Facility, Problem, ScalarObjective, Tfn,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random geometric instance with `n` points and `m` facilities at random
/// sites, integer demands and costs around 100.
pub fn random_crisp(seed: u64, n: usize, m: usize) -> CrispInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<DemandPoint> = (0..n)
        .map(|_| DemandPoint {
            x: rng.random(),
            y: rng.random(),
            demand: rng.random_range(0..50) as f64,
        })
        .collect();
    let unit = rng.random_bool(0.5);
    let facilities: Vec<Facility> = (0..m)
        .map(|_| Facility {
            x: rng.random(),
            y: rng.random(),
            radius: rng.random_range(0.1..0.45),
            cost: if unit {
                1.0
            } else {
                rng.random_range(60..140) as f64
            },
        })
        .collect();
    let mean_cost: f64 = facilities.iter().map(|f| f.cost).sum::<f64>() / m as f64;
    let budget = mean_cost * rng.random_range(1.0..(m as f64 / 2.0).max(1.5));
    CrispInstance {
        points,
        facilities,
        budget,
        provenance: Default::default(),
    }
}

/// Fuzzified random problem with `|I| <= 40`, `|J| <= max_m`.
pub fn random_fuzzy_problem(seed: u64, max_m: usize) -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let n = rng.random_range(5..=40);
    let m = rng.random_range(2..=max_m);
    let crisp = random_crisp(seed, n, m);
    let fz = fuzzify(&crisp, 0.2, seed).unwrap();
    Problem::from_fuzzy(&fz).unwrap()
}

/// Every subset of facilities as a sorted index list.
pub fn subsets(m: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << m).map(move |mask| (0..m).filter(|j| mask >> j & 1 == 1).collect())
}

pub fn feasible(problem: &Problem, open: &[usize]) -> bool {
    let b = problem.budget();
    let (mut lo, mut mid, mut hi) = (0.0, 0.0, 0.0);
    for &j in open {
        let c = problem.costs()[j];
        lo += c.lo();
        mid += c.mid();
        hi += c.hi();
    }
    lo <= b.lo() + 1e-9 && mid <= b.mid() + 1e-9 && hi <= b.hi() + 1e-9
}

pub fn objectives(problem: &Problem, open: &[usize]) -> [f64; 3] {
    let mut f = [0.0; 3];
    for (i, w) in problem.demands().iter().enumerate() {
        if problem.coverage().covering(i).iter().any(|j| open.contains(j)) {
            f[0] += w.lo();
            f[1] += w.mid();
            f[2] += w.hi();
        }
    }
    f
}

/// Value to maximize for an objective.
pub fn score(objective: &ScalarObjective, f: [f64; 3]) -> f64 {
    match objective {
        ScalarObjective::Single(r) => f[r.index()],
        ScalarObjective::AugTcheby { weights, ideal } => {
            let mut worst: f64 = 0.0;
            let mut sum = 0.0;
            for r in 0..3 {
                let dev = ideal.0[r] - f[r];
                worst = worst.max(weights.lambda[r] * dev);
                sum += dev;
            }
            -(worst + weights.rho * sum)
        }
    }
}

pub struct Best {
    pub value: f64,
    /// Optimizers within `tol` of `value`, by size then lexicographically.
    pub ties: Vec<Vec<usize>>,
}

/// Exhaustive optimum of `objective`, reported as a maximized score.
pub fn brute_force(problem: &Problem, objective: &ScalarObjective, tol: fn(f64) -> f64) -> Best {
    let scored: Vec<(f64, Vec<usize>)> = subsets(problem.num_facilities())
        .filter(|s| feasible(problem, s))
        .map(|s| (score(objective, objectives(problem, &s)), s))
        .collect();
    let value = scored.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let mut ties: Vec<Vec<usize>> = scored
        .into_iter()
        .filter(|(v, _)| *v >= value - tol(value))
        .map(|(_, s)| s)
        .collect();
    ties.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Best { value, ties }
}

/// Exhaustive ideal point.
pub fn brute_ideal(problem: &Problem) -> [f64; 3] {
    let mut ideal = [0.0f64; 3];
    for s in subsets(problem.num_facilities()).filter(|s| feasible(problem, s)) {
        let f = objectives(problem, &s);
        for r in 0..3 {
            ideal[r] = ideal[r].max(f[r]);
        }
    }
    ideal
}

/// Exhaustive non-dominated objective vectors.
pub fn brute_front(problem: &Problem) -> Vec<[f64; 3]> {
    let all: Vec<[f64; 3]> = subsets(problem.num_facilities())
        .filter(|s| feasible(problem, s))
        .map(|s| objectives(problem, &s))
        .collect();
    let dominated = |b: &[f64; 3]| {
        all.iter()
            .any(|a| (0..3).all(|r| a[r] >= b[r]) && (0..3).any(|r| a[r] > b[r]))
    };
    let mut front: Vec<[f64; 3]> = all.iter().copied().filter(|f| !dominated(f)).collect();
    front.sort_by(|a, b| a.partial_cmp(b).unwrap());
    front.dedup();
    front
}

pub fn tfn(lo: f64, mid: f64, hi: f64) -> Tfn {
    Tfn::new(lo, mid, hi).unwrap()
}
