//! Crisp and fuzzy covering instances.
//!
//! Candidate facilities are co-located with the demand points. Costs and
//! budgets follow the two experiment classes: unit costs with a cardinality
//! budget, or normally distributed costs with a budget equal to the sum of
//! the `p` cheapest facilities.
//!
//! All randomness comes from [`ChaCha8Rng`] seeded with
//! [`SeedableRng::seed_from_u64`]. Uniform variates are built from the top
//! 53 bits of `next_u64` as `(x >> 11) * 2^-53`, so fuzzified instances are
//! reproducible on any platform that implements ChaCha8.

use alloc::format;
use alloc::vec::Vec;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::fuzzy::Tfn;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemandPoint {
    pub x: f64,
    pub y: f64,
    pub demand: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Facility {
    pub x: f64,
    pub y: f64,
    pub radius: f64,
    pub cost: f64,
}

/// How facility costs were produced.
#[derive(Debug, Clone, PartialEq)]
pub enum CostSpec {
    Unit,
    NormalRandom { mean: f64, sd: f64, seed: u64 },
    Explicit(Vec<f64>),
}

impl CostSpec {
    /// The experiment setting: mean 100, standard deviation 10.
    pub fn normal(seed: u64) -> Self {
        CostSpec::NormalRandom {
            mean: 100.0,
            sd: 10.0,
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BudgetMode {
    Cardinality(usize),
    SumSmallest(usize),
    Explicit(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FacilityMode {
    CoLocated,
}

/// Records how an instance was assembled, for serialization.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Provenance {
    pub radius: Option<f64>,
    pub costs: Option<CostSpec>,
    pub budget: Option<BudgetMode>,
}

/// Row-major `points x facilities` table.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Copy> Grid<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DomainViolation(format!(
                "grid of {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CrispInstance {
    pub points: Vec<DemandPoint>,
    pub facilities: Vec<Facility>,
    pub budget: f64,
    pub provenance: Provenance,
}

impl CrispInstance {
    /// Instance holding demand points only; facilities and budget are set later.
    pub fn from_points(points: Vec<DemandPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInstance);
        }
        let inst = Self {
            points,
            ..Self::default()
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::EmptyInstance);
        }
        for (i, p) in self.points.iter().enumerate() {
            if !(p.demand >= 0.0) || !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::DomainViolation(format!(
                    "point {i} has invalid data (demand {})",
                    p.demand
                )));
            }
        }
        for (j, f) in self.facilities.iter().enumerate() {
            if !(f.radius > 0.0) || !(f.cost >= 0.0) {
                return Err(Error::DomainViolation(format!(
                    "facility {j} has radius {} and cost {}",
                    f.radius, f.cost
                )));
            }
        }
        if !(self.budget >= 0.0) {
            return Err(Error::DomainViolation(format!(
                "budget {} is negative",
                self.budget
            )));
        }
        Ok(())
    }

    pub fn total_demand(&self) -> f64 {
        self.points.iter().map(|p| p.demand).sum()
    }

    /// One candidate facility per demand point, all with the same radius.
    pub fn make_facilities(
        mut self,
        mode: FacilityMode,
        radius: f64,
        costs: CostSpec,
    ) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::DomainViolation(format!(
                "radius {radius} must be positive"
            )));
        }
        let n = self.points.len();
        let cost_values: Vec<f64> = match &costs {
            CostSpec::Unit => alloc::vec![1.0; n],
            CostSpec::NormalRandom { mean, sd, seed } => {
                let normal = Normal::new(*mean, *sd).map_err(|e| {
                    Error::DomainViolation(format!("normal({mean}, {sd}): {e}"))
                })?;
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..n).map(|_| normal.sample(&mut rng).max(0.0)).collect()
            }
            CostSpec::Explicit(list) => {
                if list.len() != n {
                    return Err(Error::DomainViolation(format!(
                        "{} explicit costs for {n} facilities",
                        list.len()
                    )));
                }
                if let Some(c) = list.iter().find(|c| !(**c >= 0.0)) {
                    return Err(Error::DomainViolation(format!("negative cost {c}")));
                }
                list.clone()
            }
        };
        match mode {
            FacilityMode::CoLocated => {
                self.facilities = self
                    .points
                    .iter()
                    .zip(cost_values)
                    .map(|(p, cost)| Facility {
                        x: p.x,
                        y: p.y,
                        radius,
                        cost,
                    })
                    .collect();
            }
        }
        self.provenance.radius = Some(radius);
        self.provenance.costs = Some(costs);
        Ok(self)
    }

    pub fn set_budget(mut self, mode: BudgetMode) -> Result<Self> {
        let m = self.facilities.len();
        let check_p = |p: usize| {
            if p == 0 || p > m {
                Err(Error::DomainViolation(format!(
                    "p = {p} outside 1..={m}"
                )))
            } else {
                Ok(())
            }
        };
        self.budget = match mode {
            BudgetMode::Cardinality(p) => {
                check_p(p)?;
                if self.facilities.iter().any(|f| f.cost != 1.0) {
                    return Err(Error::ModeMismatch(
                        "cardinality budgets require unit costs".into(),
                    ));
                }
                p as f64
            }
            BudgetMode::SumSmallest(p) => {
                check_p(p)?;
                let mut costs: Vec<f64> = self.facilities.iter().map(|f| f.cost).collect();
                costs.sort_by(f64::total_cmp);
                costs[..p].iter().sum()
            }
            BudgetMode::Explicit(b) => {
                if !(b >= 0.0) {
                    return Err(Error::DomainViolation(format!("budget {b} is negative")));
                }
                b
            }
        };
        self.provenance.budget = Some(mode);
        Ok(self)
    }

    /// Euclidean point-to-facility distances.
    pub fn distances(&self) -> Grid<f64> {
        Grid::from_fn(self.points.len(), self.facilities.len(), |i, j| {
            let p = &self.points[i];
            let f = &self.facilities[j];
            libm::hypot(p.x - f.x, p.y - f.y)
        })
    }

    /// `i -> { j : d_ij <= R_j }`.
    pub fn coverage(&self) -> CoverageMap {
        let d = self.distances();
        CoverageMap::from_predicate(self.points.len(), self.facilities.len(), |i, j| {
            d.get(i, j) <= self.facilities[j].radius
        })
    }
}

/// Fuzzified instance; every triplet's apex is the crisp value of `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyInstance {
    pub center: CrispInstance,
    pub demands: Vec<Tfn>,
    pub distances: Grid<Tfn>,
    pub radii: Vec<Tfn>,
    pub costs: Vec<Tfn>,
    pub budget: Tfn,
    pub seed: u64,
    pub spread: f64,
}

impl FuzzyInstance {
    /// Degenerate embedding: every parameter is the crisp triplet `(a, a, a)`.
    pub fn crisp_embedding(center: CrispInstance) -> Result<Self> {
        center.validate()?;
        let d = center.distances();
        Ok(Self {
            demands: center.points.iter().map(|p| Tfn::crisp(p.demand)).collect(),
            distances: Grid::from_fn(d.rows(), d.cols(), |i, j| Tfn::crisp(d.get(i, j))),
            radii: center.facilities.iter().map(|f| Tfn::crisp(f.radius)).collect(),
            costs: center.facilities.iter().map(|f| Tfn::crisp(f.cost)).collect(),
            budget: Tfn::crisp(center.budget),
            seed: 0,
            spread: 0.0,
            center,
        })
    }

    /// Checks nonnegativity, shapes and that every apex matches the center.
    pub fn validate(&self) -> Result<()> {
        let c = &self.center;
        c.validate()?;
        let (n, m) = (c.points.len(), c.facilities.len());
        if self.demands.len() != n
            || self.radii.len() != m
            || self.costs.len() != m
            || self.distances.rows() != n
            || self.distances.cols() != m
        {
            return Err(Error::DomainViolation("fuzzy parameter shapes do not match".into()));
        }
        let d = c.distances();
        let mids = c
            .points
            .iter()
            .map(|p| p.demand)
            .zip(self.demands.iter())
            .chain(c.facilities.iter().map(|f| f.radius).zip(self.radii.iter()))
            .chain(c.facilities.iter().map(|f| f.cost).zip(self.costs.iter()))
            .chain(d.iter().copied().zip(self.distances.iter()))
            .chain(core::iter::once((c.budget, &self.budget)));
        for (crisp, t) in mids {
            if !t.is_nonnegative() {
                return Err(Error::NegativityViolation);
            }
            if t.mid() != crisp {
                return Err(Error::DomainViolation(format!(
                    "apex {} differs from crisp value {crisp}",
                    t.mid()
                )));
            }
        }
        Ok(())
    }

    /// `i -> { j : d_ij^- <= R_j^-, d_ij <= R_j, d_ij^+ <= R_j^+ }`.
    pub fn coverage(&self) -> CoverageMap {
        CoverageMap::from_predicate(self.demands.len(), self.radii.len(), |i, j| {
            self.distances.get(i, j).le(&self.radii[j])
        })
    }
}

/// Samples lower and upper extremes around every crisp value.
///
/// With `u` uniform on `[0, 1)`, a value `a` becomes
/// `((1 - s) a + u1 s a, a, a + u2 s a)`. Draw order: demands, distances
/// (row-major), radii, costs, budget; two draws per parameter, lower first.
pub fn fuzzify(center: &CrispInstance, spread: f64, seed: u64) -> Result<FuzzyInstance> {
    if !(spread > 0.0 && spread <= 1.0) {
        return Err(Error::DomainViolation(format!(
            "spread {spread} outside (0, 1]"
        )));
    }
    center.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |a: f64| -> Tfn {
        let u1 = unit_uniform(&mut rng);
        let u2 = unit_uniform(&mut rng);
        let lo = ((1.0 - spread) * a + u1 * spread * a).min(a);
        let hi = (a + u2 * spread * a).max(a).min((1.0 + spread) * a);
        // a >= 0 keeps lo <= a <= hi after the clamps above.
        Tfn::new(lo, a, hi).unwrap_or(Tfn::crisp(a))
    };
    let demands: Vec<Tfn> = center.points.iter().map(|p| draw(p.demand)).collect();
    let d = center.distances();
    let distances = Grid::from_fn(d.rows(), d.cols(), |i, j| draw(d.get(i, j)));
    let radii: Vec<Tfn> = center.facilities.iter().map(|f| draw(f.radius)).collect();
    let costs: Vec<Tfn> = center.facilities.iter().map(|f| draw(f.cost)).collect();
    let budget = draw(center.budget);
    Ok(FuzzyInstance {
        center: center.clone(),
        demands,
        distances,
        radii,
        costs,
        budget,
        seed,
        spread,
    })
}

fn unit_uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Per demand point, the sorted facility indices that cover it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageMap {
    facilities: usize,
    sets: Vec<Vec<usize>>,
}

impl CoverageMap {
    pub fn new(facilities: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut sets = sets;
        for s in sets.iter_mut() {
            s.sort_unstable();
            s.dedup();
            if let Some(&j) = s.iter().find(|&&j| j >= facilities) {
                return Err(Error::UnknownFacility(j));
            }
        }
        Ok(Self { facilities, sets })
    }

    fn from_predicate(
        points: usize,
        facilities: usize,
        covers: impl Fn(usize, usize) -> bool,
    ) -> Self {
        let sets = (0..points)
            .map(|i| (0..facilities).filter(|&j| covers(i, j)).collect())
            .collect();
        Self { facilities, sets }
    }

    pub fn points(&self) -> usize {
        self.sets.len()
    }

    pub fn facilities(&self) -> usize {
        self.facilities
    }

    pub fn covering(&self, point: usize) -> &[usize] {
        &self.sets[point]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.sets.iter().map(Vec::as_slice)
    }

    /// Pointwise inclusion `self_i ⊆ other_i`.
    pub fn is_subset_of(&self, other: &CoverageMap) -> bool {
        self.sets.len() == other.sets.len()
            && self
                .sets
                .iter()
                .zip(&other.sets)
                .all(|(a, b)| a.iter().all(|j| b.binary_search(j).is_ok()))
    }

    /// Transposed view: facility -> covered points.
    pub fn by_facility(&self) -> Vec<Vec<usize>> {
        let mut out = alloc::vec![Vec::new(); self.facilities];
        for (i, s) in self.sets.iter().enumerate() {
            for &j in s {
                out[j].push(i);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pts(xyw: &[(f64, f64, f64)]) -> CrispInstance {
        CrispInstance::from_points(
            xyw.iter()
                .map(|&(x, y, demand)| DemandPoint { x, y, demand })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn empty_points_rejected() {
        assert_eq!(CrispInstance::from_points(vec![]), Err(Error::EmptyInstance));
    }

    #[test]
    fn facility_costs() {
        let two = pts(&[(0.0, 0.0, 10.0), (3.0, 4.0, 20.0)]);
        let unit = two
            .clone()
            .make_facilities(FacilityMode::CoLocated, 1.0, CostSpec::Unit)
            .unwrap();
        assert_eq!(unit.facilities.iter().map(|f| f.cost).collect::<Vec<_>>(), [1.0, 1.0]);
        assert_eq!((unit.facilities[1].x, unit.facilities[1].y), (3.0, 4.0));
        let explicit = two
            .clone()
            .make_facilities(
                FacilityMode::CoLocated,
                1.0,
                CostSpec::Explicit(vec![100.0, 250.0]),
            )
            .unwrap();
        assert_eq!(explicit.facilities[1].cost, 250.0);
        assert!(two
            .clone()
            .make_facilities(FacilityMode::CoLocated, 0.0, CostSpec::Unit)
            .is_err());
        assert!(two
            .make_facilities(
                FacilityMode::CoLocated,
                1.0,
                CostSpec::Explicit(vec![1.0, -2.0])
            )
            .is_err());
    }

    #[test]
    fn normal_costs_reproducible() {
        let n = 400;
        let inst = pts(&(0..n).map(|i| (i as f64, 0.0, 1.0)).collect::<Vec<_>>());
        let a = inst
            .clone()
            .make_facilities(FacilityMode::CoLocated, 1.0, CostSpec::normal(7))
            .unwrap();
        let b = inst
            .make_facilities(FacilityMode::CoLocated, 1.0, CostSpec::normal(7))
            .unwrap();
        assert_eq!(a.facilities, b.facilities);
        assert!(a.facilities.iter().all(|f| f.cost > 0.0));
        let mean = a.facilities.iter().map(|f| f.cost).sum::<f64>() / n as f64;
        assert!((mean - 100.0).abs() <= 3.0 * 10.0 / libm::sqrt(n as f64), "{mean}");
    }

    #[test]
    fn budgets() {
        let base = pts(&[(0.0, 0.0, 1.0); 4]);
        let unit = base
            .clone()
            .make_facilities(FacilityMode::CoLocated, 1.0, CostSpec::Unit)
            .unwrap();
        assert_eq!(unit.clone().set_budget(BudgetMode::Cardinality(2)).unwrap().budget, 2.0);
        assert!(unit.clone().set_budget(BudgetMode::Cardinality(0)).is_err());
        assert!(unit.clone().set_budget(BudgetMode::Cardinality(5)).is_err());
        assert!(unit.set_budget(BudgetMode::Explicit(-1.0)).is_err());

        let three = pts(&[(0.0, 0.0, 1.0); 3])
            .make_facilities(
                FacilityMode::CoLocated,
                1.0,
                CostSpec::Explicit(vec![90.0, 110.0, 95.0]),
            )
            .unwrap();
        assert_eq!(three.set_budget(BudgetMode::SumSmallest(2)).unwrap().budget, 185.0);

        let mixed = pts(&[(0.0, 0.0, 1.0); 2])
            .make_facilities(
                FacilityMode::CoLocated,
                1.0,
                CostSpec::Explicit(vec![1.0, 2.0]),
            )
            .unwrap();
        assert!(matches!(
            mixed.set_budget(BudgetMode::Cardinality(1)),
            Err(Error::ModeMismatch(_))
        ));
    }

    #[test]
    fn euclidean_distances() {
        let inst = pts(&[(0.0, 0.0, 1.0), (3.0, 4.0, 1.0), (1.0, 1.0, 1.0)])
            .make_facilities(FacilityMode::CoLocated, 1.0, CostSpec::Unit)
            .unwrap();
        let d = inst.distances();
        assert_eq!(d.get(0, 1), 5.0);
        assert_eq!(d.get(1, 0), 5.0);
        assert_eq!(d.get(2, 2), 0.0);
        assert!((d.get(0, 2) - core::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn crisp_coverage_is_inclusive() {
        let inst = pts(&[(0.0, 0.0, 1.0), (0.4, 0.0, 1.0), (0.5, 0.0, 1.0), (0.6, 0.0, 1.0)]);
        let mut inst = inst
            .make_facilities(FacilityMode::CoLocated, 0.5, CostSpec::Unit)
            .unwrap();
        inst.budget = 1.0;
        let cov = inst.coverage();
        assert!(cov.covering(1).contains(&0));
        assert!(cov.covering(2).contains(&0));
        assert!(!cov.covering(3).contains(&0));
    }

    #[test]
    fn fuzzy_coverage_is_componentwise() {
        let d = Tfn::new(0.3, 0.4, 0.5).unwrap();
        let r = Tfn::new(0.35, 0.5, 0.6).unwrap();
        assert!(d.le(&r));
        let d = Tfn::new(0.3, 0.4, 0.55).unwrap();
        let r = Tfn::new(0.35, 0.5, 0.5).unwrap();
        assert!(!d.le(&r));
    }

    #[test]
    fn fuzzify_contract() {
        let inst = pts(&[(0.0, 0.0, 100.0), (1.0, 0.0, 0.0)])
            .make_facilities(FacilityMode::CoLocated, 2.0, CostSpec::Unit)
            .unwrap()
            .set_budget(BudgetMode::Cardinality(1))
            .unwrap();
        let f = fuzzify(&inst, 0.2, 11).unwrap();
        f.validate().unwrap();
        assert_eq!(f.demands[1], Tfn::ZERO);
        assert_eq!(f.distances.get(0, 0), Tfn::ZERO);
        let w = f.demands[0];
        assert_eq!(w.mid(), 100.0);
        assert!((80.0..=100.0).contains(&w.lo()) && (100.0..=120.0).contains(&w.hi()));
        assert_eq!(fuzzify(&inst, 0.2, 11).unwrap(), f);
        assert_ne!(fuzzify(&inst, 0.2, 12).unwrap(), f);
        assert!(fuzzify(&inst, 0.0, 1).is_err());
        assert!(fuzzify(&inst, 1.5, 1).is_err());
        assert!(f.coverage().is_subset_of(&inst.coverage()));
    }

    #[test]
    fn coverage_map_rejects_unknown_facility() {
        assert_eq!(
            CoverageMap::new(2, vec![vec![0, 2]]),
            Err(Error::UnknownFacility(2))
        );
    }
}
