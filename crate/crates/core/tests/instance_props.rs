mod common;

use common::*;
use fmclp_core::{
    fuzzify, BudgetMode, CostSpec, CrispInstance, DemandPoint, Error, FacilityMode, Problem,
};
use proptest::prelude::*;

fn points(seed: u64, n: usize) -> CrispInstance {
    let mut inst = random_crisp(seed, n, 1);
    inst.facilities.clear();
    inst.budget = 0.0;
    inst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fuzzified_values_stay_in_their_bands(seed in any::<u64>(), spread in 0.01f64..=1.0) {
        let crisp = random_crisp(seed, 15, 6);
        let fz = fuzzify(&crisp, spread, seed).unwrap();
        prop_assert!(fz.validate().is_ok());
        let d = crisp.distances();
        let pairs = crisp.points.iter().map(|p| p.demand).zip(fz.demands.iter())
            .chain(d.iter().copied().zip(fz.distances.iter()))
            .chain(crisp.facilities.iter().map(|f| f.radius).zip(fz.radii.iter()))
            .chain(crisp.facilities.iter().map(|f| f.cost).zip(fz.costs.iter()))
            .chain(std::iter::once((crisp.budget, &fz.budget)));
        for (a, t) in pairs {
            prop_assert_eq!(t.mid(), a);
            prop_assert!(t.lo() >= (1.0 - spread) * a - 1e-12 && t.lo() <= a);
            prop_assert!(t.hi() >= a && t.hi() <= (1.0 + spread) * a + 1e-12);
        }
    }

    #[test]
    fn fuzzification_is_reproducible(seed in any::<u64>()) {
        let crisp = random_crisp(seed, 10, 4);
        prop_assert_eq!(fuzzify(&crisp, 0.2, seed).unwrap(), fuzzify(&crisp, 0.2, seed).unwrap());
        prop_assert_ne!(
            fuzzify(&crisp, 0.2, seed).unwrap(),
            fuzzify(&crisp, 0.2, seed.wrapping_add(1)).unwrap()
        );
    }

    #[test]
    fn fuzzy_model_is_more_restrictive(seed in any::<u64>(), p in 1usize..6) {
        let crisp = points(seed, 20)
            .make_facilities(FacilityMode::CoLocated, 0.3, CostSpec::Unit).unwrap()
            .set_budget(BudgetMode::Cardinality(p)).unwrap();
        let fz = fuzzify(&crisp, 0.2, seed).unwrap();
        prop_assert!(fz.coverage().is_subset_of(&crisp.coverage()));
        let fuzzy = Problem::from_fuzzy(&fz).unwrap();
        let plain = Problem::from_crisp(&crisp).unwrap();
        for k in 0..=crisp.facilities.len() {
            let open: Vec<usize> = (0..k).collect();
            if fuzzy.is_budget_feasible(&open) {
                prop_assert!(plain.is_budget_feasible(&open));
            }
        }
    }

    #[test]
    fn cheapest_sum_budget_grows_with_p(seed in any::<u64>()) {
        let base = points(seed, 12)
            .make_facilities(FacilityMode::CoLocated, 0.2, CostSpec::normal(seed)).unwrap();
        let mut last = 0.0;
        for p in 1..=12 {
            let b = base.clone().set_budget(BudgetMode::SumSmallest(p)).unwrap().budget;
            prop_assert!(b >= last);
            last = b;
        }
        prop_assert!((last - base.facilities.iter().map(|f| f.cost).sum::<f64>()).abs() < 1e-9);
    }
}

#[test]
fn normal_costs_are_seeded_and_nonnegative() {
    let base = points(1, 40);
    let a = base
        .clone()
        .make_facilities(FacilityMode::CoLocated, 0.2, CostSpec::normal(9))
        .unwrap();
    let b = base
        .clone()
        .make_facilities(FacilityMode::CoLocated, 0.2, CostSpec::normal(9))
        .unwrap();
    assert_eq!(a, b);
    let costs: Vec<f64> = a.facilities.iter().map(|f| f.cost).collect();
    assert!(costs.iter().all(|c| *c >= 0.0));
    let mean = costs.iter().sum::<f64>() / costs.len() as f64;
    assert!((mean - 100.0).abs() < 10.0, "mean {mean}");
}

#[test]
fn cardinality_needs_unit_costs() {
    let inst = points(2, 5)
        .make_facilities(FacilityMode::CoLocated, 0.2, CostSpec::normal(1))
        .unwrap();
    assert!(matches!(
        inst.set_budget(BudgetMode::Cardinality(2)),
        Err(Error::ModeMismatch(_))
    ));
    let unit = points(2, 5)
        .make_facilities(FacilityMode::CoLocated, 0.2, CostSpec::Unit)
        .unwrap();
    assert_eq!(unit.clone().set_budget(BudgetMode::Cardinality(2)).unwrap().budget, 2.0);
    assert!(unit.set_budget(BudgetMode::Cardinality(6)).is_err());
}

#[test]
fn boundary_distances_count_as_covered() {
    let inst = CrispInstance::from_points(vec![
        DemandPoint { x: 0.0, y: 0.0, demand: 1.0 },
        DemandPoint { x: 3.0, y: 4.0, demand: 1.0 },
    ])
    .unwrap()
    .make_facilities(FacilityMode::CoLocated, 5.0, CostSpec::Unit)
    .unwrap();
    let cov = inst.coverage();
    assert_eq!(cov.covering(0), &[0, 1]);
    assert_eq!(cov.covering(1), &[0, 1]);
}
