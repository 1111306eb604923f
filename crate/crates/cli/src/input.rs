//! Turning command-line input options into a ready instance.

use std::fs;
use std::io::BufReader;

use fmclp_core::{BudgetMode, CostSpec, CrispInstance, FacilityMode, FuzzyInstance};

use crate::canonical::{self, Instance};
use crate::error::{FormatError, Result};
use crate::{plain, standin};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Auto,
    Plain,
    Canonical,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(Format::Auto),
            "plain" => Ok(Format::Plain),
            "canonical" => Ok(Format::Canonical),
            _ => Err(format!("unknown format {s:?}")),
        }
    }
}

/// Reads a point file, a canonical file, or a `standin:N[:SEED]` name.
pub fn read_source(source: &str, format: Format) -> Result<Instance> {
    if let Some((n, seed)) = standin::parse_name(source) {
        return Ok(Instance::Crisp(standin::instance(n, seed)));
    }
    let text = fs::read_to_string(source)?;
    let canonical = match format {
        Format::Plain => false,
        Format::Canonical => true,
        Format::Auto => text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .is_some_and(|l| l.starts_with('[')),
    };
    if canonical {
        canonical::read_instance(&text)
    } else {
        Ok(Instance::Crisp(plain::load_points(BufReader::new(text.as_bytes()))?))
    }
}

/// `unit`, `normal`, `normal:SEED` or `file:PATH` (whitespace-separated
/// costs, one per facility). Plain `normal` draws with `seed`.
pub fn parse_costs(text: &str, seed: u64) -> Result<CostSpec> {
    let bad = || FormatError::Config(format!("unknown cost mode {text:?}"));
    match text.split_once(':') {
        None if text == "unit" => Ok(CostSpec::Unit),
        None if text == "normal" => Ok(CostSpec::normal(seed)),
        Some(("normal", s)) => Ok(CostSpec::normal(s.parse().map_err(|_| bad())?)),
        Some(("file", path)) => {
            let body = fs::read_to_string(path)?;
            let costs = body
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| FormatError::Config(format!("{path}: bad cost {t:?}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(CostSpec::Explicit(costs))
        }
        _ => Err(bad()),
    }
}

/// Instance edits requested on the command line.
#[derive(Debug, Clone, Default)]
pub struct Setup {
    pub radius: Option<f64>,
    pub costs: Option<CostSpec>,
    pub budget: Option<BudgetMode>,
}

impl Setup {
    fn is_empty(&self) -> bool {
        self.radius.is_none() && self.costs.is_none() && self.budget.is_none()
    }
}

/// Builds co-located facilities when a radius is given and applies the
/// budget. A point set without facilities needs both.
pub fn prepare_crisp(inst: CrispInstance, setup: &Setup) -> Result<CrispInstance> {
    let mut inst = match (setup.radius, &setup.costs) {
        (Some(r), costs) => inst.make_facilities(
            FacilityMode::CoLocated,
            r,
            costs.clone().unwrap_or(CostSpec::Unit),
        )?,
        (None, Some(_)) => return Err(FormatError::Config("--costs needs --radius".into())),
        (None, None) if inst.facilities.is_empty() => {
            return Err(FormatError::Config(
                "the instance has no facilities; pass --radius".into(),
            ))
        }
        (None, None) => inst,
    };
    match setup.budget {
        Some(b) => inst = inst.set_budget(b)?,
        None if setup.radius.is_some() => {
            return Err(FormatError::Config("pass --budget with --radius".into()))
        }
        None => {}
    }
    Ok(inst)
}

/// A fuzzy instance: fuzzified when `spread` is given, otherwise the crisp
/// embedding. Fuzzy inputs are taken as they are.
pub fn prepare_fuzzy(
    source: Instance,
    setup: &Setup,
    spread: Option<f64>,
    seed: u64,
) -> Result<FuzzyInstance> {
    match source {
        Instance::Fuzzy(f) => {
            if !setup.is_empty() || spread.is_some() {
                return Err(FormatError::Config(
                    "the input is already fuzzy; drop --radius/--costs/--budget/--spread".into(),
                ));
            }
            Ok(f)
        }
        Instance::Crisp(c) => {
            let c = prepare_crisp(c, setup)?;
            Ok(match spread {
                Some(s) => fmclp_core::fuzzify(&c, s, seed)?,
                None => FuzzyInstance::crisp_embedding(c)?,
            })
        }
    }
}

/// The crisp instance behind a source; the center of a fuzzy one.
pub fn crisp_of(source: Instance, setup: &Setup) -> Result<CrispInstance> {
    match source {
        Instance::Crisp(c) => prepare_crisp(c, setup),
        Instance::Fuzzy(f) if setup.is_empty() => Ok(f.center),
        Instance::Fuzzy(_) => Err(FormatError::Config(
            "the input is already fuzzy; drop --radius/--costs/--budget".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn costs() {
        assert_eq!(parse_costs("unit", 3).unwrap(), CostSpec::Unit);
        assert_eq!(parse_costs("normal", 3).unwrap(), CostSpec::normal(3));
        assert_eq!(parse_costs("normal:8", 3).unwrap(), CostSpec::normal(8));
        assert!(parse_costs("gamma", 3).is_err());
    }

    #[test]
    fn point_sets_need_radius_and_budget() {
        let inst = standin::instance(10, 1);
        assert!(prepare_crisp(inst.clone(), &Setup::default()).is_err());
        let radius_only = Setup { radius: Some(0.3), ..Setup::default() };
        assert!(prepare_crisp(inst.clone(), &radius_only).is_err());
        let full = Setup {
            radius: Some(0.3),
            budget: Some(BudgetMode::Cardinality(2)),
            ..Setup::default()
        };
        let ready = prepare_crisp(inst, &full).unwrap();
        assert_eq!(ready.budget, 2.0);
        assert_eq!(ready.facilities.len(), 10);
    }
}
