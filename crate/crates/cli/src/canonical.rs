//! Canonical text format for instances, solutions and Pareto runs.
//!
//! A file is a sequence of `[section]` headers, each followed by
//! `key = value` lines. Keys may repeat; repeated keys form an ordered
//! list. Blank lines and lines starting with `#` are ignored. Reals are
//! written with Rust's shortest round-trip formatting, so reading a file
//! back reproduces every value bit for bit.
//!
//! ```text
//! [crisp-instance]
//! points = 2
//! point = 0 0 0 10
//! point = 1 3 4 20
//! facilities = 2
//! facility = 0 0 0 5 1
//! facility = 1 3 4 5 1
//! budget = 1
//! radius = 5
//! costs = unit
//! budget-mode = card 1
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use fmclp_core::{
    BudgetMode, CertificationPath, CostSpec, CrispInstance, DemandPoint, Facility,
    FuzzyInstance, Grid, ObjectiveTriple, ParetoRun, Provenance, Solution, Tfn, WeightTrace,
    WeightVector,
};

use crate::error::{FormatError, Result};

pub const CRISP: &str = "crisp-instance";
pub const FUZZY: &str = "fuzzy-instance";
pub const SOLUTION: &str = "solution";
pub const RUN: &str = "pareto-run";

#[derive(Debug, Clone)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

#[derive(Debug, Clone)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

impl Section {
    pub fn all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a Entry> + 'a {
        self.entries.iter().filter(move |e| e.key == key)
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn one(&self, key: &str) -> Result<&Entry> {
        let mut it = self.entries.iter().filter(|e| e.key == key);
        let first = it
            .next()
            .ok_or_else(|| FormatError::at(self.line, format!("[{}] lacks `{key}`", self.name)))?;
        if let Some(dup) = it.next() {
            return Err(FormatError::at(dup.line, format!("`{key}` given twice")));
        }
        Ok(first)
    }
}

impl Entry {
    pub fn parse<T: FromStr>(&self) -> Result<T> {
        self.value
            .trim()
            .parse()
            .map_err(|_| self.error(format!("bad value {:?}", self.value)))
    }

    pub fn fields(&self) -> Vec<&str> {
        self.value.split_whitespace().collect()
    }

    /// Exactly `N` whitespace-separated fields, each parsed as `T`.
    pub fn tuple<T: FromStr + Copy + Default, const N: usize>(&self) -> Result<[T; N]> {
        let fields = self.fields();
        if fields.len() != N {
            return Err(self.error(format!("expected {N} fields, got {}", fields.len())));
        }
        let mut out = [T::default(); N];
        for (slot, f) in out.iter_mut().zip(fields) {
            *slot = f
                .parse()
                .map_err(|_| self.error(format!("bad field {f:?}")))?;
        }
        Ok(out)
    }

    pub fn list<T: FromStr>(&self) -> Result<Vec<T>> {
        self.fields()
            .into_iter()
            .map(|f| f.parse().map_err(|_| self.error(format!("bad field {f:?}"))))
            .collect()
    }

    pub fn error(&self, msg: String) -> FormatError {
        FormatError::at(self.line, format!("`{}`: {msg}", self.key))
    }
}

pub fn parse(text: &str) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        if let Some(name) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            sections.push(Section {
                name: name.trim().to_string(),
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let (key, value) = s
            .split_once('=')
            .ok_or_else(|| FormatError::at(line, "expected `key = value`"))?;
        let section = sections
            .last_mut()
            .ok_or_else(|| FormatError::at(line, "entry before any [section]"))?;
        section.entries.push(Entry {
            line,
            key: key.trim().to_string(),
            value: value.trim().to_string(),
        });
    }
    Ok(sections)
}

fn find<'a>(sections: &'a [Section], name: &str) -> Result<&'a Section> {
    sections
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| FormatError::at(1, format!("no [{name}] section")))
}

fn tfn_of(e: &Entry, v: [f64; 3]) -> Result<Tfn> {
    Tfn::new(v[0], v[1], v[2]).map_err(|err| e.error(err.to_string()))
}

fn tfn_str(t: &Tfn) -> String {
    format!("{} {} {}", t.lo(), t.mid(), t.hi())
}

/// What a canonical instance file holds.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Crisp(CrispInstance),
    Fuzzy(FuzzyInstance),
}

pub fn write_crisp(inst: &CrispInstance) -> String {
    let mut out = String::new();
    write_crisp_into(&mut out, inst);
    out
}

fn write_crisp_into(out: &mut String, inst: &CrispInstance) {
    let _ = writeln!(out, "[{CRISP}]");
    let _ = writeln!(out, "points = {}", inst.points.len());
    for (i, p) in inst.points.iter().enumerate() {
        let _ = writeln!(out, "point = {i} {} {} {}", p.x, p.y, p.demand);
    }
    let _ = writeln!(out, "facilities = {}", inst.facilities.len());
    for (j, f) in inst.facilities.iter().enumerate() {
        let _ = writeln!(out, "facility = {j} {} {} {} {}", f.x, f.y, f.radius, f.cost);
    }
    let _ = writeln!(out, "budget = {}", inst.budget);
    let prov = &inst.provenance;
    if let Some(r) = prov.radius {
        let _ = writeln!(out, "radius = {r}");
    }
    if let Some(c) = &prov.costs {
        let _ = match c {
            CostSpec::Unit => writeln!(out, "costs = unit"),
            CostSpec::NormalRandom { mean, sd, seed } => {
                writeln!(out, "costs = normal {mean} {sd} {seed}")
            }
            CostSpec::Explicit(_) => writeln!(out, "costs = explicit"),
        };
    }
    if let Some(b) = prov.budget {
        let _ = writeln!(out, "budget-mode = {}", budget_mode_str(&b));
    }
}

pub fn budget_mode_str(b: &BudgetMode) -> String {
    match b {
        BudgetMode::Cardinality(p) => format!("card {p}"),
        BudgetMode::SumSmallest(p) => format!("smallest {p}"),
        BudgetMode::Explicit(v) => format!("value {v}"),
    }
}

fn read_crisp(s: &Section) -> Result<CrispInstance> {
    let n: usize = s.one("points")?.parse()?;
    let mut points = Vec::with_capacity(n);
    for (k, e) in s.all("point").enumerate() {
        let [id, x, y, w] = e.tuple::<f64, 4>()?;
        if id != k as f64 {
            return Err(e.error(format!("point id {id} out of order")));
        }
        points.push(DemandPoint { x, y, demand: w });
    }
    if points.len() != n {
        return Err(FormatError::at(
            s.line,
            format!("{} points listed, {n} declared", points.len()),
        ));
    }
    let m: usize = s.one("facilities")?.parse()?;
    let mut facilities = Vec::with_capacity(m);
    for (k, e) in s.all("facility").enumerate() {
        let [id, x, y, radius, cost] = e.tuple::<f64, 5>()?;
        if id != k as f64 {
            return Err(e.error(format!("facility id {id} out of order")));
        }
        facilities.push(Facility { x, y, radius, cost });
    }
    if facilities.len() != m {
        return Err(FormatError::at(
            s.line,
            format!("{} facilities listed, {m} declared", facilities.len()),
        ));
    }
    let budget: f64 = s.one("budget")?.parse()?;
    let mut provenance = Provenance::default();
    if let Some(e) = s.get("radius") {
        provenance.radius = Some(e.parse()?);
    }
    if let Some(e) = s.get("costs") {
        let f = e.fields();
        provenance.costs = Some(match f.as_slice() {
            ["unit"] => CostSpec::Unit,
            ["normal", mean, sd, seed] => CostSpec::NormalRandom {
                mean: mean.parse().map_err(|_| e.error("bad mean".into()))?,
                sd: sd.parse().map_err(|_| e.error("bad sd".into()))?,
                seed: seed.parse().map_err(|_| e.error("bad seed".into()))?,
            },
            ["explicit"] => CostSpec::Explicit(facilities.iter().map(|f| f.cost).collect()),
            _ => return Err(e.error(format!("unknown cost mode {:?}", e.value))),
        });
    }
    if let Some(e) = s.get("budget-mode") {
        provenance.budget = Some(parse_budget_mode(&e.value).map_err(|m| e.error(m))?);
    }
    let inst = CrispInstance {
        points,
        facilities,
        budget,
        provenance,
    };
    inst.validate()?;
    Ok(inst)
}

/// `card p`, `smallest p` or `value B`; a colon may replace the space.
pub fn parse_budget_mode(text: &str) -> std::result::Result<BudgetMode, String> {
    let text = text.trim();
    let (kind, arg) = text
        .split_once([' ', ':'])
        .ok_or_else(|| format!("budget mode {text:?} needs an argument"))?;
    let arg = arg.trim();
    let p = || arg.parse::<usize>().map_err(|_| format!("bad count {arg:?}"));
    match kind {
        "card" => Ok(BudgetMode::Cardinality(p()?)),
        "smallest" => Ok(BudgetMode::SumSmallest(p()?)),
        "value" => arg
            .parse()
            .map(BudgetMode::Explicit)
            .map_err(|_| format!("bad budget {arg:?}")),
        _ => Err(format!("unknown budget mode {kind:?}")),
    }
}

pub fn write_fuzzy(inst: &FuzzyInstance) -> String {
    let mut out = String::new();
    write_crisp_into(&mut out, &inst.center);
    let _ = writeln!(out);
    let _ = writeln!(out, "[{FUZZY}]");
    let _ = writeln!(out, "seed = {}", inst.seed);
    let _ = writeln!(out, "spread = {}", inst.spread);
    let _ = writeln!(out, "budget = {}", tfn_str(&inst.budget));
    for (i, t) in inst.demands.iter().enumerate() {
        let _ = writeln!(out, "demand = {i} {}", tfn_str(t));
    }
    for (j, t) in inst.radii.iter().enumerate() {
        let _ = writeln!(out, "radius = {j} {}", tfn_str(t));
    }
    for (j, t) in inst.costs.iter().enumerate() {
        let _ = writeln!(out, "cost = {j} {}", tfn_str(t));
    }
    for i in 0..inst.distances.rows() {
        for j in 0..inst.distances.cols() {
            let _ = writeln!(out, "distance = {i} {j} {}", tfn_str(&inst.distances.get(i, j)));
        }
    }
    out
}

fn indexed(s: &Section, key: &str, len: usize) -> Result<Vec<Tfn>> {
    let mut out = Vec::with_capacity(len);
    for (k, e) in s.all(key).enumerate() {
        let [id, lo, mid, hi] = e.tuple::<f64, 4>()?;
        if id != k as f64 {
            return Err(e.error(format!("index {id} out of order")));
        }
        out.push(tfn_of(e, [lo, mid, hi])?);
    }
    if out.len() != len {
        return Err(FormatError::at(
            s.line,
            format!("{} `{key}` entries, expected {len}", out.len()),
        ));
    }
    Ok(out)
}

fn read_fuzzy(s: &Section, center: CrispInstance) -> Result<FuzzyInstance> {
    let (n, m) = (center.points.len(), center.facilities.len());
    let seed: u64 = s.one("seed")?.parse()?;
    let spread: f64 = s.one("spread")?.parse()?;
    let b = s.one("budget")?;
    let budget = tfn_of(b, b.tuple::<f64, 3>()?)?;
    let demands = indexed(s, "demand", n)?;
    let radii = indexed(s, "radius", m)?;
    let costs = indexed(s, "cost", m)?;
    let mut cells = Vec::with_capacity(n * m);
    for (k, e) in s.all("distance").enumerate() {
        let [i, j, lo, mid, hi] = e.tuple::<f64, 5>()?;
        if i != (k / m.max(1)) as f64 || j != (k % m.max(1)) as f64 {
            return Err(e.error(format!("cell ({i}, {j}) out of order")));
        }
        cells.push(tfn_of(e, [lo, mid, hi])?);
    }
    let distances = Grid::from_vec(n, m, cells)
        .map_err(|_| FormatError::at(s.line, format!("expected {} distance cells", n * m)))?;
    let inst = FuzzyInstance {
        center,
        demands,
        distances,
        radii,
        costs,
        budget,
        seed,
        spread,
    };
    inst.validate()?;
    Ok(inst)
}

pub fn read_instance(text: &str) -> Result<Instance> {
    let sections = parse(text)?;
    let center = read_crisp(find(&sections, CRISP)?)?;
    match sections.iter().find(|s| s.name == FUZZY) {
        Some(s) => Ok(Instance::Fuzzy(read_fuzzy(s, center)?)),
        None => Ok(Instance::Crisp(center)),
    }
}

/// A solution together with how it was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionRecord {
    pub solution: Solution,
    pub objective: String,
    pub wall_s: Option<f64>,
}

fn bits(z: &[bool]) -> String {
    z.iter().map(|b| if *b { '1' } else { '0' }).collect()
}

fn write_solution_into(out: &mut String, sol: &Solution, extra: &[(&str, String)]) {
    let _ = writeln!(out, "[{SOLUTION}]");
    for (k, v) in extra {
        let _ = writeln!(out, "{k} = {v}");
    }
    let open: Vec<String> = sol.open.iter().map(|j| j.to_string()).collect();
    let _ = writeln!(out, "open = {}", open.join(" "));
    let _ = writeln!(out, "z = {}", bits(&sol.z));
    let [a, b, c] = sol.objectives.0;
    let _ = writeln!(out, "objectives = {a} {b} {c}");
    let _ = writeln!(out, "served = {}", tfn_str(&sol.served));
    let _ = writeln!(out, "scalar = {}", sol.scalar_value);
    let _ = writeln!(out, "feasible = {}", sol.feasible);
}

pub fn write_solution(rec: &SolutionRecord) -> String {
    let mut extra = vec![("objective", rec.objective.clone())];
    if let Some(t) = rec.wall_s {
        extra.push(("wall-s", format!("{t:.3}")));
    }
    let mut out = String::new();
    write_solution_into(&mut out, &rec.solution, &extra);
    out
}

fn read_solution_section(s: &Section) -> Result<Solution> {
    let open: Vec<usize> = s.one("open")?.list()?;
    let ze = s.one("z")?;
    let z = ze
        .value
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(ze.error(format!("coverage flag {c:?} is not 0 or 1"))),
        })
        .collect::<Result<Vec<bool>>>()?;
    let objectives = ObjectiveTriple(s.one("objectives")?.tuple::<f64, 3>()?);
    let se = s.one("served")?;
    let served = tfn_of(se, se.tuple::<f64, 3>()?)?;
    Ok(Solution {
        open,
        z,
        objectives,
        scalar_value: s.one("scalar")?.parse()?,
        served,
        feasible: s.one("feasible")?.parse()?,
    })
}

pub fn read_solution(text: &str) -> Result<SolutionRecord> {
    let sections = parse(text)?;
    let s = find(&sections, SOLUTION)?;
    Ok(SolutionRecord {
        solution: read_solution_section(s)?,
        objective: s.one("objective")?.value.clone(),
        wall_s: s.get("wall-s").map(|e| e.parse()).transpose()?,
    })
}

pub fn write_run(run: &ParetoRun) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[{RUN}]");
    let [a, b, c] = run.ideal.0;
    let _ = writeln!(out, "ideal = {a} {b} {c}");
    let _ = writeln!(out, "stopped-early = {}", run.stopped_early);
    for w in &run.weights {
        let [l1, l2, l3, rho] = w.components();
        let _ = writeln!(out, "weight = {l1} {l2} {l3} {rho}");
    }
    for t in &run.trace {
        let k = run
            .weights
            .iter()
            .position(|w| *w == t.weights)
            .unwrap_or(usize::MAX);
        let _ = writeln!(
            out,
            "trace = {k} {} {} {}",
            t.solution,
            t.reached_ideal,
            t.path.label()
        );
    }
    for (k, sol) in run.solutions.iter().enumerate() {
        let _ = writeln!(out);
        write_solution_into(&mut out, sol, &[("index", k.to_string())]);
    }
    out
}

pub fn read_run(text: &str) -> Result<ParetoRun> {
    let sections = parse(text)?;
    let s = find(&sections, RUN)?;
    let ideal = ObjectiveTriple(s.one("ideal")?.tuple::<f64, 3>()?);
    let stopped_early: bool = s.one("stopped-early")?.parse()?;
    let mut weights = Vec::new();
    for e in s.all("weight") {
        let [l1, l2, l3, rho] = e.tuple::<f64, 4>()?;
        weights.push(WeightVector::new(l1, l2, l3, rho).map_err(|err| e.error(err.to_string()))?);
    }
    let mut solutions = Vec::new();
    for (k, sec) in sections.iter().filter(|x| x.name == SOLUTION).enumerate() {
        let idx: usize = sec.one("index")?.parse()?;
        if idx != k {
            return Err(FormatError::at(sec.line, format!("solution index {idx} out of order")));
        }
        solutions.push(read_solution_section(sec)?);
    }
    let mut trace = Vec::new();
    for e in s.all("trace") {
        let f = e.fields();
        if f.len() != 4 {
            return Err(e.error(format!("expected 4 fields, got {}", f.len())));
        }
        let k: usize = f[0].parse().map_err(|_| e.error("bad weight index".into()))?;
        let solution: usize = f[1].parse().map_err(|_| e.error("bad solution index".into()))?;
        let reached_ideal: bool = f[2].parse().map_err(|_| e.error("bad flag".into()))?;
        let path = CertificationPath::from_label(f[3])
            .ok_or_else(|| e.error(format!("unknown path {:?}", f[3])))?;
        let weights = *weights
            .get(k)
            .ok_or_else(|| e.error(format!("no weight {k}")))?;
        if solution >= solutions.len() {
            return Err(e.error(format!("no solution {solution}")));
        }
        trace.push(WeightTrace {
            weights,
            solution,
            reached_ideal,
            path,
        });
    }
    Ok(ParetoRun {
        weights,
        ideal,
        solutions,
        trace,
        stopped_early,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use fmclp_core::{fuzzify, FacilityMode};

    fn sample() -> CrispInstance {
        CrispInstance::from_points(vec![
            DemandPoint { x: 0.1, y: 0.2, demand: 10.0 },
            DemandPoint { x: 1.0 / 3.0, y: 0.7, demand: 20.5 },
            DemandPoint { x: 0.9, y: 1e-9, demand: 0.0 },
        ])
        .unwrap()
        .make_facilities(FacilityMode::CoLocated, 0.45, CostSpec::normal(3))
        .unwrap()
        .set_budget(BudgetMode::SumSmallest(2))
        .unwrap()
    }

    #[test]
    fn crisp_round_trip() {
        let inst = sample();
        let text = write_crisp(&inst);
        assert_eq!(read_instance(&text).unwrap(), Instance::Crisp(inst));
    }

    #[test]
    fn fuzzy_round_trip_is_bit_exact() {
        let fz = fuzzify(&sample(), 0.2, 11).unwrap();
        let text = write_fuzzy(&fz);
        let back = match read_instance(&text).unwrap() {
            Instance::Fuzzy(f) => f,
            other => panic!("read back {other:?}"),
        };
        assert_eq!(back, fz);
        for (a, b) in back.distances.iter().zip(fz.distances.iter()) {
            for r in 0..3 {
                assert_eq!(a.triplet()[r].to_bits(), b.triplet()[r].to_bits());
            }
        }
        assert_eq!(write_fuzzy(&back), text);
    }

    #[test]
    fn reports_line_numbers() {
        let text = "[crisp-instance]\npoints = 1\npoint = 0 0 0 x\n";
        assert_eq!(read_instance(text).unwrap_err().line(), Some(3));
        assert_eq!(parse("k = v\n").unwrap_err().line(), Some(1));
        let bad_z = "[solution]\nobjective = crisp\nopen =\nz = 012\nobjectives = 0 0 0\nserved = 0 0 0\nscalar = 0\nfeasible = true\n";
        assert_eq!(read_solution(bad_z).unwrap_err().line(), Some(4));
    }

    #[test]
    fn budget_modes() {
        assert_eq!(parse_budget_mode("card:3"), Ok(BudgetMode::Cardinality(3)));
        assert_eq!(parse_budget_mode("smallest 2"), Ok(BudgetMode::SumSmallest(2)));
        assert_eq!(parse_budget_mode("value:2.5"), Ok(BudgetMode::Explicit(2.5)));
        assert!(parse_budget_mode("card").is_err());
        assert!(parse_budget_mode("most:2").is_err());
    }
}
