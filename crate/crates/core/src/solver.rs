//! Exact branch-and-bound over open facility sets.
//!
//! Coverage variables are never branched on: with the open set fixed they
//! are forced to their upper bound, which maximizes every objective at
//! once. The search therefore runs over subsets of candidate facilities.
//!
//! A solve has two phases, both depth-first. The first proves the optimal
//! value. The second searches again with the prune threshold relaxed to
//! [`tie_tolerance`] above that value and keeps the reaching open set with
//! the fewest facilities, then the lexicographically smallest index list.
//!
//! Bounds come from relaxing the coverage rows `z_i <= Σ_{j ∈ J_i} y_j`
//! with multipliers. For fixed multipliers the remaining problem splits
//! into a free sum over points plus a fractional knapsack per budget row,
//! and subgradient steps tighten the multipliers node by node. Branching
//! opens the candidate with the largest fractional level in the relaxed
//! solution first.

use alloc::vec;
use alloc::vec::Vec;

use crate::problem::{
    evaluate, tie_tolerance, Criterion, ObjectiveTriple, Problem, ScalarObjective, Solution,
    WeightVector, BUDGET_TOL,
};

/// Prune margin on bounds.
const PRUNE_TOL: f64 = 1e-9;

/// Subgradient iterations per bound at the root and elsewhere.
const ROOT_ITERS: usize = 60;
const NODE_ITERS: usize = 10;

/// Receives one record per explored node.
pub trait NodeLog {
    fn node(&mut self, depth: usize, bound: f64, incumbent: f64);
}

impl NodeLog for () {
    fn node(&mut self, _: usize, _: f64, _: f64) {}
}

impl<F: FnMut(usize, f64, f64)> NodeLog for F {
    fn node(&mut self, depth: usize, bound: f64, incumbent: f64) {
        self(depth, bound, incumbent)
    }
}

/// Search effort of a single solve.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
}

/// Internal minimization goal.
#[derive(Debug, Clone, Copy)]
enum Goal {
    /// Maximize `c · F`.
    Linear([f64; 3]),
    Tcheby {
        weights: WeightVector,
        ideal: ObjectiveTriple,
    },
    /// Maximize `F₁ + F₂ + F₃` subject to `F >= floor`.
    Dominate([f64; 3]),
}

const SUM: [f64; 3] = [1.0, 1.0, 1.0];
const DIRS_DOMINATE: [[f64; 3]; 4] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], SUM];

impl Goal {
    fn directions(&self) -> Vec<[f64; 3]> {
        match self {
            Goal::Linear(c) => vec![*c],
            Goal::Tcheby { weights, .. } => {
                let mut d: Vec<[f64; 3]> = Criterion::ALL
                    .iter()
                    .filter(|r| weights.lambda[r.index()] > 0.0)
                    .map(|r| r.unit())
                    .collect();
                if weights.rho > 0.0 {
                    d.push(SUM);
                }
                d
            }
            Goal::Dominate(_) => DIRS_DOMINATE.to_vec(),
        }
    }

    fn score_weights(&self) -> [f64; 3] {
        match self {
            Goal::Linear(c) => *c,
            Goal::Tcheby { weights, .. } => {
                let l = weights.lambda;
                let s = if l.iter().all(|x| *x == 0.0) { 1.0 } else { 0.0 };
                [l[0] + s, l[1] + s, l[2] + s]
            }
            Goal::Dominate(_) => SUM,
        }
    }

    /// Minimized value of `f`; `None` when `f` is not admissible.
    fn value(&self, f: &[f64; 3]) -> Option<f64> {
        match self {
            Goal::Linear(c) => Some(-dot(c, f)),
            Goal::Tcheby { weights, ideal } => {
                Some(weights.tchebycheff(ideal, &ObjectiveTriple(*f)))
            }
            Goal::Dominate(floor) => {
                if (0..3).all(|r| f[r] >= floor[r] - PRUNE_TOL) {
                    Some(-(f[0] + f[1] + f[2]))
                } else {
                    None
                }
            }
        }
    }

    /// Lower bound from `ub[k]`, an upper bound on `directions()[k] · F`.
    fn lower_bound(&self, ub: &[f64]) -> Option<f64> {
        match self {
            Goal::Linear(_) => Some(-ub[0]),
            Goal::Tcheby { weights, ideal } => {
                let mut k = 0;
                let mut worst = 0.0f64;
                for r in 0..3 {
                    if weights.lambda[r] > 0.0 {
                        worst = worst.max(weights.lambda[r] * (ideal.0[r] - ub[k]));
                        k += 1;
                    }
                }
                let mut lb = worst;
                if weights.rho > 0.0 {
                    lb += weights.rho * (ideal.sum() - ub[k]);
                }
                Some(lb)
            }
            Goal::Dominate(floor) => {
                if (0..3).any(|r| ub[r] < floor[r] - PRUNE_TOL) {
                    None
                } else {
                    Some(-ub[3])
                }
            }
        }
    }
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Problem restricted to the facilities and points that can matter.
struct Reduced {
    point_w: Vec<[f64; 3]>,
    fac_points: Vec<Vec<u32>>,
    fac_cost: Vec<[f64; 3]>,
    /// Original index of each reduced facility; ascending.
    fac_orig: Vec<usize>,
    /// Reduced representative of each original facility, if any.
    alias: Vec<Option<usize>>,
    budget: [f64; 3],
}

impl Reduced {
    /// Drops points nobody covers or with zero demand, facilities that cover
    /// no demand or exceed the budget alone, and duplicate facilities
    /// (same coverage and cost triplet, smallest index kept).
    fn new(problem: &Problem) -> Self {
        let budget = problem.budget().triplet();
        let mut point_map = vec![u32::MAX; problem.num_points()];
        let mut point_w = Vec::new();
        for (i, w) in problem.demands().iter().enumerate() {
            let w = w.triplet();
            if !problem.coverage().covering(i).is_empty() && w.iter().any(|x| *x > 0.0) {
                point_map[i] = point_w.len() as u32;
                point_w.push(w);
            }
        }
        let mut fac_points = Vec::new();
        let mut fac_cost = Vec::new();
        let mut fac_orig = Vec::new();
        let mut alias = vec![None; problem.num_facilities()];
        for (j, pts) in problem.coverage().by_facility().into_iter().enumerate() {
            let cost = problem.costs()[j].triplet();
            if (0..3).any(|b| cost[b] > budget[b] + BUDGET_TOL) {
                continue;
            }
            let pts: Vec<u32> = pts
                .into_iter()
                .map(|i| point_map[i])
                .filter(|p| *p != u32::MAX)
                .collect();
            if pts.is_empty() {
                continue;
            }
            let duplicate = fac_points
                .iter()
                .zip(&fac_cost)
                .position(|(q, c): (&Vec<u32>, &[f64; 3])| *q == pts && *c == cost);
            if let Some(k) = duplicate {
                alias[j] = Some(k);
                continue;
            }
            alias[j] = Some(fac_points.len());
            fac_points.push(pts);
            fac_cost.push(cost);
            fac_orig.push(j);
        }
        Self {
            point_w,
            fac_points,
            fac_cost,
            fac_orig,
            alias,
            budget,
        }
    }

    fn len(&self) -> usize {
        self.fac_orig.len()
    }
}

struct Candidate {
    fac: usize,
    gain: [f64; 3],
}

struct Search<'a> {
    red: &'a Reduced,
    goal: Goal,
    dirs: Vec<[f64; 3]>,
    count: Vec<u32>,
    open: Vec<usize>,
    used: [f64; 3],
    f: [f64; 3],
    stamp: Vec<u32>,
    generation: u32,
    /// Objectives of the incumbent; steers the subgradient targets.
    reference: Option<[f64; 3]>,
    /// Set at the start of a phase; the first bound iterates longer.
    fresh: bool,
    /// Lagrange multipliers per direction and point.
    mult: Vec<Vec<f64>>,
    reachable: Vec<u32>,
    ycov: Vec<f64>,
    y: Vec<f64>,
    y_row: Vec<f64>,
    items: Vec<(f64, f64, usize)>,
    gains: Vec<f64>,
    /// Fractional open levels behind the last bound, for branching.
    ybest: Vec<f64>,
    nodes: u64,
    log: &'a mut dyn NodeLog,
}

impl<'a> Search<'a> {
    fn new(red: &'a Reduced, goal: Goal, log: &'a mut dyn NodeLog) -> Self {
        Self {
            dirs: goal.directions(),
            goal,
            count: vec![0; red.point_w.len()],
            open: Vec::new(),
            used: [0.0; 3],
            f: [0.0; 3],
            stamp: vec![0; red.point_w.len()],
            generation: 0,
            reference: None,
            fresh: true,
            mult: vec![vec![f64::INFINITY; red.point_w.len()]; goal.directions().len()],
            reachable: Vec::new(),
            ycov: vec![0.0; red.point_w.len()],
            y: Vec::new(),
            y_row: Vec::new(),
            items: Vec::new(),
            gains: Vec::new(),
            ybest: Vec::new(),
            nodes: 0,
            log,
            red,
        }
    }

    fn push(&mut self, j: usize) {
        for &p in &self.red.fac_points[j] {
            let p = p as usize;
            if self.count[p] == 0 {
                for r in 0..3 {
                    self.f[r] += self.red.point_w[p][r];
                }
            }
            self.count[p] += 1;
        }
        for b in 0..3 {
            self.used[b] += self.red.fac_cost[j][b];
        }
        self.open.push(j);
    }

    fn pop(&mut self, saved_f: [f64; 3], saved_used: [f64; 3]) {
        let j = self.open.pop().expect("pop on empty open set");
        for &p in &self.red.fac_points[j] {
            self.count[p as usize] -= 1;
        }
        self.f = saved_f;
        self.used = saved_used;
    }

    /// Closes every open facility.
    fn clear(&mut self) {
        while let Some(j) = self.open.pop() {
            for &p in &self.red.fac_points[j] {
                self.count[p as usize] -= 1;
            }
        }
        self.f = [0.0; 3];
        self.used = [0.0; 3];
    }

    fn fits(&self, j: usize) -> bool {
        let c = &self.red.fac_cost[j];
        (0..3).all(|b| self.used[b] + c[b] <= self.red.budget[b] + BUDGET_TOL)
    }

    /// Candidates from `pool` that fit the residual budget and still add
    /// demand along some search direction.
    fn candidates(&self, pool: impl Iterator<Item = usize>) -> Vec<Candidate> {
        let mut out = Vec::new();
        for j in pool {
            if !self.fits(j) {
                continue;
            }
            let mut gain = [0.0; 3];
            for &p in &self.red.fac_points[j] {
                let p = p as usize;
                if self.count[p] == 0 {
                    for r in 0..3 {
                        gain[r] += self.red.point_w[p][r];
                    }
                }
            }
            if self.dirs.iter().any(|c| dot(c, &gain) > 0.0) {
                out.push(Candidate { fac: j, gain });
            }
        }
        out
    }

    /// Lower bound on the goal over completions of the current open set
    /// using only `cands`, with at most `slots` more facilities.
    fn bound(&mut self, cands: &[Candidate], slots: usize) -> Option<f64> {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
        self.reachable.clear();
        self.ybest.clear();
        for c in cands {
            for &p in &self.red.fac_points[c.fac] {
                let p = p as usize;
                if self.count[p] == 0 && self.stamp[p] != self.generation {
                    self.stamp[p] = self.generation;
                    self.reachable.push(p as u32);
                }
            }
        }
        let mut ub = Vec::with_capacity(self.dirs.len());
        for k in 0..self.dirs.len() {
            let dir = self.dirs[k];
            let base = dot(&dir, &self.f);
            let target = self.reference.map_or(base, |r| dot(&dir, &r)) - base;
            ub.push(base + self.lagrangian(k, cands, slots, target));
        }
        self.fresh = false;
        self.goal.lower_bound(&ub)
    }

    /// Upper bound on the extra value along direction `k`.
    ///
    /// Relaxes `z_i <= Σ_j y_j` with multipliers `u_i ∈ [0, w_i]`:
    /// `L(u) = Σ_i (w_i - u_i) + max_y Σ_j y_j Σ_{i ∈ I_j} u_i`, the inner
    /// maximum taken over the fractional knapsack of each budget row (and
    /// the slot count), keeping the smallest. `u = w` gives the plain
    /// marginal-gain knapsack bound. Subgradient steps move `u` toward
    /// `target`, stopping once the bound falls below it; multipliers are
    /// kept between calls as a warm start.
    fn lagrangian(&mut self, k: usize, cands: &[Candidate], slots: usize, target: f64) -> f64 {
        let red = self.red;
        let dir = self.dirs[k];
        let mut mult = core::mem::take(&mut self.mult[k]);
        let mut ycov = core::mem::take(&mut self.ycov);
        let mut y = core::mem::take(&mut self.y);
        let mut y_row = core::mem::take(&mut self.y_row);
        let mut items = core::mem::take(&mut self.items);
        let mut gains = core::mem::take(&mut self.gains);

        let mut best = 0.0;
        for &p in &self.reachable {
            let p = p as usize;
            let w = dot(&dir, &red.point_w[p]);
            best += w;
            mult[p] = mult[p].clamp(0.0, w);
        }
        let rows = if slots < cands.len() { 4 } else { 3 };
        let iters = if self.fresh { ROOT_ITERS } else { NODE_ITERS };
        let mut theta = 1.0;
        let mut stall = 0;
        y.resize(cands.len(), 0.0);
        y_row.resize(cands.len(), 0.0);
        for _ in 0..iters {
            if best <= target {
                break;
            }
            let mut value = 0.0;
            for &p in &self.reachable {
                let p = p as usize;
                value += dot(&dir, &red.point_w[p]) - mult[p];
            }
            gains.clear();
            for c in cands {
                let mut g = 0.0;
                for &p in &red.fac_points[c.fac] {
                    if self.count[p as usize] == 0 {
                        g += mult[p as usize];
                    }
                }
                gains.push(g);
            }
            let mut best_row = f64::INFINITY;
            for b in 0..rows {
                items.clear();
                let cap = if b < 3 {
                    items.extend(
                        cands
                            .iter()
                            .enumerate()
                            .map(|(i, c)| (gains[i], red.fac_cost[c.fac][b], i)),
                    );
                    red.budget[b] - self.used[b] + BUDGET_TOL
                } else {
                    items.extend((0..cands.len()).map(|i| (gains[i], 1.0, i)));
                    slots as f64
                };
                let v = fractional_knapsack(&mut items, cap, &mut y_row);
                if v < best_row {
                    best_row = v;
                    core::mem::swap(&mut y, &mut y_row);
                }
            }
            value += best_row;
            if value < best - 1e-12 {
                best = value;
                stall = 0;
                self.ybest.clear();
                self.ybest.extend_from_slice(&y[..cands.len()]);
            } else {
                stall += 1;
                if stall >= 3 {
                    theta *= 0.5;
                    stall = 0;
                }
            }
            if best <= target {
                break;
            }
            for &p in &self.reachable {
                ycov[p as usize] = 0.0;
            }
            for (i, c) in cands.iter().enumerate() {
                if y[i] > 0.0 {
                    for &p in &red.fac_points[c.fac] {
                        if self.count[p as usize] == 0 {
                            ycov[p as usize] += y[i];
                        }
                    }
                }
            }
            let norm2: f64 = self
                .reachable
                .iter()
                .map(|&p| {
                    let s = ycov[p as usize] - 1.0;
                    s * s
                })
                .sum();
            if norm2 < 1e-12 {
                break;
            }
            let step = theta * (value - target) / norm2;
            for &p in &self.reachable {
                let p = p as usize;
                let w = dot(&dir, &red.point_w[p]);
                mult[p] = (mult[p] - step * (ycov[p] - 1.0)).clamp(0.0, w);
            }
        }

        self.mult[k] = mult;
        self.ycov = ycov;
        self.y = y;
        self.y_row = y_row;
        self.items = items;
        self.gains = gains;
        best
    }

    fn current_value(&self) -> Option<f64> {
        self.goal.value(&self.f)
    }
}

/// Optimal value of the fractional knapsack over `(gain, weight, slot)`
/// items; `y[slot]` receives each item's fraction.
fn fractional_knapsack(items: &mut [(f64, f64, usize)], capacity: f64, y: &mut [f64]) -> f64 {
    fn ratio(item: &(f64, f64, usize)) -> f64 {
        if item.1 > 0.0 {
            item.0 / item.1
        } else {
            f64::INFINITY
        }
    }
    let mut cap = capacity.max(0.0);
    // Only the items that can fit need ordering.
    let mut free = 0;
    let mut min_w = f64::INFINITY;
    for it in items.iter() {
        if it.1 > 0.0 {
            min_w = min_w.min(it.1);
        } else {
            free += 1;
        }
    }
    let need = free + libm::floor(cap / min_w).min(items.len() as f64) as usize + 1;
    let head = if need < items.len() {
        items.select_nth_unstable_by(need, |a, b| ratio(b).total_cmp(&ratio(a)));
        for it in &items[need..] {
            y[it.2] = 0.0;
        }
        &mut items[..need]
    } else {
        &mut items[..]
    };
    head.sort_unstable_by(|a, b| ratio(b).total_cmp(&ratio(a)));
    let mut total = 0.0;
    for &(g, w, slot) in head.iter() {
        let frac = if w <= cap || w <= 0.0 { 1.0 } else { cap / w };
        y[slot] = frac;
        total += g * frac;
        if w > 0.0 {
            cap -= w * frac;
        }
    }
    total
}

/// Greedy construction followed by single swaps; a quick incumbent.
fn local_search(red: &Reduced, goal: &Goal) -> Option<(f64, Vec<usize>)> {
    const MAX_PASSES: usize = 64;
    let score_w = goal.score_weights();
    let m = red.len();
    let mut count = vec![0u32; red.point_w.len()];
    let mut is_open = vec![false; m];
    let mut used = [0.0; 3];
    let mut f = [0.0; 3];
    let gain = |count: &[u32], j: usize| {
        let mut g = [0.0; 3];
        for &p in &red.fac_points[j] {
            if count[p as usize] == 0 {
                for r in 0..3 {
                    g[r] += red.point_w[p as usize][r];
                }
            }
        }
        g
    };
    let fits = |used: &[f64; 3], j: usize| {
        (0..3).all(|b| used[b] + red.fac_cost[j][b] <= red.budget[b] + BUDGET_TOL)
    };
    let toggle = |count: &mut [u32], used: &mut [f64; 3], f: &mut [f64; 3], j: usize, on: bool| {
        for &p in &red.fac_points[j] {
            let p = p as usize;
            if on {
                if count[p] == 0 {
                    (0..3).for_each(|r| f[r] += red.point_w[p][r]);
                }
                count[p] += 1;
            } else {
                count[p] -= 1;
                if count[p] == 0 {
                    (0..3).for_each(|r| f[r] -= red.point_w[p][r]);
                }
            }
        }
        let sign = if on { 1.0 } else { -1.0 };
        (0..3).for_each(|b| used[b] += sign * red.fac_cost[j][b]);
    };
    let fill = |count: &mut [u32], used: &mut [f64; 3], f: &mut [f64; 3], is_open: &mut [bool]| loop {
        let mut best = (0.0, usize::MAX);
        for j in 0..m {
            if is_open[j] || !fits(used, j) {
                continue;
            }
            let s = dot(&score_w, &gain(count, j)) / red.fac_cost[j][1].max(1e-12);
            if s > best.0 {
                best = (s, j);
            }
        }
        if best.1 == usize::MAX {
            break;
        }
        is_open[best.1] = true;
        toggle(count, used, f, best.1, true);
    };
    let value = |f: &[f64; 3]| goal.value(f).unwrap_or(f64::INFINITY);

    fill(&mut count, &mut used, &mut f, &mut is_open);
    let mut current = value(&f);
    for _ in 0..MAX_PASSES {
        let mut improved = false;
        for a in 0..m {
            if !is_open[a] {
                continue;
            }
            toggle(&mut count, &mut used, &mut f, a, false);
            let mut best = (current - PRUNE_TOL, usize::MAX);
            for b in 0..m {
                if is_open[b] || b == a || !fits(&used, b) {
                    continue;
                }
                let g = gain(&count, b);
                let v = value(&[f[0] + g[0], f[1] + g[1], f[2] + g[2]]);
                if v < best.0 {
                    best = (v, b);
                }
            }
            if best.1 == usize::MAX {
                toggle(&mut count, &mut used, &mut f, a, true);
                continue;
            }
            is_open[a] = false;
            is_open[best.1] = true;
            toggle(&mut count, &mut used, &mut f, best.1, true);
            fill(&mut count, &mut used, &mut f, &mut is_open);
            current = value(&f);
            improved = true;
        }
        if !improved {
            break;
        }
    }
    let open: Vec<usize> = (0..m).filter(|&j| is_open[j]).collect();
    current.is_finite().then_some((current, open))
}

/// Phase one: proves the optimal value. Returns it with an optimizer.
fn prove_optimum(search: &mut Search<'_>, hints: &[Vec<usize>]) -> (f64, Vec<usize>) {
    let mut best = search.current_value().unwrap_or(f64::INFINITY);
    let mut best_set = Vec::new();
    for hint in hints {
        let mut ok = true;
        for &j in hint {
            if !search.fits(j) {
                ok = false;
                break;
            }
            search.push(j);
        }
        if ok {
            if let Some(v) = search.current_value() {
                if v < best - PRUNE_TOL {
                    best = v;
                    best_set = search.open.clone();
                    search.reference = Some(search.f);
                }
            }
        }
        search.clear();
    }
    if let Some((v, set)) = local_search(search.red, &search.goal) {
        if v < best - PRUNE_TOL {
            best = v;
            for &j in &set {
                search.push(j);
            }
            search.reference = Some(search.f);
            search.clear();
            best_set = set;
        }
    }
    let pool: Vec<usize> = (0..search.red.len()).collect();
    search.fresh = true;
    dive(search, &pool, &mut best, &mut best_set);
    (best, best_set)
}

/// Branching facility: the best gain per unit of center cost.
fn pick(search: &Search<'_>, cands: &[Candidate]) -> usize {
    let score_w = search.goal.score_weights();
    let mut best = (f64::NEG_INFINITY, f64::NEG_INFINITY, 0);
    for (i, c) in cands.iter().enumerate() {
        let cost = search.red.fac_cost[c.fac][1].max(1e-12);
        let s = dot(&score_w, &c.gain) / cost;
        let y = search.ybest.get(i).copied().unwrap_or(0.0);
        if (y, s) > (best.0, best.1) {
            best = (y, s, c.fac);
        }
    }
    best.2
}

fn dive(
    search: &mut Search<'_>,
    pool: &[usize],
    best: &mut f64,
    best_set: &mut Vec<usize>,
) {
    search.nodes += 1;
    if let Some(v) = search.current_value() {
        if v < *best - PRUNE_TOL {
            *best = v;
            *best_set = search.open.clone();
            search.reference = Some(search.f);
        }
    }
    let cands = search.candidates(pool.iter().copied());
    if cands.is_empty() {
        return;
    }
    let lb = search.bound(&cands, usize::MAX);
    search.log.node(search.open.len(), lb.unwrap_or(f64::INFINITY), *best);
    match lb {
        Some(lb) if lb < *best - PRUNE_TOL => {}
        _ => return,
    }
    let j = pick(search, &cands);
    let rest: Vec<usize> = cands.iter().map(|c| c.fac).filter(|&f| f != j).collect();
    let saved = (search.f, search.used);
    search.push(j);
    dive(search, &rest, best, best_set);
    search.pop(saved.0, saved.1);
    dive(search, &rest, best, best_set);
}

/// Phase two: the open set reaching `target` that comes first by size,
/// then lexicographically. Starts from the phase-one incumbent.
fn settle(search: &mut Search<'_>, target: f64, incumbent: Vec<usize>) -> Vec<usize> {
    fn shorter(a: &[usize], b: &[usize]) -> bool {
        (a.len(), a) < (b.len(), b)
    }
    fn visit(search: &mut Search<'_>, pool: &[usize], target: f64, best: &mut Vec<usize>) {
        search.nodes += 1;
        if matches!(search.current_value(), Some(v) if v <= target) {
            let mut s = search.open.clone();
            s.sort_unstable();
            if shorter(&s, best) {
                *best = s;
            }
            return;
        }
        // Any completion needs another facility.
        if search.open.len() >= best.len() {
            return;
        }
        let cands = search.candidates(pool.iter().copied());
        if cands.is_empty() {
            return;
        }
        let lb = search.bound(&cands, best.len() - search.open.len());
        search.log.node(search.open.len(), lb.unwrap_or(f64::INFINITY), target);
        match lb {
            Some(lb) if lb <= target + PRUNE_TOL => {}
            _ => return,
        }
        let j = pick(search, &cands);
        let rest: Vec<usize> = cands.iter().map(|c| c.fac).filter(|&f| f != j).collect();
        let saved = (search.f, search.used);
        search.push(j);
        visit(search, &rest, target, best);
        search.pop(saved.0, saved.1);
        visit(search, &rest, target, best);
    }
    let mut best = incumbent;
    best.sort_unstable();
    let pool: Vec<usize> = (0..search.red.len()).collect();
    search.fresh = true;
    visit(search, &pool, target, &mut best);
    search.clear();
    best
}

fn run(
    problem: &Problem,
    goal: Goal,
    hints: &[Vec<usize>],
    log: &mut dyn NodeLog,
) -> (Vec<usize>, SearchStats) {
    let red = Reduced::new(problem);
    // Hints arrive in original indices. Duplicates map to their kept twin;
    // dropped facilities contribute no demand and vanish.
    let hints: Vec<Vec<usize>> = hints
        .iter()
        .map(|h| {
            let mut r: Vec<usize> = h
                .iter()
                .filter_map(|&j| red.alias.get(j).copied().flatten())
                .collect();
            r.sort_unstable();
            r.dedup();
            r
        })
        .collect();
    let mut search = Search::new(&red, goal, log);
    let (value, incumbent) = prove_optimum(&mut search, &hints);
    let chosen = settle(&mut search, value + tie_tolerance(value), incumbent);
    let mut open: Vec<usize> = chosen.iter().map(|&j| red.fac_orig[j]).collect();
    open.sort_unstable();
    (
        open,
        SearchStats {
            nodes: search.nodes,
        },
    )
}

fn finish(problem: &Problem, open: &[usize], objective: &ScalarObjective) -> Solution {
    let mut sol = evaluate(problem, open).expect("solver returned an unknown facility");
    sol.scalar_value = match objective {
        ScalarObjective::Single(r) => sol.objectives.get(*r),
        ScalarObjective::AugTcheby { weights, ideal } => {
            weights.tchebycheff(ideal, &sol.objectives)
        }
    };
    sol
}

fn goal_of(objective: &ScalarObjective) -> Goal {
    match *objective {
        ScalarObjective::Single(r) => Goal::Linear(r.unit()),
        ScalarObjective::AugTcheby { weights, ideal } => Goal::Tcheby { weights, ideal },
    }
}

/// Exact optimum of a scalarization over all budget-feasible open sets.
///
/// Among optimizers within [`tie_tolerance`], returns the one with fewest
/// open facilities, then the lexicographically smallest.
pub fn solve_scalar(problem: &Problem, objective: &ScalarObjective) -> Solution {
    solve_scalar_with(problem, objective, &[], &mut ()).0
}

/// [`solve_scalar`] with warm-start open sets and a node log.
pub fn solve_scalar_with(
    problem: &Problem,
    objective: &ScalarObjective,
    hints: &[Vec<usize>],
    log: &mut dyn NodeLog,
) -> (Solution, SearchStats) {
    let (open, stats) = run(problem, goal_of(objective), hints, log);
    (finish(problem, &open, objective), stats)
}

/// Ideal point with the single-objective optimizers that attain each
/// component.
#[derive(Debug, Clone, PartialEq)]
pub struct Ideal {
    pub point: ObjectiveTriple,
    pub optimizers: [Solution; 3],
}

pub fn ideal_point(problem: &Problem) -> ObjectiveTriple {
    ideal_point_with(problem, &mut ()).point
}

pub fn ideal_point_with(problem: &Problem, log: &mut dyn NodeLog) -> Ideal {
    let mut solve = |r: Criterion, hints: &[Vec<usize>]| {
        solve_scalar_with(problem, &ScalarObjective::Single(r), hints, log).0
    };
    let center = solve(Criterion::Center, &[]);
    let lower = solve(Criterion::Lower, &[center.open.clone()]);
    let upper = solve(Criterion::Upper, &[center.open.clone()]);
    Ideal {
        point: ObjectiveTriple([
            lower.objectives.0[0],
            center.objectives.0[1],
            upper.objectives.0[2],
        ]),
        optimizers: [lower, center, upper],
    }
}

/// ℓ1 compromise: the Tchebycheff scalarization with `(λ, ρ) = (0, 0, 0, 1)`.
pub fn csp1(problem: &Problem, ideal: ObjectiveTriple) -> Solution {
    let weights = WeightVector {
        lambda: [0.0; 3],
        rho: 1.0,
    };
    solve_scalar(problem, &ScalarObjective::AugTcheby { weights, ideal })
}

/// ℓ∞ compromise: the Tchebycheff scalarization with `(λ, ρ) = (1, 1, 1, 0)`.
/// Only weakly Pareto in general.
pub fn cspinf(problem: &Problem, ideal: ObjectiveTriple) -> Solution {
    let weights = WeightVector {
        lambda: [1.0; 3],
        rho: 0.0,
    };
    solve_scalar(problem, &ScalarObjective::AugTcheby { weights, ideal })
}

/// Maximizes `F₁ + F₂ + F₃` over open sets whose objectives dominate
/// `floor` componentwise. `hint` must reach the floor.
pub(crate) fn maximize_dominating(
    problem: &Problem,
    floor: ObjectiveTriple,
    hint: &[usize],
) -> Solution {
    let (open, _) = run(problem, Goal::Dominate(floor.0), &[hint.to_vec()], &mut ());
    let mut sol = evaluate(problem, &open).expect("solver returned an unknown facility");
    sol.scalar_value = sol.objectives.sum();
    sol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::Tfn;
    use crate::instance::CoverageMap;
    use crate::problem::fixtures::{tfn, toy};

    #[test]
    fn zero_budget_opens_nothing() {
        let p = toy(Tfn::ZERO);
        let s = solve_scalar(&p, &ScalarObjective::Single(Criterion::Center));
        assert!(s.open.is_empty());
        assert_eq!(s.objectives, ObjectiveTriple([0.0; 3]));
        assert_eq!(ideal_point(&p), ObjectiveTriple([0.0; 3]));
    }

    #[test]
    fn toy_single_and_ideal() {
        let p = toy(Tfn::crisp(1.0));
        let s = solve_scalar(&p, &ScalarObjective::Single(Criterion::Center));
        assert_eq!(s.open, [0]);
        assert_eq!(s.scalar_value, 6.0);
        assert_eq!(ideal_point(&p), ObjectiveTriple([3.0, 6.0, 9.0]));
        let c1 = csp1(&p, ideal_point(&p));
        assert_eq!(c1.open, [0]);
        assert_eq!(c1.scalar_value, 0.0);
        let ci = cspinf(&p, ideal_point(&p));
        assert_eq!(ci.open, [0]);
    }

    #[test]
    fn attained_ideal_gives_zero_tcheby() {
        let p = toy(Tfn::crisp(2.0));
        let ideal = ideal_point(&p);
        let weights = WeightVector::new(1.0, 1.0, 1.0, 0.001).unwrap();
        let s = solve_scalar(&p, &ScalarObjective::AugTcheby { weights, ideal });
        assert_eq!(s.open, [0, 1]);
        assert_eq!(s.scalar_value, 0.0);
    }

    #[test]
    fn unattainable_ideal() {
        // Facility 0 serves a point with a wide triplet, facility 1 a narrow
        // one with a larger lower extreme; only one may open.
        let p = Problem::new(
            CoverageMap::new(2, vec![vec![0], vec![1]]).unwrap(),
            vec![tfn(1.0, 5.0, 20.0), tfn(4.0, 5.0, 6.0)],
            vec![Tfn::crisp(1.0), Tfn::crisp(1.0)],
            Tfn::crisp(1.0),
        )
        .unwrap();
        let ideal = ideal_point(&p);
        assert_eq!(ideal, ObjectiveTriple([4.0, 5.0, 20.0]));
        for s in [vec![], vec![0], vec![1]] {
            assert_ne!(evaluate(&p, &s).unwrap().objectives, ideal);
        }
    }

    #[test]
    fn prefers_fewest_then_smallest_indices() {
        // Facilities 0 and 1 both cover everything; 2 covers nothing useful.
        let p = Problem::new(
            CoverageMap::new(3, vec![vec![0, 1], vec![0, 1]]).unwrap(),
            vec![Tfn::crisp(1.0), Tfn::crisp(1.0)],
            vec![Tfn::crisp(1.0), Tfn::crisp(1.0), Tfn::crisp(1.0)],
            Tfn::crisp(3.0),
        )
        .unwrap();
        let s = solve_scalar(&p, &ScalarObjective::Single(Criterion::Center));
        assert_eq!(s.open, [0]);
    }

    #[test]
    fn fractional_knapsack_bound() {
        let mut items = vec![(10.0, 5.0, 0), (6.0, 2.0, 1), (1.0, 0.0, 2)];
        let mut y = vec![0.0; 3];
        assert_eq!(
            fractional_knapsack(&mut items, 4.5, &mut y),
            1.0 + 6.0 + 10.0 * 0.5
        );
        assert_eq!(y, [0.5, 1.0, 1.0]);
        let mut none: Vec<(f64, f64, usize)> = vec![];
        assert_eq!(fractional_knapsack(&mut none, 3.0, &mut []), 0.0);
    }

    #[test]
    fn node_log_records() {
        let p = toy(Tfn::crisp(1.0));
        let mut lines = 0usize;
        let mut log = |_: usize, _: f64, _: f64| lines += 1;
        let (_, stats) = solve_scalar_with(
            &p,
            &ScalarObjective::Single(Criterion::Center),
            &[],
            &mut log,
        );
        assert!(stats.nodes >= 1);
        assert!(lines >= 1);
    }
}
