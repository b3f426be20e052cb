//! Exhaustive search for desk-scale instances.

use alloc::vec;
use alloc::vec::Vec;

use crate::decode::{row_peak, select_bins};
use crate::error::{Error, Result};
use crate::model::{accumulate_waste, evaluate, Problem, Route, Schedule, COST_TOLERANCE, WASTE_TOLERANCE};

/// Default cap on enumerated states.
pub const DEFAULT_STATE_CAP: f64 = 1e8;

#[derive(Debug, Clone)]
pub struct OracleSolution {
    pub schedule: Schedule,
    pub cost: f64,
    /// Visit-mask combinations that survived capacity pruning.
    pub masks_examined: u64,
}

/// Upper bound on the states [`brute_force`] would enumerate: surviving mask
/// combinations times, per working day, every ordered split of the points.
pub fn state_estimate(problem: &Problem) -> f64 {
    let n = problem.n_points();
    let rows = feasible_rows(problem);
    let masks: f64 = rows.iter().map(|r| r.len() as f64).product();
    let mut per_day = 1.0;
    for k in 1..=n {
        per_day *= k as f64;
    }
    per_day *= libm::pow(2.0, n.saturating_sub(1) as f64);
    masks * per_day * problem.horizon.n_working().max(1) as f64
}

/// Global optimum over all visit masks, bin choices by `select_bins`, and
/// per-day optimal route partitions and orders. Only plans that satisfy every
/// constraint (fleet size and shift length included) are candidates.
/// `Ok(None)` means no feasible plan exists. Ties keep the first plan found.
pub fn brute_force(problem: &Problem, state_cap: f64) -> Result<Option<OracleSolution>> {
    let n = problem.n_points();
    if n > 16 {
        return Err(Error::TooLarge { states: f64::INFINITY, cap: state_cap });
    }
    let states = state_estimate(problem);
    if states > state_cap {
        return Err(Error::TooLarge { states, cap: state_cap });
    }
    let rows = feasible_rows(problem);
    if rows.iter().any(|r| r.is_empty()) {
        return Ok(None);
    }
    let tsp = RouteTable::new(problem);
    let Problem { instance, horizon, catalog, fleet } = problem;
    let days = horizon.n_days();

    let mut best: Option<(f64, Vec<usize>, Vec<Vec<Route>>)> = None;
    let mut examined = 0u64;
    let mut pick = vec![0usize; n];
    let mut mask: Vec<Vec<bool>> = vec![vec![false; days]; n];
    loop {
        for k in 0..n {
            mask[k].clone_from(&rows[k][pick[k]]);
        }
        examined += 1;
        let acc = accumulate_waste(&mask, instance, horizon)?;
        let bins = select_bins(&acc.w_max, catalog)?;
        let bin_cost: f64 = bins.iter().map(|&b| catalog[b].cost).sum();
        if best.as_ref().is_none_or(|(c, _, _)| bin_cost < *c) {
            let service: Vec<f64> = bins.iter().map(|&b| catalog[b].service_minutes).collect();
            let mut minutes = 0.0;
            let mut plan = Vec::with_capacity(days);
            let mut feasible = true;
            for t in 0..days {
                if horizon.is_rest(t) {
                    plan.push(Vec::new());
                    continue;
                }
                let visited: u32 = (0..n).filter(|&k| mask[k][t]).fold(0, |s, k| s | (1 << k));
                let pickups: Vec<f64> = (0..n).map(|k| acc.w[k][t]).collect();
                match tsp.best_day(visited, &pickups, &service, fleet.vehicle_capacity, fleet.shift_minutes, fleet.n_vehicles, fleet.unload_minutes) {
                    Some((m, routes)) => {
                        minutes += m;
                        plan.push(routes);
                    }
                    None => {
                        feasible = false;
                        break;
                    }
                }
            }
            if feasible {
                let cost = bin_cost + fleet.cost_per_minute * minutes;
                if best.as_ref().is_none_or(|(c, _, _)| cost < *c - COST_TOLERANCE * 1e-3) {
                    best = Some((cost, bins, plan));
                }
            }
        }
        // odometer over the per-point rows
        let mut k = 0;
        while k < n {
            pick[k] += 1;
            if pick[k] < rows[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }

    let Some((_, bins, routes)) = best else { return Ok(None) };
    let schedule = Schedule::from_routes(routes, bins, problem)?;
    let report = evaluate(&schedule, problem)?;
    debug_assert!(report.feasible);
    Ok(Some(OracleSolution { cost: report.overall_cost, schedule, masks_examined: examined }))
}

/// Per point, every working-day visit pattern whose peak fits the largest bin
/// and whose pickups fit a vehicle.
fn feasible_rows(problem: &Problem) -> Vec<Vec<Vec<bool>>> {
    let Problem { instance, horizon, catalog, fleet } = problem;
    let working: Vec<usize> = horizon.working_days().collect();
    let cap = catalog.max_capacity().min(f64::INFINITY);
    (1..=instance.n_points())
        .map(|p| {
            let daily = instance.daily_waste(p);
            let mut out = Vec::new();
            if working.len() >= 31 {
                return out;
            }
            for bits in 1u32..(1 << working.len()) {
                let mut row = vec![false; horizon.n_days()];
                for (k, &t) in working.iter().enumerate() {
                    row[t] = bits & (1 << k) != 0;
                }
                let peak = row_peak(&row, daily).unwrap_or(f64::INFINITY);
                let max_pickup = crate::model::accumulate_point(&row, daily)
                    .map(|w| (0..row.len()).filter(|&t| row[t]).map(|t| w[t]).fold(0.0, f64::max))
                    .unwrap_or(f64::INFINITY);
                if peak <= cap + WASTE_TOLERANCE && max_pickup <= fleet.vehicle_capacity + WASTE_TOLERANCE {
                    out.push(row);
                }
            }
            out
        })
        .collect()
}

/// Shortest depot-to-depot travel and its order for every subset of points.
struct RouteTable {
    travel: Vec<f64>,
    order: Vec<Route>,
}

impl RouteTable {
    fn new(problem: &Problem) -> Self {
        let inst = &problem.instance;
        let n = inst.n_points();
        let full = 1usize << n;
        // dp[set][last]: depot -> ... -> last covering set
        let mut dp = vec![f64::INFINITY; full * n.max(1)];
        let mut from = vec![usize::MAX; full * n.max(1)];
        for j in 0..n {
            dp[(1 << j) * n + j] = inst.travel(0, j + 1);
        }
        for set in 1..full {
            for last in 0..n {
                let here = dp[set * n + last];
                if set & (1 << last) == 0 || !here.is_finite() {
                    continue;
                }
                for next in 0..n {
                    if set & (1 << next) != 0 {
                        continue;
                    }
                    let s2 = set | (1 << next);
                    let c = here + inst.travel(last + 1, next + 1);
                    if c < dp[s2 * n + next] {
                        dp[s2 * n + next] = c;
                        from[s2 * n + next] = last;
                    }
                }
            }
        }
        let mut travel = vec![0.0; full];
        let mut order = vec![Vec::new(); full];
        for set in 1..full {
            let (mut best, mut last) = (f64::INFINITY, 0);
            for j in 0..n {
                if set & (1 << j) != 0 {
                    let c = dp[set * n + j] + inst.travel(j + 1, 0);
                    if c < best {
                        best = c;
                        last = j;
                    }
                }
            }
            travel[set] = best;
            let mut seq = Vec::new();
            let mut s = set;
            let mut cur = last;
            loop {
                seq.push(cur + 1);
                let prev = from[s * n + cur];
                s &= !(1 << cur);
                if s == 0 {
                    break;
                }
                cur = prev;
            }
            seq.reverse();
            order[set] = seq;
        }
        Self { travel, order }
    }

    /// Cheapest split of `visited` into at most `max_routes` feasible routes.
    #[allow(clippy::too_many_arguments)]
    fn best_day(
        &self,
        visited: u32,
        pickups: &[f64],
        service: &[f64],
        q: f64,
        shift: f64,
        max_routes: usize,
        unload: f64,
    ) -> Option<(f64, Vec<Route>)> {
        if visited == 0 {
            return Some((0.0, Vec::new()));
        }
        let time = |r: u32| -> Option<f64> {
            let mut load = 0.0;
            let mut serv = 0.0;
            for k in 0..pickups.len() {
                if r & (1 << k) != 0 {
                    load += pickups[k];
                    serv += service[k];
                }
            }
            let t = unload + self.travel[r as usize] + serv;
            (load <= q + WASTE_TOLERANCE && t <= shift + WASTE_TOLERANCE).then_some(t)
        };
        // g[set][c]: cheapest cover of `set` by exactly c routes
        let size = visited as usize + 1;
        let mut g = vec![vec![f64::INFINITY; max_routes + 1]; size];
        let mut choice = vec![vec![0u32; max_routes + 1]; size];
        g[0][0] = 0.0;
        // iterate over sub-masks of `visited` in increasing order
        let mut subs: Vec<u32> = Vec::new();
        let mut s = visited;
        loop {
            subs.push(s);
            if s == 0 {
                break;
            }
            s = (s - 1) & visited;
        }
        subs.reverse();
        for &set in subs.iter().skip(1) {
            let low = set & set.wrapping_neg();
            let rest = set & !low;
            let mut r = rest;
            loop {
                let route = r | low;
                if let Some(t) = time(route) {
                    let remaining = (set & !route) as usize;
                    for c in 1..=max_routes {
                        let v = g[remaining][c - 1] + t;
                        if v < g[set as usize][c] {
                            g[set as usize][c] = v;
                            choice[set as usize][c] = route;
                        }
                    }
                }
                if r == 0 {
                    break;
                }
                r = (r - 1) & rest;
            }
        }
        let (c, &best) = g[visited as usize]
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))?;
        if !best.is_finite() {
            return None;
        }
        let mut routes = Vec::new();
        let (mut set, mut c) = (visited, c);
        while set != 0 {
            let route = choice[set as usize][c];
            routes.push(self.order[route as usize].clone());
            set &= !route;
            c -= 1;
        }
        Some((best, routes))
    }
}
