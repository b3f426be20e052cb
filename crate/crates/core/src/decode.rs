//! Mixed chromosome and its translation into a [`Schedule`].
//!
//! A chromosome holds, for every day, the order in which the points would be
//! visited if all of them were collected, and a binary mask telling which
//! points are actually collected on which day. Decoding computes the
//! steady-state accumulations implied by the mask, sizes the bins from the
//! peaks, and cuts each day's visiting order into vehicle routes greedily by
//! capacity.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{
    accumulate_point, accumulate_waste, route_loads, route_time, BinCatalog, FleetParams, Horizon, Problem,
    Route, Schedule, COST_TOLERANCE, WASTE_TOLERANCE,
};

/// Default service-time indifference (minutes) used when discarding
/// dominated bin combinations: a combination only dominates another if it
/// is faster by more than this.
pub const SERVICE_INDIFFERENCE: f64 = 0.1;

/// `perms[day]` is a visiting order of all points `1..=n`; `mask[point-1][day]`
/// says whether the point is collected that day.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Chromosome {
    pub perms: Vec<Vec<usize>>,
    pub mask: Vec<Vec<bool>>,
}

impl Chromosome {
    pub fn new(perms: Vec<Vec<usize>>, mask: Vec<Vec<bool>>) -> Self {
        Self { perms, mask }
    }

    /// Builds a chromosome from rank tables, `positions[day][point-1]` being
    /// the 0-based position of the point in that day's visiting order.
    pub fn from_positions(positions: &[Vec<usize>], mask: Vec<Vec<bool>>) -> Result<Self> {
        let mut perms = Vec::with_capacity(positions.len());
        for (day, ranks) in positions.iter().enumerate() {
            let n = ranks.len();
            let mut order = vec![0usize; n];
            for (k, &pos) in ranks.iter().enumerate() {
                if pos >= n || order[pos] != 0 {
                    return Err(Error::InvalidInput(format!("day {day}: positions are not a permutation")));
                }
                order[pos] = k + 1;
            }
            perms.push(order);
        }
        Ok(Self { perms, mask })
    }

    /// Inverse of [`Chromosome::from_positions`].
    pub fn positions(&self) -> Vec<Vec<usize>> {
        self.perms
            .iter()
            .map(|order| {
                let mut ranks = vec![0usize; order.len()];
                for (pos, &p) in order.iter().enumerate() {
                    ranks[p - 1] = pos;
                }
                ranks
            })
            .collect()
    }

    pub fn n_points(&self) -> usize {
        self.mask.len()
    }

    pub fn n_days(&self) -> usize {
        self.perms.len()
    }

    pub fn visits(&self, point: usize, day: usize) -> bool {
        self.mask[point - 1][day]
    }

    /// Checks shapes, permutation rows and that rest days carry no visits.
    pub fn validate(&self, problem: &Problem) -> Result<()> {
        let n = problem.n_points();
        let days = problem.n_days();
        if self.perms.len() != days || self.mask.len() != n {
            return Err(Error::InvalidInput(format!(
                "chromosome shape {}x{} does not match {n} points x {days} days",
                self.mask.len(),
                self.perms.len()
            )));
        }
        for (day, row) in self.perms.iter().enumerate() {
            if !is_permutation(row, n) {
                return Err(Error::InvalidInput(format!("day {day} order is not a permutation of 1..={n}")));
            }
        }
        for (k, row) in self.mask.iter().enumerate() {
            if row.len() != days {
                return Err(Error::InvalidInput(format!("mask row {} has {} days", k + 1, row.len())));
            }
            if let Some(d) = problem.horizon.rest_days().find(|&d| row[d]) {
                return Err(Error::InvalidInput(format!("point {} visited on rest day {d}", k + 1)));
            }
        }
        Ok(())
    }
}

/// True when `row` holds each of `1..=n` exactly once.
pub fn is_permutation(row: &[usize], n: usize) -> bool {
    if row.len() != n {
        return false;
    }
    let mut seen = vec![false; n + 1];
    row.iter().all(|&p| p >= 1 && p <= n && !core::mem::replace(&mut seen[p], true))
}

/// Adds visits so that every point is collected at least once and its
/// cyclic accumulation never exceeds the largest catalog capacity (nor the
/// vehicle capacity, when that is smaller).
///
/// Visits are only added, never removed. A point without visits first gets
/// one on the last working day. Then, walking forward from each visit, the
/// first day whose accumulation would overflow triggers a visit on the latest
/// unvisited working day before it.
pub fn repair(chromosome: &Chromosome, problem: &Problem) -> Result<Chromosome> {
    let mut repaired = chromosome.clone();
    repair_in_place(&mut repaired, problem)?;
    Ok(repaired)
}

/// In-place variant of [`repair`]; returns whether the mask changed.
pub fn repair_in_place(chromosome: &mut Chromosome, problem: &Problem) -> Result<bool> {
    let cap = problem.catalog.max_capacity().min(problem.fleet.vehicle_capacity);
    let mut changed = false;
    for (k, row) in chromosome.mask.iter_mut().enumerate() {
        changed |= repair_row(row, problem.instance.daily_waste(k + 1), cap, &problem.horizon, k + 1)?;
    }
    Ok(changed)
}

fn repair_row(row: &mut [bool], daily: f64, cap: f64, horizon: &Horizon, point: usize) -> Result<bool> {
    let n = row.len();
    if daily > cap + WASTE_TOLERANCE {
        return Err(Error::PointUnservable(point));
    }
    let mut changed = false;
    if !row.iter().any(|&v| v) {
        let last = horizon.working_days().last().expect("horizon has a working day");
        row[last] = true;
        changed = true;
    }
    'scan: loop {
        for s in 0..n {
            if !row[s] {
                continue;
            }
            for d in 1..=n {
                let t = (s + d) % n;
                if daily * d as f64 > cap + WASTE_TOLERANCE {
                    let fix = (1..d).rev().map(|e| (s + e) % n).find(|&u| horizon.is_working(u));
                    match fix {
                        Some(u) => {
                            row[u] = true;
                            changed = true;
                            continue 'scan;
                        }
                        None => return Err(Error::PointUnservable(point)),
                    }
                }
                if row[t] {
                    break;
                }
            }
        }
        return Ok(changed);
    }
}

/// Picks a bin combination for every peak accumulation: the cheapest
/// combinations that fit, minus those dominated by a combination that is at
/// least as large and faster to service by more than
/// [`SERVICE_INDIFFERENCE`]; among the rest, the smallest capacity wins.
pub fn select_bins(w_max: &[f64], catalog: &BinCatalog) -> Result<Vec<usize>> {
    select_bins_with(w_max, catalog, SERVICE_INDIFFERENCE)
}

pub fn select_bins_with(w_max: &[f64], catalog: &BinCatalog, service_indifference: f64) -> Result<Vec<usize>> {
    let combos = catalog.combos();
    w_max
        .iter()
        .enumerate()
        .map(|(k, &w)| {
            let fits = |b: &usize| combos[*b].capacity + WASTE_TOLERANCE >= w;
            let min_cost = (0..combos.len())
                .filter(fits)
                .map(|b| combos[b].cost)
                .fold(f64::INFINITY, f64::min);
            if !min_cost.is_finite() {
                return Err(Error::CapacityExceeded { point: k + 1, w_max: w });
            }
            let cheapest: Vec<usize> = (0..combos.len())
                .filter(fits)
                .filter(|&b| combos[b].cost <= min_cost + COST_TOLERANCE)
                .collect();
            let dominated = |b: usize| {
                cheapest.iter().any(|&o| {
                    combos[o].capacity >= combos[b].capacity
                        && combos[o].service_minutes < combos[b].service_minutes - service_indifference
                })
            };
            let chosen = cheapest
                .iter()
                .copied()
                .filter(|&b| !dominated(b))
                .min_by(|&a, &b| combos[a].capacity.total_cmp(&combos[b].capacity).then(a.cmp(&b)))
                .expect("the least serviceable cheapest combination is never dominated");
            Ok(chosen)
        })
        .collect()
}

/// Cuts a day's visiting order into routes: masked-out points are skipped,
/// and a new route starts whenever the next pickup no longer fits in the
/// vehicle. `visited` and `pickups` are indexed by `point - 1`.
pub fn split_routes(
    order: &[usize],
    visited: &[bool],
    pickups: &[f64],
    day: usize,
    fleet: &FleetParams,
) -> Result<Vec<Route>> {
    let q = fleet.vehicle_capacity;
    let mut routes = Vec::new();
    let mut current: Route = Vec::new();
    let mut load = 0.0;
    for &p in order {
        if !visited[p - 1] {
            continue;
        }
        let pickup = pickups[p - 1];
        if pickup > q + WASTE_TOLERANCE {
            return Err(Error::PickupExceedsVehicle { point: p, day, pickup });
        }
        if !current.is_empty() && load + pickup > q + WASTE_TOLERANCE {
            routes.push(core::mem::take(&mut current));
            load = 0.0;
        }
        current.push(p);
        load += pickup;
    }
    if !current.is_empty() {
        routes.push(current);
    }
    Ok(routes)
}

/// Decodes a (repaired) chromosome into a schedule.
pub fn decode(chromosome: &Chromosome, problem: &Problem) -> Result<Schedule> {
    chromosome.validate(problem)?;
    let Problem { instance, horizon, catalog, fleet } = problem;
    let acc = accumulate_waste(&chromosome.mask, instance, horizon)?;
    let bins = select_bins(&acc.w_max, catalog)?;

    let n = instance.n_points();
    let days = horizon.n_days();
    let mut routes = Vec::with_capacity(days);
    let mut loads = Vec::with_capacity(days);
    let mut route_times = Vec::with_capacity(days);
    let mut visited = vec![false; n];
    let mut pickups = vec![0.0; n];
    for day in 0..days {
        if horizon.is_rest(day) {
            routes.push(Vec::new());
            loads.push(Vec::new());
            route_times.push(Vec::new());
            continue;
        }
        for k in 0..n {
            visited[k] = chromosome.mask[k][day];
            pickups[k] = acc.w[k][day];
        }
        let day_routes = split_routes(&chromosome.perms[day], &visited, &pickups, day, fleet)?;
        let mut l = Vec::with_capacity(day_routes.len());
        let mut t = Vec::with_capacity(day_routes.len());
        for r in &day_routes {
            l.push(route_loads(r, &acc, day, fleet).cumulative);
            t.push(route_time(r, &bins, instance, catalog, fleet)?);
        }
        routes.push(day_routes);
        loads.push(l);
        route_times.push(t);
    }
    Ok(Schedule { bin_assignment: bins, routes, accumulation: acc.w, w_max: acc.w_max, loads, route_times })
}

/// Chromosome whose day orders list the schedule's routes back to back (then
/// the unvisited points) and whose mask marks the visits. Decoding it gives
/// back the same routes whenever consecutive routes could not be merged.
pub fn encode(schedule: &Schedule, n_points: usize) -> Chromosome {
    let days = schedule.routes.len();
    let mut mask = vec![vec![false; days]; n_points];
    let mut perms = Vec::with_capacity(days);
    for (t, day) in schedule.routes.iter().enumerate() {
        let mut order: Vec<usize> = day.iter().flatten().copied().collect();
        for &p in &order {
            mask[p - 1][t] = true;
        }
        order.extend((1..=n_points).filter(|&p| !mask[p - 1][t]));
        perms.push(order);
    }
    Chromosome::new(perms, mask)
}

/// Peak accumulation of a single mask row; `None` if never visited.
pub fn row_peak(row: &[bool], daily: f64) -> Option<f64> {
    accumulate_point(row, daily).map(|w| w.into_iter().fold(0.0, f64::max))
}
