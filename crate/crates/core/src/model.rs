//! Domain types, cost evaluation and constraint checking.
//!
//! Conventions used throughout the crate:
//!
//! * collection points are numbered `1..=n_points`; index `0` is the depot,
//!   so a point id doubles as a row/column of the travel matrix;
//! * per-point vectors (`daily_waste`, `bin_assignment`, `w_max`, rows of a
//!   visit mask) are stored at `point - 1`;
//! * days are 0-based, day 0 is Monday; the horizon is cyclic, so the day
//!   before day 0 is the last day.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Absolute tolerance for cost comparisons (US$).
pub const COST_TOLERANCE: f64 = 1e-6;
/// Absolute tolerance for waste quantities (m3).
pub const WASTE_TOLERANCE: f64 = 1e-9;

/// Unloading time at the depot used in the published experiments (minutes).
pub const UNLOAD_MINUTES: f64 = 8.0;
/// Vehicle cost used in the published experiments (US$/min).
pub const COST_PER_MINUTE: f64 = 0.5764;

pub const DAY_NAMES: [&str; 7] = ["Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"];

/// An ordered list of collection points; the depot at both ends is implicit.
pub type Route = Vec<usize>;

/// Travel times, daily waste generation and (optional) coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    n_points: usize,
    travel: Vec<f64>,
    daily_waste: Vec<f64>,
    coords: Vec<(f64, f64)>,
    depot_coords: Option<(f64, f64)>,
}

impl Instance {
    /// Builds an instance from a square `(n+1)x(n+1)` travel matrix (row and
    /// column 0 are the depot) and `n` daily waste rates.
    pub fn new(name: impl Into<String>, travel: Vec<Vec<f64>>, daily_waste: Vec<f64>) -> Result<Self> {
        let n_points = daily_waste.len();
        let dim = n_points + 1;
        if n_points == 0 {
            return Err(Error::InvalidInput("instance has no collection points".into()));
        }
        if travel.len() != dim {
            return Err(Error::InvalidInput(format!(
                "travel matrix has {} rows, expected {dim} for {n_points} points",
                travel.len()
            )));
        }
        let mut flat = Vec::with_capacity(dim * dim);
        for (i, row) in travel.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "travel row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            for (j, &c) in row.iter().enumerate() {
                if !(c.is_finite() && c >= 0.0) {
                    return Err(Error::InvalidInput(format!("travel[{i}][{j}] = {c} is not a time")));
                }
                if i == j && c != 0.0 {
                    return Err(Error::InvalidInput(format!("travel[{i}][{i}] = {c}, diagonal must be zero")));
                }
            }
            flat.extend_from_slice(row);
        }
        for (k, &w) in daily_waste.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidInput(format!("daily waste of point {} is {w}", k + 1)));
            }
        }
        Ok(Self {
            name: name.into(),
            n_points,
            travel: flat,
            daily_waste,
            coords: Vec::new(),
            depot_coords: None,
        })
    }

    /// Attaches per-point (latitude, longitude) pairs and optional depot coordinates.
    pub fn with_coords(mut self, coords: Vec<(f64, f64)>, depot: Option<(f64, f64)>) -> Result<Self> {
        if !coords.is_empty() && coords.len() != self.n_points {
            return Err(Error::InvalidInput(format!(
                "{} coordinate pairs for {} points",
                coords.len(),
                self.n_points
            )));
        }
        self.coords = coords;
        self.depot_coords = depot;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Travel time in minutes between two nodes (0 = depot).
    #[inline]
    pub fn travel(&self, from: usize, to: usize) -> f64 {
        self.travel[from * (self.n_points + 1) + to]
    }

    /// Sum of all entries of the travel matrix.
    pub fn total_travel(&self) -> f64 {
        self.travel.iter().sum()
    }

    /// Daily waste (m3/day) of a 1-based point.
    #[inline]
    pub fn daily_waste(&self, point: usize) -> f64 {
        self.daily_waste[point - 1]
    }

    pub fn daily_waste_all(&self) -> &[f64] {
        &self.daily_waste
    }

    pub fn coords(&self) -> &[(f64, f64)] {
        &self.coords
    }

    pub fn depot_coords(&self) -> Option<(f64, f64)> {
        self.depot_coords
    }

    pub fn is_symmetric(&self) -> bool {
        let dim = self.n_points + 1;
        (0..dim).all(|i| (0..i).all(|j| self.travel(i, j) == self.travel(j, i)))
    }

    pub(crate) fn check_point(&self, point: usize) -> Result<()> {
        if point == 0 || point > self.n_points {
            Err(Error::UnknownPoint(point))
        } else {
            Ok(())
        }
    }
}

/// Cyclic planning horizon with rest days.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Horizon {
    rest: Vec<bool>,
}

impl Horizon {
    /// `rest_days` are 0-based day indices.
    pub fn new(n_days: usize, rest_days: &[usize]) -> Result<Self> {
        if n_days == 0 {
            return Err(Error::InvalidInput("horizon has no days".into()));
        }
        let mut rest = vec![false; n_days];
        for &d in rest_days {
            if d >= n_days {
                return Err(Error::InvalidInput(format!("rest day {d} outside a {n_days}-day horizon")));
            }
            rest[d] = true;
        }
        if rest.iter().all(|&r| r) {
            return Err(Error::InvalidInput("horizon has no working day".into()));
        }
        Ok(Self { rest })
    }

    /// Monday to Sunday, Sunday off.
    pub fn week() -> Self {
        Self::new(7, &[6]).expect("valid week")
    }

    pub fn n_days(&self) -> usize {
        self.rest.len()
    }

    #[inline]
    pub fn is_rest(&self, day: usize) -> bool {
        self.rest[day]
    }

    #[inline]
    pub fn is_working(&self, day: usize) -> bool {
        !self.rest[day]
    }

    pub fn working_days(&self) -> impl Iterator<Item = usize> + '_ {
        self.rest.iter().enumerate().filter(|(_, &r)| !r).map(|(d, _)| d)
    }

    pub fn rest_days(&self) -> impl Iterator<Item = usize> + '_ {
        self.rest.iter().enumerate().filter(|(_, &r)| r).map(|(d, _)| d)
    }

    pub fn n_working(&self) -> usize {
        self.rest.iter().filter(|&&r| !r).count()
    }

    /// Previous day in cyclic order.
    #[inline]
    pub fn prev(&self, day: usize) -> usize {
        if day == 0 {
            self.n_days() - 1
        } else {
            day - 1
        }
    }
}

/// One entry of the bin catalog.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BinCombination {
    /// m3
    pub capacity: f64,
    /// minutes per visit
    pub service_minutes: f64,
    /// US$ over the planning horizon
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BinCatalog {
    combos: Vec<BinCombination>,
}

impl BinCatalog {
    pub fn new(combos: Vec<BinCombination>) -> Result<Self> {
        if combos.is_empty() {
            return Err(Error::InvalidInput("empty bin catalog".into()));
        }
        for (b, c) in combos.iter().enumerate() {
            let ok = [c.capacity, c.service_minutes, c.cost]
                .iter()
                .all(|v| v.is_finite() && *v > 0.0);
            if !ok {
                return Err(Error::InvalidInput(format!("bin combination {b} has a non-positive field")));
            }
        }
        Ok(Self { combos })
    }

    /// The eight combinations of the published experiments (weekly costs).
    pub fn standard() -> Self {
        let rows = [
            (1.1, 0.70, 0.78),
            (2.2, 1.40, 1.56),
            (2.4, 0.66, 1.56),
            (3.3, 2.10, 1.56),
            (3.5, 1.36, 1.56),
            (4.3, 1.37, 1.56),
            (4.8, 1.32, 1.56),
            (5.6, 1.33, 1.56),
        ];
        Self::new(
            rows.iter()
                .map(|&(capacity, service_minutes, cost)| BinCombination { capacity, service_minutes, cost })
                .collect(),
        )
        .expect("valid catalog")
    }

    pub fn len(&self) -> usize {
        self.combos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.combos.is_empty()
    }

    pub fn get(&self, b: usize) -> Option<&BinCombination> {
        self.combos.get(b)
    }

    pub fn combos(&self) -> &[BinCombination] {
        &self.combos
    }

    pub fn max_capacity(&self) -> f64 {
        self.combos.iter().map(|c| c.capacity).fold(f64::NEG_INFINITY, f64::max)
    }
}

impl core::ops::Index<usize> for BinCatalog {
    type Output = BinCombination;
    fn index(&self, b: usize) -> &BinCombination {
        &self.combos[b]
    }
}

/// Homogeneous fleet parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FleetParams {
    /// Q, m3
    pub vehicle_capacity: f64,
    pub n_vehicles: usize,
    pub unload_minutes: f64,
    /// Length of the drivers' working day (minutes).
    pub shift_minutes: f64,
    /// US$/min
    pub cost_per_minute: f64,
}

impl FleetParams {
    pub fn new(
        vehicle_capacity: f64,
        n_vehicles: usize,
        unload_minutes: f64,
        shift_minutes: f64,
        cost_per_minute: f64,
    ) -> Result<Self> {
        let fleet = Self { vehicle_capacity, n_vehicles, unload_minutes, shift_minutes, cost_per_minute };
        fleet.validate()?;
        Ok(fleet)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [self.vehicle_capacity, self.unload_minutes, self.shift_minutes, self.cost_per_minute]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if !positive || self.n_vehicles == 0 {
            return Err(Error::InvalidInput(format!("fleet parameters must be positive: {self:?}")));
        }
        Ok(())
    }

    /// Fleet of the published experiments: Q = 12 m3 for 12-point instances
    /// and 21 m3 otherwise, 8 min unloading, US$0.5764/min, and fleet size
    /// and shift length from [`derive_fleet`].
    pub fn published(instance: &Instance, horizon: &Horizon) -> Result<Self> {
        let (n_vehicles, shift_minutes) = derive_fleet(instance, horizon)?;
        let q = if instance.n_points() == 12 { 12.0 } else { 21.0 };
        Self::new(q, n_vehicles, UNLOAD_MINUTES, shift_minutes, COST_PER_MINUTE)
    }
}

/// Fleet size `ceil(n_points / 10)`.
pub fn fleet_size(n_points: usize) -> usize {
    n_points.div_ceil(10)
}

/// Fleet size and shift length as used for the published instances:
/// `n_v = ceil(n/10)` and `T_L = ceil(sum C_ij / (n_v (n_v - 1) |working days|))`,
/// the sum running over the whole `(n+1)x(n+1)` matrix.
pub fn derive_fleet(instance: &Instance, horizon: &Horizon) -> Result<(usize, f64)> {
    let n_vehicles = fleet_size(instance.n_points());
    if n_vehicles < 2 {
        return Err(Error::ShiftFormulaUndefined { n_vehicles });
    }
    let denom = (n_vehicles * (n_vehicles - 1) * horizon.n_working()) as f64;
    Ok((n_vehicles, libm::ceil(instance.total_travel() / denom)))
}

/// Everything needed to evaluate a plan.
#[derive(Debug, Clone)]
pub struct Problem {
    pub instance: Instance,
    pub horizon: Horizon,
    pub catalog: BinCatalog,
    pub fleet: FleetParams,
}

impl Problem {
    pub fn new(instance: Instance, horizon: Horizon, catalog: BinCatalog, fleet: FleetParams) -> Result<Self> {
        fleet.validate()?;
        Ok(Self { instance, horizon, catalog, fleet })
    }

    pub fn n_points(&self) -> usize {
        self.instance.n_points()
    }

    pub fn n_days(&self) -> usize {
        self.horizon.n_days()
    }
}

/// Cyclic steady-state accumulation, `w[point-1][day]`, and its per-point peak.
#[derive(Debug, Clone, PartialEq)]
pub struct Accumulation {
    pub w: Vec<Vec<f64>>,
    pub w_max: Vec<f64>,
}

/// Steady-state accumulation of one point: `daily * d` where `d` counts the
/// days since the most recent visit before `day`, wrapping around the horizon.
/// Returns `None` when the point is never visited.
pub fn accumulate_point(visits: &[bool], daily: f64) -> Option<Vec<f64>> {
    let n = visits.len();
    let last = visits.iter().rposition(|&v| v)?;
    let mut w = vec![0.0; n];
    let mut since = 0usize;
    for k in 1..=n {
        let t = (last + k) % n;
        since += 1;
        w[t] = daily * since as f64;
        if visits[t] {
            since = 0;
        }
    }
    Some(w)
}

/// Accumulation for a visit mask `mask[point-1][day]`. Visits on rest days
/// still empty the bins (the evaluator flags them separately).
pub fn accumulate_waste(mask: &[Vec<bool>], instance: &Instance, horizon: &Horizon) -> Result<Accumulation> {
    if mask.len() != instance.n_points() {
        return Err(Error::InvalidInput(format!(
            "mask has {} rows for {} points",
            mask.len(),
            instance.n_points()
        )));
    }
    let mut w = Vec::with_capacity(mask.len());
    let mut w_max = Vec::with_capacity(mask.len());
    for (k, row) in mask.iter().enumerate() {
        if row.len() != horizon.n_days() {
            return Err(Error::InvalidInput(format!("mask row {} has {} days", k + 1, row.len())));
        }
        let acc = accumulate_point(row, instance.daily_waste(k + 1)).ok_or(Error::UnvisitedPoint(k + 1))?;
        w_max.push(acc.iter().copied().fold(0.0, f64::max));
        w.push(acc);
    }
    Ok(Accumulation { w, w_max })
}

/// Duration of one route: unloading once at the depot, all travel legs
/// (depot -> first ... last -> depot), and the service time of each
/// visited point's bin combination.
pub fn route_time(
    route: &[usize],
    bin_assignment: &[usize],
    instance: &Instance,
    catalog: &BinCatalog,
    fleet: &FleetParams,
) -> Result<f64> {
    if route.is_empty() {
        return Err(Error::InvalidInput("empty route".into()));
    }
    let mut minutes = fleet.unload_minutes;
    let mut prev = 0;
    for &p in route {
        instance.check_point(p)?;
        let b = *bin_assignment.get(p - 1).ok_or(Error::MissingBin(p))?;
        let combo = catalog.get(b).ok_or(Error::MissingBin(p))?;
        minutes += instance.travel(prev, p) + combo.service_minutes;
        prev = p;
    }
    Ok(minutes + instance.travel(prev, 0))
}

/// Vehicle load on every arc of a route: entry `k` is the load before
/// serving the `k`-th point, the last entry is the load brought back to the
/// depot.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteLoads {
    pub cumulative: Vec<f64>,
    pub overflow: bool,
}

pub fn route_loads(route: &[usize], accumulation: &Accumulation, day: usize, fleet: &FleetParams) -> RouteLoads {
    let mut cumulative = Vec::with_capacity(route.len() + 1);
    let mut load = 0.0;
    cumulative.push(load);
    for &p in route {
        load += accumulation.w[p - 1][day];
        cumulative.push(load);
    }
    let overflow = load > fleet.vehicle_capacity + WASTE_TOLERANCE;
    RouteLoads { cumulative, overflow }
}

/// A decoded plan.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Schedule {
    /// Catalog index per point (`point - 1`).
    pub bin_assignment: Vec<usize>,
    /// Per day, the ordered routes; route `r` is driven by vehicle `r`.
    pub routes: Vec<Vec<Route>>,
    /// `accumulation[point-1][day]`, m3 collected at the end of the day.
    pub accumulation: Vec<Vec<f64>>,
    pub w_max: Vec<f64>,
    /// Per day and route, cumulative loads (see [`route_loads`]).
    pub loads: Vec<Vec<Vec<f64>>>,
    /// Per day and route, minutes.
    pub route_times: Vec<Vec<f64>>,
}

impl Schedule {
    /// Builds a schedule from explicit routes and bins, deriving
    /// accumulations, loads and times.
    pub fn from_routes(routes: Vec<Vec<Route>>, bin_assignment: Vec<usize>, problem: &Problem) -> Result<Self> {
        let mask = visit_mask(&routes, problem)?;
        let acc = accumulate_waste(&mask, &problem.instance, &problem.horizon)?;
        let mut loads = Vec::with_capacity(routes.len());
        let mut route_times = Vec::with_capacity(routes.len());
        for (day, day_routes) in routes.iter().enumerate() {
            let mut l = Vec::with_capacity(day_routes.len());
            let mut tt = Vec::with_capacity(day_routes.len());
            for r in day_routes {
                l.push(route_loads(r, &acc, day, &problem.fleet).cumulative);
                tt.push(route_time(r, &bin_assignment, &problem.instance, &problem.catalog, &problem.fleet)?);
            }
            loads.push(l);
            route_times.push(tt);
        }
        Ok(Self { bin_assignment, routes, accumulation: acc.w, w_max: acc.w_max, loads, route_times })
    }

    pub fn n_routes(&self, day: usize) -> usize {
        self.routes[day].len()
    }

    pub fn total_route_time(&self) -> f64 {
        self.route_times.iter().flatten().sum()
    }
}

/// Visit mask implied by a route list; rejects structural errors (unknown
/// points, empty routes, a point served twice on one day).
pub fn visit_mask(routes: &[Vec<Route>], problem: &Problem) -> Result<Vec<Vec<bool>>> {
    let n_days = problem.n_days();
    if routes.len() != n_days {
        return Err(Error::InvalidInput(format!("{} route days for a {n_days}-day horizon", routes.len())));
    }
    let mut mask = vec![vec![false; n_days]; problem.n_points()];
    for (day, day_routes) in routes.iter().enumerate() {
        for r in day_routes {
            if r.is_empty() {
                return Err(Error::InvalidInput(format!("empty route on day {day}")));
            }
            for &p in r {
                problem.instance.check_point(p)?;
                if mask[p - 1][day] {
                    return Err(Error::InvalidInput(format!("point {p} served twice on day {day}")));
                }
                mask[p - 1][day] = true;
            }
        }
    }
    Ok(mask)
}

/// Constraint families of the integrated model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ConstraintId {
    /// No bin at the depot.
    NoDepotBin,
    /// Exactly one bin combination per point.
    OneBinPerPoint,
    /// Bin capacity covers the peak accumulation.
    BinCapacity,
    /// No routes on rest days.
    RestDayRoute,
    /// At most one route per vehicle and day.
    RouteCount,
    /// Route fits in the drivers' shift.
    ShiftLength,
    /// Cumulative load within vehicle capacity.
    VehicleLoad,
    /// Accumulation recursion within the horizon.
    Accumulation,
    /// Accumulation wrap-around from the last day to the first.
    AccumulationWrap,
    /// Peak accumulation bookkeeping.
    PeakAccumulation,
}

impl ConstraintId {
    /// Label of the constraint family in the mathematical model.
    pub fn label(self) -> &'static str {
        match self {
            ConstraintId::NoDepotBin => "2a",
            ConstraintId::OneBinPerPoint => "2b",
            ConstraintId::BinCapacity => "2c",
            ConstraintId::RestDayRoute => "2e",
            ConstraintId::RouteCount => "2g",
            ConstraintId::ShiftLength => "2h",
            ConstraintId::VehicleLoad => "2i-2j",
            ConstraintId::Accumulation => "2k",
            ConstraintId::AccumulationWrap => "2l",
            ConstraintId::PeakAccumulation => "2m",
        }
    }
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.label())
    }
}

/// One constraint breach. `magnitude` is the amount by which the
/// constraint is exceeded in its natural unit.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Violation {
    pub constraint: ConstraintId,
    pub day: Option<usize>,
    pub point: Option<usize>,
    pub route: Option<usize>,
    pub magnitude: f64,
}

impl Violation {
    fn new(constraint: ConstraintId, magnitude: f64) -> Self {
        Self { constraint, day: None, point: None, route: None, magnitude }
    }
    fn day(mut self, day: usize) -> Self {
        self.day = Some(day);
        self
    }
    fn point(mut self, point: usize) -> Self {
        self.point = Some(point);
        self
    }
    fn route(mut self, route: usize) -> Self {
        self.route = Some(route);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvalReport {
    pub bin_cost: f64,
    pub routing_cost: f64,
    pub overall_cost: f64,
    pub violations: Vec<Violation>,
    /// Per day, routes beyond the fleet size.
    pub excess_routes: Vec<usize>,
    /// Per day and route, minutes beyond the shift length (0 when within).
    pub time_overruns: Vec<Vec<f64>>,
    /// Per day and route, recomputed route time.
    pub route_times: Vec<Vec<f64>>,
    pub feasible: bool,
}

/// Costs the schedule and checks every constraint family of the model.
///
/// Costs and checks are computed from the decision content of the schedule
/// (routes and bins); the stored accumulation and peak values are checked
/// against the steady state implied by the routes. Flow conservation and
/// self-loops are structural in the route representation.
pub fn evaluate(schedule: &Schedule, problem: &Problem) -> Result<EvalReport> {
    let Problem { instance, horizon, catalog, fleet } = problem;
    let n = instance.n_points();
    let mut violations = Vec::new();

    // Points are 1-based, so the depot itself can only show up in a route.
    for (day, day_routes) in schedule.routes.iter().enumerate() {
        for (r, route) in day_routes.iter().enumerate() {
            if route.contains(&0) {
                violations.push(Violation::new(ConstraintId::NoDepotBin, 1.0).day(day).route(r));
            }
        }
    }
    let routes: Vec<Vec<Route>> = schedule
        .routes
        .iter()
        .map(|d| d.iter().map(|r| r.iter().copied().filter(|&p| p != 0).collect()).collect())
        .collect();
    let mask = visit_mask(&routes, problem)?;

    // (2b)
    let mut bin_cost = 0.0;
    let assigned_ok: Vec<bool> = (0..n)
        .map(|k| schedule.bin_assignment.get(k).is_some_and(|&b| b < catalog.len()))
        .collect();
    for (k, ok) in assigned_ok.iter().enumerate() {
        if *ok {
            bin_cost += catalog[schedule.bin_assignment[k]].cost;
        } else {
            violations.push(Violation::new(ConstraintId::OneBinPerPoint, 1.0).point(k + 1));
        }
    }
    if schedule.bin_assignment.len() > n {
        violations.push(Violation::new(
            ConstraintId::OneBinPerPoint,
            (schedule.bin_assignment.len() - n) as f64,
        ));
    }

    // (2e)
    for day in horizon.rest_days() {
        let count = routes[day].len();
        if count > 0 {
            violations.push(Violation::new(ConstraintId::RestDayRoute, count as f64).day(day));
        }
    }

    // (2k)-(2m)
    let mut acc_w: Vec<Option<Vec<f64>>> = Vec::with_capacity(n);
    for k in 0..n {
        let w = accumulate_point(&mask[k], instance.daily_waste(k + 1));
        if w.is_none() {
            let unbounded = instance.daily_waste(k + 1) * horizon.n_days() as f64;
            violations.push(Violation::new(ConstraintId::Accumulation, unbounded).point(k + 1));
        }
        acc_w.push(w);
    }
    for (k, w) in acc_w.iter().enumerate() {
        let Some(w) = w else { continue };
        let stored = schedule.accumulation.get(k);
        for day in 0..horizon.n_days() {
            let s = stored.and_then(|row| row.get(day)).copied().unwrap_or(f64::NAN);
            let diff = (s - w[day]).abs();
            if !(diff <= WASTE_TOLERANCE) {
                let id = if day == 0 { ConstraintId::AccumulationWrap } else { ConstraintId::Accumulation };
                let mag = if diff.is_finite() { diff } else { w[day] };
                violations.push(Violation::new(id, mag).day(day).point(k + 1));
            }
        }
        let peak = w.iter().copied().fold(0.0, f64::max);
        let stored_peak = schedule.w_max.get(k).copied().unwrap_or(f64::NAN);
        if !(stored_peak + WASTE_TOLERANCE >= peak) {
            let mag = if stored_peak.is_finite() { peak - stored_peak } else { peak };
            violations.push(Violation::new(ConstraintId::PeakAccumulation, mag).point(k + 1));
        }
        // (2c)
        if assigned_ok[k] {
            let cap = catalog[schedule.bin_assignment[k]].capacity;
            if peak > cap + WASTE_TOLERANCE {
                violations.push(Violation::new(ConstraintId::BinCapacity, peak - cap).point(k + 1));
            }
        }
    }

    // (2g), (2h), (2i)-(2j)
    let mut routing_minutes = 0.0;
    let mut excess_routes = Vec::with_capacity(horizon.n_days());
    let mut time_overruns = Vec::with_capacity(horizon.n_days());
    let mut route_times = Vec::with_capacity(horizon.n_days());
    for (day, day_routes) in routes.iter().enumerate() {
        let excess = day_routes.len().saturating_sub(fleet.n_vehicles);
        if excess > 0 {
            violations.push(Violation::new(ConstraintId::RouteCount, excess as f64).day(day));
        }
        excess_routes.push(excess);
        let mut overruns = Vec::with_capacity(day_routes.len());
        let mut times = Vec::with_capacity(day_routes.len());
        for (r, route) in day_routes.iter().enumerate() {
            let tt = route_time(route, &schedule.bin_assignment, instance, catalog, fleet)?;
            routing_minutes += tt;
            let over = (tt - fleet.shift_minutes).max(0.0);
            if over > 0.0 {
                violations.push(Violation::new(ConstraintId::ShiftLength, over).day(day).route(r));
            }
            overruns.push(over);
            times.push(tt);
            let load: f64 = route
                .iter()
                .map(|&p| acc_w[p - 1].as_ref().map_or(0.0, |w| w[day]))
                .sum();
            if load > fleet.vehicle_capacity + WASTE_TOLERANCE {
                violations.push(
                    Violation::new(ConstraintId::VehicleLoad, load - fleet.vehicle_capacity).day(day).route(r),
                );
            }
        }
        time_overruns.push(overruns);
        route_times.push(times);
    }

    let routing_cost = fleet.cost_per_minute * routing_minutes;
    let feasible = violations.is_empty();
    Ok(EvalReport {
        bin_cost,
        routing_cost,
        overall_cost: bin_cost + routing_cost,
        violations,
        excess_routes,
        time_overruns,
        route_times,
        feasible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat_instance(n: usize, c: f64, w: f64) -> Instance {
        let travel = (0..=n).map(|i| (0..=n).map(|j| if i == j { 0.0 } else { c }).collect()).collect();
        Instance::new("flat", travel, vec![w; n]).unwrap()
    }

    fn fleet(q: f64, nv: usize, tl: f64) -> FleetParams {
        FleetParams::new(q, nv, UNLOAD_MINUTES, tl, COST_PER_MINUTE).unwrap()
    }

    #[test]
    fn instance_rejects_bad_matrices() {
        assert!(Instance::new("x", vec![vec![0.0, 1.0]], vec![1.0]).is_err());
        assert!(Instance::new("x", vec![vec![0.0, -1.0], vec![1.0, 0.0]], vec![1.0]).is_err());
        assert!(Instance::new("x", vec![vec![1.0, 1.0], vec![1.0, 0.0]], vec![1.0]).is_err());
        assert!(Instance::new("x", vec![vec![0.0, 1.0], vec![1.0, 0.0]], vec![0.0]).is_err());
    }

    #[test]
    fn horizon_needs_a_working_day() {
        assert!(Horizon::new(2, &[0, 1]).is_err());
        assert!(Horizon::new(2, &[2]).is_err());
        let week = Horizon::week();
        assert_eq!(week.n_working(), 6);
        assert!(week.is_rest(6));
        assert_eq!(week.prev(0), 6);
    }

    #[test]
    fn route_time_single_point_no_travel() {
        let inst = flat_instance(1, 0.0, 1.0);
        let t = route_time(&[1], &[0], &inst, &BinCatalog::standard(), &fleet(12.0, 2, 100.0)).unwrap();
        assert!((t - 8.70).abs() < 1e-12);
    }

    #[test]
    fn route_time_hand_computed() {
        // depot->1: 3, 1->2: 4, 2->depot: 6 (asymmetric on purpose)
        let travel = vec![vec![0.0, 3.0, 5.0], vec![2.0, 0.0, 4.0], vec![6.0, 7.0, 0.0]];
        let inst = Instance::new("two", travel, vec![1.0, 1.0]).unwrap();
        let cat = BinCatalog::standard();
        let t = route_time(&[1, 2], &[2, 7], &inst, &cat, &fleet(12.0, 2, 100.0)).unwrap();
        // 8 + 3 + 4 + 6 + 0.66 + 1.33
        assert!((t - 22.99).abs() < 1e-12);
        let back = route_time(&[2, 1], &[2, 7], &inst, &cat, &fleet(12.0, 2, 100.0)).unwrap();
        // 8 + 5 + 7 + 2 + 0.66 + 1.33
        assert!((back - 23.99).abs() < 1e-12);
    }

    #[test]
    fn route_time_errors() {
        let inst = flat_instance(2, 1.0, 1.0);
        let cat = BinCatalog::standard();
        let f = fleet(12.0, 2, 100.0);
        assert_eq!(route_time(&[3], &[0, 0], &inst, &cat, &f), Err(Error::UnknownPoint(3)));
        assert_eq!(route_time(&[2], &[0], &inst, &cat, &f), Err(Error::MissingBin(2)));
        assert_eq!(route_time(&[1], &[99, 0], &inst, &cat, &f), Err(Error::MissingBin(1)));
    }

    #[test]
    fn accumulation_matches_published_point_one() {
        // W = 1.27, visits Wednesday and Saturday.
        let mut row = vec![false; 7];
        row[2] = true;
        row[5] = true;
        let w = accumulate_point(&row, 1.27).unwrap();
        let expected = [2.54, 3.81, 5.08, 1.27, 2.54, 3.81];
        for (d, e) in expected.iter().enumerate() {
            assert!((w[d] - e).abs() < 1e-9, "day {d}: {} vs {e}", w[d]);
        }
        let peak = w.iter().copied().fold(0.0, f64::max);
        assert!((peak - 5.08).abs() < 1e-9);
    }

    #[test]
    fn daily_visits_double_after_rest_day() {
        let row: Vec<bool> = (0..7).map(|d| d != 6).collect();
        let w = accumulate_point(&row, 0.5).unwrap();
        assert_eq!(w, vec![1.0, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5]);
    }

    #[test]
    fn unvisited_point_is_an_error() {
        let inst = flat_instance(2, 1.0, 1.0);
        let mask = vec![vec![true; 7], vec![false; 7]];
        assert_eq!(
            accumulate_waste(&mask, &inst, &Horizon::week()),
            Err(Error::UnvisitedPoint(2))
        );
    }

    #[test]
    fn derive_fleet_examples() {
        assert_eq!(fleet_size(12), 2);
        assert_eq!(fleet_size(163), 17);
        assert_eq!(fleet_size(10), 1);
        let inst = flat_instance(12, 6.0, 1.0);
        let (nv, tl) = derive_fleet(&inst, &Horizon::week()).unwrap();
        assert_eq!(nv, 2);
        assert_eq!(tl, 78.0);
        let small = flat_instance(4, 6.0, 1.0);
        assert_eq!(
            derive_fleet(&small, &Horizon::week()),
            Err(Error::ShiftFormulaUndefined { n_vehicles: 1 })
        );
    }

    #[test]
    fn route_loads_flags_overflow() {
        let acc = Accumulation {
            w: vec![vec![5.28], vec![2.42], vec![2.66], vec![2.34]],
            w_max: vec![5.28, 2.42, 2.66, 2.34],
        };
        let f = fleet(12.0, 2, 100.0);
        let ok = route_loads(&[1, 2, 3], &acc, 0, &f);
        assert!(!ok.overflow);
        let expect = [0.0, 5.28, 7.70, 10.36];
        for (a, b) in ok.cumulative.iter().zip(expect) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!(route_loads(&[1, 2, 3, 4], &acc, 0, &f).overflow);
        let zero = Accumulation { w: vec![vec![0.0]; 2], w_max: vec![0.0; 2] };
        assert_eq!(route_loads(&[1, 2], &zero, 0, &f).cumulative, vec![0.0; 3]);
    }

    fn daily_problem(n: usize, nv: usize) -> Problem {
        Problem::new(flat_instance(n, 1.0, 0.5), Horizon::week(), BinCatalog::standard(), fleet(12.0, nv, 100.0))
            .unwrap()
    }

    fn daily_routes(n: usize, per_route: usize) -> Vec<Vec<Route>> {
        (0..7)
            .map(|d| {
                if d == 6 {
                    Vec::new()
                } else {
                    (1..=n).collect::<Vec<_>>().chunks(per_route).map(|c| c.to_vec()).collect()
                }
            })
            .collect()
    }

    #[test]
    fn evaluate_costs_add_up() {
        let problem = daily_problem(3, 2);
        let sched = Schedule::from_routes(daily_routes(3, 3), vec![0; 3], &problem).unwrap();
        let report = evaluate(&sched, &problem).unwrap();
        assert!(report.feasible, "{:?}", report.violations);
        assert!((report.bin_cost - 3.0 * 0.78).abs() < 1e-12);
        assert_eq!(report.overall_cost, report.bin_cost + report.routing_cost);
        // each day: 8 + 4 legs of 1 + 3 * 0.70
        let expected_routing = 6.0 * (8.0 + 4.0 + 2.1) * COST_PER_MINUTE;
        assert!((report.routing_cost - expected_routing).abs() < 1e-9);
    }

    #[test]
    fn evaluate_flags_extra_route() {
        let problem = daily_problem(3, 2);
        let mut routes = daily_routes(3, 1);
        routes[1] = vec![vec![1, 2, 3]];
        let sched = Schedule::from_routes(routes, vec![0; 3], &problem).unwrap();
        let report = evaluate(&sched, &problem).unwrap();
        assert!(!report.feasible);
        let v: Vec<_> = report.violations.iter().filter(|v| v.constraint == ConstraintId::RouteCount).collect();
        assert_eq!(v.len(), 5);
        assert_eq!(v[0].day, Some(0));
        assert_eq!(v[0].magnitude, 1.0);
        assert_eq!(report.excess_routes[0], 1);
        assert_eq!(report.excess_routes[1], 0);
    }

    #[test]
    fn evaluate_flags_rest_day_route_and_capacity() {
        let problem = daily_problem(2, 2);
        let mut routes = daily_routes(2, 2);
        routes[6] = vec![vec![1]];
        let sched = Schedule::from_routes(routes, vec![0, 0], &problem).unwrap();
        let report = evaluate(&sched, &problem).unwrap();
        assert!(report.violations.iter().any(|v| v.constraint == ConstraintId::RestDayRoute && v.day == Some(6)));

        // Visiting point 2 only on Monday accumulates 3.5 m3 > 1.1 m3.
        let mut routes = daily_routes(2, 2);
        for d in 1..6 {
            routes[d] = vec![vec![1]];
        }
        let sched = Schedule::from_routes(routes, vec![0, 0], &problem).unwrap();
        let report = evaluate(&sched, &problem).unwrap();
        let cap: Vec<_> = report.violations.iter().filter(|v| v.constraint == ConstraintId::BinCapacity).collect();
        assert_eq!(cap.len(), 1);
        assert_eq!(cap[0].point, Some(2));
        assert!((cap[0].magnitude - (3.5 - 1.1)).abs() < 1e-9);
    }

    #[test]
    fn evaluate_flags_stale_accumulation_and_load() {
        let problem = Problem::new(
            flat_instance(2, 1.0, 4.0),
            Horizon::week(),
            BinCatalog::standard(),
            fleet(6.0, 2, 100.0),
        )
        .unwrap();
        let mut sched = Schedule::from_routes(daily_routes(2, 2), vec![7, 7], &problem).unwrap();
        let report = evaluate(&sched, &problem).unwrap();
        // Monday carries two days of waste at both points: 16 m3 > Q.
        assert!(report.violations.iter().any(|v| v.constraint == ConstraintId::VehicleLoad && v.day == Some(0)));
        assert!(report.violations.iter().any(|v| v.constraint == ConstraintId::BinCapacity));
        sched.accumulation[0][3] += 1.0;
        sched.w_max[1] = 0.0;
        let report = evaluate(&sched, &problem).unwrap();
        assert!(report.violations.iter().any(|v| v.constraint == ConstraintId::Accumulation && v.day == Some(3)));
        assert!(report.violations.iter().any(|v| v.constraint == ConstraintId::PeakAccumulation));
    }

    #[test]
    fn evaluate_flags_shift_overrun() {
        let problem = Problem::new(
            flat_instance(2, 10.0, 0.5),
            Horizon::week(),
            BinCatalog::standard(),
            fleet(12.0, 2, 30.0),
        )
        .unwrap();
        let sched = Schedule::from_routes(daily_routes(2, 2), vec![0, 0], &problem).unwrap();
        let report = evaluate(&sched, &problem).unwrap();
        // 8 + 30 + 1.4 = 39.4
        assert!((report.time_overruns[0][0] - 9.4).abs() < 1e-9);
        assert_eq!(
            report.violations.iter().filter(|v| v.constraint == ConstraintId::ShiftLength).count(),
            6
        );
    }

    #[test]
    fn evaluate_rejects_duplicate_visit() {
        let problem = daily_problem(2, 2);
        let mut routes = daily_routes(2, 2);
        routes[0] = vec![vec![1, 2], vec![1]];
        let sched = Schedule {
            bin_assignment: vec![0, 0],
            routes,
            accumulation: vec![vec![0.0; 7]; 2],
            w_max: vec![0.0; 2],
            loads: Vec::new(),
            route_times: Vec::new(),
        };
        assert!(evaluate(&sched, &problem).is_err());
    }
}
