//! Linearised mixed-integer model and its LP text form.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::error::{Error, Result};
use crate::model::{Problem, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Binary,
    /// Continuous, non-negative.
    Continuous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

/// Constraint families of the linearised model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    NoDepotBin,
    OneBin,
    BinCapacity,
    NoSelfLoop,
    RestDay,
    FlowConservation,
    OneRoutePerVehicle,
    ShiftLength,
    ArcCapacity,
    LoadTracking,
    /// Accumulation recursion (Big-M) for days 2..n.
    AccumulationBigM,
    /// Accumulation wrap-around (Big-M) for day 1.
    AccumulationWrapBigM,
    AccumulationFloor,
    PeakAccumulation,
    GloverUpperBin,
    GloverUpperArc,
    GloverLower,
}

impl Family {
    pub const ALL: [Family; 17] = [
        Family::NoDepotBin,
        Family::OneBin,
        Family::BinCapacity,
        Family::NoSelfLoop,
        Family::RestDay,
        Family::FlowConservation,
        Family::OneRoutePerVehicle,
        Family::ShiftLength,
        Family::ArcCapacity,
        Family::LoadTracking,
        Family::AccumulationBigM,
        Family::AccumulationWrapBigM,
        Family::AccumulationFloor,
        Family::PeakAccumulation,
        Family::GloverUpperBin,
        Family::GloverUpperArc,
        Family::GloverLower,
    ];

    /// Row-name prefix, also the label of the family in the model.
    pub fn prefix(self) -> &'static str {
        match self {
            Family::NoDepotBin => "c2a",
            Family::OneBin => "c2b",
            Family::BinCapacity => "c2c",
            Family::NoSelfLoop => "c2d",
            Family::RestDay => "c2e",
            Family::FlowConservation => "c2f",
            Family::OneRoutePerVehicle => "c2g",
            Family::ShiftLength => "c2h",
            Family::ArcCapacity => "c2i",
            Family::LoadTracking => "c2j",
            Family::AccumulationBigM => "l1",
            Family::AccumulationWrapBigM => "l2",
            Family::AccumulationFloor => "l3",
            Family::PeakAccumulation => "c2m",
            Family::GloverUpperBin => "lin1",
            Family::GloverUpperArc => "lin2",
            Family::GloverLower => "lin3",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.prefix())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub name: String,
    pub family: Family,
    /// `(variable index, coefficient)`, sorted by index, no duplicates.
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Options for [`emit_milp`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EmitOptions {
    /// Also linearise the service time of the first point of each route
    /// (arcs leaving the depot) with `z_0_b_j_v_t` variables. Without it the
    /// linear route time only charges service on arcs between two points.
    pub depot_arc_service: bool,
}

/// Index arithmetic for the variable families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarLayout {
    pub n_points: usize,
    pub n_bins: usize,
    pub n_vehicles: usize,
    pub n_days: usize,
    pub depot_arc_service: bool,
    x0: usize,
    y0: usize,
    w0: usize,
    wmax0: usize,
    n0: usize,
    z0: usize,
    total: usize,
}

impl VarLayout {
    pub fn new(n_points: usize, n_bins: usize, n_vehicles: usize, n_days: usize, depot_arc_service: bool) -> Self {
        let nodes = n_points + 1;
        let arcs = nodes * nodes * n_vehicles * n_days;
        let z_from = if depot_arc_service { nodes } else { n_points };
        let x0 = 0;
        let y0 = x0 + arcs;
        let w0 = y0 + arcs;
        let wmax0 = w0 + n_points * n_days;
        let n0 = wmax0 + n_points;
        let z0 = n0 + n_bins * nodes;
        let total = z0 + z_from * n_bins * n_points * n_vehicles * n_days;
        Self { n_points, n_bins, n_vehicles, n_days, depot_arc_service, x0, y0, w0, wmax0, n0, z0, total }
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    fn arc(&self, i: usize, j: usize, v: usize, t: usize) -> usize {
        let nodes = self.n_points + 1;
        ((i * nodes + j) * self.n_vehicles + v) * self.n_days + t
    }

    /// Nodes `i, j` in `0..=n`; vehicle `v` and day `t` 0-based.
    pub fn x(&self, i: usize, j: usize, v: usize, t: usize) -> usize {
        self.x0 + self.arc(i, j, v, t)
    }

    pub fn y(&self, i: usize, j: usize, v: usize, t: usize) -> usize {
        self.y0 + self.arc(i, j, v, t)
    }

    /// Point `i` in `1..=n`.
    pub fn w(&self, i: usize, t: usize) -> usize {
        self.w0 + (i - 1) * self.n_days + t
    }

    pub fn wmax(&self, i: usize) -> usize {
        self.wmax0 + i - 1
    }

    /// Bin `b` 0-based catalog index, node `i` in `0..=n`.
    pub fn n(&self, b: usize, i: usize) -> usize {
        self.n0 + b * (self.n_points + 1) + i
    }

    /// `i` in `1..=n` (or `0..=n` with depot-arc service), `j` in `1..=n`.
    pub fn z(&self, i: usize, b: usize, j: usize, v: usize, t: usize) -> usize {
        let from = if self.depot_arc_service { i } else { i - 1 };
        self.z0 + (((from * self.n_bins + b) * self.n_points + (j - 1)) * self.n_vehicles + v) * self.n_days + t
    }

    fn z_sources(&self) -> core::ops::RangeInclusive<usize> {
        if self.depot_arc_service {
            0..=self.n_points
        } else {
            1..=self.n_points
        }
    }

    fn variables(&self) -> Vec<Variable> {
        let mut vars = Vec::with_capacity(self.total);
        let nodes = self.n_points + 1;
        let bin = |name: String| Variable { name, kind: VarKind::Binary };
        let cont = |name: String| Variable { name, kind: VarKind::Continuous };
        for (prefix, kind) in [("x", VarKind::Binary), ("y", VarKind::Continuous)] {
            for i in 0..nodes {
                for j in 0..nodes {
                    for v in 0..self.n_vehicles {
                        for t in 0..self.n_days {
                            vars.push(Variable { name: format!("{prefix}_{i}_{j}_{}_{}", v + 1, t + 1), kind });
                        }
                    }
                }
            }
        }
        for i in 1..=self.n_points {
            for t in 0..self.n_days {
                vars.push(cont(format!("w_{i}_{}", t + 1)));
            }
        }
        for i in 1..=self.n_points {
            vars.push(cont(format!("wmax_{i}")));
        }
        for b in 0..self.n_bins {
            for i in 0..nodes {
                vars.push(bin(format!("n_{b}_{i}")));
            }
        }
        for i in self.z_sources() {
            for b in 0..self.n_bins {
                for j in 1..=self.n_points {
                    for v in 0..self.n_vehicles {
                        for t in 0..self.n_days {
                            vars.push(cont(format!("z_{i}_{b}_{j}_{}_{}", v + 1, t + 1)));
                        }
                    }
                }
            }
        }
        debug_assert_eq!(vars.len(), self.total);
        vars
    }
}

/// A linear program: minimise `objective` subject to `constraints`, all
/// variables non-negative, binaries in {0, 1}.
#[derive(Debug, Clone)]
pub struct LpModel {
    pub name: String,
    pub layout: VarLayout,
    pub variables: Vec<Variable>,
    pub constraints: Vec<LinearConstraint>,
    pub objective: Vec<(usize, f64)>,
    pub big_m: f64,
}

/// Collects terms, merging repeated variables and dropping zeros.
#[derive(Default)]
struct Terms(Vec<(usize, f64)>);

impl Terms {
    fn add(&mut self, var: usize, coef: f64) -> &mut Self {
        self.0.push((var, coef));
        self
    }

    fn finish(mut self) -> Vec<(usize, f64)> {
        self.0.sort_by_key(|&(v, _)| v);
        let mut out: Vec<(usize, f64)> = Vec::with_capacity(self.0.len());
        for (v, c) in self.0 {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += c,
                _ => out.push((v, c)),
            }
        }
        out.retain(|&(_, c)| c != 0.0);
        out
    }
}

impl LpModel {
    pub fn n_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn count(&self, family: Family) -> usize {
        self.constraints.iter().filter(|c| c.family == family).count()
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        // names are generated in layout order; a map keeps lookups cheap for callers that need many
        self.variables.iter().position(|v| v.name == name)
    }

    /// Builds a dense assignment from a lookup by variable name.
    pub fn assignment_from<F: Fn(&str) -> Option<f64>>(&self, lookup: F) -> Result<Vec<f64>> {
        self.variables
            .iter()
            .map(|v| lookup(&v.name).ok_or_else(|| Error::MissingVariable(v.name.clone())))
            .collect()
    }

    /// Name -> value map for a dense assignment.
    pub fn named_assignment(&self, values: &[f64]) -> BTreeMap<String, f64> {
        self.variables.iter().zip(values).map(|(v, &x)| (v.name.clone(), x)).collect()
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().map(|&(v, c)| c * values[v]).sum()
    }

    /// Writes the model in CPLEX LP text format.
    pub fn write_lp<W: Write>(&self, out: &mut W) -> fmt::Result {
        writeln!(out, "\\ Problem: {}", self.name)?;
        writeln!(out, "\\ BigM = {}", fmt_num(self.big_m))?;
        writeln!(out, "Minimize")?;
        write!(out, " obj:")?;
        self.write_terms(out, &self.objective)?;
        writeln!(out)?;
        writeln!(out, "Subject To")?;
        for c in &self.constraints {
            write!(out, " {}:", c.name)?;
            if c.terms.is_empty() {
                // keep the row parseable: 0 x_0_0_1_1 carries no information
                write!(out, " 0 {}", self.variables[0].name)?;
            } else {
                self.write_terms(out, &c.terms)?;
            }
            writeln!(out, " {} {}", c.sense.symbol(), fmt_num(c.rhs))?;
        }
        writeln!(out, "Bounds")?;
        for v in self.variables.iter().filter(|v| v.kind == VarKind::Continuous) {
            writeln!(out, " {} >= 0", v.name)?;
        }
        writeln!(out, "Binaries")?;
        let mut col = 0;
        for v in self.variables.iter().filter(|v| v.kind == VarKind::Binary) {
            if col > 0 && col + v.name.len() > 200 {
                writeln!(out)?;
                col = 0;
            }
            write!(out, " {}", v.name)?;
            col += v.name.len() + 1;
        }
        writeln!(out)?;
        writeln!(out, "End")
    }

    pub fn to_lp_string(&self) -> String {
        let mut s = String::new();
        self.write_lp(&mut s).expect("writing to a String cannot fail");
        s
    }

    fn write_terms<W: Write>(&self, out: &mut W, terms: &[(usize, f64)]) -> fmt::Result {
        for (k, &(v, c)) in terms.iter().enumerate() {
            if k > 0 && k % 8 == 0 {
                write!(out, "\n   ")?;
            }
            let sign = if c < 0.0 { '-' } else { '+' };
            let mag = c.abs();
            if k == 0 && sign == '+' {
                write!(out, " ")?;
            } else {
                write!(out, " {sign} ")?;
            }
            if mag == 1.0 {
                write!(out, "{}", self.variables[v].name)?;
            } else {
                write!(out, "{} {}", fmt_num(mag), self.variables[v].name)?;
            }
        }
        Ok(())
    }
}

fn fmt_num(x: f64) -> String {
    if x == libm::trunc(x) && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

/// Builds the linearised model: objective (bins + vehicle time), constraint
/// families 2a-2j and 2m, the Big-M accumulation rows and the Glover rows for
/// the bin-dependent service time. `BigM` is the largest catalog capacity.
pub fn emit_milp(problem: &Problem, options: EmitOptions) -> LpModel {
    let Problem { instance, horizon, catalog, fleet } = problem;
    let n = instance.n_points();
    let nodes = n + 1;
    let nb = catalog.len();
    let nv = fleet.n_vehicles;
    let nt = horizon.n_days();
    let layout = VarLayout::new(n, nb, nv, nt, options.depot_arc_service);
    let big_m = catalog.max_capacity();
    let q = fleet.vehicle_capacity;
    let mut rows: Vec<LinearConstraint> = Vec::new();
    let mut push = |name: String, family: Family, terms: Terms, sense: Sense, rhs: f64| {
        rows.push(LinearConstraint { name, family, terms: terms.finish(), sense, rhs });
    };

    // Linear route time of vehicle v on day t.
    let route_time_terms = |v: usize, t: usize, scale: f64, terms: &mut Terms| {
        for i in 1..nodes {
            terms.add(layout.x(i, 0, v, t), scale * fleet.unload_minutes);
        }
        for i in 0..nodes {
            for j in 0..nodes {
                terms.add(layout.x(i, j, v, t), scale * instance.travel(i, j));
            }
        }
        for i in layout.z_sources() {
            for j in 1..nodes {
                for b in 0..nb {
                    terms.add(layout.z(i, b, j, v, t), scale * catalog[b].service_minutes);
                }
            }
        }
    };

    let mut objective = Terms::default();
    for b in 0..nb {
        for i in 1..nodes {
            objective.add(layout.n(b, i), catalog[b].cost);
        }
    }
    for t in 0..nt {
        for v in 0..nv {
            route_time_terms(v, t, fleet.cost_per_minute, &mut objective);
        }
    }

    for b in 0..nb {
        let mut terms = Terms::default();
        terms.add(layout.n(b, 0), 1.0);
        push(format!("c2a_{b}"), Family::NoDepotBin, terms, Sense::Eq, 0.0);
    }
    for i in 1..nodes {
        let mut terms = Terms::default();
        for b in 0..nb {
            terms.add(layout.n(b, i), 1.0);
        }
        push(format!("c2b_{i}"), Family::OneBin, terms, Sense::Eq, 1.0);
    }
    for i in 1..nodes {
        let mut terms = Terms::default();
        for b in 0..nb {
            terms.add(layout.n(b, i), catalog[b].capacity);
        }
        terms.add(layout.wmax(i), -1.0);
        push(format!("c2c_{i}"), Family::BinCapacity, terms, Sense::Ge, 0.0);
    }
    for i in 0..nodes {
        for v in 0..nv {
            for t in 0..nt {
                let mut terms = Terms::default();
                terms.add(layout.x(i, i, v, t), 1.0);
                push(format!("c2d_{i}_{}_{}", v + 1, t + 1), Family::NoSelfLoop, terms, Sense::Eq, 0.0);
            }
        }
    }
    for t in horizon.rest_days() {
        for i in 0..nodes {
            for j in 0..nodes {
                for v in 0..nv {
                    let mut terms = Terms::default();
                    terms.add(layout.x(i, j, v, t), 1.0);
                    push(format!("c2e_{i}_{j}_{}_{}", v + 1, t + 1), Family::RestDay, terms, Sense::Eq, 0.0);
                }
            }
        }
    }
    for j in 0..nodes {
        for v in 0..nv {
            for t in 0..nt {
                let mut terms = Terms::default();
                for i in 0..nodes {
                    terms.add(layout.x(i, j, v, t), 1.0).add(layout.x(j, i, v, t), -1.0);
                }
                push(format!("c2f_{j}_{}_{}", v + 1, t + 1), Family::FlowConservation, terms, Sense::Eq, 0.0);
            }
        }
    }
    for t in horizon.working_days() {
        for v in 0..nv {
            let mut terms = Terms::default();
            for i in 1..nodes {
                terms.add(layout.x(0, i, v, t), 1.0);
            }
            push(format!("c2g_{}_{}", v + 1, t + 1), Family::OneRoutePerVehicle, terms, Sense::Le, 1.0);
        }
    }
    for t in horizon.working_days() {
        for v in 0..nv {
            let mut terms = Terms::default();
            route_time_terms(v, t, 1.0, &mut terms);
            push(format!("c2h_{}_{}", v + 1, t + 1), Family::ShiftLength, terms, Sense::Le, fleet.shift_minutes);
        }
    }
    for i in 0..nodes {
        for j in 0..nodes {
            for v in 0..nv {
                for t in 0..nt {
                    let mut terms = Terms::default();
                    terms.add(layout.y(i, j, v, t), 1.0).add(layout.x(i, j, v, t), -q);
                    push(format!("c2i_{i}_{j}_{}_{}", v + 1, t + 1), Family::ArcCapacity, terms, Sense::Le, 0.0);
                }
            }
        }
    }
    for j in 1..nodes {
        for v in 0..nv {
            for t in 0..nt {
                let mut terms = Terms::default();
                for i in 0..nodes {
                    terms
                        .add(layout.y(i, j, v, t), 1.0)
                        .add(layout.y(j, i, v, t), -1.0)
                        .add(layout.x(i, j, v, t), q);
                }
                terms.add(layout.w(j, t), 1.0);
                push(format!("c2j_{j}_{}_{}", v + 1, t + 1), Family::LoadTracking, terms, Sense::Le, q);
            }
        }
    }
    for i in 1..nodes {
        let daily = instance.daily_waste(i);
        for t in 0..nt {
            let prev = horizon.prev(t);
            let mut terms = Terms::default();
            terms.add(layout.w(i, t), 1.0).add(layout.w(i, prev), -1.0);
            for j in 0..nodes {
                for v in 0..nv {
                    terms.add(layout.x(i, j, v, prev), big_m);
                }
            }
            if t == 0 {
                push(format!("l2_{i}"), Family::AccumulationWrapBigM, terms, Sense::Ge, daily);
            } else {
                push(format!("l1_{i}_{}", t + 1), Family::AccumulationBigM, terms, Sense::Ge, daily);
            }
        }
    }
    for i in 1..nodes {
        for t in 0..nt {
            let mut terms = Terms::default();
            terms.add(layout.w(i, t), 1.0);
            push(format!("l3_{i}_{}", t + 1), Family::AccumulationFloor, terms, Sense::Ge, instance.daily_waste(i));
        }
    }
    for i in 1..nodes {
        for t in 0..nt {
            let mut terms = Terms::default();
            terms.add(layout.w(i, t), 1.0).add(layout.wmax(i), -1.0);
            push(format!("c2m_{i}_{}", t + 1), Family::PeakAccumulation, terms, Sense::Le, 0.0);
        }
    }
    for (family, prefix) in [
        (Family::GloverUpperBin, "lin1"),
        (Family::GloverUpperArc, "lin2"),
        (Family::GloverLower, "lin3"),
    ] {
        for i in layout.z_sources() {
            for b in 0..nb {
                for j in 1..nodes {
                    for v in 0..nv {
                        for t in 0..nt {
                            let z = layout.z(i, b, j, v, t);
                            let nbj = layout.n(b, j);
                            let x = layout.x(i, j, v, t);
                            let mut terms = Terms::default();
                            terms.add(z, 1.0);
                            let (sense, rhs) = match family {
                                Family::GloverUpperBin => {
                                    terms.add(nbj, -1.0);
                                    (Sense::Le, 0.0)
                                }
                                Family::GloverUpperArc => {
                                    terms.add(x, -1.0);
                                    (Sense::Le, 0.0)
                                }
                                _ => {
                                    terms.add(nbj, -1.0).add(x, -1.0);
                                    (Sense::Ge, -1.0)
                                }
                            };
                            push(format!("{prefix}_{i}_{b}_{j}_{}_{}", v + 1, t + 1), family, terms, sense, rhs);
                        }
                    }
                }
            }
        }
    }

    LpModel {
        name: String::from(instance.name()),
        layout,
        variables: layout.variables(),
        constraints: rows,
        objective: objective.finish(),
        big_m,
    }
}

/// A constraint or domain breach at a given assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct RowViolation {
    pub name: String,
    /// `None` for variable-domain breaches.
    pub family: Option<Family>,
    pub lhs: f64,
    pub sense: Sense,
    pub rhs: f64,
    /// Signed slack; negative means violated.
    pub slack: f64,
}

/// Feasibility tolerance of [`substitute_solution`].
pub const SUBSTITUTION_TOLERANCE: f64 = 1e-6;

/// Evaluates every row (and variable domain) of the model at `values`.
pub fn substitute_solution(model: &LpModel, values: &[f64]) -> Result<Vec<RowViolation>> {
    if values.len() != model.variables.len() {
        let missing = model.variables.get(values.len()).map_or_else(String::new, |v| v.name.clone());
        return Err(Error::MissingVariable(missing));
    }
    let tol = SUBSTITUTION_TOLERANCE;
    let mut out = Vec::new();
    for (var, &x) in model.variables.iter().zip(values) {
        let ok = match var.kind {
            VarKind::Binary => x.abs() <= tol || (x - 1.0).abs() <= tol,
            VarKind::Continuous => x >= -tol,
        };
        if !ok {
            out.push(RowViolation { name: var.name.clone(), family: None, lhs: x, sense: Sense::Ge, rhs: 0.0, slack: -x.abs() });
        }
    }
    for c in &model.constraints {
        let lhs: f64 = c.terms.iter().map(|&(v, a)| a * values[v]).sum();
        let slack = match c.sense {
            Sense::Le => c.rhs - lhs,
            Sense::Ge => lhs - c.rhs,
            Sense::Eq => -(lhs - c.rhs).abs(),
        };
        if slack < -tol {
            out.push(RowViolation { name: c.name.clone(), family: Some(c.family), lhs, sense: c.sense, rhs: c.rhs, slack });
        }
    }
    Ok(out)
}

/// Maps a schedule onto the model's variables: route `r` of a day is vehicle
/// `r`, `y` carries the cumulative load along each arc, `w`/`wmax` the
/// accumulations and `z = n * x`.
pub fn schedule_to_assignment(schedule: &Schedule, model: &LpModel) -> Result<Vec<f64>> {
    let layout = &model.layout;
    let mut values = vec![0.0; layout.len()];
    for (t, day_routes) in schedule.routes.iter().enumerate() {
        if t >= layout.n_days {
            return Err(Error::InvalidInput(format!("schedule has day {t} beyond the model horizon")));
        }
        if day_routes.len() > layout.n_vehicles {
            return Err(Error::InvalidInput(format!(
                "day {t} has {} routes for {} vehicles",
                day_routes.len(),
                layout.n_vehicles
            )));
        }
        for (v, route) in day_routes.iter().enumerate() {
            let mut prev = 0;
            let mut load = 0.0;
            for &p in route.iter().chain(core::iter::once(&0)) {
                if p > layout.n_points {
                    return Err(Error::UnknownPoint(p));
                }
                values[layout.x(prev, p, v, t)] = 1.0;
                values[layout.y(prev, p, v, t)] = load;
                if p != 0 {
                    load += schedule.accumulation[p - 1][t];
                }
                prev = p;
            }
        }
    }
    for i in 1..=layout.n_points {
        for t in 0..layout.n_days {
            values[layout.w(i, t)] = schedule.accumulation[i - 1][t];
        }
        values[layout.wmax(i)] = schedule.w_max[i - 1];
        let b = *schedule.bin_assignment.get(i - 1).ok_or(Error::MissingBin(i))?;
        if b >= layout.n_bins {
            return Err(Error::MissingBin(i));
        }
        values[layout.n(b, i)] = 1.0;
    }
    let sources: Vec<usize> = layout.z_sources().collect();
    for &i in &sources {
        for j in 1..=layout.n_points {
            let b = schedule.bin_assignment[j - 1];
            for v in 0..layout.n_vehicles {
                for t in 0..layout.n_days {
                    values[layout.z(i, b, j, v, t)] = values[layout.x(i, j, v, t)];
                }
            }
        }
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BinCatalog, BinCombination, FleetParams, Horizon, Instance};

    fn tiny() -> Problem {
        let travel = vec![vec![0.0, 2.0, 3.0], vec![2.0, 0.0, 1.5], vec![3.0, 1.5, 0.0]];
        let catalog = BinCatalog::new(vec![
            BinCombination { capacity: 1.1, service_minutes: 0.7, cost: 0.78 },
            BinCombination { capacity: 2.4, service_minutes: 0.66, cost: 1.56 },
        ])
        .unwrap();
        Problem::new(
            Instance::new("tiny", travel, vec![0.5, 0.6]).unwrap(),
            Horizon::new(2, &[1]).unwrap(),
            catalog,
            FleetParams::new(5.0, 2, 8.0, 60.0, 0.5764).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn terms_merge_and_drop_zeros() {
        let mut t = Terms::default();
        t.add(3, 1.0).add(1, 2.0).add(3, -1.0).add(1, 0.5);
        assert_eq!(t.finish(), vec![(1, 2.5)]);
    }

    #[test]
    fn layout_indices_are_a_bijection() {
        for depot in [false, true] {
            let layout = VarLayout::new(2, 2, 2, 2, depot);
            let vars = layout.variables();
            assert_eq!(vars[layout.x(1, 2, 1, 0)].name, "x_1_2_2_1");
            assert_eq!(vars[layout.y(0, 2, 0, 1)].name, "y_0_2_1_2");
            assert_eq!(vars[layout.w(2, 1)].name, "w_2_2");
            assert_eq!(vars[layout.wmax(1)].name, "wmax_1");
            assert_eq!(vars[layout.n(1, 0)].name, "n_1_0");
            assert_eq!(vars[layout.z(1, 1, 2, 0, 1)].name, "z_1_1_2_1_2");
            if depot {
                assert_eq!(vars[layout.z(0, 0, 1, 1, 0)].name, "z_0_0_1_2_1");
            }
            let mut names: Vec<_> = vars.iter().map(|v| v.name.clone()).collect();
            names.sort();
            names.dedup();
            assert_eq!(names.len(), layout.len());
        }
    }

    #[test]
    fn all_zero_assignment_breaks_one_bin_rows() {
        let model = emit_milp(&tiny(), EmitOptions::default());
        let zeros = vec![0.0; model.n_variables()];
        let v = substitute_solution(&model, &zeros).unwrap();
        let c2b: Vec<_> = v.iter().filter(|r| r.family == Some(Family::OneBin)).collect();
        assert_eq!(c2b.len(), 2);
        assert!(c2b.iter().all(|r| (r.slack + 1.0).abs() < 1e-12));
        assert!(substitute_solution(&model, &zeros[1..]).is_err());
    }

    #[test]
    fn deterministic_text() {
        let a = emit_milp(&tiny(), EmitOptions::default()).to_lp_string();
        let b = emit_milp(&tiny(), EmitOptions::default()).to_lp_string();
        assert_eq!(a, b);
        assert!(a.starts_with("\\ Problem: tiny"));
        assert!(a.trim_end().ends_with("End"));
    }

    #[test]
    fn number_formatting() {
        assert_eq!(fmt_num(12.0), "12");
        assert_eq!(fmt_num(-1.0), "-1");
        assert_eq!(fmt_num(0.5764), "0.5764");
    }
}
