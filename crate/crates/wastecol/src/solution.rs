//! JSON solution files.
//!
//! A file carries the chromosome (when the plan came from the GA) and a
//! summary of the decoded plan. Reading re-derives the summary and rejects
//! files whose stored summary no longer matches.

use std::path::Path;

use serde::{Deserialize, Serialize};
use wastecol_core::decode::{decode, Chromosome};
use wastecol_core::ga::GaConfig;
use wastecol_core::model::{evaluate, EvalReport, Problem, Route, Schedule, COST_TOLERANCE};

use crate::error::{read_to_string, write_string, Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanSummary {
    /// Catalog index per point, point 1 first.
    pub bin_assignment: Vec<usize>,
    /// Routes per day (Monday first); each route lists point ids in visiting order.
    pub routes: Vec<Vec<Route>>,
    /// Route durations in minutes, parallel to `routes`.
    pub route_times: Vec<Vec<f64>>,
    pub bin_cost: f64,
    pub routing_cost: f64,
    pub overall_cost: f64,
    pub feasible: bool,
}

impl PlanSummary {
    pub fn new(schedule: &Schedule, report: &EvalReport) -> Self {
        Self {
            bin_assignment: schedule.bin_assignment.clone(),
            routes: schedule.routes.clone(),
            route_times: schedule.route_times.clone(),
            bin_cost: report.bin_cost,
            routing_cost: report.routing_cost,
            overall_cost: report.overall_cost,
            feasible: report.feasible,
        }
    }

    /// First difference from `other`, if any; costs and times compare with a
    /// small tolerance, everything else exactly.
    pub fn mismatch(&self, other: &PlanSummary) -> Option<String> {
        let close = |a: f64, b: f64| (a - b).abs() <= COST_TOLERANCE;
        if self.bin_assignment != other.bin_assignment {
            return Some("bin assignment differs".into());
        }
        if self.routes != other.routes {
            return Some("routes differ".into());
        }
        let times_match = self.route_times.len() == other.route_times.len()
            && self
                .route_times
                .iter()
                .zip(&other.route_times)
                .all(|(a, b)| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| close(*x, *y)));
        if !times_match {
            return Some("route times differ".into());
        }
        for (what, a, b) in [
            ("bin cost", self.bin_cost, other.bin_cost),
            ("routing cost", self.routing_cost, other.routing_cost),
            ("overall cost", self.overall_cost, other.overall_cost),
        ] {
            if !close(a, b) {
                return Some(format!("{what} is {a} in the file but {b} when recomputed"));
            }
        }
        if self.feasible != other.feasible {
            return Some("feasibility flag differs".into());
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub format_version: u32,
    pub instance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<GaConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chromosome: Option<Chromosome>,
    pub summary: PlanSummary,
}

impl SolutionFile {
    /// Decodes `chromosome` and records the result.
    pub fn from_chromosome(
        problem: &Problem,
        chromosome: Chromosome,
        seed: Option<u64>,
        config: Option<GaConfig>,
    ) -> Result<Self> {
        let schedule = decode(&chromosome, problem)?;
        let report = evaluate(&schedule, problem)?;
        Ok(Self {
            format_version: FORMAT_VERSION,
            instance: problem.instance.name().to_string(),
            seed,
            config,
            chromosome: Some(chromosome),
            summary: PlanSummary::new(&schedule, &report),
        })
    }

    /// A plan given by its routes and bins only.
    pub fn from_schedule(problem: &Problem, schedule: &Schedule) -> Result<Self> {
        let report = evaluate(schedule, problem)?;
        Ok(Self {
            format_version: FORMAT_VERSION,
            instance: problem.instance.name().to_string(),
            seed: None,
            config: None,
            chromosome: None,
            summary: PlanSummary::new(schedule, &report),
        })
    }

    /// Rebuilds the schedule: from the chromosome when present, else from
    /// the stored routes and bins.
    pub fn schedule(&self, problem: &Problem) -> Result<Schedule> {
        Ok(match &self.chromosome {
            Some(c) => decode(c, problem)?,
            None => Schedule::from_routes(self.summary.routes.clone(), self.summary.bin_assignment.clone(), problem)?,
        })
    }

    /// Checks that the stored summary is what the plan evaluates to.
    pub fn verify(&self, problem: &Problem) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Config(format!("unsupported solution format version {}", self.format_version)));
        }
        let schedule = self.schedule(problem).map_err(|e| match e {
            Error::Core(c) => Error::StaleSolution(format!("plan no longer decodes: {c}")),
            other => other,
        })?;
        let report = evaluate(&schedule, problem)?;
        match self.summary.mismatch(&PlanSummary::new(&schedule, &report)) {
            Some(why) => Err(Error::StaleSolution(why)),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution files always serialise")
    }

    pub fn from_json(text: &str, path: &Path) -> Result<Self> {
        serde_json::from_str(text).map_err(|source| Error::Json { path: path.to_path_buf(), source })
    }
}

pub fn write_solution(path: &Path, solution: &SolutionFile) -> Result<()> {
    let mut text = solution.to_json();
    text.push('\n');
    write_string(path, &text)
}

/// Reads a solution file without checking it against an instance.
pub fn read_solution_unchecked(path: &Path) -> Result<SolutionFile> {
    SolutionFile::from_json(&read_to_string(path)?, path)
}

/// Reads a solution file and verifies its summary against `problem`.
pub fn read_solution(path: &Path, problem: &Problem) -> Result<SolutionFile> {
    let s = read_solution_unchecked(path)?;
    s.verify(problem)?;
    Ok(s)
}
