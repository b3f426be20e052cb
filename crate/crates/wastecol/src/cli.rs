//! Command-line front end. The binary only forwards to [`main_with_args`].

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use wastecol_core::exact::{brute_force, emit_milp, schedule_to_assignment, substitute_solution, EmitOptions};
use wastecol_core::ga::{run_with, GaConfig};
use wastecol_core::model::{evaluate, EvalReport, FleetParams, Horizon, Problem, Schedule, DAY_NAMES};

use crate::config::{instance_overrides, load_config, CONFIG_ENV};
use crate::error::{write_string, Error, Result};
use crate::history::write_history;
use crate::instance::{parse_instance, published_problem, InstancePaths};
use crate::render::render_routes;
use crate::report::{bench, compare, fmt2, gap, tune, TuneGrid};
use crate::solution::{read_solution, read_solution_unchecked, write_solution, SolutionFile};

pub const EXIT_FEASIBLE: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "wastecol", version, about = "Waste collection routing with bin sizing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the genetic algorithm once and write the best plan.
    Solve(SolveArgs),
    /// Independent GA runs with consecutive seeds.
    Bench(BenchArgs),
    /// Factorial study of the permutation operators and rates.
    Tune(TuneArgs),
    /// Evaluate a solution file and list violated constraints.
    Check(CheckArgs),
    /// Percentage difference (a - b) / b, or an optimality gap.
    Compare(CompareArgs),
    /// Write the linearised model in LP format.
    EmitLp(EmitArgs),
    /// Exhaustive optimum of a tiny instance.
    Oracle(OracleArgs),
    /// Draw the routes of a solution as SVG, one file per working day.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// Directory holding time.txt and waste.txt.
    #[arg(long, short = 'i', required_unless_present = "time")]
    pub instance: Option<PathBuf>,
    #[arg(long, requires = "waste", conflicts_with = "instance")]
    pub time: Option<PathBuf>,
    #[arg(long, requires = "time")]
    pub waste: Option<PathBuf>,
    /// Instance name (defaults to the directory name).
    #[arg(long)]
    pub name: Option<String>,
    /// Vehicle capacity in m3 (default: published rule).
    #[arg(long)]
    pub capacity: Option<f64>,
    /// Fleet size (default: ceil(n / 10)).
    #[arg(long)]
    pub vehicles: Option<usize>,
    /// Shift length in minutes (default: published rule).
    #[arg(long)]
    pub shift: Option<f64>,
    /// Days in the horizon.
    #[arg(long, default_value_t = 7)]
    pub days: usize,
    /// Rest days, 0-based (Monday = 0).
    #[arg(long, value_delimiter = ',', default_values_t = [6])]
    pub rest: Vec<usize>,
}

impl InstanceArgs {
    pub fn load(&self) -> Result<Problem> {
        let (_, instance) = match (&self.instance, &self.time, &self.waste) {
            (Some(dir), _, _) => {
                let paths = InstancePaths::from_dir(dir);
                let name = self.name.clone().unwrap_or(paths.name.clone());
                (name.clone(), parse_instance(&paths.time, &paths.waste, &name)?)
            }
            (None, Some(t), Some(w)) => {
                let name = self.name.clone().unwrap_or_else(|| "instance".into());
                (name.clone(), parse_instance(t, w, &name)?)
            }
            _ => return Err(Error::Config("give --instance DIR or --time and --waste".into())),
        };
        let horizon = Horizon::new(self.days, &self.rest)?;
        let plain = self.capacity.is_none() && self.vehicles.is_none() && self.shift.is_none();
        if plain && self.days == 7 && self.rest == [6] {
            return published_problem(instance);
        }
        let derived = wastecol_core::model::derive_fleet(&instance, &horizon).ok();
        let q = self.capacity.unwrap_or(if instance.n_points() == 12 { 12.0 } else { 21.0 });
        let n_v = self.vehicles.unwrap_or_else(|| wastecol_core::model::fleet_size(instance.n_points()));
        let shift = match (self.shift, derived) {
            (Some(s), _) => s,
            (None, Some((_, s))) => s,
            (None, None) => {
                return Err(Error::Config("the shift formula needs at least two vehicles; pass --shift".into()))
            }
        };
        let fleet = FleetParams::new(
            q,
            n_v,
            wastecol_core::model::UNLOAD_MINUTES,
            shift,
            wastecol_core::model::COST_PER_MINUTE,
        )?;
        Ok(Problem::new(instance, horizon, wastecol_core::model::BinCatalog::standard(), fleet)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct GaArgs {
    /// GA configuration file (TOML).
    #[arg(long, short = 'c', env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub generations: Option<usize>,
    /// Ignore the bundled per-instance settings (lambda, generations).
    #[arg(long)]
    pub no_instance_defaults: bool,
}

impl GaArgs {
    pub fn resolve(&self, problem: &Problem) -> Result<GaConfig> {
        let mut cfg = match &self.config {
            Some(p) => load_config(p)?,
            None => GaConfig::default(),
        };
        if !self.no_instance_defaults {
            if let Some(o) = instance_overrides(problem.instance.name()) {
                o.apply(&mut cfg);
            }
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(g) = self.generations {
            cfg.generations = g;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub ga: GaArgs,
    /// Solution file to write.
    #[arg(long, short = 'o', default_value = "solution.json")]
    pub out: PathBuf,
    /// Per-generation statistics (CSV).
    #[arg(long)]
    pub history: Option<PathBuf>,
    /// Evaluate offspring on all cores (results are identical).
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub ga: GaArgs,
    #[arg(long, default_value_t = 30)]
    pub runs: usize,
    /// Per-run results (CSV).
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub ga: GaArgs,
    #[arg(long, default_value_t = 30)]
    pub runs_per_cell: usize,
    /// Per-treatment summary (CSV); factor tests go to the same path with `.factors.csv`.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, short = 's')]
    pub solution: PathBuf,
    /// Also substitute the plan into the linearised model.
    #[arg(long)]
    pub milp: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub a: f64,
    pub b: f64,
    /// Treat the values as (overall cost, lower bound) and print the gap.
    #[arg(long)]
    pub gap: bool,
}

#[derive(Debug, Args)]
pub struct EmitArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, short = 'o')]
    pub out: PathBuf,
    /// Charge the service time of the first point of each route as well.
    #[arg(long)]
    pub depot_arc_service: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, default_value_t = wastecol_core::exact::DEFAULT_STATE_CAP)]
    pub state_cap: f64,
    #[arg(long, short = 'o')]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, short = 's')]
    pub solution: PathBuf,
    #[arg(long, short = 'o', default_value = ".")]
    pub out_dir: PathBuf,
}

/// Parses arguments, runs the command, prints its report and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_FEASIBLE };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((text, code)) => {
            print!("{text}");
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

/// Runs a command and returns its report and exit code.
pub fn execute(command: &Command) -> Result<(String, i32)> {
    match command {
        Command::Solve(a) => solve(a),
        Command::Bench(a) => {
            let problem = a.instance.load()?;
            let cfg = a.ga.resolve(&problem)?;
            let report = bench(&problem, &cfg, a.runs)?;
            if let Some(p) = &a.csv {
                write_string(p, &report.csv()?)?;
            }
            let code = if report.feasible_count == report.runs.len() { EXIT_FEASIBLE } else { EXIT_INFEASIBLE };
            Ok((report.table(), code))
        }
        Command::Tune(a) => {
            let problem = a.instance.load()?;
            let cfg = a.ga.resolve(&problem)?;
            let report = tune(&problem, &cfg, &TuneGrid::default(), a.runs_per_cell)?;
            if let Some(p) = &a.csv {
                write_string(p, &report.csv()?)?;
                write_string(&p.with_extension("factors.csv"), &report.factors_csv()?)?;
            }
            Ok((report.table(), EXIT_FEASIBLE))
        }
        Command::Check(a) => check(a),
        Command::Compare(a) => {
            let (_, shown) = if a.gap { gap(a.a, a.b)? } else { compare(a.a, a.b)? };
            Ok((format!("{shown}\n"), EXIT_FEASIBLE))
        }
        Command::EmitLp(a) => {
            let problem = a.instance.load()?;
            let model = emit_milp(&problem, EmitOptions { depot_arc_service: a.depot_arc_service });
            write_string(&a.out, &model.to_lp_string())?;
            Ok((
                format!("{} variables, {} constraints, BigM = {}\n", model.n_variables(), model.constraints.len(), model.big_m),
                EXIT_FEASIBLE,
            ))
        }
        Command::Oracle(a) => {
            let problem = a.instance.load()?;
            match brute_force(&problem, a.state_cap)? {
                None => Ok(("no feasible plan exists\n".into(), EXIT_INFEASIBLE)),
                Some(sol) => {
                    if let Some(p) = &a.out {
                        write_solution(p, &SolutionFile::from_schedule(&problem, &sol.schedule)?)?;
                    }
                    let report = evaluate(&sol.schedule, &problem)?;
                    Ok((plan_text(&sol.schedule, &report), EXIT_FEASIBLE))
                }
            }
        }
        Command::Render(a) => {
            let problem = a.instance.load()?;
            let sol = read_solution(&a.solution, &problem)?;
            let schedule = sol.schedule(&problem)?;
            std::fs::create_dir_all(&a.out_dir).map_err(|source| Error::Io { path: a.out_dir.clone(), source })?;
            let mut text = String::new();
            for (day, svg) in render_routes(&schedule, &problem) {
                let path = a.out_dir.join(format!("{}-{}.svg", problem.instance.name(), DAY_NAMES.get(day).unwrap_or(&"day")));
                write_string(&path, &svg)?;
                let _ = writeln!(text, "{}", path.display());
            }
            Ok((text, EXIT_FEASIBLE))
        }
    }
}

fn solve(a: &SolveArgs) -> Result<(String, i32)> {
    let problem = a.instance.load()?;
    let mut cfg = a.ga.resolve(&problem)?;
    cfg.parallel = a.parallel;
    let out = run_with(&problem, &cfg, |_| {})?;
    if let Some(p) = &a.history {
        let file = std::fs::File::create(p).map_err(|source| Error::Io { path: p.clone(), source })?;
        write_history(std::io::BufWriter::new(file), &out.history)?;
    }
    let file = SolutionFile::from_chromosome(&problem, out.best.chromosome.clone(), Some(cfg.seed), Some(cfg))?;
    write_solution(&a.out, &file)?;
    let report = evaluate(&out.schedule, &problem)?;
    let code = if report.feasible { EXIT_FEASIBLE } else { EXIT_INFEASIBLE };
    Ok((plan_text(&out.schedule, &report), code))
}

fn check(a: &CheckArgs) -> Result<(String, i32)> {
    let problem = a.instance.load()?;
    let sol = read_solution_unchecked(&a.solution)?;
    sol.verify(&problem)?;
    let schedule = sol.schedule(&problem)?;
    let report = evaluate(&schedule, &problem)?;
    let mut text = plan_text(&schedule, &report);
    let mut feasible = report.feasible;
    if a.milp {
        let model = emit_milp(&problem, EmitOptions::default());
        let values = schedule_to_assignment(&schedule, &model)?;
        let rows = substitute_solution(&model, &values)?;
        let _ = writeln!(text, "linear model: {} violated rows", rows.len());
        for r in rows.iter().take(20) {
            let _ = writeln!(text, "  {}: {} {} {} (slack {})", r.name, r.lhs, r.sense.symbol(), r.rhs, r.slack);
        }
        feasible &= rows.is_empty();
    }
    Ok((text, if feasible { EXIT_FEASIBLE } else { EXIT_INFEASIBLE }))
}

/// Human-readable plan: routes with times and loads, costs and violations.
pub fn plan_text(schedule: &Schedule, report: &EvalReport) -> String {
    let mut s = String::new();
    for (day, routes) in schedule.routes.iter().enumerate() {
        let name = DAY_NAMES.get(day).copied().unwrap_or("day");
        for (r, route) in routes.iter().enumerate() {
            let loads: Vec<String> = schedule.loads[day][r].iter().map(|l| fmt2(*l)).collect();
            let _ = writeln!(
                s,
                "{name} R{}: {:?}  time {} min  loads [{}]",
                r + 1,
                route,
                fmt2(schedule.route_times[day][r]),
                loads.join(", ")
            );
        }
    }
    let _ = writeln!(s, "bins: {:?}", schedule.bin_assignment);
    let _ = writeln!(
        s,
        "bin cost {}  routing cost {}  overall cost {}",
        fmt2(report.bin_cost),
        fmt2(report.routing_cost),
        fmt2(report.overall_cost)
    );
    for v in &report.violations {
        let mut at = String::new();
        if let Some(d) = v.day {
            let _ = write!(at, " {}", DAY_NAMES.get(d).copied().unwrap_or("day"));
        }
        if let Some(p) = v.point {
            let _ = write!(at, " point {p}");
        }
        if let Some(r) = v.route {
            let _ = write!(at, " R{}", r + 1);
        }
        let _ = writeln!(s, "violation ({}){at}: {}", v.constraint.label(), fmt2(v.magnitude));
    }
    let _ = writeln!(s, "{}", if report.feasible { "feasible" } else { "infeasible" });
    s
}

/// Convenience for tests and scripts: solve with an explicit config.
pub fn solve_to_file(problem: &Problem, cfg: &GaConfig, out: &Path) -> Result<SolutionFile> {
    let outcome = run_with(problem, cfg, |_| {})?;
    let file = SolutionFile::from_chromosome(problem, outcome.best.chromosome, Some(cfg.seed), Some(cfg.clone()))?;
    write_solution(out, &file)?;
    Ok(file)
}
