//! Mixed binary/permutation genetic algorithm.
//!
//! Each generation runs `N` binary tournaments, pairs consecutive winners,
//! recombines every pair (all day orders and the visit mask together) with
//! one Bernoulli draw at the crossover rate, mutates each day order of each
//! child with probability `mutation_rate` and every working-day mask bit with
//! probability `1/n_points`, repairs the children and evaluates them. The
//! saved elites of the previous generation then replace the worst children.
//!
//! Randomness is drawn from ChaCha8 streams derived from the seed, one per
//! offspring pair and one for selection, so a run is reproducible whether
//! pairs are evaluated serially or on a thread pool.

pub mod operators;

use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decode::{decode, repair_in_place, Chromosome};
use crate::error::{Error, Result};
use crate::model::{Problem, Schedule};

pub use operators::{CrossoverOp, MutationOp};

/// Penalty weight for excess daily routes used in the published tuning.
pub const DEFAULT_LAMBDA: f64 = 100.0;
/// Penalty weight for shift overruns (per minute).
pub const DEFAULT_GAMMA: f64 = 1000.0;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover: CrossoverOp,
    pub crossover_rate: f64,
    pub mutation: MutationOp,
    pub mutation_rate: f64,
    /// Per-bit flip probability of the mask; `None` means `1 / n_points`.
    pub mask_mutation_rate: Option<f64>,
    pub elite_count: usize,
    pub lambda: f64,
    pub gamma: f64,
    pub seed: u64,
    /// Evaluate offspring pairs on the rayon pool (needs the `parallel` feature).
    pub parallel: bool,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            generations: 1000,
            crossover: CrossoverOp::Cx,
            crossover_rate: 0.8,
            mutation: MutationOp::Em,
            mutation_rate: 0.05,
            mask_mutation_rate: None,
            elite_count: 2,
            lambda: DEFAULT_LAMBDA,
            gamma: DEFAULT_GAMMA,
            seed: 0,
            parallel: false,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let rate_ok = |r: f64| (0.0..=1.0).contains(&r);
        let bad = |msg: &str| Err(Error::InvalidInput(format!("GA config: {msg}")));
        if self.population_size < 2 || !self.population_size.is_multiple_of(2) {
            return bad("population size must be even and at least 2");
        }
        if !rate_ok(self.crossover_rate) || !rate_ok(self.mutation_rate) {
            return bad("rates must lie in [0, 1]");
        }
        if self.mask_mutation_rate.is_some_and(|r| !rate_ok(r)) {
            return bad("mask mutation rate must lie in [0, 1]");
        }
        if self.elite_count > self.population_size {
            return bad("more elites than individuals");
        }
        if !(self.lambda > 0.0 && self.gamma > 0.0) {
            return bad("penalty weights must be positive");
        }
        Ok(())
    }
}

/// Penalised fitness and its parts.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Fitness {
    pub value: f64,
    pub overall_cost: f64,
    pub bin_cost: f64,
    pub routing_cost: f64,
    /// `lambda * sum over days of (routes - n_v) / n_v`, days within the fleet excluded.
    pub route_penalty: f64,
    /// `gamma * sum over routes of (time - shift)`, routes within the shift excluded.
    pub time_penalty: f64,
}

impl Fitness {
    pub fn is_feasible(&self) -> bool {
        self.route_penalty == 0.0 && self.time_penalty == 0.0
    }
}

/// Fitness of a decoded schedule. Costs are accumulated in the same order as
/// [`crate::model::evaluate`], so the overall cost matches it bit for bit.
pub fn score_schedule(schedule: &Schedule, problem: &Problem, lambda: f64, gamma: f64) -> Fitness {
    let fleet = &problem.fleet;
    let bin_cost: f64 = schedule.bin_assignment.iter().map(|&b| problem.catalog[b].cost).sum();
    let mut minutes = 0.0;
    let mut overrun = 0.0;
    let mut excess = 0.0;
    let nv = fleet.n_vehicles as f64;
    for (day, times) in schedule.route_times.iter().enumerate() {
        for &tt in times {
            minutes += tt;
            if tt > fleet.shift_minutes {
                overrun += tt - fleet.shift_minutes;
            }
        }
        let nr = schedule.routes[day].len();
        if nr > fleet.n_vehicles {
            excess += (nr - fleet.n_vehicles) as f64 / nv;
        }
    }
    let routing_cost = fleet.cost_per_minute * minutes;
    let overall_cost = bin_cost + routing_cost;
    let route_penalty = lambda * excess;
    let time_penalty = gamma * overrun;
    Fitness {
        value: overall_cost + route_penalty + time_penalty,
        overall_cost,
        bin_cost,
        routing_cost,
        route_penalty,
        time_penalty,
    }
}

/// Penalised fitness of a repaired chromosome.
pub fn fitness(chromosome: &Chromosome, problem: &Problem, config: &GaConfig) -> Result<Fitness> {
    let schedule = decode(chromosome, problem)?;
    Ok(score_schedule(&schedule, problem, config.lambda, config.gamma))
}

/// Binary tournament without replacement; lower fitness wins, the first
/// drawn individual wins ties.
pub fn tournament_select<R: Rng + ?Sized>(fitnesses: &[f64], rng: &mut R) -> usize {
    let n = fitnesses.len();
    debug_assert!(n >= 2);
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    if fitnesses[j] < fitnesses[i] {
        j
    } else {
        i
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub chromosome: Chromosome,
    pub fitness: Fitness,
}

/// Per-generation population statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GenerationStats {
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
    pub feasible_fraction: f64,
}

#[derive(Debug, Clone)]
pub struct GaOutcome {
    /// Best individual ever evaluated (lowest penalised fitness).
    pub best: Individual,
    pub schedule: Schedule,
    pub history: Vec<GenerationStats>,
    pub evaluations: u64,
}

const SELECTION_SLOT: u64 = u32::MAX as u64;

fn stream_rng(seed: u64, generation: usize, slot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((generation as u64) << 32) | slot);
    rng
}

/// Uniform random day orders and mask bits (working days only), not repaired.
pub fn random_chromosome<R: Rng + ?Sized>(problem: &Problem, rng: &mut R) -> Chromosome {
    let n = problem.n_points();
    let days = problem.n_days();
    let perms = (0..days)
        .map(|_| {
            let mut row: Vec<usize> = (1..=n).collect();
            row.shuffle(rng);
            row
        })
        .collect();
    let mask = (0..n)
        .map(|_| (0..days).map(|d| problem.horizon.is_working(d) && rng.gen_bool(0.5)).collect())
        .collect();
    Chromosome { perms, mask }
}

fn evaluate_new(mut chromosome: Chromosome, problem: &Problem, config: &GaConfig) -> Result<Individual> {
    repair_in_place(&mut chromosome, problem)?;
    let fitness = fitness(&chromosome, problem, config)?;
    Ok(Individual { chromosome, fitness })
}

struct Breeder<'a> {
    problem: &'a Problem,
    config: &'a GaConfig,
    mask_rate: f64,
}

impl Breeder<'_> {
    fn breed(&self, a: &Individual, b: &Individual, rng: &mut ChaCha8Rng) -> Result<[Individual; 2]> {
        let horizon = &self.problem.horizon;
        let mut ca = a.chromosome.clone();
        let mut cb = b.chromosome.clone();
        let crossed = rng.gen_bool(self.config.crossover_rate);
        if crossed {
            for day in 0..ca.perms.len() {
                let (x, y) = operators::crossover_perm(&a.chromosome.perms[day], &b.chromosome.perms[day], self.config.crossover, rng);
                ca.perms[day] = x;
                cb.perms[day] = y;
            }
            operators::crossover_mask(&mut ca.mask, &mut cb.mask, horizon, rng);
        }
        let ma = self.mutate(&mut ca, rng);
        let mb = self.mutate(&mut cb, rng);
        let child_a = if crossed || ma { evaluate_new(ca, self.problem, self.config)? } else { a.clone() };
        let child_b = if crossed || mb { evaluate_new(cb, self.problem, self.config)? } else { b.clone() };
        Ok([child_a, child_b])
    }

    fn mutate(&self, c: &mut Chromosome, rng: &mut ChaCha8Rng) -> bool {
        let mut touched = false;
        for row in c.perms.iter_mut() {
            if rng.gen_bool(self.config.mutation_rate) {
                operators::mutate_perm(row, self.config.mutation, rng);
                touched = true;
            }
        }
        touched |= operators::mutate_mask(&mut c.mask, self.mask_rate, &self.problem.horizon, rng) > 0;
        touched
    }
}

#[cfg(feature = "parallel")]
fn map_range<T, F>(n: usize, parallel: bool, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    if parallel {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn map_range<T, F>(n: usize, _parallel: bool, f: F) -> Result<Vec<T>>
where
    F: Fn(usize) -> Result<T>,
{
    (0..n).map(f).collect()
}

fn generation_stats(generation: usize, pop: &[Individual]) -> GenerationStats {
    let n = pop.len() as f64;
    GenerationStats {
        generation,
        best: pop.iter().map(|i| i.fitness.value).fold(f64::INFINITY, f64::min),
        mean: pop.iter().map(|i| i.fitness.value).sum::<f64>() / n,
        feasible_fraction: pop.iter().filter(|i| i.fitness.is_feasible()).count() as f64 / n,
    }
}

/// Indices sorted from best to worst fitness (stable on ties).
fn ranking(pop: &[Individual]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pop.len()).collect();
    idx.sort_by(|&a, &b| pop[a].fitness.value.total_cmp(&pop[b].fitness.value));
    idx
}

/// Runs the genetic algorithm and returns the best individual found.
pub fn run(problem: &Problem, config: &GaConfig) -> Result<GaOutcome> {
    run_with(problem, config, |_| {})
}

/// [`run`] with a callback invoked after every generation (generation 0 is
/// the initial population).
pub fn run_with<F: FnMut(&GenerationStats)>(problem: &Problem, config: &GaConfig, mut on_generation: F) -> Result<GaOutcome> {
    config.validate()?;
    let n = config.population_size;
    let breeder = Breeder {
        problem,
        config,
        mask_rate: config.mask_mutation_rate.unwrap_or(1.0 / problem.n_points() as f64),
    };

    let mut pop = map_range(n, config.parallel, |i| {
        let mut rng = stream_rng(config.seed, 0, i as u64);
        evaluate_new(random_chromosome(problem, &mut rng), problem, config)
    })?;
    let mut evaluations = n as u64;
    let mut best = pop[ranking(&pop)[0]].clone();
    let mut history = Vec::with_capacity(config.generations + 1);
    let stats = generation_stats(0, &pop);
    on_generation(&stats);
    history.push(stats);

    let mut elites: Vec<Individual> = ranking(&pop).into_iter().take(config.elite_count).map(|i| pop[i].clone()).collect();

    for generation in 1..=config.generations {
        let fitnesses: Vec<f64> = pop.iter().map(|i| i.fitness.value).collect();
        let mut sel_rng = stream_rng(config.seed, generation, SELECTION_SLOT);
        let parents: Vec<usize> = (0..n).map(|_| tournament_select(&fitnesses, &mut sel_rng)).collect();

        let pairs = map_range(n / 2, config.parallel, |k| {
            let mut rng = stream_rng(config.seed, generation, k as u64);
            breeder.breed(&pop[parents[2 * k]], &pop[parents[2 * k + 1]], &mut rng)
        })?;
        let mut next: Vec<Individual> = pairs.into_iter().flatten().collect();
        evaluations += n as u64;

        let order = ranking(&next);
        for (slot, elite) in order.iter().rev().zip(elites.drain(..)) {
            next[*slot] = elite;
        }
        pop = next;

        let order = ranking(&pop);
        if pop[order[0]].fitness.value < best.fitness.value {
            best = pop[order[0]].clone();
        }
        elites = order.into_iter().take(config.elite_count).map(|i| pop[i].clone()).collect();
        let stats = generation_stats(generation, &pop);
        on_generation(&stats);
        history.push(stats);
    }

    let schedule = decode(&best.chromosome, problem)?;
    Ok(GaOutcome { best, schedule, history, evaluations })
}
