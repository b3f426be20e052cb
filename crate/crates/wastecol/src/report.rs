//! Benchmark and tuning harnesses, comparison formulas and table output.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use wastecol_core::exact::optimality_gap;
use wastecol_core::ga::{run, CrossoverOp, GaConfig, MutationOp};
use wastecol_core::model::Problem;
use wastecol_core::stats::{kruskal_wallis, percent_difference, summarize, Summary};

use crate::error::{Error, Result};

/// Two decimals, ties to even on the decimal value as printed.
pub fn fmt2(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let scaled = x * 100.0;
    let floor = scaled.floor();
    let frac = scaled - floor;
    let rounded = if (frac - 0.5).abs() < 1e-7 {
        if floor.rem_euclid(2.0) == 0.0 { floor } else { floor + 1.0 }
    } else {
        scaled.round()
    };
    let v = rounded / 100.0;
    format!("{:.2}", if v == 0.0 { 0.0 } else { v })
}

/// A fraction shown as a percentage with two decimals.
pub fn fmt_pct(fraction: f64) -> String {
    format!("{}%", fmt2(fraction * 100.0))
}

/// `(a - b) / b` and its display form.
pub fn compare(a: f64, b: f64) -> Result<(f64, String)> {
    let d = percent_difference(a, b)?;
    Ok((d, fmt_pct(d)))
}

/// Optimality gap and its display form.
pub fn gap(overall: f64, bound: f64) -> Result<(f64, String)> {
    let g = optimality_gap(overall, bound)?;
    Ok((g, fmt_pct(g)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub seed: u64,
    pub overall_cost: f64,
    pub fitness: f64,
    pub feasible: bool,
    pub runtime_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub runs: Vec<RunRecord>,
    pub min: f64,
    pub median: f64,
    pub mean: f64,
    pub std_dev: f64,
    pub feasible_count: usize,
    pub mean_runtime_s: f64,
}

impl BenchReport {
    pub fn from_runs(runs: Vec<RunRecord>) -> Result<Self> {
        let costs: Vec<f64> = runs.iter().map(|r| r.overall_cost).collect();
        let s: Summary = summarize(&costs)?;
        let mean_runtime_s = runs.iter().map(|r| r.runtime_s).sum::<f64>() / runs.len() as f64;
        Ok(Self {
            feasible_count: runs.iter().filter(|r| r.feasible).count(),
            runs,
            min: s.min,
            median: s.median,
            mean: s.mean,
            std_dev: s.std_dev,
            mean_runtime_s,
        })
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:>6} {:>20} {:>10} {:>9} {:>10}", "run", "seed", "cost", "feasible", "time [s]");
        for (k, r) in self.runs.iter().enumerate() {
            let _ = writeln!(s, "{:>6} {:>20} {:>10} {:>9} {:>10}", k + 1, r.seed, fmt2(r.overall_cost), r.feasible, fmt2(r.runtime_s));
        }
        let _ = writeln!(
            s,
            "min {}  median {}  mean {}  sd {}  feasible {}/{}  mean time {} s",
            fmt2(self.min),
            fmt2(self.median),
            fmt2(self.mean),
            fmt2(self.std_dev),
            self.feasible_count,
            self.runs.len(),
            fmt2(self.mean_runtime_s)
        );
        s
    }

    pub fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.runs {
            w.serialize(r)?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?).expect("csv output is UTF-8"))
    }
}

fn one_run(problem: &Problem, config: &GaConfig, seed: u64) -> Result<RunRecord> {
    let cfg = GaConfig { seed, parallel: false, ..config.clone() };
    let start = Instant::now();
    let out = run(problem, &cfg)?;
    Ok(RunRecord {
        seed,
        overall_cost: out.best.fitness.overall_cost,
        fitness: out.best.fitness.value,
        feasible: out.best.fitness.is_feasible(),
        runtime_s: start.elapsed().as_secs_f64(),
    })
}

/// `runs` independent GA runs with seeds `config.seed + k`, executed on the
/// rayon pool and reported in seed order.
pub fn bench(problem: &Problem, config: &GaConfig, runs: usize) -> Result<BenchReport> {
    if runs == 0 {
        return Err(Error::Config("bench needs at least one run".into()));
    }
    let records = (0..runs as u64)
        .into_par_iter()
        .map(|k| one_run(problem, config, config.seed.wrapping_add(k)))
        .collect::<Result<Vec<_>>>()?;
    BenchReport::from_runs(records)
}

/// Factor levels of the operator study.
#[derive(Debug, Clone, PartialEq)]
pub struct TuneGrid {
    pub crossovers: Vec<CrossoverOp>,
    pub crossover_rates: Vec<f64>,
    pub mutations: Vec<MutationOp>,
    pub mutation_rates: Vec<f64>,
}

impl Default for TuneGrid {
    fn default() -> Self {
        Self {
            crossovers: CrossoverOp::ALL.to_vec(),
            crossover_rates: vec![0.8, 0.85, 0.9],
            mutations: MutationOp::ALL.to_vec(),
            mutation_rates: vec![0.05, 0.10, 0.15],
        }
    }
}

impl TuneGrid {
    pub fn treatments(&self) -> Vec<(CrossoverOp, f64, MutationOp, f64)> {
        let mut out = Vec::new();
        for &c in &self.crossovers {
            for &cr in &self.crossover_rates {
                for &m in &self.mutations {
                    for &mr in &self.mutation_rates {
                        out.push((c, cr, m, mr));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Treatment {
    pub crossover: String,
    pub crossover_rate: f64,
    pub mutation: String,
    pub mutation_rate: f64,
    pub mean_cost: f64,
    pub median_cost: f64,
    pub mean_runtime_s: f64,
    pub median_runtime_s: f64,
    #[serde(skip)]
    pub runs: Vec<RunRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorTest {
    pub factor: String,
    pub response: String,
    pub h: f64,
    pub df: usize,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneReport {
    pub treatments: Vec<Treatment>,
    pub factors: Vec<FactorTest>,
}

/// Chi-square upper tail of `h` with `df` degrees of freedom.
pub fn kruskal_p_value(h: f64, df: usize) -> f64 {
    if df == 0 {
        return 1.0;
    }
    let chi = ChiSquared::new(df as f64).expect("df > 0");
    chi.sf(h.max(0.0))
}

/// Kruskal-Wallis test over groups, with its chi-square p-value.
pub fn kruskal_test(groups: &[Vec<f64>]) -> Result<(f64, usize, f64)> {
    let kw = kruskal_wallis(groups)?;
    Ok((kw.h, kw.df, kruskal_p_value(kw.h, kw.df)))
}

/// Runs every treatment of `grid` `runs_per_cell` times (seeds
/// `base.seed + k`, shared across treatments) and tests each factor.
pub fn tune(problem: &Problem, base: &GaConfig, grid: &TuneGrid, runs_per_cell: usize) -> Result<TuneReport> {
    if runs_per_cell == 0 {
        return Err(Error::Config("tuning needs at least one run per cell".into()));
    }
    let cells = grid.treatments();
    if cells.is_empty() {
        return Err(Error::Config("empty factor grid".into()));
    }
    let jobs: Vec<(usize, u64)> =
        (0..cells.len()).flat_map(|c| (0..runs_per_cell as u64).map(move |k| (c, k))).collect();
    let records = jobs
        .par_iter()
        .map(|&(c, k)| {
            let (x, xr, m, mr) = cells[c];
            let cfg = GaConfig { crossover: x, crossover_rate: xr, mutation: m, mutation_rate: mr, ..base.clone() };
            cfg.validate()?;
            one_run(problem, &cfg, base.seed.wrapping_add(k))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut treatments = Vec::with_capacity(cells.len());
    for (c, chunk) in records.chunks(runs_per_cell).enumerate() {
        let (x, xr, m, mr) = cells[c];
        let cost = summarize(&chunk.iter().map(|r| r.overall_cost).collect::<Vec<_>>())?;
        let time = summarize(&chunk.iter().map(|r| r.runtime_s).collect::<Vec<_>>())?;
        treatments.push(Treatment {
            crossover: x.name().to_string(),
            crossover_rate: xr,
            mutation: m.name().to_string(),
            mutation_rate: mr,
            mean_cost: cost.mean,
            median_cost: cost.median,
            mean_runtime_s: time.mean,
            median_runtime_s: time.median,
            runs: chunk.to_vec(),
        });
    }

    let mut factors = Vec::new();
    let level_of: [(&str, Box<dyn Fn(&Treatment) -> String>); 4] = [
        ("F1 crossover", Box::new(|t: &Treatment| t.crossover.clone())),
        ("F2 crossover rate", Box::new(|t: &Treatment| t.crossover_rate.to_string())),
        ("F3 mutation", Box::new(|t: &Treatment| t.mutation.clone())),
        ("F4 mutation rate", Box::new(|t: &Treatment| t.mutation_rate.to_string())),
    ];
    for (name, level) in &level_of {
        let mut levels: Vec<String> = Vec::new();
        let mut cost_groups: Vec<Vec<f64>> = Vec::new();
        let mut time_groups: Vec<Vec<f64>> = Vec::new();
        for t in &treatments {
            let l = level(t);
            let g = match levels.iter().position(|x| *x == l) {
                Some(g) => g,
                None => {
                    levels.push(l);
                    cost_groups.push(Vec::new());
                    time_groups.push(Vec::new());
                    levels.len() - 1
                }
            };
            cost_groups[g].extend(t.runs.iter().map(|r| r.overall_cost));
            time_groups[g].extend(t.runs.iter().map(|r| r.runtime_s));
        }
        if levels.len() < 2 {
            continue;
        }
        for (response, groups) in [("cost", &cost_groups), ("runtime", &time_groups)] {
            let (h, df, p_value) = kruskal_test(groups)?;
            factors.push(FactorTest { factor: name.to_string(), response: response.into(), h, df, p_value });
        }
    }
    Ok(TuneReport { treatments, factors })
}

impl TuneReport {
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:>4} {:>4} {:>5} {:>4} {:>5} {:>10} {:>10} {:>10}",
            "#", "F1", "F2", "F3", "F4", "mean", "median", "time [s]"
        );
        for (k, t) in self.treatments.iter().enumerate() {
            let _ = writeln!(
                s,
                "{:>4} {:>4} {:>5} {:>4} {:>5} {:>10} {:>10} {:>10}",
                k + 1,
                t.crossover,
                t.crossover_rate,
                t.mutation,
                t.mutation_rate,
                fmt2(t.mean_cost),
                fmt2(t.median_cost),
                fmt2(t.mean_runtime_s)
            );
        }
        for f in &self.factors {
            let _ = writeln!(s, "{} ({}): H = {:.4}, df = {}, p = {:.4}", f.factor, f.response, f.h, f.df, f.p_value);
        }
        s
    }

    pub fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for t in &self.treatments {
            w.serialize(t)?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?).expect("csv output is UTF-8"))
    }

    pub fn factors_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for f in &self.factors {
            w.serialize(f)?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?).expect("csv output is UTF-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_decimal_display() {
        assert_eq!(fmt2(30.145), "30.14");
        assert_eq!(fmt2(30.155), "30.16");
        assert_eq!(fmt2(-4.0531), "-4.05");
        assert_eq!(fmt2(-0.001), "0.00");
        assert_eq!(fmt2(2.0), "2.00");
    }

    #[test]
    fn compare_and_gap_display() {
        assert_eq!(compare(194.60, 202.82).unwrap().1, "-4.05%");
        assert_eq!(compare(5.0, 5.0).unwrap().1, "0.00%");
        assert_eq!(gap(202.82, 141.66).unwrap().1, "30.15%");
        assert!(compare(1.0, 0.0).is_err());
    }

    #[test]
    fn p_values() {
        // 95% quantile of chi-square(1) is 3.841
        assert!((kruskal_p_value(3.841_458_820_694_124, 1) - 0.05).abs() < 1e-9);
        let (h, df, p) = kruskal_test(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        assert!((h - 3.857_142_857).abs() < 1e-6);
        assert_eq!(df, 1);
        assert!(p > 0.04 && p < 0.06);
    }

    #[test]
    fn bench_aggregates() {
        let runs = vec![
            RunRecord { seed: 0, overall_cost: 3.0, fitness: 3.0, feasible: true, runtime_s: 1.0 },
            RunRecord { seed: 1, overall_cost: 1.0, fitness: 101.0, feasible: false, runtime_s: 3.0 },
        ];
        let r = BenchReport::from_runs(runs).unwrap();
        assert_eq!((r.min, r.median, r.mean, r.feasible_count), (1.0, 2.0, 2.0, 1));
        assert!(r.csv().unwrap().starts_with("seed,overall_cost,fitness,feasible,runtime_s\n"));
        assert_eq!(TuneGrid::default().treatments().len(), 108);
    }
}
