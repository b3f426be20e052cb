mod common;

use proptest::prelude::*;
use wastecol::config::{bundled_overrides, instance_overrides, load_config};
use wastecol::report::{bench, fmt2, kruskal_test, tune, BenchReport, RunRecord, TuneGrid};
use wastecol_core::ga::{run, CrossoverOp, GaConfig, MutationOp};
use wastecol_core::model::Horizon;

fn record(seed: u64, cost: f64) -> RunRecord {
    RunRecord { seed, overall_cost: cost, fitness: cost, feasible: cost < 150.0, runtime_s: 0.5 + seed as f64 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn bench_aggregates_match_the_run_list(costs in proptest::collection::vec(50.0f64..300.0, 1..40)) {
        let runs: Vec<RunRecord> = costs.iter().enumerate().map(|(k, &c)| record(k as u64, c)).collect();
        let r = BenchReport::from_runs(runs).unwrap();
        let mut sorted = costs.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let median = if n % 2 == 1 { sorted[n / 2] } else { (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0 };
        let mean = costs.iter().sum::<f64>() / n as f64;
        prop_assert_eq!(r.min, sorted[0]);
        prop_assert!((r.median - median).abs() < 1e-9);
        prop_assert!((r.mean - mean).abs() < 1e-9);
        prop_assert!(r.min <= r.median && r.median <= sorted[n - 1]);
        prop_assert_eq!(r.feasible_count, costs.iter().filter(|&&c| c < 150.0).count());
        if n > 1 {
            let var = costs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            prop_assert!((r.std_dev - var.sqrt()).abs() < 1e-9);
        }
        let csv = r.csv().unwrap();
        prop_assert_eq!(csv.lines().count(), n + 1);
    }

    #[test]
    fn kruskal_wallis_ignores_monotone_transforms(
        groups in proptest::collection::vec(proptest::collection::vec(0u32..30, 1..8), 2..5),
        shift in -50.0f64..50.0,
    ) {
        let raw: Vec<Vec<f64>> = groups.iter().map(|g| g.iter().map(|&v| v as f64).collect()).collect();
        let moved: Vec<Vec<f64>> = raw.iter().map(|g| g.iter().map(|v| (v * 0.7).exp() + shift).collect()).collect();
        let (h1, df1, p1) = kruskal_test(&raw).unwrap();
        let (h2, df2, p2) = kruskal_test(&moved).unwrap();
        prop_assert!((h1 - h2).abs() < 1e-9, "{h1} vs {h2}");
        prop_assert_eq!(df1, df2);
        prop_assert!((p1 - p2).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&p1));
    }
}

#[test]
fn kruskal_wallis_reference_values() {
    let (h, df, p) = kruskal_test(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
    assert_eq!(fmt2(h), "3.86");
    assert!((h - 27.0 / 7.0).abs() < 1e-12);
    assert_eq!(df, 1);
    assert!((p - 0.049535).abs() < 1e-5, "{p}");
    let (h, _, p) = kruskal_test(&[vec![2.0; 4], vec![2.0; 3], vec![2.0]]).unwrap();
    assert_eq!(h, 0.0);
    assert_eq!(p, 1.0);
}

#[test]
fn single_run_bench_collapses_the_aggregates() {
    let r = BenchReport::from_runs(vec![record(4, 123.25)]).unwrap();
    assert_eq!((r.min, r.median, r.mean), (123.25, 123.25, 123.25));
    assert_eq!(r.std_dev, 0.0);
}

#[test]
fn bench_reports_runs_in_seed_order() {
    let p = common::synthetic(6, 4, Horizon::week(), 12.0, 2, 120.0);
    let cfg = GaConfig { population_size: 20, generations: 15, seed: 40, ..GaConfig::default() };
    let r = bench(&p, &cfg, 6).unwrap();
    assert_eq!(r.runs.iter().map(|x| x.seed).collect::<Vec<_>>(), (40..46).collect::<Vec<_>>());
    for x in &r.runs {
        let alone = run(&p, &GaConfig { seed: x.seed, ..cfg.clone() }).unwrap();
        assert_eq!(alone.best.fitness.overall_cost, x.overall_cost);
    }
    assert!(r.table().contains("feasible"));
}

#[test]
fn parallel_evaluation_matches_serial() {
    for seed in 0..5 {
        let p = common::synthetic(8, seed, Horizon::week(), 12.0, 2, 90.0);
        let cfg = GaConfig { population_size: 24, generations: 25, seed, ..GaConfig::default() };
        let serial = run(&p, &cfg).unwrap();
        let parallel = run(&p, &GaConfig { parallel: true, ..cfg }).unwrap();
        assert_eq!(serial.history, parallel.history);
        assert_eq!(serial.best.chromosome, parallel.best.chromosome);
        assert_eq!(serial.schedule, parallel.schedule);
    }
}

#[test]
fn full_grid_reports_every_treatment_and_factor() {
    let grid = TuneGrid::default();
    assert_eq!(grid.treatments().len(), 4 * 3 * 3 * 3);
    let p = common::synthetic(6, 2, Horizon::week(), 12.0, 2, 120.0);
    let base = GaConfig { population_size: 10, generations: 5, ..GaConfig::default() };
    let report = tune(&p, &base, &grid, 5).unwrap();
    assert_eq!(report.treatments.len(), 108);
    assert!(report.treatments.iter().all(|t| t.runs.len() == 5));
    assert_eq!(report.factors.len(), 8);
    let dfs: Vec<usize> = report.factors.iter().map(|f| f.df).collect();
    assert_eq!(dfs, vec![3, 3, 2, 2, 2, 2, 2, 2]);
    assert_eq!(report.csv().unwrap().lines().count(), 109);
    assert_eq!(report.factors_csv().unwrap().lines().count(), 9);
}

#[test]
fn shipped_configs_parse() {
    let tuned = load_config(&std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/tuned.toml")).unwrap();
    assert_eq!(tuned.crossover, CrossoverOp::Cx);
    assert_eq!(tuned.mutation, MutationOp::Em);
    assert_eq!((tuned.population_size, tuned.elite_count), (100, 2));
    assert_eq!((tuned.crossover_rate, tuned.mutation_rate), (0.8, 0.05));

    let all = bundled_overrides();
    assert_eq!(all.len(), 4);
    let lambdas: Vec<f64> = ["i.40.1", "i.80.1", "i.120.1", "i.163.1"]
        .iter()
        .map(|n| instance_overrides(n).unwrap().lambda.unwrap())
        .collect();
    assert_eq!(lambdas, vec![500.0, 1000.0, 5000.0, 10000.0]);
    assert!(instance_overrides("i.12.1").is_none());
}
