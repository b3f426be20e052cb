#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wastecol_core::decode::Chromosome;
use wastecol_core::model::{BinCatalog, FleetParams, Horizon, Instance, Problem};

/// Points scattered on a 20x20 square; travel is the Euclidean distance, so
/// the triangle inequality holds.
pub fn scattered(n: usize, seed: u64, q: f64, n_vehicles: usize, shift: f64) -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..=n).map(|_| (rng.gen_range(0.0..20.0), rng.gen_range(0.0..20.0))).collect();
    let travel = pts
        .iter()
        .map(|a| pts.iter().map(|b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()).collect())
        .collect();
    let waste = (0..n).map(|_| rng.gen_range(0.3..1.6)).collect();
    Problem::new(
        Instance::new(format!("scattered-{n}-{seed}"), travel, waste).unwrap(),
        Horizon::week(),
        BinCatalog::standard(),
        FleetParams::new(q, n_vehicles, 8.0, shift, 0.5764).unwrap(),
    )
    .unwrap()
}

pub const APPENDIX_WASTE: [f64; 12] = [1.27, 1.62, 1.17, 1.49, 1.59, 1.21, 1.32, 1.23, 1.58, 1.17, 1.00, 1.33];
pub const APPENDIX_BINS: [usize; 12] = [7, 7, 2, 6, 6, 5, 7, 7, 4, 2, 5, 4];

pub const APPENDIX_POSITIONS: [[usize; 12]; 6] = [
    [8, 6, 5, 9, 10, 2, 1, 11, 7, 4, 0, 3],
    [0, 4, 3, 2, 5, 8, 9, 6, 10, 11, 1, 7],
    [4, 0, 2, 5, 6, 7, 8, 9, 3, 1, 10, 11],
    [5, 6, 7, 8, 9, 3, 2, 10, 11, 1, 0, 4],
    [7, 3, 2, 1, 5, 8, 9, 6, 4, 10, 11, 0],
    [4, 3, 2, 8, 9, 6, 11, 0, 10, 1, 7, 5],
];

pub const APPENDIX_MASK: [[u8; 12]; 6] = [
    [0, 1, 1, 0, 0, 1, 1, 0, 1, 1, 0, 1],
    [0, 1, 1, 1, 1, 0, 0, 1, 0, 0, 1, 1],
    [1, 0, 1, 0, 0, 0, 0, 0, 1, 1, 0, 0],
    [0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 0, 1],
    [0, 1, 1, 1, 1, 0, 0, 1, 1, 0, 0, 0],
    [1, 1, 1, 1, 1, 1, 0, 0, 1, 1, 1, 1],
];

/// Routes per working day of the published feasible solution.
pub fn appendix_routes() -> Vec<Vec<Vec<usize>>> {
    vec![
        vec![vec![7, 6, 12], vec![10, 3, 2, 9]],
        vec![vec![11, 4, 3, 2], vec![5, 8, 12]],
        vec![vec![10, 3, 9, 1]],
        vec![vec![10, 7, 6, 12]],
        vec![vec![4, 3, 2], vec![9, 5, 8]],
        vec![vec![10, 3, 2, 1, 12], vec![6, 11, 4, 5, 9]],
        vec![],
    ]
}

pub fn appendix_chromosome() -> Chromosome {
    let mut positions: Vec<Vec<usize>> = APPENDIX_POSITIONS.iter().map(|r| r.to_vec()).collect();
    positions.push((0..12).collect());
    let mask = (0..12)
        .map(|p| (0..7).map(|d| d < 6 && APPENDIX_MASK[d][p] == 1).collect())
        .collect();
    Chromosome::from_positions(&positions, mask).unwrap()
}

/// Published wastes and fleet on a stand-in travel matrix (the published
/// travel times are not part of the repository).
pub fn appendix_surrogate() -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let pts: Vec<(f64, f64)> = (0..=12).map(|_| (rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0))).collect();
    let travel = pts
        .iter()
        .map(|a| pts.iter().map(|b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()).collect())
        .collect();
    Problem::new(
        Instance::new("i.12.1-surrogate", travel, APPENDIX_WASTE.to_vec()).unwrap(),
        Horizon::week(),
        BinCatalog::standard(),
        FleetParams::new(12.0, 2, 8.0, 60.0, 0.5764).unwrap(),
    )
    .unwrap()
}
