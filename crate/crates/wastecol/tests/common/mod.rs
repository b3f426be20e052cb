#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wastecol_core::decode::Chromosome;
use wastecol_core::model::{BinCatalog, FleetParams, Horizon, Instance, Problem};

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

/// Published accumulation `w[point-1][day]`, Monday to Saturday.
pub const APPENDIX_W: [[f64; 6]; 12] = [
    [2.54, 3.81, 5.08, 1.27, 2.54, 3.81],
    [3.24, 1.62, 1.62, 3.24, 4.86, 1.62],
    [2.34, 1.17, 1.17, 1.17, 2.34, 1.17],
    [2.98, 4.47, 1.49, 2.98, 4.47, 1.49],
    [3.18, 4.77, 1.59, 3.18, 4.77, 1.59],
    [2.42, 1.21, 2.42, 3.63, 1.21, 2.42],
    [5.28, 1.32, 2.64, 3.96, 1.32, 2.64],
    [3.69, 4.92, 1.23, 2.46, 3.69, 1.23],
    [3.16, 1.58, 3.16, 1.58, 3.16, 1.58],
    [2.34, 1.17, 2.34, 1.17, 1.17, 2.34],
    [2.00, 3.00, 1.00, 2.00, 3.00, 4.00],
    [2.66, 1.33, 1.33, 2.66, 1.33, 2.66],
];

/// Published routes: (day, route points, loads on each arc, minutes).
pub fn appendix_table() -> Vec<(usize, Vec<usize>, Vec<f64>, f64)> {
    vec![
        (0, vec![7, 6, 12], vec![0.00, 5.28, 7.70, 10.36], 25.04),
        (0, vec![10, 3, 2, 9], vec![0.00, 2.34, 4.68, 7.92, 11.08], 23.05),
        (1, vec![11, 4, 3, 2], vec![0.00, 3.00, 7.47, 8.64, 10.26], 26.00),
        (1, vec![5, 8, 12], vec![0.00, 4.77, 9.69, 11.02], 22.29),
        (2, vec![10, 3, 9, 1], vec![0.00, 2.34, 3.51, 6.67, 11.75], 25.80),
        (3, vec![10, 7, 6, 12], vec![0.00, 1.17, 5.13, 8.76, 11.42], 26.00),
        (4, vec![4, 3, 2], vec![0.00, 4.47, 6.81, 11.67], 23.41),
        (4, vec![9, 5, 8], vec![0.00, 3.16, 7.93, 11.62], 22.67),
        (5, vec![10, 3, 2, 1, 12], vec![0.00, 2.34, 3.51, 5.13, 8.94, 11.60], 24.26),
        (5, vec![6, 11, 4, 5, 9], vec![0.00, 2.42, 6.42, 7.91, 9.50, 11.08], 29.99),
    ]
}

pub fn appendix_chromosome() -> Chromosome {
    let mut positions: Vec<Vec<usize>> = APPENDIX_POSITIONS.iter().map(|r| r.to_vec()).collect();
    positions.push((0..12).collect());
    let mask = (0..12).map(|p| (0..7).map(|d| d < 6 && APPENDIX_MASK[d][p] == 1).collect()).collect();
    Chromosome::from_positions(&positions, mask).unwrap()
}

fn euclid(pts: &[(f64, f64)]) -> Vec<Vec<f64>> {
    pts.iter()
        .map(|a| pts.iter().map(|b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()).collect())
        .collect()
}

/// Published wastes and fleet on a stand-in travel matrix.
pub fn appendix_surrogate() -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let pts: Vec<(f64, f64)> = (0..=12).map(|_| (rng.gen_range(0.0..4.0), rng.gen_range(0.0..4.0))).collect();
    let coords: Vec<(f64, f64)> = pts[1..].iter().map(|&(x, y)| (-32.9 + x / 100.0, -60.7 + y / 100.0)).collect();
    Problem::new(
        Instance::new("i.12.1-surrogate", euclid(&pts), APPENDIX_WASTE.to_vec())
            .unwrap()
            .with_coords(coords, Some((-32.9 + pts[0].0 / 100.0, -60.7 + pts[0].1 / 100.0)))
            .unwrap(),
        Horizon::week(),
        BinCatalog::standard(),
        FleetParams::new(12.0, 2, 8.0, 60.0, 0.5764).unwrap(),
    )
    .unwrap()
}

/// Random points on a square with Euclidean travel times.
pub fn synthetic(n: usize, seed: u64, horizon: Horizon, q: f64, n_vehicles: usize, shift: f64) -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..=n).map(|_| (rng.gen_range(0.0..15.0), rng.gen_range(0.0..15.0))).collect();
    let waste = (0..n).map(|_| (rng.gen_range(0.3..1.6f64) * 100.0).round() / 100.0).collect();
    Problem::new(
        Instance::new(format!("synthetic-{n}-{seed}"), euclid(&pts), waste).unwrap(),
        horizon,
        BinCatalog::standard(),
        FleetParams::new(q, n_vehicles, 8.0, shift, 0.5764).unwrap(),
    )
    .unwrap()
}

/// A fresh empty directory under the system temp dir.
pub fn scratch_dir(tag: &str) -> PathBuf {
    static NEXT: AtomicUsize = AtomicUsize::new(0);
    let dir = std::env::temp_dir().join(format!(
        "wastecol-{tag}-{}-{}",
        std::process::id(),
        NEXT.fetch_add(1, Ordering::Relaxed)
    ));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Writes `time.txt` / `waste.txt` for `problem` into `dir/name`.
pub fn write_instance(dir: &Path, name: &str, problem: &Problem) -> PathBuf {
    let d = dir.join(name);
    std::fs::create_dir_all(&d).unwrap();
    let n = problem.n_points();
    let mut time = String::new();
    for i in 0..=n {
        let row: Vec<String> = (0..=n).map(|j| format!("{}", problem.instance.travel(i, j))).collect();
        time.push_str(&row.join(" "));
        time.push('\n');
    }
    std::fs::write(d.join("time.txt"), time).unwrap();
    let mut waste = String::from("lat lon waste\n-32.95 -60.65 0\n");
    for p in 1..=n {
        waste.push_str(&format!("{} {} {}\n", -32.9 - p as f64 * 0.001, -60.6 - p as f64 * 0.002, problem.instance.daily_waste(p)));
    }
    std::fs::write(d.join("waste.txt"), waste).unwrap();
    d
}

/// Directory holding the published instance folders (`i.12.1/`, ...):
/// `$WASTECOL_INSTANCES`, else `instances/` at the workspace root.
pub fn instances_root() -> PathBuf {
    std::env::var_os("WASTECOL_INSTANCES")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).ancestors().nth(2).expect("workspace root").join("instances"))
}

pub fn published_dir(name: &str) -> Option<PathBuf> {
    let d = instances_root().join(name);
    (d.join("time.txt").is_file() && d.join("waste.txt").is_file()).then_some(d)
}
