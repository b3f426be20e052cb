//! Permutation and binary-mask variation operators.
//!
//! Permutation rows hold point ids `1..=n` (any set of distinct ids below
//! `row.len() + 1` works). Positions are 0-based.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::model::Horizon;

/// Permutation crossover operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "UPPERCASE"))]
pub enum CrossoverOp {
    /// Partially mapped crossover.
    Pmx,
    /// Order crossover.
    Ox,
    /// Cycle crossover.
    Cx,
    /// Modified cycle crossover.
    Cx2,
}

/// Permutation mutation operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "UPPERCASE"))]
pub enum MutationOp {
    /// Exchange (swap) mutation.
    Em,
    /// Insertion mutation.
    Im,
    /// Inversion mutation.
    Inm,
}

impl CrossoverOp {
    pub const ALL: [CrossoverOp; 4] = [CrossoverOp::Pmx, CrossoverOp::Ox, CrossoverOp::Cx, CrossoverOp::Cx2];

    pub fn name(self) -> &'static str {
        match self {
            CrossoverOp::Pmx => "PMX",
            CrossoverOp::Ox => "OX",
            CrossoverOp::Cx => "CX",
            CrossoverOp::Cx2 => "CX2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.name().eq_ignore_ascii_case(s))
    }
}

impl MutationOp {
    pub const ALL: [MutationOp; 3] = [MutationOp::Em, MutationOp::Im, MutationOp::Inm];

    pub fn name(self) -> &'static str {
        match self {
            MutationOp::Em => "EM",
            MutationOp::Im => "IM",
            MutationOp::Inm => "INM",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.name().eq_ignore_ascii_case(s))
    }
}

fn max_value(row: &[usize]) -> usize {
    row.iter().copied().max().unwrap_or(0)
}

/// Position of every value, indexed by value.
fn position_table(row: &[usize]) -> Vec<usize> {
    let mut pos = vec![usize::MAX; max_value(row) + 1];
    for (i, &v) in row.iter().enumerate() {
        pos[v] = i;
    }
    pos
}

/// Two distinct cut points `lo < hi` in `0..=n`, delimiting the segment `lo..hi`.
fn cut_points<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    let a = rng.gen_range(0..=n);
    let mut b = rng.gen_range(0..n);
    if b >= a {
        b += 1;
    }
    (a.min(b), a.max(b))
}

/// Partially mapped crossover with the segment `lo..hi`: each child keeps its
/// own parent's segment and takes the remaining genes from the other parent,
/// following the segment mapping to resolve duplicates.
pub fn pmx(a: &[usize], b: &[usize], lo: usize, hi: usize) -> (Vec<usize>, Vec<usize>) {
    (pmx_child(a, b, lo, hi), pmx_child(b, a, lo, hi))
}

fn pmx_child(keep: &[usize], other: &[usize], lo: usize, hi: usize) -> Vec<usize> {
    let pos_keep = position_table(keep);
    let mut in_segment = vec![false; pos_keep.len().max(max_value(other) + 1)];
    for &v in &keep[lo..hi] {
        in_segment[v] = true;
    }
    let mut child = other.to_vec();
    child[lo..hi].copy_from_slice(&keep[lo..hi]);
    for i in (0..lo).chain(hi..other.len()) {
        let mut v = other[i];
        while in_segment[v] {
            v = other[pos_keep[v]];
        }
        child[i] = v;
    }
    child
}

/// Order crossover with the segment `lo..hi`: each child keeps its parent's
/// segment; the other positions, starting after the segment and wrapping,
/// are filled with the other parent's genes in the order they appear from
/// the same point on.
pub fn ox(a: &[usize], b: &[usize], lo: usize, hi: usize) -> (Vec<usize>, Vec<usize>) {
    (ox_child(a, b, lo, hi), ox_child(b, a, lo, hi))
}

fn ox_child(keep: &[usize], other: &[usize], lo: usize, hi: usize) -> Vec<usize> {
    let n = keep.len();
    let mut used = vec![false; max_value(keep).max(max_value(other)) + 1];
    let mut child = keep.to_vec();
    for &v in &keep[lo..hi] {
        used[v] = true;
    }
    let mut fill = (0..n - (hi - lo)).map(|k| (hi + k) % n);
    for k in 0..n {
        let v = other[(hi + k) % n];
        if !used[v] {
            used[v] = true;
            child[fill.next().expect("slot count matches missing genes")] = v;
        }
    }
    child
}

/// Cycle crossover: positions are partitioned into cycles; the first cycle
/// is copied from the own parent, the second from the other one, and so on.
pub fn cx(a: &[usize], b: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let n = a.len();
    let pos_a = position_table(a);
    let mut child_a = vec![0; n];
    let mut child_b = vec![0; n];
    let mut assigned = vec![false; n];
    let mut swap = false;
    for start in 0..n {
        if assigned[start] {
            continue;
        }
        let mut i = start;
        loop {
            assigned[i] = true;
            if swap {
                child_a[i] = b[i];
                child_b[i] = a[i];
            } else {
                child_a[i] = a[i];
                child_b[i] = b[i];
            }
            i = pos_a[b[i]];
            if i == start {
                break;
            }
        }
        swap = !swap;
    }
    (child_a, child_b)
}

/// Modified cycle crossover.
///
/// With `f(x) = b[position of x in a]`, the first child is filled
/// left-to-right with `f(s), f^4(s), f^7(s), ...` and the second with
/// `f^3(s), f^6(s), ...`, where `s` is the first gene of `a` not used yet;
/// each block ends when the second child receives `s`. When the cycle of `s`
/// under `f` has a length divisible by three those two sequences would not
/// cover the same genes, so the block falls back to the cycle itself
/// (`f(s), f^2(s), ...`) for the first child and the same cycle shifted by
/// two steps for the second.
pub fn cx2(a: &[usize], b: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let n = a.len();
    let pos_a = position_table(a);
    let f = |x: usize| b[pos_a[x]];
    let mut child_a = Vec::with_capacity(n);
    let mut child_b = Vec::with_capacity(n);
    let mut used = vec![false; pos_a.len()];
    for &s in a {
        if used[s] {
            continue;
        }
        let mut cycle = vec![f(s)];
        while *cycle.last().expect("non-empty") != s {
            let next = f(*cycle.last().expect("non-empty"));
            cycle.push(next);
        }
        let len = cycle.len();
        // cycle[k] = f^(k+1)(s)
        if len % 3 != 0 {
            for k in 0..len {
                child_a.push(cycle[(3 * k) % len]);
                child_b.push(cycle[(3 * k + 2) % len]);
            }
        } else {
            for k in 0..len {
                child_a.push(cycle[k]);
                child_b.push(cycle[(k + 2) % len]);
            }
        }
        for &v in &cycle {
            used[v] = true;
        }
    }
    (child_a, child_b)
}

/// Applies a permutation crossover with random cut points where needed.
pub fn crossover_perm<R: Rng + ?Sized>(
    a: &[usize],
    b: &[usize],
    op: CrossoverOp,
    rng: &mut R,
) -> (Vec<usize>, Vec<usize>) {
    let n = a.len();
    if n < 2 {
        return (a.to_vec(), b.to_vec());
    }
    match op {
        CrossoverOp::Pmx => {
            let (lo, hi) = cut_points(n, rng);
            pmx(a, b, lo, hi)
        }
        CrossoverOp::Ox => {
            let (lo, hi) = cut_points(n, rng);
            ox(a, b, lo, hi)
        }
        CrossoverOp::Cx => cx(a, b),
        CrossoverOp::Cx2 => cx2(a, b),
    }
}

/// Swaps the genes at `i` and `j`.
pub fn exchange(row: &mut [usize], i: usize, j: usize) {
    row.swap(i, j);
}

/// Removes the gene at `from` and reinserts it so that it ends up at `to`.
pub fn insertion(row: &mut [usize], from: usize, to: usize) {
    if from < to {
        row[from..=to].rotate_left(1);
    } else if to < from {
        row[to..=from].rotate_right(1);
    }
}

/// Reverses the inclusive segment `i..=j` (in either order).
pub fn inversion(row: &mut [usize], i: usize, j: usize) {
    let (lo, hi) = (i.min(j), i.max(j));
    row[lo..=hi].reverse();
}

/// Applies a permutation mutation at uniformly drawn positions.
pub fn mutate_perm<R: Rng + ?Sized>(row: &mut [usize], op: MutationOp, rng: &mut R) {
    let n = row.len();
    if n < 2 {
        return;
    }
    let i = rng.gen_range(0..n);
    let j = rng.gen_range(0..n);
    match op {
        MutationOp::Em => exchange(row, i, j),
        MutationOp::Im => insertion(row, i, j),
        MutationOp::Inm => inversion(row, i, j),
    }
}

/// Working-day bits of a mask, point-major.
fn working_bits(horizon: &Horizon, n_points: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..n_points).flat_map(move |k| horizon.working_days().map(move |d| (k, d)))
}

/// Two-point crossover on the flattened working-day bits of two masks; the
/// bits between the cut points are exchanged. Rest-day bits are never touched.
pub fn crossover_mask<R: Rng + ?Sized>(
    a: &mut [Vec<bool>],
    b: &mut [Vec<bool>],
    horizon: &Horizon,
    rng: &mut R,
) {
    let len = a.len() * horizon.n_working();
    if len < 2 {
        return;
    }
    let (lo, hi) = cut_points(len, rng);
    crossover_mask_at(a, b, horizon, lo, hi);
}

/// Deterministic core of [`crossover_mask`]: swaps flattened bits `lo..hi`.
pub fn crossover_mask_at(a: &mut [Vec<bool>], b: &mut [Vec<bool>], horizon: &Horizon, lo: usize, hi: usize) {
    let n = a.len();
    for (idx, (k, d)) in working_bits(horizon, n).enumerate() {
        if idx >= hi {
            break;
        }
        if idx >= lo {
            core::mem::swap(&mut a[k][d], &mut b[k][d]);
        }
    }
}

/// Flips each working-day bit independently with probability `rate`;
/// returns the number of flipped bits.
pub fn mutate_mask<R: Rng + ?Sized>(mask: &mut [Vec<bool>], rate: f64, horizon: &Horizon, rng: &mut R) -> usize {
    if rate <= 0.0 {
        return 0;
    }
    let n = mask.len();
    let mut flips = 0;
    for (k, d) in working_bits(horizon, n) {
        if rng.gen_bool(rate.min(1.0)) {
            mask[k][d] = !mask[k][d];
            flips += 1;
        }
    }
    flips
}
