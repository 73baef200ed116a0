//! Reference implementations shared by the integration tests. They follow
//! the textbook definitions directly and share no code with the library.

#![allow(dead_code)]

use rand::Rng;
use stochprod::{StochasticMatrix, ZeroPattern};

/// `1 - min_{i,j} sum_k min(a_ik, a_jk)`, literally.
pub fn tau_oracle(a: &StochasticMatrix) -> f64 {
    let n = a.dim();
    let mut min_overlap = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            let overlap: f64 = (0..n).map(|k| a.get(i, k).min(a.get(j, k))).sum();
            min_overlap = min_overlap.min(overlap);
        }
    }
    1.0 - min_overlap
}

pub fn min_plus_oracle(a: &StochasticMatrix) -> f64 {
    a.as_slice()
        .iter()
        .copied()
        .filter(|&v| v > 0.0)
        .fold(f64::INFINITY, f64::min)
}

pub fn matmul(a: &StochasticMatrix, b: &StochasticMatrix) -> Vec<Vec<f64>> {
    let n = a.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a.get(i, k) * b.get(k, j)).sum())
                .collect()
        })
        .collect()
}

/// Reflexive-transitive closure by Warshall's algorithm.
#[allow(clippy::needless_range_loop)]
pub fn closure(p: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = p.len();
    let mut r = p.to_vec();
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

pub fn grid(p: &ZeroPattern) -> Vec<Vec<bool>> {
    let n = p.dim();
    (0..n)
        .map(|i| (0..n).map(|j| p.get(i, j)).collect())
        .collect()
}

/// Classes as sorted index sets, each flagged essential or not, ordered by
/// smallest member.
pub fn classes_oracle(p: &ZeroPattern) -> Vec<(Vec<usize>, bool)> {
    let r = closure(&grid(p));
    let n = r.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let class: Vec<usize> = (0..n).filter(|&j| r[i][j] && r[j][i]).collect();
        for &j in &class {
            seen[j] = true;
        }
        let essential = (0..n).all(|j| !r[i][j] || r[j][i]);
        out.push((class, essential));
    }
    out
}

/// Boolean product `a * b`.
pub fn bool_product(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).any(|k| a[i][k] && b[k][j])).collect())
        .collect()
}

pub fn positive_grid(a: &StochasticMatrix) -> Vec<Vec<bool>> {
    let n = a.dim();
    (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j) > 0.0).collect())
        .collect()
}

/// Random row-stochastic matrix: each entry zero or at least `1e-6`, every
/// row with at least one positive entry.
pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, positive_diagonal: bool) -> StochasticMatrix {
    random_matrix_with_floor(rng, n, positive_diagonal, 1e-6)
}

/// As [`random_matrix`], every positive entry at least `floor`.
pub fn random_matrix_with_floor<R: Rng>(
    rng: &mut R,
    n: usize,
    positive_diagonal: bool,
    floor: f64,
) -> StochasticMatrix {
    let density = rng.gen_range(0.1..=1.0);
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row: Vec<f64> = (0..n)
            .map(|j| {
                if (positive_diagonal && i == j) || rng.gen_bool(density) {
                    // occasionally tiny, to exercise the lower end
                    if rng.gen_bool(0.1) {
                        rng.gen_range(1e-12..1e-5)
                    } else {
                        rng.gen_range(1e-3..1.0)
                    }
                } else {
                    0.0
                }
            })
            .collect();
        if row.iter().all(|&v| v == 0.0) {
            row[rng.gen_range(0..n)] = 1.0;
        }
        // floor + share of the remainder keeps every positive entry >= floor
        let k = row.iter().filter(|&&v| v > 0.0).count() as f64;
        let s: f64 = row.iter().sum();
        for v in row.iter_mut() {
            if *v > 0.0 {
                *v = floor + (1.0 - k * floor) * *v / s;
            }
        }
        rows.push(row);
    }
    StochasticMatrix::from_rows(rows).expect("rows sum to one")
}

pub fn random_positive_diagonal_pattern<R: Rng>(
    rng: &mut R,
    n: usize,
    density: f64,
) -> ZeroPattern {
    ZeroPattern::from_fn(n, |i, j| i == j || rng.gen_bool(density))
}
