//! Dense row-stochastic matrices, their zero patterns, and the scalar
//! functionals used by the convergence analysis: the coefficient of
//! ergodicity, the positive minimum, and block row-sum norms.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entries at or below this value count as zero for pattern purposes.
pub const EPS_POS: f64 = 1e-12;
/// Allowed deviation of a row sum from 1 on validation.
pub const EPS_ROW: f64 = 1e-9;
/// Rows closer than this (max-abs) are considered equal for the consensus predicate.
pub const EPS_CONS: f64 = 1e-9;

/// Numeric thresholds. The defaults are [`EPS_POS`], [`EPS_ROW`], [`EPS_CONS`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub positive: f64,
    pub row_sum: f64,
    pub consensus: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            positive: EPS_POS,
            row_sum: EPS_ROW,
            consensus: EPS_CONS,
        }
    }
}

/// A dense `n x n` row-stochastic matrix stored row-major.
///
/// Construction validates nonnegativity and unit row sums. Values are
/// immutable afterwards; every operation returns a new matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct StochasticMatrix {
    n: usize,
    data: Vec<f64>,
}

impl StochasticMatrix {
    /// Builds a matrix from row-major data, validating with default tolerances.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(n, data, EPS_ROW)
    }

    pub fn with_tolerance(n: usize, data: Vec<f64>, row_tol: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        for (idx, &v) in data.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidEntry {
                    row: idx / n,
                    col: idx % n,
                    value: v,
                });
            }
        }
        for (row, chunk) in data.chunks(n).enumerate() {
            let sum: f64 = chunk.iter().sum();
            if (sum - 1.0).abs() > row_tol {
                return Err(Error::RowSum { row, sum });
            }
        }
        Ok(StochasticMatrix { n, data })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut data = Vec::with_capacity(n * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(Error::RaggedRow {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
            data.extend(r);
        }
        Self::new(n, data)
    }

    /// Rescales every row to sum to 1 and then validates. Rows must have a
    /// positive sum.
    pub fn normalized(n: usize, mut data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        for (row, chunk) in data.chunks_mut(n).enumerate() {
            let sum: f64 = chunk.iter().sum();
            if !sum.is_finite() || sum <= 0.0 {
                return Err(Error::RowSum { row, sum });
            }
            chunk.iter_mut().for_each(|v| *v /= sum);
        }
        Self::new(n, data)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        StochasticMatrix { n, data }
    }

    /// The matrix whose rows all equal `row`.
    pub fn consensus(row: &[f64]) -> Result<Self> {
        let n = row.len();
        let data = row.iter().copied().cycle().take(n * n).collect();
        Self::new(n, data)
    }

    /// The `n x n` matrix with every entry `1/n`.
    pub fn uniform(n: usize) -> Self {
        StochasticMatrix {
            n,
            data: vec![1.0 / n as f64; n * n],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    pub fn transpose_data(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.data[i * n + j];
            }
        }
        out
    }

    pub fn has_positive_diagonal(&self) -> bool {
        self.has_positive_diagonal_with(EPS_POS)
    }

    pub fn has_positive_diagonal_with(&self, eps_pos: f64) -> bool {
        (0..self.n).all(|i| self.get(i, i) > eps_pos)
    }

    /// Returns an error naming the first diagonal entry that is not positive.
    pub fn require_positive_diagonal(&self) -> Result<()> {
        match (0..self.n).find(|&i| self.get(i, i) <= EPS_POS) {
            Some(index) => Err(Error::ZeroDiagonal { index }),
            None => Ok(()),
        }
    }

    /// Matrix product `self * other`, each output row rescaled to sum to 1.
    pub fn multiply(&self, other: &StochasticMatrix) -> Result<StochasticMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            let out_row = &mut out[i * n..(i + 1) * n];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
            let sum: f64 = out_row.iter().sum();
            out_row.iter_mut().for_each(|v| *v /= sum);
        }
        Ok(StochasticMatrix { n, data: out })
    }

    /// Column vector action `self * x`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok(self
            .rows()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Row vector action `p * self`.
    pub fn apply_left(&self, p: &[f64]) -> Result<Vec<f64>> {
        if p.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.len(),
            });
        }
        let mut out = vec![0.0; self.n];
        for (row, &w) in self.rows().zip(p) {
            for (o, &a) in out.iter_mut().zip(row) {
                *o += w * a;
            }
        }
        Ok(out)
    }

    /// Coefficient of ergodicity: one minus the smallest overlap
    /// `sum_k min(a_ik, a_jk)` over all row pairs.
    ///
    /// Evaluated through the equivalent half-L1 form
    /// `max_{i<j} 1/2 sum_k |a_ik - a_jk|`, which is exactly zero for
    /// bitwise-equal rows.
    pub fn ergodicity_coefficient(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            let ri = self.row(i);
            for j in (i + 1)..self.n {
                let d: f64 = ri.iter().zip(self.row(j)).map(|(a, b)| (a - b).abs()).sum();
                worst = worst.max(0.5 * d);
            }
        }
        worst.clamp(0.0, 1.0)
    }

    /// Smallest entry strictly above [`EPS_POS`].
    pub fn min_plus(&self) -> f64 {
        self.min_plus_with(EPS_POS)
    }

    pub fn min_plus_with(&self, eps_pos: f64) -> f64 {
        self.data
            .iter()
            .copied()
            .filter(|&v| v > eps_pos)
            .fold(f64::INFINITY, f64::min)
    }

    /// Row-sum norm of the sub-block selecting `rows` and `cols`.
    pub fn block_row_sum_norm(&self, rows: &[usize], cols: &[usize]) -> Result<f64> {
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        self.check_indices(rows)?;
        self.check_indices(cols)?;
        Ok(rows
            .iter()
            .map(|&i| cols.iter().map(|&j| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max))
    }

    /// Per-column `(min, max)` pairs.
    pub fn column_extrema(&self) -> Vec<(f64, f64)> {
        (0..self.n)
            .map(|j| {
                self.rows()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                        (lo.min(r[j]), hi.max(r[j]))
                    })
            })
            .collect()
    }

    /// Largest max-abs distance between any two rows.
    pub fn max_row_distance(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let d = self
                    .row(i)
                    .iter()
                    .zip(self.row(j))
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Rank-one predicate: all rows pairwise equal within [`EPS_CONS`].
    pub fn is_consensus(&self) -> bool {
        self.is_consensus_with(EPS_CONS)
    }

    pub fn is_consensus_with(&self, eps_cons: f64) -> bool {
        let first = self.row(0);
        self.rows()
            .skip(1)
            .all(|r| r.iter().zip(first).all(|(a, b)| (a - b).abs() <= eps_cons))
    }

    /// The principal sub-block on `idx` (rows and columns), each row
    /// rescaled to sum to 1. Fails if a selected row has no mass inside
    /// the block.
    pub fn principal_block(&self, idx: &[usize]) -> Result<StochasticMatrix> {
        if idx.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        self.check_indices(idx)?;
        let data = idx
            .iter()
            .flat_map(|&i| idx.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        StochasticMatrix::normalized(idx.len(), data)
    }

    /// Simultaneous row and column permutation: entry `(r, c)` of the
    /// result is `self[perm[r], perm[c]]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<StochasticMatrix> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: perm.len(),
            });
        }
        self.check_indices(perm)?;
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for &pi in perm {
            for &pj in perm {
                data.push(self.get(pi, pj));
            }
        }
        Ok(StochasticMatrix { n, data })
    }

    fn check_indices(&self, idx: &[usize]) -> Result<()> {
        match idx.iter().find(|&&i| i >= self.n) {
            Some(&index) => Err(Error::IndexOutOfRange { index, n: self.n }),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for StochasticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl TryFrom<Vec<Vec<f64>>> for StochasticMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        StochasticMatrix::from_rows(rows)
    }
}

impl From<StochasticMatrix> for Vec<Vec<f64>> {
    fn from(m: StochasticMatrix) -> Self {
        m.to_rows()
    }
}

/// Boolean positivity pattern of an `n x n` matrix: its "type".
///
/// Two matrices are of the same type when their patterns are equal.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u8>>", into = "Vec<Vec<u8>>")]
pub struct ZeroPattern {
    n: usize,
    bits: Vec<bool>,
}

impl ZeroPattern {
    /// Pattern of `a` using the default threshold [`EPS_POS`].
    pub fn of(a: &StochasticMatrix) -> Self {
        Self::of_with(a, EPS_POS)
    }

    pub fn of_with(a: &StochasticMatrix, eps_pos: f64) -> Self {
        ZeroPattern {
            n: a.dim(),
            bits: a.as_slice().iter().map(|&v| v > eps_pos).collect(),
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let bits = (0..n * n).map(|k| f(k / n, k % n)).collect();
        ZeroPattern { n, bits }
    }

    pub fn from_bits(n: usize, bits: Vec<bool>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if bits.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: bits.len(),
            });
        }
        Ok(ZeroPattern { n, bits })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| i == j)
    }

    pub fn full(n: usize) -> Self {
        ZeroPattern {
            n,
            bits: vec![true; n * n],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.bits[i * self.n + j] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_full(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }

    pub fn has_positive_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i))
    }

    /// Boolean-semiring product: `(i, j)` is set iff some `k` has both
    /// `self(i, k)` and `other(k, j)`.
    pub fn product(&self, other: &ZeroPattern) -> Result<ZeroPattern> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let n = self.n;
        let mut bits = vec![false; n * n];
        for i in 0..n {
            for k in 0..n {
                if !self.get(i, k) {
                    continue;
                }
                for j in 0..n {
                    bits[i * n + j] |= other.get(k, j);
                }
            }
        }
        Ok(ZeroPattern { n, bits })
    }

    pub fn transpose(&self) -> ZeroPattern {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Elementwise `self >= other`.
    pub fn contains(&self, other: &ZeroPattern) -> bool {
        self.n == other.n && self.bits.iter().zip(&other.bits).all(|(&a, &b)| a || !b)
    }

    pub fn union(&self, other: &ZeroPattern) -> Result<ZeroPattern> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(ZeroPattern {
            n: self.n,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a || b)
                .collect(),
        })
    }

    /// Indices `j` with `(i, j)` set.
    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.get(i, j))
    }

    pub fn to_grid(&self) -> Vec<Vec<u8>> {
        self.bits
            .chunks(self.n)
            .map(|r| r.iter().map(|&b| b as u8).collect())
            .collect()
    }
}

impl fmt::Debug for ZeroPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.bits.chunks(self.n) {
            let s: String = row.iter().map(|&b| if b { '+' } else { '0' }).collect();
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

impl TryFrom<Vec<Vec<u8>>> for ZeroPattern {
    type Error = Error;

    fn try_from(grid: Vec<Vec<u8>>) -> Result<Self> {
        let n = grid.len();
        let mut bits = Vec::with_capacity(n * n);
        for (row, r) in grid.into_iter().enumerate() {
            if r.len() != n {
                return Err(Error::RaggedRow {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
            bits.extend(r.into_iter().map(|b| b != 0));
        }
        ZeroPattern::from_bits(n, bits)
    }
}

impl From<ZeroPattern> for Vec<Vec<u8>> {
    fn from(p: ZeroPattern) -> Self {
        p.to_grid()
    }
}
