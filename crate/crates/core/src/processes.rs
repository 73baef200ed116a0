//! Inhomogeneous consensus and Markov processes driven by a matrix sequence.
//!
//! The consensus process `x(t) = A(t, 0) x(0)` moves a column vector of
//! opinions by backward accumulation; the Markov process
//! `p(t) = p(0) A(0, t)` moves a row distribution by forward accumulation.

use serde::Serialize;

use crate::accumulation::{accumulate, segment, Direction, MatrixSequence};
use crate::error::{Error, Result};
use crate::matrix::{StochasticMatrix, EPS_ROW};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OpinionState {
    pub t: usize,
    pub x: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistributionState {
    pub t: usize,
    pub p: Vec<f64>,
}

impl DistributionState {
    /// Validates nonnegativity and unit mass.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if let Some((col, &value)) = p
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidEntry { row: 0, col, value });
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > EPS_ROW {
            return Err(Error::RowSum { row: 0, sum });
        }
        Ok(DistributionState { t: 0, p })
    }
}

/// `x' = a x`.
pub fn consensus_step(state: &OpinionState, a: &StochasticMatrix) -> Result<OpinionState> {
    Ok(OpinionState {
        t: state.t + 1,
        x: a.apply(&state.x)?,
    })
}

/// `p' = p a`.
pub fn markov_step(state: &DistributionState, a: &StochasticMatrix) -> Result<DistributionState> {
    Ok(DistributionState {
        t: state.t + 1,
        p: a.apply_left(&state.p)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RunOptions {
    /// Maximum number of steps.
    pub horizon: usize,
    /// Movement threshold for convergence.
    pub tol: f64,
    /// Consecutive sub-`tol` steps required to stop early.
    pub patience: usize,
    /// Single-linkage radius for clustering final opinions.
    pub eps_cluster: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            horizon: 1000,
            tol: 1e-10,
            patience: 10,
            eps_cluster: 1e-6,
        }
    }
}

impl RunOptions {
    pub fn with_horizon(horizon: usize) -> Self {
        RunOptions {
            horizon,
            ..Self::default()
        }
    }
}

/// Groups of agents whose final opinions agree within `eps_cluster`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusterReport {
    /// Clusters ordered by value, members ascending.
    pub clusters: Vec<Vec<usize>>,
    /// Mean opinion of each cluster.
    pub values: Vec<f64>,
    pub converged: bool,
    /// Agents whose last movement was not below `tol`.
    pub unsettled: Vec<usize>,
    pub max_spread: f64,
    pub last_movement: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsensusRun {
    pub trace: Vec<OpinionState>,
    pub report: ClusterReport,
}

impl ConsensusRun {
    pub fn final_state(&self) -> &OpinionState {
        self.trace.last().expect("trace holds the initial state")
    }
}

/// Single-linkage clustering of values on the line: sorted neighbours
/// closer than `eps` share a cluster.
pub fn cluster_values(x: &[f64], eps: f64) -> (Vec<Vec<usize>>, Vec<f64>) {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&i, &j| x[i].total_cmp(&x[j]).then(i.cmp(&j)));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut prev: Option<f64> = None;
    for i in order {
        match prev {
            Some(p) if x[i] - p <= eps => clusters.last_mut().expect("open cluster").push(i),
            _ => clusters.push(vec![i]),
        }
        prev = Some(x[i]);
    }
    for c in &mut clusters {
        c.sort_unstable();
    }
    let values = clusters
        .iter()
        .map(|c| c.iter().map(|&i| x[i]).sum::<f64>() / c.len() as f64)
        .collect();
    (clusters, values)
}

/// Runs the consensus process from `x0`, stopping after `opts.horizon`
/// steps or once the largest movement has stayed below `opts.tol` for
/// `opts.patience` consecutive steps.
pub fn run_consensus(seq: &MatrixSequence, x0: &[f64], opts: &RunOptions) -> Result<ConsensusRun> {
    if x0.len() != seq.dim() {
        return Err(Error::DimensionMismatch {
            expected: seq.dim(),
            found: x0.len(),
        });
    }
    let steps = opts.horizon.min(seq.horizon());
    let mut trace = vec![OpinionState {
        t: 0,
        x: x0.to_vec(),
    }];
    let mut movement = vec![0.0; x0.len()];
    let mut quiet = 0;
    for t in 0..steps {
        let prev = trace.last().expect("nonempty");
        let next = consensus_step(prev, &*seq.matrix(t)?)?;
        for ((m, a), b) in movement.iter_mut().zip(&next.x).zip(&prev.x) {
            *m = (a - b).abs();
        }
        trace.push(next);
        if movement.iter().copied().fold(0.0, f64::max) < opts.tol {
            quiet += 1;
            if quiet >= opts.patience {
                break;
            }
        } else {
            quiet = 0;
        }
    }

    let x = &trace.last().expect("nonempty").x;
    let (clusters, values) = cluster_values(x, opts.eps_cluster);
    let max_spread = clusters
        .iter()
        .map(|c| {
            let (lo, hi) = c
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                    (lo.min(x[i]), hi.max(x[i]))
                });
            hi - lo
        })
        .fold(0.0, f64::max);
    let last_movement = movement.iter().copied().fold(0.0, f64::max);
    let unsettled = (0..x.len()).filter(|&i| movement[i] >= opts.tol).collect();
    let converged = last_movement < opts.tol && max_spread <= opts.eps_cluster;
    Ok(ConsensusRun {
        trace,
        report: ClusterReport {
            clusters,
            values,
            converged,
            unsettled,
            max_spread,
            last_movement,
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MarkovRun {
    pub trace: Vec<DistributionState>,
    pub converged: bool,
    pub last_movement: f64,
}

/// Runs the Markov process from `p0` with the same stopping rule as
/// [`run_consensus`].
pub fn run_markov(seq: &MatrixSequence, p0: &[f64], opts: &RunOptions) -> Result<MarkovRun> {
    if p0.len() != seq.dim() {
        return Err(Error::DimensionMismatch {
            expected: seq.dim(),
            found: p0.len(),
        });
    }
    let start = DistributionState::new(p0.to_vec())?;
    let steps = opts.horizon.min(seq.horizon());
    let mut trace = vec![start];
    let mut last_movement = 0.0;
    let mut quiet = 0;
    for t in 0..steps {
        let prev = trace.last().expect("nonempty");
        let next = markov_step(prev, &*seq.matrix(t)?)?;
        last_movement = next
            .p
            .iter()
            .zip(&prev.p)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        trace.push(next);
        if last_movement < opts.tol {
            quiet += 1;
            if quiet >= opts.patience {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    Ok(MarkovRun {
        trace,
        converged: last_movement < opts.tol,
        last_movement,
    })
}

/// Coefficient of ergodicity of the forward-accumulated diagonal block on
/// `class`, at every retained cut of the forward segmentation.
///
/// The accumulation starts at the first retained cut. `class` must be
/// closed under the segment pattern: no positive entry leads out of it.
pub fn weak_ergodicity_estimate(
    seq: &MatrixSequence,
    class: &[usize],
    horizon: usize,
) -> Result<Vec<f64>> {
    if class.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    if let Some(&index) = class.iter().find(|&&i| i >= seq.dim()) {
        return Err(Error::IndexOutOfRange {
            index,
            n: seq.dim(),
        });
    }
    let seg = segment(seq, Direction::Forward, horizon)?;
    if !seg.stabilized {
        return Err(Error::Unstabilized);
    }
    let closed = class.iter().all(|&i| {
        seg.segment_pattern
            .successors(i)
            .all(|j| class.contains(&j))
    });
    if !closed {
        return Err(Error::NotClosed);
    }

    let mut out = Vec::with_capacity(seg.cut_points.len() - 1);
    let mut acc = StochasticMatrix::identity(seq.dim());
    for (s, t) in seg.windows() {
        let window = accumulate(seq, Direction::Forward, s, t)?.value;
        acc = acc.multiply(&window)?;
        out.push(acc.principal_block(class)?.ergodicity_coefficient());
    }
    Ok(out)
}
