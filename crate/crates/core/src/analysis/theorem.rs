//! Numerical check of the partial-convergence theorem for backward products.
//!
//! After the segmentation's first retained cut `t0`, each window
//! accumulation `A(t_{i+1}, t_i)` has positive minimum `delta_i`. If those
//! sum to infinity, every essential diagonal block of `A(t, t0)` converges
//! to a consensus matrix and the block on the inessential indices `J`
//! vanishes. The report carries the measured `delta_i`, flags for each
//! hypothesis, and residuals of the conclusion at the horizon.

use std::collections::VecDeque;

use serde::Serialize;

use crate::accumulation::{accumulate, segment, Direction, MatrixSequence, Segmentation};
use crate::analysis::series::{
    classify_schedule, halves_growth, hypothesis_from_uniform_bound, GapSchedule, HypothesisStatus,
    SeriesClass, UniformBoundVerdict,
};
use crate::error::Result;
use crate::matrix::StochasticMatrix;
use crate::structure::{communication_classes, ClassPartition};

/// Number of trailing windows inspected by the oscillation metric.
const OSCILLATION_WINDOWS: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremOptions {
    pub horizon: usize,
    /// Residual threshold for `conclusion_verified`.
    pub residual_tol: f64,
    /// Uniform per-matrix positive-minimum bound, if known.
    pub delta_floor: Option<f64>,
    /// Schedule certifying the window bounds, if known.
    pub schedule: Option<GapSchedule>,
}

impl TheoremOptions {
    pub fn new(horizon: usize) -> Self {
        TheoremOptions {
            horizon,
            residual_tol: 1e-8,
            delta_floor: None,
            schedule: None,
        }
    }
}

/// How strongly the finite prefix supports `sum_i delta_i = infinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DivergenceEvidence {
    /// A known schedule (given or fitted from a uniform bound) diverges.
    ScheduleCertified,
    /// The measured `delta_i` do not decay across the horizon.
    EmpiricalGrowth,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisFlags {
    pub positive_diagonals: bool,
    pub stabilized_segments: bool,
    pub divergence_evidence: DivergenceEvidence,
    /// True only for schedule-certified divergence on a stabilized segmentation.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassResidual {
    pub class: Vec<usize>,
    /// Largest max-abs difference between two rows of the diagonal block.
    pub row_distance: f64,
    /// Coefficient of ergodicity of the diagonal block.
    pub tau: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConclusionResiduals {
    pub essential: Vec<ClassResidual>,
    /// Row-sum norm of the `[J, J]` block; zero when `J` is empty.
    pub inessential_norm: f64,
    /// Largest change of the `J` rows between consecutive trailing cuts.
    /// Reported, not asserted.
    pub oscillation: f64,
}

impl ConclusionResiduals {
    pub fn max_tau(&self) -> f64 {
        self.essential.iter().map(|c| c.tau).fold(0.0, f64::max)
    }

    pub fn max_row_distance(&self) -> f64 {
        self.essential
            .iter()
            .map(|c| c.row_distance)
            .fold(0.0, f64::max)
    }

    /// Largest of the asserted residuals.
    pub fn max_asserted(&self) -> f64 {
        self.max_tau()
            .max(self.max_row_distance())
            .max(self.inessential_norm)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub segmentation: Segmentation,
    pub classes: ClassPartition,
    pub delta_series: Vec<f64>,
    pub hypothesis: HypothesisFlags,
    pub schedule_class: Option<SeriesClass>,
    pub uniform_bound: Option<UniformBoundVerdict>,
    pub residuals: ConclusionResiduals,
    pub residual_tol: f64,
    pub conclusion_verified: bool,
}

/// Segments the backward accumulation of `seq`, measures the window
/// positive minima, and evaluates the conclusion on `A(horizon, t0)`.
pub fn check_theorem(seq: &MatrixSequence, opts: &TheoremOptions) -> Result<TheoremReport> {
    seq.require_positive_diagonal()?;
    let seg = segment(seq, Direction::Backward, opts.horizon)?;
    let classes = communication_classes(&seg.segment_pattern)?;
    let inessential = classes.inessential_indices();

    let mut delta_series = Vec::new();
    let mut acc = StochasticMatrix::identity(seq.dim());
    let mut snapshots: VecDeque<Vec<f64>> = VecDeque::with_capacity(OSCILLATION_WINDOWS + 1);
    for (s, t) in seg.windows() {
        let window = accumulate(seq, Direction::Backward, s, t)?.value;
        delta_series.push(window.min_plus());
        acc = window.multiply(&acc)?;
        if snapshots.len() == OSCILLATION_WINDOWS + 1 {
            snapshots.pop_front();
        }
        snapshots.push_back(
            inessential
                .iter()
                .flat_map(|&i| acc.row(i).to_vec())
                .collect(),
        );
    }
    let last_cut = *seg.cut_points.last().expect("at least one cut");
    let tail = accumulate(seq, Direction::Backward, last_cut, opts.horizon)?.value;
    let acc = tail.multiply(&acc)?;

    let essential = classes
        .essential_classes()
        .iter()
        .map(|class| {
            let block = acc.principal_block(class)?;
            Ok(ClassResidual {
                class: class.clone(),
                row_distance: block_row_distance(&acc, class),
                tau: block.ergodicity_coefficient(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let inessential_norm = if inessential.is_empty() {
        0.0
    } else {
        acc.block_row_sum_norm(&inessential, &inessential)?
    };
    let oscillation = snapshots
        .iter()
        .zip(snapshots.iter().skip(1))
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max);
    let residuals = ConclusionResiduals {
        essential,
        inessential_norm,
        oscillation,
    };

    let schedule_class = opts.schedule.as_ref().map(classify_schedule);
    let uniform_bound = match (&opts.schedule, opts.delta_floor) {
        (None, Some(delta)) => Some(hypothesis_from_uniform_bound(delta, &seg.gaps())),
        _ => None,
    };
    let divergence_evidence = match (schedule_class, &uniform_bound) {
        (Some(SeriesClass::Divergent), _) => DivergenceEvidence::ScheduleCertified,
        (Some(_), _) => DivergenceEvidence::Inconclusive,
        (None, Some(v)) if v.status == HypothesisStatus::Satisfied => {
            DivergenceEvidence::ScheduleCertified
        }
        _ => match halves_growth(delta_series.iter().copied()) {
            HypothesisStatus::Satisfied => DivergenceEvidence::EmpiricalGrowth,
            _ => DivergenceEvidence::Inconclusive,
        },
    };
    let hypothesis = HypothesisFlags {
        positive_diagonals: seq.is_positive_diagonal(),
        stabilized_segments: seg.stabilized,
        divergence_evidence,
        certified: seg.stabilized && divergence_evidence == DivergenceEvidence::ScheduleCertified,
    };

    let conclusion_verified = residuals.max_asserted() < opts.residual_tol;
    Ok(TheoremReport {
        segmentation: seg,
        classes,
        delta_series,
        hypothesis,
        schedule_class,
        uniform_bound,
        residuals,
        residual_tol: opts.residual_tol,
        conclusion_verified,
    })
}

fn block_row_distance(a: &StochasticMatrix, class: &[usize]) -> f64 {
    let mut worst: f64 = 0.0;
    for (x, &i) in class.iter().enumerate() {
        for &j in &class[x + 1..] {
            for &c in class {
                worst = worst.max((a.get(i, c) - a.get(j, c)).abs());
            }
        }
    }
    worst
}
