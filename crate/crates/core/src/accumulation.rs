//! Forward and backward accumulations of a matrix sequence, and the
//! segmentation of an accumulation into windows sharing one saturated
//! zero pattern.
//!
//! For `s <= t` the backward accumulation is `A(t, s) = A(t-1) ... A(s)` and
//! the forward accumulation is `A(s, t) = A(s) ... A(t-1)`. Both are the
//! identity when `s == t`.

use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{generate_unchecked, GeneratorSpec};
use crate::matrix::{StochasticMatrix, ZeroPattern};
use crate::structure::{FormViolation, GantmacherForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `A(s) ... A(t-1)`: Markov direction.
    #[serde(alias = "fwd")]
    Forward,
    /// `A(t-1) ... A(s)`: consensus direction.
    #[serde(alias = "bwd")]
    Backward,
}

impl Direction {
    /// Appends the next factor `a` to an accumulation.
    pub fn extend(self, acc: &StochasticMatrix, a: &StochasticMatrix) -> Result<StochasticMatrix> {
        match self {
            Direction::Forward => acc.multiply(a),
            Direction::Backward => a.multiply(acc),
        }
    }

    /// Pattern counterpart of [`Direction::extend`]; exact, no cancellation.
    pub fn extend_pattern(self, acc: &ZeroPattern, a: &ZeroPattern) -> Result<ZeroPattern> {
        match self {
            Direction::Forward => acc.product(a),
            Direction::Backward => a.product(acc),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SequenceSource {
    Stored(Vec<StochasticMatrix>),
    Generated(GeneratorSpec),
}

/// A finite prefix `A(0), ..., A(horizon - 1)` of a matrix sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSequence {
    source: SequenceSource,
    n: usize,
    horizon: usize,
    positive_diagonal: bool,
}

impl MatrixSequence {
    pub fn from_matrices(matrices: Vec<StochasticMatrix>) -> Result<Self> {
        let first = matrices.first().ok_or(Error::ZeroHorizon)?;
        let n = first.dim();
        if let Some(bad) = matrices.iter().find(|m| m.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.dim(),
            });
        }
        let positive_diagonal = matrices.iter().all(StochasticMatrix::has_positive_diagonal);
        Ok(MatrixSequence {
            horizon: matrices.len(),
            source: SequenceSource::Stored(matrices),
            n,
            positive_diagonal,
        })
    }

    pub fn from_generator(spec: GeneratorSpec, horizon: usize) -> Result<Self> {
        spec.validate()?;
        if horizon == 0 {
            return Err(Error::ZeroHorizon);
        }
        Ok(MatrixSequence {
            n: spec.n,
            horizon,
            source: SequenceSource::Generated(spec),
            positive_diagonal: true,
        })
    }

    /// Repeats `m` for `horizon` steps.
    pub fn constant(m: StochasticMatrix, horizon: usize) -> Result<Self> {
        Self::from_matrices(vec![m; horizon])
    }

    /// Restricts (stored) or sets (generated) the horizon.
    pub fn with_horizon(mut self, horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::ZeroHorizon);
        }
        if let SequenceSource::Stored(ms) = &mut self.source {
            if horizon > ms.len() {
                return Err(Error::OutOfHorizon {
                    start: 0,
                    end: horizon,
                    horizon: ms.len(),
                });
            }
            ms.truncate(horizon);
            self.positive_diagonal = ms.iter().all(StochasticMatrix::has_positive_diagonal);
        }
        self.horizon = horizon;
        Ok(self)
    }

    pub fn source(&self) -> &SequenceSource {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn is_positive_diagonal(&self) -> bool {
        self.positive_diagonal
    }

    pub fn require_positive_diagonal(&self) -> Result<()> {
        if self.positive_diagonal {
            Ok(())
        } else {
            Err(Error::NotPositiveDiagonal)
        }
    }

    /// `A(t)` for `t < horizon`.
    pub fn matrix(&self, t: usize) -> Result<Cow<'_, StochasticMatrix>> {
        if t >= self.horizon {
            return Err(Error::OutOfHorizon {
                start: t,
                end: t + 1,
                horizon: self.horizon,
            });
        }
        Ok(match &self.source {
            SequenceSource::Stored(ms) => Cow::Borrowed(&ms[t]),
            SequenceSource::Generated(spec) => Cow::Owned(generate_unchecked(spec, t)),
        })
    }

    /// Materializes the sequence up to its horizon.
    pub fn to_matrices(&self) -> Vec<StochasticMatrix> {
        (0..self.horizon)
            .map(|t| self.matrix(t).expect("within horizon").into_owned())
            .collect()
    }
}

/// A product of consecutive sequence elements over `[start, end)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Accumulation {
    pub direction: Direction,
    pub start: usize,
    pub end: usize,
    pub value: StochasticMatrix,
}

/// Forward accumulation `A(s, t)` or backward accumulation `A(t, s)`.
pub fn accumulate(
    seq: &MatrixSequence,
    direction: Direction,
    s: usize,
    t: usize,
) -> Result<Accumulation> {
    if s > t || t > seq.horizon() {
        return Err(Error::OutOfHorizon {
            start: s,
            end: t,
            horizon: seq.horizon(),
        });
    }
    let mut value = StochasticMatrix::identity(seq.dim());
    for k in s..t {
        value = direction.extend(&value, &*seq.matrix(k)?)?;
    }
    Ok(Accumulation {
        direction,
        start: s,
        end: t,
        value,
    })
}

/// Cut points splitting an accumulation into windows with a common
/// saturated zero pattern.
///
/// Retained windows are `[cut_points[i], cut_points[i + 1]]`. Windows
/// before the first retained cut are warm-up; windows after the last
/// retained cut were truncated by the horizon.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Segmentation {
    pub direction: Direction,
    pub horizon: usize,
    pub cut_points: Vec<usize>,
    pub segment_pattern: ZeroPattern,
    pub warmup_cuts: Vec<usize>,
    pub tail_cuts: Vec<usize>,
    pub stabilized: bool,
    /// Every saturation cut in order, starting after 0.
    pub saturation_cuts: Vec<usize>,
    /// Indices `i` of saturation windows whose pattern is not contained in
    /// the pattern of window `i - 1`.
    pub monotone_violations: Vec<usize>,
}

impl Segmentation {
    /// Retained windows as `(start, end)` pairs.
    pub fn windows(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cut_points.windows(2).map(|w| (w[0], w[1]))
    }

    /// Lengths of the retained windows.
    pub fn gaps(&self) -> Vec<usize> {
        self.windows().map(|(s, t)| t - s).collect()
    }

    pub fn first_cut(&self) -> usize {
        self.cut_points[0]
    }
}

/// Splits the accumulation of `seq` in `direction` up to `horizon`.
///
/// Saturation phase: from the current cut `c`, the pattern of the
/// accumulation over `[c, t]` only grows with `t` (positive diagonals). It
/// is tracked as a boolean product, so entries that underflow numerically in
/// long products still count as positive. The
/// next cut is the first `t` where it reaches its value at the horizon.
///
/// Stabilization phase: the saturated window patterns are nonincreasing.
/// The retained cuts are the longest run of windows with equal patterns
/// (earliest on ties), skipping the initial window from 0. The result is
/// stabilized when that run has at least two windows and is strictly longer
/// than every other run.
pub fn segment(seq: &MatrixSequence, direction: Direction, horizon: usize) -> Result<Segmentation> {
    seq.require_positive_diagonal()?;
    if horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    if horizon > seq.horizon() {
        return Err(Error::OutOfHorizon {
            start: 0,
            end: horizon,
            horizon: seq.horizon(),
        });
    }

    let mut bounds = vec![0];
    let mut patterns: Vec<ZeroPattern> = Vec::new();
    let mut c = 0;
    while c < horizon {
        let mut p = ZeroPattern::identity(seq.dim());
        let mut current: Option<(usize, ZeroPattern)> = None;
        for t in (c + 1)..=horizon {
            p = direction.extend_pattern(&p, &ZeroPattern::of(&*seq.matrix(t - 1)?))?;
            // the saturated pattern from c is contained in the previous
            // window's, so reaching it (or the full pattern) ends the scan
            let done = p.is_full() || patterns.last() == Some(&p);
            if current.as_ref().is_none_or(|(_, q)| *q != p) {
                current = Some((t, p.clone()));
            }
            if done {
                break;
            }
        }
        let (cut, p) = current.expect("c < horizon leaves at least one step");
        bounds.push(cut);
        patterns.push(p);
        c = cut;
    }

    let monotone_violations = (1..patterns.len())
        .filter(|&i| !patterns[i - 1].contains(&patterns[i]))
        .collect();

    // runs among windows 1.. (window 0 starts at time 0 and is never retained)
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for i in 1..patterns.len() {
        match runs.last_mut() {
            Some((start, len)) if patterns[*start] == patterns[i] => *len += 1,
            _ => runs.push((i, 1)),
        }
    }
    let best = runs
        .iter()
        .copied()
        .enumerate()
        .max_by(|(ia, (_, la)), (ib, (_, lb))| la.cmp(lb).then(ib.cmp(ia)));

    let saturation_cuts = bounds[1..].to_vec();
    let seg = match best {
        Some((run_idx, (k, len))) => {
            let unique = runs
                .iter()
                .enumerate()
                .all(|(j, &(_, l))| j == run_idx || l < len);
            let end = k + len;
            Segmentation {
                direction,
                horizon,
                cut_points: bounds[k..=end].to_vec(),
                segment_pattern: patterns[k].clone(),
                warmup_cuts: bounds[1..k].to_vec(),
                tail_cuts: bounds[end + 1..].to_vec(),
                stabilized: len >= 2 && unique,
                saturation_cuts,
                monotone_violations,
            }
        }
        None => Segmentation {
            direction,
            horizon,
            cut_points: saturation_cuts.clone(),
            segment_pattern: patterns.last().expect("horizon >= 1").clone(),
            warmup_cuts: Vec::new(),
            tail_cuts: Vec::new(),
            stabilized: false,
            saturation_cuts,
            monotone_violations,
        },
    };
    Ok(seg)
}

/// Gantmacher form of a stabilized segmentation's common pattern, with any
/// violation of the positive/zero block dichotomy.
#[derive(Clone, Debug, Serialize)]
pub struct SegmentForm {
    pub form: GantmacherForm,
    pub violations: Vec<FormViolation>,
}

pub fn segment_gantmacher(seg: &Segmentation) -> Result<SegmentForm> {
    if !seg.stabilized {
        return Err(Error::Unstabilized);
    }
    let form = GantmacherForm::from_pattern(&seg.segment_pattern)?;
    let mut violations = form.violations();
    violations.extend(form.dichotomy_violations());
    Ok(SegmentForm { form, violations })
}
