//! Gap schedules and the series `sum_n delta^{gap(n)}`.
//!
//! If every single matrix has positive minimum at least `delta` and segment
//! `i` has length `gap(i)`, the segment accumulation has positive minimum at
//! least `delta^{gap(i)}`. Whether those bounds sum to infinity decides if the
//! convergence hypothesis is guaranteed.
//!
//! For `gap(n) = a log n` the terms are `n^{a log delta}`, a p-series that
//! diverges iff `delta >= e^{-1/a}`. For `gap(n) = a log log n` the series
//! always diverges, and constant gaps trivially diverge.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    Constant,
    Log,
    Loglog,
    Custom,
}

/// Segment-length schedule with the per-matrix positive-minimum bound
/// `delta`. Series terms are indexed from [`GapSchedule::first_term`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapSchedule {
    pub kind: ScheduleKind,
    pub delta: f64,
    #[serde(default = "default_a")]
    pub a: f64,
    /// Constant gap `N`.
    #[serde(default = "default_gap")]
    pub gap: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub custom: Vec<usize>,
}

fn default_a() -> f64 {
    1.0
}

fn default_gap() -> usize {
    1
}

impl GapSchedule {
    pub fn constant(delta: f64, gap: usize) -> Self {
        GapSchedule {
            kind: ScheduleKind::Constant,
            delta,
            a: 1.0,
            gap,
            custom: Vec::new(),
        }
    }

    pub fn log(a: f64, delta: f64) -> Self {
        GapSchedule {
            kind: ScheduleKind::Log,
            delta,
            a,
            gap: 1,
            custom: Vec::new(),
        }
    }

    pub fn loglog(a: f64, delta: f64) -> Self {
        GapSchedule {
            kind: ScheduleKind::Loglog,
            delta,
            a,
            gap: 1,
            custom: Vec::new(),
        }
    }

    pub fn custom(delta: f64, gaps: Vec<usize>) -> Self {
        GapSchedule {
            kind: ScheduleKind::Custom,
            delta,
            a: 1.0,
            gap: 1,
            custom: gaps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidSchedule(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(Error::InvalidSchedule(format!(
                "a must be positive, got {}",
                self.a
            )));
        }
        match self.kind {
            ScheduleKind::Constant if self.gap == 0 => Err(Error::InvalidSchedule(
                "constant gap must be at least 1".into(),
            )),
            ScheduleKind::Custom if self.custom.is_empty() || self.custom.contains(&0) => Err(
                Error::InvalidSchedule("custom gaps must be nonempty and at least 1".into()),
            ),
            _ => Ok(()),
        }
    }

    /// Index of the first series term: 3 for `loglog` (so that `log log n`
    /// is positive), 1 otherwise.
    pub fn first_term(&self) -> usize {
        match self.kind {
            ScheduleKind::Loglog => 3,
            _ => 1,
        }
    }

    /// Real-valued exponent of term `n`.
    pub fn exponent(&self, n: usize) -> f64 {
        let x = n as f64;
        match self.kind {
            ScheduleKind::Constant => self.gap as f64,
            ScheduleKind::Log => self.a * x.ln(),
            ScheduleKind::Loglog => self.a * x.ln().ln(),
            ScheduleKind::Custom => {
                let k = (n - 1).min(self.custom.len() - 1);
                self.custom[k] as f64
            }
        }
    }

    /// Series term `delta^{exponent(n)}`.
    pub fn term(&self, n: usize) -> f64 {
        self.delta.powf(self.exponent(n))
    }

    /// Integer length of segment `i` (0-based): the exponent of term
    /// `first_term + i` rounded up, at least 1. Custom schedules repeat
    /// their last gap.
    pub fn segment_gap(&self, i: usize) -> usize {
        let e = self.exponent(self.first_term() + i);
        ((e - 1e-9).ceil() as usize).max(1)
    }
}

/// Partial sum of the schedule's series over `first_term..=upto`, summed in
/// ascending order.
pub fn series_partial_sum(sched: &GapSchedule, upto: usize) -> Result<f64> {
    Ok(partial_sums(sched, &[upto])?[0].1)
}

/// Partial sums at each checkpoint, in a single ascending pass. Checkpoints
/// must be nondecreasing and at least `first_term`.
pub fn partial_sums(sched: &GapSchedule, checkpoints: &[usize]) -> Result<Vec<(usize, f64)>> {
    sched.validate()?;
    let first = sched.first_term();
    if let Some(&bad) = checkpoints.iter().find(|&&c| c < first) {
        return Err(Error::InvalidSchedule(format!(
            "partial sums start at n = {first}, got upper limit {bad}"
        )));
    }
    if checkpoints.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidSchedule(
            "checkpoints must be nondecreasing".into(),
        ));
    }
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut sum = 0.0;
    let mut n = first;
    for &c in checkpoints {
        while n <= c {
            sum += sched.term(n);
            n += 1;
        }
        out.push((c, sum));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesClass {
    Divergent,
    Convergent,
    /// Custom schedule whose shape could not be matched.
    Undetermined,
}

/// Decides convergence of `sum_n delta^{gap(n)}` in closed form.
///
/// Custom schedules are matched against the known shapes via
/// [`hypothesis_from_uniform_bound`].
pub fn classify_schedule(sched: &GapSchedule) -> SeriesClass {
    match sched.kind {
        ScheduleKind::Constant | ScheduleKind::Loglog => SeriesClass::Divergent,
        ScheduleKind::Log => {
            if sched.delta >= log_threshold(sched.a) {
                SeriesClass::Divergent
            } else {
                SeriesClass::Convergent
            }
        }
        ScheduleKind::Custom => {
            match hypothesis_from_uniform_bound(sched.delta, &sched.custom).status {
                HypothesisStatus::Satisfied => SeriesClass::Divergent,
                HypothesisStatus::Violated => SeriesClass::Convergent,
                HypothesisStatus::Unknown => SeriesClass::Undetermined,
            }
        }
    }
}

/// Smallest `delta` for which `sum_n delta^{a log n}` diverges: `e^{-1/a}`.
pub fn log_threshold(a: f64) -> f64 {
    (-1.0 / a).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisStatus {
    Satisfied,
    Violated,
    Unknown,
}

/// Outcome of bounding each segment's positive minimum by `delta^{gap_i}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformBoundVerdict {
    pub status: HypothesisStatus,
    /// Schedule shape matched to the gaps, if any fit.
    pub fitted: Option<GapSchedule>,
    /// `sum_i delta^{gap_i}` over the given gaps.
    pub bound_sum: f64,
}

const MAX_MEAN_RESIDUAL: f64 = 1.0;

/// Given a uniform per-matrix bound `delta` and observed segment lengths,
/// decides whether `sum_i delta^{gap_i}` diverges.
///
/// The gaps are fitted against constant, `a log n` and `a log log n` shapes
/// (least squares through the origin for the growing shapes). A good fit is
/// classified in closed form; otherwise the halves of the bound series are
/// compared.
pub fn hypothesis_from_uniform_bound(delta: f64, gaps: &[usize]) -> UniformBoundVerdict {
    let bound_sum: f64 = gaps.iter().map(|&g| delta.powi(g as i32)).sum();
    let unknown = UniformBoundVerdict {
        status: HypothesisStatus::Unknown,
        fitted: None,
        bound_sum,
    };
    if gaps.is_empty() || !(delta > 0.0 && delta < 1.0) {
        return unknown;
    }

    let g: Vec<f64> = gaps.iter().map(|&x| x as f64).collect();
    let m = g.len() as f64;

    let mean = g.iter().sum::<f64>() / m;
    let mut best = (
        g.iter().map(|x| (x - mean).abs()).sum::<f64>() / m,
        g.iter().map(|x| (x - mean).powi(2)).sum::<f64>(),
        // bounded gaps are certified by their maximum
        GapSchedule::constant(delta, *gaps.iter().max().expect("nonempty")),
    );

    type Shape = (ScheduleKind, fn(f64) -> f64, usize);
    let shapes: [Shape; 2] = [
        (ScheduleKind::Loglog, |x| x.ln().ln(), 3),
        (ScheduleKind::Log, f64::ln, 1),
    ];
    for (kind, f, first) in shapes {
        let xs: Vec<f64> = (0..gaps.len()).map(|i| f((first + i) as f64)).collect();
        let sxx: f64 = xs.iter().map(|x| x * x).sum();
        if sxx <= 0.0 {
            continue;
        }
        let a = xs.iter().zip(&g).map(|(x, y)| x * y).sum::<f64>() / sxx;
        if a <= 0.0 {
            continue;
        }
        let rss: f64 = xs.iter().zip(&g).map(|(x, y)| (y - a * x).powi(2)).sum();
        if rss < best.1 - 1e-9 {
            let mad = xs
                .iter()
                .zip(&g)
                .map(|(x, y)| (y - a * x).abs())
                .sum::<f64>()
                / m;
            let sched = match kind {
                ScheduleKind::Log => GapSchedule::log(a, delta),
                _ => GapSchedule::loglog(a, delta),
            };
            best = (mad, rss, sched);
        }
    }

    if best.0 <= MAX_MEAN_RESIDUAL {
        let status = match classify_schedule(&best.2) {
            SeriesClass::Divergent => HypothesisStatus::Satisfied,
            SeriesClass::Convergent => HypothesisStatus::Violated,
            SeriesClass::Undetermined => HypothesisStatus::Unknown,
        };
        return UniformBoundVerdict {
            status,
            fitted: Some(best.2),
            bound_sum,
        };
    }

    UniformBoundVerdict {
        status: halves_growth(gaps.iter().map(|&x| delta.powi(x as i32))),
        ..unknown
    }
}

/// Compares the second half of a nonnegative series against the first.
/// Terms that have not decayed suggest divergence; a vanishing tail
/// suggests convergence.
pub(crate) fn halves_growth(terms: impl Iterator<Item = f64>) -> HypothesisStatus {
    let terms: Vec<f64> = terms.collect();
    if terms.len() < 4 {
        return HypothesisStatus::Unknown;
    }
    let half = terms.len() / 2;
    let first: f64 = terms[..half].iter().sum();
    let second: f64 = terms[half..].iter().sum();
    if first <= 0.0 {
        return HypothesisStatus::Unknown;
    }
    let ratio = second / first;
    if ratio >= 0.5 {
        HypothesisStatus::Satisfied
    } else if ratio < 0.05 {
        HypothesisStatus::Violated
    } else {
        HypothesisStatus::Unknown
    }
}
