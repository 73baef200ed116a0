//! Convergence analysis: the theorem checker and the gap-schedule series.

pub mod series;
pub mod theorem;

pub use series::{
    classify_schedule, hypothesis_from_uniform_bound, log_threshold, partial_sums,
    series_partial_sum, GapSchedule, HypothesisStatus, ScheduleKind, SeriesClass,
    UniformBoundVerdict,
};
pub use theorem::{
    check_theorem, ClassResidual, ConclusionResiduals, DivergenceEvidence, HypothesisFlags,
    TheoremOptions, TheoremReport,
};
