//! Seeded, replayable matrix-sequence generators.
//!
//! `generate(spec, t)` is a pure function of the spec and the time index, so
//! accumulations over arbitrary windows can be recomputed at will. Random rows
//! put `delta_floor` on every support entry and spread the remaining mass by
//! normalized uniform draws, so every positive entry is at least the floor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::series::GapSchedule;
use crate::error::{Error, Result};
use crate::matrix::{StochasticMatrix, ZeroPattern};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    /// Independent random patterns (diagonal always set, each off-diagonal
    /// entry with probability `density`, restricted to `support`).
    RandomPositiveDiagonal,
    /// Like `RandomPositiveDiagonal` with a symmetric pattern at every step.
    TypeSymmetric,
    /// Pattern at `t` is `patterns[t % patterns.len()]`.
    PatternScheduled,
    /// `matrix` at every step.
    Constant,
    /// Identity except for one burst at the end of each schedule window.
    AdversarialGap,
}

/// JSON-serializable generator description.
///
/// ```json
/// { "kind": "adversarial_gap", "n": 3, "seed": 7, "delta_floor": 0.3,
///   "schedule": { "kind": "constant", "delta": 0.3, "gap": 5 } }
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_floor")]
    pub delta_floor: f64,
    #[serde(default = "default_density")]
    pub density: f64,
    /// Allowed positions for random kinds; burst pattern for `adversarial_gap`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<ZeroPattern>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<StochasticMatrix>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub patterns: Vec<ZeroPattern>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<GapSchedule>,
    /// `adversarial_gap` only: mix burst `i` with the identity at weight
    /// `schedule.delta^{gap(i)}`, so the burst's positive minimum tracks the
    /// segment bound instead of `delta_floor`.
    #[serde(default, skip_serializing_if = "is_false")]
    pub lazy_bursts: bool,
    /// `type_symmetric` only: the floor at `t` is `delta_floor / (1 + t)^floor_decay`.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub floor_decay: f64,
}

fn default_floor() -> f64 {
    1e-6
}

fn default_density() -> f64 {
    0.3
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

impl GeneratorSpec {
    fn base(kind: GeneratorKind, n: usize, seed: u64, delta_floor: f64) -> Self {
        GeneratorSpec {
            kind,
            n,
            seed,
            delta_floor,
            density: default_density(),
            support: None,
            matrix: None,
            patterns: Vec::new(),
            schedule: None,
            lazy_bursts: false,
            floor_decay: 0.0,
        }
    }

    pub fn random_positive_diagonal(n: usize, seed: u64, delta_floor: f64, density: f64) -> Self {
        GeneratorSpec {
            density,
            ..Self::base(GeneratorKind::RandomPositiveDiagonal, n, seed, delta_floor)
        }
    }

    pub fn type_symmetric(n: usize, seed: u64, delta_floor: f64, density: f64) -> Self {
        GeneratorSpec {
            density,
            ..Self::base(GeneratorKind::TypeSymmetric, n, seed, delta_floor)
        }
    }

    pub fn pattern_scheduled(patterns: Vec<ZeroPattern>, seed: u64, delta_floor: f64) -> Self {
        let n = patterns.first().map_or(0, ZeroPattern::dim);
        GeneratorSpec {
            patterns,
            ..Self::base(GeneratorKind::PatternScheduled, n, seed, delta_floor)
        }
    }

    pub fn constant(matrix: StochasticMatrix) -> Self {
        let floor = matrix.min_plus();
        GeneratorSpec {
            matrix: Some(matrix.clone()),
            ..Self::base(GeneratorKind::Constant, matrix.dim(), 0, floor)
        }
    }

    pub fn adversarial_gap(n: usize, seed: u64, delta_floor: f64, schedule: GapSchedule) -> Self {
        GeneratorSpec {
            schedule: Some(schedule),
            ..Self::base(GeneratorKind::AdversarialGap, n, seed, delta_floor)
        }
    }

    pub fn with_support(mut self, support: ZeroPattern) -> Self {
        self.support = Some(support);
        self
    }

    pub fn with_lazy_bursts(mut self) -> Self {
        self.lazy_bursts = true;
        self
    }

    pub fn with_floor_decay(mut self, decay: f64) -> Self {
        self.floor_decay = decay;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let infeasible = |msg: String| Err(Error::InfeasibleGenerator(msg));
        let n = self.n;
        if n == 0 {
            return infeasible("n must be positive".into());
        }
        if !(self.delta_floor > 0.0 && self.delta_floor.is_finite()) {
            return infeasible(format!(
                "delta_floor must be positive, got {}",
                self.delta_floor
            ));
        }
        if self.kind != GeneratorKind::Constant && self.delta_floor * n as f64 > 1.0 + 1e-12 {
            return infeasible(format!(
                "delta_floor * n = {} exceeds 1",
                self.delta_floor * n as f64
            ));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return infeasible(format!("density must lie in [0, 1], got {}", self.density));
        }
        if let Some(s) = &self.support {
            if s.dim() != n || !s.has_positive_diagonal() {
                return infeasible("support must be n x n with a full diagonal".into());
            }
        }
        if self.floor_decay != 0.0
            && (self.kind != GeneratorKind::TypeSymmetric
                || self.floor_decay.is_nan()
                || self.floor_decay < 0.0)
        {
            return infeasible("floor_decay is a nonnegative type_symmetric option".into());
        }
        if self.lazy_bursts && self.kind != GeneratorKind::AdversarialGap {
            return infeasible("lazy_bursts applies to adversarial_gap only".into());
        }
        match self.kind {
            GeneratorKind::RandomPositiveDiagonal | GeneratorKind::TypeSymmetric => Ok(()),
            GeneratorKind::PatternScheduled => {
                if self.patterns.is_empty() {
                    return infeasible("pattern schedule is empty".into());
                }
                if self
                    .patterns
                    .iter()
                    .any(|p| p.dim() != n || !p.has_positive_diagonal())
                {
                    return infeasible(
                        "scheduled patterns must be n x n with a full diagonal".into(),
                    );
                }
                Ok(())
            }
            GeneratorKind::Constant => {
                let Some(m) = &self.matrix else {
                    return infeasible("constant kind needs a matrix".into());
                };
                if m.dim() != n {
                    return infeasible(format!(
                        "matrix is {}x{}, expected n = {n}",
                        m.dim(),
                        m.dim()
                    ));
                }
                if !m.has_positive_diagonal() {
                    return infeasible("constant matrix must have a positive diagonal".into());
                }
                if m.min_plus() < self.delta_floor {
                    return infeasible(format!(
                        "constant matrix has positive minimum {} below delta_floor {}",
                        m.min_plus(),
                        self.delta_floor
                    ));
                }
                Ok(())
            }
            GeneratorKind::AdversarialGap => match &self.schedule {
                Some(s) => s.validate(),
                None => infeasible("adversarial_gap needs a schedule".into()),
            },
        }
    }

    /// Positive-minimum floor guaranteed at time `t`.
    pub fn floor_at(&self, t: usize) -> f64 {
        match self.kind {
            GeneratorKind::TypeSymmetric if self.floor_decay > 0.0 => {
                self.delta_floor / (1.0 + t as f64).powf(self.floor_decay)
            }
            _ => self.delta_floor,
        }
    }

    /// For `adversarial_gap`: `(window index, window start, window length)`
    /// of the window containing `t`.
    pub fn window_of(&self, t: usize) -> Option<(usize, usize, usize)> {
        let sched = self.schedule.as_ref()?;
        let mut start = 0;
        for i in 0.. {
            let len = sched.segment_gap(i);
            if t < start + len {
                return Some((i, start, len));
            }
            start += len;
        }
        unreachable!()
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// The matrix `A(t)` of the sequence described by `spec`.
pub fn generate(spec: &GeneratorSpec, t: usize) -> Result<StochasticMatrix> {
    spec.validate()?;
    Ok(generate_unchecked(spec, t))
}

/// [`generate`] for a spec already known to be valid.
pub(crate) fn generate_unchecked(spec: &GeneratorSpec, t: usize) -> StochasticMatrix {
    let n = spec.n;
    let allowed = |i: usize, j: usize| spec.support.as_ref().is_none_or(|s| s.get(i, j));
    match spec.kind {
        GeneratorKind::Constant => spec.matrix.clone().expect("validated"),
        GeneratorKind::PatternScheduled => {
            let pattern = &spec.patterns[t % spec.patterns.len()];
            random_stochastic(&mut spec.rng(t as u64), pattern, spec.delta_floor)
                .expect("validated pattern has a full diagonal")
        }
        GeneratorKind::RandomPositiveDiagonal => {
            let mut rng = spec.rng(t as u64);
            let pattern = ZeroPattern::from_fn(n, |i, j| {
                i == j || (allowed(i, j) && rng.gen_bool(spec.density))
            });
            random_stochastic(&mut rng, &pattern, spec.delta_floor).expect("full diagonal")
        }
        GeneratorKind::TypeSymmetric => {
            let mut rng = spec.rng(t as u64);
            let mut pattern = ZeroPattern::identity(n);
            for i in 0..n {
                for j in (i + 1)..n {
                    if allowed(i, j) && allowed(j, i) && rng.gen_bool(spec.density) {
                        pattern.set(i, j, true);
                        pattern.set(j, i, true);
                    }
                }
            }
            random_stochastic(&mut rng, &pattern, spec.floor_at(t)).expect("full diagonal")
        }
        GeneratorKind::AdversarialGap => {
            let (window, start, len) = spec.window_of(t).expect("validated schedule");
            if t + 1 < start + len {
                return StochasticMatrix::identity(n);
            }
            let pattern = spec.support.clone().unwrap_or_else(|| ZeroPattern::full(n));
            let burst = random_stochastic(&mut spec.rng(window as u64), &pattern, spec.delta_floor)
                .expect("full diagonal");
            if !spec.lazy_bursts {
                return burst;
            }
            let sched = spec.schedule.as_ref().expect("validated");
            let w = sched.delta.powi(len as i32);
            let data = burst
                .as_slice()
                .iter()
                .enumerate()
                .map(|(k, &v)| w * v + if k / n == k % n { 1.0 - w } else { 0.0 })
                .collect();
            StochasticMatrix::normalized(n, data).expect("convex mixture of stochastic matrices")
        }
    }
}

/// Random row-stochastic matrix supported exactly on `pattern`, every
/// positive entry at least `floor`. Each row needs at least one set bit and
/// `floor * (row support) <= 1`.
pub fn random_stochastic<R: Rng + ?Sized>(
    rng: &mut R,
    pattern: &ZeroPattern,
    floor: f64,
) -> Result<StochasticMatrix> {
    let n = pattern.dim();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        let support: Vec<usize> = pattern.successors(i).collect();
        if support.is_empty() {
            return Err(Error::InfeasibleGenerator(format!(
                "row {i} has empty support"
            )));
        }
        let rest = 1.0 - floor * support.len() as f64;
        if rest < -1e-12 {
            return Err(Error::InfeasibleGenerator(format!(
                "row {i}: floor {floor} times support {} exceeds 1",
                support.len()
            )));
        }
        let rest = rest.max(0.0);
        let draws: Vec<f64> = support.iter().map(|_| rng.gen::<f64>()).collect();
        let total: f64 = draws.iter().sum();
        for (&j, &u) in support.iter().zip(&draws) {
            let share = if total > 0.0 {
                u / total
            } else {
                1.0 / support.len() as f64
            };
            data[i * n + j] = floor + rest * share;
        }
    }
    StochasticMatrix::new(n, data)
}

/// Random pattern: each bit set with probability `density`, the diagonal
/// forced on when `positive_diagonal` is true.
pub fn random_pattern<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    density: f64,
    positive_diagonal: bool,
) -> ZeroPattern {
    ZeroPattern::from_fn(n, |i, j| {
        (positive_diagonal && i == j) || rng.gen_bool(density)
    })
}
