//! On-disk formats: sequence files (JSON) and process traces (CSV).
//!
//! A sequence file holds either stored matrices or a generator spec:
//!
//! ```json
//! { "n": 2, "matrices": [ [[0.5, 0.5], [0.25, 0.75]], [[1, 0], [0, 1]] ] }
//! { "generator": { "kind": "random_positive_diagonal", "n": 4, "seed": 1 }, "horizon": 300 }
//! ```
//!
//! Floats are written in shortest round-trip form, so a write-then-read
//! reproduces every matrix bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::accumulation::MatrixSequence;
use crate::error::{Error, Result};
use crate::generators::GeneratorSpec;
use crate::matrix::StochasticMatrix;

#[derive(Clone, Debug, PartialEq)]
pub enum SequenceFile {
    Stored(Vec<StochasticMatrix>),
    Generator {
        spec: GeneratorSpec,
        horizon: Option<usize>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSequenceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrices: Option<Vec<StochasticMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    horizon: Option<usize>,
}

impl SequenceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSequenceFile = serde_json::from_str(text)?;
        match (raw.n, raw.matrices, raw.generator) {
            (Some(n), Some(matrices), None) => {
                if matrices.is_empty() {
                    return Err(Error::ZeroHorizon);
                }
                if let Some(bad) = matrices.iter().find(|m| m.dim() != n) {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: bad.dim(),
                    });
                }
                Ok(SequenceFile::Stored(matrices))
            }
            (None, None, Some(spec)) => {
                spec.validate()?;
                Ok(SequenceFile::Generator {
                    spec,
                    horizon: raw.horizon,
                })
            }
            _ => Err(Error::Json(serde::de::Error::custom(
                "expected either {\"n\", \"matrices\"} or {\"generator\"}",
            ))),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        let raw = match self {
            SequenceFile::Stored(ms) => RawSequenceFile {
                n: ms.first().map(StochasticMatrix::dim),
                matrices: Some(ms.clone()),
                generator: None,
                horizon: None,
            },
            SequenceFile::Generator { spec, horizon } => RawSequenceFile {
                n: None,
                matrices: None,
                generator: Some(spec.clone()),
                horizon: *horizon,
            },
        };
        Ok(serde_json::to_string_pretty(&raw)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    /// Overrides the generator seed; no effect on stored matrices.
    pub fn reseed(&mut self, seed: u64) {
        if let SequenceFile::Generator { spec, .. } = self {
            spec.seed = seed;
        }
    }

    /// Builds the sequence. A requested `horizon` truncates stored matrices
    /// and overrides a generator file's horizon; generators default to
    /// `default_horizon`.
    pub fn into_sequence(
        self,
        horizon: Option<usize>,
        default_horizon: usize,
    ) -> Result<MatrixSequence> {
        match self {
            SequenceFile::Stored(ms) => {
                let seq = MatrixSequence::from_matrices(ms)?;
                match horizon {
                    Some(h) => seq.with_horizon(h),
                    None => Ok(seq),
                }
            }
            SequenceFile::Generator {
                spec,
                horizon: file_h,
            } => {
                MatrixSequence::from_generator(spec, horizon.or(file_h).unwrap_or(default_horizon))
            }
        }
    }
}

/// CSV with a `t` column followed by `v_1..v_n`.
pub fn trace_csv<'a>(rows: impl Iterator<Item = (usize, &'a [f64])>, n: usize) -> String {
    let mut out = String::from("t");
    for i in 1..=n {
        let _ = write!(out, ",v_{i}");
    }
    out.push('\n');
    for (t, v) in rows {
        let _ = write!(out, "{t}");
        for x in v {
            let _ = write!(out, ",{x:?}");
        }
        out.push('\n');
    }
    out
}
