//! Communication structure of a positive-diagonal pattern.
//!
//! Indices communicate when each reaches the other along positive entries.
//! With a positive diagonal every index communicates with itself, so
//! communication is an equivalence relation and the classes are the
//! strongly connected components of the pattern digraph. A class is
//! essential when no positive entry leaves it.
//!
//! Ordering essential classes first and then every inessential class after
//! all classes it reaches yields the block lower triangular Gantmacher form.

use std::ops::Range;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{StochasticMatrix, ZeroPattern};

/// Ordered partition of `0..n` into communicating classes.
///
/// Classes `0..essential_count` are essential, the rest inessential. If
/// class `J` reaches class `I != J` then `I` comes first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassPartition {
    classes: Vec<Vec<usize>>,
    essential_count: usize,
    #[serde(skip)]
    class_of: Vec<usize>,
}

impl ClassPartition {
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, k: usize) -> &[usize] {
        &self.classes[k]
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn essential_count(&self) -> usize {
        self.essential_count
    }

    pub fn dim(&self) -> usize {
        self.class_of.len()
    }

    pub fn essential_classes(&self) -> &[Vec<usize>] {
        &self.classes[..self.essential_count]
    }

    pub fn inessential_classes(&self) -> &[Vec<usize>] {
        &self.classes[self.essential_count..]
    }

    /// Union of all inessential classes, sorted.
    pub fn inessential_indices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .inessential_classes()
            .iter()
            .flatten()
            .copied()
            .collect();
        out.sort_unstable();
        out
    }

    pub fn class_of(&self, i: usize) -> Result<usize> {
        self.class_of.get(i).copied().ok_or(Error::IndexOutOfRange {
            index: i,
            n: self.dim(),
        })
    }

    pub fn is_essential_index(&self, i: usize) -> Result<bool> {
        Ok(self.class_of(i)? < self.essential_count)
    }
}

/// Partitions the indices of a positive-diagonal pattern into communicating
/// classes, essential classes first.
///
/// Essential classes are ordered by smallest member. Inessential classes
/// follow in the lexicographically smallest (by smallest member) order in
/// which every class comes after all classes it reaches.
pub fn communication_classes(p: &ZeroPattern) -> Result<ClassPartition> {
    let n = p.dim();
    if let Some(index) = (0..n).find(|&i| !p.get(i, i)) {
        return Err(Error::ZeroDiagonal { index });
    }

    let mut graph = DiGraph::<(), ()>::with_capacity(n, p.count());
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for i in 0..n {
        for j in p.successors(i).filter(|&j| j != i) {
            graph.add_edge(nodes[i], nodes[j], ());
        }
    }

    let mut comps: Vec<Vec<usize>> = tarjan_scc(&graph)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|ix| ix.index()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    comps.sort_unstable_by_key(|c| c[0]);

    let mut comp_of = vec![0; n];
    for (c, members) in comps.iter().enumerate() {
        for &i in members {
            comp_of[i] = c;
        }
    }

    // successor components in the condensation
    let succ: Vec<Vec<usize>> = comps
        .iter()
        .enumerate()
        .map(|(c, members)| {
            let mut s: Vec<usize> = members
                .iter()
                .flat_map(|&i| p.successors(i))
                .map(|j| comp_of[j])
                .filter(|&d| d != c)
                .collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();

    // comps is sorted by smallest member, so scanning in index order gives
    // the tie-break for free
    let mut order: Vec<usize> = (0..comps.len()).filter(|&c| succ[c].is_empty()).collect();
    let essential_count = order.len();
    let mut placed = vec![false; comps.len()];
    for &c in &order {
        placed[c] = true;
    }
    while order.len() < comps.len() {
        let next = (0..comps.len())
            .find(|&c| !placed[c] && succ[c].iter().all(|&d| placed[d]))
            .expect("condensation of a digraph is acyclic");
        placed[next] = true;
        order.push(next);
    }

    let classes: Vec<Vec<usize>> = order.iter().map(|&c| comps[c].clone()).collect();
    let mut class_of = vec![0; n];
    for (k, members) in classes.iter().enumerate() {
        for &i in members {
            class_of[i] = k;
        }
    }
    Ok(ClassPartition {
        classes,
        essential_count,
        class_of,
    })
}

/// Sign structure of a block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    Zero,
    Positive,
    Mixed,
}

/// A broken Gantmacher-form invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FormViolation {
    /// Block above the block diagonal is nonzero.
    UpperBlockNonzero { row_block: usize, col_block: usize },
    /// An essential class reaches another class.
    EssentialLeaks { class: usize },
    /// Diagonal block is not strongly connected.
    Reducible { class: usize },
    /// Inessential class with no positive block to its left.
    InessentialIsolated { class: usize },
    /// A diagonal block that is not all-positive.
    DiagonalNotPositive { class: usize },
    /// An off-diagonal block that is neither all-positive nor all-zero.
    MixedBlock { row_block: usize, col_block: usize },
}

/// Simultaneous row/column permutation exposing the block lower triangular
/// Gantmacher form, together with the class partition that induces it.
#[derive(Clone, Debug, Serialize)]
pub struct GantmacherForm {
    /// `permutation[r]` is the original index placed at position `r`.
    permutation: Vec<usize>,
    partition: ClassPartition,
    #[serde(skip)]
    pattern: ZeroPattern,
    #[serde(skip)]
    offsets: Vec<usize>,
}

impl GantmacherForm {
    pub fn from_pattern(p: &ZeroPattern) -> Result<Self> {
        let partition = communication_classes(p)?;
        let mut permutation = Vec::with_capacity(p.dim());
        let mut offsets = vec![0];
        for class in partition.classes() {
            permutation.extend_from_slice(class);
            offsets.push(permutation.len());
        }
        Ok(GantmacherForm {
            permutation,
            partition,
            pattern: p.clone(),
            offsets,
        })
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn partition(&self) -> &ClassPartition {
        &self.partition
    }

    pub fn pattern(&self) -> &ZeroPattern {
        &self.pattern
    }

    pub fn num_blocks(&self) -> usize {
        self.partition.num_classes()
    }

    pub fn essential_count(&self) -> usize {
        self.partition.essential_count()
    }

    /// Positions of block `k` in the permuted ordering.
    pub fn block_range(&self, k: usize) -> Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn permuted_pattern(&self) -> ZeroPattern {
        let perm = &self.permutation;
        ZeroPattern::from_fn(perm.len(), |r, c| self.pattern.get(perm[r], perm[c]))
    }

    pub fn permuted_matrix(&self, a: &StochasticMatrix) -> Result<StochasticMatrix> {
        a.permuted(&self.permutation)
    }

    /// Entries of block `(k, l)` of `a`, rows of class `k` against columns
    /// of class `l`.
    pub fn block_view(&self, a: &StochasticMatrix, k: usize, l: usize) -> Vec<Vec<f64>> {
        let rows = self.partition.class(k);
        let cols = self.partition.class(l);
        rows.iter()
            .map(|&i| cols.iter().map(|&j| a.get(i, j)).collect())
            .collect()
    }

    pub fn block_kind(&self, k: usize, l: usize) -> BlockKind {
        let rows = self.partition.class(k);
        let cols = self.partition.class(l);
        let total = rows.len() * cols.len();
        let set = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .filter(|&(i, j)| self.pattern.get(i, j))
            .count();
        match set {
            0 => BlockKind::Zero,
            s if s == total => BlockKind::Positive,
            _ => BlockKind::Mixed,
        }
    }

    /// Checks the structural invariants of the form: block lower triangular,
    /// essential classes closed, irreducible diagonal blocks, and every
    /// inessential row-block having a nonzero block to its left.
    pub fn violations(&self) -> Vec<FormViolation> {
        let p = self.num_blocks();
        let g = self.essential_count();
        let mut out = Vec::new();
        for k in 0..p {
            for l in (k + 1)..p {
                if self.block_kind(k, l) != BlockKind::Zero {
                    out.push(FormViolation::UpperBlockNonzero {
                        row_block: k,
                        col_block: l,
                    });
                }
            }
        }
        for k in 0..g {
            if (0..p).any(|l| l != k && self.block_kind(k, l) != BlockKind::Zero) {
                out.push(FormViolation::EssentialLeaks { class: k });
            }
        }
        for k in 0..p {
            if !self.block_strongly_connected(k) {
                out.push(FormViolation::Reducible { class: k });
            }
        }
        for k in g..p {
            if (0..k).all(|l| self.block_kind(k, l) == BlockKind::Zero) {
                out.push(FormViolation::InessentialIsolated { class: k });
            }
        }
        out
    }

    /// Violations of the saturated-segment dichotomy: diagonal blocks all
    /// positive, off-diagonal blocks all positive or all zero.
    pub fn dichotomy_violations(&self) -> Vec<FormViolation> {
        let p = self.num_blocks();
        let mut out = Vec::new();
        for k in 0..p {
            if self.block_kind(k, k) != BlockKind::Positive {
                out.push(FormViolation::DiagonalNotPositive { class: k });
            }
            for l in (0..p).filter(|&l| l != k) {
                if self.block_kind(k, l) == BlockKind::Mixed {
                    out.push(FormViolation::MixedBlock {
                        row_block: k,
                        col_block: l,
                    });
                }
            }
        }
        out
    }

    fn block_strongly_connected(&self, k: usize) -> bool {
        let members = self.partition.class(k);
        let reach_all = |start: usize, forward: bool| {
            let mut seen = vec![start];
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &v in members {
                    let edge = if forward {
                        self.pattern.get(u, v)
                    } else {
                        self.pattern.get(v, u)
                    };
                    if edge && !seen.contains(&v) {
                        seen.push(v);
                        stack.push(v);
                    }
                }
            }
            seen.len() == members.len()
        };
        reach_all(members[0], true) && reach_all(members[0], false)
    }
}

/// Gantmacher form of a positive-diagonal matrix.
pub fn gantmacher_form(a: &StochasticMatrix) -> Result<GantmacherForm> {
    a.require_positive_diagonal()?;
    GantmacherForm::from_pattern(&ZeroPattern::of(a))
}

/// Whether the pattern of `a` equals the pattern of its transpose.
pub fn is_type_symmetric(a: &StochasticMatrix) -> bool {
    ZeroPattern::of(a).is_symmetric()
}
