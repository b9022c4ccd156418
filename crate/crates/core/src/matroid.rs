//! The column matroid of the coefficient matrix: element `α` is represented
//! by the column of `p_α`. Enumeration is brute force over subsets of the
//! non-loop elements with a full rank table.
//!
//! Labels are 1-based positions in the monomial basis order.

use serde::Serialize;
use thiserror::Error;

use crate::field::Field;
use crate::linalg::{EchelonBasis, Insertion, Matrix};
use crate::pforms::CoefficientMatrix;
use crate::poly::{Exponent, Shape};

/// Largest number of non-loop elements enumerated by default.
pub const DEFAULT_MATROID_LIMIT: usize = 16;

/// Hard ceiling on the enumeration size; the rank table has `2^n` entries.
const MAX_MATROID_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("{found} non-loop elements exceed the enumeration limit {limit}")]
    SizeLimit { found: usize, limit: usize },
    #[error("the matroid has rank 0 (zero component)")]
    RankZero,
    #[error("label {0} is not in the ground set")]
    BadLabel(usize),
}

#[derive(Clone, Debug)]
pub struct ColumnMatroid<F> {
    shape: Option<Shape>,
    labels: Vec<Exponent>,
    columns: Vec<Vec<F>>,
    non_loops: Vec<usize>,
    rank: usize,
}

impl<F: Field> ColumnMatroid<F> {
    pub fn new(cm: &CoefficientMatrix<F>) -> Self {
        let mut matroid = Self::from_matrix(&cm.matrix);
        matroid.shape = Some(cm.shape);
        matroid.labels = cm.columns.clone();
        matroid
    }

    /// Matroid of the columns of an arbitrary matrix, without exponent labels.
    pub fn from_matrix(matrix: &Matrix<F>) -> Self {
        let columns: Vec<Vec<F>> = (0..matrix.ncols()).map(|c| matrix.column(c)).collect();
        let non_loops = (0..columns.len()).filter(|&c| !matrix.is_zero_column(c)).collect();
        ColumnMatroid { shape: None, labels: Vec::new(), columns, non_loops, rank: matrix.rank() }
    }

    pub fn ground_size(&self) -> usize {
        self.columns.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Exponent behind each element, when built from a coefficient matrix.
    pub fn labels(&self) -> &[Exponent] {
        &self.labels
    }

    /// 0-based indices of the zero columns.
    pub fn loops(&self) -> Vec<usize> {
        (0..self.columns.len()).filter(|c| self.non_loops.binary_search(c).is_err()).collect()
    }

    pub fn non_loops(&self) -> &[usize] {
        &self.non_loops
    }

    /// Rank of a set of 0-based element indices.
    pub fn subset_rank(&self, subset: &[usize]) -> Result<usize, MatroidError> {
        let dim = self.columns.first().map_or(0, Vec::len);
        let mut basis = EchelonBasis::new(dim, false);
        for &e in subset {
            let column = self.columns.get(e).ok_or(MatroidError::BadLabel(e + 1))?;
            basis.insert(column);
        }
        Ok(basis.rank())
    }

    /// Bases, circuits and hyperplanes, all as sorted lists of sorted 0-based
    /// index sets.
    pub fn analyze(&self, limit: usize) -> Result<MatroidAnalysis, MatroidError> {
        let n = self.non_loops.len();
        let limit = limit.min(MAX_MATROID_LIMIT);
        if n > limit {
            return Err(MatroidError::SizeLimit { found: n, limit });
        }
        let ranks = self.rank_table();
        let full = (1usize << n) - 1;
        let k = self.rank;
        let loops = self.loops();
        let members = |mask: usize| -> Vec<usize> {
            (0..n).filter(|b| mask >> b & 1 == 1).map(|b| self.non_loops[b]).collect()
        };

        let mut bases = Vec::new();
        let mut circuits: Vec<Vec<usize>> = loops.iter().map(|&l| vec![l]).collect();
        let mut hyperplanes = Vec::new();
        for mask in 0..=full {
            let size = mask.count_ones() as usize;
            let r = ranks[mask] as usize;
            if size == k && r == k {
                bases.push(members(mask));
            }
            if r + 1 == size && (0..n).filter(|b| mask >> b & 1 == 1).all(|b| ranks[mask & !(1 << b)] as usize == r) {
                circuits.push(members(mask));
            }
            if k > 0 && r + 1 == k && (0..n).filter(|b| mask >> b & 1 == 0).all(|b| ranks[mask | 1 << b] as usize > r) {
                let mut h = members(mask);
                h.extend(&loops);
                h.sort_unstable();
                hyperplanes.push(h);
            }
        }
        bases.sort();
        circuits.sort();
        hyperplanes.sort();
        Ok(MatroidAnalysis { ground_size: self.ground_size(), rank: k, loops, bases, circuits, hyperplanes })
    }

    /// `|ground| - max hyperplane size`: the smallest support of a nonzero
    /// vector in the row space.
    pub fn shortness_via_hyperplanes(&self, limit: usize) -> Result<usize, MatroidError> {
        if self.rank == 0 {
            return Err(MatroidError::RankZero);
        }
        let analysis = self.analyze(limit)?;
        let largest = analysis.hyperplanes.iter().map(Vec::len).max().expect("rank >= 1 has a hyperplane");
        Ok(self.ground_size() - largest)
    }

    /// Rank of every subset of the non-loop elements, indexed by bitmask.
    fn rank_table(&self) -> Vec<u8> {
        let n = self.non_loops.len();
        let dim = self.columns.first().map_or(0, Vec::len);
        let mut ranks = vec![0u8; 1 << n];
        let mut basis = EchelonBasis::new(dim, false);
        self.fill_ranks(0, 0, &mut basis, &mut ranks);
        ranks
    }

    fn fill_ranks(&self, mask: usize, start: usize, basis: &mut EchelonBasis<F>, ranks: &mut [u8]) {
        ranks[mask] = basis.rank() as u8;
        for b in start..self.non_loops.len() {
            let before = basis.rank();
            let added = matches!(basis.insert(&self.columns[self.non_loops[b]]), Insertion::Independent);
            self.fill_ranks(mask | 1 << b, b + 1, basis, ranks);
            if added {
                basis.truncate(before);
            }
        }
    }

    pub fn report(&self, limit: usize) -> Result<MatroidReport, MatroidError> {
        let analysis = self.analyze(limit)?;
        let shortness = analysis.shortness();
        let label = |set: &Vec<usize>| set.iter().map(|e| e + 1).collect::<Vec<_>>();
        let ground = match self.shape {
            Some(shape) => self.labels.iter().map(|e| shape.format_exponent(e)).collect(),
            None => (1..=self.ground_size()).map(|l| l.to_string()).collect(),
        };
        Ok(MatroidReport {
            ground,
            rank: analysis.rank,
            loops: analysis.loops.iter().map(|e| e + 1).collect(),
            bases: analysis.bases.iter().map(label).collect(),
            circuits: analysis.circuits.iter().map(label).collect(),
            hyperplanes: analysis.hyperplanes.iter().map(label).collect(),
            shortness,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatroidAnalysis {
    pub ground_size: usize,
    pub rank: usize,
    pub loops: Vec<usize>,
    pub bases: Vec<Vec<usize>>,
    pub circuits: Vec<Vec<usize>>,
    pub hyperplanes: Vec<Vec<usize>>,
}

impl MatroidAnalysis {
    /// `None` for a rank-0 matroid.
    pub fn shortness(&self) -> Option<usize> {
        self.hyperplanes.iter().map(Vec::len).max().map(|h| self.ground_size - h)
    }
}

/// JSON report; every set is given by 1-based labels.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MatroidReport {
    /// Exponent of each label, in label order.
    pub ground: Vec<String>,
    pub rank: usize,
    pub loops: Vec<usize>,
    pub bases: Vec<Vec<usize>>,
    pub circuits: Vec<Vec<usize>>,
    pub hyperplanes: Vec<Vec<usize>>,
    pub shortness: Option<usize>,
}

/// Compact rendering of a 1-based label set: `134`, or `1,10,12` once a
/// label has two digits.
pub fn format_label_set(labels: &[usize]) -> String {
    if labels.iter().all(|&l| l < 10) {
        labels.iter().map(|l| l.to_string()).collect()
    } else {
        labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
    }
}
