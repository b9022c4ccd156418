//! Shortness of a graded component `I^(D)`: the fewest terms of a nonzero
//! element.
//!
//! An element of `I^(D)` is a vector `v` in the row space `R` of the
//! coefficient matrix `B`. With `K` a basis of the right kernel of `B`
//! (restricted to the non-loop columns), `v ∈ R` iff `vK = 0`. Hence a
//! nonzero element supported on a column set `T` exists iff the rows of `K`
//! indexed by `T` are linearly dependent, and the dependency coefficients are
//! the element itself. Candidate supports are enumerated in colex order with
//! an incremental echelon basis, so every enumeration step costs one
//! insertion (one "rank test").

use std::sync::atomic::{AtomicUsize, Ordering};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::field::Field;
use crate::linalg::{EchelonBasis, Insertion, Matrix};
use crate::matroid::{ColumnMatroid, DEFAULT_MATROID_LIMIT};
use crate::pforms::CoefficientMatrix;
use crate::poly::{GeneratorSystem, Polynomial};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Non-loop count up to which the hyperplane cross-check is run.
pub const HYPERPLANE_CHECK_LIMIT: usize = 12;

/// Top elements handed to the worker pool at once.
const CHUNK: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShortnessError {
    #[error("the graded component is zero")]
    ZeroComponent,
    #[error("s must be at least 1")]
    InvalidTermCount,
    #[error("budget of {budget} rank tests exhausted; no element with at most {no_element_with_at_most} terms so far")]
    BudgetExceeded { budget: u64, no_element_with_at_most: usize },
}

#[derive(Clone, Debug)]
pub struct ShortnessOptions {
    /// Maximum number of rank tests in the exhaustive phase.
    pub budget: u64,
    /// Largest term count searched for; `None` searches until found.
    pub max_terms: Option<usize>,
    /// Seed of the randomized upper-bound phase.
    pub seed: u64,
    /// Random column orders tried before the exhaustive phase; 0 disables it.
    pub random_trials: usize,
    pub parallel: bool,
}

impl Default for ShortnessOptions {
    fn default() -> Self {
        ShortnessOptions { budget: DEFAULT_BUDGET, max_terms: None, seed: 0, random_trials: 16, parallel: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShortnessStatus {
    Exact(usize),
    /// No nonzero element with at most `no_element_with_at_most` terms.
    LowerBound { no_element_with_at_most: usize, budget_exhausted: bool },
    ZeroComponent,
}

/// A nonzero element of the component together with cofactors producing it.
#[derive(Clone, PartialEq, Eq)]
pub struct Witness<F> {
    pub polynomial: Polynomial<F>,
    pub cofactors: Vec<Polynomial<F>>,
}

impl<F: Field> std::fmt::Debug for Witness<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Witness").field("polynomial", &self.polynomial).field("cofactors", &self.cofactors).finish()
    }
}

impl<F: Field> Witness<F> {
    pub fn verify(&self, system: &GeneratorSystem<F>) -> bool {
        !self.polynomial.is_zero() && system.combine(&self.cofactors) == self.polynomial
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// `|M_D| + 1 - dim I^(D)`.
    pub dim_bound: usize,
    /// Minimum number of forms a y-variable occurs in; equals the fewest
    /// terms of a generator reaching degree `D`.
    pub occurrence_bound: usize,
    /// `|M_D| - max hyperplane size`, for small matroids.
    pub hyperplane_shortness: Option<usize>,
}

#[derive(Clone)]
pub struct ShortnessReport<F> {
    pub field: String,
    pub degree: u32,
    pub num_monomials: usize,
    pub num_loops: usize,
    pub component_dim: usize,
    pub status: ShortnessStatus,
    pub witness: Option<Witness<F>>,
    /// Fewest terms seen by the randomized phase; not a certificate.
    pub upper_bound: Option<usize>,
    pub bounds: Option<Bounds>,
    pub rank_tests: u64,
}

impl<F: Field> ShortnessReport<F> {
    /// Results over a prime field only certify that no shorter element exists
    /// modulo `p`; over the rationals they are exact.
    pub fn is_candidate(&self) -> bool {
        F::characteristic() != 0
    }

    pub fn to_json(&self, system: &GeneratorSystem<F>) -> ShortnessJson {
        let (status, s, budget_exhausted) = match self.status {
            ShortnessStatus::Exact(s) => ("exact", Some(s), false),
            ShortnessStatus::LowerBound { no_element_with_at_most, budget_exhausted } => {
                ("lower_bound", Some(no_element_with_at_most), budget_exhausted)
            }
            ShortnessStatus::ZeroComponent => ("zero_component", None, false),
        };
        ShortnessJson {
            field: self.field.clone(),
            candidate: self.is_candidate(),
            degree: self.degree,
            num_monomials: self.num_monomials,
            num_loops: self.num_loops,
            component_dim: self.component_dim,
            status: status.to_string(),
            shortness: matches!(self.status, ShortnessStatus::Exact(_)).then_some(s).flatten(),
            no_element_with_at_most: match self.status {
                ShortnessStatus::LowerBound { .. } => s,
                _ => None,
            },
            budget_exhausted,
            witness: self.witness.as_ref().map(|w| WitnessJson {
                polynomial: w.polynomial.to_string(),
                terms: w.polynomial.num_terms(),
                cofactors: w.cofactors.iter().map(|g| g.to_string()).collect(),
                verified: w.verify(system),
            }),
            upper_bound: self.upper_bound,
            bounds: self.bounds.clone(),
            rank_tests: self.rank_tests,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ShortnessJson {
    pub field: String,
    pub candidate: bool,
    pub degree: u32,
    pub num_monomials: usize,
    pub num_loops: usize,
    pub component_dim: usize,
    /// `exact`, `lower_bound` or `zero_component`.
    pub status: String,
    pub shortness: Option<usize>,
    pub no_element_with_at_most: Option<usize>,
    pub budget_exhausted: bool,
    pub witness: Option<WitnessJson>,
    pub upper_bound: Option<usize>,
    pub bounds: Option<Bounds>,
    pub rank_tests: u64,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WitnessJson {
    pub polynomial: String,
    pub terms: usize,
    pub cofactors: Vec<String>,
    pub verified: bool,
}

/// The dual representation used by the search: one kernel row per non-loop
/// column.
struct Dual<F> {
    cm: CoefficientMatrix<F>,
    non_loops: Vec<usize>,
    /// `rows[j]` is row `j` of the kernel basis matrix.
    rows: Vec<Vec<F>>,
    kernel_dim: usize,
    rank: usize,
}

impl<F: Field> Dual<F> {
    fn new(system: &GeneratorSystem<F>, degree: u32) -> Self {
        let cm = CoefficientMatrix::new(system, degree);
        let non_loops: Vec<usize> = (0..cm.columns.len()).filter(|&c| !cm.matrix.is_zero_column(c)).collect();
        let restricted = cm.matrix.select_columns(&non_loops);
        let kernel = restricted.right_kernel_basis();
        let rows = (0..non_loops.len()).map(|j| kernel.iter().map(|k| k[j].clone()).collect()).collect();
        let rank = non_loops.len() - kernel.len();
        Dual { kernel_dim: kernel.len(), cm, non_loops, rows, rank }
    }

    /// Turns a dependency among kernel rows into a normalized witness.
    fn witness(&self, system: &GeneratorSystem<F>, support: &[usize], coeffs: &[F]) -> Witness<F> {
        let mut values = vec![F::zero(); self.cm.columns.len()];
        for (&j, c) in support.iter().zip(coeffs) {
            values[self.non_loops[j]] = c.clone();
        }
        self.witness_from_values(system, values)
    }

    fn witness_from_values(&self, system: &GeneratorSystem<F>, values: Vec<F>) -> Witness<F> {
        let poly = self.cm.polynomial(&values);
        let lead = poly.terms().next().map(|(_, c)| c.clone()).expect("nonzero witness");
        let scale = lead.inverse().expect("nonzero");
        let values: Vec<F> = values.into_iter().map(|v| v * scale.clone()).collect();
        let coords = self.cm.matrix.solve_left(&values).expect("witness lies in the row space");
        Witness { polynomial: self.cm.polynomial(&values), cofactors: self.cm.cofactors(system, &coords) }
    }
}

/// Outcome of searching all `s`-subsets whose largest element is `top`.
#[derive(Clone, Debug)]
struct Subtree<F> {
    cost: u64,
    /// `None` when the cap was hit before finishing.
    result: Option<Option<(Vec<usize>, Vec<F>)>>,
}

fn search_subtree<F: Field>(rows: &[Vec<F>], dim: usize, top: usize, size: usize, cap: u64) -> Subtree<F> {
    let mut basis = EchelonBasis::new(dim, true);
    let mut chosen = Vec::with_capacity(size);
    let mut cost = 0;
    let result = descend(rows, &mut basis, &mut chosen, top + 1, size, cap, &mut cost);
    Subtree { cost, result }
}

/// Depth-first extension of `chosen` by indices below `bound`, largest first
/// so that supports come out in colex order. Returns `None` on hitting the
/// cap, `Some(None)` if the subtree holds no dependency.
fn descend<F: Field>(
    rows: &[Vec<F>],
    basis: &mut EchelonBasis<F>,
    chosen: &mut Vec<usize>,
    bound: usize,
    size: usize,
    cap: u64,
    cost: &mut u64,
) -> Option<Option<(Vec<usize>, Vec<F>)>> {
    let remaining = size - chosen.len();
    // The top element is fixed; lower positions take values in colex order.
    let candidates: Box<dyn Iterator<Item = usize>> = if chosen.is_empty() {
        Box::new(std::iter::once(bound - 1))
    } else {
        Box::new(remaining - 1..bound)
    };
    for j in candidates {
        if *cost >= cap {
            return None;
        }
        *cost += 1;
        let before = basis.rank();
        match basis.insert(&rows[j]) {
            Insertion::Dependent(coeffs) => {
                let mut support = chosen.clone();
                support.push(j);
                let mut pairs: Vec<(usize, F)> = support.into_iter().zip(coeffs).collect();
                pairs.sort_by_key(|(k, _)| *k);
                return Some(Some(pairs.into_iter().filter(|(_, c)| !c.is_zero()).unzip()));
            }
            Insertion::Independent => {
                if remaining > 1 {
                    chosen.push(j);
                    let found = descend(rows, basis, chosen, j, size, cap, cost);
                    chosen.pop();
                    match found {
                        Some(None) => {}
                        other => return other,
                    }
                }
                basis.truncate(before);
            }
        }
    }
    Some(None)
}

/// Result of scanning all supports of one size.
enum Scan<F> {
    Found(Vec<usize>, Vec<F>),
    None,
    Exhausted,
}

/// Scans all `size`-subsets of kernel rows in colex order. The outcome is the
/// same as a sequential scan with the same budget, whatever the scheduling.
fn scan_level<F: Field>(dual: &Dual<F>, size: usize, budget: u64, used: &mut u64, parallel: bool) -> Scan<F> {
    let n = dual.rows.len();
    if size == 0 || size > n {
        return Scan::None;
    }
    let tops: Vec<usize> = (size - 1..n).collect();
    for chunk in tops.chunks(CHUNK) {
        let cap = budget.saturating_sub(*used);
        // Smallest top with a witness so far; larger tops are not needed.
        let found = AtomicUsize::new(usize::MAX);
        let run = |&top: &usize| {
            if top > found.load(Ordering::Relaxed) {
                return None;
            }
            let sub = search_subtree(&dual.rows, dual.kernel_dim, top, size, cap);
            if matches!(sub.result, Some(Some(_))) {
                found.fetch_min(top, Ordering::Relaxed);
            }
            Some(sub)
        };
        let results: Vec<Option<Subtree<F>>> =
            if parallel && chunk.len() > 1 { chunk.par_iter().map(run).collect() } else { chunk.iter().map(run).collect() };
        // Replay in order: a subtree skipped after an earlier find is never
        // reached, and one that needed more than the sequential cap exhausts it.
        for sub in results {
            let Some(sub) = sub else { unreachable!("skipped only after an earlier witness") };
            let cap = budget.saturating_sub(*used);
            if sub.result.is_none() || sub.cost > cap {
                *used = budget;
                return Scan::Exhausted;
            }
            *used += sub.cost;
            if let Some(Some((support, coeffs))) = sub.result {
                return Scan::Found(support, coeffs);
            }
        }
    }
    Scan::None
}

/// Sparsest row found after row-reducing the component under random column
/// orders.
fn random_upper_bound<F: Field>(dual: &Dual<F>, trials: usize, seed: u64) -> Option<Vec<F>> {
    if trials == 0 || dual.rank == 0 {
        return None;
    }
    let restricted = dual.cm.matrix.select_columns(&dual.non_loops);
    let echelon = restricted.rref();
    let basis_rows: Vec<Vec<F>> = (0..echelon.pivots.len()).map(|r| echelon.matrix.row(r).to_vec()).collect();
    let basis = Matrix::from_rows(dual.non_loops.len(), basis_rows);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..dual.non_loops.len()).collect();
    let mut best: Option<Vec<F>> = None;
    let weight = |v: &[F]| v.iter().filter(|x| !x.is_zero()).count();
    for trial in 0..trials {
        if trial > 0 {
            order.shuffle(&mut rng);
        }
        let reduced = basis.select_columns(&order).rref();
        for r in 0..reduced.pivots.len() {
            let row = reduced.matrix.row(r);
            if best.as_ref().is_none_or(|b| weight(row) < weight(b)) {
                let mut v = vec![F::zero(); order.len()];
                for (k, &c) in order.iter().enumerate() {
                    v[c] = row[k].clone();
                }
                best = Some(v);
            }
        }
    }
    best.map(|v| {
        let mut full = vec![F::zero(); dual.cm.columns.len()];
        for (j, x) in v.into_iter().enumerate() {
            full[dual.non_loops[j]] = x;
        }
        full
    })
}

/// `|M_D| + 1 - dim I^(D)`.
pub fn dim_bound<F: Field>(system: &GeneratorSystem<F>, degree: u32) -> Result<usize, ShortnessError> {
    let cm = CoefficientMatrix::new(system, degree);
    match cm.rank() {
        0 => Err(ShortnessError::ZeroComponent),
        k => Ok(cm.columns.len() + 1 - k),
    }
}

/// Minimum over y-variables of the number of forms `p_α` containing it.
pub fn occurrence_bound<F: Field>(system: &GeneratorSystem<F>, degree: u32) -> Result<usize, ShortnessError> {
    let cm = CoefficientMatrix::new(system, degree);
    (0..cm.rows.len())
        .map(|r| cm.matrix.row(r).iter().filter(|x| !x.is_zero()).count())
        .filter(|&n| n > 0)
        .min()
        .ok_or(ShortnessError::ZeroComponent)
}

/// Whether `I^(D)` has a nonzero element with at most `s` terms. The witness
/// is the first dependency met while enumerating `s`-supports in colex order.
pub fn exists_s_short<F: Field>(
    system: &GeneratorSystem<F>,
    degree: u32,
    s: usize,
    budget: u64,
) -> Result<Option<Witness<F>>, ShortnessError> {
    if s == 0 {
        return Err(ShortnessError::InvalidTermCount);
    }
    let dual = Dual::new(system, degree);
    if dual.rank == 0 {
        return Ok(None);
    }
    let size = s.min(dual.rows.len());
    let mut used = 0;
    match scan_level(&dual, size, budget, &mut used, true) {
        Scan::Found(support, coeffs) => Ok(Some(dual.witness(system, &support, &coeffs))),
        Scan::None => Ok(None),
        Scan::Exhausted => Err(ShortnessError::BudgetExceeded { budget, no_element_with_at_most: 0 }),
    }
}

/// Exact shortness of `I^(D)` with a certificate, or the best lower bound the
/// budget allows.
pub fn shortness<F: Field>(system: &GeneratorSystem<F>, degree: u32, options: &ShortnessOptions) -> ShortnessReport<F> {
    let dual = Dual::new(system, degree);
    let num_monomials = dual.cm.columns.len();
    let mut report = ShortnessReport {
        field: F::name(),
        degree,
        num_monomials,
        num_loops: num_monomials - dual.non_loops.len(),
        component_dim: dual.rank,
        status: ShortnessStatus::ZeroComponent,
        witness: None,
        upper_bound: None,
        bounds: None,
        rank_tests: 0,
    };
    if dual.rank == 0 {
        return report;
    }

    let occurrence = (0..dual.cm.rows.len())
        .map(|r| dual.cm.matrix.row(r).iter().filter(|x| !x.is_zero()).count())
        .filter(|&n| n > 0)
        .min()
        .expect("nonzero component");
    let hyperplane_shortness = (dual.non_loops.len() <= HYPERPLANE_CHECK_LIMIT).then(|| {
        ColumnMatroid::new(&dual.cm).shortness_via_hyperplanes(DEFAULT_MATROID_LIMIT).expect("small nonzero matroid")
    });
    report.bounds = Some(Bounds {
        dim_bound: num_monomials + 1 - dual.rank,
        occurrence_bound: occurrence,
        hyperplane_shortness,
    });

    let random = random_upper_bound(&dual, options.random_trials, options.seed);
    let random_weight = random.as_ref().map(|v| v.iter().filter(|x| !x.is_zero()).count());
    report.upper_bound = random_weight;

    // Any kernel_dim + 1 rows are dependent, so the loop always terminates.
    let ceiling = dual.kernel_dim + 1;
    let limit = options.max_terms.unwrap_or(usize::MAX).min(ceiling);
    let mut used = 0;
    for size in 1..=limit {
        if random_weight == Some(size) {
            // Everything smaller is refuted; the random row is optimal.
            report.status = ShortnessStatus::Exact(size);
            report.witness = random.map(|v| dual.witness_from_values(system, v));
            report.rank_tests = used;
            return report;
        }
        match scan_level(&dual, size, options.budget, &mut used, options.parallel) {
            Scan::Found(support, coeffs) => {
                report.status = ShortnessStatus::Exact(size);
                report.witness = Some(dual.witness(system, &support, &coeffs));
                report.rank_tests = used;
                return report;
            }
            Scan::None => {}
            Scan::Exhausted => {
                report.status = ShortnessStatus::LowerBound { no_element_with_at_most: size - 1, budget_exhausted: true };
                report.rank_tests = used;
                return report;
            }
        }
    }
    report.status = ShortnessStatus::LowerBound { no_element_with_at_most: limit, budget_exhausted: false };
    report.rank_tests = used;
    report
}
