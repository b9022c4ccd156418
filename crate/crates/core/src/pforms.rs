//! Linear forms `p_α` and the coefficient matrix of the multiplication map
//! `(g_1, ..., g_r) ↦ Σ g_i f_i` onto a graded component.
//!
//! For a target degree `D` the cofactor space has one coordinate `y_{i,γ}`
//! per generator `i` and exponent `γ` of degree `D - deg f_i`. The form
//! `p_α` reads off the coefficient of `x^α` in `Σ g_i f_i`:
//!
//! ```text
//! p_α = Σ_i Σ_{β + γ = α} f_{i,β} y_{i,γ}
//! ```

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::field::Field;
use crate::linalg::Matrix;
use crate::poly::{monomial_basis, Exponent, GeneratorSystem, Polynomial, Shape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PFormError {
    #[error("cofactor {index} has degree {found}, expected {expected}")]
    DegreeMismatch { index: usize, expected: i64, found: u32 },
    #[error("expected {expected} cofactors, got {found}")]
    CofactorCount { expected: usize, found: usize },
}

/// Coordinate `y_{i,γ}` of the cofactor space. `gen` is 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct YVar {
    pub gen: usize,
    pub gamma: Exponent,
}

impl Ord for YVar {
    /// Generator first, then `γ` in basis order (largest monomial first).
    fn cmp(&self, other: &Self) -> Ordering {
        self.gen.cmp(&other.gen).then_with(|| other.gamma.cmp(&self.gamma))
    }
}

impl PartialOrd for YVar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The linear form `p_α` as a sparse map from y-variables to coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PForm<F> {
    pub alpha: Exponent,
    pub terms: BTreeMap<YVar, F>,
}

impl<F: Field> PForm<F> {
    pub fn zero(alpha: Exponent) -> Self {
        PForm { alpha, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, var: YVar, coeff: F) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&var) {
            Some(old) => {
                let sum = old + coeff;
                if !sum.is_zero() {
                    self.terms.insert(var, sum);
                }
            }
            None => {
                self.terms.insert(var, coeff);
            }
        }
    }

    /// `p_α(g_1, ..., g_r)`: the coefficient of `x^α` in `Σ g_i f_i`.
    ///
    /// Each nonzero `g_i` must be homogeneous of degree `|α| - deg f_i`.
    pub fn evaluate(&self, system: &GeneratorSystem<F>, cofactors: &[Polynomial<F>]) -> Result<F, PFormError> {
        check_cofactors(system, self.alpha.degree(), cofactors)?;
        Ok(self
            .terms
            .iter()
            .fold(F::zero(), |acc, (y, c)| acc + c.clone() * cofactors[y.gen].coeff(&y.gamma)))
    }

    pub fn to_json(&self) -> PFormJson {
        PFormJson {
            alpha: self.alpha.entries().to_vec(),
            terms: self
                .terms
                .iter()
                .map(|(y, c)| PFormTermJson {
                    gen: y.gen + 1,
                    gamma: y.gamma.entries().to_vec(),
                    coeff: c.to_fraction_string(),
                })
                .collect(),
        }
    }

    /// Human readable rendering, e.g. `y[1](2,0) + y[1](1,1)`.
    pub fn display(&self, shape: Shape) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (y, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative_display();
            let magnitude = if negative { -c.clone() } else { c.clone() };
            out.push_str(match (k, negative) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            if !magnitude.is_one() {
                out.push_str(&format!("{magnitude}*"));
            }
            out.push_str(&format!("y[{}]{}", y.gen + 1, shape.format_exponent(&y.gamma)));
        }
        out
    }
}

fn check_cofactors<F: Field>(
    system: &GeneratorSystem<F>,
    target: u32,
    cofactors: &[Polynomial<F>],
) -> Result<(), PFormError> {
    if cofactors.len() != system.len() {
        return Err(PFormError::CofactorCount { expected: system.len(), found: cofactors.len() });
    }
    for (i, (g, &deg)) in cofactors.iter().zip(system.degrees()).enumerate() {
        if g.is_zero() {
            continue;
        }
        let expected = target as i64 - deg as i64;
        match g.homogeneous_degree() {
            Some(d) if d as i64 == expected => {}
            other => {
                let found = other.unwrap_or_else(|| g.terms().map(|(e, _)| e.degree()).max().unwrap_or(0));
                return Err(PFormError::DegreeMismatch { index: i + 1, expected, found });
            }
        }
    }
    Ok(())
}

/// JSON form of a p-form: `{"alpha": [..], "terms": [{"gen": i, "gamma": [..], "coeff": "num/den"}]}`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PFormJson {
    pub alpha: Vec<u32>,
    pub terms: Vec<PFormTermJson>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PFormTermJson {
    /// 1-based generator index.
    pub gen: usize,
    pub gamma: Vec<u32>,
    pub coeff: String,
}

/// The y-variables of degree `degree`, in row order.
pub fn y_variables<F: Field>(system: &GeneratorSystem<F>, degree: u32) -> Vec<YVar> {
    let mut rows = Vec::new();
    for (gen, &d) in system.degrees().iter().enumerate() {
        if d > degree {
            continue;
        }
        for gamma in monomial_basis(system.shape(), degree - d) {
            rows.push(YVar { gen, gamma });
        }
    }
    rows
}

/// All forms `p_α` for `α` in the monomial basis of degree `degree`, in basis
/// order. Zero forms are included.
pub fn build_pforms<F: Field>(system: &GeneratorSystem<F>, degree: u32) -> Vec<PForm<F>> {
    monomial_basis(system.shape(), degree)
        .into_iter()
        .map(|alpha| {
            let mut form = PForm::zero(alpha);
            for (gen, f) in system.generators().iter().enumerate() {
                if system.degrees()[gen] > degree {
                    continue;
                }
                for (beta, coeff) in f.terms() {
                    if let Some(gamma) = form.alpha.checked_sub(beta) {
                        form.add_term(YVar { gen, gamma }, coeff.clone());
                    }
                }
            }
            form
        })
        .collect()
}

/// Matrix of the multiplication map in monomial bases: rows are y-variables,
/// columns are the monomials of degree `degree`, entry `[(i,γ), α] = f_{i,α-γ}`.
#[derive(Clone)]
pub struct CoefficientMatrix<F> {
    pub shape: Shape,
    pub degree: u32,
    pub rows: Vec<YVar>,
    pub columns: Vec<Exponent>,
    pub matrix: Matrix<F>,
}

impl<F: Field> CoefficientMatrix<F> {
    pub fn new(system: &GeneratorSystem<F>, degree: u32) -> Self {
        let rows = y_variables(system, degree);
        let columns = monomial_basis(system.shape(), degree);
        let col_index: HashMap<&Exponent, usize> = columns.iter().enumerate().map(|(k, e)| (e, k)).collect();
        let mut matrix = Matrix::zeros(rows.len(), columns.len());
        for (r, y) in rows.iter().enumerate() {
            for (beta, coeff) in system.generators()[y.gen].terms() {
                let alpha = y.gamma.checked_add(beta).expect("degree within limits");
                matrix.set(r, col_index[&alpha], coeff.clone());
            }
        }
        CoefficientMatrix { shape: system.shape(), degree, rows, columns, matrix }
    }

    /// Column `k` read back as a linear form.
    pub fn column_form(&self, k: usize) -> PForm<F> {
        let mut form = PForm::zero(self.columns[k].clone());
        for (r, y) in self.rows.iter().enumerate() {
            form.add_term(y.clone(), self.matrix.get(r, k).clone());
        }
        form
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Indices of the zero columns (monomials absent from the component).
    pub fn loops(&self) -> Vec<usize> {
        (0..self.columns.len()).filter(|&k| self.matrix.is_zero_column(k)).collect()
    }

    /// Splits a row vector over y-variables into the cofactor tuple.
    pub fn cofactors(&self, system: &GeneratorSystem<F>, coords: &[F]) -> Vec<Polynomial<F>> {
        let mut out = vec![Polynomial::zero(self.shape); system.len()];
        for (y, c) in self.rows.iter().zip(coords) {
            out[y.gen].add_term(y.gamma.clone(), c.clone());
        }
        out
    }

    /// Polynomial whose coefficient vector (in column order) is `values`.
    pub fn polynomial(&self, values: &[F]) -> Polynomial<F> {
        Polynomial::from_terms(self.shape, self.columns.iter().cloned().zip(values.iter().cloned()))
    }
}

impl<F: Field> std::fmt::Debug for CoefficientMatrix<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoefficientMatrix")
            .field("degree", &self.degree)
            .field("rows", &self.rows.len())
            .field("columns", &self.columns)
            .field("matrix", &self.matrix)
            .finish()
    }
}

pub fn coefficient_matrix<F: Field>(system: &GeneratorSystem<F>, degree: u32) -> CoefficientMatrix<F> {
    CoefficientMatrix::new(system, degree)
}

/// `dim I^(D)`: the rank of the coefficient matrix.
pub fn graded_component_dim<F: Field>(system: &GeneratorSystem<F>, degree: u32) -> usize {
    coefficient_matrix(system, degree).rank()
}
