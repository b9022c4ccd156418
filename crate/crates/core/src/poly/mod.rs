//! Exponents, monomial bases, sparse polynomials and generator systems.
//!
//! One monomial order is used everywhere: graded lexicographic on the
//! row-major flattening of an exponent, with `x1 > x2 > ...`. Monomial bases
//! are listed from the largest monomial down, so the basis of degree 4 in two
//! variables reads `(4,0), (3,1), (2,2), (1,3), (0,4)`.

mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::field::Field;

pub use parse::{parse_ideal, parse_polynomial, IdealFileError, ParseError, ParseErrorKind};

/// Exponent entries beyond this total degree are rejected.
pub const MAX_DEGREE: u32 = 1_000_000;

/// Arrangement of the variables: a flat list `x1..xn` or an `m x n` grid
/// `x[i,j]` flattened row by row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Flat(usize),
    Grid(usize, usize),
}

impl Shape {
    pub fn num_vars(&self) -> usize {
        match *self {
            Shape::Flat(n) => n,
            Shape::Grid(m, n) => m * n,
        }
    }

    pub fn var_name(&self, index: usize) -> String {
        match *self {
            Shape::Flat(_) => format!("x{}", index + 1),
            Shape::Grid(_, n) => format!("x[{},{}]", index / n + 1, index % n + 1),
        }
    }

    /// Compact label: `"(4,0)"` for flat shapes, `"101|010"` for grids
    /// (entries separated by commas inside a row if any exceeds 9).
    pub fn format_exponent(&self, exponent: &Exponent) -> String {
        let e = exponent.entries();
        match *self {
            Shape::Flat(_) => {
                let parts: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                format!("({})", parts.join(","))
            }
            Shape::Grid(_, n) => {
                let wide = e.iter().any(|&x| x > 9);
                let rows: Vec<String> = e
                    .chunks(n.max(1))
                    .map(|row| {
                        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                        if wide { cells.join(",") } else { cells.concat() }
                    })
                    .collect();
                rows.join("|")
            }
        }
    }

    /// Inverse of [`Shape::format_exponent`]; also accepts plain
    /// comma-separated entries.
    pub fn parse_exponent(&self, text: &str) -> Option<Exponent> {
        let text = text.trim().trim_start_matches('(').trim_end_matches(')');
        let mut entries = Vec::new();
        match *self {
            Shape::Grid(m, n) if text.contains('|') => {
                let rows: Vec<&str> = text.split('|').collect();
                if rows.len() != m {
                    return None;
                }
                for row in rows {
                    let row = row.trim();
                    let cells: Vec<u32> = if row.contains(',') {
                        row.split(',').map(|c| c.trim().parse().ok()).collect::<Option<_>>()?
                    } else {
                        row.chars().map(|c| c.to_digit(10)).collect::<Option<_>>()?
                    };
                    if cells.len() != n {
                        return None;
                    }
                    entries.extend(cells);
                }
            }
            _ => {
                for part in text.split(',') {
                    entries.push(part.trim().parse().ok()?);
                }
            }
        }
        if entries.len() != self.num_vars() {
            return None;
        }
        Exponent::new(entries).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("total degree exceeds {MAX_DEGREE}")]
    DegreeTooLarge,
    #[error("polynomials live in different rings")]
    ShapeMismatch,
    #[error("generator {0} is zero")]
    ZeroGenerator(usize),
    #[error("generator {0} is not homogeneous")]
    NotHomogeneous(usize),
}

/// Multi-index of non-negative integers with a cached total degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Exponent {
    entries: Vec<u32>,
    degree: u32,
}

impl Exponent {
    pub fn new(entries: Vec<u32>) -> Result<Self, PolyError> {
        let mut degree: u32 = 0;
        for &e in &entries {
            degree = degree.checked_add(e).filter(|&d| d <= MAX_DEGREE).ok_or(PolyError::DegreeTooLarge)?;
        }
        Ok(Exponent { entries, degree })
    }

    pub fn zero(num_vars: usize) -> Self {
        Exponent { entries: vec![0; num_vars], degree: 0 }
    }

    /// Exponent of a single variable.
    pub fn unit(num_vars: usize, var: usize) -> Self {
        let mut entries = vec![0; num_vars];
        entries[var] = 1;
        Exponent { entries, degree: 1 }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn num_vars(&self) -> usize {
        self.entries.len()
    }

    /// Entrywise `self <= other`.
    pub fn divides(&self, other: &Exponent) -> bool {
        self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b)
    }

    /// `self - other` when `other` divides `self`.
    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        if !other.divides(self) {
            return None;
        }
        Some(Exponent {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
            degree: self.degree - other.degree,
        })
    }

    pub fn checked_add(&self, other: &Exponent) -> Result<Exponent, PolyError> {
        let degree = self.degree + other.degree;
        if degree > MAX_DEGREE {
            return Err(PolyError::DegreeTooLarge);
        }
        Ok(Exponent {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
            degree,
        })
    }
}

impl Ord for Exponent {
    /// Graded lexicographic, ascending.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| self.entries.cmp(&other.entries))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries)
    }
}

/// All exponents of total degree `degree`, largest monomial first.
pub fn monomial_basis(shape: Shape, degree: u32) -> Vec<Exponent> {
    fn fill(remaining: u32, prefix: &mut Vec<u32>, vars: usize, out: &mut Vec<Exponent>, total: u32) {
        if prefix.len() + 1 == vars {
            prefix.push(remaining);
            out.push(Exponent { entries: prefix.clone(), degree: total });
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            fill(remaining - e, prefix, vars, out, total);
            prefix.pop();
        }
    }
    let vars = shape.num_vars();
    let mut out = Vec::new();
    if vars == 0 {
        if degree == 0 {
            out.push(Exponent::zero(0));
        }
        return out;
    }
    fill(degree, &mut Vec::with_capacity(vars), vars, &mut out, degree);
    out
}

/// Sparse polynomial: exponent to nonzero coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial<F> {
    shape: Shape,
    terms: BTreeMap<Exponent, F>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(shape: Shape) -> Self {
        Polynomial { shape, terms: BTreeMap::new() }
    }

    pub fn one(shape: Shape) -> Self {
        Self::monomial(shape, Exponent::zero(shape.num_vars()), F::one())
    }

    pub fn monomial(shape: Shape, exponent: Exponent, coeff: F) -> Self {
        assert_eq!(exponent.num_vars(), shape.num_vars());
        let mut p = Self::zero(shape);
        p.add_term(exponent, coeff);
        p
    }

    /// Sums the given terms; repeated exponents are combined.
    pub fn from_terms(shape: Shape, terms: impl IntoIterator<Item = (Exponent, F)>) -> Self {
        let mut p = Self::zero(shape);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exponent: Exponent, coeff: F) {
        if coeff.is_zero() {
            return;
        }
        debug_assert_eq!(exponent.num_vars(), self.shape.num_vars());
        match self.terms.remove(&exponent) {
            Some(old) => {
                let sum = old + coeff;
                if !sum.is_zero() {
                    self.terms.insert(exponent, sum);
                }
            }
            None => {
                self.terms.insert(exponent, coeff);
            }
        }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exponent: &Exponent) -> F {
        self.terms.get(exponent).cloned().unwrap_or_else(F::zero)
    }

    /// Terms from the largest monomial down.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &F)> {
        self.terms.iter().rev()
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().rev().cloned().collect()
    }

    /// The common degree of all terms, if the polynomial is homogeneous and
    /// nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| e.degree());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn scale(&self, factor: &F) -> Self {
        if factor.is_zero() {
            return Self::zero(self.shape);
        }
        Polynomial {
            shape: self.shape,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.clone() * factor.clone())).collect(),
        }
    }

    pub fn multiply(&self, other: &Self) -> Self {
        assert_eq!(self.shape, other.shape, "shape mismatch");
        let mut out = Self::zero(self.shape);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.checked_add(eb).expect("product degree within limits");
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<F: Field> Add for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: Self) -> Polynomial<F> {
        assert_eq!(self.shape, rhs.shape, "shape mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<F: Field> Sub for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: Self) -> Polynomial<F> {
        self + &(-rhs)
    }
}

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        Polynomial {
            shape: self.shape,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl<F: Field> Mul for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Self) -> Polynomial<F> {
        self.multiply(rhs)
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    /// Prints in the input grammar, so the output parses back to `self`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (exponent, coeff)) in self.terms().enumerate() {
            let negative = coeff.is_negative_display();
            let magnitude = if negative { -coeff.clone() } else { coeff.clone() };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = exponent
                .entries()
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(v, &p)| {
                    let name = self.shape.var_name(v);
                    if p == 1 { name } else { format!("{name}^{p}") }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", magnitude, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl<F: Field> fmt::Debug for GeneratorSystem<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.generators).finish()
    }
}

/// Homogeneous nonzero generators `f_1, ..., f_r` of an ideal, sharing one
/// shape. Generators may have different degrees.
#[derive(Clone, PartialEq, Eq)]
pub struct GeneratorSystem<F> {
    shape: Shape,
    generators: Vec<Polynomial<F>>,
    degrees: Vec<u32>,
}

impl<F: Field> GeneratorSystem<F> {
    pub fn new(shape: Shape, generators: Vec<Polynomial<F>>) -> Result<Self, PolyError> {
        let mut degrees = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if g.shape() != shape {
                return Err(PolyError::ShapeMismatch);
            }
            if g.is_zero() {
                return Err(PolyError::ZeroGenerator(i + 1));
            }
            degrees.push(g.homogeneous_degree().ok_or(PolyError::NotHomogeneous(i + 1))?);
        }
        Ok(GeneratorSystem { shape, generators, degrees })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.generators
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `Σ g_i f_i`.
    pub fn combine(&self, cofactors: &[Polynomial<F>]) -> Polynomial<F> {
        assert_eq!(cofactors.len(), self.generators.len());
        let mut out = Polynomial::zero(self.shape);
        for (g, f) in cofactors.iter().zip(&self.generators) {
            out = &out + &g.multiply(f);
        }
        out
    }
}

/// Number of monomials of degree `degree` in `vars` variables, `C(vars+degree-1, degree)`.
pub fn count_monomials(vars: usize, degree: u32) -> u128 {
    if vars == 0 {
        return u128::from(degree == 0);
    }
    let mut acc: u128 = 1;
    for k in 1..=degree as u128 {
        acc = acc * (vars as u128 - 1 + k) / k;
    }
    acc
}
