//! Short polynomials in graded components of polynomial ideals.
//!
//! The crate computes, for a homogeneous generator system and a degree `D`,
//! the linear forms `p_α` that read off coefficients of `Σ g_i f_i`, the
//! fewest terms of a nonzero element of `I^(D)` (with a cofactor
//! certificate), the column matroid of the forms, and the specialized
//! machinery for determinantal ideals of generic matrices.
//!
//! All arithmetic is exact: either over the rationals or over a prime field
//! `F_p`.

pub mod determinantal;
pub mod field;
pub mod linalg;
pub mod matroid;
pub mod pforms;
pub mod poly;
pub mod shortness;

pub use determinantal::{theorem_bound, DetError, DeterminantalIdeal, Permutation, Relation, RelationGraph};
pub use field::{parse_fraction, Field, Fp, Rational};
pub use linalg::{EchelonBasis, Insertion, Matrix};
pub use matroid::{format_label_set, ColumnMatroid, MatroidError, MatroidReport};
pub use pforms::{build_pforms, coefficient_matrix, CoefficientMatrix, PForm, PFormError, YVar};
pub use poly::{
    monomial_basis, parse_ideal, parse_polynomial, Exponent, GeneratorSystem, IdealFileError, ParseError,
    Polynomial, Shape,
};
pub use shortness::{
    dim_bound, exists_s_short, occurrence_bound, shortness, ShortnessError, ShortnessOptions, ShortnessReport,
    ShortnessStatus, Witness,
};

pub type QMatrix = Matrix<Rational>;
pub type QPolynomial = Polynomial<Rational>;
pub type QGeneratorSystem = GeneratorSystem<Rational>;
pub type QPForm = PForm<Rational>;
pub type QShortnessReport = ShortnessReport<Rational>;

/// The default prime field for fast candidate computations.
pub type F32003 = Fp<32003>;
