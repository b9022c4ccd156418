//! Recursive descent parser for polynomials and ideal files.
//!
//! ```text
//! polynomial := [sign] term { sign term }
//! term       := coefficient [ ["*"] factor { "*" factor } ] | factor { "*" factor }
//! coefficient:= digits [ "/" digits ]
//! factor     := variable [ "^" digits ]
//! variable   := "x" digits | "x[" digits "," digits "]"
//! ```
//!
//! Whitespace is ignored everywhere. Positions in errors are 1-based
//! character columns of the input line.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::{Exponent, GeneratorSystem, PolyError, Polynomial, Shape, MAX_DEGREE};
use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("exponent overflow (total degree above {MAX_DEGREE})")]
    ExponentOverflow,
    #[error("coefficient {0} is not defined in the selected field")]
    CoefficientNotInField(String),
    #[error("the zero polynomial cannot be used as a generator")]
    ZeroPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at column {column}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub column: usize,
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    shape: Shape,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, shape: Shape) -> Self {
        let chars = text.chars().enumerate().filter(|(_, c)| !c.is_whitespace()).collect();
        Parser { chars, pos: 0, shape, text }
    }

    fn column(&self) -> usize {
        self.chars.get(self.pos).map_or(self.text.chars().count() + 1, |(i, _)| i + 1)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { kind, column: self.column() }
    }

    fn syntax(&self, msg: &str) -> ParseError {
        self.error(ParseErrorKind::Syntax(msg.to_string()))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(&format!("expected '{c}'")))
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().map(|&(_, c)| c).collect())
    }

    fn small_int(&mut self, what: &str) -> Result<u64, ParseError> {
        let column = self.column();
        let digits = self.digits().ok_or_else(|| self.syntax(&format!("expected {what}")))?;
        digits.parse::<u64>().map_err(|_| ParseError { kind: ParseErrorKind::ExponentOverflow, column })
    }

    fn polynomial<F: Field>(&mut self) -> Result<Polynomial<F>, ParseError> {
        let mut out = Polynomial::zero(self.shape);
        let mut first = true;
        loop {
            let negative = if self.eat('-') {
                true
            } else if self.eat('+') || first {
                false
            } else if self.peek().is_none() {
                break;
            } else {
                return Err(self.syntax("expected '+' or '-'"));
            };
            first = false;
            let (exponent, coeff) = self.term::<F>()?;
            out.add_term(exponent, if negative { -coeff } else { coeff });
            if self.peek().is_none() {
                break;
            }
        }
        Ok(out)
    }

    fn term<F: Field>(&mut self) -> Result<(Exponent, F), ParseError> {
        let column = self.column();
        let mut coeff = BigRational::from_integer(1.into());
        let mut has_coeff = false;
        if let Some(num) = self.digits() {
            has_coeff = true;
            let num: BigInt = num.parse().expect("digits");
            let den: BigInt = if self.eat('/') {
                self.digits().ok_or_else(|| self.syntax("expected denominator"))?.parse().expect("digits")
            } else {
                1.into()
            };
            if den.is_zero() {
                return Err(ParseError { kind: ParseErrorKind::Syntax("zero denominator".into()), column });
            }
            coeff = BigRational::new(num, den);
        }
        let mut entries = vec![0u64; self.shape.num_vars()];
        let mut has_factor = false;
        if has_coeff {
            if self.eat('*') || self.peek() == Some('x') {
                self.factor(&mut entries)?;
                has_factor = true;
            }
        } else {
            if self.peek() != Some('x') {
                return Err(self.syntax("expected a coefficient or a variable"));
            }
            self.factor(&mut entries)?;
            has_factor = true;
        }
        if has_factor {
            while self.eat('*') {
                self.factor(&mut entries)?;
            }
        }
        let mut total: u64 = 0;
        for &e in &entries {
            total += e;
            if total > MAX_DEGREE as u64 {
                return Err(ParseError { kind: ParseErrorKind::ExponentOverflow, column });
            }
        }
        let exponent =
            Exponent::new(entries.into_iter().map(|e| e as u32).collect()).expect("degree checked above");
        let value = F::from_rational(&coeff).ok_or(ParseError {
            kind: ParseErrorKind::CoefficientNotInField(coeff.to_string()),
            column,
        })?;
        Ok((exponent, value))
    }

    fn factor(&mut self, entries: &mut [u64]) -> Result<(), ParseError> {
        let column = self.column();
        self.expect('x')?;
        let (name, index) = if self.eat('[') {
            let row = self.small_int("row index")?;
            self.expect(',')?;
            let col = self.small_int("column index")?;
            self.expect(']')?;
            let name = format!("x[{row},{col}]");
            match self.shape {
                Shape::Grid(m, n) if (1..=m as u64).contains(&row) && (1..=n as u64).contains(&col) => {
                    (name, Some((row as usize - 1) * n + col as usize - 1))
                }
                _ => (name, None),
            }
        } else {
            let i = self.small_int("variable index")?;
            let name = format!("x{i}");
            match self.shape {
                Shape::Flat(n) if (1..=n as u64).contains(&i) => (name, Some(i as usize - 1)),
                _ => (name, None),
            }
        };
        let index = index.ok_or(ParseError { kind: ParseErrorKind::UnknownVariable(name), column })?;
        let power = if self.eat('^') {
            let p = self.small_int("exponent")?;
            if p == 0 {
                return Err(ParseError { kind: ParseErrorKind::Syntax("exponent must be positive".into()), column });
            }
            p
        } else {
            1
        };
        entries[index] = entries[index]
            .checked_add(power)
            .filter(|&e| e <= MAX_DEGREE as u64)
            .ok_or(ParseError { kind: ParseErrorKind::ExponentOverflow, column })?;
        Ok(())
    }
}

/// Parses a nonzero polynomial in the given shape.
pub fn parse_polynomial<F: Field>(text: &str, shape: Shape) -> Result<Polynomial<F>, ParseError> {
    let mut parser = Parser::new(text, shape);
    if parser.peek().is_none() {
        return Err(parser.syntax("empty polynomial"));
    }
    let poly = parser.polynomial::<F>()?;
    if poly.is_zero() {
        return Err(ParseError { kind: ParseErrorKind::ZeroPolynomial, column: 1 });
    }
    Ok(poly)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealFileError {
    #[error("missing 'shape' header")]
    MissingHeader,
    #[error("line {line}: malformed header: {text}")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("line {line}: {source}")]
    Generator { line: usize, source: PolyError },
}

fn parse_header(line: usize, text: &str) -> Result<Shape, IdealFileError> {
    let bad = || IdealFileError::BadHeader { line, text: text.to_string() };
    let words: Vec<&str> = text.split_whitespace().collect();
    let num = |w: &str| w.parse::<usize>().ok().filter(|&n| n > 0);
    match words.as_slice() {
        ["shape", "flat", n] => Ok(Shape::Flat(num(n).ok_or_else(bad)?)),
        ["shape", "grid", m, n] => Ok(Shape::Grid(num(m).ok_or_else(bad)?, num(n).ok_or_else(bad)?)),
        _ => Err(bad()),
    }
}

/// Parses an ideal file: a `shape flat <n>` or `shape grid <m> <n>` header
/// followed by one generator per line. Blank lines and lines starting with
/// `#` are skipped.
pub fn parse_ideal<F: Field>(text: &str) -> Result<GeneratorSystem<F>, IdealFileError> {
    let mut shape = None;
    let mut generators = Vec::new();
    let mut lines_of = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        match shape {
            None => shape = Some(parse_header(line, content)?),
            Some(s) => {
                let p = parse_polynomial::<F>(content, s).map_err(|source| IdealFileError::Parse { line, source })?;
                generators.push(p);
                lines_of.push(line);
            }
        }
    }
    let shape = shape.ok_or(IdealFileError::MissingHeader)?;
    GeneratorSystem::new(shape, generators).map_err(|source| {
        let line = match source {
            PolyError::NotHomogeneous(i) | PolyError::ZeroGenerator(i) => lines_of[i - 1],
            _ => 0,
        };
        IdealFileError::Generator { line, source }
    })
}
