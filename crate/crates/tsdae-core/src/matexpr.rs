//! Scalar expressions in the time variable `t` and matrix functions built
//! from them.
//!
//! Grammar (no implicit multiplication, `^` takes a non-negative integer
//! literal and binds tighter than unary minus, so `-t^2` is `-(t^2)`):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-'? atom ('^' integer)?
//! atom   := number | 't' | '(' expr ')'
//! ```

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, EvalErrorKind, Result};
use crate::timescale::{GridMatrixSamples, TimeScale};

/// Parsed arithmetic expression over decimal literals and the variable `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarExpr {
    Number(f64),
    Time,
    Neg(Box<ScalarExpr>),
    Add(Box<ScalarExpr>, Box<ScalarExpr>),
    Sub(Box<ScalarExpr>, Box<ScalarExpr>),
    Mul(Box<ScalarExpr>, Box<ScalarExpr>),
    Div(Box<ScalarExpr>, Box<ScalarExpr>),
    Pow(Box<ScalarExpr>, u32),
}

impl ScalarExpr {
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser { src: src.as_bytes(), pos: 0 };
        p.skip_ws();
        if p.pos == p.src.len() {
            return Err(p.expected("an expression"));
        }
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.expected("end of input"));
        }
        Ok(e)
    }

    /// Evaluate at time `t`. Pure; fails only on division by zero (or a
    /// non-finite intermediate).
    pub fn eval(&self, t: f64) -> std::result::Result<f64, EvalErrorKind> {
        let v = self.eval_raw(t)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalErrorKind::NonFinite)
        }
    }

    fn eval_raw(&self, t: f64) -> std::result::Result<f64, EvalErrorKind> {
        Ok(match self {
            ScalarExpr::Number(v) => *v,
            ScalarExpr::Time => t,
            ScalarExpr::Neg(e) => -e.eval_raw(t)?,
            ScalarExpr::Add(a, b) => a.eval_raw(t)? + b.eval_raw(t)?,
            ScalarExpr::Sub(a, b) => a.eval_raw(t)? - b.eval_raw(t)?,
            ScalarExpr::Mul(a, b) => a.eval_raw(t)? * b.eval_raw(t)?,
            ScalarExpr::Div(a, b) => {
                let d = b.eval_raw(t)?;
                if d == 0.0 {
                    return Err(EvalErrorKind::DivisionByZero);
                }
                a.eval_raw(t)? / d
            }
            ScalarExpr::Pow(b, k) => b.eval_raw(t)?.powi(*k as i32),
        })
    }

    fn is_atomic(&self) -> bool {
        matches!(self, ScalarExpr::Number(_) | ScalarExpr::Time)
    }
}

/// Canonical parenthesized form; `parse(print(e))` evaluates identically.
impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarExpr::Number(v) => write!(f, "{v}"),
            ScalarExpr::Time => write!(f, "t"),
            ScalarExpr::Neg(e) if e.is_atomic() => write!(f, "-{e}"),
            ScalarExpr::Neg(e) => write!(f, "-({e})"),
            ScalarExpr::Add(a, b) => write!(f, "({a}+{b})"),
            ScalarExpr::Sub(a, b) => write!(f, "({a}-{b})"),
            ScalarExpr::Mul(a, b) => write!(f, "({a}*{b})"),
            ScalarExpr::Div(a, b) => write!(f, "({a}/{b})"),
            ScalarExpr::Pow(b, k) if b.is_atomic() => write!(f, "{b}^{k}"),
            ScalarExpr::Pow(b, k) => write!(f, "({b})^{k}"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn expected(&self, what: &str) -> Error {
        Error::Parse { offset: self.pos, expected: what.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ScalarExpr> {
        let mut lhs = self.term()?;
        loop {
            self.skip_ws();
            if self.eat(b'+') {
                lhs = ScalarExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = ScalarExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ScalarExpr> {
        let mut lhs = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                lhs = ScalarExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat(b'/') {
                lhs = ScalarExpr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<ScalarExpr> {
        self.skip_ws();
        let negated = self.eat(b'-');
        let atom = self.atom()?;
        self.skip_ws();
        let powered = if self.eat(b'^') {
            let k = self.integer()?;
            ScalarExpr::Pow(Box::new(atom), k)
        } else {
            atom
        };
        Ok(if negated {
            ScalarExpr::Neg(Box::new(powered))
        } else {
            powered
        })
    }

    fn atom(&mut self) -> Result<ScalarExpr> {
        self.skip_ws();
        match self.peek() {
            Some(b't') => {
                self.pos += 1;
                Ok(ScalarExpr::Time)
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.expected("')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            _ => Err(self.expected("a number, 't', or '('")),
        }
    }

    fn number(&mut self) -> Result<ScalarExpr> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.eat(b'.') {
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        // optional exponent part of a decimal literal
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                self.pos = mark; // not an exponent after all
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match text.parse::<f64>() {
            Ok(v) => Ok(ScalarExpr::Number(v)),
            Err(_) => {
                self.pos = start;
                Err(self.expected("a decimal literal"))
            }
        }
    }

    fn integer(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.expected("a non-negative integer exponent"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<u32>()
            .map_err(|_| {
                self.pos = start;
                self.expected("a non-negative integer exponent")
            })
    }
}

/// Parse an expression string; see the module grammar.
pub fn parse_expr(src: &str) -> Result<ScalarExpr> {
    ScalarExpr::parse(src)
}

/// A time-varying matrix: a grid of scalar expressions.
#[derive(Debug, Clone)]
pub struct MatrixFunction {
    rows: usize,
    cols: usize,
    entries: Vec<ScalarExpr>, // row-major
}

impl MatrixFunction {
    pub fn new(rows: usize, cols: usize, entries: Vec<ScalarExpr>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::dim(
                "matrix function",
                format!("{rows}x{cols} = {} entries", rows * cols),
                format!("{}", entries.len()),
            ));
        }
        Ok(MatrixFunction { rows, cols, entries })
    }

    /// Parse a row-major grid of expression strings.
    pub fn parse_rows<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::dim("matrix function", "non-empty", "empty".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::dim(
                "matrix function",
                format!("{cols} columns per row"),
                "ragged rows".into(),
            ));
        }
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            for s in row {
                entries.push(ScalarExpr::parse(s.as_ref())?);
            }
        }
        Self::new(rows.len(), cols, entries)
    }

    /// A constant matrix function.
    pub fn constant(m: &DMatrix<f64>) -> Self {
        let entries = (0..m.nrows())
            .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
            .map(|(i, j)| ScalarExpr::Number(m[(i, j)]))
            .collect();
        MatrixFunction { rows: m.nrows(), cols: m.ncols(), entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(&DMatrix::identity(n, n))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarExpr {
        &self.entries[i * self.cols + j]
    }

    /// Entrywise evaluation at `t`.
    pub fn eval(&self, t: f64) -> Result<DMatrix<f64>> {
        let mut out = DMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self.entry(i, j).eval(t).map_err(|kind| Error::Eval {
                    kind,
                    t,
                    entry: Some((i + 1, j + 1)),
                })?;
            }
        }
        Ok(out)
    }

    /// Evaluation of a column-vector function at `t`.
    pub fn eval_vector(&self, t: f64) -> Result<DVector<f64>> {
        if self.cols != 1 {
            return Err(Error::dim("vector function", "1 column", format!("{}", self.cols)));
        }
        Ok(DVector::from_iterator(self.rows, self.eval(t)?.iter().copied()))
    }

    /// Sample the function at every grid point.
    pub fn tabulate(&self, ts: &TimeScale) -> Result<GridMatrixSamples> {
        let mut values = Vec::with_capacity(ts.len());
        for &t in ts.points() {
            values.push(self.eval(t)?);
        }
        GridMatrixSamples::new(ts.clone(), values)
    }
}

impl fmt::Display for MatrixFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}
