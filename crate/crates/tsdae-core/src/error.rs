//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while analyzing, decoupling, or solving a
/// dynamic-algebraic equation on a discrete time scale.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("t = {t} is not a point of the time scale")]
    NotAGridPoint { t: f64 },

    #[error("delta derivative undefined at the last grid point t = {t}")]
    LastPointUndefined { t: f64 },

    #[error("expected a square matrix, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: String,
        expected: String,
        got: String,
    },

    #[error("invalid time scale: {0}")]
    InvalidTimeScale(String),

    #[error("parse error at byte {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },

    #[error("evaluation error at t = {t}{}: {kind}", entry_suffix(.entry))]
    Eval {
        kind: EvalErrorKind,
        t: f64,
        /// 1-based (row, column) of the offending matrix entry, if any.
        entry: Option<(usize, usize)>,
    },

    #[error("basis is ill-conditioned: cond(F^T F) = {cond:.3e}")]
    IllConditionedBasis { cond: f64 },

    #[error("subspaces are not transversal: smallest singular value {smin:.3e}")]
    NotTransversal { smin: f64 },

    #[error("{{1,2}}-inverse condition `{identity}` violated: residual {residual:.3e}")]
    InverseConditionsViolated {
        identity: &'static str,
        residual: f64,
    },

    #[error("matrix pair (A, B) is not properly stated at t = {t}: {detail}")]
    NotProperlyStated { t: f64, detail: String },

    #[error("rank of {quantity} drifts along the grid: {r1} at t = {t1}, {r2} at t = {t2}")]
    RankDrift {
        quantity: String,
        t1: f64,
        r1: usize,
        t2: f64,
        r2: usize,
    },

    #[error("admissibility violated at t = {t}: ker G0 and ker G1 intersect nontrivially")]
    AdmissibilityViolation { t: f64 },

    #[error("not tractability index one: {what} singular at t = {t}")]
    NotIndexOne { t: f64, what: String },

    #[error("supplied P is not a projector at t = {t}: ||P^2 - P|| = {residual:.3e}")]
    ProjectorInvalid { t: f64, residual: f64 },

    #[error("step matrix E - mu*Madv singular at t = {t} (non-regressive step)")]
    NonRegressiveStep { t: f64 },

    #[error("direct recursion step matrix singular at t = {t}")]
    OracleStepSingular { t: f64 },

    #[error("trajectory too short: need values at {needed} consecutive grid points, got {got}")]
    InsufficientTrajectory { needed: usize, got: usize },

    #[error("instance generation failed: {0}")]
    InstanceGeneration(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EvalErrorKind {
    #[error("division by zero")]
    DivisionByZero,
    #[error("non-finite result")]
    NonFinite,
}

fn entry_suffix(entry: &Option<(usize, usize)>) -> String {
    match entry {
        Some((i, j)) => format!(", entry ({i},{j})"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn dim(what: impl Into<String>, expected: impl Into<String>, got: impl Into<String>) -> Self {
        Error::DimensionMismatch {
            what: what.into(),
            expected: expected.into(),
            got: got.into(),
        }
    }
}
