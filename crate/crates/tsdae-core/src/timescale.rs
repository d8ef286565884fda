//! Discrete time scales and delta calculus on them.
//!
//! A time scale here is a finite, strictly increasing grid of real points
//! `t_0 < t_1 < ... < t_N` together with the forward jump operator
//! `sigma(t_i) = t_{i+1}` (and `sigma(t_N) = t_N`, the `inf {} = sup T`
//! convention) and the graininess `mu(t) = sigma(t) - t`. On such grids every
//! interior point is right-scattered, so the Hilger derivative of a grid
//! function is the exact difference quotient
//! `F^Delta(t) = (F(sigma(t)) - F(t)) / mu(t)`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// How a [`TimeScale`] was constructed. Recorded for reporting only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorTag {
    IntegerRange,
    Geometric,
    Uniform,
    Explicit,
}

impl GeneratorTag {
    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorTag::IntegerRange => "integer-range",
            GeneratorTag::Geometric => "geometric",
            GeneratorTag::Uniform => "uniform",
            GeneratorTag::Explicit => "explicit",
        }
    }
}

/// A finite strictly increasing grid of time points.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeScale {
    points: Vec<f64>,
    tag: GeneratorTag,
}

impl TimeScale {
    fn validated(points: Vec<f64>, tag: GeneratorTag) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidTimeScale("no points".into()));
        }
        if points.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidTimeScale("non-finite point".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidTimeScale(
                "points must be strictly increasing".into(),
            ));
        }
        Ok(TimeScale { points, tag })
    }

    /// The integers `start..=end` as a time scale.
    pub fn integer_range(start: i64, end: i64) -> Result<Self> {
        if end < start {
            return Err(Error::InvalidTimeScale(format!(
                "integer range {start}..={end} is empty"
            )));
        }
        Self::validated((start..=end).map(|k| k as f64).collect(), GeneratorTag::IntegerRange)
    }

    /// The geometric grid `start, start*base, ..., start*base^(count-1)`,
    /// e.g. `2^N0` via `geometric(2.0, 1.0, count)`.
    pub fn geometric(base: f64, start: f64, count: usize) -> Result<Self> {
        if !(base > 1.0) {
            return Err(Error::InvalidTimeScale(format!("geometric base {base} must be > 1")));
        }
        if !(start > 0.0) {
            return Err(Error::InvalidTimeScale(format!("geometric start {start} must be > 0")));
        }
        if count == 0 {
            return Err(Error::InvalidTimeScale("geometric count must be >= 1".into()));
        }
        let mut points = Vec::with_capacity(count);
        let mut t = start;
        for _ in 0..count {
            points.push(t);
            t *= base;
        }
        Self::validated(points, GeneratorTag::Geometric)
    }

    /// `count` equally spaced points on `[a, b]`; a sampled stand-in for a
    /// continuous interval (the delta derivative then is the forward
    /// difference, first-order consistent).
    pub fn uniform(a: f64, b: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidTimeScale("uniform grid needs >= 2 points".into()));
        }
        if !(a < b) {
            return Err(Error::InvalidTimeScale(format!("uniform grid needs a < b, got [{a}, {b}]")));
        }
        let h = (b - a) / (count - 1) as f64;
        let mut points: Vec<f64> = (0..count).map(|k| a + k as f64 * h).collect();
        *points.last_mut().unwrap() = b;
        Self::validated(points, GeneratorTag::Uniform)
    }

    /// An explicit list of points (must be strictly increasing).
    pub fn explicit(points: Vec<f64>) -> Result<Self> {
        Self::validated(points, GeneratorTag::Explicit)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one point
    }

    pub fn tag(&self) -> GeneratorTag {
        self.tag
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        *self.points.last().unwrap()
    }

    /// Index of `t` in the grid. Membership is exact equality on stored
    /// values; callers that want to avoid float comparisons should work with
    /// indices directly.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let i = self.points.partition_point(|&p| p < t);
        if i < self.points.len() && self.points[i] == t {
            Ok(i)
        } else {
            Err(Error::NotAGridPoint { t })
        }
    }

    pub fn is_last_index(&self, i: usize) -> bool {
        i + 1 == self.points.len()
    }

    /// Successor index: `i + 1`, or `i` at the last point.
    pub fn sigma_index(&self, i: usize) -> usize {
        if self.is_last_index(i) {
            i
        } else {
            i + 1
        }
    }

    /// Forward jump operator `sigma(t)`.
    pub fn sigma(&self, t: f64) -> Result<f64> {
        let i = self.index_of(t)?;
        Ok(self.points[self.sigma_index(i)])
    }

    /// Graininess `mu(t) = sigma(t) - t`; zero at the last point.
    pub fn graininess(&self, t: f64) -> Result<f64> {
        let i = self.index_of(t)?;
        Ok(self.graininess_at(i))
    }

    pub fn graininess_at(&self, i: usize) -> f64 {
        if self.is_last_index(i) {
            0.0
        } else {
            self.points[i + 1] - self.points[i]
        }
    }
}

/// A matrix-valued grid function: one matrix of a fixed shape per grid point.
#[derive(Debug, Clone)]
pub struct GridMatrixSamples {
    ts: TimeScale,
    values: Vec<DMatrix<f64>>,
}

impl GridMatrixSamples {
    pub fn new(ts: TimeScale, values: Vec<DMatrix<f64>>) -> Result<Self> {
        if values.len() != ts.len() {
            return Err(Error::dim(
                "grid samples",
                format!("{} matrices", ts.len()),
                format!("{}", values.len()),
            ));
        }
        let shape = values[0].shape();
        if values.iter().any(|m| m.shape() != shape) {
            return Err(Error::dim(
                "grid samples",
                format!("uniform shape {}x{}", shape.0, shape.1),
                "mixed shapes".to_string(),
            ));
        }
        Ok(GridMatrixSamples { ts, values })
    }

    pub fn from_fn(ts: &TimeScale, mut f: impl FnMut(f64) -> DMatrix<f64>) -> Result<Self> {
        let values = ts.points().iter().map(|&t| f(t)).collect();
        Self::new(ts.clone(), values)
    }

    pub fn timescale(&self) -> &TimeScale {
        &self.ts
    }

    pub fn shape(&self) -> (usize, usize) {
        self.values[0].shape()
    }

    pub fn value(&self, i: usize) -> &DMatrix<f64> {
        &self.values[i]
    }

    /// Sample of the sigma-shifted function: the value at `sigma(t_i)`.
    pub fn value_at_sigma(&self, i: usize) -> &DMatrix<f64> {
        &self.values[self.ts.sigma_index(i)]
    }

    pub fn values(&self) -> &[DMatrix<f64>] {
        &self.values
    }

    /// Delta derivative `(F(sigma(t)) - F(t)) / mu(t)` at a grid point given
    /// by value. Undefined at the last point.
    pub fn delta_derivative(&self, t: f64) -> Result<DMatrix<f64>> {
        let i = self.ts.index_of(t)?;
        self.delta_derivative_at(i)
    }

    /// Delta derivative at grid index `i`.
    pub fn delta_derivative_at(&self, i: usize) -> Result<DMatrix<f64>> {
        if self.ts.is_last_index(i) {
            return Err(Error::LastPointUndefined { t: self.ts.points()[i] });
        }
        let mu = self.ts.graininess_at(i);
        Ok((&self.values[i + 1] - &self.values[i]) / mu)
    }

    /// Regressivity of `M` with respect to the grid: invertibility of
    /// `E + mu(t) M(t)` at every non-final point, decided by the smallest
    /// singular value exceeding `tol`.
    pub fn check_regressive(&self, tol: f64) -> Result<RegressivityReport> {
        let (r, c) = self.shape();
        if r != c {
            return Err(Error::NonSquare { rows: r, cols: c });
        }
        let eye = DMatrix::<f64>::identity(r, r);
        let mut points = Vec::new();
        for i in 0..self.ts.len() - 1 {
            let mu = self.ts.graininess_at(i);
            let m = &eye + &self.values[i] * mu;
            let smin = m
                .singular_values()
                .iter()
                .fold(f64::INFINITY, |a, &s| a.min(s));
            points.push(RegressivityPoint {
                t: self.ts.points()[i],
                smin,
                regressive: smin > tol,
            });
        }
        let all_regressive = points.iter().all(|p| p.regressive);
        Ok(RegressivityReport { points, all_regressive })
    }
}

#[derive(Debug, Clone)]
pub struct RegressivityPoint {
    pub t: f64,
    pub smin: f64,
    pub regressive: bool,
}

#[derive(Debug, Clone)]
pub struct RegressivityReport {
    pub points: Vec<RegressivityPoint>,
    pub all_regressive: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(v: f64) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, v)
    }

    #[test]
    fn sigma_on_integers() {
        let ts = TimeScale::integer_range(0, 10).unwrap();
        assert_eq!(ts.sigma(3.0).unwrap(), 4.0);
        // inf {} = sup T at the right end
        assert_eq!(ts.sigma(10.0).unwrap(), 10.0);
    }

    #[test]
    fn sigma_on_powers_of_two() {
        let ts = TimeScale::geometric(2.0, 1.0, 11).unwrap();
        assert_eq!(ts.points().len(), 11);
        assert_eq!(ts.last(), 1024.0);
        assert_eq!(ts.sigma(4.0).unwrap(), 8.0);
    }

    #[test]
    fn sigma_rejects_non_grid_points() {
        let ts = TimeScale::integer_range(0, 10).unwrap();
        assert!(matches!(ts.sigma(3.5), Err(Error::NotAGridPoint { .. })));
    }

    #[test]
    fn graininess_values() {
        let ts = TimeScale::integer_range(0, 10).unwrap();
        assert_eq!(ts.graininess(5.0).unwrap(), 1.0);
        assert_eq!(ts.graininess(10.0).unwrap(), 0.0);
        let geo = TimeScale::geometric(2.0, 1.0, 11).unwrap();
        // mu(t) = 2t - t = t
        assert_eq!(geo.graininess(8.0).unwrap(), 8.0);
    }

    #[test]
    fn sigma_is_monotone_and_idempotent_only_at_last() {
        let ts = TimeScale::explicit(vec![0.0, 0.5, 1.25, 4.0]).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for (i, &t) in ts.points().iter().enumerate() {
            let s = ts.sigma(t).unwrap();
            assert!(s >= prev);
            prev = s;
            if ts.is_last_index(i) {
                assert_eq!(s, t);
            } else {
                assert!(s > t);
            }
        }
    }

    #[test]
    fn delta_derivative_of_t_squared() {
        let ts = TimeScale::integer_range(0, 10).unwrap();
        let f = GridMatrixSamples::from_fn(&ts, |t| scalar(t * t)).unwrap();
        // ((t+1)^2 - t^2) / 1 = 2t + 1
        assert_eq!(f.delta_derivative(3.0).unwrap()[(0, 0)], 7.0);
    }

    #[test]
    fn delta_derivative_of_constant_is_zero() {
        let ts = TimeScale::geometric(2.0, 1.0, 6).unwrap();
        let f = GridMatrixSamples::from_fn(&ts, |_| DMatrix::from_element(2, 3, 4.25)).unwrap();
        for i in 0..ts.len() - 1 {
            assert_eq!(f.delta_derivative_at(i).unwrap().norm(), 0.0);
        }
    }

    #[test]
    fn delta_derivative_undefined_at_last_point() {
        let ts = TimeScale::integer_range(0, 3).unwrap();
        let f = GridMatrixSamples::from_fn(&ts, scalar).unwrap();
        assert!(matches!(
            f.delta_derivative(3.0),
            Err(Error::LastPointUndefined { .. })
        ));
    }

    // P(t) of the first worked standard-form fixture: the delta derivative
    // has a single nonzero entry, (3,2) = -1.
    #[test]
    fn delta_derivative_of_projector_fixture() {
        let ts = TimeScale::integer_range(0, 10).unwrap();
        let p = GridMatrixSamples::from_fn(&ts, |t| {
            DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -(t + 1.0), 1.0])
        })
        .unwrap();
        let d = p.delta_derivative(4.0).unwrap();
        let mut expected = DMatrix::zeros(3, 3);
        expected[(2, 1)] = -1.0;
        assert_eq!(d, expected);
    }

    #[test]
    fn simple_useful_formula_holds() {
        // f(sigma(t)) = f(t) + mu(t) f^Delta(t), an exact rearrangement
        let ts = TimeScale::explicit(vec![0.1, 0.7, 1.3, 2.9, 3.4]).unwrap();
        let f = GridMatrixSamples::from_fn(&ts, |t| {
            DMatrix::from_fn(2, 2, |i, j| (t + i as f64).sin() * (j as f64 + 0.5) + t * t)
        })
        .unwrap();
        for i in 0..ts.len() - 1 {
            let mu = ts.graininess_at(i);
            let lhs = f.value(i + 1);
            let rhs = f.value(i) + f.delta_derivative_at(i).unwrap() * mu;
            let scale = 1.0 + lhs.norm() + f.value(i).norm();
            assert!((lhs - &rhs).norm() <= 1e-14 * scale);
        }
    }

    #[test]
    fn sum_and_scalar_rules_hold() {
        let ts = TimeScale::uniform(0.0, 2.0, 9).unwrap();
        let f = GridMatrixSamples::from_fn(&ts, |t| DMatrix::from_fn(2, 2, |i, j| t * (i + 2 * j) as f64 + 1.0)).unwrap();
        let g = GridMatrixSamples::from_fn(&ts, |t| DMatrix::from_fn(2, 2, |i, j| t * t - (i as f64) + (j as f64))).unwrap();
        let sum = GridMatrixSamples::new(
            ts.clone(),
            (0..ts.len()).map(|i| f.value(i) + g.value(i)).collect(),
        )
        .unwrap();
        let scaled = GridMatrixSamples::new(
            ts.clone(),
            (0..ts.len()).map(|i| f.value(i) * 3.5).collect(),
        )
        .unwrap();
        for i in 0..ts.len() - 1 {
            let d_sum = sum.delta_derivative_at(i).unwrap();
            let d_sep = f.delta_derivative_at(i).unwrap() + g.delta_derivative_at(i).unwrap();
            assert!((d_sum - d_sep).norm() <= 1e-12);
            let d_scaled = scaled.delta_derivative_at(i).unwrap();
            let d_f = f.delta_derivative_at(i).unwrap() * 3.5;
            assert!((d_scaled - d_f).norm() <= 1e-12);
        }
    }

    #[test]
    fn product_rule_holds() {
        // (FG)^Delta = F^Delta G + F(sigma) G^Delta
        let ts = TimeScale::explicit(vec![0.25, 0.5, 1.0, 1.75, 2.125, 5.0]).unwrap();
        let f = GridMatrixSamples::from_fn(&ts, |t| DMatrix::from_fn(2, 3, |i, j| (t * (1 + i + j) as f64).cos())).unwrap();
        let g = GridMatrixSamples::from_fn(&ts, |t| DMatrix::from_fn(3, 2, |i, j| t.powi(1 + i as i32) - j as f64)).unwrap();
        let prod = GridMatrixSamples::new(
            ts.clone(),
            (0..ts.len()).map(|i| f.value(i) * g.value(i)).collect(),
        )
        .unwrap();
        for i in 0..ts.len() - 1 {
            let lhs = prod.delta_derivative_at(i).unwrap();
            let rhs = f.delta_derivative_at(i).unwrap() * g.value(i)
                + f.value(i + 1) * g.delta_derivative_at(i).unwrap();
            let scale = 1.0 + lhs.norm();
            assert!((lhs - rhs).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn quotient_covered_by_product_with_reciprocal() {
        // f * (1/g) sampled directly; the product rule test shape covers the
        // quotient rule, which has no dedicated operation
        let ts = TimeScale::integer_range(1, 8).unwrap();
        let f = GridMatrixSamples::from_fn(&ts, |t| scalar(t * t + 1.0)).unwrap();
        let ginv = GridMatrixSamples::from_fn(&ts, |t| scalar(1.0 / (t + 2.0))).unwrap();
        let prod = GridMatrixSamples::new(
            ts.clone(),
            (0..ts.len()).map(|i| f.value(i) * ginv.value(i)).collect(),
        )
        .unwrap();
        for i in 0..ts.len() - 1 {
            let lhs = prod.delta_derivative_at(i).unwrap();
            let rhs = f.delta_derivative_at(i).unwrap() * ginv.value(i)
                + f.value(i + 1) * ginv.delta_derivative_at(i).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
        }
    }

    #[test]
    fn regressivity_report() {
        let ts = TimeScale::integer_range(0, 5).unwrap();
        let zero = GridMatrixSamples::from_fn(&ts, |_| DMatrix::zeros(2, 2)).unwrap();
        assert!(zero.check_regressive(1e-9).unwrap().all_regressive);

        let minus_one = GridMatrixSamples::from_fn(&ts, |_| scalar(-1.0)).unwrap();
        let rep = minus_one.check_regressive(1e-9).unwrap();
        assert!(!rep.all_regressive);
        assert!(rep.points.iter().all(|p| !p.regressive));

        let minus_half = GridMatrixSamples::from_fn(&ts, |_| scalar(-0.5)).unwrap();
        assert!(minus_half.check_regressive(1e-9).unwrap().all_regressive);
    }

    #[test]
    fn regressivity_requires_square() {
        let ts = TimeScale::integer_range(0, 2).unwrap();
        let rect = GridMatrixSamples::from_fn(&ts, |_| DMatrix::zeros(2, 3)).unwrap();
        assert!(matches!(rect.check_regressive(1e-9), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn construction_validation() {
        assert!(TimeScale::explicit(vec![]).is_err());
        assert!(TimeScale::explicit(vec![1.0, 1.0]).is_err());
        assert!(TimeScale::explicit(vec![2.0, 1.0]).is_err());
        assert!(TimeScale::geometric(1.0, 1.0, 3).is_err());
        assert!(TimeScale::geometric(2.0, -1.0, 3).is_err());
        assert!(TimeScale::uniform(0.0, 1.0, 1).is_err());
        assert!(TimeScale::integer_range(3, 2).is_err());
    }
}
