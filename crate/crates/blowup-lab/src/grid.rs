//! Uniform spatial meshes, nodal scalar fields, and time series.
//!
//! The continuum problems live on the whole real line; numerically we
//! work on a truncated interval `[x_min, x_max]` sampled at equally
//! spaced nodes. Everything downstream (quadrature, stepping, fence
//! evaluation) assumes these containers have already validated their
//! data, so the constructors here are strict: no NaN, no infinities,
//! no out-of-order times.

use crate::error::{Error, Result};

/// A uniform mesh of `n_points` nodes on `[x_min, x_max]`.
///
/// Node `i` sits at `x_min + i * dx` with `dx = (x_max - x_min) / (n_points - 1)`.
/// Positions are recomputed from the index on demand instead of being
/// accumulated, so node `i` carries at most one rounding error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Grid1D {
    /// Requires `x_min < x_max`, both finite, and at least 3 nodes.
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "endpoints must be finite, got [{x_min}, {x_max}]"
            )));
        }
        if x_min >= x_max {
            return Err(Error::InvalidGrid(format!(
                "x_min = {x_min} must be strictly below x_max = {x_max}"
            )));
        }
        if n_points < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 nodes, got {n_points}"
            )));
        }
        Ok(Grid1D {
            x_min,
            x_max,
            n_points,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Node spacing; strictly positive by construction.
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    /// Position of node `i` (debug-checked bound).
    pub fn node(&self, i: usize) -> f64 {
        debug_assert!(i < self.n_points);
        self.x_min + i as f64 * self.dx()
    }

    /// All node positions, left to right.
    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.node(i))
    }
}

/// Nodal values of a scalar quantity on a [`Grid1D`].
///
/// Every entry is finite; constructors reject NaN and infinities so
/// quadrature and stepping never have to re-check. The container is an
/// immutable snapshot — solvers build new fields rather than mutating.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid1D,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::LengthMismatch {
                got: values.len(),
                want: grid.n_points(),
            });
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
        }
        Ok(ScalarField { grid, values })
    }

    /// Sample a function at the grid nodes.
    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values: Vec<f64> = grid.nodes().map(f).collect();
        ScalarField::new(grid, values)
    }

    pub fn constant(grid: Grid1D, value: f64) -> Result<Self> {
        ScalarField::new(grid, vec![value; grid.n_points()])
    }

    pub fn zeros(grid: Grid1D) -> Self {
        ScalarField {
            grid,
            values: vec![0.0; grid.n_points()],
        }
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Strictly increasing sample times with one value per time.
///
/// Used for norm histories and fence margins. Values must be finite;
/// the sup norm of a Dirac start is therefore recorded from the first
/// resolved snapshot onward, never as an infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidSeries(format!(
                "{} times vs {} values",
                times.len(),
                values.len()
            )));
        }
        if times.is_empty() {
            return Err(Error::InvalidSeries("empty series".into()));
        }
        for pair in times.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(Error::InvalidSeries(format!(
                    "times must be strictly increasing, got {} then {}",
                    pair[0], pair[1]
                )));
            }
        }
        for (i, &t) in times.iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::NonFinite { index: i, value: t });
            }
            if !values[i].is_finite() {
                return Err(Error::NonFinite {
                    index: i,
                    value: values[i],
                });
            }
        }
        Ok(TimeSeries { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn first_time(&self) -> f64 {
        self.times[0]
    }

    pub fn last_time(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Linear interpolation at `t`; exact at sample times.
    pub fn interpolate(&self, t: f64) -> Result<f64> {
        if t < self.first_time() || t > self.last_time() {
            return Err(Error::TimeOutOfRange {
                t,
                start: self.first_time(),
                end: self.last_time(),
            });
        }
        // partition_point returns the first index with times[i] > t.
        let hi = self.times.partition_point(|&s| s <= t);
        if hi == 0 {
            return Ok(self.values[0]);
        }
        if hi == self.len() {
            return Ok(self.values[self.len() - 1]);
        }
        let (t0, t1) = (self.times[hi - 1], self.times[hi]);
        if t == t0 {
            return Ok(self.values[hi - 1]);
        }
        let theta = (t - t0) / (t1 - t0);
        Ok(self.values[hi - 1] * (1.0 - theta) + self.values[hi] * theta)
    }
}
