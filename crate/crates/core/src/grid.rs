//! Uniform sampling axes for detuning, delay and conjugate-time variables.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::scalar::Real;

/// Physical meaning of a sampling axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    /// Signal detuning Ω_s (rad/ps).
    Signal,
    /// Idler detuning Ω_i (rad/ps).
    Idler,
    /// Sum detuning Ω₊ = Ω_s + Ω_i (rad/ps).
    Sum,
    /// Difference detuning Ω₋ = Ω_s − Ω_i (rad/ps).
    Difference,
    /// Single CW detuning Ω (rad/ps), with Ω_s = Ω and Ω_i = −Ω.
    Omega,
    /// Interferometer delay τ (ps).
    Tau,
    /// Fourier conjugate time T of Ω (ps).
    ConjugateTime,
    /// Mean arrival time t₊ = (t_s + t_i)/2 (ps), conjugate to Ω₊.
    TimeSum,
    /// Half arrival-time difference t₋ = (t_s − t_i)/2 (ps), conjugate to Ω₋.
    TimeDifference,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Signal => "signal",
            Axis::Idler => "idler",
            Axis::Sum => "sum",
            Axis::Difference => "difference",
            Axis::Omega => "omega",
            Axis::Tau => "tau",
            Axis::ConjugateTime => "conjugate-time",
            Axis::TimeSum => "time-sum",
            Axis::TimeDifference => "time-difference",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "signal" => Axis::Signal,
            "idler" => Axis::Idler,
            "sum" => Axis::Sum,
            "difference" => Axis::Difference,
            "omega" => Axis::Omega,
            "tau" => Axis::Tau,
            "conjugate-time" => Axis::ConjugateTime,
            "time-sum" => Axis::TimeSum,
            "time-difference" => Axis::TimeDifference,
            other => return Err(Error::Parse(format!("unknown axis '{other}'"))),
        })
    }
}

/// Uniformly spaced axis: node `k` sits at `start + k * step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D<T> {
    pub start: T,
    pub step: T,
    pub count: usize,
    pub axis: Axis,
}

impl<T: Real> Grid1D<T> {
    pub fn new(start: T, step: T, count: usize, axis: Axis) -> Result<Self> {
        ensure_finite(start, "grid start")?;
        ensure_finite(step, "grid step")?;
        if step <= T::zero() {
            return Err(Error::InvalidInput("grid step must be positive".into()));
        }
        if count < 2 {
            return Err(Error::InvalidInput(format!(
                "grid needs at least 2 points, got {count}"
            )));
        }
        Ok(Self {
            start,
            step,
            count,
            axis,
        })
    }

    /// `count` points spanning `[-half_span, half_span]` inclusive.
    pub fn symmetric(half_span: T, count: usize, axis: Axis) -> Result<Self> {
        Self::span(-half_span, half_span, count, axis)
    }

    /// `count` points spanning `[lo, hi]` inclusive.
    pub fn span(lo: T, hi: T, count: usize, axis: Axis) -> Result<Self> {
        ensure_finite(lo, "grid bound")?;
        ensure_finite(hi, "grid bound")?;
        if count < 2 {
            return Err(Error::InvalidInput(format!(
                "grid needs at least 2 points, got {count}"
            )));
        }
        Self::new(lo, (hi - lo) / T::from_usize_lossy(count - 1), count, axis)
    }

    #[inline]
    pub fn at(&self, k: usize) -> T {
        self.start + T::from_usize_lossy(k) * self.step
    }

    pub fn end(&self) -> T {
        self.at(self.count - 1)
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn values(&self) -> Vec<T> {
        (0..self.count).map(|k| self.at(k)).collect()
    }

    /// Index of the node closest to `x`, clamped to the grid.
    pub fn nearest(&self, x: T) -> usize {
        let k = ((x - self.start) / self.step).round();
        if k <= T::zero() {
            0
        } else {
            k.to_usize().unwrap_or(usize::MAX).min(self.count - 1)
        }
    }

    pub fn with_axis(mut self, axis: Axis) -> Self {
        self.axis = axis;
        self
    }
}

/// Coordinate system of a two-dimensional map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coords {
    /// Rows Ω_s, columns Ω_i.
    SignalIdler,
    /// Rows Ω₊, columns Ω₋.
    SumDifference,
    /// Rows τ, columns Ω.
    DelayDetuning,
    /// Rows τ, columns T.
    DelayConjugate,
    /// Rows t₊, columns t₋.
    Temporal,
}

/// Row-major product grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D<T> {
    pub rows: Grid1D<T>,
    pub cols: Grid1D<T>,
}

impl<T: Real> Grid2D<T> {
    pub fn new(rows: Grid1D<T>, cols: Grid1D<T>) -> Result<Self> {
        let grid = Self { rows, cols };
        grid.coords()?;
        Ok(grid)
    }

    /// Square (Ω_s, Ω_i) grid over `[-half_span, half_span]²`.
    pub fn signal_idler(half_span: T, count: usize) -> Result<Self> {
        Self::new(
            Grid1D::symmetric(half_span, count, Axis::Signal)?,
            Grid1D::symmetric(half_span, count, Axis::Idler)?,
        )
    }

    /// (Ω₊, Ω₋) grid with independent half spans.
    pub fn sum_difference(
        half_span_sum: T,
        count_sum: usize,
        half_span_diff: T,
        count_diff: usize,
    ) -> Result<Self> {
        Self::new(
            Grid1D::symmetric(half_span_sum, count_sum, Axis::Sum)?,
            Grid1D::symmetric(half_span_diff, count_diff, Axis::Difference)?,
        )
    }

    pub fn coords(&self) -> Result<Coords> {
        match (self.rows.axis, self.cols.axis) {
            (Axis::Signal, Axis::Idler) => Ok(Coords::SignalIdler),
            (Axis::Sum, Axis::Difference) => Ok(Coords::SumDifference),
            (Axis::Tau, Axis::Omega) => Ok(Coords::DelayDetuning),
            (Axis::Tau, Axis::ConjugateTime) => Ok(Coords::DelayConjugate),
            (Axis::TimeSum, Axis::TimeDifference) => Ok(Coords::Temporal),
            (r, c) => Err(Error::AxisMismatch(format!(
                "unsupported axis pair ({}, {})",
                r.as_str(),
                c.as_str()
            ))),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.count * self.cols.count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Converts signal/idler detunings to (Ω₊, Ω₋).
#[inline]
pub fn to_sum_difference<T: Real>(omega_s: T, omega_i: T) -> (T, T) {
    (omega_s + omega_i, omega_s - omega_i)
}

/// Converts (Ω₊, Ω₋) back to signal/idler detunings.
#[inline]
pub fn to_signal_idler<T: Real>(omega_plus: T, omega_minus: T) -> (T, T) {
    let half = T::lit(0.5);
    (
        half * (omega_plus + omega_minus),
        half * (omega_plus - omega_minus),
    )
}
