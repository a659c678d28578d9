//! Uniform time grids and composite Simpson quadrature on them.

use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `intervals + 1` equally spaced points on [start, start + duration].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub start: f64,
    pub duration: f64,
    pub intervals: usize,
}

impl TimeGrid {
    pub fn new(start: f64, duration: f64, intervals: usize) -> Result<Self> {
        if !start.is_finite() || !duration.is_finite() || duration < 0.0 {
            return Err(Error::domain(format!(
                "time grid needs a finite start and non-negative duration, got [{start}, +{duration}]"
            )));
        }
        if intervals == 0 {
            return Err(Error::domain("time grid needs at least one interval"));
        }
        Ok(Self {
            start,
            duration,
            intervals,
        })
    }

    /// Grid on [0, duration].
    pub fn over(duration: f64, intervals: usize) -> Result<Self> {
        Self::new(0.0, duration, intervals)
    }

    pub fn step(&self) -> f64 {
        self.duration / self.intervals as f64
    }

    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, i: usize) -> f64 {
        if i == self.intervals {
            self.start + self.duration
        } else {
            self.start + self.step() * i as f64
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.time(i))
    }

    /// The same interval with twice the resolution.
    pub fn refined(&self) -> Self {
        Self {
            intervals: self.intervals * 2,
            ..*self
        }
    }

    pub fn require_even(&self) -> Result<()> {
        if !self.intervals.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "composite Simpson needs an even interval count, got {}",
                self.intervals
            )));
        }
        Ok(())
    }
}

/// Composite Simpson rule over samples with uniform spacing `h`.
pub fn simpson<T>(samples: &[T], h: f64) -> Result<T>
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T>,
{
    let n = samples.len();
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::domain(format!(
            "composite Simpson needs an odd number (>= 3) of samples, got {n}"
        )));
    }
    let mut odd = samples[1];
    let mut even = samples[2] * 0.0;
    for i in (3..n - 1).step_by(2) {
        odd = odd + samples[i];
    }
    for i in (2..n - 1).step_by(2) {
        even = even + samples[i];
    }
    Ok((samples[0] + samples[n - 1] + odd * 4.0 + even * 2.0) * (h / 3.0))
}

/// ∫ f over the grid.
pub fn integrate<T, F>(grid: &TimeGrid, f: F) -> Result<T>
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T>,
    F: Fn(f64) -> T,
{
    grid.require_even()?;
    let samples: Vec<T> = grid.times().map(f).collect();
    simpson(&samples, grid.step())
}
