//! Uniformly sampled signals and their spectra.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// A real time series on the grid `t_k = t0 + k dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    dt: f64,
    t0: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, dt: f64, t0: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("samples", "signal must be nonempty"));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::invalid(
                "dt",
                "sample interval must be finite and > 0",
            ));
        }
        if !t0.is_finite() {
            return Err(Error::invalid("t0", "start time must be finite"));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("samples", "all samples must be finite"));
        }
        Ok(Signal { samples, dt, t0 })
    }

    /// Sample `f` on `t0 + k dt` for `k < len`.
    pub fn from_fn(len: usize, dt: f64, t0: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let samples = (0..len).map(|k| f(t0 + k as f64 * dt)).collect();
        Self::new(samples, dt, t0)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |k| self.time(k))
    }

    pub fn duration(&self) -> f64 {
        (self.len() - 1) as f64 * self.dt
    }

    pub fn end_time(&self) -> f64 {
        self.time(self.len() - 1)
    }

    /// `sum v^2 dt`
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|v| v * v).sum::<f64>() * self.dt
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Same grid, new samples.
    pub fn with_samples(&self, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != self.len() {
            return Err(Error::invalid("samples", "length must match the grid"));
        }
        Self::new(samples, self.dt, self.t0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Signal {
            samples: self.samples.iter().map(|v| v * factor).collect(),
            ..*self
        }
    }

    pub fn shifted_in_time(&self, by: f64) -> Self {
        Signal {
            t0: self.t0 + by,
            samples: self.samples.clone(),
            ..*self
        }
    }

    pub(crate) fn same_grid(&self, other: &Signal) -> bool {
        self.len() == other.len()
            && (self.dt - other.dt).abs() <= 1e-12 * self.dt
            && (self.t0 - other.t0).abs() <= 1e-9 * self.dt
    }

    /// `alpha self + beta other`; both signals must share a grid.
    pub fn linear_combination(&self, alpha: f64, other: &Signal, beta: f64) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(Error::invalid("other", "signals must share a time grid"));
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Self::new(samples, self.dt, self.t0)
    }
}

/// Continuous-transform estimate on the symmetric grid `w_j = j domega`,
/// `j = -K..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<Complex64>,
    domega: f64,
}

impl Spectrum {
    pub(crate) fn new(values: Vec<Complex64>, domega: f64) -> Self {
        debug_assert!(values.len() % 2 == 1);
        Spectrum { values, domega }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn domega(&self) -> f64 {
        self.domega
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of `w = 0`.
    pub fn center(&self) -> usize {
        self.values.len() / 2
    }

    pub fn omega(&self, i: usize) -> f64 {
        (i as f64 - self.center() as f64) * self.domega
    }

    pub fn omegas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.omega(i))
    }

    /// `(1/2pi) sum |V|^2 domega`, with half weight on the two Nyquist
    /// endpoints (they are the same DFT bin).
    pub fn energy(&self) -> f64 {
        let last = self.values.len() - 1;
        let sum: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let w = if i == 0 || i == last { 0.5 } else { 1.0 };
                w * v.norm_sqr()
            })
            .sum();
        sum * self.domega / (2.0 * PI)
    }

    /// `max |V(w) - conj V(-w)| / max |V|`; zero for real signals.
    pub fn hermitian_asymmetry(&self) -> f64 {
        let peak = self.values.iter().fold(0.0_f64, |m, v| m.max(v.norm()));
        if peak == 0.0 {
            return 0.0;
        }
        let n = self.values.len();
        (0..n)
            .map(|i| (self.values[i] - self.values[n - 1 - i].conj()).norm())
            .fold(0.0, f64::max)
            / peak
    }
}
