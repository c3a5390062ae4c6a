//! Test pulses: rectangular, gaussian and truncated gaussian.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::fft;
use crate::signal::{Signal, Spectrum};
use crate::{Error, Result};

/// Upper bound on the number of samples [`sample`] will produce.
pub const MAX_SAMPLES: usize = 10_000_001;

/// Tolerance, in units of `dt`, for a grid point to count as sitting on an edge.
const EDGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseKind {
    /// `U(t - t_start) - U(t - t_start - T_w)`, left-closed.
    Rectangular,
    /// `exp(-(t - t0)^2 / 2 T_w^2)` on the whole line.
    Gaussian,
    /// `u(t) exp(-(t - t0)^2 / 2 T_w^2)`, switched on at `t = 0`.
    ///
    /// `ramp = 0` gives a sharp unit step; `ramp > 0` replaces it with a
    /// raised-cosine rise over `[0, ramp]`.
    TruncatedGaussian { ramp: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    pub kind: PulseKind,
    /// `T_w`, seconds.
    pub width: f64,
    /// Rising edge for rectangular pulses, center `t0` for gaussians.
    pub offset: f64,
    pub amplitude: f64,
}

impl PulseSpec {
    pub fn rectangular(width: f64, start: f64) -> Self {
        PulseSpec {
            kind: PulseKind::Rectangular,
            width,
            offset: start,
            amplitude: 1.0,
        }
    }

    pub fn gaussian(width: f64, center: f64) -> Self {
        PulseSpec {
            kind: PulseKind::Gaussian,
            width,
            offset: center,
            amplitude: 1.0,
        }
    }

    pub fn truncated_gaussian(width: f64, center: f64) -> Self {
        PulseSpec {
            kind: PulseKind::TruncatedGaussian { ramp: 0.0 },
            width,
            offset: center,
            amplitude: 1.0,
        }
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0) || !self.width.is_finite() {
            return Err(Error::invalid("T_w", "pulse width must be finite and > 0"));
        }
        if !self.amplitude.is_finite() {
            return Err(Error::invalid("amplitude", "must be finite"));
        }
        if !self.offset.is_finite() {
            return Err(Error::invalid("offset", "must be finite"));
        }
        if let PulseKind::TruncatedGaussian { ramp } = self.kind {
            if !(ramp >= 0.0) || !ramp.is_finite() {
                return Err(Error::invalid("ramp", "must be finite and >= 0"));
            }
        }
        Ok(())
    }

    /// Pointwise value. `edge_tol` absorbs grid round-off at discontinuities.
    fn value(&self, t: f64, edge_tol: f64) -> f64 {
        let gauss = |t: f64| {
            let x = (t - self.offset) / self.width;
            libm::exp(-0.5 * x * x)
        };
        let v = match self.kind {
            PulseKind::Rectangular => {
                let on = t >= self.offset - edge_tol;
                let off = t >= self.offset + self.width - edge_tol;
                if on && !off {
                    1.0
                } else {
                    0.0
                }
            }
            PulseKind::Gaussian => gauss(t),
            PulseKind::TruncatedGaussian { ramp } => {
                let step = if t < -edge_tol {
                    0.0
                } else if ramp == 0.0 || t >= ramp {
                    1.0
                } else {
                    0.5 * (1.0 - libm::cos(PI * t.max(0.0) / ramp))
                };
                step * gauss(t)
            }
        };
        self.amplitude * v
    }

    pub fn value_at(&self, t: f64) -> f64 {
        self.value(t, 0.0)
    }
}

/// Sample a pulse on `t_begin + k dt`, `k = 0..` while `t <= t_end`.
pub fn sample(spec: &PulseSpec, dt: f64, t_begin: f64, t_end: f64) -> Result<Signal> {
    spec.validate()?;
    if !t_begin.is_finite() || !t_end.is_finite() {
        return Err(Error::invalid("window", "bounds must be finite"));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::invalid("dt", "must be finite and > 0"));
    }
    if !(t_begin < t_end) {
        return Err(Error::invalid("window", "requires t_begin < t_end"));
    }
    let steps = (t_end - t_begin) / dt;
    if steps > (MAX_SAMPLES - 1) as f64 {
        return Err(Error::invalid("window", "more than 1e7 samples requested"));
    }
    let len = libm::floor(steps + EDGE_TOL) as usize + 1;
    if len < 2 {
        return Err(Error::invalid(
            "window",
            "window shorter than one sample interval",
        ));
    }
    let tol = EDGE_TOL * dt;
    Signal::from_fn(len, dt, t_begin, |t| spec.value(t, tol))
}

/// Continuous Fourier transform estimate `V(w) = int v(t) exp(-i w t) dt`.
///
/// The signal is zero-padded to a power of two of at least
/// `pad_factor * len` samples; the grid spacing is `2 pi / (N dt)`.
pub fn spectrum(sig: &Signal, pad_factor: usize) -> Result<Spectrum> {
    if !(1..=64).contains(&pad_factor) {
        return Err(Error::invalid("pad_factor", "must be in 1..=64"));
    }
    let n = fft::padded_len(sig.len(), pad_factor)
        .ok_or(Error::invalid("pad_factor", "padded length overflows"))?
        .max(2);
    let bins = fft::forward_real(sig.samples(), n);
    let half = n / 2;
    let domega = 2.0 * PI / (n as f64 * sig.dt());
    let values: Vec<Complex64> = (-(half as isize)..=half as isize)
        .map(|j| {
            let k = j.rem_euclid(n as isize) as usize;
            let w = j as f64 * domega;
            let shift = Complex64::new(libm::cos(w * sig.t0()), -libm::sin(w * sig.t0()));
            bins[k] * shift * sig.dt()
        })
        .collect();
    Ok(Spectrum::new(values, domega))
}
