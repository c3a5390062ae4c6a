//! Mach-Zehnder interferometer dark port acting on slowly varying envelopes.
//!
//! With beam-splitter reflectivity `R = 1/2 - eps` and a path-difference
//! delay `tau`, the dark port carries `(1 - R) E(t) - R E(t - tau)`. For
//! `tau` small against the envelope width this is approximately
//! `2 eps (1 + (tau / 4 eps) d/dt) E(t)`: an attenuated, advanced pulse.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::interp;
use crate::signal::Signal;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MziConfig {
    /// Path-difference delay, seconds.
    pub tau: f64,
    /// Reflectivity offset below one half.
    pub epsilon: f64,
}

impl MziConfig {
    /// `eps = 0` is accepted: it is the perfectly balanced interferometer.
    pub fn new(tau: f64, epsilon: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::invalid("tau", "must be finite and > 0"));
        }
        if !(0.0..0.5).contains(&epsilon) {
            return Err(Error::invalid("epsilon", "must be in [0, 1/2)"));
        }
        Ok(MziConfig { tau, epsilon })
    }

    pub fn reflectivity(&self) -> f64 {
        0.5 - self.epsilon
    }

    /// Steady-state transmission of the dark port, `2 eps`.
    pub fn dc_transmission(&self) -> f64 {
        2.0 * self.epsilon
    }

    /// `tau / T_w`; the first-order advancement formula needs this small.
    pub fn validity_ratio(&self, width: f64) -> f64 {
        self.tau / width
    }

    /// `(1 - R) - R exp(-i w tau)`
    pub fn response(&self, omega: f64) -> Complex64 {
        let r = self.reflectivity();
        let phase = omega * self.tau;
        Complex64::new(1.0 - r, 0.0) - Complex64::new(libm::cos(phase), -libm::sin(phase)) * r
    }
}

/// First-order prediction `tau / (4 eps)`; infinite for `eps = 0`.
pub fn first_order_advancement(cfg: &MziConfig) -> f64 {
    cfg.tau / (4.0 * cfg.epsilon)
}

/// Dark-port envelope for input envelope `env`.
///
/// The output grid drops the leading samples whose delayed term would need
/// input from before the window. When `tau` is not a whole number of
/// samples, samples whose interpolation stencil is incomplete are dropped
/// at both ends.
pub fn dark_port(env: &Signal, cfg: &MziConfig) -> Result<Signal> {
    let dt = env.dt();
    if cfg.tau < dt * (1.0 - 1e-9) {
        return Err(Error::invalid(
            "tau",
            "delay must be at least one sample interval",
        ));
    }
    if cfg.tau >= env.duration() {
        return Err(Error::invalid("tau", "delay exceeds the signal duration"));
    }
    let shift = cfg.tau / dt;
    let whole = libm::round(shift);
    // A fractional delay also loses the samples whose interpolation
    // stencil runs off either end of the window.
    let (skip, end) = if (shift - whole).abs() < 1e-9 {
        (whole as usize, env.len())
    } else {
        (
            libm::ceil(shift) as usize + interp::HALF_WIDTH,
            env.len().saturating_sub(interp::HALF_WIDTH),
        )
    };
    if skip >= end {
        return Err(Error::invalid("tau", "delay exceeds the signal duration"));
    }
    let r = cfg.reflectivity();
    let samples: Vec<f64> = (skip..end)
        .map(|k| {
            let delayed = interp::value_at_index(env.samples(), k as f64 - shift);
            (1.0 - r) * env.samples()[k] - r * delayed
        })
        .collect();
    Signal::new(samples, dt, env.time(skip))
}
